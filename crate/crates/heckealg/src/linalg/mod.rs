//! Dense exact linear algebra over finite fields.

mod mat;

pub use mat::{axpy, dot, Mat};

use crate::error::{invalid, Error, Result};
use crate::ff::{poly_factor, Fe, Field, Poly};

/// A subspace given by an embedding C (ambient x sub) and a projection D
/// (sub x ambient) with D*C = 1. When C comes from a reduced echelon basis
/// the projection is a coordinate selection, recorded in `sel`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseChangeTuple {
    pub c: Mat,
    pub d: Mat,
    sel: Option<Vec<usize>>,
}

impl BaseChangeTuple {
    pub fn identity(field: &Field, n: usize) -> Self {
        BaseChangeTuple { c: Mat::identity(field, n), d: Mat::identity(field, n), sel: Some((0..n).collect()) }
    }

    /// Subspace spanned by the rows of `m`.
    pub fn from_row_span(m: &Mat) -> Self {
        let (r, piv) = m.rref();
        BaseChangeTuple::from_rref(&r, piv)
    }

    /// Subspace spanned by the columns of `m`.
    pub fn from_col_span(m: &Mat) -> Self {
        BaseChangeTuple::from_row_span(&m.transpose())
    }

    fn from_rref(r: &Mat, piv: Vec<usize>) -> Self {
        let c = r.transpose();
        let n = r.cols();
        let mut d = Mat::zero(r.field(), piv.len(), n);
        for (i, &p) in piv.iter().enumerate() {
            d.set(i, p, 1);
        }
        BaseChangeTuple { c, d, sel: Some(piv) }
    }

    pub fn new(c: Mat, d: Mat) -> Self {
        BaseChangeTuple { c, d, sel: None }
    }

    pub fn dim(&self) -> usize {
        self.c.cols()
    }
    pub fn ambient_dim(&self) -> usize {
        self.c.rows()
    }
    pub fn field(&self) -> &Field {
        self.c.field()
    }

    /// D * x for a matrix x with ambient-dimension rows.
    pub fn project(&self, x: &Mat) -> Mat {
        match &self.sel {
            Some(s) => x.select_rows(s),
            None => self.d.mul(x),
        }
    }

    pub fn project_vec(&self, v: &[Fe]) -> Vec<Fe> {
        match &self.sel {
            Some(s) => s.iter().map(|&i| v[i]).collect(),
            None => self.d.mul_vec(v),
        }
    }

    /// s then t: first restrict to s, then to t inside s-coordinates.
    pub fn compose(&self, t: &BaseChangeTuple) -> BaseChangeTuple {
        let c = self.c.mul(&t.c);
        let d = t.project(&self.d);
        let sel = match (&self.sel, &t.sel) {
            (Some(a), Some(b)) => Some(b.iter().map(|&i| a[i]).collect()),
            _ => None,
        };
        BaseChangeTuple { c, d, sel }
    }
}

/// D*M*C, after checking that the column span of C is M-invariant.
pub fn base_change(m: &Mat, t: &BaseChangeTuple) -> Result<Mat> {
    let mc = m.mul(&t.c);
    let r = t.project(&mc);
    if t.c.mul(&r) != mc {
        return Err(Error::InvarianceViolation);
    }
    Ok(r)
}

/// Null space {v : M v = 0}.
pub fn kernel(m: &Mat) -> BaseChangeTuple {
    let f = m.field();
    let n = m.cols();
    let (r, piv) = m.rref();
    let mut is_piv = vec![false; n];
    for &p in &piv {
        is_piv[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&j| !is_piv[j]).collect();
    let mut c = Mat::zero(f, n, free.len());
    for (t, &j) in free.iter().enumerate() {
        c.set(j, t, 1);
        for (i, &p) in piv.iter().enumerate() {
            let v = r.get(i, j);
            if v != 0 {
                c.set(p, t, f.neg(v));
            }
        }
    }
    let mut d = Mat::zero(f, free.len(), n);
    for (t, &j) in free.iter().enumerate() {
        d.set(t, j, 1);
    }
    BaseChangeTuple { c, d, sel: Some(free) }
}

/// Reduce the columns of `a` modulo the subspace with reduced echelon row
/// basis `w` (pivots `piv`).
fn reduce_cols_mod(a: &Mat, w: &Mat, piv: &[usize]) -> Mat {
    let f = a.field();
    let mut t = a.transpose();
    for j in 0..t.rows() {
        let row = t.row_mut(j);
        for (i, &p) in piv.iter().enumerate() {
            let c = row[p];
            if c != 0 {
                axpy(f, row, f.neg(c), w.row(i), 0);
            }
        }
    }
    t.transpose()
}

/// ker(A^n) for square A, by iterated preimages of ker(A).
pub fn generalized_kernel(a: &Mat) -> BaseChangeTuple {
    let mut k = kernel(a);
    if k.dim() == 0 {
        return k;
    }
    loop {
        let (w, piv) = k.c.transpose().rref();
        let red = reduce_cols_mod(a, &w, &piv);
        let k2 = kernel(&red);
        if k2.dim() == k.dim() {
            return BaseChangeTuple::from_col_span(&k.c);
        }
        k = k2;
    }
}

/// Minimal polynomial of v under T: the monic relation among v, Tv, ... of
/// least degree.
pub fn min_poly_vector(t: &Mat, v: &[Fe]) -> Poly {
    let f = t.field();
    let mut basis: Vec<(Vec<Fe>, usize, Vec<Fe>)> = Vec::new(); // (reduced vector, pivot, combination)
    let mut cur = v.to_vec();
    let mut k = 0;
    loop {
        let mut red = cur.clone();
        let mut comb = vec![0; k + 1];
        comb[k] = 1;
        for (b, piv, bc) in &basis {
            let c = red[*piv];
            if c != 0 {
                let nc = f.neg(c);
                axpy(f, &mut red, nc, b, 0);
                for (x, &y) in comb.iter_mut().zip(bc) {
                    *x = f.add(*x, f.mul(nc, y));
                }
            }
        }
        match red.iter().position(|&x| x != 0) {
            None => return Poly::new(f, comb),
            Some(piv) => {
                let inv = f.inv(red[piv]);
                red.iter_mut().for_each(|x| *x = f.mul(*x, inv));
                comb.iter_mut().for_each(|x| *x = f.mul(*x, inv));
                basis.push((red, piv, comb));
            }
        }
        cur = t.mul_vec(&cur);
        k += 1;
    }
}

/// Minimal polynomial of a square matrix as an lcm of minimal polynomials
/// of standard basis vectors, skipping vectors already in the union of the
/// cyclic subspaces seen so far.
pub fn min_poly_matrix(t: &Mat) -> Result<Poly> {
    if !t.is_square() {
        return invalid("minimal polynomial of a non-square matrix");
    }
    let f = t.field();
    let n = t.rows();
    let mut m = Poly::one(f);
    let mut span = Echelon::new(f, n);
    for i in 0..n {
        if span.dim() == n {
            break;
        }
        let mut e = vec![0; n];
        e[i] = 1;
        if span.contains(&e) {
            continue;
        }
        let mp = min_poly_vector(t, &e);
        let mut v = e;
        for _ in 0..mp.deg() {
            span.insert(&v);
            v = t.mul_vec(&v);
        }
        m = m.lcm(&mp);
    }
    Ok(m)
}

/// Characteristic polynomial via reduction to Hessenberg form.
pub fn char_poly(t: &Mat) -> Result<Poly> {
    if !t.is_square() {
        return invalid("characteristic polynomial of a non-square matrix");
    }
    let f = t.field().clone();
    let n = t.rows();
    let mut h = t.clone();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m + 1..=n).find(|&i| h.get(i - 1, m - 1) != 0) else { continue };
        let i = i - 1;
        if i != m {
            for j in 0..n {
                let (a, b) = (h.get(i, j), h.get(m, j));
                h.set(i, j, b);
                h.set(m, j, a);
            }
            for j in 0..n {
                let (a, b) = (h.get(j, i), h.get(j, m));
                h.set(j, i, b);
                h.set(j, m, a);
            }
        }
        let pv = h.get(m, m - 1);
        if pv == 0 {
            continue;
        }
        let inv = f.inv(pv);
        for i in m + 1..n {
            let u = f.mul(h.get(i, m - 1), inv);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let v = f.sub(h.get(i, j), f.mul(u, h.get(m, j)));
                h.set(i, j, v);
            }
            for j in 0..n {
                let v = f.add(h.get(j, m), f.mul(u, h.get(j, i)));
                h.set(j, m, v);
            }
        }
    }
    // Recurrence on leading principal minors of x - H.
    let mut ps: Vec<Poly> = vec![Poly::one(&f)];
    for m in 1..=n {
        let x_minus = Poly::new(&f, vec![f.neg(h.get(m - 1, m - 1)), 1]);
        let mut pm = x_minus.mul(&ps[m - 1]);
        let mut prod = 1u64;
        for i in 1..m {
            prod = f.mul(prod, h.get(m - i, m - i - 1));
            let coef = f.mul(prod, h.get(m - i - 1, m - 1));
            pm = pm.sub(&ps[m - i - 1].scale(coef));
        }
        ps.push(pm);
    }
    Ok(ps.pop().unwrap())
}

/// Incrementally maintained semi-echelon basis for membership tests.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    n: usize,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: &Field, n: usize) -> Self {
        Echelon { field: field.clone(), n, rows: vec![], pivots: vec![] }
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn reduce(&self, v: &mut [Fe]) {
        let f = &self.field;
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                axpy(f, v, f.neg(c), r, p);
            }
        }
    }
    pub fn contains(&self, v: &[Fe]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }
    /// Insert v; returns false if v was already in the span.
    pub fn insert(&mut self, v: &[Fe]) -> bool {
        assert_eq!(v.len(), self.n);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|&x| x != 0) else { return false };
        let f = &self.field;
        let inv = f.inv(w[p]);
        w.iter_mut().for_each(|x| *x = f.mul(*x, inv));
        self.rows.push(w);
        self.pivots.push(p);
        true
    }
}

/// Vectors generating F^n as a module over the algebra spanned by the
/// commuting matrices `ops`, chosen greedily among unit vectors.
pub fn module_generators(field: &Field, n: usize, ops: &[Mat]) -> Vec<Vec<Fe>> {
    let mut span = Echelon::new(field, n);
    let mut out = Vec::new();
    for i in 0..n {
        if span.dim() == n {
            break;
        }
        let mut e = vec![0; n];
        e[i] = 1;
        if !span.insert(&e) {
            continue;
        }
        out.push(e.clone());
        let mut queue = vec![e];
        while let Some(v) = queue.pop() {
            for g in ops {
                let w = g.mul_vec(&v);
                if span.insert(&w) {
                    queue.push(w);
                }
            }
        }
    }
    out
}

/// Apply a matrix to each length-n block of a concatenation of vectors.
pub fn apply_blocks(g: &Mat, x: &[Fe]) -> Vec<Fe> {
    let n = g.cols();
    x.chunks(n).flat_map(|c| g.mul_vec(c)).collect()
}

/// Dimension of the unital algebra generated by commuting n x n matrices.
/// Elements are represented by their images on module generators, which is
/// faithful because the algebra is commutative.
pub fn algebra_dim(field: &Field, n: usize, ops: &[Mat]) -> usize {
    if n == 0 {
        return 0;
    }
    let gens = module_generators(field, n, ops);
    let one: Vec<Fe> = gens.concat();
    let mut ech = Echelon::new(field, one.len());
    ech.insert(&one);
    let mut queue = vec![one];
    while let Some(x) = queue.pop() {
        for g in ops {
            let y = apply_blocks(g, &x);
            if ech.insert(&y) {
                queue.push(y);
            }
        }
    }
    ech.dim()
}

/// A unital commutative matrix algebra. The basis is kept in reduced
/// echelon form with respect to the row-major flattening, so coordinates of
/// an algebra element are its entries at `pivots`.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    pub field: Field,
    pub size: usize,
    pub basis: Vec<Mat>,
    pub pivots: Vec<(usize, usize)>,
    pub gens: Vec<Mat>,
}

impl AlgebraBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of an element known to lie in the algebra.
    pub fn coords(&self, x: &Mat) -> Vec<Fe> {
        self.pivots.iter().map(|&(r, c)| x.get(r, c)).collect()
    }

    /// Coordinates of the product a*b of two algebra elements, using only
    /// the entries at pivot positions.
    pub fn coords_of_product(&self, a: &Mat, b: &Mat) -> Vec<Fe> {
        let f = &self.field;
        let n = self.size;
        self.pivots
            .iter()
            .map(|&(r, c)| {
                let mut s = 0;
                for t in 0..n {
                    let x = a.get(r, t);
                    if x != 0 {
                        s = f.add(s, f.mul(x, b.get(t, c)));
                    }
                }
                s
            })
            .collect()
    }

    pub fn element(&self, coords: &[Fe]) -> Mat {
        let f = &self.field;
        let mut m = Mat::zero(f, self.size, self.size);
        for (b, &c) in self.basis.iter().zip(coords) {
            if c != 0 {
                m = m.add(&b.scale(c));
            }
        }
        m
    }
}

fn flatten(m: &Mat) -> Vec<Fe> {
    m.data().to_vec()
}

/// The unital algebra generated by commuting square matrices.
pub fn spin_algebra(gens: &[Mat]) -> Result<AlgebraBasis> {
    let Some(g0) = gens.first() else { return invalid("no generators given") };
    let f = g0.field().clone();
    let n = g0.rows();
    if gens.iter().any(|g| !g.is_square() || g.rows() != n) {
        return invalid("generators must be square of equal size");
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if !gens[i].commutes_with(&gens[j]) {
                return invalid("generators do not commute");
            }
        }
    }
    spin_unchecked(&f, n, gens)
}

pub(crate) fn spin_unchecked(f: &Field, n: usize, gens: &[Mat]) -> Result<AlgebraBasis> {
    let mut ech = Echelon::new(f, n * n);
    let mut elems = vec![Mat::identity(f, n)];
    ech.insert(&flatten(&elems[0]));
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let p = g.mul(&elems[i]);
            if ech.insert(&flatten(&p)) {
                elems.push(p);
            }
        }
        i += 1;
    }
    let flat: Vec<Vec<Fe>> = elems.iter().map(flatten).collect();
    let (r, piv) = Mat::from_rows(f, &flat).rref();
    let basis: Vec<Mat> = (0..r.rows()).map(|i| Mat::from_vec(f, n, n, r.row(i).to_vec())).collect();
    let pivots = piv.iter().map(|&p| (p / n, p % n)).collect();
    Ok(AlgebraBasis { field: f.clone(), size: n, basis, pivots, gens: gens.to_vec() })
}

/// Structure constants: `table[i]` is the matrix of multiplication by the
/// i-th basis element in the algebra's own basis.
pub fn structure_matrices(a: &AlgebraBasis) -> Vec<Mat> {
    let f = &a.field;
    let d = a.dim();
    a.basis
        .iter()
        .map(|bi| {
            let cols: Vec<Vec<Fe>> = a.basis.iter().map(|bj| a.coords_of_product(bi, bj)).collect();
            Mat::from_cols(f, d, &cols)
        })
        .collect()
}

/// Matrices of multiplication by basis elements, as a new algebra basis.
pub fn regular_representation(a: &AlgebraBasis) -> Result<AlgebraBasis> {
    let f = &a.field;
    let d = a.dim();
    let table = structure_matrices(a);
    let gens: Vec<Mat> = a
        .gens
        .iter()
        .map(|g| {
            let c = a.coords(g);
            let mut m = Mat::zero(f, d, d);
            for (t, &x) in table.iter().zip(&c) {
                if x != 0 {
                    m = m.add(&t.scale(x));
                }
            }
            m
        })
        .collect();
    let flat: Vec<Vec<Fe>> = table.iter().map(flatten).collect();
    let (r, piv) = Mat::from_rows(f, &flat).rref();
    let basis: Vec<Mat> = (0..r.rows()).map(|i| Mat::from_vec(f, d, d, r.row(i).to_vec())).collect();
    let pivots = piv.iter().map(|&p| (p / d, p % d)).collect();
    Ok(AlgebraBasis { field: f.clone(), size: d, basis, pivots, gens })
}

/// One joint primary component of a commuting family.
#[derive(Clone, Debug)]
pub struct Component {
    pub space: BaseChangeTuple,
    /// The irreducible attached to each generator on this component.
    pub factors: Vec<Poly>,
}

/// f-primary part of T inside the subspace `sub`, as a subspace of `sub`.
pub fn primary_part(t_restricted: &Mat, f: &Poly) -> BaseChangeTuple {
    generalized_kernel(&t_restricted.eval_poly(f))
}

/// Joint primary decomposition of commuting matrices. With `targets`, only
/// the component whose irreducible for generator i is targets[i] is kept.
pub fn primary_components(gens: &[Mat], targets: Option<&[Poly]>) -> Result<Vec<Component>> {
    let Some(g0) = gens.first() else { return invalid("no generators given") };
    let f = g0.field();
    let n = g0.rows();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if !gens[i].commutes_with(&gens[j]) {
                return invalid("generators do not commute");
            }
        }
    }
    if let Some(t) = targets {
        if t.len() != gens.len() {
            return invalid("one target per generator expected");
        }
    }
    let mut comps = vec![Component { space: BaseChangeTuple::identity(f, n), factors: vec![] }];
    for (gi, g) in gens.iter().enumerate() {
        let mut next = Vec::new();
        for comp in comps {
            if comp.space.dim() == 0 {
                continue;
            }
            let r = base_change(g, &comp.space)?;
            let wanted: Vec<Poly> = match targets {
                Some(t) => vec![t[gi].monic()],
                None => poly_factor(&min_poly_matrix(&r)?)?.factors.into_iter().map(|(p, _)| p).collect(),
            };
            for fac in wanted {
                let part = primary_part(&r, &fac);
                if part.dim() == 0 && targets.is_none() {
                    continue;
                }
                let mut factors = comp.factors.clone();
                factors.push(fac);
                next.push(Component { space: comp.space.compose(&part), factors });
            }
        }
        comps = next;
    }
    sort_components(&mut comps);
    Ok(comps)
}

pub fn sort_components(comps: &mut [Component]) {
    comps.sort_by(|a, b| {
        for (x, y) in a.factors.iter().zip(&b.factors) {
            let o = x.canonical_cmp(y);
            if o.is_ne() {
                return o;
            }
        }
        a.space.dim().cmp(&b.space.dim())
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::prime_field;

    #[test]
    fn kernels() {
        let f2 = prime_field(2);
        assert_eq!(kernel(&Mat::zero(&f2, 2, 2)).dim(), 2);
        assert_eq!(kernel(&Mat::identity(&f2, 2)).dim(), 0);
        let k = kernel(&Mat::from_rows(&f2, &[vec![1, 1], vec![1, 1]]));
        assert_eq!(k.dim(), 1);
        assert_eq!(k.c.col(0), vec![1, 1]);
    }

    #[test]
    fn min_polys_of_standard_matrices() {
        let f = prime_field(7);
        assert_eq!(min_poly_matrix(&Mat::identity(&f, 4)).unwrap().coeffs(), &[6, 1]);
        let mut j = Mat::zero(&f, 3, 3);
        j.set(0, 1, 1);
        j.set(1, 2, 1);
        assert_eq!(min_poly_matrix(&j).unwrap().coeffs(), &[0, 0, 0, 1]);
        // companion matrix of x^3 + 2x + 5
        let comp = Mat::from_rows(&f, &[vec![0, 0, 2], vec![1, 0, 5], vec![0, 1, 0]]);
        assert_eq!(min_poly_matrix(&comp).unwrap().coeffs(), &[5, 2, 0, 1]);
        assert_eq!(char_poly(&comp).unwrap().coeffs(), &[5, 2, 0, 1]);
        assert!(min_poly_matrix(&Mat::zero(&f, 2, 3)).is_err());
    }

    #[test]
    fn base_change_checks_invariance() {
        let f = prime_field(5);
        let m = Mat::from_rows(&f, &[vec![1, 0], vec![0, 2]]);
        let axis = BaseChangeTuple::from_col_span(&Mat::from_rows(&f, &[vec![1], vec![0]]));
        assert_eq!(base_change(&m, &axis).unwrap(), Mat::from_rows(&f, &[vec![1]]));
        let diag = BaseChangeTuple::from_col_span(&Mat::from_rows(&f, &[vec![1], vec![1]]));
        assert!(matches!(base_change(&m, &diag), Err(Error::InvarianceViolation)));
        assert_eq!(base_change(&m, &BaseChangeTuple::identity(&f, 2)).unwrap(), m);
    }

    #[test]
    fn spin_small_algebras() {
        let f = prime_field(2);
        assert_eq!(spin_algebra(&[Mat::identity(&f, 3)]).unwrap().dim(), 1);
        let mut nil = Mat::zero(&f, 2, 2);
        nil.set(0, 1, 1);
        let a = spin_algebra(&[nil.clone()]).unwrap();
        assert_eq!(a.dim(), 2);
        let r = regular_representation(&a).unwrap();
        assert_eq!(r.dim(), 2);
        assert_eq!(min_poly_matrix(&r.gens[0]).unwrap().coeffs(), &[0, 0, 1]);
        let x = Mat::from_rows(&f, &[vec![0, 1], vec![1, 0]]);
        assert!(spin_algebra(&[nil, x]).is_err());
    }

    // F2[x,y,z]/(x,y,z)^2 in its regular representation on the basis 1,x,y,z.
    fn four_dim_algebra() -> Vec<Mat> {
        let f = prime_field(2);
        (1..4)
            .map(|v| {
                let mut m = Mat::zero(&f, 4, 4);
                m.set(v, 0, 1);
                m
            })
            .collect()
    }

    #[test]
    fn spin_of_the_four_dimensional_algebra() {
        let gens = four_dim_algebra();
        let a = spin_algebra(&gens).unwrap();
        assert_eq!(a.dim(), 4);
        let r = regular_representation(&a).unwrap();
        assert_eq!(r.dim(), 4);
        for g in &r.gens {
            assert_eq!(min_poly_matrix(g).unwrap().coeffs(), &[0, 0, 1]);
        }
        assert_eq!(spin_algebra(&a.basis).unwrap().dim(), 4);
    }

    #[test]
    fn primary_components_of_diagonal() {
        let f = prime_field(3);
        let d = Mat::from_rows(&f, &[vec![0, 0], vec![0, 1]]);
        let comps = primary_components(std::slice::from_ref(&d), None).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].factors[0].coeffs(), &[0, 1]);
        assert_eq!(comps[1].factors[0].coeffs(), &[2, 1]);
        let only = primary_components(&[d], Some(&[Poly::linear(&f, 1)])).unwrap();
        assert_eq!(only.len(), 1);
        assert_eq!(only[0].space.dim(), 1);
    }

    #[test]
    fn generalized_kernel_of_jordan_blocks() {
        let f = prime_field(5);
        let mut a = Mat::zero(&f, 4, 4);
        a.set(0, 1, 1);
        a.set(1, 2, 1);
        a.set(3, 3, 2);
        assert_eq!(kernel(&a).dim(), 1);
        assert_eq!(generalized_kernel(&a).dim(), 3);
    }
}
