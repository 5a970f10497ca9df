//! Commutative Artin algebras over finite fields held by structure
//! constants: localisation, maximal ideal, Gorenstein defect, embedding
//! dimension, nilpotency order, residue field base change and affine
//! presentations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{make_field, poly_factor, Embedding, Fe, Field, Poly};
use crate::linalg::{
    axpy, kernel, min_poly_matrix, primary_components, structure_matrices, AlgebraBasis, BaseChangeTuple, Echelon, Mat,
};

/// An algebra with basis e_0..e_{d-1}; `mult[i]` is multiplication by e_i.
#[derive(Clone, Debug)]
pub struct StructAlgebra {
    pub field: Field,
    pub dim: usize,
    pub mult: Vec<Mat>,
    pub one: Vec<Fe>,
    /// Coordinates of a generating set (may be empty; then the basis is used).
    pub gens: Vec<Vec<Fe>>,
}

impl StructAlgebra {
    pub fn from_basis(a: &AlgebraBasis) -> StructAlgebra {
        let mult = structure_matrices(a);
        let one = a.coords(&Mat::identity(&a.field, a.size));
        let gens = a.gens.iter().map(|g| a.coords(g)).collect();
        StructAlgebra { field: a.field.clone(), dim: a.dim(), mult, one, gens }
    }

    /// Multiplication matrix of x.
    pub fn mult_matrix(&self, x: &[Fe]) -> Mat {
        let f = &self.field;
        let d = self.dim;
        let mut data = vec![0; d * d];
        for (m, &c) in self.mult.iter().zip(x) {
            if c != 0 {
                axpy(f, &mut data, c, m.data(), 0);
            }
        }
        Mat::from_vec(f, d, d, data)
    }

    pub fn mul(&self, x: &[Fe], y: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        let mut out = vec![0; self.dim];
        for (m, &c) in self.mult.iter().zip(x) {
            if c != 0 {
                let v = m.mul_vec(y);
                axpy(f, &mut out, c, &v, 0);
            }
        }
        out
    }

    pub fn pow(&self, x: &[Fe], mut e: u64) -> Vec<Fe> {
        let mut r = self.one.clone();
        let mut b = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }

    fn unit(&self, i: usize) -> Vec<Fe> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    fn generators(&self) -> Vec<Vec<Fe>> {
        if self.gens.is_empty() {
            (0..self.dim).map(|i| self.unit(i)).collect()
        } else {
            self.gens.clone()
        }
    }

    /// Matrices of the generators acting on the algebra.
    pub fn generator_matrices(&self) -> Vec<Mat> {
        self.generators().iter().map(|g| self.mult_matrix(g)).collect()
    }

    /// The ideal (subalgebra with its own unit) spanned by `t`, whose unit is `e`.
    fn restrict(&self, t: &BaseChangeTuple, e: &[Fe]) -> StructAlgebra {
        let f = &self.field;
        let d = t.dim();
        let mult = (0..d)
            .map(|a| {
                let v = t.c.col(a);
                t.project(&self.mult_matrix(&v).mul(&t.c))
            })
            .collect();
        let one = t.project_vec(e);
        let gens = self.gens.iter().map(|g| t.project_vec(&self.mul(g, e))).collect();
        StructAlgebra { field: f.clone(), dim: d, mult, one, gens }
    }

    /// Split along a direct sum of ideals; each part comes with the
    /// embedding of its coordinates into those of `self`.
    fn split(&self, parts: &[BaseChangeTuple]) -> Vec<(StructAlgebra, Mat)> {
        if parts.len() == 1 {
            return vec![(self.clone(), Mat::identity(&self.field, self.dim))];
        }
        let f = &self.field;
        let cols: Vec<Vec<Fe>> = parts.iter().flat_map(|t| (0..t.dim()).map(move |j| t.c.col(j))).collect();
        let y = solve(&Mat::from_cols(f, self.dim, &cols), &self.one);
        let mut off = 0;
        parts
            .iter()
            .map(|t| {
                let e = t.c.mul_vec(&y[off..off + t.dim()]);
                off += t.dim();
                (self.restrict(t, &e), t.c.clone())
            })
            .collect()
    }

    pub fn extend(&self, emb: &Embedding) -> StructAlgebra {
        let big = &emb.big;
        let map_mat = |m: &Mat| Mat::from_vec(big, m.rows(), m.cols(), m.data().iter().map(|&x| emb.apply(x)).collect());
        let map_vec = |v: &[Fe]| v.iter().map(|&x| emb.apply(x)).collect::<Vec<_>>();
        StructAlgebra {
            field: big.clone(),
            dim: self.dim,
            mult: self.mult.iter().map(map_mat).collect(),
            one: map_vec(&self.one),
            gens: self.gens.iter().map(|g| map_vec(g)).collect(),
        }
    }

    /// Regular representation as a matrix algebra.
    pub fn to_algebra_basis(&self) -> Result<AlgebraBasis> {
        let gens = self.generator_matrices();
        if gens.is_empty() {
            return crate::linalg::spin_algebra(&[Mat::identity(&self.field, self.dim)]);
        }
        crate::linalg::spin_algebra(&gens)
    }

    /// Radical, valid when every generator has a primary minimal polynomial
    /// (true on joint primary components): the ideal generated by f(g).
    fn radical_primary(&self) -> Result<BaseChangeTuple> {
        let f = &self.field;
        let d = self.dim;
        let mut cols: Vec<Vec<Fe>> = Vec::new();
        for g in self.generators() {
            let lg = self.mult_matrix(&g);
            let mp = min_poly_matrix(&lg)?;
            let fac = poly_factor(&mp)?;
            if fac.factors.len() != 1 {
                return Err(Error::NotLocal);
            }
            let h = &fac.factors[0].0;
            // h(g) by Horner on vectors
            let mut v = vec![0; d];
            for i in (0..=h.deg()).rev() {
                v = lg.mul_vec(&v);
                axpy(f, &mut v, h.coeff(i), &self.one, 0);
            }
            let l = self.mult_matrix(&v);
            cols.extend((0..d).map(|j| l.col(j)));
        }
        Ok(BaseChangeTuple::from_col_span(&Mat::from_cols(f, d, &cols)))
    }
}

/// The algebra generated by commuting operators on F^n, held by structure
/// constants. Basis elements are words in the operators; each is stored by
/// its images on a set of module generators of F^n.
#[derive(Clone, Debug)]
pub struct OperatorAlgebra {
    pub alg: StructAlgebra,
    ops: Vec<Mat>,
    n: usize,
    images: Vec<Vec<Fe>>,
}

/// Semi-echelon basis that also expresses its rows in the inserted vectors.
struct TrackedEchelon {
    field: Field,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
    trans: Vec<Vec<Fe>>,
}

impl TrackedEchelon {
    /// Coordinates of x in the inserted vectors, or None after inserting it.
    fn insert(&mut self, x: &[Fe]) -> Option<Vec<Fe>> {
        let f = self.field.clone();
        let k = self.rows.len();
        let mut w = x.to_vec();
        let mut coef = vec![0; k + 1];
        for i in 0..k {
            let c = w[self.pivots[i]];
            if c != 0 {
                axpy(&f, &mut w, f.neg(c), &self.rows[i], self.pivots[i]);
                axpy(&f, &mut coef, c, &self.trans[i], 0);
            }
        }
        match w.iter().position(|&x| x != 0) {
            None => {
                coef.pop();
                Some(coef)
            }
            Some(p) => {
                let inv = f.inv(w[p]);
                w.iter_mut().for_each(|x| *x = f.mul(*x, inv));
                // r_new = (x - sum c_i r_i) / w_p
                let mut t: Vec<Fe> = coef.iter().map(|&c| f.neg(f.mul(c, inv))).collect();
                t[k] = inv;
                self.rows.push(w);
                self.pivots.push(p);
                for tr in self.trans.iter_mut() {
                    tr.push(0);
                }
                self.trans.push(t);
                None
            }
        }
    }
}

impl OperatorAlgebra {
    pub fn new(field: &Field, n: usize, ops: &[Mat]) -> OperatorAlgebra {
        let f = field;
        let mg = crate::linalg::module_generators(f, n, ops);
        let one: Vec<Fe> = mg.concat();
        let mut ech = TrackedEchelon { field: f.clone(), rows: vec![], pivots: vec![], trans: vec![] };
        ech.insert(&one);
        let mut images = vec![one];
        let mut parent: Vec<(usize, usize)> = vec![(0, 0)];
        // columns of the generator matrices, padded later
        let mut cols: Vec<Vec<Vec<Fe>>> = vec![Vec::new(); ops.len()];
        let mut i = 0;
        while i < images.len() {
            for (gi, g) in ops.iter().enumerate() {
                let y = crate::linalg::apply_blocks(g, &images[i]);
                match ech.insert(&y) {
                    Some(c) => cols[gi].push(c),
                    None => {
                        let j = images.len();
                        let mut c = vec![0; j + 1];
                        c[j] = 1;
                        cols[gi].push(c);
                        images.push(y);
                        parent.push((gi, i));
                    }
                }
            }
            i += 1;
        }
        let d = images.len();
        let lg: Vec<Mat> = cols
            .into_iter()
            .map(|cs| {
                let cs: Vec<Vec<Fe>> = cs
                    .into_iter()
                    .map(|mut c| {
                        c.resize(d, 0);
                        c
                    })
                    .collect();
                Mat::from_cols(f, d, &cs)
            })
            .collect();
        let mut mult = vec![Mat::identity(f, d)];
        for &(gi, p) in &parent[1..] {
            let m = lg[gi].mul(&mult[p]);
            mult.push(m);
        }
        let mut one = vec![0; d];
        one[0] = 1;
        let gens = lg.iter().map(|m| m.col(0)).collect();
        OperatorAlgebra {
            alg: StructAlgebra { field: f.clone(), dim: d, mult, one, gens },
            ops: ops.to_vec(),
            n,
            images,
        }
    }

    pub fn dim(&self) -> usize {
        self.alg.dim
    }

    /// The subspace x F^n for an algebra element x (in basis coordinates).
    pub fn image_subspace(&self, x: &[Fe]) -> BaseChangeTuple {
        let f = &self.alg.field;
        let mut img = vec![0; self.images[0].len()];
        for (c, v) in x.iter().zip(&self.images) {
            axpy(f, &mut img, *c, v, 0);
        }
        let mut span = Echelon::new(f, self.n);
        let mut found = Vec::new();
        let mut queue: Vec<Vec<Fe>> = img.chunks(self.n.max(1)).map(|c| c.to_vec()).collect();
        while let Some(v) = queue.pop() {
            if !span.insert(&v) {
                continue;
            }
            for g in &self.ops {
                queue.push(g.mul_vec(&v));
            }
            found.push(v);
        }
        if found.is_empty() {
            return BaseChangeTuple::from_col_span(&Mat::zero(f, self.n, 0));
        }
        BaseChangeTuple::from_col_span(&Mat::from_cols(f, self.n, &found))
    }
}

/// Solve the square system m y = b (m invertible).
fn solve(m: &Mat, b: &[Fe]) -> Vec<Fe> {
    let f = m.field();
    let n = m.rows();
    let rows: Vec<Vec<Fe>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i]);
            r
        })
        .collect();
    let (r, piv) = Mat::from_rows(f, &rows).rref();
    assert_eq!(piv.len(), n, "system is singular");
    (0..n).map(|i| r.get(i, n)).collect()
}

/// Complement coordinates of a subspace W of F^d: a quotient basis by the
/// non-pivot positions of the echelon form.
fn quotient_positions(w: &BaseChangeTuple) -> (Echelon, Vec<usize>) {
    let f = w.field();
    let d = w.ambient_dim();
    let (r, piv) = w.c.transpose().rref();
    let mut ech = Echelon::new(f, d);
    for i in 0..r.rows() {
        ech.insert(r.row(i));
    }
    let free = (0..d).filter(|j| !piv.contains(j)).collect();
    (ech, free)
}

/// Number of local factors of a joint primary component, via the
/// Frobenius-fixed part of the semisimple quotient; also returns a lift of
/// a fixed element that is not a scalar, when one exists.
fn frobenius_split_element(a: &StructAlgebra, rad: &BaseChangeTuple) -> Option<Vec<Fe>> {
    let f = &a.field;
    let (ech, free) = quotient_positions(rad);
    let s = free.len();
    if s <= 1 {
        return None;
    }
    let q = f.q();
    let reduce = |v: &[Fe]| -> Vec<Fe> {
        let mut w = v.to_vec();
        ech.reduce(&mut w);
        free.iter().map(|&j| w[j]).collect()
    };
    // Frobenius minus identity on the quotient, basis = unit vectors at `free`
    let mut cols = Vec::with_capacity(s);
    for &j in &free {
        let e = a.unit(j);
        let mut img = reduce(&a.pow(&e, q));
        let k = free.iter().position(|&x| x == j).unwrap();
        img[k] = f.sub(img[k], 1);
        cols.push(img);
    }
    let fixed = kernel(&Mat::from_cols(f, s, &cols));
    if fixed.dim() <= 1 {
        return None;
    }
    let one_bar = reduce(&a.one);
    for t in 0..fixed.dim() {
        let v = fixed.c.col(t);
        // not a multiple of the unit
        let rank = Mat::from_rows(f, &[v.clone(), one_bar.clone()]).rank();
        if rank == 2 {
            let mut lift = vec![0; a.dim];
            for (k, &j) in free.iter().enumerate() {
                lift[j] = v[k];
            }
            return Some(lift);
        }
    }
    None
}

/// A local algebra with its maximal ideal and residue degree (over GF(p)).
#[derive(Clone, Debug)]
pub struct LocalAlgebra {
    pub alg: StructAlgebra,
    pub max_ideal: BaseChangeTuple,
    pub residue_degree: u32,
}

impl LocalAlgebra {
    pub fn new(alg: StructAlgebra) -> Result<LocalAlgebra> {
        let rad = alg.radical_primary()?;
        if frobenius_split_element(&alg, &rad).is_some() {
            return Err(Error::NotLocal);
        }
        let r = (alg.dim - rad.dim()) as u32;
        let residue_degree = r * alg.field.k();
        Ok(LocalAlgebra { alg, max_ideal: rad, residue_degree })
    }

    pub fn field(&self) -> &Field {
        &self.alg.field
    }
    pub fn dim(&self) -> usize {
        self.alg.dim
    }
    /// [A/m : base field]
    pub fn relative_residue_degree(&self) -> usize {
        self.alg.dim - self.max_ideal.dim()
    }

    fn ideal_basis(&self) -> Vec<Vec<Fe>> {
        (0..self.max_ideal.dim()).map(|j| self.max_ideal.c.col(j)).collect()
    }

    /// Powers m, m^2, ... until zero, as spanning subspaces.
    pub fn ideal_powers(&self) -> Vec<BaseChangeTuple> {
        let f = &self.alg.field;
        let d = self.alg.dim;
        let m = self.ideal_basis();
        let lm: Vec<Mat> = m.iter().map(|x| self.alg.mult_matrix(x)).collect();
        let mut out = vec![];
        let mut cur = self.max_ideal.clone();
        while cur.dim() > 0 {
            out.push(cur.clone());
            let mut cols = Vec::new();
            for l in &lm {
                let p = l.mul(&cur.c);
                cols.extend((0..p.cols()).map(|j| p.col(j)));
            }
            cur = if cols.is_empty() {
                BaseChangeTuple::from_col_span(&Mat::zero(f, d, 0))
            } else {
                BaseChangeTuple::from_col_span(&Mat::from_cols(f, d, &cols))
            };
        }
        out
    }

    pub fn gorenstein_defect(&self) -> usize {
        let f = &self.alg.field;
        let d = self.alg.dim;
        let m = self.ideal_basis();
        if m.is_empty() {
            return 0;
        }
        let mut rows: Vec<Vec<Fe>> = Vec::new();
        for x in &m {
            let l = self.alg.mult_matrix(x);
            rows.extend((0..d).map(|i| l.row(i).to_vec()));
        }
        let ann = kernel(&Mat::from_rows(f, &rows)).dim();
        ann / self.relative_residue_degree() - 1
    }

    /// (embedding dimension, nilpotency order)
    pub fn local_invariants(&self) -> (usize, usize) {
        let pw = self.ideal_powers();
        let r = self.relative_residue_degree();
        let e = match pw.len() {
            0 => 0,
            1 => pw[0].dim() / r,
            _ => (pw[0].dim() - pw[1].dim()) / r,
        };
        (e, pw.len())
    }

    /// Base change to the residue field, keeping one conjugate factor: the
    /// one whose generator eigenvalues are lexicographically least.
    pub fn change_to_residue_field(&self) -> Result<LocalAlgebra> {
        let r = self.relative_residue_degree();
        if r == 1 {
            return Ok(self.clone());
        }
        let f = &self.alg.field;
        let big = make_field(f.p(), f.k() * r as u32)?;
        let emb = Embedding::new(f, &big)?;
        let ext = self.alg.extend(&emb);
        let gens = ext.generator_matrices();
        let comps = primary_components(&gens, None)?;
        if comps.iter().any(|c| c.factors.iter().any(|p| p.deg() != 1)) {
            return Err(Error::NotLocal);
        }
        let key = |c: &crate::linalg::Component| -> Vec<Vec<u64>> {
            c.factors.iter().map(|p| big.digits(big.neg(p.coeff(0)))).collect()
        };
        let best = (0..comps.len()).min_by_key(|&i| key(&comps[i])).unwrap();
        let spaces: Vec<BaseChangeTuple> = comps.iter().map(|c| c.space.clone()).collect();
        let parts = ext.split(&spaces);
        LocalAlgebra::new(parts[best].0.clone())
    }
}

/// Decompose a commutative algebra into its local factors.
pub fn localisations(a: &StructAlgebra) -> Result<Vec<LocalAlgebra>> {
    Ok(localisations_with_idempotents(a)?.into_iter().map(|(l, _)| l).collect())
}

/// Local factors together with their idempotents in the coordinates of `a`.
pub fn localisations_with_idempotents(a: &StructAlgebra) -> Result<Vec<(LocalAlgebra, Vec<Fe>)>> {
    let gens = a.generator_matrices();
    let comps = if gens.is_empty() {
        vec![]
    } else {
        primary_components(&gens, None)?
    };
    let spaces: Vec<BaseChangeTuple> = if comps.is_empty() {
        vec![BaseChangeTuple::identity(&a.field, a.dim)]
    } else {
        comps.into_iter().map(|c| c.space).collect()
    };
    let mut out = Vec::new();
    for (part, c) in a.split(&spaces) {
        refine(part, c, &mut out)?;
    }
    Ok(out)
}

// `emb` maps coordinates of `b` into those of the top-level algebra.
fn refine(b: StructAlgebra, emb: Mat, out: &mut Vec<(LocalAlgebra, Vec<Fe>)>) -> Result<()> {
    let rad = b.radical_primary()?;
    match frobenius_split_element(&b, &rad) {
        None => {
            let r = (b.dim - rad.dim()) as u32;
            let residue_degree = r * b.field.k();
            let e = emb.mul_vec(&b.one);
            out.push((LocalAlgebra { alg: b, max_ideal: rad, residue_degree }, e));
        }
        Some(x) => {
            let comps = primary_components(&[b.mult_matrix(&x)], None)?;
            let spaces: Vec<BaseChangeTuple> = comps.into_iter().map(|c| c.space).collect();
            for (part, c) in b.split(&spaces) {
                refine(part, emb.mul(&c), out)?;
            }
        }
    }
    Ok(())
}

pub fn maximal_ideal(a: &AlgebraBasis) -> Result<BaseChangeTuple> {
    Ok(LocalAlgebra::new(StructAlgebra::from_basis(a))?.max_ideal)
}

pub fn gorenstein_defect(a: &AlgebraBasis) -> Result<usize> {
    Ok(LocalAlgebra::new(StructAlgebra::from_basis(a))?.gorenstein_defect())
}

pub fn local_invariants(a: &AlgebraBasis) -> Result<(usize, usize)> {
    Ok(LocalAlgebra::new(StructAlgebra::from_basis(a))?.local_invariants())
}

/// One relation: (exponent vector, coefficient) pairs; coefficients use the
/// textual field encoding of the residue field.
pub type Relation = Vec<(Vec<u32>, Fe)>;

/// The tuple <k, e, n, R>: residue field GF(p^k), embedding dimension e,
/// nilpotency order n and the relations (kernel of k[x]/J^(n+1) -> A).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffinePresentation {
    pub p: u64,
    pub k: u32,
    pub e: usize,
    pub n: usize,
    pub relations: Vec<Relation>,
}

/// Exponent vectors of total degree <= n in e variables, graded then
/// lexicographically descending.
pub fn monomials(e: usize, n: usize) -> Vec<Vec<u32>> {
    fn rec(e: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == e - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            rec(e, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![vec![0; e]];
    if e == 0 {
        return out;
    }
    for deg in 1..=n as u32 {
        rec(e, deg, &mut Vec::new(), &mut out);
    }
    out
}

struct Truncated {
    mons: Vec<Vec<u32>>,
    index: std::collections::HashMap<Vec<u32>, usize>,
    n: usize,
}

impl Truncated {
    fn new(e: usize, n: usize) -> Self {
        let mons = monomials(e, n);
        let index = mons.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Truncated { mons, index, n }
    }
    fn len(&self) -> usize {
        self.mons.len()
    }
    /// index of mons[a] * mons[b], None if the degree exceeds n
    fn product(&self, a: usize, b: usize) -> Option<usize> {
        let m: Vec<u32> = self.mons[a].iter().zip(&self.mons[b]).map(|(x, y)| x + y).collect();
        if m.iter().sum::<u32>() as usize > self.n {
            return None;
        }
        self.index.get(&m).copied()
    }
    /// Span of all monomial multiples of the given vectors.
    fn ideal(&self, f: &Field, gens: &[Vec<Fe>]) -> Echelon {
        let mut ech = Echelon::new(f, self.len());
        for g in gens {
            for a in 0..self.len() {
                let mut v = vec![0; self.len()];
                let mut any = false;
                for (b, &c) in g.iter().enumerate() {
                    if c != 0 {
                        if let Some(ab) = self.product(a, b) {
                            v[ab] = f.add(v[ab], c);
                            any = true;
                        }
                    }
                }
                if any {
                    ech.insert(&v);
                }
            }
        }
        ech
    }
}

/// Affine presentation of a local algebra over its residue field (the
/// residue field base change is applied first when needed).
pub fn affine_tup(a: &LocalAlgebra, try_minimal: bool) -> Result<AffinePresentation> {
    let b = a.change_to_residue_field()?;
    let f = b.field().clone();
    let d = b.dim();
    let pw = b.ideal_powers();
    let n = pw.len();
    // lifts of a basis of m/m^2
    let mut ech = Echelon::new(&f, d);
    if pw.len() > 1 {
        for j in 0..pw[1].dim() {
            ech.insert(&pw[1].c.col(j));
        }
    }
    let mut xs: Vec<Vec<Fe>> = Vec::new();
    if let Some(m) = pw.first() {
        for j in 0..m.dim() {
            let v = m.c.col(j);
            if ech.insert(&v) {
                xs.push(v);
            }
        }
    }
    let e = xs.len();
    let tr = Truncated::new(e, n);
    // values of the monomials
    let mut vals: Vec<Vec<Fe>> = Vec::with_capacity(tr.len());
    for (i, m) in tr.mons.iter().enumerate() {
        if i == 0 {
            vals.push(b.alg.one.clone());
            continue;
        }
        let v = m.iter().position(|&x| x > 0).unwrap();
        let mut prev = m.clone();
        prev[v] -= 1;
        let pi = tr.index[&prev];
        vals.push(b.alg.mul(&vals[pi], &xs[v]));
    }
    let ev = Mat::from_cols(&f, d, &vals);
    let ker = kernel(&ev);
    let mut rels: Vec<Vec<Fe>> = (0..ker.dim()).map(|j| ker.c.col(j)).collect();
    if try_minimal && !rels.is_empty() {
        rels = minimal_generators(&f, &tr, rels);
    }
    let relations = rels
        .iter()
        .map(|r| r.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (tr.mons[i].clone(), c)).collect())
        .collect();
    Ok(AffinePresentation { p: f.p(), k: f.k(), e, n, relations })
}

fn min_degree(tr: &Truncated, v: &[Fe]) -> u32 {
    v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| tr.mons[i].iter().sum::<u32>()).min().unwrap_or(0)
}

/// Greedy build-up followed by greedy removal: a generating set of the
/// ideal spanned by `rels`.
fn minimal_generators(f: &Field, tr: &Truncated, mut rels: Vec<Vec<Fe>>) -> Vec<Vec<Fe>> {
    let target = rels.len();
    rels.sort_by_key(|r| min_degree(tr, r));
    let mut chosen: Vec<Vec<Fe>> = Vec::new();
    for r in rels {
        let ideal = tr.ideal(f, &chosen);
        if ideal.dim() == target {
            break;
        }
        if !ideal.contains(&r) {
            chosen.push(r);
        }
    }
    let mut i = 0;
    while i < chosen.len() {
        let others: Vec<Vec<Fe>> = chosen.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
        if tr.ideal(f, &others).dim() == target {
            chosen.remove(i);
        } else {
            i += 1;
        }
    }
    chosen
}

/// Rebuild the local algebra k[x_1..x_e]/(J^(n+1) + R).
pub fn affine_from_tup(t: &AffinePresentation) -> Result<LocalAlgebra> {
    let f = make_field(t.p, t.k)?;
    let tr = Truncated::new(t.e, t.n);
    let rels: Vec<Vec<Fe>> = t
        .relations
        .iter()
        .map(|r| {
            let mut v = vec![0; tr.len()];
            for (m, c) in r {
                if let Some(&i) = tr.index.get(m) {
                    v[i] = f.add(v[i], *c);
                }
            }
            v
        })
        .collect();
    let ideal = tr.ideal(&f, &rels);
    let mut pivot_mask = vec![false; tr.len()];
    // positions eliminated by the ideal: find by reducing unit vectors
    for i in 0..tr.len() {
        let mut u = vec![0; tr.len()];
        u[i] = 1;
        ideal.reduce(&mut u);
        pivot_mask[i] = u[i] == 0;
    }
    let free: Vec<usize> = (0..tr.len()).filter(|&i| !pivot_mask[i]).collect();
    let d = free.len();
    let nf = |v: &mut Vec<Fe>| -> Vec<Fe> {
        ideal.reduce(v);
        free.iter().map(|&i| v[i]).collect()
    };
    let mut mult = Vec::with_capacity(d);
    for &a in &free {
        let cols: Vec<Vec<Fe>> = free
            .iter()
            .map(|&b| {
                let mut v = vec![0; tr.len()];
                if let Some(ab) = tr.product(a, b) {
                    v[ab] = 1;
                }
                nf(&mut v)
            })
            .collect();
        mult.push(Mat::from_cols(&f, d, &cols));
    }
    let unit_nf = |i: usize| {
        let mut v = vec![0; tr.len()];
        v[i] = 1;
        nf(&mut v)
    };
    let one = unit_nf(0);
    let gens: Vec<Vec<Fe>> = (0..t.e)
        .map(|j| {
            let mut m = vec![0u32; t.e];
            m[j] = 1;
            tr.index.get(&m).map_or(vec![0; d], |&i| unit_nf(i))
        })
        .collect();
    let mut alg = StructAlgebra { field: f, dim: d, mult, one, gens };
    if alg.gens.is_empty() {
        alg.gens = vec![alg.one.clone()];
    }
    LocalAlgebra::new(alg)
}

/// Minimal polynomial of an algebra element (via its multiplication matrix).
pub fn element_min_poly(a: &StructAlgebra, x: &[Fe]) -> Result<Poly> {
    min_poly_matrix(&a.mult_matrix(x))
}
