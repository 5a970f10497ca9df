//! Modular symbols spaces M_k(N, chi; F) presented by Manin symbols, with
//! boundary map, cuspidal subspace, eta quotients and Hecke operators.
//!
//! Conventions: the Manin symbol [P, (u, v)] is g{0, oo} (x) gP for any g in
//! SL2(Z) with bottom row (u, v); the right action is
//! [P, (u, v)] h = [P(aX + bY, cX + dY), (ua + vc, ub + vd)], and
//! [P, s(u, v)] = chi(s) [P, (u, v)].

pub mod boundary;
pub mod heilbronn;
pub mod p1;
pub mod presentation;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::dirichlet::DirichletCharFF;
use crate::error::{invalid, Result};
use crate::ff::{is_prime, Fe, Field};
use crate::linalg::{base_change, kernel, BaseChangeTuple, Mat};
use boundary::Boundary;
use heilbronn::{heilbronn_cremona, heilbronn_merel, IMat};
use p1::P1List;
use presentation::{build_quotient, Quotient, SVec, TwoTerm};

pub const MAX_WEIGHT: u32 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Full,
    Cuspidal,
    Plus,
    Minus,
    CuspidalPlus,
    CuspidalMinus,
}

impl Kind {
    pub fn is_cuspidal(self) -> bool {
        matches!(self, Kind::Cuspidal | Kind::CuspidalPlus | Kind::CuspidalMinus)
    }
    /// +1 / -1 for the eta quotients.
    pub fn sign(self) -> Option<i64> {
        match self {
            Kind::Plus | Kind::CuspidalPlus => Some(1),
            Kind::Minus | Kind::CuspidalMinus => Some(-1),
            _ => None,
        }
    }
    pub fn with_cuspidal(self, cusp: bool) -> Kind {
        match (self.sign(), cusp) {
            (None, false) => Kind::Full,
            (None, true) => Kind::Cuspidal,
            (Some(1), false) => Kind::Plus,
            (Some(1), true) => Kind::CuspidalPlus,
            (_, false) => Kind::Minus,
            (_, true) => Kind::CuspidalMinus,
        }
    }
}

/// Matrix (row-major, k-1 square) with entry [t][i] the coefficient of
/// X^t Y^(w-t) in (aX + bY)^i (cX + dY)^(w-i), reduced mod p.
pub fn monomial_action(p: u64, w: usize, g: IMat) -> Vec<u64> {
    let n = w + 1;
    let red = |x: i64| x.rem_euclid(p as i64) as u64;
    let (a, b, c, d) = (red(g[0]), red(g[1]), red(g[2]), red(g[3]));
    // powers of (aX + bY) and (cX + dY) as coefficient vectors in X
    let mut pa: Vec<Vec<u64>> = vec![vec![1]];
    let mut pc: Vec<Vec<u64>> = vec![vec![1]];
    for e in 1..n {
        let mul_lin = |prev: &Vec<u64>, x: u64, y: u64| {
            let mut r = vec![0u64; e + 1];
            for (s, &v) in prev.iter().enumerate() {
                r[s + 1] = (r[s + 1] + v * x) % p;
                r[s] = (r[s] + v * y) % p;
            }
            r
        };
        let na = mul_lin(&pa[e - 1], a, b);
        let nc = mul_lin(&pc[e - 1], c, d);
        pa.push(na);
        pc.push(nc);
    }
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        let (x, y) = (&pa[i], &pc[w - i]);
        for (s, &xv) in x.iter().enumerate() {
            if xv == 0 {
                continue;
            }
            for (t, &yv) in y.iter().enumerate() {
                let idx = (s + t) * n + i;
                out[idx] = (out[idx] + xv * yv) % p;
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct HeckeOp {
    pub n: u64,
    pub matrix: Mat,
}

/// A presented space of modular symbols.
pub struct ModSymSpace {
    level: u64,
    weight: u32,
    pub(crate) chi: DirichletCharFF,
    field: Field,
    kind: Kind,
    pub(crate) p1: Arc<P1List>,
    nmon: usize,
    quot: Quotient,
    cusp: Option<BaseChangeTuple>,
    cache: Mutex<BTreeMap<u64, Mat>>,
}

impl std::fmt::Debug for ModSymSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ModSymSpace(N={}, k={}, {:?}, {:?}, dim {})", self.level, self.weight, self.field, self.kind, self.dim())
    }
}

pub fn build_space(n: u64, k: u32, chi: &DirichletCharFF, field: &Field, kind: Kind) -> Result<ModSymSpace> {
    if n == 0 {
        return invalid("level must be positive");
    }
    if !(2..=MAX_WEIGHT).contains(&k) {
        return invalid(format!("weight must lie in 2..={MAX_WEIGHT}"));
    }
    if chi.modulus() != n {
        return invalid("character modulus differs from the level");
    }
    if chi.field() != field {
        return invalid("character values lie in a different field");
    }
    let p1 = Arc::new(P1List::new(n));
    let nmon = k as usize - 1;
    let nvar = nmon * p1.len();
    let parity_ok = chi.eval(-1) == if k.is_multiple_of(2) { 1 } else { field.neg(1) };
    let ambient_kind = kind.with_cuspidal(false);
    let mut space = ModSymSpace {
        level: n,
        weight: k,
        chi: chi.clone(),
        field: field.clone(),
        kind,
        p1,
        nmon,
        quot: Quotient::zero(nvar),
        cusp: None,
        cache: Mutex::new(BTreeMap::new()),
    };
    if !parity_ok {
        if kind.is_cuspidal() {
            space.cusp = Some(BaseChangeTuple::identity(field, 0));
        }
        return Ok(space);
    }
    let mut uf = TwoTerm::new(field, nvar);
    for (a, b, c) in space.two_term_relations(ambient_kind) {
        uf.relate(a, b, c);
    }
    let rels = space.three_term_relations();
    space.quot = build_quotient(field, &mut uf, nvar, rels);
    if kind.is_cuspidal() {
        let d = space.boundary_map();
        space.cusp = Some(kernel(&d));
    }
    Ok(space)
}

impl ModSymSpace {
    pub fn level(&self) -> u64 {
        self.level
    }
    pub fn weight(&self) -> u32 {
        self.weight
    }
    pub fn character(&self) -> &DirichletCharFF {
        &self.chi
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn kind(&self) -> Kind {
        self.kind
    }
    pub fn p1(&self) -> &P1List {
        &self.p1
    }
    pub fn num_monomials(&self) -> usize {
        self.nmon
    }
    pub fn num_free_symbols(&self) -> usize {
        self.nmon * self.p1.len()
    }
    /// Dimension of the (possibly non-cuspidal) presented space.
    pub fn ambient_dim(&self) -> usize {
        self.quot.dim
    }
    pub fn dim(&self) -> usize {
        match &self.cusp {
            Some(c) => c.dim(),
            None => self.quot.dim,
        }
    }
    pub fn cuspidal_tuple(&self) -> Option<&BaseChangeTuple> {
        self.cusp.as_ref()
    }

    fn free_index(&self, i: usize, m: usize) -> usize {
        i * self.p1.len() + m
    }

    /// Image of coef * [X^i Y^(k-2-i), (u, v)] (raw pair) accumulated in `out`.
    fn add_image(&self, out: &mut [Fe], coef: Fe, i: usize, u: i64, v: i64) {
        let f = &self.field;
        let Some((m, s)) = self.p1.index_of(u, v) else { return };
        let k = f.mul(coef, self.chi.eval(s as i64));
        if k == 0 {
            return;
        }
        let (cols, vals) = self.quot.image(self.free_index(i, m));
        for (&c, &x) in cols.iter().zip(vals) {
            out[c as usize] = f.add(out[c as usize], f.mul(k, x));
        }
    }

    /// Quotient image of a free symbol.
    pub fn free_image(&self, var: usize) -> Vec<Fe> {
        let mut out = vec![0; self.quot.dim];
        let (cols, vals) = self.quot.image(var);
        for (&c, &x) in cols.iter().zip(vals) {
            out[c as usize] = self.field.add(out[c as usize], x);
        }
        out
    }

    /// (a, b, c): x_a = c x_b, from sigma and optionally eta.
    fn two_term_relations(&self, kind: Kind) -> Vec<(usize, usize, Fe)> {
        let f = &self.field;
        let w = self.nmon - 1;
        let mut out = Vec::new();
        for m in 0..self.p1.len() {
            let (u, v) = self.p1.get(m);
            let (u, v) = (u as i64, v as i64);
            let (ms, s) = self.p1.index_of(v, -u).unwrap();
            let cs = self.chi.eval(s as i64);
            let eta = kind.sign().map(|sg| {
                let (me, se) = self.p1.index_of(-u, v).unwrap();
                (me, f.mul(self.chi.eval(se as i64), f.from_i64(sg)))
            });
            for i in 0..=w {
                // x + x sigma = 0 with x sigma = (-1)^i chi(s) [X^j Y^i, rep]
                let sgn = if i % 2 == 0 { f.neg(1) } else { 1 };
                out.push((self.free_index(i, m), self.free_index(w - i, ms), f.mul(sgn, cs)));
                if let Some((me, ce)) = eta {
                    // x = sign (-1)^i chi(s) [X^i Y^j, rep]
                    let sgn = if i % 2 == 0 { 1 } else { f.neg(1) };
                    out.push((self.free_index(i, m), self.free_index(i, me), f.mul(sgn, ce)));
                }
            }
        }
        out
    }

    /// x (1 + tau + tau^2) for each tau-orbit representative of P^1 and
    /// every monomial.
    fn three_term_relations(&self) -> Vec<SVec> {
        let f = &self.field;
        let p = f.p();
        let w = self.nmon - 1;
        let tau = monomial_action(p, w, [0, -1, 1, -1]);
        let tau2 = monomial_action(p, w, [-1, 1, -1, 0]);
        let np = self.p1.len();
        let mut seen = vec![false; np];
        let mut rels = Vec::new();
        let mut acc: BTreeMap<u32, Fe> = BTreeMap::new();
        for m in 0..np {
            if seen[m] {
                continue;
            }
            let (u, v) = self.p1.get(m);
            let (u, v) = (u as i64, v as i64);
            let (m1, s1) = self.p1.index_of(v, -u - v).unwrap();
            let (m2, s2) = self.p1.index_of(-u - v, u).unwrap();
            seen[m] = true;
            seen[m1] = true;
            seen[m2] = true;
            let (c1, c2) = (self.chi.eval(s1 as i64), self.chi.eval(s2 as i64));
            for i in 0..=w {
                acc.clear();
                let mut push = |idx: usize, c: Fe| {
                    if c != 0 {
                        let e = acc.entry(idx as u32).or_insert(0);
                        *e = f.add(*e, c);
                    }
                };
                push(self.free_index(i, m), 1);
                for t in 0..=w {
                    push(self.free_index(t, m1), f.mul(c1, tau[t * self.nmon + i]));
                    push(self.free_index(t, m2), f.mul(c2, tau2[t * self.nmon + i]));
                }
                let rel: SVec = acc.iter().filter(|e| *e.1 != 0).map(|(&a, &c)| (a, c)).collect();
                if !rel.is_empty() {
                    rels.push(rel);
                }
            }
        }
        rels
    }

    /// Relation vectors over free symbols (for self-checks).
    pub fn relation_vectors(&self) -> Vec<SVec> {
        let f = &self.field;
        let mut out: Vec<SVec> = self
            .two_term_relations(self.kind.with_cuspidal(false))
            .into_iter()
            .map(|(a, b, c)| {
                if a == b {
                    vec![(a as u32, f.sub(1, c))]
                } else {
                    vec![(a as u32, 1), (b as u32, f.neg(c))]
                }
            })
            .collect();
        out.extend(self.three_term_relations());
        out
    }

    fn make_boundary(&self) -> Boundary {
        Boundary::new(&self.p1, &self.chi, &self.field, self.weight)
    }

    /// Boundary map on the presented (non-cuspidal) space, columns indexed
    /// by its basis. For eta quotients the target is the matching quotient
    /// of the boundary space.
    pub fn boundary_map(&self) -> Mat {
        let f = &self.field;
        let b = self.make_boundary();
        let bd = b.dim();
        let cols: Vec<Vec<Fe>> = self
            .quot
            .basis
            .iter()
            .map(|&var| {
                let (i, m) = (var / self.p1.len(), var % self.p1.len());
                let mut out = vec![0; bd];
                b.delta_free(self, i, m, &mut out);
                out
            })
            .collect();
        let d = Mat::from_cols(f, bd, &cols);
        match self.kind.sign() {
            None => d,
            Some(sg) => {
                let e = b.eta(self).add_scalar(f.neg(f.from_i64(sg)));
                let q = kernel(&e.transpose()).c.transpose();
                q.mul(&d)
            }
        }
    }

    /// Boundary of a free symbol in the full boundary space.
    pub fn boundary_of_free(&self, var: usize) -> Vec<Fe> {
        let b = self.make_boundary();
        let mut out = vec![0; b.dim()];
        b.delta_free(self, var / self.p1.len(), var % self.p1.len(), &mut out);
        out
    }

    pub fn num_cusps(&self) -> usize {
        self.make_boundary().num_cusps()
    }

    pub fn cuspidal_subspace(&self) -> BaseChangeTuple {
        match &self.cusp {
            Some(c) => c.clone(),
            None => kernel(&self.boundary_map()),
        }
    }

    fn family(&self, l: u64) -> Vec<IMat> {
        if self.level.is_multiple_of(l) {
            heilbronn_merel(l as i64)
        } else {
            heilbronn_cremona(l as i64)
        }
    }

    /// T_l on the presented space, using the given matrix family.
    pub fn hecke_ambient_with(&self, fam: &[IMat]) -> Mat {
        let f = &self.field;
        let p = f.p();
        let w = self.nmon - 1;
        let n = self.nmon;
        let acts: Vec<Vec<u64>> = fam.iter().map(|&h| monomial_action(p, w, h)).collect();
        let d = self.quot.dim;
        let cols: Vec<Vec<Fe>> = self
            .quot
            .basis
            .par_iter()
            .map(|&var| {
                let (i, m) = (var / self.p1.len(), var % self.p1.len());
                let (u, v) = self.p1.get(m);
                let (u, v) = (u as i64, v as i64);
                let mut out = vec![0; d];
                for (h, act) in fam.iter().zip(&acts) {
                    let (u2, v2) = (u * h[0] + v * h[2], u * h[1] + v * h[3]);
                    for t in 0..n {
                        let c = act[t * n + i];
                        if c != 0 {
                            self.add_image(&mut out, c, t, u2, v2);
                        }
                    }
                }
                out
            })
            .collect();
        Mat::from_cols(f, d, &cols)
    }

    /// Any integer matrix acting on the presented space (it must preserve the
    /// relations for the result to be meaningful, e.g. eta).
    pub fn act_ambient(&self, g: IMat) -> Mat {
        self.hecke_ambient_with(&[g])
    }

    pub fn hecke_operator(&self, l: u64) -> Result<HeckeOp> {
        if !is_prime(l) {
            return invalid(format!("Hecke index {l} is not prime"));
        }
        if let Some(m) = self.cache.lock().unwrap().get(&l) {
            return Ok(HeckeOp { n: l, matrix: m.clone() });
        }
        let t = self.hecke_ambient_with(&self.family(l));
        let t = match &self.cusp {
            Some(c) => base_change(&t, c)?,
            None => t,
        };
        let mut cache = self.cache.lock().unwrap();
        if cfg!(debug_assertions) && t.rows() <= 200 {
            for m in cache.values() {
                assert!(m.commutes_with(&t), "Hecke operators fail to commute");
            }
        }
        cache.insert(l, t.clone());
        Ok(HeckeOp { n: l, matrix: t })
    }

    /// Pre-computed operators (on this space's basis) to be reused.
    pub fn seed_operators(&self, ops: &[HeckeOp]) -> Result<()> {
        let d = self.dim();
        let mut cache = self.cache.lock().unwrap();
        for op in ops {
            if !is_prime(op.n) || op.matrix.rows() != d || op.matrix.cols() != d || op.matrix.field() != &self.field {
                return invalid(format!("operator T_{} does not fit this space", op.n));
            }
            cache.insert(op.n, op.matrix.clone());
        }
        Ok(())
    }

    pub fn cached_operators(&self) -> Vec<HeckeOp> {
        self.cache.lock().unwrap().iter().map(|(&n, m)| HeckeOp { n, matrix: m.clone() }).collect()
    }
}
