//! Boundary symbols and the boundary map.

use super::p1::P1List;
use super::{monomial_action, ModSymSpace};
use crate::dirichlet::DirichletCharFF;
use crate::ff::{Fe, Field};
use crate::linalg::{kernel, Mat};

/// Boundary space: one block of coinvariants per cusp class.
pub(crate) struct Boundary {
    field: Field,
    nmon: usize,
    /// offset of each cusp block, plus the total at the end
    offsets: Vec<usize>,
    /// representative point and lifts of the block coordinates
    cusp_rep: Vec<(u64, u64)>,
    cusp_lift: Vec<Vec<usize>>,
    /// per P^1 point: (cusp, matrix sending R to its block coordinates)
    point: Vec<(usize, Mat)>,
}

impl Boundary {
    pub fn new(p1: &P1List, chi: &DirichletCharFF, field: &Field, weight: u32) -> Boundary {
        let w = weight as usize - 2;
        let nmon = w + 1;
        let p = field.p();
        let np = p1.len();
        let to_f = |m: &[u64]| Mat::from_vec(field, nmon, nmon, m.to_vec());
        let mut point: Vec<Option<(usize, Mat)>> = vec![None; np];
        let mut offsets = vec![0];
        let mut cusp_rep = Vec::new();
        let mut cusp_lift = Vec::new();
        for m0 in 0..np {
            if point[m0].is_some() {
                continue;
            }
            let c = cusp_rep.len();
            let (u0, v0) = p1.get(m0);
            // walk the orbit of (u0, v0) under translation by T
            let mut members = Vec::new();
            let mut t = 0i64;
            let lambda = loop {
                let (m, mu) = p1.index_of(u0 as i64, v0 as i64 + t * u0 as i64).unwrap();
                if t > 0 && m == m0 {
                    break mu;
                }
                members.push((m, t, mu));
                t += 1;
            };
            let h = t;
            // coinvariants of R -> chi(lambda) R(X + hY, Y)
            let a = to_f(&monomial_action(p, w, [1, h, 0, 1]));
            let mc = Mat::identity(field, nmon).sub(&a.scale(chi.eval(lambda as i64)));
            let left = kernel(&mc.transpose());
            let q = left.c.transpose();
            // lift of block coordinate j: unit vector at the j-th free column
            let lift: Vec<usize> = (0..q.rows())
                .map(|j| (0..nmon).find(|&i| q.get(j, i) == 1 && (0..q.rows()).all(|r| r == j || q.get(r, i) == 0)).unwrap())
                .collect();
            for (m, t, mu) in members {
                let tm = to_f(&monomial_action(p, w, [1, -t, 0, 1]));
                let b = q.mul(&tm).scale(field.inv(chi.eval(mu as i64)));
                point[m] = Some((c, b));
            }
            offsets.push(offsets[c] + q.rows());
            cusp_rep.push((u0, v0));
            cusp_lift.push(lift);
        }
        Boundary {
            field: field.clone(),
            nmon,
            offsets,
            cusp_rep,
            cusp_lift,
            point: point.into_iter().map(|x| x.unwrap()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn num_cusps(&self) -> usize {
        self.cusp_rep.len()
    }

    /// Add coef * <R, (u, v)> into `out`.
    fn add_symbol(&self, space: &ModSymSpace, out: &mut [Fe], coef: Fe, r: &[Fe], u: i64, v: i64) {
        let f = &self.field;
        let Some((m, s)) = space.p1.index_of(u, v) else { return };
        let (c, b) = &self.point[m];
        let k = f.mul(coef, space.chi.eval(s as i64));
        if k == 0 {
            return;
        }
        let img = b.mul_vec(r);
        let off = self.offsets[*c];
        for (j, &x) in img.iter().enumerate() {
            out[off + j] = f.add(out[off + j], f.mul(k, x));
        }
    }

    /// Boundary of the free symbol [X^i Y^(k-2-i), m].
    pub fn delta_free(&self, space: &ModSymSpace, i: usize, m: usize, out: &mut [Fe]) {
        let f = &self.field;
        let (u, v) = space.p1.get(m);
        let (u, v) = (u as i64, v as i64);
        let mut e = vec![0; self.nmon];
        e[i] = 1;
        self.add_symbol(space, out, 1, &e, u, v);
        // second end: P(-Y, X) at (v, -u)
        let w = self.nmon - 1;
        let mut r = vec![0; self.nmon];
        r[w - i] = if i.is_multiple_of(2) { 1 } else { f.neg(1) };
        self.add_symbol(space, out, f.neg(1), &r, v, -u);
    }

    /// Matrix of eta on the boundary space.
    pub fn eta(&self, space: &ModSymSpace) -> Mat {
        let f = &self.field;
        let d = self.dim();
        let mut cols = Vec::with_capacity(d);
        for c in 0..self.num_cusps() {
            let (u0, v0) = self.cusp_rep[c];
            for &i in &self.cusp_lift[c] {
                // R(X, -Y) for R = X^i Y^(w-i)
                let w = self.nmon - 1;
                let mut r = vec![0; self.nmon];
                r[i] = if (w - i).is_multiple_of(2) { 1 } else { f.neg(1) };
                let mut out = vec![0; d];
                self.add_symbol(space, &mut out, 1, &r, -(u0 as i64), v0 as i64);
                cols.push(out);
            }
        }
        Mat::from_cols(f, d, &cols)
    }
}
