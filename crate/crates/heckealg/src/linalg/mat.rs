use std::fmt;

use crate::ff::{Fe, Field, Poly};

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows.min(12) {
            writeln!(f, "  {:?}", &self.row(r)[..self.cols.min(16)])?;
        }
        Ok(())
    }
}

#[inline]
fn is_gf2(f: &Field) -> bool {
    f.p() == 2 && f.k() == 1
}

impl Mat {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }
    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }
    pub fn scalar(field: &Field, n: usize, a: Fe) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = a;
        }
        m
    }
    pub fn from_rows(field: &Field, rows: &[Vec<Fe>]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Mat { field: field.clone(), rows: rows.len(), cols, data }
    }
    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Fe>) -> Mat {
        assert_eq!(data.len(), rows * cols);
        Mat { field: field.clone(), rows, cols, data }
    }
    /// Matrix whose columns are the given vectors (all of length n).
    pub fn from_cols(field: &Field, n: usize, cols: &[Vec<Fe>]) -> Mat {
        let mut m = Mat::zero(field, n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.iter().take(n).enumerate() {
                m.data[i * cols.len() + j] = x;
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }
    #[inline]
    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [Fe] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn data(&self) -> &[Fe] {
        &self.data
    }
    pub fn col(&self, c: usize) -> Vec<Fe> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Mat { field: self.field.clone(), rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut m = Mat::zero(&self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        m
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Mat { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, a: Fe) -> Mat {
        let f = &self.field;
        let data = self.data.iter().map(|&x| f.mul(x, a)).collect();
        Mat { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// self + a*I
    pub fn add_scalar(&self, a: Fe) -> Mat {
        assert!(self.is_square());
        let mut m = self.clone();
        let f = &self.field;
        for i in 0..self.rows {
            let v = m.get(i, i);
            m.set(i, i, f.add(v, a));
        }
        m
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let f = &self.field;
        let (n, m) = (self.rows, o.cols);
        let mut out = Mat::zero(f, n, m);
        if n == 0 || m == 0 {
            return out;
        }
        if is_gf2(f) {
            mul_gf2(self, o, &mut out);
        } else if f.is_prime_field() {
            let p = f.p();
            let lim = (u64::MAX / ((p - 1) * (p - 1)).max(1)).max(1);
            let mut acc = vec![0u64; m];
            for i in 0..n {
                acc.iter_mut().for_each(|x| *x = 0);
                let mut cnt = 0u64;
                for t in 0..self.cols {
                    let a = self.data[i * self.cols + t];
                    if a == 0 {
                        continue;
                    }
                    if cnt + 1 >= lim {
                        acc.iter_mut().for_each(|x| *x %= p);
                        cnt = 1;
                    }
                    cnt += 1;
                    let orow = &o.data[t * m..(t + 1) * m];
                    for (x, &b) in acc.iter_mut().zip(orow) {
                        *x += a * b;
                    }
                }
                for (dst, &x) in out.data[i * m..(i + 1) * m].iter_mut().zip(&acc) {
                    *dst = x % p;
                }
            }
        } else {
            for i in 0..n {
                for t in 0..self.cols {
                    let a = self.data[i * self.cols + t];
                    if a == 0 {
                        continue;
                    }
                    for j in 0..m {
                        let b = o.data[t * m + j];
                        if b != 0 {
                            let v = &mut out.data[i * m + j];
                            *v = f.add(*v, f.mul(a, b));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows).map(|r| dot(f, self.row(r), v)).collect()
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        let mut r = Mat::identity(&self.field, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// f(self) by Horner's rule.
    pub fn eval_poly(&self, f: &Poly) -> Mat {
        assert!(self.is_square());
        let fld = &self.field;
        let n = self.rows;
        let Some(d) = f.degree() else { return Mat::zero(fld, n, n) };
        let mut r = Mat::scalar(fld, n, f.coeff(d));
        for i in (0..d).rev() {
            r = r.mul(self).add_scalar(f.coeff(i));
        }
        r
    }

    pub fn commutes_with(&self, o: &Mat) -> bool {
        self.mul(o) == o.mul(self)
    }

    /// Reduced row echelon form; returns (rref with zero rows dropped, pivot columns).
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place();
        let r = piv.len();
        m.data.truncate(r * m.cols);
        m.rows = r;
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// In-place RREF; the first `rank` rows hold the result.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        if is_gf2(&self.field) {
            return rref_gf2(self);
        }
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut piv = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(sel) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else { continue };
            if sel != r {
                for j in 0..cols {
                    self.data.swap(sel * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            if inv != 1 {
                for j in c..cols {
                    let v = self.data[r * cols + j];
                    self.data[r * cols + j] = f.mul(v, inv);
                }
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (prow, after) = rest.split_at_mut(cols);
            let prow = &prow[..];
            for other in before.chunks_mut(cols).chain(after.chunks_mut(cols)) {
                let a = other[c];
                if a != 0 {
                    axpy(&f, other, f.neg(a), prow, c);
                }
            }
            piv.push(c);
            r += 1;
        }
        piv
    }
}

#[inline]
pub fn dot(f: &Field, a: &[Fe], b: &[Fe]) -> Fe {
    if f.is_prime_field() {
        let p = f.p();
        let lim = (u64::MAX / ((p - 1) * (p - 1)).max(1)).max(1);
        let mut acc = 0u64;
        let mut cnt = 0u64;
        for (&x, &y) in a.iter().zip(b) {
            acc += x * y;
            cnt += 1;
            if cnt + 1 >= lim {
                acc %= p;
                cnt = 1;
            }
        }
        acc % p
    } else {
        a.iter().zip(b).fold(0, |s, (&x, &y)| f.add(s, f.mul(x, y)))
    }
}

/// y[from..] += a * x[from..]
#[inline]
pub fn axpy(f: &Field, y: &mut [Fe], a: Fe, x: &[Fe], from: usize) {
    if a == 0 {
        return;
    }
    if f.is_prime_field() {
        let p = f.p();
        for (yi, &xi) in y[from..].iter_mut().zip(&x[from..]) {
            if xi != 0 {
                *yi = (*yi + a * xi) % p;
            }
        }
    } else {
        for (yi, &xi) in y[from..].iter_mut().zip(&x[from..]) {
            if xi != 0 {
                *yi = f.add(*yi, f.mul(a, xi));
            }
        }
    }
}

fn pack_rows(m: &Mat) -> (Vec<u64>, usize) {
    let words = m.cols.div_ceil(64);
    let mut bits = vec![0u64; m.rows * words];
    for r in 0..m.rows {
        for c in 0..m.cols {
            if m.data[r * m.cols + c] != 0 {
                bits[r * words + c / 64] |= 1 << (c % 64);
            }
        }
    }
    (bits, words)
}

fn mul_gf2(a: &Mat, b: &Mat, out: &mut Mat) {
    let (bb, words) = pack_rows(b);
    let mut acc = vec![0u64; words];
    for i in 0..a.rows {
        acc.iter_mut().for_each(|x| *x = 0);
        for t in 0..a.cols {
            if a.data[i * a.cols + t] != 0 {
                for (x, &y) in acc.iter_mut().zip(&bb[t * words..(t + 1) * words]) {
                    *x ^= y;
                }
            }
        }
        for c in 0..b.cols {
            out.data[i * b.cols + c] = (acc[c / 64] >> (c % 64)) & 1;
        }
    }
}

fn rref_gf2(m: &mut Mat) -> Vec<usize> {
    let (mut bits, words) = pack_rows(m);
    let (rows, cols) = (m.rows, m.cols);
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (w, b) = (c / 64, 1u64 << (c % 64));
        let Some(sel) = (r..rows).find(|&i| bits[i * words + w] & b != 0) else { continue };
        if sel != r {
            for j in 0..words {
                bits.swap(sel * words + j, r * words + j);
            }
        }
        let prow: Vec<u64> = bits[r * words..(r + 1) * words].to_vec();
        for i in 0..rows {
            if i != r && bits[i * words + w] & b != 0 {
                for j in w..words {
                    bits[i * words + j] ^= prow[j];
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    for i in 0..rows {
        for c in 0..cols {
            m.data[i * cols + c] = (bits[i * words + c / 64] >> (c % 64)) & 1;
        }
    }
    piv
}
