use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use super::field::{Fe, Field};

/// A univariate polynomial over a finite field, coefficients low to high,
/// with no trailing zeros. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    c: Vec<Fe>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}{:?}", self.field, self.c)
    }
}

impl Poly {
    pub fn new(field: &Field, mut c: Vec<Fe>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { field: field.clone(), c }
    }
    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), c: vec![] }
    }
    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, 1)
    }
    pub fn constant(field: &Field, a: Fe) -> Poly {
        Poly::new(field, vec![a])
    }
    /// x
    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![0, 1])
    }
    /// x - a
    pub fn linear(field: &Field, a: Fe) -> Poly {
        Poly::new(field, vec![field.neg(a), 1])
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c == [1]
    }
    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    /// Degree with the zero polynomial sent to 0, for loop bounds.
    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }
    pub fn lead(&self) -> Fe {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.lead() == 1 {
            return self.clone();
        }
        let inv = self.field.inv(self.lead());
        self.scale(inv)
    }

    pub fn scale(&self, a: Fe) -> Poly {
        let f = &self.field;
        Poly::new(f, self.c.iter().map(|&x| f.mul(x, a)).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        Poly::new(f, (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        Poly::new(f, (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.c.iter().map(|&x| f.neg(x)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut r = vec![0; self.c.len() + o.c.len() - 1];
        if f.is_prime_field() {
            let p = f.p();
            // Delayed reduction: p < 2^31 so a handful of products fit in u64.
            for (i, &a) in self.c.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in o.c.iter().enumerate() {
                    r[i + j] = (r[i + j] + a * b) % p;
                }
            }
        } else {
            for (i, &a) in self.c.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in o.c.iter().enumerate() {
                    r[i + j] = f.add(r[i + j], f.mul(a, b));
                }
            }
        }
        Poly::new(f, r)
    }

    /// Quotient and remainder; panics if the divisor is zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let f = &self.field;
        if self.c.len() < d.c.len() {
            return (Poly::zero(f), self.clone());
        }
        let mut r = self.c.clone();
        let dn = d.c.len() - 1;
        let inv = f.inv(d.lead());
        let mut q = vec![0; r.len() - dn];
        for i in (dn..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            let t = f.mul(c, inv);
            q[i - dn] = t;
            for j in 0..=dn {
                r[i - dn + j] = f.sub(r[i - dn + j], f.mul(t, d.c[j]));
            }
        }
        r.truncate(dn);
        (Poly::new(f, q), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        self.mul(o).divrem(&self.gcd(o)).0.monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        Poly::new(
            f,
            self.c.iter().enumerate().skip(1).map(|(i, &a)| f.mul(a, f.from_i64(i as i64))).collect(),
        )
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.c.iter().rev().fold(0, |acc, &a| f.add(f.mul(acc, x), a))
    }

    pub fn mulmod(&self, o: &Poly, m: &Poly) -> Poly {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut r = Poly::one(&self.field).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mulmod(&b, m);
            }
            b = b.mulmod(&b, m);
            e >>= 1;
        }
        r
    }

    pub fn powmod_big(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut r = Poly::one(&self.field).rem(m);
        let b = self.rem(m);
        for i in (0..e.bits()).rev() {
            r = r.mulmod(&r, m);
            if e.bit(i) {
                r = r.mulmod(&b, m);
            }
        }
        r
    }

    /// x^(q^n) mod m by repeated q-th powering.
    pub fn frobenius_power_of_x(m: &Poly, n: usize) -> Poly {
        let q = m.field.q();
        let mut h = Poly::x(&m.field).rem(m);
        for _ in 0..n {
            h = h.powmod(q, m);
        }
        h
    }

    /// Apply a map to every coefficient (e.g. a field embedding).
    pub fn map_coeffs(&self, target: &Field, f: impl Fn(Fe) -> Fe) -> Poly {
        Poly::new(target, self.c.iter().map(|&a| f(a)).collect())
    }

    /// Order used for canonical output: degree first, then coefficient
    /// vectors compared from the constant term upwards.
    pub fn canonical_cmp(&self, o: &Poly) -> Ordering {
        self.c.len().cmp(&o.c.len()).then_with(|| self.c.cmp(&o.c))
    }

    pub fn to_text(&self) -> String {
        let f = &self.field;
        self.c.iter().map(|&a| f.fmt_elem(a)).collect::<Vec<_>>().join(";")
    }
}

/// Rabin irreducibility test over the polynomial's field.
pub fn is_irreducible(f: &Poly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let fm = f.monic();
    let x = Poly::x(f.field());
    let xqn = Poly::frobenius_power_of_x(&fm, n);
    if !xqn.sub(&x).rem(&fm).is_zero() {
        return false;
    }
    for r in super::field::prime_factors(n as u64) {
        let h = Poly::frobenius_power_of_x(&fm, n / r as usize);
        if !h.sub(&x).gcd(&fm).is_one() {
            return false;
        }
    }
    true
}
