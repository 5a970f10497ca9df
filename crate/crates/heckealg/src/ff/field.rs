use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{invalid, Result};

/// An element of GF(p^k), encoded as the integer sum c_i p^i of its
/// coefficient vector with respect to the power basis of the modulus.
pub type Fe = u64;

/// Largest field order for which log/antilog tables are built.
const TABLE_LIMIT: u64 = 1 << 20;

struct Tables {
    log: Vec<u32>,
    exp: Vec<u32>,
}

struct FieldInner {
    p: u64,
    k: u32,
    q: u64,
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

/// A finite field GF(p^k). Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.k)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factors of n (with repetition removed), by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn field_cache() -> &'static Mutex<HashMap<(u64, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// GF(p^k) with the least monic irreducible modulus of degree k, scanning
/// the lower coefficients in base-p counting order (constant term fastest).
pub fn make_field(p: u64, k: u32) -> Result<Field> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if p >= 1 << 31 {
        return invalid("characteristic must be below 2^31");
    }
    if k == 0 || k > 64 {
        return invalid("extension degree must lie in 1..=64");
    }
    let q = checked_pow(p, k).filter(|&q| q < 1 << 62);
    let Some(q) = q else {
        return invalid(format!("field order {p}^{k} too large"));
    };
    if let Some(f) = field_cache().lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        least_irreducible(p, k as usize)
    };
    let f = build(p, k, q, modulus);
    field_cache().lock().unwrap().insert((p, k), f.clone());
    Ok(f)
}

/// The prime field GF(p); panics on a non-prime.
pub fn prime_field(p: u64) -> Field {
    make_field(p, 1).expect("prime characteristic")
}

fn checked_pow(p: u64, k: u32) -> Option<u64> {
    let mut r = 1u64;
    for _ in 0..k {
        r = r.checked_mul(p)?;
    }
    Some(r)
}

fn least_irreducible(p: u64, k: usize) -> Vec<u64> {
    let fp = prime_field(p);
    let total = checked_pow(p, k as u32).unwrap();
    for t in 0..total {
        let mut c = Vec::with_capacity(k + 1);
        let mut x = t;
        for _ in 0..k {
            c.push(x % p);
            x /= p;
        }
        c.push(1);
        if c[0] == 0 {
            continue;
        }
        let f = super::Poly::new(&fp, c.clone());
        if super::poly::is_irreducible(&f) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn build(p: u64, k: u32, q: u64, modulus: Vec<u64>) -> Field {
    let mut inner = FieldInner { p, k, q, modulus, tables: None };
    if q <= TABLE_LIMIT && k > 1 {
        let slow = Field(Arc::new(FieldInner { tables: None, ..clone_inner(&inner) }));
        let g = slow.primitive_element_slow();
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; q as usize];
        let mut x: Fe = 1;
        for i in 0..n {
            exp[i] = x as u32;
            exp[i + n] = x as u32;
            log[x as usize] = i as u32;
            x = slow.mul(x, g);
        }
        inner.tables = Some(Tables { log, exp });
    }
    Field(Arc::new(inner))
}

fn clone_inner(f: &FieldInner) -> FieldInner {
    FieldInner { p: f.p, k: f.k, q: f.q, modulus: f.modulus.clone(), tables: None }
}

impl Field {
    #[inline]
    pub fn p(&self) -> u64 {
        self.0.p
    }
    #[inline]
    pub fn k(&self) -> u32 {
        self.0.k
    }
    #[inline]
    pub fn q(&self) -> u64 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }
    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }
    pub fn prime_subfield(&self) -> Field {
        prime_field(self.0.p)
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        0
    }
    #[inline]
    pub fn one(&self) -> Fe {
        1
    }

    /// Image of an integer in the prime subfield.
    pub fn from_i64(&self, n: i64) -> Fe {
        n.rem_euclid(self.0.p as i64) as u64
    }

    pub fn digits(&self, a: Fe) -> Vec<u64> {
        let p = self.0.p;
        let mut x = a;
        (0..self.0.k)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u64]) -> Fe {
        let p = self.0.p;
        let mut r = 0u64;
        for &c in d.iter().rev() {
            r = r * p + c % p;
        }
        r
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        if self.0.k == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        if p == 2 {
            return a ^ b;
        }
        let (mut x, mut y, mut r, mut pw) = (a, b, 0u64, 1u64);
        while x > 0 || y > 0 {
            let s = (x % p + y % p) % p;
            r += s * pw;
            pw *= p;
            x /= p;
            y /= p;
        }
        r
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.p;
        if self.0.k == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        if p == 2 {
            return a;
        }
        let (mut x, mut r, mut pw) = (a, 0u64, 1u64);
        while x > 0 {
            let d = x % p;
            r += ((p - d) % p) * pw;
            pw *= p;
            x /= p;
        }
        r
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        if self.0.k == 1 {
            let p = self.0.p;
            return if a >= b { a - b } else { a + p - b };
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if self.0.k == 1 {
            return a * b % self.0.p;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        if let Some(t) = &self.0.tables {
            let i = t.log[a as usize] as usize + t.log[b as usize] as usize;
            return t.exp[i] as u64;
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        let k = self.0.k as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let m = &self.0.modulus;
        for i in (k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                prod[i - k + j] = (prod[i - k + j] + (p - c) * m[j]) % p;
            }
            prod[i] = 0;
        }
        self.from_digits(&prod[..k])
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut r = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a != 0, "inverse of zero");
        if self.0.k == 1 {
            let p = self.0.p as i64;
            let (mut r0, mut r1, mut s0, mut s1) = (p, a as i64, 0i64, 1i64);
            while r1 != 0 {
                let t = r0 / r1;
                (r0, r1) = (r1, r0 - t * r1);
                (s0, s1) = (s1, s0 - t * s1);
            }
            return s0.rem_euclid(p) as u64;
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let l = t.log[a as usize] as u64;
            return t.exp[((n - l) % n) as usize] as u64;
        }
        self.pow(a, self.0.q - 2)
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.0.p)
    }

    /// The class of x modulo the defining polynomial.
    pub fn gen(&self) -> Fe {
        if self.0.k == 1 {
            0
        } else {
            self.0.p
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..self.0.q
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> u64 {
        assert!(a != 0);
        let mut n = self.0.q - 1;
        for r in prime_factors(self.0.q - 1) {
            while n.is_multiple_of(r) && self.pow(a, n / r) == 1 {
                n /= r;
            }
        }
        n
    }

    fn primitive_element_slow(&self) -> Fe {
        let n = self.0.q - 1;
        let fs = prime_factors(n);
        (1..self.0.q)
            .find(|&a| fs.iter().all(|&r| self.pow(a, n / r) != 1))
            .unwrap()
    }

    /// Least primitive element in encoding order.
    pub fn primitive_element(&self) -> Fe {
        if self.0.q == 2 {
            return 1;
        }
        self.primitive_element_slow()
    }

    /// A primitive n-th root of unity, if n divides q - 1.
    pub fn root_of_unity(&self, n: u64) -> Option<Fe> {
        if n == 0 || !(self.0.q - 1).is_multiple_of(n) {
            return None;
        }
        Some(self.pow(self.primitive_element(), (self.0.q - 1) / n))
    }

    pub fn fmt_elem(&self, a: Fe) -> String {
        self.digits(a).iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_elem(&self, s: &str) -> Result<Fe> {
        let ds: std::result::Result<Vec<u64>, _> = s.split(',').map(|t| t.trim().parse::<u64>()).collect();
        match ds {
            Ok(ds) if ds.len() == self.0.k as usize && ds.iter().all(|&d| d < self.0.p) => Ok(self.from_digits(&ds)),
            _ => invalid(format!("bad field element {s:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli() {
        assert_eq!(make_field(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(make_field(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert!(make_field(4, 1).is_err());
    }

    // Independent check: the least cubic with no root in GF(11) is irreducible.
    #[test]
    fn gf11_cubic_is_least_rootless() {
        let f = make_field(11, 3).unwrap();
        let mut expected = None;
        'scan: for t in 0..1331u64 {
            let c = [t % 11, t / 11 % 11, t / 121];
            for x in 0..11u64 {
                if (x * x * x + c[2] * x * x + c[1] * x + c[0]) % 11 == 0 {
                    continue 'scan;
                }
            }
            expected = Some(vec![c[0], c[1], c[2], 1]);
            break;
        }
        assert_eq!(f.modulus(), expected.unwrap().as_slice());
    }

    #[test]
    fn table_and_slow_multiplication_agree() {
        let f = make_field(3, 4).unwrap();
        for a in 0..81 {
            for b in 0..81 {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
            }
        }
    }

    #[test]
    fn inverses_and_frobenius() {
        let f = make_field(5, 3).unwrap();
        for a in 1..f.q() {
            assert_eq!(f.mul(a, f.inv(a)), 1);
            let mut b = a;
            for _ in 0..3 {
                b = f.frobenius(b);
            }
            assert_eq!(a, b);
        }
    }

    #[test]
    fn element_text_round_trip() {
        let f = make_field(7, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse_elem(&f.fmt_elem(a)).unwrap(), a);
        }
    }
}
