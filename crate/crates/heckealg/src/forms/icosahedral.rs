//! Icosahedral forms over GF(2) from quintic polynomials with Galois group A5.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dirichlet::DirichletCharFF;
use crate::engine::{primes_up_to, ModularFormSpec};
use crate::error::{invalid, Error, Result};
use crate::ff::{is_prime, poly_factor, prime_field, Poly};

/// A monic integer quintic, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quintic {
    #[serde(with = "bigints")]
    pub coeffs: Vec<BigInt>,
    pub level_override: Option<u64>,
}

mod bigints {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|c| c.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

impl Quintic {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Quintic> {
        if coeffs.len() != 6 || coeffs[5].is_zero() {
            return invalid("a quintic needs exactly six coefficients and a nonzero leading one");
        }
        if !coeffs[5].is_one() {
            return Err(Error::Unsupported("only monic quintics are handled".into()));
        }
        Ok(Quintic { coeffs, level_override: None })
    }

    pub fn from_i64(c: &[i64]) -> Result<Quintic> {
        Quintic::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Parse "c0,c1,...,c5".
    pub fn parse(s: &str) -> Result<Quintic> {
        let coeffs: std::result::Result<Vec<BigInt>, _> = s.split(',').map(|t| t.trim().parse::<BigInt>()).collect();
        Quintic::new(coeffs.map_err(|e| Error::InvalidArgument(format!("bad coefficient list {s:?}: {e}")))?)
    }

    pub fn with_level(mut self, level: u64) -> Quintic {
        self.level_override = Some(level);
        self
    }

    pub fn discriminant(&self) -> BigInt {
        let f = &self.coeffs;
        let df: Vec<BigInt> = (1..f.len()).map(|i| &f[i] * BigInt::from(i)).collect();
        // monic of degree 5: disc = (-1)^10 res(f, f')
        resultant(f, &df)
    }

    pub fn reduce_mod(&self, l: u64) -> Poly {
        let fl = prime_field(l);
        let m = BigInt::from(l);
        let c = self.coeffs.iter().map(|x| ((x % &m + &m) % &m).to_u64().unwrap()).collect();
        Poly::new(&fl, c)
    }

    /// Degrees of the irreducible factors mod l, with multiplicity, descending.
    pub fn degree_pattern(&self, l: u64) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> =
            poly_factor(&self.reduce_mod(l)).expect("nonzero").factors.iter().map(|(g, e)| (g.deg(), *e)).collect();
        v.sort_by(|a, b| b.cmp(a));
        v
    }
}

/// Sylvester resultant via fraction-free elimination.
fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut a = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            a[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            a[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(a)
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(s) = n.to_u64() {
        return is_prime(s);
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'wit: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == nm1 {
                continue 'wit;
            }
        }
        return false;
    }
    true
}

/// Factor |n| by trial division up to 10^6 and a prime-power test on the rest.
fn factor_big(n: &BigInt) -> Result<Vec<(BigUint, u32)>> {
    let mut m = n.abs().to_biguint().unwrap();
    let mut out = Vec::new();
    let mut q = 2u64;
    while q <= 1_000_000 && m > BigUint::one() {
        let bq = BigUint::from(q);
        let mut e = 0;
        while (&m % &bq).is_zero() {
            m /= &bq;
            e += 1;
        }
        if e > 0 {
            out.push((bq, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if m > BigUint::one() {
        let bits = m.bits() as u32;
        let found = (1..=bits).find_map(|k| {
            let r = m.nth_root(k);
            (r.pow(k) == m && is_probable_prime(&r)).then_some((r, k))
        });
        match found {
            Some(rk) => out.push(rk),
            None => return Err(Error::Unsupported(format!("cannot factor the discriminant cofactor {m}"))),
        }
    }
    Ok(out)
}

/// Trace of Frobenius at l in SL2(GF(4)), as a minimal polynomial over GF(2).
pub fn a5_trace(q: &Quintic, l: u64) -> Result<Poly> {
    if !is_prime(l) {
        return invalid(format!("{l} is not prime"));
    }
    if (q.discriminant() % BigInt::from(l)).is_zero() {
        return invalid(format!("{l} divides the discriminant"));
    }
    let f2 = prime_field(2);
    let degs: Vec<usize> = q.degree_pattern(l).iter().map(|&(d, _)| d).collect();
    Ok(match degs.as_slice() {
        [5] => Poly::new(&f2, vec![1, 1, 1]),
        [3, 1, 1] => Poly::new(&f2, vec![1, 1]),
        [2, 2, 1] | [1, 1, 1, 1, 1] => Poly::x(&f2),
        other => return invalid(format!("factorization pattern {other:?} mod {l} does not occur in A5")),
    })
}

fn subset_sums(degs: &[usize]) -> Vec<bool> {
    let mut can = vec![false; 6];
    can[0] = true;
    for &d in degs {
        for s in (d..6).rev() {
            if can[s - d] {
                can[s] = true;
            }
        }
    }
    can
}

/// Irreducibility over Q from factorization patterns at good primes.
fn check_irreducible(q: &Quintic, disc: &BigInt) -> Result<()> {
    if disc.is_zero() {
        return invalid("the quintic is not squarefree");
    }
    let (mut no_linear, mut no_quadratic) = (false, false);
    for l in primes_up_to(5000) {
        if (disc % BigInt::from(l)).is_zero() {
            continue;
        }
        let degs: Vec<usize> = q.degree_pattern(l).iter().map(|&(d, _)| d).collect();
        let sums = subset_sums(&degs);
        no_linear |= !sums[1];
        no_quadratic |= !sums[2];
        if no_linear && no_quadratic {
            return Ok(());
        }
    }
    invalid("the quintic is reducible over the rationals")
}

/// Contribution of a prime dividing the discriminant to the conductor.
fn local_level(q: &Quintic, p: u64, vdisc: u32) -> Result<u64> {
    let fp = prime_field(p);
    let f = q.reduce_mod(p);
    let fact = poly_factor(&f)?.factors;
    // Dedekind: p divides the index iff gcd(F, g, h) != 1
    let mut g = Poly::one(&fp);
    for (gi, _) in &fact {
        g = g.mul(gi);
    }
    let h = f.divrem(&g).0;
    let lift = |a: &Poly| -> Vec<BigInt> { a.coeffs().iter().map(|&c| BigInt::from(c)).collect() };
    let (gz, hz) = (lift(&g), lift(&h));
    let mut prod = vec![BigInt::zero(); gz.len() + hz.len() - 1];
    for (i, a) in gz.iter().enumerate() {
        for (j, b) in hz.iter().enumerate() {
            prod[i + j] += a * b;
        }
    }
    let bp = BigInt::from(p);
    let big_f: Vec<u64> = (0..6)
        .map(|i| {
            let d = &q.coeffs[i] - prod.get(i).cloned().unwrap_or_default();
            let r = d / &bp;
            ((r % &bp + &bp) % &bp).to_u64().unwrap()
        })
        .collect();
    let big_f = Poly::new(&fp, big_f);
    let in_index = !big_f.gcd(&g).gcd(&h).is_one();
    if in_index {
        if p <= 5 || vdisc <= 3 {
            return Ok(1);
        }
        return Err(Error::Unsupported(format!("{p} divides the index; supply the level")));
    }
    let e = fact.iter().map(|&(_, e)| e).max().unwrap_or(1);
    if e == 1 {
        return Ok(1);
    }
    if p <= 5 {
        return Err(Error::Unsupported(format!("wild ramification at {p}; supply the level")));
    }
    Ok(match e {
        5 if p % 5 == 1 => p,
        3 if p % 3 == 1 => p,
        5 | 3 => p * p,
        _ => p,
    })
}

/// Smallest predicted conductor of the icosahedral representation.
pub fn predicted_level(q: &Quintic) -> Result<u64> {
    let disc = q.discriminant();
    check_irreducible(q, &disc)?;
    if let Some(n) = q.level_override {
        return Ok(n);
    }
    let mut level = 1u64;
    for (p, v) in factor_big(&disc)? {
        let p = p.to_u64().ok_or_else(|| Error::Unsupported(format!("prime {p} in the discriminant is too large")))?;
        level = level
            .checked_mul(local_level(q, p, v)?)
            .ok_or_else(|| Error::Unsupported("level overflows".into()))?;
    }
    Ok(level)
}

/// The weight 2 form over GF(2) of smallest predicted level.
pub fn a5_form(q: &Quintic) -> Result<ModularFormSpec> {
    let level = predicted_level(q)?;
    let disc = q.discriminant();
    let qq = q.clone();
    Ok(ModularFormSpec {
        character: DirichletCharFF::trivial(level, &prime_field(2)),
        weight: 2,
        coefficient_function: Arc::new(move |l| {
            if l == 2 || (&disc % BigInt::from(l)).is_zero() {
                None
            } else {
                a5_trace(&qq, l).ok()
            }
        }),
        image_name: Some("A_5".into()),
        defining_polynomial: Some(q.coeffs.clone()),
    })
}
