use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Fe, Field};
use super::poly::Poly;
use crate::error::{invalid, Result};

/// Seed used by [`poly_factor`] when none is configured.
pub const DEFAULT_SEED: u64 = 0x6865_636b_6531;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fe,
    /// Monic irreducible factors with multiplicities, sorted canonically.
    pub factors: Vec<(Poly, usize)>,
}

pub fn poly_factor(f: &Poly) -> Result<Factorization> {
    poly_factor_seeded(f, DEFAULT_SEED)
}

pub fn poly_factor_seeded(f: &Poly, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return invalid("cannot factor the zero polynomial");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = f.lead();
    let mut out = Vec::new();
    for (g, m) in squarefree(&f.monic()) {
        for (d, h) in distinct_degree(&g) {
            for irr in equal_degree(&h, d, &mut rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(Factorization { unit, factors: out })
}

/// p-th root of a polynomial whose derivative vanishes.
fn pth_root(f: &Poly) -> Poly {
    let fld = f.field();
    let p = fld.p() as usize;
    let e = fld.q() / fld.p(); // a -> a^(q/p) inverts Frobenius
    let c: Vec<Fe> = (0..=f.deg() / p).map(|i| fld.pow(f.coeff(i * p), e)).collect();
    Poly::new(fld, c)
}

/// Squarefree decomposition of a monic polynomial: pairs (g, m) with g
/// squarefree, pairwise coprime, and f = prod g^m.
pub fn squarefree(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    sqf_rec(f, 1, &mut out);
    out
}

fn sqf_rec(f: &Poly, mult: usize, out: &mut Vec<(Poly, usize)>) {
    if f.deg() == 0 {
        return;
    }
    let p = f.field().p() as usize;
    let d = f.derivative();
    if d.is_zero() {
        sqf_rec(&pth_root(f), mult * p, out);
        return;
    }
    let mut c = f.gcd(&d);
    let mut w = f.divrem(&c).0;
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let z = w.divrem(&y).0;
        if z.deg() > 0 {
            out.push((z.monic(), i * mult));
        }
        i += 1;
        w = y;
        c = c.divrem(&w).0;
    }
    if c.deg() > 0 {
        sqf_rec(&pth_root(&c.monic()), mult * p, out);
    }
}

/// Distinct-degree factorization of a squarefree monic polynomial.
pub fn distinct_degree(f: &Poly) -> Vec<(usize, Poly)> {
    let mut out = Vec::new();
    let x = Poly::x(f.field());
    let q = f.field().q();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(q, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.deg() > 0 {
            rest = rest.divrem(&g).0;
            h = h.rem(&rest);
            out.push((d, g));
        }
    }
    if rest.deg() > 0 {
        out.push((rest.deg(), rest));
    }
    out
}

/// Split a product of distinct irreducibles of degree d (Cantor-Zassenhaus).
pub fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.deg();
    if n == d {
        return vec![f.monic()];
    }
    let fld = f.field();
    let q = fld.q();
    let odd_exp = (fld.p() != 2).then(|| (BigUint::from(q).pow(d as u32) - 1u32) / 2u32);
    loop {
        let a = Poly::new(fld, (0..n).map(|_| rng.gen_range(0..q)).collect());
        if a.deg() == 0 {
            continue;
        }
        let b = match &odd_exp {
            Some(e) => a.powmod_big(e, f).sub(&Poly::one(fld)),
            None => {
                // Absolute trace from GF(2^(kd)) down to GF(2).
                let steps = fld.k() as usize * d;
                let mut t = a.rem(f);
                let mut s = t.clone();
                for _ in 1..steps {
                    t = t.mulmod(&t, f);
                    s = s.add(&t);
                }
                s
            }
        };
        let g = b.gcd(f);
        if g.deg() > 0 && g.deg() < n {
            let h = f.divrem(&g).0;
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h.monic(), d, rng));
            return out;
        }
    }
}

/// Roots of f in its coefficient field, sorted by encoding.
pub fn roots(f: &Poly) -> Vec<Fe> {
    if f.is_zero() {
        return vec![];
    }
    let fac = poly_factor(f).expect("nonzero");
    let fld = f.field();
    let mut r: Vec<Fe> =
        fac.factors.iter().filter(|(g, _)| g.deg() == 1).map(|(g, _)| fld.neg(g.coeff(0))).collect();
    r.sort_by_key(|&a| fld.digits(a));
    r
}

/// Minimal polynomial over the prime subfield of an element of GF(p^k).
pub fn min_poly_element(fld: &Field, a: Fe) -> Poly {
    let mut conj = vec![a];
    let mut b = fld.frobenius(a);
    while b != a {
        conj.push(b);
        b = fld.frobenius(b);
    }
    let mut m = Poly::one(fld);
    for c in conj {
        m = m.mul(&Poly::linear(fld, c));
    }
    let fp = fld.prime_subfield();
    debug_assert!(m.coeffs().iter().all(|&c| c < fld.p()));
    Poly::new(&fp, m.coeffs().to_vec())
}

/// Lift a polynomial over GF(p) into any field of characteristic p.
pub fn lift_prime_poly(f: &Poly, target: &Field) -> Poly {
    assert!(f.field().is_prime_field() && f.field().p() == target.p());
    f.map_coeffs(target, |a| a)
}

/// An embedding of a small field into a larger one of the same
/// characteristic, sending the generator to the root of the small modulus
/// with least coefficient vector.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub small: Field,
    pub big: Field,
    powers: Vec<Fe>,
}

impl Embedding {
    pub fn new(small: &Field, big: &Field) -> Result<Embedding> {
        if small.p() != big.p() || !big.k().is_multiple_of(small.k()) {
            return invalid("no embedding between these fields");
        }
        if small.is_prime_field() {
            return Ok(Embedding { small: small.clone(), big: big.clone(), powers: vec![1] });
        }
        let m = Poly::new(&small.prime_subfield(), small.modulus().to_vec());
        let rs = roots(&lift_prime_poly(&m, big));
        let r = rs[0];
        let mut powers = vec![1];
        for _ in 1..small.k() {
            let last = *powers.last().unwrap();
            powers.push(big.mul(last, r));
        }
        Ok(Embedding { small: small.clone(), big: big.clone(), powers })
    }

    pub fn apply(&self, a: Fe) -> Fe {
        if self.small.is_prime_field() {
            return a;
        }
        let b = &self.big;
        self.small
            .digits(a)
            .iter()
            .zip(&self.powers)
            .fold(0, |acc, (&d, &pw)| b.add(acc, b.mul(d, pw)))
    }

    pub fn apply_poly(&self, f: &Poly) -> Poly {
        f.map_coeffs(&self.big, |a| self.apply(a))
    }
}
