//! Unit groups (Z/NZ)^* and Dirichlet characters with values in a finite field.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::error::{invalid, Result};
use crate::ff::{prime_factors, Fe, Field};

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn powmod(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut r = 1 % n;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % n as u128) as u64;
        }
        b = (b as u128 * b as u128 % n as u128) as u64;
        e >>= 1;
    }
    r
}

pub fn inverse_mod(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(n as i128) as u64)
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, &q| acc / q * (q - 1))
}

/// Kronecker symbol (a/n).
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return (a.abs() == 1) as i32;
    }
    let mut res = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            res = -res;
        }
    }
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            res = -res;
        }
    }
    // Jacobi symbol (a/n) for odd n > 0
    let mut a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        a %= n;
    }
    if n == 1 {
        res
    } else {
        0
    }
}

#[derive(Clone, Debug)]
struct Component {
    /// prime power modulus of this factor
    modulus: u64,
    /// generator as a residue mod the prime power
    local_gen: u64,
    /// generator as a residue mod N (CRT lift, 1 on the other factors)
    gen: u64,
    order: u64,
    /// true for the (-1) factor of a 2-power modulus
    sign: bool,
}

/// (Z/NZ)^* as a product of cyclic groups.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    n: u64,
    comps: Vec<Component>,
}

fn primitive_root_prime_power(q: u64, e: u32) -> u64 {
    let m = q.pow(e);
    let phi = m / q * (q - 1);
    let fs = prime_factors(phi);
    (2..m).find(|&g| g % q != 0 && fs.iter().all(|&r| powmod(g, phi / r, m) != 1)).unwrap()
}

fn crt_lift(a: u64, m: u64, n: u64) -> u64 {
    // x = a mod m, x = 1 mod n/m
    let rest = n / m;
    if rest == 1 {
        return a % n;
    }
    let inv = inverse_mod(rest % m, m).unwrap();
    let t = ((a + m - 1) % m) as u128 * inv as u128 % m as u128;
    ((1 + rest as u128 * t) % n as u128) as u64
}

fn bsgs(g: u64, h: u64, order: u64, m: u64) -> Option<u64> {
    let s = (order as f64).sqrt().ceil() as u64 + 1;
    let mut baby = HashMap::new();
    let mut x = 1 % m;
    for j in 0..s {
        baby.entry(x).or_insert(j);
        x = (x as u128 * g as u128 % m as u128) as u64;
    }
    let ginv_s = powmod(inverse_mod(g, m)?, s, m);
    let mut y = h % m;
    for i in 0..=s {
        if let Some(&j) = baby.get(&y) {
            let e = i * s + j;
            if e < order || order == 0 {
                return Some(e % order.max(1));
            }
        }
        y = (y as u128 * ginv_s as u128 % m as u128) as u64;
    }
    None
}

impl UnitGroup {
    pub fn new(n: u64) -> UnitGroup {
        assert!(n >= 1);
        let mut comps = Vec::new();
        let mut rest = n;
        for q in prime_factors(n) {
            let mut e = 0u32;
            while rest.is_multiple_of(q) {
                rest /= q;
                e += 1;
            }
            let m = q.pow(e);
            if q == 2 {
                if e >= 2 {
                    comps.push(Component { modulus: m, local_gen: m - 1, gen: crt_lift(m - 1, m, n), order: 2, sign: true });
                }
                if e >= 3 {
                    comps.push(Component { modulus: m, local_gen: 5, gen: crt_lift(5, m, n), order: m / 4, sign: false });
                }
            } else {
                let g = primitive_root_prime_power(q, e);
                comps.push(Component { modulus: m, local_gen: g, gen: crt_lift(g, m, n), order: m / q * (q - 1), sign: false });
            }
        }
        UnitGroup { n, comps }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    /// (generator residue mod N, order) pairs.
    pub fn generators(&self) -> Vec<(u64, u64)> {
        self.comps.iter().map(|c| (c.gen, c.order)).collect()
    }

    pub fn order(&self) -> u64 {
        self.comps.iter().map(|c| c.order).product()
    }

    /// Exponents of a unit with respect to the generators.
    pub fn dlog(&self, x: u64) -> Option<Vec<u64>> {
        if gcd(x % self.n, self.n) != 1 {
            return None;
        }
        let mut out = Vec::with_capacity(self.comps.len());
        let mut i = 0;
        while i < self.comps.len() {
            let c = &self.comps[i];
            let y = x % c.modulus;
            if c.sign {
                // 2-power part: y = (-1)^a 5^b
                let neg = y % 4 == 3;
                out.push(neg as u64);
                if i + 1 < self.comps.len() && self.comps[i + 1].modulus == c.modulus {
                    let z = if neg { c.modulus - y } else { y };
                    let nc = &self.comps[i + 1];
                    out.push(bsgs(5, z, nc.order, c.modulus)?);
                    i += 1;
                }
            } else {
                out.push(bsgs(c.local_gen, y, c.order, c.modulus)?);
            }
            i += 1;
        }
        Some(out)
    }
}

/// A Dirichlet character mod N with values in a finite field, stored by its
/// values on the unit group generators.
#[derive(Clone)]
pub struct DirichletCharFF {
    group: Arc<UnitGroup>,
    field: Field,
    values: Vec<Fe>,
    table: Arc<OnceLock<Vec<Fe>>>,
}

impl std::fmt::Debug for DirichletCharFF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DirichletCharFF(mod {}, {:?}, {:?})", self.group.n, self.field, self.values)
    }
}

impl PartialEq for DirichletCharFF {
    fn eq(&self, o: &Self) -> bool {
        self.group.n == o.group.n && self.field == o.field && self.values == o.values
    }
}

pub fn unit_group(n: u64) -> UnitGroup {
    UnitGroup::new(n)
}

impl DirichletCharFF {
    pub fn trivial(n: u64, field: &Field) -> DirichletCharFF {
        let group = UnitGroup::new(n);
        let values = vec![1; group.comps.len()];
        DirichletCharFF { group: Arc::new(group), field: field.clone(), values, table: Default::default() }
    }

    pub fn from_generator_values(n: u64, field: &Field, values: Vec<Fe>) -> Result<DirichletCharFF> {
        let group = UnitGroup::new(n);
        if values.len() != group.comps.len() {
            return invalid(format!("expected {} generator values, got {}", group.comps.len(), values.len()));
        }
        for (c, &v) in group.comps.iter().zip(&values) {
            if v >= field.q() || v == 0 || field.pow(v, c.order) != 1 {
                return invalid("generator value is not a root of unity of the generator's order");
            }
        }
        Ok(DirichletCharFF { group: Arc::new(group), field: field.clone(), values, table: Default::default() })
    }

    pub fn modulus(&self) -> u64 {
        self.group.n
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn group(&self) -> &UnitGroup {
        &self.group
    }
    pub fn generator_values(&self) -> &[Fe] {
        &self.values
    }
    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 1)
    }

    fn value_table(&self) -> &[Fe] {
        self.table.get_or_init(|| {
            let n = self.group.n as usize;
            let f = &self.field;
            let mut t = vec![0; n.max(1)];
            if n == 1 {
                t[0] = 1;
                return t;
            }
            // enumerate the group as products of generator powers
            let mut elems: Vec<(u64, Fe)> = vec![(1, 1)];
            for (c, &v) in self.group.comps.iter().zip(&self.values) {
                let mut next = Vec::with_capacity(elems.len() * c.order as usize);
                for &(x, val) in &elems {
                    let (mut y, mut w) = (x, val);
                    for _ in 0..c.order {
                        next.push((y, w));
                        y = (y as u128 * c.gen as u128 % n as u128) as u64;
                        w = f.mul(w, v);
                    }
                }
                elems = next;
            }
            for (x, v) in elems {
                t[x as usize] = v;
            }
            t
        })
    }

    /// chi(n), zero when gcd(n, N) > 1.
    pub fn eval(&self, n: i64) -> Fe {
        let m = self.group.n as i64;
        self.value_table()[n.rem_euclid(m) as usize]
    }

    /// chi(n) via discrete logarithms, without the cached table.
    pub fn eval_by_dlog(&self, n: i64) -> Fe {
        let x = n.rem_euclid(self.group.n as i64) as u64;
        match self.group.dlog(x) {
            None => 0,
            Some(e) => {
                let f = &self.field;
                e.iter().zip(&self.values).fold(1, |acc, (&k, &v)| f.mul(acc, f.pow(v, k)))
            }
        }
    }

    pub fn order(&self) -> u64 {
        let f = &self.field;
        let mut l = 1u64;
        for &v in &self.values {
            let o = f.order(v);
            l = l / gcd(l, o) * o;
        }
        l
    }

    pub fn conductor(&self) -> u64 {
        let n = self.group.n;
        let mut divs: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
        divs.sort();
        for d in divs {
            let ok = (1..n).step_by(1).filter(|&x| x % d == 1 % d && gcd(x, n) == 1).all(|x| self.eval(x as i64) == 1);
            if ok {
                return d;
            }
        }
        n
    }

    /// Same character with values moved into a larger field.
    pub fn extend(&self, emb: &crate::ff::Embedding) -> DirichletCharFF {
        DirichletCharFF {
            group: self.group.clone(),
            field: emb.big.clone(),
            values: self.values.iter().map(|&v| emb.apply(v)).collect(),
            table: Default::default(),
        }
    }
}

/// The quadratic character of the discriminant +-N (sign making it 1 mod 4).
pub fn legendre_character(n: u64, field: &Field) -> Result<DirichletCharFF> {
    if n.is_multiple_of(2) {
        return invalid("Legendre character needs an odd modulus");
    }
    if field.p() == 2 {
        return invalid("Legendre character needs characteristic different from 2");
    }
    let d = if n % 4 == 1 { n as i64 } else { -(n as i64) };
    let group = UnitGroup::new(n);
    let values = group
        .comps
        .iter()
        .map(|c| if kronecker(d, c.gen as i64) == 1 { 1 } else { field.neg(1) })
        .collect();
    Ok(DirichletCharFF { group: Arc::new(group), field: field.clone(), values, table: Default::default() })
}
