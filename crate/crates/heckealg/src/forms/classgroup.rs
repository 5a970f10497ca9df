//! Class groups of imaginary quadratic orders via reduced binary quadratic forms.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dirichlet::kronecker;
use crate::error::{invalid, Result};

/// The form a x^2 + b x y + c y^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // (g, x, y) with a x + b y = g >= 0
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> QuadForm {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// The equivalent reduced form (positive definite forms only).
    pub fn reduce(self) -> QuadForm {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        let normalize = |a: i128, b: i128, c: i128| -> (i128, i128, i128) {
            if -a < b && b <= a {
                return (a, b, c);
            }
            let r = (a - b).div_euclid(2 * a);
            (a, b + 2 * r * a, a * r * r + b * r + c)
        };
        (a, b, c) = normalize(a, b, c);
        while a > c {
            (a, b, c) = normalize(c, -b, a);
        }
        if a == c && b < 0 {
            b = -b;
        }
        QuadForm { a: a as i64, b: b as i64, c: c as i64 }
    }

    pub fn inverse(&self) -> QuadForm {
        QuadForm { a: self.a, b: -self.b, c: self.c }.reduce()
    }

    /// Gaussian composition, reduced.
    pub fn compose(&self, o: &QuadForm) -> QuadForm {
        let (mut f1, mut f2) = (*self, *o);
        if f1.a > f2.a {
            std::mem::swap(&mut f1, &mut f2);
        }
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (d, y1) = if a2 % a1 == 0 {
            (a1, 0)
        } else {
            let (d, u, _) = ext_gcd(a2, a1);
            (d, u)
        };
        let (d1, x2, y2) = if s % d == 0 {
            (d, 0, -1)
        } else {
            let (d1, x2, y2) = ext_gcd(s, d);
            (d1, x2, -y2)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
        QuadForm::from_i128(a3, b3, c3).reduce()
    }

    fn from_i128(a: i128, b: i128, c: i128) -> QuadForm {
        QuadForm { a: a as i64, b: b as i64, c: c as i64 }
    }
}

/// Cl(d) with a triangular presentation: every class is uniquely
/// prod g_i^(x_i) with 0 <= x_i < m_i.
#[derive(Clone, Debug)]
pub struct QuadClassGroup {
    pub discriminant: i64,
    pub forms: Vec<QuadForm>,
    index: HashMap<QuadForm, usize>,
    pub generators: Vec<usize>,
    /// m_i: order of g_i modulo the subgroup of the earlier generators
    pub relative_orders: Vec<u64>,
    /// exponents of g_i^(m_i) in the earlier generators
    pub relations: Vec<Vec<u64>>,
    coords: Vec<Vec<u64>>,
}

impl QuadClassGroup {
    pub fn class_number(&self) -> usize {
        self.forms.len()
    }

    pub fn identity(&self) -> QuadForm {
        QuadForm::new(1, 1, (1 - self.discriminant) / 4)
    }

    pub fn index_of(&self, f: &QuadForm) -> Option<usize> {
        self.index.get(&f.reduce()).copied()
    }

    pub fn coordinates(&self, f: &QuadForm) -> Option<&[u64]> {
        self.index_of(f).map(|i| self.coords[i].as_slice())
    }

    pub fn order_of(&self, f: &QuadForm) -> u64 {
        let e = self.identity();
        let mut x = f.reduce();
        let mut k = 1;
        while x != e {
            x = x.compose(f);
            k += 1;
        }
        k
    }

    /// True iff the group is cyclic.
    pub fn is_cyclic(&self) -> bool {
        let h = self.class_number() as u64;
        self.forms.iter().any(|f| self.order_of(f) == h)
    }

    /// Elementary divisors d_1 | d_2 | ... from the triangular presentation.
    pub fn invariants(&self) -> Vec<u64> {
        // Smith normal form of the relation matrix
        let r = self.generators.len();
        let mut m: Vec<Vec<i128>> = (0..r)
            .map(|i| {
                let mut row = vec![0i128; r];
                for (j, &e) in self.relations[i].iter().enumerate() {
                    row[j] = -(e as i128);
                }
                row[i] = self.relative_orders[i] as i128;
                row
            })
            .collect();
        let mut diag = Vec::new();
        let mut rows: Vec<usize> = (0..r).collect();
        let mut cols: Vec<usize> = (0..r).collect();
        while !rows.is_empty() {
            // pivot: smallest nonzero absolute value
            let mut best: Option<(usize, usize)> = None;
            for &i in &rows {
                for &j in &cols {
                    if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            let mut done = true;
            for &i in &rows {
                if i != pi && m[i][pj] != 0 {
                    let q = m[i][pj].div_euclid(m[pi][pj]);
                    for &j in &cols {
                        m[i][j] -= q * m[pi][j];
                    }
                    if m[i][pj] != 0 {
                        done = false;
                    }
                }
            }
            for &j in &cols {
                if j != pj && m[pi][j] != 0 {
                    let q = m[pi][j].div_euclid(m[pi][pj]);
                    for &i in &rows {
                        m[i][j] -= q * m[i][pj];
                    }
                    if m[pi][j] != 0 {
                        done = false;
                    }
                }
            }
            if !done {
                continue;
            }
            // divisibility condition
            let p = m[pi][pj];
            if let Some((bi, _)) = rows
                .iter()
                .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
                .find(|&(i, j)| i != pi && j != pj && m[i][j] % p != 0)
            {
                for &j in &cols {
                    m[pi][j] += m[bi][j];
                }
                continue;
            }
            diag.push(p.unsigned_abs() as u64);
            rows.retain(|&i| i != pi);
            cols.retain(|&j| j != pj);
        }
        let mut out: Vec<u64> = diag.into_iter().filter(|&d| d != 1).collect();
        out.sort();
        out
    }
}

/// Class group of the imaginary quadratic order of discriminant d.
pub fn class_group(d: i64) -> Result<QuadClassGroup> {
    if d >= 0 {
        return Err(crate::Error::Unsupported(format!("discriminant {d} is not negative")));
    }
    if d.rem_euclid(4) != 1 {
        return invalid(format!("discriminant {d} is not 1 mod 4"));
    }
    let mut forms = Vec::new();
    let amax = ((-d) as f64 / 3.0).sqrt() as i64 + 1;
    for a in 1..=amax {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = QuadForm::new(a, b, c);
            if !f.is_reduced() {
                continue;
            }
            let g = crate::dirichlet::gcd(crate::dirichlet::gcd(a as u64, b.unsigned_abs()), c as u64);
            if g == 1 {
                forms.push(f);
            }
        }
    }
    let index: HashMap<QuadForm, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let h = forms.len();
    let e = QuadForm::new(1, 1, (1 - d) / 4);
    let order = |f: &QuadForm| -> u64 {
        let mut x = *f;
        let mut k = 1;
        while x != e {
            x = x.compose(f);
            k += 1;
        }
        k
    };
    let orders: Vec<u64> = forms.iter().map(order).collect();
    let mut coords: Vec<Option<Vec<u64>>> = vec![None; h];
    coords[index[&e]] = Some(vec![]);
    let mut members = vec![index[&e]];
    let mut generators = Vec::new();
    let mut relative_orders = Vec::new();
    let mut relations = Vec::new();
    while members.len() < h {
        let g = (0..h).filter(|&i| coords[i].is_none()).max_by_key(|&i| (orders[i], std::cmp::Reverse(i))).unwrap();
        let gf = forms[g];
        let r = generators.len();
        // find m with g^m in the subgroup
        let mut pw = gf;
        let mut m = 1u64;
        while coords[index[&pw]].is_none() {
            pw = pw.compose(&gf);
            m += 1;
        }
        let rel = coords[index[&pw]].clone().unwrap();
        let mut rel = rel;
        rel.resize(r, 0);
        for c in coords.iter_mut().flatten() {
            c.resize(r + 1, 0);
        }
        let old = members.clone();
        let mut gk = gf;
        for k in 1..m {
            for &x in &old {
                let y = index[&forms[x].compose(&gk)];
                let mut c = coords[x].clone().unwrap();
                c[r] = k;
                coords[y] = Some(c);
                members.push(y);
            }
            gk = gk.compose(&gf);
        }
        generators.push(g);
        relative_orders.push(m);
        relations.push(rel);
    }
    let r = generators.len();
    let coords = coords
        .into_iter()
        .map(|c| {
            let mut c = c.unwrap();
            c.resize(r, 0);
            c
        })
        .collect();
    Ok(QuadClassGroup { discriminant: d, forms, index, generators, relative_orders, relations, coords })
}

/// Behaviour of a rational prime in the quadratic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeClass {
    Inert,
    /// class of one of the two primes above l (the other is its inverse)
    Split(QuadForm),
    Ramified(QuadForm),
}

pub fn prime_class(d: i64, l: u64) -> PrimeClass {
    let li = l as i64;
    match kronecker(d, li) {
        -1 => PrimeClass::Inert,
        k => {
            // least b >= 0 with b = d mod 2 and b^2 = d mod 4l
            let m = 4 * li as i128;
            let b = (0..2 * li)
                .find(|&b| (b - d).rem_euclid(2) == 0 && ((b as i128) * (b as i128) - d as i128).rem_euclid(m) == 0)
                .expect("prime is not split or ramified");
            let c = ((b as i128 * b as i128 - d as i128) / m) as i64;
            let f = QuadForm::new(li, b, c).reduce();
            if k == 0 {
                PrimeClass::Ramified(f)
            } else {
                PrimeClass::Split(f)
            }
        }
    }
}

/// A character of the class group, as exponents t_i in Z/n of the
/// generators: chi(prod g_i^(x_i)) = zeta_n^(sum x_i t_i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassCharacter {
    pub order: u64,
    pub exponents: Vec<u64>,
}

impl ClassCharacter {
    pub fn exponent_at(&self, g: &QuadClassGroup, f: &QuadForm) -> u64 {
        let x = g.coordinates(f).expect("form of another discriminant");
        x.iter().zip(&self.exponents).fold(0, |acc, (&a, &t)| (acc + a * t) % self.order)
    }

    fn scaled(&self, k: u64) -> ClassCharacter {
        ClassCharacter { order: self.order, exponents: self.exponents.iter().map(|&t| t * k % self.order).collect() }
    }
}

/// All characters of the group.
pub fn class_characters(g: &QuadClassGroup) -> Vec<ClassCharacter> {
    let h = g.class_number() as u64;
    let r = g.generators.len();
    let mut out = Vec::new();
    let mut cur: Vec<u64> = Vec::with_capacity(r);
    fn rec(g: &QuadClassGroup, h: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let i = cur.len();
        if i == g.generators.len() {
            out.push(cur.clone());
            return;
        }
        let m = g.relative_orders[i];
        let c = g.relations[i].iter().zip(cur.iter()).fold(0u64, |acc, (&e, &t)| (acc + e * t) % h);
        debug_assert_eq!(c % m, 0);
        for k in 0..m {
            cur.push((c / m + k * (h / m)) % h);
            rec(g, h, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(g, h, &mut cur, &mut raw);
    for t in raw {
        let gg = t.iter().fold(h, |a, &b| crate::dirichlet::gcd(a, b));
        let n = h / gg;
        out.push(ClassCharacter { order: n, exponents: t.iter().map(|&x| x / gg % n.max(1)).collect() });
    }
    out.sort();
    out
}

/// Orbit representatives of the characters of order n >= 3 prime to p,
/// under chi -> chi^p and, when `with_inverse`, chi -> chi^-1. The
/// representative is the least element of its orbit.
pub fn character_classes(g: &QuadClassGroup, p: u64, with_inverse: bool) -> Vec<ClassCharacter> {
    let mut out = Vec::new();
    for chi in class_characters(g) {
        let n = chi.order;
        if n < 3 || crate::dirichlet::gcd(n, p) != 1 {
            continue;
        }
        let mut orbit = Vec::new();
        let mut k = 1u64;
        loop {
            orbit.push(chi.scaled(k));
            if with_inverse {
                orbit.push(chi.scaled(n - k));
            }
            k = k * (p % n) % n;
            if k == 1 {
                break;
            }
        }
        if orbit.iter().all(|o| chi <= *o) {
            out.push(chi);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // Oracle: count reduced forms by brute force over a bounding box.
    fn brute_class_number(d: i64) -> usize {
        let mut n = 0;
        for a in 1..200i64 {
            for b in -a..=a {
                if (b * b - d) % (4 * a) == 0 {
                    let c = (b * b - d) / (4 * a);
                    let f = QuadForm::new(a, b, c);
                    let g = crate::dirichlet::gcd(crate::dirichlet::gcd(a as u64, b.unsigned_abs()), c as u64);
                    if c >= a && f.is_reduced() && g == 1 {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn class_numbers() {
        for (d, h) in [(-7i64, 1usize), (-23, 3), (-431, 21), (-2039, 45), (-3, 1), (-15, 2), (-255, 12)] {
            let g = class_group(d).unwrap();
            assert_eq!(g.class_number(), h, "d={d}");
            assert_eq!(brute_class_number(d), h);
        }
        assert!(class_group(-431).unwrap().is_cyclic());
        assert_eq!(class_group(-431).unwrap().invariants(), vec![21]);
        assert_eq!(class_group(-255).unwrap().invariants(), vec![2, 6]);
        assert_eq!(class_group(-23).unwrap().forms, vec![QuadForm::new(1, 1, 6), QuadForm::new(2, -1, 3), QuadForm::new(2, 1, 3)]);
    }

    #[test]
    fn bad_discriminants() {
        assert!(class_group(-8).is_err());
        assert!(matches!(class_group(5), Err(crate::Error::Unsupported(_))));
    }

    #[test]
    fn group_law() {
        for d in [-23i64, -431, -255, -2039, -3299] {
            let g = class_group(d).unwrap();
            let e = g.identity();
            let fs = &g.forms;
            for x in fs.iter().take(12) {
                assert_eq!(x.compose(&e), *x);
                assert_eq!(x.compose(&x.inverse()), e);
                assert_eq!(g.class_number() as u64 % g.order_of(x), 0);
                for y in fs.iter().take(12) {
                    assert_eq!(x.compose(y), y.compose(x));
                    assert_eq!(x.compose(y).discriminant(), d);
                    for z in fs.iter().take(6) {
                        assert_eq!(x.compose(y).compose(z), x.compose(&y.compose(z)));
                    }
                }
            }
            // the triangular coordinates are a bijection
            let mut seen = std::collections::HashSet::new();
            for f in fs {
                assert!(seen.insert(g.coordinates(f).unwrap().to_vec()));
            }
        }
    }

    #[test]
    fn prime_classes() {
        let g = class_group(-23).unwrap();
        match prime_class(-23, 2) {
            PrimeClass::Split(f) => assert_eq!(g.order_of(&f), 3),
            other => panic!("{other:?}"),
        }
        assert_eq!(prime_class(-23, 5), PrimeClass::Inert);
        match prime_class(-23, 23) {
            PrimeClass::Ramified(f) => assert_eq!(f.compose(&f), g.identity()),
            other => panic!("{other:?}"),
        }
        // the conjugate prime gives the inverse class
        if let PrimeClass::Split(f) = prime_class(-431, 3) {
            let conj = QuadForm::new(f.a, -f.b, f.c).reduce();
            assert_eq!(f.compose(&conj), class_group(-431).unwrap().identity());
        }
    }

    #[test]
    fn inert_density() {
        let ls = crate::engine::primes_up_to(1000);
        let inert = ls.iter().filter(|&&l| l != 23 && prime_class(-23, l) == PrimeClass::Inert).count();
        let frac = inert as f64 / (ls.len() - 1) as f64;
        assert!((0.35..=0.65).contains(&frac), "{frac}");
    }

    #[test]
    fn character_counts() {
        let g = class_group(-2039).unwrap();
        assert_eq!(class_characters(&g).len(), 45);
        let orders: Vec<u64> = character_classes(&g, 2, false).iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![3, 5, 9, 15, 15, 45, 45]);
        let orders: Vec<u64> = character_classes(&g, 2, true).iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![3, 5, 9, 15, 45]);
        let g = class_group(-255).unwrap();
        let chars = class_characters(&g);
        assert_eq!(chars.len(), 12);
        // characters are homomorphisms
        for c in &chars {
            for x in &g.forms {
                for y in &g.forms {
                    let lhs = c.exponent_at(&g, &x.compose(y));
                    let rhs = (c.exponent_at(&g, x) + c.exponent_at(&g, y)) % c.order;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
