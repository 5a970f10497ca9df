//! The projective line P^1(Z/NZ) with canonical representatives.

use crate::dirichlet::{gcd, inverse_mod};

fn xgcd(a: i64, b: i64) -> (i64, i64) {
    let (mut r0, mut r1, mut s0, mut s1) = (a, b, 1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0, s0)
}

/// Canonical representative of (u:v): returns (uu, vv, s) with
/// (u, v) = s * (uu, vv) mod N and s a unit. Assumes gcd(u, v, N) = 1.
pub fn normalize(n: u64, u: i64, v: i64) -> (u64, u64, u64) {
    if n == 1 {
        return (0, 0, 1);
    }
    let ni = n as i64;
    let u = u.rem_euclid(ni);
    let v = v.rem_euclid(ni);
    if u == 0 {
        return (0, if gcd(v as u64, n) == 1 { 1 } else { 0 }, v as u64);
    }
    let (g, s0) = xgcd(u, ni);
    let mut s = s0.rem_euclid(ni);
    if g != 1 {
        let d = ni / g;
        while gcd(s as u64, n) != 1 {
            s = (s + d) % ni;
        }
    }
    // s*(u, v) = (g, s*v)
    let v = ((s as i128 * v as i128) % ni as i128) as i64;
    let mut min_v = v;
    let mut min_t = 1i64;
    if g != 1 {
        let ng = ni / g;
        let vng = ((v as i128 * ng as i128) % ni as i128) as i64;
        let (mut vv, mut t) = (v, 1i64);
        for _ in 2..=g {
            vv = (vv + vng) % ni;
            t = (t + ng) % ni;
            if vv < min_v && gcd(t as u64, n) == 1 {
                min_v = vv;
                min_t = t;
            }
        }
    }
    let st = ((s as i128 * min_t as i128) % ni as i128) as u64;
    (g as u64, min_v as u64, inverse_mod(st, n).unwrap())
}

/// Sorted list of the canonical representatives of P^1(Z/NZ).
#[derive(Clone, Debug)]
pub struct P1List {
    n: u64,
    list: Vec<(u64, u64)>,
    /// For each divisor u of N (indexed by position in `divs`), v -> index.
    divs: Vec<u64>,
    lookup: Vec<Vec<u32>>,
}

impl P1List {
    pub fn new(n: u64) -> P1List {
        assert!(n >= 1);
        if n == 1 {
            return P1List { n, list: vec![(0, 0)], divs: vec![0], lookup: vec![vec![0]] };
        }
        let mut divs: Vec<u64> = (1..n).filter(|d| n.is_multiple_of(*d)).collect();
        divs.insert(0, 0);
        let mut list = vec![(0u64, 1u64)];
        for &g in &divs[1..] {
            let mut row = Vec::new();
            for v in 0..n {
                if gcd(gcd(g, v), n) != 1 {
                    continue;
                }
                let (uu, vv, _) = normalize(n, g as i64, v as i64);
                debug_assert_eq!(uu, g);
                row.push(vv);
            }
            row.sort_unstable();
            row.dedup();
            list.extend(row.into_iter().map(|v| (g, v)));
        }
        let mut lookup = vec![vec![u32::MAX; n as usize]; divs.len()];
        for (i, &(u, v)) in list.iter().enumerate() {
            let di = divs.binary_search(&u).unwrap();
            lookup[di][v as usize] = i as u32;
        }
        P1List { n, list, divs, lookup }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }
    pub fn len(&self) -> usize {
        self.list.len()
    }
    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }
    pub fn get(&self, i: usize) -> (u64, u64) {
        self.list[i]
    }
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.list.iter().copied()
    }

    /// Index and scalar s with (u, v) = s * rep; None if (u:v) is not a
    /// point of P^1 (gcd(u, v, N) > 1).
    pub fn index_of(&self, u: i64, v: i64) -> Option<(usize, u64)> {
        let n = self.n;
        if n == 1 {
            return Some((0, 1));
        }
        let ur = u.rem_euclid(n as i64) as u64;
        let vr = v.rem_euclid(n as i64) as u64;
        if gcd(gcd(ur, vr), n) != 1 {
            return None;
        }
        let (uu, vv, s) = normalize(n, ur as i64, vr as i64);
        let di = self.divs.binary_search(&uu).ok()?;
        let i = self.lookup[di][vv as usize];
        debug_assert!(i != u32::MAX);
        Some((i as usize, s))
    }
}
