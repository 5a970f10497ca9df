#![allow(dead_code)]

use heckealg::dirichlet::DirichletCharFF;
use heckealg::engine::AlgebraData;
use heckealg::ff::{is_irreducible, make_field, poly_factor, prime_field, Embedding, Fe, Poly};
use heckealg::linalg::{min_poly_matrix, primary_components, Echelon, Mat};
use heckealg::localalg::{affine_from_tup, affine_tup, monomials, AffinePresentation, LocalAlgebra};
use heckealg::modsym::{build_space, Kind};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const SMALL_PRIMES: &[u64] = &[2, 3, 5, 7, 11, 13];

pub fn run_property<S: Strategy>(cases: u32, strat: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strat, test).map_err(|e| e.to_string())
}

pub fn poly_strategy() -> impl Strategy<Value = (u64, Vec<u64>)> {
    (prop::sample::select(SMALL_PRIMES), prop::collection::vec(any::<u64>(), 2..14)).prop_map(|(p, c)| {
        let mut c: Vec<u64> = c.into_iter().map(|x| x % p).collect();
        let last = c.len() - 1;
        if c[last] == 0 {
            c[last] = 1;
        }
        (p, c)
    })
}

pub fn factor_product((p, c): (u64, Vec<u64>)) -> Result<(), TestCaseError> {
    let f = prime_field(p);
    let g = Poly::new(&f, c);
    let fac = poly_factor(&g).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let mut prod = Poly::constant(&f, fac.unit);
    for (h, m) in &fac.factors {
        prop_assert!(is_irreducible(h));
        prop_assert_eq!(h.lead(), 1);
        for _ in 0..*m {
            prod = prod.mul(h);
        }
    }
    prop_assert_eq!(prod, g);
    Ok(())
}

/// (level, weight, p, l1, l2, cuspidal)
pub fn hecke_strategy() -> impl Strategy<Value = (u64, u32, u64, u64, u64, bool)> {
    (
        1u64..40,
        2u32..7,
        prop::sample::select(&[2u64, 3, 5, 7][..]),
        prop::sample::select(&[2u64, 3, 5, 7, 11, 13][..]),
        prop::sample::select(&[2u64, 3, 5, 7, 11, 13][..]),
        any::<bool>(),
    )
}

pub fn hecke_commute((n, k, p, l1, l2, cusp): (u64, u32, u64, u64, u64, bool)) -> Result<(), TestCaseError> {
    let f = prime_field(p);
    let chi = DirichletCharFF::trivial(n, &f);
    let kind = if cusp { Kind::Cuspidal } else { Kind::Full };
    let s = build_space(n, k, &chi, &f, kind).map_err(|e| TestCaseError::fail(e.to_string()))?;
    if s.dim() == 0 {
        return Ok(());
    }
    let a = s.hecke_operator(l1).map_err(|e| TestCaseError::fail(e.to_string()))?.matrix;
    let b = s.hecke_operator(l2).map_err(|e| TestCaseError::fail(e.to_string()))?.matrix;
    prop_assert_eq!(a.mul(&b), b.mul(&a));
    Ok(())
}

/// A random matrix A and a polynomial in A, so that the pair commutes.
pub fn commuting_strategy() -> impl Strategy<Value = (u64, usize, Vec<u64>, Vec<u64>)> {
    (prop::sample::select(&[2u64, 3, 5, 7][..]), 1usize..7).prop_flat_map(|(p, n)| {
        (Just(p), Just(n), prop::collection::vec(0..p, n * n), prop::collection::vec(0..p, 1..4))
    })
}

pub fn direct_sum((p, n, a, g): (u64, usize, Vec<u64>, Vec<u64>)) -> Result<(), TestCaseError> {
    let f = prime_field(p);
    let a = Mat::from_vec(&f, n, n, a);
    // nilpotent and semisimple-ish parts both occur
    let b = a.eval_poly(&Poly::new(&f, g));
    let comps = primary_components(&[a.clone(), b.clone()], None).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let total: usize = comps.iter().map(|c| c.space.dim()).sum();
    prop_assert_eq!(total, n);
    let mut ech = Echelon::new(&f, n);
    for c in &comps {
        for j in 0..c.space.dim() {
            prop_assert!(ech.insert(&c.space.c.col(j)));
        }
        for (t, irr) in [&a, &b].iter().zip(&c.factors) {
            let r = heckealg::linalg::base_change(t, &c.space).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let m = min_poly_matrix(&r).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let fac = poly_factor(&m).unwrap();
            prop_assert_eq!(fac.factors.len(), 1);
            prop_assert_eq!(&fac.factors[0].0, irr);
        }
    }
    Ok(())
}

/// A random presentation with relations in degrees >= 2.
pub fn presentation_strategy() -> impl Strategy<Value = AffinePresentation> {
    (prop::sample::select(&[2u64, 3, 5][..]), 1usize..4, 1usize..4).prop_flat_map(|(p, e, n)| {
        let mons: Vec<Vec<u32>> = monomials(e, n).into_iter().filter(|m| m.iter().sum::<u32>() >= 2).collect();
        let len = mons.len().max(1);
        prop::collection::vec(prop::collection::vec(0..p, len), 0..4).prop_map(move |rels| AffinePresentation {
            p,
            k: 1,
            e,
            n,
            relations: rels
                .into_iter()
                .map(|v| mons.iter().cloned().zip(v).filter(|(_, c)| *c != 0).collect::<Vec<(Vec<u32>, Fe)>>())
                .collect(),
        })
    })
}

fn invariants(a: &LocalAlgebra) -> (usize, u32, usize, usize, usize) {
    let (e, n) = a.local_invariants();
    (a.dim(), a.residue_degree, e, n, a.gorenstein_defect())
}

pub fn affine_round_trip(t: AffinePresentation) -> Result<(), TestCaseError> {
    let a0 = affine_from_tup(&t).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for minimal in [false, true] {
        let t1 = affine_tup(&a0, minimal).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let (e, n) = a0.local_invariants();
        prop_assert_eq!((t1.e, t1.n), (e, n));
        let a1 = affine_from_tup(&t1).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(invariants(&a1), invariants(&a0));
    }
    Ok(())
}

pub fn defect_base_change(t: AffinePresentation) -> Result<(), TestCaseError> {
    let a0 = affine_from_tup(&t).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let big = make_field(t.p, 2).unwrap();
    let emb = Embedding::new(a0.field(), &big).unwrap();
    let a1 = LocalAlgebra::new(a0.alg.extend(&emb)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(a1.gorenstein_defect(), a0.gorenstein_defect());
    prop_assert_eq!(a1.local_invariants(), a0.local_invariants());
    prop_assert_eq!(a1.relative_residue_degree(), a0.relative_residue_degree());
    Ok(())
}

fn opt_string() -> impl Strategy<Value = Option<String>> {
    prop::option::of("[ -~]{0,12}")
}

pub fn algebra_data_strategy() -> impl Strategy<Value = AlgebraData> {
    let head = (1u64..100_000, 2u32..200, prop::sample::select(SMALL_PRIMES), 1u32..4, 1u64..50, 1u64..1000);
    let inv = (1u32..20, 1u32..20, 0usize..100, 0usize..10, 0usize..10, 0usize..10);
    let rels = prop::option::of(prop::collection::vec(
        prop::collection::vec((prop::collection::vec(0u32..5, 0..4), "[0-9,]{1,6}"), 0..4),
        0..4,
    ));
    let tail = (0usize..100, 0usize..400, opt_string(), prop::option::of(prop::collection::vec("-?[0-9]{1,8}", 6)), any::<bool>(), any::<bool>());
    (head, inv, rels, prop::collection::vec("[0-9,]{1,5}", 0..3), tail).prop_map(
        |((level, weight, p, bfd, ord, cond), (afd, rd, dim, def, e, n), relations, gens, (ops, hb, img, poly, cert, tw))| {
            AlgebraData {
                level,
                weight,
                characteristic: p,
                base_field_degree: bfd,
                character_order: ord,
                character_conductor: cond,
                character_generator_values: gens,
                algebra_field_degree: afd,
                residue_degree: rd,
                dimension: dim,
                gorenstein_defect: def,
                embedding_dimension: e,
                nilpotency_order: n,
                relations_field_degree: rd,
                relations,
                number_gen_used: ops,
                sturm_prime_count: hb,
                image_name: img,
                defining_polynomial: poly,
                stop_certified: cert,
                torsion_warning: tw,
            }
        },
    )
}

pub fn storage_round_trip(records: Vec<AlgebraData>) -> Result<(), TestCaseError> {
    use heckealg::cli::{parse_record, recover, serialize_record, store};
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("store.txt");
    let (a, b) = records.split_at(records.len() / 2);
    store(&path, a).unwrap();
    store(&path, b).unwrap();
    let back = recover(&path).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&back, &records);
    for r in &records {
        let line = serialize_record(r);
        prop_assert_eq!(serialize_record(&parse_record(&line, 1).unwrap()), line);
    }
    Ok(())
}

/// One tabulated row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub level: u64,
    pub weight: u32,
    pub resd: u32,
    pub dim: usize,
    pub emb: usize,
    pub nil: usize,
    pub def: usize,
    pub ops: usize,
    pub hb: usize,
    pub group: String,
}

pub fn parse_rows(text: &str) -> Vec<Row> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let c: Vec<&str> = l.split('&').map(str::trim).collect();
            let n = |i: usize| c[i].parse::<u64>().unwrap();
            Row {
                level: n(0),
                weight: n(1) as u32,
                resd: n(2) as u32,
                dim: n(3) as usize,
                emb: n(4) as usize,
                nil: n(5) as usize,
                def: n(6) as usize,
                ops: n(7) as usize,
                hb: n(8) as usize,
                group: c[9].trim_matches('$').to_string(),
            }
        })
        .collect()
}

pub fn row_matches(r: &Row, a: &AlgebraData) -> bool {
    a.level == r.level
        && a.weight == r.weight
        && a.residue_degree == r.resd
        && a.dimension == r.dim
        && a.embedding_dimension == r.emb
        && a.nilpotency_order == r.nil
        && a.gorenstein_defect == r.def
        && a.number_gen_used <= r.ops + 2
        && a.sturm_prime_count == r.hb
}

/// Approximate dimension of the cuspidal modular symbols space.
pub fn estimated_dim(level: u64, weight: u32) -> u64 {
    (weight as u64 - 1) * (level + 1) / 6
}
