//! One test per acceptance criterion; each prints a single PASS/FAIL line.

mod common;

use std::time::{Duration, Instant};

use common::*;
use heckealg::dirichlet::DirichletCharFF;
use heckealg::engine::{hecke_algebras, hecke_algebras_for_form, sturm_bound, AlgebraData, EngineOptions};
use heckealg::ff::{prime_field, Poly};
use heckealg::forms::{a5_form, class_group, dihedral_specs, predicted_level, DihedralOptions, Quintic};
use heckealg::linalg::min_poly_matrix;
use heckealg::modsym::{build_space, Kind};

fn report(n: u32, ok: bool, detail: impl AsRef<str>) {
    println!("criterion {n}: {} {}", if ok { "PASS" } else { "FAIL" }, detail.as_ref());
    assert!(ok, "criterion {n} failed: {}", detail.as_ref());
}

fn tuple(a: &AlgebraData) -> (u32, usize, usize, usize, usize) {
    (a.residue_degree, a.dimension, a.embedding_dimension, a.nilpotency_order, a.gorenstein_defect)
}

fn dihedral_run(level: u64, p: u64, order: u64) -> (Vec<AlgebraData>, Duration) {
    let specs = dihedral_specs(level, &DihedralOptions { list_of_primes: vec![p], ..Default::default() }).unwrap();
    let spec = specs.iter().find(|s| s.order() == order).expect("no matching dihedral spec");
    let t = Instant::now();
    let r = hecke_algebras_for_form(&spec.to_form().unwrap(), &EngineOptions::default()).unwrap();
    (r.algebras, t.elapsed())
}

#[test]
fn criterion_01_level_431_weight_2() {
    let (algs, t) = dihedral_run(431, 2, 3);
    let hit = algs.iter().find(|a| tuple(a) == (1, 4, 3, 1, 2));
    let ok = hit.is_some_and(|a| a.stop_certified && a.number_gen_used <= 6 && a.sturm_prime_count == 20)
        && t < Duration::from_secs(60);
    let ops = hit.map(|a| a.number_gen_used);
    report(1, ok, format!("431/GF(2) D3 factor {:?} ops {ops:?} in {t:.1?}", hit.map(tuple)));
}

#[test]
fn criterion_02_level_431_weight_11() {
    let (algs, t) = dihedral_run(431, 11, 7);
    let hit = algs.iter().find(|a| tuple(a) == (3, 4, 3, 1, 2));
    let ok = hit.is_some_and(|a| a.stop_certified && a.number_gen_used <= 5 && a.sturm_prime_count == 77)
        && t < Duration::from_secs(600);
    let ops = hit.map(|a| a.number_gen_used);
    report(2, ok, format!("431/GF(11) D7 factor {:?} ops {ops:?} in {t:.1?}", hit.map(tuple)));
}

fn genus_x0_prime(p: i64) -> usize {
    let leg = |a: i64| -> i64 {
        let r = (0..p).map(|x| x * x % p).any(|y| y == a.rem_euclid(p));
        if r { 1 } else { -1 }
    };
    let (nu2, nu3) = (1 + leg(-1), 1 + leg(-3));
    // 12 g = 12 + (p + 1) - 3 nu2 - 4 nu3 - 6 c, two cusps
    ((12 + (p + 1) - 3 * nu2 - 4 * nu3 - 12) / 12) as usize
}

#[test]
fn criterion_03_level_229() {
    let f = prime_field(2);
    let t = Instant::now();
    let r = hecke_algebras(&DirichletCharFF::trivial(229, &f), 2, &EngineOptions::default()).unwrap();
    let t = t.elapsed();
    let mut got: Vec<(u32, usize)> = r.algebras.iter().map(|a| (a.residue_degree, a.dimension)).collect();
    got.sort();
    let total: usize = r.algebras.iter().map(|a| a.residue_degree as usize * a.dimension).sum();
    let genus = genus_x0_prime(229);
    // the one factor outside the genus comes from 2-torsion and is flagged
    let flagged: usize = r.algebras.iter().filter(|a| a.torsion_warning && !a.stop_certified).map(|a| a.dimension).sum();
    let ok = got == vec![(1, 1), (1, 4), (2, 2), (5, 2)]
        && r.algebras.iter().all(|a| a.gorenstein_defect == 0)
        && total == 19
        && total == genus + flagged
        && t < Duration::from_secs(60);
    report(3, ok, format!("229/GF(2) factors {got:?}, total {total}, genus {genus}, torsion part {flagged} in {t:.1?}"));
}

#[test]
fn criterion_04_level_2039_dihedral() {
    let opts = DihedralOptions { list_of_primes: vec![2], completely_split: false, ..Default::default() };
    let specs = dihedral_specs(2039, &opts).unwrap();
    let names: Vec<String> = specs.iter().map(|s| s.image_name()).collect();
    let t = Instant::now();
    let mut d5 = None;
    let mut all = Vec::new();
    for s in &specs {
        let r = hecke_algebras_for_form(&s.to_form().unwrap(), &EngineOptions::default()).unwrap();
        if s.order() == 5 {
            d5 = r.algebras.iter().find(|a| a.dimension == 6).cloned();
        }
        all.extend(r.algebras);
    }
    let t = t.elapsed();
    let ok = names == ["D_{3}", "D_{5}", "D_{9}", "D_{15}", "D_{15}", "D_{45}", "D_{45}"]
        && d5.as_ref().is_some_and(|a| a.gorenstein_defect == 2 && a.residue_degree == 2)
        && all.iter().all(|a| a.sturm_prime_count == 68)
        && t < Duration::from_secs(1800);
    let summary: Vec<(u32, usize, usize)> = all.iter().map(|a| (a.residue_degree, a.dimension, a.gorenstein_defect)).collect();
    report(4, ok, format!("2039/GF(2) specs {names:?}, factors {summary:?} in {t:.1?}"));
}

#[test]
fn criterion_05_sturm_counts() {
    let cases = [((431, 2), 20), ((2039, 2), 68), ((229, 2), 12), ((23, 59), 30), ((5939, 5), 366)];
    let got: Vec<usize> = cases.iter().map(|&((n, k), _)| sturm_bound(n, k).primes.len()).collect();
    let want: Vec<usize> = cases.iter().map(|&(_, c)| c).collect();
    report(5, got == want, format!("prime counts {got:?}"));
}

#[test]
fn criterion_06_level_23_weight_59() {
    let (algs, t) = dihedral_run(23, 59, 3);
    let hit = algs.iter().find(|a| tuple(a) == (1, 4, 3, 1, 2));
    let ok = hit.is_some_and(|a| a.stop_certified && a.number_gen_used <= 4 && a.sturm_prime_count == 30)
        && t < Duration::from_secs(1800);
    let ops = hit.map(|a| a.number_gen_used);
    report(6, ok, format!("23/GF(59) D3 factor {:?} ops {ops:?} in {t:.1?}", hit.map(tuple)));
}

/// Coefficients of q prod (1 - q^n)^2 (1 - q^11n)^2 up to q^len.
fn eta_11(len: usize) -> Vec<i64> {
    let mut c = vec![0i64; len + 1];
    c[1] = 1;
    for n in 1..=len {
        for step in [n, n, 11 * n, 11 * n] {
            if step > len {
                continue;
            }
            for i in (step..=len).rev() {
                c[i] -= c[i - step];
            }
        }
    }
    c
}

#[test]
fn criterion_07_eta_oracle() {
    let f = prime_field(5);
    let s = build_space(11, 2, &DirichletCharFF::trivial(11, &f), &f, Kind::Cuspidal).unwrap();
    let a = eta_11(50);
    let mut bad = Vec::new();
    for l in heckealg::engine::primes_up_to(50).into_iter().filter(|&l| l != 11) {
        let m = min_poly_matrix(&s.hecke_operator(l).unwrap().matrix).unwrap();
        if m != Poly::linear(&f, f.from_i64(a[l as usize])) {
            bad.push(l);
        }
    }
    report(7, bad.is_empty() && s.dim() == 2, format!("mismatching primes {bad:?}"));
}

// Independent oracle: count reduced primitive forms over a box.
fn brute_h(d: i64) -> usize {
    let gcd = |mut a: i64, mut b: i64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.abs()
    };
    let mut h = 0;
    for a in 1..=((-d) as f64).sqrt() as i64 {
        for b in -a + 1..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            if c < a || (a == c && b < 0) || gcd(gcd(a, b), c) != 1 {
                continue;
            }
            h += 1;
        }
    }
    h
}

#[test]
fn criterion_08_class_numbers() {
    let ds = [-7i64, -23, -431, -2039];
    let got: Vec<usize> = ds.iter().map(|&d| class_group(d).unwrap().class_number()).collect();
    let oracle: Vec<usize> = ds.iter().map(|&d| brute_h(d)).collect();
    report(8, got == vec![1, 3, 21, 45] && got == oracle, format!("h = {got:?}"));
}

#[test]
fn criterion_09_property_suites() {
    const N: u32 = 1000;
    let results = [
        ("factor product", run_property(N, poly_strategy(), factor_product)),
        ("hecke commutativity", run_property(N, hecke_strategy(), hecke_commute)),
        ("primary direct sum", run_property(N, commuting_strategy(), direct_sum)),
        ("affine round trip", run_property(N, presentation_strategy(), affine_round_trip)),
        (
            "storage round trip",
            run_property(N, proptest::collection::vec(algebra_data_strategy(), 0..5), storage_round_trip),
        ),
        ("defect base change", run_property(N, presentation_strategy(), defect_base_change)),
    ];
    let failed: Vec<String> =
        results.iter().filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}"))).collect();
    report(9, failed.is_empty(), format!("{} suites x {N} cases, failures {failed:?}", results.len()));
}

fn quintic_89491() -> Quintic {
    Quintic::from_i64(&[-3272, 998, 225, -79, -1, 1]).unwrap()
}

#[test]
fn criterion_10_icosahedral_levels() {
    let a = predicted_level(&quintic_89491()).unwrap();
    let b = predicted_level(&Quintic::from_i64(&[344, 3106, -1795, -780, -1, 1]).unwrap()).unwrap();
    report(10, (a, b) == (89491, 1951), format!("levels {a}, {b}"));
}

#[test]
#[ignore = "multi-hour"]
fn criterion_10_extended_level_89491() {
    let r = hecke_algebras_for_form(&a5_form(&quintic_89491()).unwrap(), &EngineOptions::default()).unwrap();
    let ok = r.algebras.iter().any(|a| (a.residue_degree, a.dimension, a.gorenstein_defect) == (2, 12, 2));
    report(10, ok, format!("89491 factors {:?}", r.algebras.iter().map(tuple).collect::<Vec<_>>()));
}

/// Replays the rows whose estimated space dimension is at most `budget`.
fn replay_rows(budget: u64) -> (usize, usize, Vec<String>) {
    let rows = parse_rows(include_str!("data/rows_le_1000.txt"));
    let mut groups: Vec<(u64, u32)> = rows.iter().map(|r| (r.level, r.weight)).collect();
    groups.sort();
    groups.dedup();
    let (mut ran, mut skipped, mut problems) = (0, 0, Vec::new());
    for (n, p) in groups {
        let want: Vec<&Row> = rows.iter().filter(|r| (r.level, r.weight) == (n, p)).collect();
        if estimated_dim(n, p) > budget {
            skipped += want.len();
            continue;
        }
        ran += want.len();
        let t = Instant::now();
        let specs = dihedral_specs(n, &DihedralOptions { list_of_primes: vec![p as u64], ..Default::default() }).unwrap();
        let mut got = Vec::new();
        for s in &specs {
            let r = hecke_algebras_for_form(&s.to_form().unwrap(), &EngineOptions::default()).unwrap();
            got.extend(r.algebras.into_iter().map(|a| (s.image_name(), a)));
        }
        let mut used = vec![false; got.len()];
        for r in &want {
            let hit = (0..got.len()).find(|&i| !used[i] && got[i].0 == r.group && row_matches(r, &got[i].1));
            match hit {
                Some(i) => used[i] = true,
                None => problems.push(format!(
                    "{n}/{p}: row {r:?} unmatched; computed {:?}",
                    got.iter().map(|(g, a)| (g, tuple(a), a.number_gen_used, a.sturm_prime_count)).collect::<Vec<_>>()
                )),
            }
        }
        if want.iter().any(|r| r.def != 2) {
            problems.push(format!("{n}/{p}: table row with defect other than 2"));
        }
        eprintln!("rows {n}/{p}: {} rows, {} factors, {:.1?}", want.len(), got.len(), t.elapsed());
    }
    (ran, skipped, problems)
}

#[test]
fn criterion_11_every_row_harness() {
    let budget = std::env::var("HECKEALG_ROW_BUDGET").ok().and_then(|s| s.parse().ok()).unwrap_or(600);
    let (ran, skipped, problems) = replay_rows(budget);
    report(
        11,
        problems.is_empty(),
        format!("{ran} rows replayed, {skipped} rows above the size budget {budget}, problems {problems:?}"),
    );
}

#[test]
#[ignore = "runs every row, many hours"]
fn criterion_11_every_row_full() {
    let (ran, skipped, problems) = replay_rows(u64::MAX);
    report(11, problems.is_empty() && skipped == 0, format!("{ran} rows replayed, problems {problems:?}"));
}

#[test]
fn table_rows_file_is_complete() {
    let rows = parse_rows(include_str!("data/rows_le_1000.txt"));
    assert_eq!(rows.len(), 61);
    assert!(rows.iter().all(|r| r.level <= 1000 && r.def == 2));
    assert_eq!(genus_x0_prime(11), 1);
    assert_eq!(genus_x0_prime(37), 2);
    assert_eq!(genus_x0_prime(229), 18);
}
