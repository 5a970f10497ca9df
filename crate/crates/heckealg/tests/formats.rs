use heckealg::cli::{latex_table, recover, store};
use heckealg::dirichlet::DirichletCharFF;
use heckealg::engine::{hecke_algebras, EngineOptions};
use heckealg::ff::prime_field;

const GOLDEN_STORE: &str = include_str!("data/golden_229.txt");
const GOLDEN_TEX: &str = include_str!("data/golden_229.tex");

#[test]
fn storage_and_latex_match_golden_files() {
    let chi = DirichletCharFF::trivial(229, &prime_field(2));
    let recs = hecke_algebras(&chi, 2, &EngineOptions::default()).unwrap().algebras;
    let dir = tempfile::tempdir().unwrap();
    let (s, t) = (dir.path().join("s.txt"), dir.path().join("t.tex"));
    store(&s, &recs).unwrap();
    latex_table(&recs, &t, None).unwrap();
    assert_eq!(std::fs::read_to_string(&s).unwrap(), GOLDEN_STORE);
    assert_eq!(std::fs::read_to_string(&t).unwrap(), GOLDEN_TEX);
}

#[test]
fn golden_store_still_parses() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.txt");
    std::fs::write(&s, GOLDEN_STORE).unwrap();
    let recs = recover(&s).unwrap();
    let shape: Vec<(usize, u32)> = recs.iter().map(|a| (a.dimension, a.residue_degree)).collect();
    assert_eq!(shape, [(1, 1), (2, 2), (4, 1), (2, 5)]);
    assert!(recs.iter().all(|a| a.level == 229 && a.sturm_prime_count == 12 && a.gorenstein_defect == 0));
}
