//! The Hecke algebra loop: compute T_l in a fixed order, restrict to primary
//! subspaces, and stop as soon as the algebra spun by the restricted
//! operators has the dimension predicted by multiplicity one.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::dirichlet::DirichletCharFF;
use crate::error::{invalid, Result};
use crate::ff::{is_prime, lift_prime_poly, poly_factor_seeded, prime_factors, Fe, Field, Poly};
use crate::linalg::{
    algebra_dim, base_change, generalized_kernel, min_poly_matrix, AlgebraBasis, BaseChangeTuple, Mat,
};
use crate::localalg::{affine_tup, localisations_with_idempotents, AffinePresentation, LocalAlgebra, OperatorAlgebra};
use crate::modsym::{build_space, HeckeOp, Kind, ModSymSpace};

/// Sturm bound k/12 [SL2(Z) : Gamma0(N)] as an exact fraction and the primes up to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmBound {
    pub numerator: u64,
    pub denominator: u64,
    pub primes: Vec<u64>,
}

impl SturmBound {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
    pub fn floor(&self) -> u64 {
        self.numerator / self.denominator
    }
    pub fn ceil(&self) -> u64 {
        self.numerator.div_ceil(self.denominator)
    }
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

pub fn psi(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, &q| acc / q * (q + 1))
}

pub fn sturm_bound(n: u64, k: u32) -> SturmBound {
    let num = k as u64 * psi(n);
    let g = crate::dirichlet::gcd(num, 12);
    let (numerator, denominator) = (num / g, 12 / g);
    // the tabulated counts include the primes up to the ceiling
    SturmBound { numerator, denominator, primes: primes_up_to(numerator.div_ceil(denominator)) }
}

/// Conditions under which the mod p cohomology has no extra torsion.
pub fn check_torsion_hypotheses(n: u64, _k: u32, p: u64) -> bool {
    let qs = prime_factors(n);
    match p {
        2 => n.is_multiple_of(4) || qs.iter().any(|&q| q % 4 == 3),
        3 => n.is_multiple_of(9) || qs.iter().any(|&q| q % 3 == 2),
        _ => p >= 5,
    }
}

pub type CoefficientFn = Arc<dyn Fn(u64) -> Option<Poly> + Send + Sync>;

/// A target eigenform: its character, weight, and the minimal polynomials
/// over GF(p) of its coefficients a_l at good primes.
#[derive(Clone)]
pub struct ModularFormSpec {
    pub character: DirichletCharFF,
    pub weight: u32,
    pub coefficient_function: CoefficientFn,
    pub image_name: Option<String>,
    pub defining_polynomial: Option<Vec<BigInt>>,
}

impl ModularFormSpec {
    pub fn level(&self) -> u64 {
        self.character.modulus()
    }
    pub fn characteristic(&self) -> u64 {
        self.character.field().p()
    }
    pub fn coefficient(&self, l: u64) -> Option<Poly> {
        (self.coefficient_function)(l)
    }
}

impl fmt::Debug for ModularFormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModularFormSpec")
            .field("level", &self.level())
            .field("weight", &self.weight)
            .field("characteristic", &self.characteristic())
            .field("image_name", &self.image_name)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MsSpace {
    Full,
    Plus,
    Minus,
}

#[derive(Clone, Debug)]
pub struct EngineOptions {
    pub user_bound: Option<u64>,
    pub first_test: usize,
    pub test_interval: usize,
    pub when_test_p: usize,
    pub when_test_bad: usize,
    pub test_sequence: Vec<u64>,
    /// None derives 2 for the full space and 1 for plus/minus.
    pub dimension_factor: Option<usize>,
    /// Accept a dimension_factor that disagrees with ms_space.
    pub dimension_factor_override: bool,
    pub ms_space: MsSpace,
    pub cuspidal: bool,
    pub degree_bound: usize,
    pub over_residue_field: bool,
    pub try_minimal: bool,
    pub force_local: bool,
    pub drop_eisenstein: bool,
    pub operator_list: Vec<HeckeOp>,
    /// Seed for the randomized equal-degree factorization.
    pub seed: u64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            user_bound: None,
            first_test: 3,
            test_interval: 1,
            when_test_p: 3,
            when_test_bad: 4,
            test_sequence: vec![],
            dimension_factor: None,
            dimension_factor_override: false,
            ms_space: MsSpace::Full,
            cuspidal: true,
            degree_bound: 0,
            over_residue_field: true,
            try_minimal: true,
            force_local: false,
            drop_eisenstein: false,
            operator_list: vec![],
            seed: crate::ff::factor::DEFAULT_SEED,
        }
    }
}

impl EngineOptions {
    fn kind(&self) -> Kind {
        let k = match self.ms_space {
            MsSpace::Full => Kind::Full,
            MsSpace::Plus => Kind::Plus,
            MsSpace::Minus => Kind::Minus,
        };
        k.with_cuspidal(self.cuspidal)
    }

    fn effective_dimension_factor(&self) -> Result<usize> {
        let natural = if self.ms_space == MsSpace::Full { 2 } else { 1 };
        match self.dimension_factor {
            None => Ok(natural),
            Some(f) if f == natural || self.dimension_factor_override => {
                if f == 0 {
                    return invalid("dimension_factor must be positive");
                }
                Ok(f)
            }
            Some(f) => invalid(format!(
                "dimension_factor {f} does not match the {:?} space (expected {natural}); set the override to force it",
                self.ms_space
            )),
        }
    }
}

/// A relation as (exponent vector, encoded coefficient) pairs.
pub type EncodedRelation = Vec<(Vec<u32>, String)>;

/// Summary of one local Hecke factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraData {
    pub level: u64,
    pub weight: u32,
    pub characteristic: u64,
    pub base_field_degree: u32,
    pub character_order: u64,
    pub character_conductor: u64,
    pub character_generator_values: Vec<String>,
    pub algebra_field_degree: u32,
    pub residue_degree: u32,
    /// Dimension over the residue field.
    pub dimension: usize,
    pub gorenstein_defect: usize,
    pub embedding_dimension: usize,
    pub nilpotency_order: usize,
    /// Affine relations, coefficients in the textual encoding of
    /// GF(p^relations_field_degree).
    pub relations_field_degree: u32,
    /// None when the residue field is too large to be represented.
    pub relations: Option<Vec<EncodedRelation>>,
    pub number_gen_used: usize,
    pub sturm_prime_count: usize,
    pub image_name: Option<String>,
    pub defining_polynomial: Option<Vec<String>>,
    pub stop_certified: bool,
    pub torsion_warning: bool,
}

impl AlgebraData {
    pub fn presentation(&self) -> Result<AffinePresentation> {
        let Some(rels) = &self.relations else {
            return Err(crate::Error::Unsupported("no affine presentation was recorded".into()));
        };
        let f = crate::ff::make_field(self.characteristic, self.relations_field_degree)?;
        let relations = rels
            .iter()
            .map(|r| r.iter().map(|(m, c)| Ok((m.clone(), f.parse_elem(c)?))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(AffinePresentation {
            p: self.characteristic,
            k: self.relations_field_degree,
            e: self.embedding_dimension,
            n: self.nilpotency_order,
            relations,
        })
    }
}

fn encode_relations(t: &AffinePresentation) -> Result<Vec<EncodedRelation>> {
    let f = crate::ff::make_field(t.p, t.k)?;
    Ok(t.relations.iter().map(|r| r.iter().map(|(m, c)| (m.clone(), f.fmt_elem(*c))).collect()).collect())
}

/// Everything a run produces, indexed consistently by local factor.
#[derive(Debug)]
pub struct HeckeResult {
    pub algebras: Vec<AlgebraData>,
    /// Local factors in their regular representation.
    pub bases: Vec<AlgebraBasis>,
    pub locals: Vec<LocalAlgebra>,
    pub space: ModSymSpace,
    /// Subspace of the space of each factor.
    pub tuples: Vec<BaseChangeTuple>,
    /// Operators restricted to each factor's subspace, in schedule order.
    pub operators: Vec<Vec<HeckeOp>>,
}

/// Order of primes: test_sequence, then increasing primes up to the bound,
/// with p moved to step when_test_p and the bad primes to step when_test_bad.
pub fn prime_schedule(primes: &[u64], opts: &EngineOptions, p: u64, n: u64) -> Vec<u64> {
    let mut seq: Vec<u64> = Vec::new();
    for &l in &opts.test_sequence {
        if !seq.contains(&l) {
            seq.push(l);
        }
    }
    let fixed = seq.len();
    let mut rest: Vec<u64> =
        primes.iter().copied().filter(|&l| !seq.contains(&l) && l != p && !n.is_multiple_of(l)).collect();
    let mut tail: Vec<u64> = seq.split_off(fixed);
    tail.append(&mut rest);
    seq.extend(tail);
    let insert = |seq: &mut Vec<u64>, at: usize, ls: Vec<u64>| {
        let at = at.saturating_sub(1).min(seq.len()).max(fixed.min(seq.len()));
        for (i, l) in ls.into_iter().enumerate() {
            seq.insert(at + i, l);
        }
    };
    if primes.contains(&p) && !seq.contains(&p) {
        insert(&mut seq, opts.when_test_p, vec![p]);
    }
    let bad: Vec<u64> = primes.iter().copied().filter(|&l| n.is_multiple_of(l) && l != p && !seq.contains(&l)).collect();
    if !bad.is_empty() {
        insert(&mut seq, opts.when_test_bad, bad);
    }
    seq
}

struct Block {
    tuple: BaseChangeTuple,
    ops: Vec<Mat>,
    history: Vec<(u64, Poly)>,
    certified: bool,
}

impl Block {
    fn dim(&self) -> usize {
        self.tuple.dim()
    }
}

fn stop_test(blocks: &mut [Block], field: &Field, factor: usize, force_local: bool) -> Result<()> {
    for b in blocks.iter_mut().filter(|b| !b.certified) {
        if factor * algebra_dim(field, b.dim(), &b.ops) != b.dim() {
            continue;
        }
        if force_local && localisations_with_idempotents(&OperatorAlgebra::new(field, b.dim(), &b.ops).alg)?.len() != 1 {
            continue;
        }
        b.certified = true;
    }
    Ok(())
}

/// All local Hecke factors for a character and weight.
pub fn hecke_algebras(chi: &DirichletCharFF, weight: u32, opts: &EngineOptions) -> Result<HeckeResult> {
    run(chi, weight, None, opts)
}

/// The local Hecke factors matching a target form.
pub fn hecke_algebras_for_form(spec: &ModularFormSpec, opts: &EngineOptions) -> Result<HeckeResult> {
    run(&spec.character, spec.weight, Some(spec), opts)
}

fn eisenstein_values(chi: &DirichletCharFF, k: u32, l: u64) -> [Fe; 2] {
    let f = chi.field();
    let c = chi.eval(l as i64);
    let lk = f.pow(f.from_i64((l % f.p()) as i64), k as u64 - 1);
    [f.add(1, f.mul(c, lk)), f.add(c, lk)]
}

fn is_eisenstein(history: &[(u64, Poly)], chi: &DirichletCharFF, k: u32) -> bool {
    let f = chi.field();
    let n = chi.modulus();
    let good: Vec<&(u64, Poly)> = history.iter().filter(|(l, _)| !n.is_multiple_of(*l) && *l != f.p()).collect();
    if good.is_empty() {
        return false;
    }
    (0..2).any(|which| {
        good.iter().all(|(l, fl)| {
            let e = eisenstein_values(chi, k, *l)[which];
            *fl == Poly::linear(f, e)
        })
    })
}

fn run(chi: &DirichletCharFF, weight: u32, spec: Option<&ModularFormSpec>, opts: &EngineOptions) -> Result<HeckeResult> {
    let factor = opts.effective_dimension_factor()?;
    if opts.first_test == 0 || opts.test_interval == 0 {
        return invalid("first_test and test_interval must be positive");
    }
    if let Some(&l) = opts.test_sequence.iter().find(|&&l| !is_prime(l)) {
        return invalid(format!("test_sequence entry {l} is not prime"));
    }
    let field = chi.field().clone();
    let p = field.p();
    let n = chi.modulus();
    let space = build_space(n, weight, chi, &field, opts.kind())?;
    space.seed_operators(&opts.operator_list)?;
    let sturm = sturm_bound(n, weight);
    let bound = opts.user_bound.filter(|&b| b > 0).unwrap_or(sturm.ceil());
    let primes = primes_up_to(bound);
    let schedule = prime_schedule(&primes, opts, p, n);
    let torsion_warning = !check_torsion_hypotheses(n, weight, p);

    let d = space.dim();
    let mut blocks = if d == 0 {
        vec![]
    } else {
        vec![Block { tuple: BaseChangeTuple::identity(&field, d), ops: vec![], history: vec![], certified: false }]
    };
    let mut step = 0usize;
    let mut used_primes: Vec<u64> = Vec::new();
    for &l in &schedule {
        if blocks.iter().all(|b| b.certified) {
            break;
        }
        step += 1;
        used_primes.push(l);
        let t = space.hecke_operator(l)?.matrix;
        let target = match spec {
            Some(s) if l != p && !n.is_multiple_of(l) => s.coefficient(l).map(|g| lift_prime_poly(&g, &field)),
            _ => None,
        };
        let mut next = Vec::with_capacity(blocks.len());
        for b in blocks {
            if b.certified {
                next.push(b);
                continue;
            }
            let r = base_change(&t, &b.tuple)?;
            let factors: Vec<Poly> = match &target {
                Some(g) => vec![g.clone()],
                None => poly_factor_seeded(&min_poly_matrix(&r)?, opts.seed)?
                    .factors
                    .into_iter()
                    .map(|(f, _)| f)
                    .filter(|f| opts.degree_bound == 0 || f.deg() <= opts.degree_bound)
                    .collect(),
            };
            for fl in factors {
                let sub = generalized_kernel(&r.eval_poly(&fl));
                if sub.dim() == 0 {
                    continue;
                }
                let mut history = b.history.clone();
                history.push((l, fl));
                let nb = if sub.dim() == b.dim() {
                    let mut ops = b.ops.clone();
                    ops.push(r.clone());
                    Block { tuple: b.tuple.clone(), ops, history, certified: false }
                } else {
                    let mut ops: Vec<Mat> = b.ops.iter().map(|m| base_change(m, &sub)).collect::<Result<_>>()?;
                    ops.push(base_change(&r, &sub)?);
                    Block { tuple: b.tuple.compose(&sub), ops, history, certified: false }
                };
                next.push(nb);
            }
        }
        blocks = next;
        if step >= opts.first_test && (step - opts.first_test).is_multiple_of(opts.test_interval) {
            stop_test(&mut blocks, &field, factor, opts.force_local)?;
        }
    }
    // the schedule ran out between two tests
    let tested_last = step >= opts.first_test && (step - opts.first_test).is_multiple_of(opts.test_interval);
    if !tested_last {
        stop_test(&mut blocks, &field, factor, opts.force_local)?;
    }

    let mut res = HeckeResult { algebras: vec![], bases: vec![], locals: vec![], space, tuples: vec![], operators: vec![] };
    let space = &res.space;
    for b in &blocks {
        if opts.drop_eisenstein && is_eisenstein(&b.history, chi, weight) {
            continue;
        }
        let alg = OperatorAlgebra::new(&field, b.dim(), &b.ops);
        for (loc, e) in localisations_with_idempotents(&alg.alg)? {
            let sub = alg.image_subspace(&e);
            let tuple = b.tuple.compose(&sub);
            let ops: Vec<HeckeOp> = b
                .ops
                .iter()
                .zip(&used_primes)
                .map(|(m, &l)| Ok(HeckeOp { n: l, matrix: base_change(m, &sub)? }))
                .collect::<Result<_>>()?;
            // residue fields beyond the u64 encoding keep the base field
            let residue = loc.change_to_residue_field().ok();
            let out = match (&residue, opts.over_residue_field) {
                (Some(r), true) => r.clone(),
                _ => loc.clone(),
            };
            let pres = residue.as_ref().map(|r| affine_tup(r, opts.try_minimal)).transpose()?;
            let (e_dim, nil) = out.local_invariants();
            let data = AlgebraData {
                level: n,
                weight,
                characteristic: p,
                base_field_degree: field.k(),
                character_order: chi.order(),
                character_conductor: chi.conductor(),
                character_generator_values: chi.generator_values().iter().map(|&v| field.fmt_elem(v)).collect(),
                algebra_field_degree: out.field().k(),
                residue_degree: loc.residue_degree,
                dimension: loc.dim() / loc.relative_residue_degree(),
                gorenstein_defect: out.gorenstein_defect(),
                embedding_dimension: e_dim,
                nilpotency_order: nil,
                relations_field_degree: pres.as_ref().map_or(0, |t| t.k),
                relations: match &pres {
                    Some(t) => Some(encode_relations(t)?),
                    None => None,
                },
                number_gen_used: step,
                sturm_prime_count: sturm.primes.len(),
                image_name: spec.and_then(|s| s.image_name.clone()),
                defining_polynomial: spec.and_then(|s| s.defining_polynomial.as_ref()).map(|v| v.iter().map(|c| c.to_string()).collect()),
                stop_certified: b.certified,
                torsion_warning,
            };
            res.algebras.push(data);
            res.bases.push(out.alg.to_algebra_basis()?);
            res.locals.push(out);
            res.tuples.push(tuple);
            res.operators.push(ops);
        }
    }
    let _ = space;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::prime_field;

    #[test]
    fn sturm_counts() {
        for (n, k, c) in [(431u64, 2u32, 20usize), (2039, 2, 68), (229, 2, 12), (23, 59, 30), (5939, 5, 366), (431, 11, 77), (31, 67, 41)] {
            assert_eq!(sturm_bound(n, k).primes.len(), c, "N={n} k={k}");
        }
        assert_eq!(sturm_bound(431, 2).value(), 72.0);
        assert_eq!(sturm_bound(229, 2).floor(), 38);
        assert_eq!(sturm_bound(229, 2).ceil(), 39);
    }

    #[test]
    fn torsion_hypotheses() {
        assert!(check_torsion_hypotheses(5, 2, 7));
        assert!(check_torsion_hypotheses(7, 2, 2));
        assert!(!check_torsion_hypotheses(5, 2, 2));
        assert!(check_torsion_hypotheses(20, 2, 2));
        assert!(check_torsion_hypotheses(5, 2, 3));
        assert!(!check_torsion_hypotheses(7, 2, 3));
        assert!(check_torsion_hypotheses(63, 2, 3));
    }

    #[test]
    fn schedule_positions() {
        let opts = EngineOptions::default();
        let primes = primes_up_to(40);
        let s = prime_schedule(&primes, &opts, 2, 15);
        assert_eq!(&s[..6], &[7, 11, 2, 3, 5, 13]);
        assert_eq!(s.len(), primes.len());
        let opts = EngineOptions { test_sequence: vec![13, 17], ..Default::default() };
        let s = prime_schedule(&primes, &opts, 2, 1);
        assert_eq!(&s[..5], &[13, 17, 2, 3, 5]);
        let s = prime_schedule(&primes_up_to(10), &EngineOptions::default(), 11, 1);
        assert_eq!(s, vec![2, 3, 5, 7]);
    }

    #[test]
    fn zero_space_gives_nothing() {
        let f = prime_field(5);
        let chi = DirichletCharFF::trivial(3, &f);
        let r = hecke_algebras(&chi, 2, &EngineOptions::default()).unwrap();
        assert!(r.algebras.is_empty());
    }

    #[test]
    fn inconsistent_dimension_factor() {
        let f = prime_field(5);
        let chi = DirichletCharFF::trivial(11, &f);
        let opts = EngineOptions { ms_space: MsSpace::Plus, dimension_factor: Some(2), ..Default::default() };
        assert!(hecke_algebras(&chi, 2, &opts).is_err());
        let opts = EngineOptions { dimension_factor_override: true, ..opts };
        assert!(hecke_algebras(&chi, 2, &opts).is_ok());
    }

    #[test]
    fn level_11_is_a_single_field() {
        let f = prime_field(5);
        let chi = DirichletCharFF::trivial(11, &f);
        let r = hecke_algebras(&chi, 2, &EngineOptions::default()).unwrap();
        assert_eq!(r.algebras.len(), 1);
        let a = &r.algebras[0];
        assert_eq!((a.dimension, a.residue_degree, a.gorenstein_defect), (1, 1, 0));
        assert!(a.stop_certified);
        assert_eq!(a.number_gen_used, 1);
    }

    #[test]
    fn level_229() {
        let f = prime_field(2);
        let chi = DirichletCharFF::trivial(229, &f);
        let r = hecke_algebras(&chi, 2, &EngineOptions::default()).unwrap();
        let mut got: Vec<(u32, usize, usize)> =
            r.algebras.iter().map(|a| (a.residue_degree, a.dimension, a.gorenstein_defect)).collect();
        got.sort();
        assert_eq!(got, vec![(1, 1, 0), (1, 4, 0), (2, 2, 0), (5, 2, 0)]);
        for a in &r.algebras {
            eprintln!("{} {} certified {}", a.residue_degree, a.number_gen_used, a.stop_certified);
        }
    }
}
