//! Dihedral eigenforms induced from unramified characters of imaginary
//! quadratic fields.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::classgroup::{character_classes, class_group, prime_class, ClassCharacter, PrimeClass, QuadClassGroup};
use crate::dirichlet::{gcd, kronecker, legendre_character, DirichletCharFF};
use crate::engine::{primes_up_to, ModularFormSpec};
use crate::error::{invalid, Error, Result};
use crate::ff::{is_prime, make_field, min_poly_element, prime_field, Fe, Field, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DihedralOptions {
    /// Characteristics to use; empty means all primes up to `bound`.
    pub list_of_primes: Vec<u64>,
    pub bound: u64,
    /// Every representation from d < 0 is odd, so this only documents intent.
    pub odd_only: bool,
    /// 0 means use the level.
    pub quad_disc: i64,
    pub completely_split: bool,
    pub all_conjugacy_classes: bool,
}

impl Default for DihedralOptions {
    fn default() -> Self {
        DihedralOptions {
            list_of_primes: vec![],
            bound: 100,
            odd_only: true,
            quad_disc: 0,
            completely_split: true,
            all_conjugacy_classes: true,
        }
    }
}

/// Everything needed to rebuild a dihedral form's coefficient function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DihedralSpec {
    pub discriminant: i64,
    pub characteristic: u64,
    pub character: ClassCharacter,
}

impl DihedralSpec {
    pub fn order(&self) -> u64 {
        self.character.order
    }

    pub fn level(&self) -> u64 {
        self.discriminant.unsigned_abs()
    }

    pub fn image_name(&self) -> String {
        format!("D_{{{}}}", self.order())
    }

    pub fn to_form(&self) -> Result<ModularFormSpec> {
        let ctx = Arc::new(Ctx::new(self)?);
        let p = self.characteristic;
        let fp = prime_field(p);
        let character: DirichletCharFF = if p == 2 {
            DirichletCharFF::trivial(self.level(), &fp)
        } else {
            legendre_character(self.level(), &fp)?
        };
        let c = ctx.clone();
        Ok(ModularFormSpec {
            character,
            weight: p as u32,
            coefficient_function: Arc::new(move |l| c.coefficient(l).ok()),
            image_name: Some(self.image_name()),
            defining_polynomial: None,
        })
    }
}

struct Ctx {
    d: i64,
    p: u64,
    group: QuadClassGroup,
    chi: ClassCharacter,
    big: Field,
    zeta: Fe,
}

impl Ctx {
    fn new(s: &DihedralSpec) -> Result<Ctx> {
        let group = class_group(s.discriminant)?;
        let n = s.order();
        if n < 3 || gcd(n, s.characteristic) != 1 {
            return invalid(format!("character order {n} unusable in characteristic {}", s.characteristic));
        }
        let m = multiplicative_order(s.characteristic % n, n);
        if u32::try_from(m).ok().and_then(|m| s.characteristic.checked_pow(m)).is_none_or(|q| q >= 1 << 62) {
            return Err(Error::Unsupported(format!("roots of unity of order {n} need GF({}^{m})", s.characteristic)));
        }
        let big = make_field(s.characteristic, m as u32)?;
        let zeta = big.root_of_unity(n).ok_or_else(|| Error::InvalidArgument(format!("no root of unity of order {n}")))?;
        Ok(Ctx { d: s.discriminant, p: s.characteristic, group, chi: s.character.clone(), big, zeta })
    }

    fn trace(&self, l: u64) -> Result<Option<Fe>> {
        if l == self.p || self.d.unsigned_abs().is_multiple_of(l) {
            return invalid(format!("coefficient at {l} is outside the good primes"));
        }
        Ok(match prime_class(self.d, l) {
            PrimeClass::Inert => None,
            PrimeClass::Split(f) => {
                let v = self.chi.exponent_at(&self.group, &f);
                let z = self.big.pow(self.zeta, v);
                Some(self.big.add(z, self.big.inv(z)))
            }
            PrimeClass::Ramified(_) => unreachable!(),
        })
    }

    fn coefficient(&self, l: u64) -> Result<Poly> {
        Ok(match self.trace(l)? {
            None => Poly::x(&prime_field(self.p)),
            Some(a) => min_poly_element(&self.big, a),
        })
    }
}

fn multiplicative_order(a: u64, n: u64) -> u64 {
    let mut k = 1;
    let mut x = a % n;
    while x != 1 {
        x = x * a % n;
        k += 1;
    }
    k
}

/// Minimal polynomial over GF(p) of the trace of Frobenius at l.
pub fn dihedral_coefficient(spec: &DihedralSpec, l: u64) -> Result<Poly> {
    if !is_prime(l) {
        return invalid(format!("{l} is not prime"));
    }
    Ctx::new(spec)?.coefficient(l)
}

pub fn effective_discriminant(n: u64, quad_disc: i64) -> i64 {
    let m = if quad_disc == 0 { n as i64 } else { quad_disc.abs() };
    if m % 4 == 1 {
        m
    } else {
        -m
    }
}

/// True iff p splits in K and the character is trivial on a prime above p.
pub fn is_completely_split(spec: &DihedralSpec, group: &QuadClassGroup) -> bool {
    match prime_class(spec.discriminant, spec.characteristic) {
        PrimeClass::Split(f) => spec.character.exponent_at(group, &f) == 0,
        _ => false,
    }
}

/// The dihedral targets for level `n`, ordered by characteristic
/// and then by character.
pub fn dihedral_specs(n: u64, opts: &DihedralOptions) -> Result<Vec<DihedralSpec>> {
    let d = effective_discriminant(n, opts.quad_disc);
    if d > 0 {
        return Err(Error::Unsupported(format!("real quadratic discriminant {d}")));
    }
    let group = class_group(d)?;
    let primes = if opts.list_of_primes.is_empty() { primes_up_to(opts.bound) } else { opts.list_of_primes.clone() };
    let mut out = Vec::new();
    for &p in &primes {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        // inverse characters give the same traces; at p = 2 both are kept
        let mut chars = character_classes(&group, p, p != 2);
        if !opts.all_conjugacy_classes {
            chars.dedup_by_key(|c| c.order);
        }
        for character in chars {
            let spec = DihedralSpec { discriminant: d, characteristic: p, character };
            if opts.completely_split && (kronecker(d, p as i64) != 1 || !is_completely_split(&spec, &group)) {
                continue;
            }
            out.push(spec);
        }
    }
    Ok(out)
}

pub fn dihedral_forms(n: u64, opts: &DihedralOptions) -> Result<Vec<ModularFormSpec>> {
    dihedral_specs(n, opts)?.iter().map(DihedralSpec::to_form).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::poly_factor;

    fn all_2039() -> DihedralOptions {
        DihedralOptions { list_of_primes: vec![2], completely_split: false, ..Default::default() }
    }

    #[test]
    fn specs_at_2039() {
        let specs = dihedral_specs(2039, &all_2039()).unwrap();
        let names: Vec<String> = specs.iter().map(|s| s.image_name()).collect();
        assert_eq!(names, ["D_{3}", "D_{5}", "D_{9}", "D_{15}", "D_{15}", "D_{45}", "D_{45}"]);
        let forms = dihedral_forms(2039, &all_2039()).unwrap();
        assert!(forms.iter().all(|f| f.level() == 2039 && f.weight == 2 && f.character.is_trivial()));
    }

    #[test]
    fn completely_split_at_431() {
        let specs = dihedral_specs(431, &DihedralOptions { bound: 20, ..Default::default() }).unwrap();
        let got: Vec<(u64, u64)> = specs.iter().map(|s| (s.characteristic, s.order())).collect();
        assert_eq!(got, [(2, 3), (11, 7)]);
        let g = class_group(-431).unwrap();
        for s in &specs {
            assert_eq!(kronecker(s.discriminant, s.characteristic as i64), 1);
            assert!(is_completely_split(s, &g));
        }
        let f = specs[1].to_form().unwrap();
        assert_eq!(f.weight, 11);
        assert!(!f.character.is_trivial());
    }

    #[test]
    fn class_number_one_is_empty() {
        let o = DihedralOptions { completely_split: false, ..Default::default() };
        assert!(dihedral_specs(7, &o).unwrap().is_empty());
        assert!(matches!(dihedral_specs(5, &o), Err(Error::Unsupported(_))));
    }

    #[test]
    fn coefficients() {
        let specs = dihedral_specs(2039, &all_2039()).unwrap();
        let d5 = &specs[1];
        let f2 = prime_field(2);
        let g = class_group(-2039).unwrap();
        let mut seen_order5 = false;
        for l in primes_up_to(200).into_iter().filter(|&l| l != 2 && l != 2039) {
            let c = dihedral_coefficient(d5, l).unwrap();
            match prime_class(-2039, l) {
                PrimeClass::Inert => assert_eq!(c, Poly::x(&f2)),
                PrimeClass::Split(f) => {
                    if d5.character.exponent_at(&g, &f) != 0 {
                        assert_eq!(c, Poly::new(&f2, vec![1, 1, 1]));
                        seen_order5 = true;
                    } else {
                        assert_eq!(c, Poly::x(&f2));
                    }
                }
                _ => unreachable!(),
            }
        }
        assert!(seen_order5);
        assert!(dihedral_coefficient(d5, 2).is_err());
        assert!(dihedral_coefficient(d5, 2039).is_err());

        let specs = dihedral_specs(431, &DihedralOptions { list_of_primes: vec![11], ..Default::default() }).unwrap();
        let g = class_group(-431).unwrap();
        let l = primes_up_to(300)
            .into_iter()
            .find(|&l| match prime_class(-431, l) {
                PrimeClass::Split(f) => l != 11 && specs[0].character.exponent_at(&g, &f) != 0,
                _ => false,
            })
            .unwrap();
        let c = dihedral_coefficient(&specs[0], l).unwrap();
        assert_eq!(c.deg(), 3);
        assert_eq!(poly_factor(&c).unwrap().factors.len(), 1);
    }

    #[test]
    fn inverse_characters_agree() {
        for p in [3u64, 5, 11, 13] {
            let specs = dihedral_specs(431, &DihedralOptions { list_of_primes: vec![p], completely_split: false, ..Default::default() })
                .unwrap();
            for s in &specs {
                let n = s.order();
                let inv = ClassCharacter { order: n, exponents: s.character.exponents.iter().map(|&t| (n - t) % n).collect() };
                let si = DihedralSpec { character: inv.clone(), ..s.clone() };
                for l in primes_up_to(100).into_iter().filter(|&l| l != p && l != 431) {
                    assert_eq!(dihedral_coefficient(s, l).unwrap(), dihedral_coefficient(&si, l).unwrap());
                }
                // no inverse pair survives the orbit reduction
                assert!(specs.iter().filter(|t| t.character == inv).count() == usize::from(inv == s.character));
            }
        }
    }

    #[test]
    fn spec_serde_round_trip() {
        let s = &dihedral_specs(431, &DihedralOptions { bound: 20, ..Default::default() }).unwrap()[1];
        let j = serde_json::to_string(s).unwrap();
        let back: DihedralSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(&back, s);
        let (a, b) = (s.to_form().unwrap(), back.to_form().unwrap());
        for l in [2u64, 3, 5, 7, 13, 17] {
            assert_eq!(a.coefficient(l), b.coefficient(l));
        }
    }
}
