//! Example eigenforms: dihedral ones from class groups and icosahedral ones
//! from quintics.

pub mod classgroup;
pub mod dihedral;
pub mod icosahedral;

use serde::{Deserialize, Serialize};

pub use classgroup::{class_group, prime_class, ClassCharacter, PrimeClass, QuadClassGroup, QuadForm};
pub use dihedral::{dihedral_coefficient, dihedral_forms, dihedral_specs, DihedralOptions, DihedralSpec};
pub use icosahedral::{a5_form, a5_trace, predicted_level, Quintic};

use crate::engine::ModularFormSpec;
use crate::error::Result;

/// Serializable description of a form; the coefficient function is rebuilt on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FormSource {
    Dihedral(DihedralSpec),
    Icosahedral(Quintic),
}

impl FormSource {
    pub fn to_spec(&self) -> Result<ModularFormSpec> {
        match self {
            FormSource::Dihedral(d) => d.to_form(),
            FormSource::Icosahedral(q) => a5_form(q),
        }
    }
}
