//! Local factors of Hecke algebras of mod p modular forms, computed from
//! modular symbols over finite fields.
//!
//! The pipeline is: [`modsym`] builds a presented space of Manin symbols,
//! [`engine`] iterates Hecke operators and restricts to the wanted systems
//! of eigenvalues until a dimension test certifies that the operators seen
//! so far generate the whole local algebra, and [`localalg`] reads off the
//! Gorenstein defect and friends. [`forms`] produces dihedral and
//! icosahedral targets, [`cli`] stores and prints results.

pub mod cli;
pub mod dirichlet;
pub mod engine;
pub mod error;
pub mod ff;
pub mod forms;
pub mod linalg;
pub mod localalg;
pub mod modsym;

pub use error::{Error, Result};
