//! Finite fields GF(p^k), univariate polynomials and their factorization.

pub mod factor;
pub mod field;
pub mod poly;

pub use factor::{lift_prime_poly, min_poly_element, poly_factor, poly_factor_seeded, roots, Embedding, Factorization};
pub use field::{is_prime, make_field, prime_factors, prime_field, Fe, Field};
pub use poly::{is_irreducible, Poly};
