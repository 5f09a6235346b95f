//! Exact arithmetic: integer and rational polynomials, the number field
//! `K = Q(θ)` and its verified Galois group.

mod field;
mod galois;
mod irreducible;
mod parse;
mod poly;

pub use field::{field_arith, FieldBuilder, FieldElement, FieldOp, NumberFieldDesc};
pub use galois::{apply_galois, galois_orbit, verify_galois_group, GaloisData};
pub use irreducible::{check_irreducible, Irreducibility, IRREDUCIBILITY_CHECK_MAX_DEGREE};
pub use parse::parse_rational;
pub use poly::{euler_phi, IntPolynomial};

