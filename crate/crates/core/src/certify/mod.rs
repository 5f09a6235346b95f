//! Certified real and complex interval arithmetic, root isolation and
//! embeddings of field elements into the complex numbers.

mod decide;
mod dyadic;
mod embed;
mod interval;
mod roots;

pub use decide::{decide, decide_with, precision_ladder, Comparison, Decision, DEFAULT_MAX_BITS};
pub use dyadic::{Dyadic, Round};
pub use embed::{
    compare_modulus_one, complex_conjugation, embed, embed_default, galois_root_permutation,
    modulus_lt_one, modulus_squared,
};
pub use interval::{interval_arith, CertifiedValue, Interval, IntervalOp};
pub use roots::{isolate_roots, RootEnclosure, RootLadder, RootSystem};
