use serde::{Deserialize, Serialize};

use super::dyadic::Dyadic;
use super::interval::CertifiedValue;
use crate::error::Result;

/// Default precision cap for certified comparisons.
pub const DEFAULT_MAX_BITS: u32 = 4096;

/// Outcome of a certified comparison. `Undecided` is a value, not an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    True,
    False,
    Undecided,
}

impl Decision {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Self::True
        } else {
            Self::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Self::True
    }

    pub fn is_false(self) -> bool {
        self == Self::False
    }

    pub fn is_decided(self) -> bool {
        self != Self::Undecided
    }

    pub fn not(self) -> Self {
        match self {
            Self::True => Self::False,
            Self::False => Self::True,
            Self::Undecided => Self::Undecided,
        }
    }

    /// Three-valued conjunction.
    pub fn and(self, o: Self) -> Self {
        match (self, o) {
            (Self::False, _) | (_, Self::False) => Self::False,
            (Self::True, Self::True) => Self::True,
            _ => Self::Undecided,
        }
    }

    /// Three-valued disjunction.
    pub fn or(self, o: Self) -> Self {
        match (self, o) {
            (Self::True, _) | (_, Self::True) => Self::True,
            (Self::False, Self::False) => Self::False,
            _ => Self::Undecided,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::True => "true",
            Self::False => "false",
            Self::Undecided => "undecided",
        }
    }
}

/// Comparisons understood by [`decide`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// `values[0] < values[1]` (real parts).
    Lt,
    /// `values[0] > values[1]` (real parts).
    Gt,
    /// `values[0]` is a rational integer.
    EqInt,
    /// `|values[0]| < 1`.
    InUnitDisk,
}

/// Precisions tried by the refinement loop: 64, 128, ... capped at `max_bits`.
pub fn precision_ladder(max_bits: u32) -> Vec<u32> {
    let mut v = Vec::new();
    let mut b = 64u32;
    while b < max_bits {
        v.push(b);
        b = b.saturating_mul(2);
    }
    v.push(max_bits.max(64));
    v
}

/// Runs `step` along the precision ladder until it returns a verdict.
pub fn decide_with<F>(max_bits: u32, mut step: F) -> Decision
where
    F: FnMut(u32) -> Option<bool>,
{
    for bits in precision_ladder(max_bits) {
        if let Some(b) = step(bits) {
            return Decision::from_bool(b);
        }
    }
    Decision::Undecided
}

fn judge(cmp: Comparison, v: &[CertifiedValue]) -> Option<bool> {
    match cmp {
        Comparison::Lt => v[0].re().lt(v[1].re()),
        Comparison::Gt => v[1].re().lt(v[0].re()),
        Comparison::EqInt => {
            let x = &v[0];
            if !x.im().contains_zero() {
                return Some(false);
            }
            let lo = x.re().lo().ceil_int();
            let hi = x.re().hi().floor_int();
            if lo > hi {
                Some(false)
            } else if x.re().is_point() && x.im().is_point() {
                Some(true)
            } else {
                None
            }
        }
        Comparison::InUnitDisk => {
            let n = v[0].norm_sqr();
            let one = Dyadic::one();
            if n.hi() < &one {
                Some(true)
            } else if n.lo() >= &one {
                Some(false)
            } else {
                None
            }
        }
    }
}

/// Certified comparison with adaptive precision.
///
/// `refine(bits)` must reproduce the operands at (at least) `bits` of
/// working precision. A verdict is returned only when the enclosures prove
/// it; when they stay ambiguous the optional exact test is consulted, and
/// otherwise the answer is `Undecided` once `max_bits` is exhausted.
pub fn decide<F>(
    cmp: Comparison,
    mut refine: F,
    max_bits: u32,
    exact: Option<&dyn Fn() -> bool>,
) -> Decision
where
    F: FnMut(u32) -> Result<Vec<CertifiedValue>>,
{
    for bits in precision_ladder(max_bits) {
        let Ok(values) = refine(bits) else {
            continue;
        };
        if let Some(b) = judge(cmp, &values) {
            return Decision::from_bool(b);
        }
        if let Some(f) = exact {
            return Decision::from_bool(f());
        }
    }
    Decision::Undecided
}
