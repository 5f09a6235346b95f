//! Scans of `∥α^n∥` against `ℓ^{-εn}` for rational `α = k/ℓ`, and against
//! `α^{-εn}` for a real algebraic `α`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use serde_json::json;

use super::eval::{modulus, nearest_integer};
use super::report::Report;
use crate::certify::{precision_ladder, CertifiedValue, Decision, Interval};
use crate::error::{Error, Result};
use crate::exact::FieldElement;
use crate::heights::nearest_int_rational;

#[derive(Clone, Debug, Serialize)]
pub struct MahlerRow {
    pub n: u64,
    pub p: String,
    /// `∥α^n∥` as an exact fraction.
    pub distance: String,
    pub distance_approx: f64,
    pub threshold_approx: f64,
    pub qualifies: bool,
    /// `∥α^n∥` equals the threshold exactly.
    pub boundary: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MahlerScan {
    pub alpha: String,
    pub epsilon: String,
    pub nmax: u64,
    pub rows: Vec<MahlerRow>,
    pub qualifying: Vec<u64>,
    pub boundaries: Vec<u64>,
}

impl MahlerScan {
    pub fn max_qualifying(&self) -> Option<u64> {
        self.qualifying.last().copied()
    }

    pub fn report(&self, config: serde_json::Value) -> Report {
        let mut r = Report::new(
            "mahler",
            config,
            &["n", "p", "distance", "distance_approx", "threshold_approx", "qualifies", "boundary"],
        );
        for row in &self.rows {
            r.push_row(serde_json::to_value(row).expect("row serializes"));
        }
        r.summary.insert("alpha".into(), json!(self.alpha));
        r.summary.insert("epsilon".into(), json!(self.epsilon));
        r.summary.insert("nmax".into(), json!(self.nmax));
        r.summary.insert("qualifying".into(), json!(self.qualifying));
        r.summary.insert("boundaries".into(), json!(self.boundaries));
        r.summary.insert("max_qualifying".into(), json!(self.max_qualifying()));
        r
    }
}

/// `{n ≤ nmax : ∥(k/ℓ)^n∥ < ℓ^{-εn}}` by exact rational arithmetic:
/// with `ε = a/b` the test reads `∥α^n∥^b · ℓ^{an} < 1`, and equality is
/// flagged as a boundary.
pub fn mahler_scan(alpha: &BigRational, epsilon: &BigRational, nmax: u64) -> Result<MahlerScan> {
    if alpha.is_integer() || alpha <= &BigRational::one() {
        return Err(Error::BadInput(format!(
            "α must be a non-integer rational greater than 1, got {alpha}"
        )));
    }
    if !epsilon.is_positive() {
        return Err(Error::BadInput("ε must be positive".into()));
    }
    let ell = alpha.denom().clone();
    let a = epsilon
        .numer()
        .to_usize()
        .ok_or_else(|| Error::BadInput("ε numerator too large".into()))?;
    let b = epsilon
        .denom()
        .to_usize()
        .ok_or_else(|| Error::BadInput("ε denominator too large".into()))?;
    let eps_f = epsilon.to_f64().unwrap_or(f64::NAN);
    let ell_f = ell.to_f64().unwrap_or(f64::INFINITY);
    let mut rows = Vec::with_capacity(nmax as usize);
    let mut qualifying = Vec::new();
    let mut boundaries = Vec::new();
    let mut x = BigRational::one();
    for n in 1..=nmax {
        x *= alpha;
        let (p, dist) = nearest_int_rational(&x);
        let scaled = num_traits::pow(dist.clone(), b) * BigRational::from_integer(num_traits::pow(ell.clone(), a * n as usize));
        let ord = scaled.cmp(&BigRational::one());
        let qualifies = ord.is_lt();
        let boundary = ord.is_eq();
        if qualifies {
            qualifying.push(n);
        }
        if boundary {
            boundaries.push(n);
        }
        rows.push(MahlerRow {
            n,
            p: p.to_string(),
            distance: dist.to_string(),
            distance_approx: dist.to_f64().unwrap_or(f64::NAN),
            threshold_approx: ell_f.powf(-eps_f * n as f64),
            qualifies,
            boundary,
        });
    }
    Ok(MahlerScan {
        alpha: alpha.to_string(),
        epsilon: epsilon.to_string(),
        nmax,
        rows,
        qualifying,
        boundaries,
    })
}

/// One step of [`mahler_scan_algebraic`].
#[derive(Clone, Debug)]
pub struct AlgebraicRow {
    pub n: u64,
    pub p: Option<BigInt>,
    /// `α^n - p` exactly.
    pub residual: Option<FieldElement>,
    pub distance: Option<CertifiedValue>,
    pub threshold: Interval,
    pub qualifies: Decision,
    pub boundary: bool,
}

/// `∥α^n∥` against `α^{-εn}` for `α` real under the field's embedding.
/// Equality is decided exactly as `(α^n - p)^{2b} = α^{-2an}` for
/// `ε = a/b`.
pub fn mahler_scan_algebraic(
    alpha: &FieldElement,
    epsilon: &BigRational,
    nmax: u64,
    max_bits: u32,
) -> Result<Vec<AlgebraicRow>> {
    if !alpha.field().is_real_embedding() {
        return Err(Error::BadInput("α must be real under the field's embedding".into()));
    }
    if alpha.is_zero() {
        return Err(Error::ZeroInput);
    }
    let a = epsilon
        .numer()
        .to_i64()
        .ok_or_else(|| Error::BadInput("ε numerator too large".into()))?;
    let b = epsilon
        .denom()
        .to_i64()
        .ok_or_else(|| Error::BadInput("ε denominator too large".into()))?;
    let field = alpha.field();
    let mut rows = Vec::new();
    let mut x = FieldElement::one(field);
    for n in 1..=nmax {
        x = &x * alpha;
        let p = nearest_integer(&x, max_bits)?;
        let exp = -(epsilon.clone() * BigRational::from_integer((n as i64).into()));
        let threshold = |bits: u32| -> Result<Interval> {
            modulus(alpha, bits)?.pow_rational(&exp, bits + 32)
        };
        let Some(p) = p else {
            rows.push(AlgebraicRow {
                n,
                p: None,
                residual: None,
                distance: None,
                threshold: threshold(64)?,
                qualifies: Decision::Undecided,
                boundary: false,
            });
            continue;
        };
        let r = x.checked_sub(&FieldElement::from_rational(field, BigRational::from_integer(p.clone())))?;
        let boundary = !r.is_zero() && r.pow(2 * b)? == alpha.pow(-2 * a * n as i64)?;
        let mut qualifies = Decision::Undecided;
        if boundary {
            qualifies = Decision::False;
        } else if r.is_zero() {
            qualifies = Decision::True;
        } else {
            for bits in precision_ladder(max_bits) {
                let d = modulus(&r, bits)?;
                let t = threshold(bits)?;
                if let Some(v) = d.lt(&t) {
                    qualifies = Decision::from_bool(v);
                    break;
                }
            }
        }
        let dist = crate::certify::embed_default(&r, 64)?.abs();
        rows.push(AlgebraicRow {
            n,
            p: Some(p),
            residual: Some(r),
            distance: Some(dist),
            threshold: threshold(64)?,
            qualifies,
            boundary,
        });
    }
    Ok(rows)
}

/// Report for [`mahler_scan_algebraic`].
pub fn algebraic_report(alpha: &FieldElement, epsilon: &BigRational, rows: &[AlgebraicRow], config: serde_json::Value) -> Report {
    let mut r = Report::new(
        "mahler",
        config,
        &["n", "p", "residual", "distance", "threshold", "qualifies", "boundary"],
    );
    let mut qualifying = Vec::new();
    let mut boundaries = Vec::new();
    for row in rows {
        if row.qualifies == Decision::True {
            qualifying.push(row.n);
        }
        if row.boundary {
            boundaries.push(row.n);
        }
        if row.qualifies == Decision::Undecided {
            r.undecided += 1;
        }
        r.push_row(json!({
            "n": row.n,
            "p": row.p.as_ref().map(|p| p.to_string()),
            "residual": row.residual.as_ref().map(|x| x.to_string()),
            "distance": row.distance.as_ref().map(|d| d.to_decimal()),
            "threshold": CertifiedValue::real(row.threshold.clone(), 64).to_decimal(),
            "qualifies": row.qualifies,
            "boundary": row.boundary,
        }));
    }
    r.summary.insert("alpha".into(), json!(alpha.to_string()));
    r.summary.insert("minpoly".into(), json!(alpha.minimal_polynomial().to_string()));
    r.summary.insert("epsilon".into(), json!(epsilon.to_string()));
    r.summary.insert("qualifying".into(), json!(qualifying));
    r.summary.insert("boundaries".into(), json!(boundaries));
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn three_halves() {
        let s = mahler_scan(&q(3, 2), &q(1, 1), 50).unwrap();
        assert!(s.qualifying.is_empty());
        assert_eq!(s.rows.len(), 50);
        assert_eq!(s.rows[0].distance, "1/2");
        assert!(s.boundaries.contains(&4));
        assert_eq!(s.rows[3].distance, "1/16");
    }

    #[test]
    fn rejects_integers() {
        assert!(mahler_scan(&q(2, 1), &q(1, 1), 5).is_err());
        assert!(mahler_scan(&q(1, 2), &q(1, 1), 5).is_err());
        assert!(mahler_scan(&q(3, 2), &q(0, 1), 5).is_err());
    }
}
