use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::poly::IntPolynomial;
use crate::certify::{isolate_roots, CertifiedValue};
use crate::error::{Error, Result};

/// Largest degree for which irreducibility is proved rather than assumed.
pub const IRREDUCIBILITY_CHECK_MAX_DEGREE: usize = 8;

/// How irreducibility of a defining polynomial was established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// Proved: squarefree and no factor of degree `<= n/2` over `Q`.
    Verified,
    /// Degree above the proof cap; squarefree, otherwise taken on trust.
    Assumed { warning: String },
}

/// Proves irreducibility over `Q` for degree at most
/// [`IRREDUCIBILITY_CHECK_MAX_DEGREE`] by testing every subset of at most
/// half the certified complex roots as a candidate factor; higher degrees
/// only get the squarefree test and are accepted with a warning.
pub fn check_irreducible(f: &IntPolynomial) -> Result<Irreducibility> {
    let f = f.primitive();
    let n = f.degree();
    if n <= 1 {
        return Ok(Irreducibility::Verified);
    }
    if !f.is_squarefree() {
        return Err(Error::InvalidField(format!("{f} is not squarefree")));
    }
    if f.coeff(0).is_zero() {
        return Err(Error::InvalidField(format!("{f} is divisible by x")));
    }
    if n > IRREDUCIBILITY_CHECK_MAX_DEGREE {
        return Ok(Irreducibility::Assumed {
            warning: format!(
                "degree {n} exceeds {IRREDUCIBILITY_CHECK_MAX_DEGREE}; irreducibility of {f} not proved"
            ),
        });
    }
    if let Some(g) = find_factor(&f) {
        return Err(Error::InvalidField(format!("{f} has the factor {g}")));
    }
    Ok(Irreducibility::Verified)
}

/// Searches for a nontrivial factor of a squarefree primitive `f`.
pub(crate) fn find_factor(f: &IntPolynomial) -> Option<IntPolynomial> {
    let n = f.degree();
    let lc = f.leading().abs();
    let mut bits = 64u32;
    'refine: loop {
        let sys = isolate_roots(f, bits);
        let roots: Vec<CertifiedValue> = (0..sys.len()).map(|k| sys.enclosure(k)).collect();
        let lc_val = CertifiedValue::from_int(&lc, bits + 32);
        for k in 1..=n / 2 {
            for subset in subsets(n, k) {
                // lc * prod (x - r) has integer coefficients if it divides f
                let mut prod = vec![lc_val.clone()];
                for &i in &subset {
                    let mut next = vec![CertifiedValue::from_int(&BigInt::zero(), bits); prod.len() + 1];
                    for (j, c) in prod.iter().enumerate() {
                        next[j + 1] = next[j + 1].add(c);
                        next[j] = next[j].sub(&c.mul(&roots[i]));
                    }
                    prod = next;
                }
                let mut coeffs = Vec::with_capacity(prod.len());
                for c in &prod {
                    if !c.im().contains_zero() {
                        coeffs.clear();
                        break;
                    }
                    let lo = c.re().lo().ceil_int();
                    let hi = c.re().hi().floor_int();
                    if lo > hi {
                        coeffs.clear();
                        break;
                    }
                    if lo != hi {
                        if bits >= 1 << 14 {
                            // unreachable for the supported degrees; be safe
                            return None;
                        }
                        bits *= 2;
                        continue 'refine;
                    }
                    coeffs.push(lo);
                }
                if coeffs.is_empty() {
                    continue;
                }
                let g = IntPolynomial::new(coeffs).primitive();
                if g.degree() == k && f.div_exact(&g).is_some() {
                    return Some(g);
                }
            }
        }
        return None;
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
