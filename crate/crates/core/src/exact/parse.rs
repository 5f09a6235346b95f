//! Tiny parser for sums of monomials such as `x^2 - 2x - 1` or `3/2 - t/2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Splits a monomial sum into `(coefficient, exponent)` pairs. Any of `vars`
/// names the indeterminate.
pub(crate) fn parse_terms(s: &str, vars: &[char]) -> Result<Vec<(BigRational, usize)>> {
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut sign = 1i32;
    for (i, ch) in src.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push((sign, std::mem::take(&mut cur)));
            sign = if ch == '-' { -1 } else { 1 };
        } else if (ch == '+' || ch == '-') && i == 0 {
            sign = if ch == '-' { -1 } else { 1 };
        } else {
            cur.push(ch);
        }
    }
    terms.push((sign, cur));

    let mut out = Vec::with_capacity(terms.len());
    for (sign, t) in terms {
        if t.is_empty() {
            return Err(Error::Parse(format!("dangling sign in `{s}`")));
        }
        let (coef, exp) = parse_monomial(&t, vars)
            .ok_or_else(|| Error::Parse(format!("cannot parse term `{t}` in `{s}`")))?;
        let coef = if sign < 0 { -coef } else { coef };
        out.push((coef, exp));
    }
    Ok(out)
}

fn parse_monomial(t: &str, vars: &[char]) -> Option<(BigRational, usize)> {
    let Some(pos) = t.find(|c| vars.contains(&c)) else {
        return parse_rational(t).ok().map(|c| (c, 0));
    };
    let var_len = t[pos..].chars().next()?.len_utf8();
    let head = t[..pos].trim_end_matches('*');
    let tail = &t[pos + var_len..];
    let mut coef = if head.is_empty() {
        BigRational::one()
    } else {
        parse_rational(head).ok()?
    };
    let (exp_part, div_part) = match tail.split_once('/') {
        Some((e, d)) => (e, Some(d)),
        None => (tail, None),
    };
    let exp = if exp_part.is_empty() {
        1
    } else {
        exp_part.strip_prefix('^')?.parse().ok()?
    };
    if let Some(d) = div_part {
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        coef /= BigRational::from_integer(d);
    }
    Some((coef, exp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn monomial_sums() {
        let t = parse_terms("3/2 - t/2 + 2*t^3", &['t']).unwrap();
        assert_eq!(t, vec![(r(3, 2), 0), (r(-1, 2), 1), (r(2, 1), 3)]);
        let t = parse_terms("-x", &['x']).unwrap();
        assert_eq!(t, vec![(r(-1, 1), 1)]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_terms("x^", &['x']).is_err());
        assert!(parse_terms("1//2", &['x']).is_err());
        assert!(parse_terms("", &['x']).is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
