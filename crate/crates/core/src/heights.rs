//! Absolute Weil height, projective height over `Q`, nearest-integer
//! distance, places of `Q` and S-integrality.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::certify::{isolate_roots, CertifiedValue, Decision, Dyadic, Interval};
use crate::error::{Error, Result};
use crate::exact::{FieldElement, IntPolynomial};

/// `H(a)` as a certified positive real together with `log H(a)`.
#[derive(Clone, Debug)]
pub struct HeightValue {
    pub value: CertifiedValue,
    pub log_value: CertifiedValue,
    /// Primitive integer minimal polynomial the height was computed from.
    pub source_poly: IntPolynomial,
    /// Set when `H(a)` is rational (degree one, or a root of unity).
    pub exact: Option<BigRational>,
}

impl HeightValue {
    pub fn degree(&self) -> usize {
        self.source_poly.degree()
    }

    /// Mahler measure `M(f) = H^deg`, enclosed.
    pub fn mahler_measure(&self) -> Result<CertifiedValue> {
        self.value.pow_int(self.degree() as i64)
    }

    /// `H^e` for a rational exponent.
    pub fn pow(&self, e: &BigRational) -> Result<CertifiedValue> {
        if let Some(x) = &self.exact {
            if x.is_one() {
                return Ok(CertifiedValue::from_int(&BigInt::one(), self.value.precision_bits()));
            }
        }
        self.value.pow_rational(e)
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(x) => write!(f, "{x}"),
            None => write!(f, "{}", self.value),
        }
    }
}

/// Absolute Weil height `H(a) = (|a_d| ∏ max(1, |r_i|))^(1/d)` from the
/// primitive minimal polynomial `a_d x^d + …` with roots `r_i`, enclosed
/// to roughly `bits` bits.
pub fn weil_height(a: &FieldElement, bits: u32) -> Result<HeightValue> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    height_from_poly(&a.minimal_polynomial(), bits)
}

/// [`weil_height`] for an algebraic number given by its minimal polynomial
/// (assumed irreducible; a reducible input gives the height of its
/// squarefree part's Mahler measure spread over the degree).
pub fn height_from_poly(f: &IntPolynomial, bits: u32) -> Result<HeightValue> {
    let f = f.primitive();
    let d = f.degree();
    if d == 0 || (d == 1 && f.coeff(0).is_zero()) {
        return Err(Error::ZeroInput);
    }
    let prec = bits + 32;
    let exact = if d == 1 {
        Some(BigRational::from_integer(f.coeff(0).abs().max(f.coeff(1).abs())))
    } else if f.cyclotomic_index().is_some() {
        Some(BigRational::one())
    } else {
        None
    };
    if let Some(x) = exact {
        let value = CertifiedValue::from_rational(&x, prec);
        let log = value.re().ln(prec)?;
        return Ok(HeightValue {
            value,
            log_value: CertifiedValue::real(log, prec),
            source_poly: f,
            exact: Some(x),
        });
    }
    let m = mahler_measure(&f, bits + 8 + d as u32);
    let value = m.nth_root(d as u32, prec);
    let log = m
        .ln(prec)?
        .div(&Interval::from_int(&BigInt::from(d)), prec)?;
    Ok(HeightValue {
        value: CertifiedValue::real(value, prec),
        log_value: CertifiedValue::real(log, prec),
        source_poly: f,
        exact: None,
    })
}

/// Mahler measure `|lc| ∏ max(1, |r|)` of a polynomial over its certified
/// roots (with multiplicity taken from the squarefree part only).
pub fn mahler_measure(f: &IntPolynomial, bits: u32) -> Interval {
    let prec = bits + 32;
    let sys = isolate_roots(f, bits);
    let one = Dyadic::one();
    let mut acc = Interval::from_int(&f.leading().abs());
    for k in 0..sys.len() {
        let z = sys.enclosure(k).with_precision(prec);
        let m = z.abs().re().max_with(&one);
        acc = acc.mul(&m, prec);
    }
    acc
}

/// Projective height of a nonzero vector with rational coordinates: clear
/// denominators to coprime integers and take the largest absolute value.
pub fn projective_height_rational(v: &[BigRational]) -> Result<BigInt> {
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroInput);
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Ok(ints.iter().map(|x| (x / &g).abs()).max().expect("nonempty"))
}

/// [`projective_height_rational`] for field elements that are rational.
pub fn projective_height(v: &[FieldElement]) -> Result<BigInt> {
    let rats = v
        .iter()
        .map(|x| {
            x.as_rational().ok_or_else(|| {
                Error::BadInput(format!(
                    "projective height is implemented for rational coordinates only; got {x}"
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    projective_height_rational(&rats)
}

/// Nearest integer `p` to a real enclosure and a certified enclosure of
/// `∥x∥ = |x - p|`.
#[derive(Clone, Debug)]
pub struct NearestInt {
    pub p: BigInt,
    pub distance: Interval,
    /// `False`/`True` never occurs; `Undecided` means `x` may sit on either
    /// side of a half-integer and `p` is a tie-break. The distance
    /// enclosure is valid either way.
    pub p_certain: Decision,
}

/// `∥x∥` with its nearest integer. The enclosure must be real and narrower
/// than `1/4`. When `x` may equal a half-integer `k + 1/2`, `cmp_half` is
/// asked to compare `x` with it exactly; a tie takes `p = k + 1`.
pub fn nearest_int_distance(
    x: &CertifiedValue,
    cmp_half: Option<&dyn Fn(&BigRational) -> Option<Ordering>>,
) -> Result<NearestInt> {
    if !x.im().contains_zero() {
        return Err(Error::BadInput("nearest integer of a non-real value".into()));
    }
    let re = x.re();
    let quarter = Dyadic::one().mul_pow2(-2);
    if re.width() >= quarter {
        return Err(Error::NeedsRefinement);
    }
    let prec = x.precision_bits() + 8;
    let half = Dyadic::one().mul_pow2(-1);
    let p_lo = re.lo().add(&half).floor_int();
    let p_hi = re.hi().add(&half).floor_int();
    let dist_to = |p: &BigInt| re.sub(&Interval::from_int(p), prec).abs();
    if p_lo == p_hi {
        let d = dist_to(&p_lo);
        return Ok(NearestInt {
            p: p_lo,
            distance: d,
            p_certain: Decision::True,
        });
    }
    // straddles k + 1/2 with k = p_lo
    let d1 = dist_to(&p_lo);
    let d2 = dist_to(&p_hi);
    let lo = d1.lo().clone().min(d2.lo().clone());
    let hi = d1.hi().clone().min(d2.hi().clone()).min(half.clone());
    let distance = Interval::new(lo.min(hi.clone()), hi);
    let mid = BigRational::new(&p_lo * 2 + 1, BigInt::from(2));
    let decided = cmp_half.and_then(|f| f(&mid));
    let (p, certain) = match decided {
        Some(Ordering::Less) => (p_lo, Decision::True),
        Some(_) => (p_hi, Decision::True),
        None => (p_hi, Decision::Undecided),
    };
    let distance = match decided {
        Some(Ordering::Equal) => Interval::point(half),
        Some(_) => dist_to(&p),
        None => distance,
    };
    Ok(NearestInt {
        p,
        distance,
        p_certain: certain,
    })
}

/// `∥x∥` and the nearest integer of a rational, exactly (ties go up).
pub fn nearest_int_rational(x: &BigRational) -> (BigInt, BigRational) {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let p = (x + &half).floor().to_integer();
    let d = (x - BigRational::from_integer(p.clone())).abs();
    (p, d)
}

/// A place of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RationalPlace {
    Archimedean,
    Prime(u64),
}

impl RationalPlace {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Self::Prime(p))
        } else {
            Err(Error::BadInput(format!("{p} is not prime")))
        }
    }
}

impl fmt::Display for RationalPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Archimedean => write!(f, "∞"),
            Self::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `v_p(x)` for nonzero rational `x`.
pub fn valuation(x: &BigRational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let count = |n: &BigInt| {
        let p = BigInt::from(p);
        let mut n = n.abs();
        let mut k = 0i64;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        k
    };
    Ok(count(x.numer()) - count(x.denom()))
}

/// Normalized absolute value of a nonzero rational at a place of `Q`:
/// `|x|` at infinity, `p^(-v_p(x))` at `p`.
pub fn rational_abs(x: &BigRational, place: RationalPlace) -> Result<BigRational> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    match place {
        RationalPlace::Archimedean => Ok(x.abs()),
        RationalPlace::Prime(p) => {
            let v = valuation(x, p)?;
            let pp = BigInt::from(p).pow(v.unsigned_abs() as u32);
            Ok(if v >= 0 {
                BigRational::new(BigInt::one(), pp)
            } else {
                BigRational::from_integer(pp)
            })
        }
    }
}

const TRIAL_LIMIT: u64 = 1 << 20;

/// Prime divisors of `n`, by trial division up to `2^20`; a cofactor left
/// over must then be below `2^40` (hence prime) or is rejected.
pub fn prime_factors(n: &BigInt) -> Result<Vec<u64>> {
    let mut n = n.abs();
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p < TRIAL_LIMIT && BigInt::from(p) * BigInt::from(p) <= n {
        // machine arithmetic once the cofactor fits
        if let Some(mut m) = n.to_u64() {
            while p < TRIAL_LIMIT && p.saturating_mul(p) <= m {
                if m % p == 0 {
                    out.push(p);
                    while m % p == 0 {
                        m /= p;
                    }
                }
                p += if p == 2 { 1 } else { 2 };
            }
            n = BigInt::from(m);
            break;
        }
        let bp = BigInt::from(p);
        if (&n % &bp).is_zero() {
            out.push(p);
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        match n.to_u64() {
            Some(c) if c < TRIAL_LIMIT * TRIAL_LIMIT || is_prime(c) => out.push(c),
            _ => {
                return Err(Error::BadInput(format!(
                    "cannot factor {n} by trial division"
                )))
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// The archimedean place and every prime dividing numerator or denominator;
/// all other places give `|x|_p = 1`.
pub fn support_places(x: &BigRational) -> Result<Vec<RationalPlace>> {
    let mut primes = prime_factors(x.numer())?;
    primes.extend(prime_factors(x.denom())?);
    primes.sort_unstable();
    primes.dedup();
    let mut out = vec![RationalPlace::Archimedean];
    out.extend(primes.into_iter().map(RationalPlace::Prime));
    Ok(out)
}

/// `∏_v |x|_v` over [`support_places`]; equals one by the product formula.
pub fn product_over_places(x: &BigRational) -> Result<BigRational> {
    support_places(x)?
        .into_iter()
        .try_fold(BigRational::one(), |acc, v| Ok(acc * rational_abs(x, v)?))
}

/// The monic rational minimal polynomial has integer coefficients.
pub fn is_algebraic_integer(a: &FieldElement) -> bool {
    a.minimal_polynomial().leading().abs().is_one()
}

fn supported_on(mut n: BigInt, primes: &[u64]) -> bool {
    n = n.abs();
    for &p in primes {
        let bp = BigInt::from(p);
        if bp <= BigInt::one() {
            continue;
        }
        while !n.is_zero() && (&n % &bp).is_zero() {
            n /= &bp;
        }
    }
    n.is_one()
}

/// Every denominator of the monic minimal polynomial is a product of the
/// given primes. For a primitive minimal polynomial this is exactly: the
/// leading coefficient is supported on `primes`.
pub fn is_s_integer(a: &FieldElement, primes: &[u64]) -> bool {
    supported_on(a.minimal_polynomial().leading(), primes)
}

/// `a` and `1/a` are both S-integers. The minimal polynomial of `1/a` is the
/// reversal of that of `a`, so this checks leading and constant terms.
pub fn is_s_unit(a: &FieldElement, primes: &[u64]) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    let f = a.minimal_polynomial();
    Ok(supported_on(f.leading(), primes) && supported_on(f.coeff(0), primes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::NumberFieldDesc;
    use std::sync::Arc;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn field(c: &[i64]) -> Arc<NumberFieldDesc> {
        NumberFieldDesc::builder(IntPolynomial::from_i64s(c))
            .build()
            .unwrap()
    }

    #[test]
    fn height_fixtures() {
        let qf = NumberFieldDesc::rationals();
        let h = weil_height(&FieldElement::from_rational(&qf, q(3, 2)), 64).unwrap();
        assert_eq!(h.exact, Some(q(3, 1)));
        assert_eq!(h.source_poly, IntPolynomial::from_i64s(&[-3, 2]));

        let k = field(&[-2, 0, 1]);
        let h = weil_height(&FieldElement::theta(&k), 128).unwrap();
        assert!(h.value.re().lo().to_f64() >= std::f64::consts::SQRT_2 - 1e-12);
        assert!(h.value.re().hi().to_f64() <= 1.414213562374);

        let z5 = field(&[1, 1, 1, 1, 1]);
        let h = weil_height(&FieldElement::theta(&z5), 64).unwrap();
        assert_eq!(h.exact, Some(q(1, 1)));
        assert!(weil_height(&FieldElement::zero(&k), 64).is_err());
    }

    #[test]
    fn log_height_matches() {
        let k = field(&[-1, -1, 1]);
        let h = weil_height(&FieldElement::theta(&k), 128).unwrap();
        // log H(φ) = log(φ) / 2
        let expect = (1.618033988749895f64).ln() / 2.0;
        assert!((h.log_value.to_f64() - expect).abs() < 1e-14);
    }

    #[test]
    fn projective_heights() {
        assert_eq!(projective_height_rational(&[q(1, 1), q(3, 2)]).unwrap(), 3.into());
        assert_eq!(projective_height_rational(&[q(1, 1), q(0, 1), q(0, 1)]).unwrap(), 1.into());
        assert_eq!(projective_height_rational(&[q(4, 1), q(6, 1)]).unwrap(), 3.into());
        assert!(projective_height_rational(&[q(0, 1)]).is_err());
    }

    #[test]
    fn nearest_integers() {
        let n = nearest_int_distance(&CertifiedValue::real_ball(3.7, 1e-12, 64), None).unwrap();
        assert_eq!(n.p, 4.into());
        assert!((n.distance.to_f64() - 0.3).abs() < 1e-9);
        let n = nearest_int_distance(&CertifiedValue::real_ball(-1.2, 1e-12, 64), None).unwrap();
        assert_eq!(n.p, (-1).into());
        assert!((n.distance.to_f64() - 0.2).abs() < 1e-9);
        assert!(matches!(
            nearest_int_distance(&CertifiedValue::real_ball(0.0, 0.2, 64), None),
            Err(Error::NeedsRefinement)
        ));
        let tie = CertifiedValue::real_ball(2.5, 1e-9, 64);
        let n = nearest_int_distance(&tie, None).unwrap();
        assert_eq!(n.p_certain, Decision::Undecided);
        assert!(n.distance.hi() <= &Dyadic::one().mul_pow2(-1));
        let exact = |m: &BigRational| Some(q(5, 2).cmp(m));
        let n = nearest_int_distance(&tie, Some(&exact)).unwrap();
        assert_eq!(n.p, 3.into());
        assert_eq!(n.distance, Interval::point(Dyadic::one().mul_pow2(-1)));
    }

    #[test]
    fn places() {
        assert_eq!(rational_abs(&q(6, 1), RationalPlace::Prime(2)).unwrap(), q(1, 2));
        assert_eq!(rational_abs(&q(-3, 4), RationalPlace::Prime(2)).unwrap(), q(4, 1));
        assert_eq!(product_over_places(&q(6, 1)).unwrap(), q(1, 1));
        assert!(rational_abs(&q(0, 1), RationalPlace::Archimedean).is_err());
        assert!(RationalPlace::prime(9).is_err());
        assert!(is_prime(1_000_000_007));
        assert_eq!(prime_factors(&BigInt::from(360)).unwrap(), vec![2, 3, 5]);
    }

    #[test]
    fn integrality() {
        let k = field(&[-2, 0, 1]);
        let a = FieldElement::parse(&k, "1+t").unwrap();
        assert!(is_algebraic_integer(&a));
        assert!(is_s_unit(&a, &[]).unwrap());
        let half = FieldElement::from_rational(&k, q(1, 2));
        assert!(!is_algebraic_integer(&half));
        assert!(is_s_integer(&half, &[2]));
        assert!(is_s_unit(&half, &[2]).unwrap());
        let three = FieldElement::from_int(&k, 3);
        assert!(is_s_integer(&three, &[2]));
        assert!(!is_s_unit(&three, &[2]).unwrap());
        let phi = FieldElement::theta(&field(&[-1, -1, 1]));
        assert!(is_algebraic_integer(&phi));
    }
}
