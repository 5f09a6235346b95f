use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// Closed real interval with dyadic endpoints.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "inverted interval {lo:?} > {hi:?}");
        Self { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::point(Dyadic::one())
    }

    pub fn from_int(n: &BigInt) -> Self {
        Self::point(Dyadic::from_int(n.clone()))
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        if r.is_integer() {
            return Self::from_int(&r.to_integer());
        }
        Self {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
        }
    }

    /// `center ± radius`.
    pub fn ball(center: &Dyadic, radius: &Dyadic) -> Self {
        Self {
            lo: center.sub(radius),
            hi: center.add(radius),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn overlaps(&self, o: &Self) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    /// Convex hull.
    pub fn join(&self, o: &Self) -> Self {
        Self {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
        }
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        Self {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        if o.lo.is_zero() && o.hi.is_zero() {
            return self.clone();
        }
        if self.lo.is_zero() && self.hi.is_zero() {
            return o.clone();
        }
        Self::rounded(self.lo.add(&o.lo), self.hi.add(&o.hi), prec)
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        Self::rounded(self.lo.sub(&o.hi), self.hi.sub(&o.lo), prec)
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        if self.is_point() && o.is_point() {
            let p = self.lo.mul(&o.lo);
            return Self::rounded(p.clone(), p, prec);
        }
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::rounded(lo, hi, prec)
    }

    pub fn square(&self, prec: u32) -> Self {
        let a = self.lo.square();
        let b = self.hi.square();
        if self.contains_zero() {
            Self::rounded(Dyadic::zero(), a.clone().max(b.clone()), prec)
        } else {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            Self::rounded(lo, hi, prec)
        }
    }

    pub fn recip(&self, prec: u32) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::UndecidableDivision);
        }
        let one = Dyadic::one();
        Ok(Self {
            lo: one.div(&self.hi, prec, Round::Down),
            hi: one.div(&self.lo, prec, Round::Up),
        })
    }

    pub fn div(&self, o: &Self, prec: u32) -> Result<Self> {
        if o.contains_zero() {
            return Err(Error::UndecidableDivision);
        }
        let c = [
            self.lo.div(&o.lo, prec, Round::Down),
            self.lo.div(&o.hi, prec, Round::Down),
            self.hi.div(&o.lo, prec, Round::Down),
            self.hi.div(&o.hi, prec, Round::Down),
        ];
        let u = [
            self.lo.div(&o.lo, prec, Round::Up),
            self.lo.div(&o.hi, prec, Round::Up),
            self.hi.div(&o.lo, prec, Round::Up),
            self.hi.div(&o.hi, prec, Round::Up),
        ];
        Ok(Self {
            lo: c.iter().min().unwrap().clone(),
            hi: u.iter().max().unwrap().clone(),
        })
    }

    pub fn abs(&self) -> Self {
        if self.contains_zero() {
            Self {
                lo: Dyadic::zero(),
                hi: self.lo.abs().max(self.hi.clone()),
            }
        } else if self.lo.is_positive() {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Lower endpoint clamped at zero; callers guarantee the true value is
    /// nonnegative.
    fn clamp_nonneg(&self) -> Self {
        Self {
            lo: if self.lo.is_negative() {
                Dyadic::zero()
            } else {
                self.lo.clone()
            },
            hi: if self.hi.is_negative() {
                Dyadic::zero()
            } else {
                self.hi.clone()
            },
        }
    }

    pub fn max_with(&self, x: &Dyadic) -> Self {
        Self {
            lo: self.lo.clone().max(x.clone()),
            hi: self.hi.clone().max(x.clone()),
        }
    }

    pub fn nth_root(&self, n: u32, prec: u32) -> Self {
        let c = self.clamp_nonneg();
        Self {
            lo: c.lo.nth_root(n, prec, Round::Down),
            hi: c.hi.nth_root(n, prec, Round::Up),
        }
    }

    pub fn sqrt(&self, prec: u32) -> Self {
        self.nth_root(2, prec)
    }

    pub fn pow_int(&self, k: i64, prec: u32) -> Result<Self> {
        if k < 0 {
            return self.pow_int(-k, prec)?.recip(prec);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = k as u64;
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                acc = if first { base.clone() } else { acc.mul(&base, prec) };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.square(prec);
            }
        }
        Ok(acc)
    }

    /// `x^r` for rational `r`. Non-integral exponents require a nonnegative
    /// enclosure; negative exponents require one excluding zero.
    pub fn pow_rational(&self, r: &BigRational, prec: u32) -> Result<Self> {
        let num: i64 = r
            .numer()
            .try_into()
            .map_err(|_| Error::BadInput("exponent numerator too large".into()))?;
        let den: u32 = r
            .denom()
            .try_into()
            .map_err(|_| Error::BadInput("exponent denominator too large".into()))?;
        if den == 1 {
            return self.pow_int(num, prec);
        }
        if self.lo.is_negative() {
            return Err(Error::BadInput(
                "non-integral power of a possibly negative enclosure".into(),
            ));
        }
        let guard = prec + 16;
        let p = self.pow_int(num.abs(), guard)?.nth_root(den, guard);
        if num < 0 {
            p.recip(prec)
        } else {
            Ok(Self::rounded(p.lo, p.hi, prec))
        }
    }

    /// Natural logarithm of a positive enclosure.
    pub fn ln(&self, prec: u32) -> Result<Self> {
        if !self.lo.is_positive() {
            return Err(Error::BadInput("logarithm of nonpositive enclosure".into()));
        }
        let lo = ln_enclosure(&self.lo, prec);
        let hi = if self.is_point() {
            lo.clone()
        } else {
            ln_enclosure(&self.hi, prec)
        };
        Ok(Self { lo: lo.lo, hi: hi.hi })
    }

    /// Certified `self < o`: `Some(true)` when proven, `Some(false)` when the
    /// reverse non-strict inequality is proven.
    pub fn lt(&self, o: &Self) -> Option<bool> {
        if self.hi < o.lo {
            Some(true)
        } else if self.lo >= o.hi {
            Some(false)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }
}

/// `2 atanh(t) = sum 2 t^(2k+1)/(2k+1)` for `0 <= t <= 1/3`, with tail bound.
fn two_atanh(t: &Interval, prec: u32) -> Interval {
    let w = prec + 16;
    let t2 = t.square(w);
    let mut term = t.clone();
    let mut sum = Interval::zero();
    let mut k: u64 = 0;
    let stop = -(w as i64) - 4;
    loop {
        let denom = Interval::from_int(&BigInt::from(2 * k + 1));
        let contrib = term.div(&denom, w).expect("odd denominator");
        sum = sum.add(&contrib, w);
        term = term.mul(&t2, w);
        k += 1;
        if term.hi.log2_estimate() < stop || term.hi.is_zero() {
            break;
        }
    }
    // remainder <= t^(2k+1) / ((2k+1)(1 - t^2)) <= term * 9/8
    let tail_hi = term.hi.mul(&Dyadic::from_i64(9)).mul_pow2(-3);
    let sum = sum.add(&Interval::new(Dyadic::zero(), tail_hi), w);
    sum.add(&sum, w)
}

fn ln2(prec: u32) -> Interval {
    let third = Interval::from_rational(&BigRational::new(1.into(), 3.into()), prec + 16);
    two_atanh(&third, prec)
}

fn ln_enclosure(x: &Dyadic, prec: u32) -> Interval {
    let w = prec + 16;
    // x = y * 2^e with y in [1, 2)
    let e = x.log2_estimate() - 1;
    let y = Interval::point(x.mul_pow2(-e));
    let one = Interval::one();
    let t = y
        .sub(&one, w)
        .div(&y.add(&one, w), w)
        .expect("positive denominator");
    let ln_y = two_atanh(&t, prec);
    let ln_x = if e == 0 {
        ln_y
    } else {
        ln2(prec)
            .mul(&Interval::from_int(&BigInt::from(e)), w)
            .add(&ln_y, w)
    };
    Interval::rounded(ln_x.lo, ln_x.hi, prec)
}

/// Binary operations offered by [`interval_arith`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntervalOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Unary; the second operand is ignored.
    Abs,
    /// Unary power with the given exponent; the second operand is ignored.
    PowRational(BigRational),
}

/// A certified enclosure of a complex number as a rectangle of dyadic
/// intervals. Real quantities carry the point interval `[0, 0]` as
/// imaginary part.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CertifiedValue {
    re: Interval,
    im: Interval,
    precision_bits: u32,
}

impl CertifiedValue {
    pub fn new(re: Interval, im: Interval, precision_bits: u32) -> Self {
        Self {
            re,
            im,
            precision_bits,
        }
    }

    pub fn real(re: Interval, precision_bits: u32) -> Self {
        Self::new(re, Interval::zero(), precision_bits)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Self::real(Interval::from_rational(r, prec), prec)
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        Self::real(Interval::from_int(n), prec)
    }

    /// Real enclosure `x ± radius`.
    pub fn real_ball(x: f64, radius: f64, prec: u32) -> Self {
        let c = Dyadic::from_f64(x);
        let r = Dyadic::from_f64(radius.abs());
        Self::real(Interval::ball(&c, &r), prec)
    }

    pub fn re(&self) -> &Interval {
        &self.re
    }

    pub fn im(&self) -> &Interval {
        &self.im
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn with_precision(mut self, bits: u32) -> Self {
        self.precision_bits = bits;
        self
    }

    /// Imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.im.lo.is_zero() && self.im.hi.is_zero()
    }

    pub fn center(&self) -> (Dyadic, Dyadic) {
        (self.re.mid(), self.im.mid())
    }

    /// Upper bound on the distance from the center to any enclosed point.
    pub fn radius(&self) -> Dyadic {
        self.re.width().add(&self.im.width()).mul_pow2(-1)
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.re.contains_rational(r) && self.im.contains_zero()
    }

    pub fn overlaps(&self, o: &Self) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    fn prec_with(&self, o: &Self) -> u32 {
        self.precision_bits.max(o.precision_bits)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg(), self.precision_bits)
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec_with(o);
        Self::new(self.re.add(&o.re, p), self.im.add(&o.im, p), p)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec_with(o);
        Self::new(self.re.sub(&o.re, p), self.im.sub(&o.im, p), p)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec_with(o);
        if self.is_real() && o.is_real() {
            return Self::real(self.re.mul(&o.re, p), p);
        }
        let w = p + 8;
        let re = self.re.mul(&o.re, w).sub(&self.im.mul(&o.im, w), p);
        let im = self.re.mul(&o.im, w).add(&self.im.mul(&o.re, w), p);
        Self::new(re, im, p)
    }

    pub fn square(&self) -> Self {
        if self.is_real() {
            return Self::real(self.re.square(self.precision_bits), self.precision_bits);
        }
        self.mul(self)
    }

    /// `|z|^2` as a real interval.
    pub fn norm_sqr(&self) -> Interval {
        let p = self.precision_bits + 8;
        if self.is_real() {
            return self.re.square(p);
        }
        self.re.square(p).add(&self.im.square(p), p)
    }

    pub fn abs(&self) -> Self {
        if self.is_real() {
            return Self::real(self.re.abs(), self.precision_bits);
        }
        Self::real(self.norm_sqr().sqrt(self.precision_bits), self.precision_bits)
    }

    pub fn recip(&self) -> Result<Self> {
        let p = self.precision_bits;
        if self.is_real() {
            return Ok(Self::real(self.re.recip(p)?, p));
        }
        let n = self.norm_sqr();
        if n.contains_zero() {
            return Err(Error::UndecidableDivision);
        }
        let w = p + 8;
        Ok(Self::new(self.re.div(&n, w)?, self.im.neg().div(&n, w)?, p))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        let p = self.prec_with(o);
        if o.is_real() {
            let d = &o.re;
            if d.contains_zero() {
                return Err(Error::UndecidableDivision);
            }
            return Ok(Self::new(self.re.div(d, p)?, self.im.div(d, p)?, p));
        }
        Ok(self.mul(&o.recip()?.with_precision(p)))
    }

    pub fn pow_int(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.pow_int(-k)?.recip();
        }
        if self.is_real() {
            return Ok(Self::real(
                self.re.pow_int(k, self.precision_bits)?,
                self.precision_bits,
            ));
        }
        let mut acc = Self::from_int(&BigInt::one(), self.precision_bits);
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        Ok(acc)
    }

    /// Rational power; non-integral exponents require a nonnegative real
    /// enclosure.
    pub fn pow_rational(&self, r: &BigRational) -> Result<Self> {
        if r.is_integer() {
            let k: i64 = r
                .to_integer()
                .try_into()
                .map_err(|_| Error::BadInput("exponent too large".into()))?;
            return self.pow_int(k);
        }
        if !self.is_real() {
            return Err(Error::BadInput(
                "non-integral power of a complex enclosure".into(),
            ));
        }
        Ok(Self::real(
            self.re.pow_rational(r, self.precision_bits)?,
            self.precision_bits,
        ))
    }

    /// Real part only, as a real enclosure.
    pub fn real_part(&self) -> Self {
        Self::real(self.re.clone(), self.precision_bits)
    }

    /// `center ± radius` with both printed in scientific notation.
    pub fn to_decimal(&self) -> String {
        let (cr, ci) = self.center();
        let r = self.radius().to_f64();
        if self.is_real() {
            format!("{:.17e} ± {:.3e}", cr.to_f64(), r)
        } else {
            format!("{:.17e}{:+.17e}i ± {:.3e}", cr.to_f64(), ci.to_f64(), r)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.re.to_f64()
    }
}

impl fmt::Display for CertifiedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

/// Certified interval operation: the result encloses the exact image of
/// every pair of enclosed operands.
pub fn interval_arith(
    a: &CertifiedValue,
    b: &CertifiedValue,
    op: IntervalOp,
) -> Result<CertifiedValue> {
    match op {
        IntervalOp::Add => Ok(a.add(b)),
        IntervalOp::Sub => Ok(a.sub(b)),
        IntervalOp::Mul => Ok(a.mul(b)),
        IntervalOp::Div => a.div(b),
        IntervalOp::Abs => Ok(a.abs()),
        IntervalOp::PowRational(r) => a.pow_rational(&r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn abs_of_negative_sqrt2() {
        let x = CertifiedValue::real_ball(-std::f64::consts::SQRT_2, 1e-10, 64);
        let a = interval_arith(&x, &x, IntervalOp::Abs).unwrap();
        assert!(a.re().lo().to_f64() <= std::f64::consts::SQRT_2);
        assert!(a.re().hi().to_f64() >= std::f64::consts::SQRT_2 - 1e-16);
        assert!(a.re().lo().is_positive());
    }

    #[test]
    fn sqrt_two_by_rational_power() {
        let two = CertifiedValue::from_int(&BigInt::from(2), 128);
        let r = two.pow_rational(&rat(1, 2)).unwrap();
        let sq = r.re().square(256);
        assert!(sq.contains(&Dyadic::from_i64(2)));
        assert!(r.radius().log2_estimate() < -120);
        // negative exponent
        let r = two.pow_rational(&rat(-3, 2)).unwrap();
        assert!(r.re().contains_rational(&rat(35355339, 100000000)) || r.to_f64() > 0.3535);
        assert!((r.to_f64() - 2f64.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn add_zero_is_identity() {
        let x = CertifiedValue::real_ball(0.25, 1e-12, 64);
        let z = CertifiedValue::from_int(&BigInt::from(0), 64);
        assert_eq!(interval_arith(&x, &z, IntervalOp::Add).unwrap(), x);
    }

    #[test]
    fn division_by_enclosure_of_zero_fails() {
        let x = CertifiedValue::real_ball(1.0, 0.0, 64);
        let z = CertifiedValue::real_ball(0.0, 1e-9, 64);
        assert_eq!(x.div(&z), Err(Error::UndecidableDivision));
    }

    #[test]
    fn complex_product_and_modulus() {
        let i = CertifiedValue::new(Interval::zero(), Interval::one(), 64);
        let m1 = i.mul(&i);
        assert!(m1.re().contains(&Dyadic::from_i64(-1)));
        assert!(m1.im().contains_zero());
        let z = CertifiedValue::new(
            Interval::point(Dyadic::from_i64(3)),
            Interval::point(Dyadic::from_i64(4)),
            64,
        );
        assert!(z.abs().re().contains(&Dyadic::from_i64(5)));
        let w = z.recip().unwrap().mul(&z);
        assert!(w.re().contains(&Dyadic::one()));
    }

    #[test]
    fn natural_log_brackets() {
        let two = Interval::from_int(&BigInt::from(2));
        let l = two.ln(200).unwrap();
        assert!((l.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(l.width().log2_estimate() < -190);
        let x = Interval::from_rational(&rat(1, 10), 100);
        let l = x.ln(100).unwrap();
        assert!((l.to_f64() - 0.1f64.ln()).abs() < 1e-14);
        assert!(Interval::one().ln(64).unwrap().contains_zero());
    }
}
