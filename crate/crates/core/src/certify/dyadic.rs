use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for inexact dyadic operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// Exact binary floating value `man * 2^exp`.
///
/// Normalized so that the mantissa is odd (or the value is zero with
/// exponent 0); equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn shift_div(man: &BigInt, s: u64, dir: Round) -> BigInt {
    let d = pow2(s);
    match dir {
        Round::Down => man.div_floor(&d),
        Round::Up => Integer::div_ceil(man, &d),
    }
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Self::zero();
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Self { man, exp }
        } else {
            Self {
                man: man >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(BigInt::one())
    }

    pub fn from_int(n: BigInt) -> Self {
        Self::new(n, 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Self::new(BigInt::from(n), 0)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite float");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if e == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), e - 1075)
        };
        Self::new(BigInt::from(m) * sign, e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Approximate `log2 |x|` (exact to within one); `i64::MIN` for zero.
    pub fn log2_estimate(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.man.bits() as i64 + self.exp
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            man: -&self.man,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &o.man << (o.exp - e) as u64;
        Self::new(a + b, e)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.man * &o.man, self.exp + o.exp)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Keeps at most `prec` significant bits, rounding in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        Self::new(shift_div(&self.man, s, dir), self.exp + s as i64)
    }

    /// Quotient rounded to `prec` bits. Panics on a zero divisor.
    pub fn div(&self, o: &Self, prec: u32, dir: Round) -> Self {
        assert!(!o.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let k = (prec as i64 + o.man.bits() as i64 - self.man.bits() as i64 + 2).max(0) as u64;
        let num = &self.man << k;
        let q = match dir {
            Round::Down => num.div_floor(&o.man),
            Round::Up => Integer::div_ceil(&num, &o.man),
        };
        Self::new(q, self.exp - o.exp - k as i64).round(prec, dir)
    }

    /// `n`-th root of a nonnegative value, rounded to `prec` bits.
    pub fn nth_root(&self, n: u32, prec: u32, dir: Round) -> Self {
        assert!(n >= 1);
        assert!(!self.is_negative(), "root of negative dyadic");
        if self.is_zero() || n == 1 {
            return self.round(prec, dir);
        }
        let n64 = n as i64;
        let want = (n64 * (prec as i64 + 2) - self.man.bits() as i64).max(0);
        // shift so that (exp - shift) is divisible by n
        let mut shift = want;
        let r = (self.exp - shift).rem_euclid(n64);
        shift += r;
        let big = &self.man << shift as u64;
        let mut root = big.nth_root(n);
        if dir == Round::Up && root.pow(n) < big {
            root += 1;
        }
        Self::new(root, (self.exp - shift) / n64).round(prec, dir)
    }

    pub fn sqrt(&self, prec: u32, dir: Round) -> Self {
        self.nth_root(2, prec, dir)
    }

    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            shift_div(&self.man, (-self.exp) as u64, Round::Down)
        }
    }

    pub fn ceil_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            shift_div(&self.man, (-self.exp) as u64, Round::Up)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as u64)
        } else {
            BigRational::new(self.man.clone(), pow2((-self.exp) as u64))
        }
    }

    /// Rational rounded to `prec` significant bits.
    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Self {
        let n = r.numer();
        let d = r.denom();
        if n.is_zero() {
            return Self::zero();
        }
        let k = (prec as i64 + d.bits() as i64 - n.bits() as i64 + 2).max(0) as u64;
        let num = n << k;
        let q = match dir {
            Round::Down => num.div_floor(d),
            Round::Up => Integer::div_ceil(&num, d),
        };
        Self::new(q, -(k as i64)).round(prec, dir)
    }

    /// Nearest `f64`; saturates to infinities or zero outside the range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let keep = bits.min(60);
        let m = (&self.man >> (bits - keep) as u64).to_f64().unwrap_or(f64::NAN);
        let e = self.exp + bits - keep;
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0 * m.signum();
        }
        let h = (e / 2) as i32;
        m * 2f64.powi(h) * 2f64.powi(e as i32 - h)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), o.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same sign: compare magnitudes cheaply when exponent ranges differ
        let (la, lb) = (self.log2_estimate(), o.log2_estimate());
        if la != lb {
            let mag = la.cmp(&lb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        self.sub(o).signum().cmp(&0)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{} (~{:e})", self.man, self.exp, self.to_f64())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x)
    }

    #[test]
    fn f64_roundtrip_and_order() {
        for x in [0.0, 1.0, -2.5, 3.0e-300, 1.0e300, 0.1] {
            assert_eq!(d(x).to_f64(), x);
        }
        assert!(d(-1.0) < d(0.5));
        assert!(d(1.0e-300) > d(0.0));
        assert!(d(-3.0) < d(-2.0));
        assert_eq!(d(3.0).cmp(&Dyadic::from_i64(3)), Ordering::Equal);
    }

    #[test]
    fn rounding_brackets_value() {
        let third = BigRational::new(1.into(), 3.into());
        let lo = Dyadic::from_rational(&third, 53, Round::Down);
        let hi = Dyadic::from_rational(&third, 53, Round::Up);
        assert!(lo.to_rational() < third && third < hi.to_rational());
        let neg = -third.clone();
        let lo = Dyadic::from_rational(&neg, 20, Round::Down);
        let hi = Dyadic::from_rational(&neg, 20, Round::Up);
        assert!(lo.to_rational() < neg && neg < hi.to_rational());
    }

    #[test]
    fn division_and_roots_bracket() {
        let two = Dyadic::from_i64(2);
        let lo = two.sqrt(100, Round::Down);
        let hi = two.sqrt(100, Round::Up);
        assert!(lo.square() < two && two < hi.square());
        assert!(hi.sub(&lo).log2_estimate() <= -97);
        let q = Dyadic::from_i64(-7).div(&Dyadic::from_i64(3), 64, Round::Down);
        assert!(q.mul(&Dyadic::from_i64(3)) <= Dyadic::from_i64(-7));
        let c = Dyadic::from_i64(27).nth_root(3, 64, Round::Up);
        assert_eq!(c, Dyadic::from_i64(3));
    }

    #[test]
    fn floor_ceil() {
        assert_eq!(d(-1.5).floor_int(), BigInt::from(-2));
        assert_eq!(d(-1.5).ceil_int(), BigInt::from(-1));
        assert_eq!(d(4.0).floor_int(), BigInt::from(4));
    }
}
