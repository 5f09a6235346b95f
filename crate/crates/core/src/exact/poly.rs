use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::parse::parse_terms;

/// Polynomial with arbitrary-precision integer coefficients, ascending degree.
///
/// The coefficient vector is always trimmed: the last entry is nonzero unless
/// the polynomial is zero, in which case the vector is empty.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// Clears denominators of a rational polynomial and returns the primitive
    /// integer polynomial with the same roots.
    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        let lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        Self::new(ints).primitive()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Content 1 and positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.content().is_one() && self.leading().is_positive()
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// The reciprocal polynomial `x^deg f(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        Self::new(v)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "pseudo-remainder by zero polynomial");
        let mut r = self.clone();
        let db = b.degree();
        let lb = b.leading();
        while !r.is_zero() && r.degree() >= db {
            let shift = r.degree() - db;
            let lr = r.leading();
            let t = Self::monomial(lr, shift).mul(b);
            r = r.scale(&lb).sub(&t);
        }
        r
    }

    /// Exact division over the integers; `None` when `b` does not divide `self`.
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        if b.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < b.degree() {
            return None;
        }
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.degree() - b.degree() + 1];
        let lb = b.leading();
        while !r.is_zero() && r.degree() >= b.degree() {
            let (c, rem) = r.leading().div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            let shift = r.degree() - b.degree();
            q[shift] = c.clone();
            r = r.sub(&Self::monomial(c, shift).mul(b));
        }
        r.is_zero().then(|| Self::new(q))
    }

    /// Greatest common divisor over `Z[x]`, primitive with positive leading
    /// coefficient (times the gcd of the contents).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_keep_content();
        }
        if other.is_zero() {
            return self.primitive_keep_content();
        }
        let cont = self.content().gcd(&other.content());
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive(), other.primitive())
        } else {
            (other.primitive(), self.primitive())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive() };
        }
        a.primitive().scale(&cont)
    }

    fn primitive_keep_content(&self) -> Self {
        if self.leading().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Primitive squarefree part `f / gcd(f, f')`.
    pub fn squarefree_part(&self) -> Self {
        if self.degree() == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative()).primitive();
        self.primitive()
            .div_exact(&g)
            .expect("gcd divides polynomial")
            .primitive()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }

    /// Shares a nonconstant factor with its reciprocal polynomial.
    pub fn shares_factor_with_reciprocal(&self) -> bool {
        self.gcd(&self.reversed()).degree() > 0
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Largest absolute value of a coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Parses `x^2 - 2x - 1` style input (variable `x`, integer coefficients).
    pub fn parse(s: &str) -> Result<Self> {
        let terms = parse_terms(s, &['x'])?;
        let mut v: Vec<BigInt> = Vec::new();
        for (c, k) in terms {
            if !c.is_integer() {
                return Err(Error::Parse(format!("non-integer coefficient in `{s}`")));
            }
            if v.len() <= k {
                v.resize(k + 1, BigInt::zero());
            }
            v[k] += c.to_integer();
        }
        Ok(Self::new(v))
    }
}

impl IntPolynomial {
    /// The `n`-th cyclotomic polynomial, `prod_{d | n} (x^d - 1)^{mu(n/d)}`.
    pub fn cyclotomic(n: u64) -> Self {
        assert!(n >= 1, "cyclotomic index must be positive");
        let mut num = Self::one();
        let mut den = Self::one();
        for d in 1..=n {
            if n % d != 0 {
                continue;
            }
            let xd = Self::monomial(BigInt::one(), d as usize).sub(&Self::one());
            match mobius(n / d) {
                1 => num = num.mul(&xd),
                -1 => den = den.mul(&xd),
                _ => {}
            }
        }
        num.div_exact(&den).expect("cyclotomic quotient is exact")
    }

    /// `Some(n)` when `self` (up to sign) is the cyclotomic polynomial `Φ_n`.
    pub fn cyclotomic_index(&self) -> Option<u64> {
        let f = self.primitive();
        if !f.is_monic() || f.degree() == 0 {
            return None;
        }
        let d = f.degree() as u64;
        // phi(n) >= sqrt(n / 2), so n <= 2 d^2
        (1..=2 * d * d + 2)
            .filter(|&n| euler_phi(n) == d)
            .find(|&n| Self::cyclotomic(n) == f)
    }
}

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || k == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Dense polynomial over the rationals; used for reduction and inversion
/// modulo a defining polynomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct QPoly(pub Vec<BigRational>);

impl QPoly {
    pub fn new(mut v: Vec<BigRational>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        Self(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn coeff(&self, k: usize) -> BigRational {
        self.0.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn divrem(&self, b: &Self) -> (Self, Self) {
        assert!(!b.is_zero());
        let mut r = self.clone();
        if r.is_zero() || r.degree() < b.degree() {
            return (Self(Vec::new()), r);
        }
        let mut q = vec![BigRational::zero(); r.degree() - b.degree() + 1];
        let lb = b.0.last().unwrap().clone();
        while !r.is_zero() && r.degree() >= b.degree() {
            let shift = r.degree() - b.degree();
            let c = r.0.last().unwrap() / &lb;
            for (j, bc) in b.0.iter().enumerate() {
                r.0[j + shift] -= &c * bc;
            }
            q[shift] = c;
            r = Self::new(r.0);
        }
        (Self::new(q), r)
    }

    /// Returns `(g, s)` with `s * a ≡ g (mod b)` and `g = gcd(a, b)` monic.
    pub fn ext_gcd_left(a: &Self, b: &Self) -> (Self, Self) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self(vec![BigRational::one()]), Self(Vec::new()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if let Some(lc) = r0.0.last().cloned() {
            let inv = lc.recip();
            r0 = Self::new(r0.0.iter().map(|c| c * &inv).collect());
            s0 = Self::new(s0.0.iter().map(|c| c * &inv).collect());
        }
        (r0, s0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(IntPolynomial::cyclotomic(1), IntPolynomial::from_i64s(&[-1, 1]));
        assert_eq!(IntPolynomial::cyclotomic(2), IntPolynomial::from_i64s(&[1, 1]));
        assert_eq!(IntPolynomial::cyclotomic(5), IntPolynomial::from_i64s(&[1, 1, 1, 1, 1]));
        assert_eq!(IntPolynomial::cyclotomic(12), IntPolynomial::from_i64s(&[1, 0, -1, 0, 1]));
        assert_eq!(IntPolynomial::from_i64s(&[1, -1, 1]).cyclotomic_index(), Some(6));
        assert_eq!(IntPolynomial::from_i64s(&[-1, -1, 1]).cyclotomic_index(), None);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(1), 1);
    }

    fn p(v: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(v)
    }

    #[test]
    fn display_and_parse_agree() {
        let f = p(&[-1, -2, 1]);
        assert_eq!(f.to_string(), "x^2 - 2x - 1");
        assert_eq!(IntPolynomial::parse("x^2 - 2x - 1").unwrap(), f);
        assert_eq!(IntPolynomial::parse("2*x-3").unwrap(), p(&[-3, 2]));
        assert_eq!(p(&[-3, 2]).to_string(), "2x - 3");
        assert_eq!(IntPolynomial::parse("-x^3+x+1").unwrap(), p(&[1, 1, 0, -1]));
    }

    #[test]
    fn gcd_of_products() {
        let a = p(&[-1, 1]).mul(&p(&[1, 0, 1]));
        let b = p(&[-1, 1]).mul(&p(&[2, 1]));
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(p(&[-2, 0, 1]).gcd(&p(&[-3, 0, 1])).degree(), 0);
    }

    #[test]
    fn squarefree_part_strips_repeats() {
        let f = p(&[-1, 1]).pow(3).mul(&p(&[1, 1]));
        assert_eq!(f.squarefree_part(), p(&[-1, 0, 1]));
        assert!(!f.is_squarefree());
        assert!(p(&[-2, 0, 1]).is_squarefree());
    }

    #[test]
    fn exact_division() {
        let f = p(&[-1, 0, 1]);
        assert_eq!(f.div_exact(&p(&[1, 1])), Some(p(&[-1, 1])));
        assert_eq!(f.div_exact(&p(&[2, 1])), None);
        assert_eq!(p(&[2, 4]).div_exact(&p(&[1, 2])), Some(p(&[2])));
    }

    #[test]
    fn reciprocal_factor_detects_unit_circle() {
        // x^2 + x + 1 is self-reciprocal; x^2 - x - 1 is not
        assert!(p(&[1, 1, 1]).shares_factor_with_reciprocal());
        assert!(!p(&[-1, -1, 1]).shares_factor_with_reciprocal());
    }

    #[test]
    fn primitive_normalizes_sign_and_content() {
        assert_eq!(p(&[6, -4]).primitive(), p(&[-3, 2]));
        assert!(p(&[-3, 2]).is_primitive());
    }

    #[test]
    fn qpoly_inverse_mod() {
        // (1 + x)^{-1} mod x^2 - 2 = -1 + x
        let a = QPoly::new(vec![BigRational::one(), BigRational::one()]);
        let f = QPoly::new(p(&[-2, 0, 1]).to_rationals());
        let (g, s) = QPoly::ext_gcd_left(&a, &f);
        assert_eq!(g.degree(), 0);
        let (_, r) = s.divrem(&f);
        assert_eq!(r.0, vec![-BigRational::one(), BigRational::one()]);
    }
}
