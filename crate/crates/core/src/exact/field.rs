use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::galois::{verify_galois_group, GaloisData};
use super::irreducible::{check_irreducible, Irreducibility};
use super::parse::parse_terms;
use super::poly::{IntPolynomial, QPoly};
use crate::certify::RootLadder;
use crate::error::{Error, Result};

/// The ambient number field `K = Q(θ)`, `θ` a root of `defining_poly`.
///
/// Optional Galois data lists the images of `θ` under the automorphisms of
/// `K`; it is verified exactly at construction. The field also fixes one
/// complex embedding (by default the largest real root of the defining
/// polynomial, or the last root in the canonical ordering when none is
/// real), which is how elements are viewed as complex numbers.
pub struct NumberFieldDesc {
    label: String,
    poly: IntPolynomial,
    degree: usize,
    /// Low coefficients of the defining polynomial scaled to be monic.
    monic_low: Vec<BigRational>,
    galois: Option<GaloisData>,
    irreducibility: Irreducibility,
    embedding_choice: Option<usize>,
    embedding: OnceLock<usize>,
    conjugation: OnceLock<Option<usize>>,
    roots: RootLadder,
}

impl fmt::Debug for NumberFieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberFieldDesc")
            .field("label", &self.label)
            .field("poly", &self.poly.to_string())
            .field("galois_maps", &self.galois.as_ref().map(|g| g.maps().len()))
            .finish()
    }
}

/// Builder for [`NumberFieldDesc`].
pub struct FieldBuilder {
    poly: IntPolynomial,
    galois: Option<Vec<Vec<BigRational>>>,
    embedding: Option<usize>,
    label: String,
    standard: bool,
}

impl FieldBuilder {
    /// Images of `θ` under the Galois group, as power-basis coefficient
    /// vectors. The identity may be omitted; it is added in front.
    pub fn galois(mut self, images: Vec<Vec<BigRational>>) -> Self {
        self.galois = Some(images);
        self
    }

    pub fn embedding(mut self, index: usize) -> Self {
        self.embedding = Some(index);
        self
    }

    /// Without explicit images, derive the Galois group where it has a
    /// closed form: quadratic fields (`θ ↦ -b/a - θ`) and cyclotomic fields
    /// (`θ ↦ θ^k`, `gcd(k, n) = 1`). Other fields stay without Galois data.
    pub fn standard_galois(mut self) -> Self {
        self.standard = true;
        self
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn build(self) -> Result<Arc<NumberFieldDesc>> {
        if self.poly.degree() == 0 {
            return Err(Error::InvalidField("defining polynomial must have degree >= 1".into()));
        }
        let poly = self.poly.primitive();
        let irreducibility = check_irreducible(&poly)?;
        let n = poly.degree();
        let lc = BigRational::from_integer(poly.leading());
        let monic: Vec<BigRational> = poly
            .to_rationals()
            .iter()
            .map(|c| c / &lc)
            .collect();
        let monic_low = monic[..n].to_vec();
        if let Some(k) = self.embedding {
            if k >= n {
                return Err(Error::BadEmbedding { index: k, count: n });
            }
        }
        let label = if self.label.is_empty() {
            format!("Q[x]/({poly})")
        } else {
            self.label
        };
        let base = NumberFieldDesc {
            label,
            roots: RootLadder::new(poly.clone()),
            poly,
            degree: n,
            monic_low,
            galois: None,
            irreducibility,
            embedding_choice: self.embedding,
            embedding: OnceLock::new(),
            conjugation: OnceLock::new(),
        };
        let base = Arc::new(base);
        let galois = match (self.galois, n) {
            (Some(images), _) => Some(verify_galois_group(&base, images)?),
            (None, 1) => Some(verify_galois_group(&base, Vec::new())?),
            (None, _) if self.standard => match standard_images(&base) {
                Some(images) => Some(verify_galois_group(&base, images)?),
                None => None,
            },
            (None, _) => None,
        };
        if galois.is_none() {
            return Ok(base);
        }
        let mut field = Arc::try_unwrap(base).expect("no outstanding references");
        field.galois = galois;
        Ok(Arc::new(field))
    }
}

fn standard_images(field: &Arc<NumberFieldDesc>) -> Option<Vec<Vec<BigRational>>> {
    let f = &field.poly;
    if f.degree() == 2 {
        let trace = -BigRational::new(f.coeff(1), f.coeff(2));
        return Some(vec![vec![trace, -BigRational::one()]]);
    }
    let n = f.cyclotomic_index()?;
    let theta = FieldElement::theta(field);
    let images = (2..n)
        .filter(|k| num_integer::Integer::gcd(k, &n) == 1)
        .map(|k| theta.pow(k as i64).map(|x| x.coeffs().to_vec()))
        .collect::<Result<Vec<_>>>()
        .ok()?;
    Some(images)
}

impl NumberFieldDesc {
    pub fn builder(poly: IntPolynomial) -> FieldBuilder {
        FieldBuilder {
            poly,
            galois: None,
            embedding: None,
            label: String::new(),
            standard: false,
        }
    }

    /// `Q` itself, presented as `Q[x]/(x)`.
    pub fn rationals() -> Arc<Self> {
        Self::builder(IntPolynomial::x())
            .label("Q")
            .build()
            .expect("x is irreducible")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn defining_poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn irreducibility(&self) -> &Irreducibility {
        &self.irreducibility
    }

    pub fn galois(&self) -> Option<&GaloisData> {
        self.galois.as_ref()
    }

    pub(crate) fn require_galois(&self) -> Result<&GaloisData> {
        self.galois
            .as_ref()
            .ok_or_else(|| Error::GaloisDataMissing(self.label.clone()))
    }

    pub fn roots(&self) -> &RootLadder {
        &self.roots
    }

    /// Index (into the canonical root ordering) of the embedding that views
    /// `K` inside `C`.
    pub fn embedding(&self) -> usize {
        *self.embedding.get_or_init(|| {
            if let Some(k) = self.embedding_choice {
                return k;
            }
            let sys = self.roots.at(64);
            sys.roots()
                .iter()
                .rposition(|r| r.real)
                .unwrap_or(sys.len() - 1)
        })
    }

    /// The embedding sends `θ` to a certified real number.
    pub fn is_real_embedding(&self) -> bool {
        self.roots.at(64).roots()[self.embedding()].real
    }

    pub(crate) fn conjugation_cell(&self) -> &OnceLock<Option<usize>> {
        &self.conjugation
    }

    pub(crate) fn monic_low(&self) -> &[BigRational] {
        &self.monic_low
    }

    pub fn same_field(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || (a.poly == b.poly && a.embedding() == b.embedding())
    }
}

/// An element of `K` in the power basis `1, θ, …, θ^(n-1)`.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberFieldDesc>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        self.coeffs == o.coeffs && NumberFieldDesc::same_field(&self.field, &o.field)
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

/// Arithmetic selector for [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact arithmetic in `K`.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement> {
    match op {
        FieldOp::Add => a.checked_add(b),
        FieldOp::Sub => a.checked_sub(b),
        FieldOp::Mul => a.checked_mul(b),
        FieldOp::Div => a.checked_div(b),
    }
}

impl FieldElement {
    pub fn from_coeffs(field: &Arc<NumberFieldDesc>, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != field.degree {
            return Err(Error::BadInput(format!(
                "expected {} coefficients, got {}",
                field.degree,
                coeffs.len()
            )));
        }
        Ok(Self {
            field: field.clone(),
            coeffs,
        })
    }

    /// Reduces an arbitrary-length coefficient vector modulo the defining
    /// polynomial.
    pub fn from_poly_coeffs(field: &Arc<NumberFieldDesc>, coeffs: Vec<BigRational>) -> Self {
        Self {
            field: field.clone(),
            coeffs: reduce(field, coeffs),
        }
    }

    pub fn from_rational(field: &Arc<NumberFieldDesc>, r: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); field.degree];
        coeffs[0] = r;
        Self {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_int(field: &Arc<NumberFieldDesc>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.into()))
    }

    pub fn zero(field: &Arc<NumberFieldDesc>) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Arc<NumberFieldDesc>) -> Self {
        Self::from_int(field, 1)
    }

    /// The generator `θ`.
    pub fn theta(field: &Arc<NumberFieldDesc>) -> Self {
        Self::from_poly_coeffs(field, vec![BigRational::zero(), BigRational::one()])
    }

    /// Parses a polynomial expression in `t` (or `θ`) with rational
    /// coefficients, e.g. `1 + t`, `3/2`, `-t/2 + 1/2`.
    pub fn parse(field: &Arc<NumberFieldDesc>, s: &str) -> Result<Self> {
        let terms = parse_terms(s, &['t', 'θ'])?;
        let mut v: Vec<BigRational> = Vec::new();
        for (c, k) in terms {
            if v.len() <= k {
                v.resize(k + 1, BigRational::zero());
            }
            v[k] += c;
        }
        Ok(Self::from_poly_coeffs(field, v))
    }

    /// Parses a comma-separated power-basis coefficient vector, `"1,0"`.
    pub fn parse_coeffs(field: &Arc<NumberFieldDesc>, s: &str) -> Result<Self> {
        let v = s
            .split(',')
            .map(super::parse::parse_rational)
            .collect::<Result<Vec<_>>>()?;
        if v.len() > field.degree {
            return Err(Error::BadInput(format!(
                "`{s}` has {} coefficients; field degree is {}",
                v.len(),
                field.degree
            )));
        }
        Ok(Self::from_poly_coeffs(field, v))
    }

    pub fn field(&self) -> &Arc<NumberFieldDesc> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// `Some(r)` when the element is the rational number `r`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.field.degree == 1 {
            return Some(self.coeffs[0].clone());
        }
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    /// `Some(n)` when the element is the rational integer `n`.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if NumberFieldDesc::same_field(&self.field, &o.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(self.add_unchecked(o))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(self.add_unchecked(&o.neg_ref()))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(self.mul_unchecked(o))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(self.mul_unchecked(&o.inv()?))
    }

    fn add_unchecked(&self, o: &Self) -> Self {
        Self {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn neg_ref(&self) -> Self {
        Self {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn mul_unchecked(&self, o: &Self) -> Self {
        let n = self.field.degree;
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Self {
            field: self.field.clone(),
            coeffs: reduce(&self.field, prod),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended gcd with the defining
    /// polynomial.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, r.recip()));
        }
        let a = QPoly::new(self.coeffs.clone());
        let f = QPoly::new(self.field.poly.to_rationals());
        let (g, s) = QPoly::ext_gcd_left(&a, &f);
        if g.degree() != 0 {
            return Err(Error::InvalidField(format!(
                "{} shares a factor with the defining polynomial",
                self
            )));
        }
        Ok(Self::from_poly_coeffs(&self.field, s.0))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(acc)
    }

    /// Evaluates the power-basis polynomial of `self` at another element
    /// (substitution `θ ↦ x`).
    pub fn substitute(&self, x: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(&self.field), |acc, c| {
                let mut r = acc.mul_unchecked(x);
                r.coeffs[0] += c;
                r
            })
    }

    /// Primitive integer minimal polynomial over `Q`, found as the first
    /// linear dependency among `1, a, a², …`.
    pub fn minimal_polynomial(&self) -> IntPolynomial {
        let n = self.field.degree;
        // rows in echelon form: (vector, pivot, combination over powers)
        let mut rows: Vec<(Vec<BigRational>, usize, Vec<BigRational>)> = Vec::new();
        let mut power = Self::one(&self.field);
        for d in 0..=n {
            let mut v = power.coeffs.clone();
            let mut combo = vec![BigRational::zero(); d + 1];
            combo[d] = BigRational::one();
            for (rv, piv, rc) in &rows {
                if v[*piv].is_zero() {
                    continue;
                }
                let f = &v[*piv] / &rv[*piv];
                for (x, y) in v.iter_mut().zip(rv) {
                    *x -= &f * y;
                }
                for (i, y) in rc.iter().enumerate() {
                    combo[i] -= &f * y;
                }
            }
            match v.iter().position(|x| !x.is_zero()) {
                None => return IntPolynomial::from_rationals(&combo),
                Some(piv) => rows.push((v, piv, combo)),
            }
            power = power.mul_unchecked(self);
        }
        unreachable!("powers 1..a^n are always dependent in a degree-n field")
    }

    /// Coefficients formatted as `"c0,c1,…"`, the config notation.
    pub fn coeff_string(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn reduce(field: &NumberFieldDesc, mut v: Vec<BigRational>) -> Vec<BigRational> {
    let n = field.degree;
    let monic = field.monic_low();
    for k in (n..v.len()).rev() {
        if v[k].is_zero() {
            continue;
        }
        // θ^k = θ^(k-n) θ^n = -θ^(k-n) sum_i monic_i θ^i
        let c = std::mem::replace(&mut v[k], BigRational::zero());
        for (i, m) in monic.iter().enumerate() {
            if !m.is_zero() {
                v[k - n + i] -= &c * m;
            }
        }
    }
    v.resize(n, BigRational::zero());
    v
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
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
            let var = self.field.degree > 1;
            match (k, a.is_one(), var) {
                (0, _, _) | (_, _, false) => write!(f, "{a}")?,
                (1, true, _) => write!(f, "t")?,
                (1, false, _) => write!(f, "{a}*t")?,
                (_, true, _) => write!(f, "t^{k}")?,
                (_, false, _) => write!(f, "{a}*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            /// Panics when the operands live in different fields.
            fn $m(self, o: &FieldElement) -> FieldElement {
                self.$imp(o).expect("field element operands from different fields")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                (&self).$m(&o)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sqrt2() -> Arc<NumberFieldDesc> {
        NumberFieldDesc::builder(IntPolynomial::from_i64s(&[-2, 0, 1]))
            .build()
            .unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let k = sqrt2();
        let a = FieldElement::parse(&k, "1+t").unwrap();
        let b = FieldElement::parse(&k, "1-t").unwrap();
        assert_eq!(&a * &b, FieldElement::from_int(&k, -1));
    }

    #[test]
    fn inverse_of_one_plus_sqrt2() {
        let k = sqrt2();
        let a = FieldElement::parse(&k, "1+t").unwrap();
        let inv = field_arith(&FieldElement::one(&k), &a, FieldOp::Div).unwrap();
        assert_eq!(inv, FieldElement::parse(&k, "-1+t").unwrap());
    }

    #[test]
    fn additive_identity_and_errors() {
        let k = sqrt2();
        let a = FieldElement::parse(&k, "3/2 - 5t").unwrap();
        assert_eq!(field_arith(&a, &FieldElement::zero(&k), FieldOp::Add).unwrap(), a);
        assert_eq!(
            field_arith(&a, &FieldElement::zero(&k), FieldOp::Div),
            Err(Error::DivisionByZero)
        );
        let other = NumberFieldDesc::builder(IntPolynomial::from_i64s(&[-3, 0, 1]))
            .build()
            .unwrap();
        let b = FieldElement::one(&other);
        assert_eq!(field_arith(&a, &b, FieldOp::Mul), Err(Error::FieldMismatch));
    }

    #[test]
    fn minimal_polynomials() {
        let k = sqrt2();
        let a = FieldElement::parse(&k, "1+t").unwrap();
        assert_eq!(a.minimal_polynomial(), IntPolynomial::from_i64s(&[-1, -2, 1]));
        let r = FieldElement::from_rational(&k, q(3, 2));
        assert_eq!(r.minimal_polynomial(), IntPolynomial::from_i64s(&[-3, 2]));
        let phi_field = NumberFieldDesc::builder(IntPolynomial::from_i64s(&[-1, -1, 1]))
            .build()
            .unwrap();
        let phi = FieldElement::theta(&phi_field);
        assert_eq!(phi.minimal_polynomial(), IntPolynomial::from_i64s(&[-1, -1, 1]));
        assert_eq!(FieldElement::zero(&k).minimal_polynomial(), IntPolynomial::x());
    }

    #[test]
    fn high_power_reduction() {
        let k = sqrt2();
        let t = FieldElement::theta(&k);
        assert_eq!(t.pow(10).unwrap(), FieldElement::from_int(&k, 32));
        let e = FieldElement::from_poly_coeffs(
            &k,
            vec![q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(1, 1)],
        );
        assert_eq!(e, FieldElement::from_int(&k, 8));
        assert_eq!(t.pow(-2).unwrap(), FieldElement::from_rational(&k, q(1, 2)));
    }

    #[test]
    fn display_forms() {
        let k = sqrt2();
        assert_eq!(FieldElement::parse(&k, "1+t").unwrap().to_string(), "1 + t");
        assert_eq!(FieldElement::parse(&k, "-t/2").unwrap().to_string(), "-1/2*t");
        let qf = NumberFieldDesc::rationals();
        assert_eq!(FieldElement::from_rational(&qf, q(3, 2)).to_string(), "3/2");
    }

    #[test]
    fn non_monic_defining_polynomial() {
        // 2x^2 - 1: θ = 1/sqrt2
        let k = NumberFieldDesc::builder(IntPolynomial::from_i64s(&[-1, 0, 2]))
            .build()
            .unwrap();
        let t = FieldElement::theta(&k);
        assert_eq!(&t * &t, FieldElement::from_rational(&k, q(1, 2)));
        assert_eq!(t.minimal_polynomial(), IntPolynomial::from_i64s(&[-1, 0, 2]));
    }
}
