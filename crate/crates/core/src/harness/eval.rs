//! Certified building blocks shared by the searches.

use std::cell::RefCell;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certify::{
    complex_conjugation, embed_default, precision_ladder, CertifiedValue, Decision, Dyadic, Interval,
};
use crate::error::Result;
use crate::exact::{apply_galois, FieldElement};
use crate::heights::{nearest_int_rational, weil_height, HeightValue};

/// `[Q(u_1, …, u_m) : Q]`.
///
/// For one element this is the degree of its minimal polynomial. For more,
/// the degree of a random small integer combination `Σ c_i u_i` is a lower
/// bound (attained by a primitive element) and `[K : Q]` an upper bound;
/// draws continue until the running maximum has held for three draws or
/// meets the upper bound. The generator is seeded, so the answer is
/// reproducible.
pub fn subfield_degree(us: &[FieldElement], seed: u64) -> usize {
    let Some(first) = us.first() else {
        return 1;
    };
    let cap = first.field().degree();
    let mut best = us
        .iter()
        .map(|u| u.minimal_polynomial().degree())
        .max()
        .unwrap_or(1);
    if us.len() == 1 || best >= cap {
        return best.min(cap);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stable = 0;
    while stable < 3 && best < cap {
        let mut acc = FieldElement::zero(first.field());
        for u in us {
            let c: i64 = rng.gen_range(-7..=7);
            acc = &acc + &u.scale(&BigRational::from_integer(c.into()));
        }
        let d = acc.minimal_polynomial().degree();
        if d > best {
            best = d;
            stable = 0;
        } else {
            stable += 1;
        }
    }
    best.min(cap)
}

/// The real part of `x` under the field's embedding as an element of `K`,
/// when it can be formed exactly (real embedding, or Galois data supplying
/// complex conjugation).
pub fn exact_real_part(x: &FieldElement) -> Option<FieldElement> {
    if x.field().is_real_embedding() {
        return Some(x.clone());
    }
    let c = complex_conjugation(x.field()).ok()?;
    let cx = apply_galois(c, x).ok()?;
    Some((x + &cx).scale(&BigRational::new(BigInt::one(), BigInt::from(2))))
}

/// Nearest integer to the real part of `x` (ties round up). `None` when
/// the precision budget runs out before the rounding is certain.
pub fn nearest_integer(x: &FieldElement, max_bits: u32) -> Result<Option<BigInt>> {
    if let Some(r) = x.as_rational() {
        return Ok(Some(nearest_int_rational(&r).0));
    }
    let exact = exact_real_part(x);
    if let Some(r) = exact.as_ref().and_then(FieldElement::as_rational) {
        return Ok(Some(nearest_int_rational(&r).0));
    }
    let half = Dyadic::one().mul_pow2(-1);
    let quarter = Dyadic::one().mul_pow2(-2);
    for bits in precision_ladder(max_bits) {
        let v = embed_default(x, bits)?;
        let re = v.re();
        if re.width() >= quarter {
            continue;
        }
        let p_lo = re.lo().add(&half).floor_int();
        let p_hi = re.hi().add(&half).floor_int();
        if p_lo == p_hi {
            return Ok(Some(p_lo));
        }
        if let Some(e) = &exact {
            let mid = BigRational::new(&p_lo * 2 + 1, BigInt::from(2));
            if *e == FieldElement::from_rational(x.field(), mid) {
                return Ok(Some(p_hi));
            }
        }
    }
    Ok(None)
}

/// `|x|` under the field's embedding.
pub fn modulus(x: &FieldElement, bits: u32) -> Result<Interval> {
    Ok(embed_default(x, bits)?.abs().re().clone())
}

/// Heights of a tuple, recomputed only when more precision is asked for.
pub struct HeightCache {
    elems: Vec<FieldElement>,
    cached: RefCell<Option<(u32, Vec<HeightValue>)>>,
}

impl HeightCache {
    pub fn new(elems: &[FieldElement]) -> Self {
        Self {
            elems: elems.to_vec(),
            cached: RefCell::new(None),
        }
    }

    pub fn at(&self, bits: u32) -> Result<Vec<HeightValue>> {
        if let Some((b, v)) = &*self.cached.borrow() {
            if *b >= bits {
                return Ok(v.clone());
            }
        }
        let v = self
            .elems
            .iter()
            .map(|u| weil_height(u, bits))
            .collect::<Result<Vec<_>>>()?;
        *self.cached.borrow_mut() = Some((bits, v.clone()));
        Ok(v)
    }

    /// `∏ H(u_i)` exactly, when every height is rational.
    pub fn exact_product(&self) -> Result<Option<BigRational>> {
        let hs = self.at(64)?;
        let mut acc = BigRational::one();
        for h in &hs {
            match &h.exact {
                Some(x) => acc *= x,
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }

    pub fn display(&self) -> Result<Vec<String>> {
        Ok(self.at(64)?.iter().map(|h| h.to_string()).collect())
    }
}

/// The bound `1 / ((∏ H(u_i))^ε · |q|^{e + ε})` (with `q = 1`, `e = 0` for
/// the conclusion-verification form `(∏ H)^{-ε}`).
#[derive(Clone)]
pub struct Bound<'a> {
    pub heights: &'a HeightCache,
    pub epsilon: &'a BigRational,
    pub q_abs: BigInt,
    /// The integer part `m·d` of the exponent of `|q|`.
    pub q_exp: u64,
}

impl Bound<'_> {
    pub fn enclosure(&self, bits: u32) -> Result<Interval> {
        let prec = bits + 32;
        let hs = self.heights.at(bits)?;
        let mut prod = Interval::one();
        for h in &hs {
            prod = prod.mul(h.value.re(), prec);
        }
        let mut den = if prod.is_point() && prod.lo() == &Dyadic::one() {
            prod
        } else {
            prod.pow_rational(self.epsilon, prec)?
        };
        if !self.q_abs.is_one() {
            let q = Interval::from_int(&self.q_abs);
            den = den.mul(&q.pow_int(self.q_exp as i64, prec)?, prec);
            den = den.mul(&q.pow_rational(self.epsilon, prec)?, prec);
        }
        den.recip(prec)
    }

    /// Exact test of `x < bound` for rational `x ≥ 0` when every height
    /// is rational: `x^b · (∏H)^a · |q|^{e·b + a} < 1` with `ε = a/b`.
    pub fn exact_cmp(&self, x: &BigRational) -> Result<Option<std::cmp::Ordering>> {
        let Some(prod) = self.heights.exact_product()? else {
            return Ok(None);
        };
        let (Some(a), Some(b)) = (self.epsilon.numer().to_u32(), self.epsilon.denom().to_u32()) else {
            return Ok(None);
        };
        let q = BigRational::from_integer(self.q_abs.clone());
        let q_pow = (self.q_exp as u32).checked_mul(b).and_then(|e| e.checked_add(a));
        let Some(q_pow) = q_pow else {
            return Ok(None);
        };
        let lhs = num_traits::pow(x.clone(), b as usize)
            * num_traits::pow(prod, a as usize)
            * num_traits::pow(q, q_pow as usize);
        Ok(Some(lhs.cmp(&BigRational::one())))
    }
}

/// Outcome of a certified `|y| < bound` test with the enclosures seen
/// last.
#[derive(Clone, Debug)]
pub struct BoundTest {
    pub verdict: Decision,
    /// Exactly on the boundary (decided by exact arithmetic).
    pub equality: bool,
    pub lhs: CertifiedValue,
    pub rhs: Interval,
}

/// Certified `|y| < bound` along the precision ladder, with an exact
/// rational fallback.
pub fn modulus_below(y: &FieldElement, bound: &Bound<'_>, max_bits: u32) -> Result<BoundTest> {
    let show = |bits: u32| -> Result<(CertifiedValue, Interval)> {
        Ok((embed_default(y, bits)?.abs(), bound.enclosure(bits)?))
    };
    if let Some(r) = y.as_rational() {
        if let Some(o) = bound.exact_cmp(&r.abs())? {
            let (lhs, rhs) = show(64)?;
            return Ok(BoundTest {
                verdict: Decision::from_bool(o.is_lt()),
                equality: o.is_eq(),
                lhs,
                rhs,
            });
        }
    }
    let mut last = None;
    for bits in precision_ladder(max_bits) {
        let (lhs, rhs) = show(bits)?;
        if let Some(b) = lhs.re().lt(&rhs) {
            return Ok(BoundTest {
                verdict: Decision::from_bool(b),
                equality: false,
                lhs,
                rhs,
            });
        }
        last = Some((lhs, rhs));
    }
    let (lhs, rhs) = last.expect("ladder is nonempty");
    Ok(BoundTest {
        verdict: Decision::Undecided,
        equality: false,
        lhs,
        rhs,
    })
}

pub fn interval_decimal(x: &Interval) -> String {
    CertifiedValue::real(x.clone(), 64).to_decimal()
}

/// `Σ α_i · c · u_i`.
pub fn linear_form(alphas: &[FieldElement], us: &[FieldElement], c: &BigRational) -> FieldElement {
    let field = us[0].field();
    let mut acc = FieldElement::zero(field);
    for (a, u) in alphas.iter().zip(us) {
        acc = &acc + &(a * u);
    }
    if c.is_one() {
        acc
    } else if c.is_zero() {
        FieldElement::zero(field)
    } else {
        acc.scale(c)
    }
}
