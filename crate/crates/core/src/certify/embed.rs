use std::sync::Arc;

use super::decide::Decision;
use super::interval::CertifiedValue;
use super::roots::RootLadder;
use crate::exact::{FieldElement, NumberFieldDesc};
use crate::error::{Error, Result};

/// Ladder levels tried before settling for a wider enclosure.
const MAX_EXTRA_LEVELS: u32 = 6;

/// Evaluates the power-basis representation of `a` at the certified root
/// with index `embedding_index` (canonical root order) of the defining
/// polynomial.
///
/// The root is refined until the result has radius at most `2^-bits` or six
/// extra doublings have been spent; either way the enclosure is sound.
pub fn embed(a: &FieldElement, embedding_index: usize, bits: u32) -> Result<CertifiedValue> {
    let field = a.field();
    let n = field.degree();
    if embedding_index >= n {
        return Err(Error::BadEmbedding {
            index: embedding_index,
            count: n,
        });
    }
    let prec = bits + 32;
    if let Some(r) = a.as_rational() {
        return Ok(CertifiedValue::from_rational(&r, prec));
    }
    let target = super::Dyadic::one().mul_pow2(-(bits as i64));
    let mut root_bits = bits.max(64);
    let mut best = None;
    for _ in 0..=MAX_EXTRA_LEVELS {
        let sys = field.roots().at(root_bits);
        let z = sys.roots()[embedding_index].enclosure(prec.max(root_bits + 32));
        let v = horner(a, &z);
        let done = v.radius() <= target;
        best = Some(v);
        if done || RootLadder::level_bits(13) <= root_bits {
            break;
        }
        root_bits *= 2;
    }
    Ok(best.expect("at least one pass").with_precision(bits))
}

/// [`embed`] under the field's fixed embedding.
pub fn embed_default(a: &FieldElement, bits: u32) -> Result<CertifiedValue> {
    embed(a, a.field().embedding(), bits)
}

fn horner(a: &FieldElement, z: &CertifiedValue) -> CertifiedValue {
    let prec = z.precision_bits();
    let mut acc = CertifiedValue::from_rational(&num_rational::BigRational::default(), prec);
    for c in a.coeffs().iter().rev() {
        acc = acc.mul(z).add(&CertifiedValue::from_rational(c, prec));
    }
    acc
}

/// For each Galois map `σ_k`, the root index `j` with `ι(σ_k(θ)) = r_j`,
/// where `ι` is the field's embedding. This identifies `ι ∘ σ_k` with the
/// embedding `θ ↦ r_j`.
pub fn galois_root_permutation(field: &Arc<NumberFieldDesc>) -> Result<Vec<usize>> {
    let g = field.require_galois()?;
    let mut out = Vec::with_capacity(g.len());
    for img in g.maps() {
        let e = FieldElement::from_poly_coeffs(field, img.clone());
        out.push(match_root(field, |bits| embed_default(&e, bits))?);
    }
    Ok(out)
}

/// Index of the root whose disk is the only one meeting the value produced
/// by `value(bits)`, refining until unique.
fn match_root<F>(field: &Arc<NumberFieldDesc>, value: F) -> Result<usize>
where
    F: Fn(u32) -> Result<CertifiedValue>,
{
    let mut bits = 64;
    while bits <= RootLadder::level_bits(12) {
        let v = value(bits)?;
        let sys = field.roots().at(bits);
        let hits: Vec<usize> = (0..sys.len())
            .filter(|&k| sys.enclosure(k).overlaps(&v))
            .collect();
        if hits.len() == 1 {
            return Ok(hits[0]);
        }
        bits *= 2;
    }
    Err(Error::InvalidGaloisData(
        "could not match a Galois image of θ to a root".into(),
    ))
}

/// Index of the Galois map acting as complex conjugation under the field's
/// embedding (the identity for a real embedding). Requires Galois data;
/// since `K` is Galois, conjugation restricts to an automorphism of `K`.
pub fn complex_conjugation(field: &Arc<NumberFieldDesc>) -> Result<usize> {
    if let Some(c) = field.conjugation_cell().get() {
        return c.ok_or_else(|| Error::GaloisDataMissing(field.label().to_string()));
    }
    let found = (|| -> Result<usize> {
        let g = field.require_galois()?;
        if field.is_real_embedding() {
            return Ok(g.identity());
        }
        let e = field.embedding();
        let conj_root = match_root(field, |bits| {
            let z = field.roots().at(bits).enclosure(e);
            Ok(CertifiedValue::new(z.re().clone(), z.im().neg(), z.precision_bits()))
        })?;
        let perm = galois_root_permutation(field)?;
        perm.iter()
            .position(|&j| j == conj_root)
            .ok_or_else(|| Error::InvalidGaloisData("complex conjugation is not among the maps".into()))
    })();
    let _ = field.conjugation_cell().set(found.as_ref().ok().copied());
    found
}

/// `|β|^2` as an element of `K`, i.e. `β · conj(β)` with conjugation taken
/// from the Galois data.
pub fn modulus_squared(b: &FieldElement) -> Result<FieldElement> {
    let c = complex_conjugation(b.field())?;
    let cb = crate::exact::apply_galois(c, b)?;
    Ok(b * &cb)
}

/// Certified three-way comparison of `|β|` with 1 under the field's
/// embedding. Intervals decide whenever they can; an exact test of
/// `β · conj(β) = 1` settles the boundary when Galois data is available,
/// and then `|β|^2 - 1` is a nonzero element of `K` so refinement
/// terminates.
pub fn compare_modulus_one(b: &FieldElement, max_bits: u32) -> Result<std::cmp::Ordering> {
    use std::cmp::Ordering;
    let exact = modulus_squared(b).ok();
    if let Some(m) = &exact {
        if m.is_one() {
            return Ok(Ordering::Equal);
        }
        if let Some(r) = m.as_rational() {
            return Ok(r.cmp(&num_rational::BigRational::from_integer(1.into())));
        }
    }
    let mut bits = 64;
    let cap = if exact.is_some() { max_bits.max(1 << 16) } else { max_bits };
    loop {
        let v = embed_default(b, bits)?;
        let n = v.norm_sqr();
        let one = super::Dyadic::one();
        if n.hi() < &one {
            return Ok(Ordering::Less);
        }
        if n.lo() > &one {
            return Ok(Ordering::Greater);
        }
        if bits >= cap {
            return Err(Error::Undecided(bits));
        }
        bits = (bits * 2).min(cap);
    }
}

/// [`compare_modulus_one`] folded into a three-valued predicate.
pub fn modulus_lt_one(b: &FieldElement, max_bits: u32) -> Decision {
    match compare_modulus_one(b, max_bits) {
        Ok(o) => Decision::from_bool(o == std::cmp::Ordering::Less),
        Err(_) => Decision::Undecided,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntPolynomial;
    use num_rational::BigRational;

    fn sqrt2() -> Arc<NumberFieldDesc> {
        let r = |n: i64| BigRational::from_integer(n.into());
        NumberFieldDesc::builder(IntPolynomial::from_i64s(&[-2, 0, 1]))
            .galois(vec![vec![r(0), r(1)], vec![r(0), r(-1)]])
            .build()
            .unwrap()
    }

    #[test]
    fn both_real_embeddings() {
        let k = sqrt2();
        let a = FieldElement::parse(&k, "1+t").unwrap();
        let plus = embed(&a, 1, 64).unwrap();
        let minus = embed(&a, 0, 64).unwrap();
        assert!((plus.to_f64() - 2.414213562373095).abs() < 1e-12);
        assert!((minus.to_f64() + 0.41421356237309515).abs() < 1e-12);
        assert!(plus.is_real());
        assert_eq!(k.embedding(), 1);
        assert!(matches!(
            embed(&a, 2, 64),
            Err(Error::BadEmbedding { index: 2, count: 2 })
        ));
    }

    #[test]
    fn constants_are_exact() {
        let k = sqrt2();
        let c = FieldElement::from_int(&k, 7);
        for i in 0..2 {
            let v = embed(&c, i, 64).unwrap();
            assert!(v.radius().is_zero());
            assert!(v.contains_rational(&BigRational::from_integer(7.into())));
        }
    }

    #[test]
    fn radius_shrinks_with_bits() {
        let k = sqrt2();
        let a = FieldElement::parse(&k, "3/7 + 5t").unwrap();
        let r64 = embed(&a, 1, 64).unwrap().radius();
        let r512 = embed(&a, 1, 512).unwrap().radius();
        assert!(r512 < r64);
        assert!(r512 <= crate::certify::Dyadic::one().mul_pow2(-512));
    }

    #[test]
    fn galois_permutation_and_conjugation() {
        let k = sqrt2();
        assert_eq!(galois_root_permutation(&k).unwrap(), vec![1, 0]);
        assert_eq!(complex_conjugation(&k).unwrap(), 0);
        // Q(i): conjugation is θ ↦ -θ
        let r = |n: i64| BigRational::from_integer(n.into());
        let qi = NumberFieldDesc::builder(IntPolynomial::from_i64s(&[1, 0, 1]))
            .galois(vec![vec![r(0), r(1)], vec![r(0), r(-1)]])
            .build()
            .unwrap();
        assert_eq!(complex_conjugation(&qi).unwrap(), 1);
        let i = FieldElement::theta(&qi);
        assert_eq!(compare_modulus_one(&i, 256).unwrap(), std::cmp::Ordering::Equal);
        let z = FieldElement::parse(&qi, "3/5 + 4/5*t").unwrap();
        assert_eq!(compare_modulus_one(&z, 256).unwrap(), std::cmp::Ordering::Equal);
        let w = FieldElement::parse(&qi, "1/2 + 1/2*t").unwrap();
        assert_eq!(compare_modulus_one(&w, 256).unwrap(), std::cmp::Ordering::Less);
    }
}
