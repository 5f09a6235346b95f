//! Roots of unity, Pisot numbers, pseudo-Pisot tuples, the relation
//! `ρ ∼ λ ⇔ ρ/σ(λ) ∈ μ`, properties (P1)/(P2) and the class partition.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::certify::{
    compare_modulus_one, embed_default, precision_ladder, Decision, Dyadic, RootLadder,
};
use crate::error::{Error, Result};
use crate::exact::{apply_galois, check_irreducible, galois_orbit, FieldElement, IntPolynomial};

/// Order of `a` as a root of unity, if it is one.
///
/// The minimal polynomial of a root of unity of order `n` is `Φ_n`
/// (Kronecker: a monic integer polynomial with all roots in the closed unit
/// disk is a product of cyclotomic factors), so the candidate order is read
/// off the minimal polynomial and confirmed by `a^n = 1` exactly.
pub fn root_of_unity_order(a: &FieldElement) -> Result<Option<u64>> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    let Some(n) = a.minimal_polynomial().cyclotomic_index() else {
        return Ok(None);
    };
    Ok(a.pow(n as i64)?.is_one().then_some(n))
}

pub fn is_root_of_unity(a: &FieldElement) -> Result<bool> {
    Ok(root_of_unity_order(a)?.is_some())
}

/// Roots of a polynomial strictly outside the closed unit disk; every other
/// root is certified strictly inside.
struct RootLayout {
    outside: Vec<usize>,
}

fn layout(ladder: &RootLadder, max_bits: u32) -> Result<(RootLayout, u32)> {
    let one = Dyadic::one();
    for bits in precision_ladder(max_bits) {
        let sys = ladder.at(bits);
        let mut outside = Vec::new();
        let mut unknown = false;
        for k in 0..sys.len() {
            let n = sys.enclosure(k).norm_sqr();
            if n.hi() < &one {
                continue;
            } else if n.lo() > &one {
                outside.push(k);
            } else {
                unknown = true;
                break;
            }
        }
        if !unknown {
            return Ok((RootLayout { outside }, bits));
        }
    }
    Err(Error::Undecided(max_bits))
}

/// Is `f` the minimal polynomial of a Pisot number?
///
/// `f` must be monic (up to sign) and irreducible; exactly one root lies
/// outside the closed unit disk, it is real and exceeds one, and every
/// other root lies in the open disk. A nontrivial common factor with the
/// reciprocal polynomial is decided exactly: in degree at least three it
/// forces a conjugate pair `r, 1/r` besides the candidate, so the answer is
/// false; a self-reciprocal quadratic with complex roots has both on the
/// unit circle.
pub fn is_pisot_poly(f: &IntPolynomial, max_bits: u32) -> Result<bool> {
    let f = f.primitive();
    let d = f.degree();
    if d == 0 {
        return Err(Error::ZeroInput);
    }
    if !f.is_monic() {
        return Ok(false);
    }
    if d == 1 {
        return Ok(-f.coeff(0) > BigInt::one());
    }
    check_irreducible(&f).map_err(|e| Error::BadInput(format!("not a minimal polynomial: {e}")))?;
    if f.shares_factor_with_reciprocal() {
        if d >= 3 {
            return Ok(false);
        }
        let disc = f.coeff(1) * f.coeff(1) - BigInt::from(4) * f.coeff(0) * f.coeff(2);
        if disc.is_negative() {
            return Ok(false);
        }
    }
    let ladder = RootLadder::new(f);
    pisot_layout(&ladder, max_bits).map(|x| x.is_some())
}

/// Index of the Pisot root when `ladder`'s polynomial is Pisot-shaped.
fn pisot_layout(ladder: &RootLadder, max_bits: u32) -> Result<Option<usize>> {
    let (lay, bits) = layout(ladder, max_bits)?;
    if lay.outside.len() != 1 {
        return Ok(None);
    }
    let k = lay.outside[0];
    let root = &ladder.at(bits).roots()[k];
    Ok((root.real && root.center_re.is_positive()).then_some(k))
}

/// `a` is a real algebraic integer greater than one whose other conjugates
/// all lie in the open unit disk. `a` is located among the roots of its
/// minimal polynomial through the field's embedding.
pub fn is_pisot(a: &FieldElement, max_bits: u32) -> Result<bool> {
    if a.is_zero() {
        return Ok(false);
    }
    let f = a.minimal_polynomial();
    if f.degree() == 1 {
        return is_pisot_poly(&f, max_bits);
    }
    if !is_pisot_poly(&f, max_bits)? {
        return Ok(false);
    }
    let ladder = RootLadder::new(f);
    let big = pisot_layout(&ladder, max_bits)?.expect("checked above");
    for bits in precision_ladder(max_bits) {
        let v = embed_default(a, bits)?;
        let sys = ladder.at(bits);
        let hits: Vec<usize> = (0..sys.len())
            .filter(|&k| sys.enclosure(k).overlaps(&v))
            .collect();
        if let [k] = hits[..] {
            return Ok(k == big);
        }
    }
    Err(Error::Undecided(max_bits))
}

/// Distinct Galois conjugates of an element inside the declared field.
#[derive(Clone, Debug)]
pub struct ConjugateSet {
    pub element: FieldElement,
    pub conjugates: Vec<FieldElement>,
    /// The minimal polynomial has more roots than conjugates found in `K`.
    pub external_flag: bool,
}

pub fn conjugate_set(a: &FieldElement) -> Result<ConjugateSet> {
    let conjugates = galois_orbit(a)?;
    let external_flag = conjugates.len() < a.minimal_polynomial().degree();
    Ok(ConjugateSet {
        element: a.clone(),
        conjugates,
        external_flag,
    })
}

fn conjugates_in_field(a: &FieldElement) -> Result<Vec<FieldElement>> {
    let c = conjugate_set(a)?;
    if c.external_flag {
        return Err(Error::ConjugatesOutsideField(a.to_string()));
    }
    Ok(c.conjugates)
}

/// Why a tuple is or is not pseudo-Pisot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PseudoPisotWitness {
    Holds,
    /// `β_i = β_j` (0-based indices).
    NotDistinct { i: usize, j: usize },
    /// The sum over the tuple and `P` is not a rational integer.
    SumNotInteger { sum: String },
    /// Some `β ∈ P` has `|β| ≥ 1`.
    OutsideDisk { beta: String },
    /// `|β| < 1` could not be decided for this `β ∈ P`.
    Undecided { beta: String },
}

impl fmt::Display for PseudoPisotWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Holds => write!(f, "pseudo-Pisot"),
            Self::NotDistinct { i, j } => write!(f, "β_{} = β_{}", i + 1, j + 1),
            Self::SumNotInteger { sum } => write!(f, "sum {sum} is not a rational integer"),
            Self::OutsideDisk { beta } => write!(f, "|β| ≥ 1 for β = {beta} in P"),
            Self::Undecided { beta } => write!(f, "|β| < 1 undecided for β = {beta} in P"),
        }
    }
}

/// Outcome of [`pseudo_pisot_tuple`].
#[derive(Clone, Debug)]
pub struct PseudoPisotVerdict {
    pub verdict: Decision,
    pub witness: PseudoPisotWitness,
    /// The set `P` of conjugates outside the tuple.
    pub p_set: Vec<FieldElement>,
    /// `Σ β_i + Σ_{β ∈ P} β`, exactly.
    pub sum: FieldElement,
}

/// Pseudo-Pisot test: pairwise distinct entries, integral sum over the
/// tuple and `P = {σ(β_i)} \ {β_1, …, β_n}` (a set), and `|β| < 1` on `P`.
pub fn pseudo_pisot_tuple(betas: &[FieldElement], max_bits: u32) -> Result<PseudoPisotVerdict> {
    let first = betas
        .first()
        .ok_or_else(|| Error::BadInput("empty tuple".into()))?;
    let field = first.field().clone();
    let mut p_set: Vec<FieldElement> = Vec::new();
    for b in betas {
        for c in conjugates_in_field(b)? {
            if !betas.contains(&c) && !p_set.contains(&c) {
                p_set.push(c);
            }
        }
    }
    let sum = betas
        .iter()
        .chain(&p_set)
        .try_fold(FieldElement::zero(&field), |acc, x| acc.checked_add(x))?;
    let verdict = |v: Decision, w: PseudoPisotWitness| PseudoPisotVerdict {
        verdict: v,
        witness: w,
        p_set: p_set.clone(),
        sum: sum.clone(),
    };
    for i in 0..betas.len() {
        for j in i + 1..betas.len() {
            if betas[i] == betas[j] {
                return Ok(verdict(Decision::False, PseudoPisotWitness::NotDistinct { i, j }));
            }
        }
    }
    if sum.as_integer().is_none() {
        return Ok(verdict(
            Decision::False,
            PseudoPisotWitness::SumNotInteger {
                sum: sum.to_string(),
            },
        ));
    }
    let mut undecided = None;
    for b in &p_set {
        match compare_modulus_one(b, max_bits) {
            Ok(Ordering::Less) => {}
            Ok(_) => {
                return Ok(verdict(
                    Decision::False,
                    PseudoPisotWitness::OutsideDisk {
                        beta: b.to_string(),
                    },
                ))
            }
            Err(Error::Undecided(_)) => {
                undecided.get_or_insert_with(|| b.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    Ok(match undecided {
        Some(beta) => verdict(Decision::Undecided, PseudoPisotWitness::Undecided { beta }),
        None => verdict(Decision::True, PseudoPisotWitness::Holds),
    })
}

/// Index of a Galois map `σ` with `a / σ(b) ∈ μ`, if any.
pub fn equiv_witness(a: &FieldElement, b: &FieldElement) -> Result<Option<usize>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    let g = a.field().require_galois()?;
    for k in 0..g.len() {
        let q = a.checked_div(&apply_galois(k, b)?)?;
        if is_root_of_unity(&q)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// `a ∼ b`: some Galois conjugate of `b` differs from `a` by a root of unity.
pub fn equiv_related(a: &FieldElement, b: &FieldElement) -> Result<bool> {
    Ok(equiv_witness(a, b)?.is_some())
}

/// Verdicts for (P1) and (P2) with the first counterexample of each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub p1: bool,
    pub p2: bool,
    /// `(i, ρ)`: a conjugate `ρ ≠ β_i` with `ρ / β_i ∈ μ`.
    pub p1_witness: Option<(usize, String)>,
    /// `(i, j)`: `β_i ∼ β_j` but the two are not conjugate.
    pub p2_witness: Option<(usize, usize)>,
}

pub fn check_p1_p2(tuple: &[FieldElement]) -> Result<PropertyVerdict> {
    let orbits = tuple
        .iter()
        .map(|b| {
            if b.is_zero() {
                Err(Error::ZeroInput)
            } else {
                conjugates_in_field(b)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut p1_witness = None;
    'p1: for (i, b) in tuple.iter().enumerate() {
        for rho in &orbits[i] {
            if rho != b && is_root_of_unity(&rho.checked_div(b)?)? {
                p1_witness = Some((i, rho.to_string()));
                break 'p1;
            }
        }
    }
    let mut p2_witness = None;
    'p2: for i in 0..tuple.len() {
        for j in 0..tuple.len() {
            if i != j && equiv_related(&tuple[i], &tuple[j])? && !orbits[i].contains(&tuple[j]) {
                p2_witness = Some((i, j));
                break 'p2;
            }
        }
    }
    Ok(PropertyVerdict {
        p1: p1_witness.is_none(),
        p2: p2_witness.is_none(),
        p1_witness,
        p2_witness,
    })
}

/// Decomposition of a tuple into `∼`-classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassPartition {
    /// 0-based indices, classes ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
    pub h: usize,
    pub e: Vec<usize>,
    /// Number of distinct Galois conjugates of each class representative.
    pub d_counts: Vec<usize>,
}

/// Groups the entries of a (P2)-satisfying tuple by `∼`.
pub fn partition_classes(tuple: &[FieldElement]) -> Result<ClassPartition> {
    let props = check_p1_p2(tuple)?;
    if let Some((i, j)) = props.p2_witness {
        return Err(Error::PartitionRefused(format!(
            "u_{} ∼ u_{} but they are not Galois conjugate",
            i + 1,
            j + 1
        )));
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..tuple.len() {
        let mut home = None;
        for (c, members) in classes.iter().enumerate() {
            if equiv_related(&tuple[i], &tuple[members[0]])? {
                home = Some(c);
                break;
            }
        }
        match home {
            Some(c) => classes[c].push(i),
            None => classes.push(vec![i]),
        }
    }
    let d_counts = classes
        .iter()
        .map(|c| Ok(conjugates_in_field(&tuple[c[0]])?.len()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassPartition {
        h: classes.len(),
        e: classes.iter().map(Vec::len).collect(),
        d_counts,
        classes,
    })
}

/// Certified `|a| > 1` under the field's embedding (exact on the unit
/// circle when Galois data is present).
pub fn modulus_gt_one(a: &FieldElement, max_bits: u32) -> Decision {
    match compare_modulus_one(a, max_bits) {
        Ok(o) => Decision::from_bool(o == Ordering::Greater),
        Err(_) => Decision::Undecided,
    }
}

/// Certified `|a| >= 1`.
pub fn modulus_ge_one(a: &FieldElement, max_bits: u32) -> Decision {
    match compare_modulus_one(a, max_bits) {
        Ok(o) => Decision::from_bool(o != Ordering::Less),
        Err(_) => Decision::Undecided,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::NumberFieldDesc;
    use num_rational::BigRational;
    use std::sync::Arc;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn quadratic(c0: i64, c1: i64) -> Arc<NumberFieldDesc> {
        // x^2 + c1 x + c0, conjugation θ ↦ -c1 - θ
        NumberFieldDesc::builder(IntPolynomial::from_i64s(&[c0, c1, 1]))
            .galois(vec![vec![r(0), r(1)], vec![r(-c1), r(-1)]])
            .build()
            .unwrap()
    }

    fn el(k: &Arc<NumberFieldDesc>, s: &str) -> FieldElement {
        FieldElement::parse(k, s).unwrap()
    }

    #[test]
    fn roots_of_unity() {
        let k = quadratic(-2, 0);
        assert!(is_root_of_unity(&FieldElement::from_int(&k, -1)).unwrap());
        assert!(!is_root_of_unity(&el(&k, "1+t")).unwrap());
        let z5 = NumberFieldDesc::builder(IntPolynomial::from_i64s(&[1, 1, 1, 1, 1]))
            .build()
            .unwrap();
        assert_eq!(root_of_unity_order(&FieldElement::theta(&z5)).unwrap(), Some(5));
        assert_eq!(root_of_unity_order(&el(&z5, "-t")).unwrap(), Some(10));
    }

    #[test]
    fn pisot_fixtures() {
        let phi = quadratic(-1, -1);
        assert!(is_pisot(&FieldElement::theta(&phi), 1024).unwrap());
        assert!(!is_pisot(&el(&phi, "1-t"), 1024).unwrap());
        let s2 = quadratic(-2, 0);
        assert!(!is_pisot(&FieldElement::theta(&s2), 1024).unwrap());
        assert!(is_pisot(&el(&s2, "1+t"), 1024).unwrap());
        assert!(!is_pisot(&FieldElement::from_rational(&s2, BigRational::new(3.into(), 2.into())), 1024).unwrap());
        assert!(is_pisot_poly(&IntPolynomial::from_i64s(&[-1, -1, 0, 1]), 1024).unwrap());
        let lehmer = IntPolynomial::from_i64s(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        assert!(!is_pisot_poly(&lehmer, 1024).unwrap());
        // φ^2 has the self-reciprocal minimal polynomial x^2 - 3x + 1
        assert!(is_pisot_poly(&IntPolynomial::from_i64s(&[1, -3, 1]), 1024).unwrap());
        assert!(!is_pisot_poly(&IntPolynomial::from_i64s(&[1, 1, 1]), 1024).unwrap());
        assert!(is_pisot_poly(&IntPolynomial::from_i64s(&[-2, 1]), 64).unwrap());
    }

    #[test]
    fn pseudo_pisot_fixtures() {
        let k = quadratic(-1, -1);
        let phi = FieldElement::theta(&k);
        let v = pseudo_pisot_tuple(std::slice::from_ref(&phi), 1024).unwrap();
        assert_eq!(v.verdict, Decision::True);
        assert_eq!(v.p_set, vec![el(&k, "1-t")]);
        assert_eq!(v.sum, FieldElement::one(&k));
        let conj = el(&k, "1-t");
        let v = pseudo_pisot_tuple(&[phi.clone(), conj], 1024).unwrap();
        assert_eq!(v.verdict, Decision::True);
        assert!(v.p_set.is_empty());
        let s2 = quadratic(-2, 0);
        let v = pseudo_pisot_tuple(&[FieldElement::theta(&s2)], 1024).unwrap();
        assert_eq!(v.verdict, Decision::False);
        assert!(matches!(v.witness, PseudoPisotWitness::OutsideDisk { .. }));
        assert!(v.witness.to_string().starts_with("|β| ≥ 1"));
        let v = pseudo_pisot_tuple(&[phi.clone(), phi], 1024).unwrap();
        assert!(matches!(v.witness, PseudoPisotWitness::NotDistinct { i: 0, j: 1 }));
    }

    #[test]
    fn relation_and_properties() {
        let k = quadratic(-1, -1);
        let phi = FieldElement::theta(&k);
        let conj = el(&k, "1-t");
        assert!(equiv_related(&phi, &conj).unwrap());
        assert!(equiv_related(&phi, &phi).unwrap());
        let p = check_p1_p2(&[phi.clone(), conj.clone()]).unwrap();
        assert!(p.p1 && p.p2);
        let part = partition_classes(&[phi, conj]).unwrap();
        assert_eq!((part.h, part.e.clone(), part.d_counts.clone()), (1, vec![2], vec![2]));

        let s2 = quadratic(-2, 0);
        let p = check_p1_p2(&[FieldElement::theta(&s2), el(&s2, "-t")]).unwrap();
        assert!(!p.p1);
        let a = el(&s2, "1+t");
        assert!(!equiv_related(&a, &el(&s2, "2+t")).unwrap());
        let p = check_p1_p2(std::slice::from_ref(&a)).unwrap();
        assert!(p.p1 && p.p2);
    }

    #[test]
    fn p2_violation_refuses_partition() {
        // 1+√2 and -(1+√2) are related (quotient -1) but not conjugate
        let s2 = quadratic(-2, 0);
        let t = [el(&s2, "1+t"), el(&s2, "-1-t")];
        let p = check_p1_p2(&t).unwrap();
        assert!(!p.p2);
        assert!(matches!(partition_classes(&t), Err(Error::PartitionRefused(_))));
    }

    #[test]
    fn outside_field_is_refused() {
        let k = NumberFieldDesc::builder(IntPolynomial::from_i64s(&[-2, 0, 0, 1]))
            .build()
            .unwrap();
        let a = FieldElement::theta(&k);
        assert!(matches!(
            pseudo_pisot_tuple(&[a], 256),
            Err(Error::GaloisDataMissing(_))
        ));
    }
}
