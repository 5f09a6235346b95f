//! Quick invariant suites behind `sunitlab selftest`. Each suite is seeded
//! and runs in well under a second.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{is_pisot_poly, pseudo_pisot_tuple};
use crate::error::Result;
use crate::exact::{FieldElement, IntPolynomial, NumberFieldDesc};
use crate::gamma::{enumerate, materialize, ratio_filter, GroupDesc, GroupElement, TupleFamilyFilter};
use crate::heights::{product_over_places, weil_height};

use super::mahler::mahler_scan;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

const SEED: u64 = 20240611;

fn sqrt2() -> Result<Arc<NumberFieldDesc>> {
    let r = |n: i64| BigRational::from_integer(n.into());
    NumberFieldDesc::builder(IntPolynomial::from_i64s(&[-2, 0, 1]))
        .galois(vec![vec![r(0), r(1)], vec![r(0), r(-1)]])
        .label("Q(sqrt2)")
        .build()
}

fn suite(name: &'static str, f: impl FnOnce() -> Result<std::result::Result<String, String>>) -> SuiteResult {
    match f() {
        Ok(Ok(detail)) => SuiteResult { name, passed: true, detail },
        Ok(Err(detail)) => SuiteResult { name, passed: false, detail },
        Err(e) => SuiteResult {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn product_formula() -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..200 {
        let n: i64 = rng.gen_range(1..1_000_000) * if rng.gen() { 1 } else { -1 };
        let d: i64 = rng.gen_range(1..1_000_000);
        let x = BigRational::new(n.into(), d.into());
        if !product_over_places(&x)?.is_one() {
            return Ok(Err(format!("∏ |x|_v ≠ 1 for x = {x}")));
        }
    }
    Ok(Ok("200 random rationals".into()))
}

fn height_powers() -> Result<std::result::Result<String, String>> {
    let k = sqrt2()?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for _ in 0..20 {
        let a = FieldElement::parse(&k, &format!("{} + {}t", rng.gen_range(-5..=5), rng.gen_range(1..=5)))?;
        let e: i64 = rng.gen_range(1..=4);
        let lhs = weil_height(&a.pow(e)?, 256)?.value;
        let rhs = weil_height(&a, 256)?.value.pow_int(e)?;
        if !lhs.overlaps(&rhs) {
            return Ok(Err(format!("H(a^{e}) and H(a)^{e} disjoint for a = {a}")));
        }
    }
    Ok(Ok("20 random (a, k) in Q(√2)".into()))
}

fn homomorphism() -> Result<std::result::Result<String, String>> {
    let k = sqrt2()?;
    let desc = GroupDesc::new(
        vec![FieldElement::from_int(&k, -1), FieldElement::parse(&k, "1+t")?, FieldElement::from_int(&k, 3)],
        vec![Some(2), None, None],
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    for _ in 0..50 {
        let g = GroupElement::new((0..3).map(|_| rng.gen_range(-6..=6)).collect());
        let h = GroupElement::new((0..3).map(|_| rng.gen_range(-6..=6)).collect());
        let lhs = materialize(&g.add(&h), &desc)?;
        let rhs = &materialize(&g, &desc)? * &materialize(&h, &desc)?;
        if lhs != rhs {
            return Ok(Err(format!("materialize({g} + {h}) ≠ product")));
        }
    }
    Ok(Ok("50 random pairs".into()))
}

fn enumeration() -> Result<std::result::Result<String, String>> {
    let q = NumberFieldDesc::rationals();
    let desc = GroupDesc::free(vec![FieldElement::from_int(&q, 2), FieldElement::from_int(&q, 3)])?;
    let en = enumerate(&desc, 2, 2)?;
    if en.len() != 5u64.pow(4) {
        return Ok(Err(format!("expected 625 tuples, got {}", en.len())));
    }
    let all: Vec<_> = en.iter().collect();
    let mut merged = Vec::new();
    for r in en.shards(7) {
        merged.extend(r.map(|i| en.tuple(i)));
    }
    if merged != all {
        return Ok(Err("sharded enumeration differs from the plain one".into()));
    }
    let mut f = TupleFamilyFilter::new(&desc);
    let admitted: Vec<_> = all.iter().filter(|t| ratio_filter(t, &mut f).admitted()).cloned().collect();
    let mut g = TupleFamilyFilter::new(&desc);
    if !admitted.iter().all(|t| ratio_filter(t, &mut g).admitted()) {
        return Ok(Err("re-filtering the admitted family rejected a member".into()));
    }
    Ok(Ok(format!("625 tuples, 7 shards, {} admitted", admitted.len())))
}

fn pisot() -> Result<std::result::Result<String, String>> {
    let cases: [(&[i64], bool); 5] = [
        (&[-1, -1, 1], true),
        (&[-1, -2, 1], true),
        (&[-1, -1, 0, 1], true),
        (&[-2, 0, 1], false),
        (&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1], false),
    ];
    for (c, want) in cases {
        let f = IntPolynomial::from_i64s(c);
        if is_pisot_poly(&f, 1024)? != want {
            return Ok(Err(format!("Pisot verdict for {f} is not {want}")));
        }
    }
    let k = sqrt2()?;
    for n in 1..=6 {
        let b = FieldElement::parse(&k, "1+t")?.pow(n)?;
        if !pseudo_pisot_tuple(&[b], 1024)?.verdict.is_true() {
            return Ok(Err(format!("(1+√2)^{n} should be pseudo-Pisot")));
        }
    }
    Ok(Ok("5 polynomials, 6 powers".into()))
}

fn mahler() -> Result<std::result::Result<String, String>> {
    let a = BigRational::new(3.into(), 2.into());
    let s50 = mahler_scan(&a, &BigRational::one(), 50)?;
    let s200 = mahler_scan(&a, &BigRational::one(), 200)?;
    if !s200.qualifying.is_empty() || !s200.boundaries.contains(&4) {
        return Ok(Err(format!("unexpected scan: {:?} / {:?}", s200.qualifying, s200.boundaries)));
    }
    if s50.max_qualifying() != s200.max_qualifying() {
        return Ok(Err("qualifying set grew between nmax = 50 and 200".into()));
    }
    Ok(Ok("α = 3/2, ε = 1: ∅, boundary at n = 4".into()))
}

/// Runs every suite.
pub fn run_selftest() -> Vec<SuiteResult> {
    vec![
        suite("product_formula", product_formula),
        suite("height_powers", height_powers),
        suite("materialize_homomorphism", homomorphism),
        suite("enumeration_and_filter", enumeration),
        suite("pisot_and_pseudo_pisot", pisot),
        suite("mahler_three_halves", mahler),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_suites_pass() {
        for r in super::run_selftest() {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
