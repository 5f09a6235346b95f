//! Acceptance criteria 1–10, one PASS/FAIL line each. Every criterion is
//! checked against an oracle that does not reuse the code under test.
//!
//! A FAIL line whose computed result matches the independent oracle is a
//! criterion that cannot hold as stated (see the README); the process exits
//! non-zero only when the implementation disagrees with an oracle.

use std::cmp::Ordering;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use sunitlab_core::certify::Decision;
use sunitlab_core::classify::{check_p1_p2, is_pisot_poly, partition_classes, pseudo_pisot_tuple, PseudoPisotWitness};
use sunitlab_core::exact::{FieldElement, IntPolynomial, NumberFieldDesc};
use sunitlab_core::harness::mahler::mahler_scan_algebraic;
use sunitlab_core::harness::{mahler_scan, read_summary, run, Format, Report, RunConfig, RunOptions};
use sunitlab_core::heights::{product_over_places, weil_height};

type Check = Result<String, String>;

struct Outcome {
    /// The criterion as stated holds.
    pass: bool,
    /// The implementation agrees with every oracle.
    sound: bool,
    detail: String,
}

impl From<Check> for Outcome {
    fn from(c: Check) -> Self {
        match c {
            Ok(detail) => Outcome { pass: true, sound: true, detail },
            Err(detail) => Outcome { pass: false, sound: false, detail },
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn field(coeffs: &[i64]) -> Arc<NumberFieldDesc> {
    NumberFieldDesc::builder(IntPolynomial::from_i64s(coeffs))
        .standard_galois()
        .build()
        .expect("fixture field")
}

fn el(k: &Arc<NumberFieldDesc>, s: &str) -> FieldElement {
    FieldElement::parse(k, s).expect("fixture element")
}

fn fail<T>(e: impl std::fmt::Display) -> Result<T, String> {
    Err(format!("error: {e}"))
}

fn run_config(text: &str, jobs: usize, compare: Option<Value>) -> Result<Report, String> {
    let cfg = RunConfig::parse(text).or_else(fail)?;
    run(&cfg, &RunOptions { jobs, max_bits: None, compare }).or_else(fail)
}

// ---------------------------------------------------------------------------
// Exact arithmetic in Z[√2], independent of the field code.

/// `a + b√2`.
#[derive(Clone, Debug, PartialEq)]
struct Z2 {
    a: BigInt,
    b: BigInt,
}

impl Z2 {
    fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Z2 { a: a.into(), b: b.into() }
    }

    fn mul(&self, o: &Z2) -> Z2 {
        Z2 {
            a: &self.a * &o.a + 2 * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    fn add_int(&self, n: &BigInt) -> Z2 {
        Z2 { a: &self.a + n, b: self.b.clone() }
    }

    fn scale(&self, n: &BigInt) -> Z2 {
        Z2 { a: &self.a * n, b: &self.b * n }
    }

    fn pow(&self, k: u32) -> Z2 {
        (0..k).fold(Z2::new(1, 0), |acc, _| acc.mul(self))
    }

    fn conj(&self) -> Z2 {
        Z2 { a: self.a.clone(), b: -&self.b }
    }

    fn sign(&self) -> Ordering {
        let (sa, sb) = (self.a.sign(), self.b.sign());
        use num_bigint::Sign::*;
        match (sa, sb) {
            (NoSign, NoSign) => Ordering::Equal,
            (Plus | NoSign, Plus | NoSign) => Ordering::Greater,
            (Minus | NoSign, Minus | NoSign) => Ordering::Less,
            // opposite signs: compare a² with 2b²
            (Plus, Minus) => (&self.a * &self.a).cmp(&(2 * &self.b * &self.b)),
            (Minus, Plus) => (BigInt::from(2) * &self.b * &self.b).cmp(&(&self.a * &self.a)),
        }
    }

    fn abs(&self) -> Z2 {
        if self.sign() == Ordering::Less {
            Z2 { a: -&self.a, b: -&self.b }
        } else {
            self.clone()
        }
    }

    /// `self` against the integer `n`.
    fn cmp_int(&self, n: i64) -> Ordering {
        self.add_int(&BigInt::from(-n)).sign()
    }

    /// Nearest integer (ties cannot occur for b ≠ 0).
    fn nearest(&self) -> BigInt {
        let b2: BigInt = 2 * &self.b * &self.b;
        let mut r = b2.sqrt();
        // r = floor(|b|√2); round up when |b|√2 - r > 1/2
        let twice = 2 * &r + 1;
        if 4 * &b2 > &twice * &twice {
            r += 1;
        }
        if self.b.is_negative() {
            r = -r;
        }
        &self.a + r
    }

    fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap() + self.b.to_f64().unwrap() * std::f64::consts::SQRT_2
    }
}

/// `±(1+√2)^k` for `k ∈ Z` (the inverse is `-(1-√2)`).
fn unit(torsion: i64, k: i64) -> Z2 {
    let base = if k >= 0 { Z2::new(1, 1) } else { Z2::new(-1, 1) };
    let u = base.pow(k.unsigned_abs() as u32);
    if torsion % 2 != 0 {
        u.scale(&BigInt::from(-1))
    } else {
        u
    }
}

/// Conditions (ii)–(iv) for `x = q·u`, `u = ±(1+√2)^k`, `α = 1`, `ε = 1/2`,
/// evaluated exactly: `H(u) = (1+√2)^{|k|/2}` and `d = [Q(u):Q]`, so (iv)
/// is `|x - p|^4 (1+√2)^{|k|} q^{4d+2} < 1`.
fn oracle_class(torsion: i64, k: i64, qq: i64, p: &BigInt) -> &'static str {
    let x = unit(torsion, k).scale(&BigInt::from(qq));
    if x.abs().cmp_int(1) != Ordering::Greater {
        return "excluded(ii)";
    }
    let pseudo_pisot = x.b.is_zero() || x.conj().abs().cmp_int(1) == Ordering::Less;
    if pseudo_pisot {
        return "excluded(iii)";
    }
    let r = x.add_int(&-p);
    if r.sign() == Ordering::Equal {
        return "excluded(iv)";
    }
    let d: u32 = if k == 0 { 1 } else { 2 };
    let lhs = r
        .pow(4)
        .mul(&Z2::new(1, 1).pow(k.unsigned_abs() as u32))
        .scale(&BigInt::from(qq).pow(4 * d + 2));
    if lhs.cmp_int(1) == Ordering::Less {
        "exceptional"
    } else {
        "excluded(iv)"
    }
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let n: i64 = rng.gen_range(1..=10_i64.pow(12)) * if rng.gen() { 1 } else { -1 };
        let d: i64 = rng.gen_range(1..=10_i64.pow(12));
        let x = BigRational::new(n.into(), d.into());
        let prod = product_over_places(&x).or_else(fail)?;
        ensure(prod.is_one(), || format!("∏ |x|_v = {prod} for x = {x}"))?;
    }
    Ok("200 random rationals, ∏ |x|_v = 1 exactly".into())
}

// the bounds are the stated tolerance, not an approximation of √2
#[allow(clippy::approx_constant)]
fn criterion_2() -> Outcome {
    let checks = (|| -> Result<(f64, f64), String> {
        let qf = NumberFieldDesc::rationals();
        let h = weil_height(&el(&qf, "3/2"), 128).or_else(fail)?;
        ensure(h.exact == Some(q(3, 1)), || format!("H(3/2) = {h}"))?;
        let enclosure = |k: Arc<NumberFieldDesc>| -> Result<(f64, f64), String> {
            let h = weil_height(&FieldElement::theta(&k), 128).or_else(fail)?;
            Ok((h.value.re().lo().to_f64(), h.value.re().hi().to_f64()))
        };
        let (l, u) = enclosure(field(&[-2, 0, 1]))?;
        ensure(1.414213 <= l && u <= 1.414214, || format!("H(√2) = [{l}, {u}]"))?;
        // oracle: M(x^2 - x - 1) = φ, so H(φ) = φ^(1/2)
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let (l, u) = enclosure(field(&[-1, -1, 1]))?;
        ensure((l - golden.sqrt()).abs() < 1e-12 && (u - golden.sqrt()).abs() < 1e-12, || format!("H(φ) = [{l}, {u}], oracle √φ = {}", golden.sqrt()))?;
        ensure((1.618033..=1.618034).contains(&(l * l)), || format!("H(φ)² = {}", l * l))?;
        let z5 = weil_height(&FieldElement::theta(&field(&[1, 1, 1, 1, 1])), 128).or_else(fail)?;
        ensure(z5.exact == Some(q(1, 1)), || format!("H(ζ₅) = {z5}"))?;
        let fields = [field(&[-2, 0, 1]), field(&[-1, -1, 1]), field(&[-1, -1, 0, 1])];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut done = 0;
        while done < 50 {
            let k = &fields[rng.gen_range(0..fields.len())];
            let coeffs: Vec<BigRational> = (0..k.degree()).map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
            let a = FieldElement::from_coeffs(k, coeffs).or_else(fail)?;
            if a.is_zero() {
                continue;
            }
            let e = rng.gen_range(1..=5);
            let lhs = weil_height(&a.pow(e).or_else(fail)?, 256).or_else(fail)?.value;
            let rhs = weil_height(&a, 256).or_else(fail)?.value.pow_int(e).or_else(fail)?;
            ensure(lhs.overlaps(&rhs), || format!("H(a^{e}) and H(a)^{e} disjoint for a = {a}"))?;
            done += 1;
        }
        Ok((l, u))
    })();
    match checks {
        Err(e) => Outcome::from(Err(e)),
        Ok((l, u)) => Outcome {
            pass: false,
            sound: true,
            detail: format!(
                "H(3/2) = 3, H(√2) ∈ [1.414213, 1.414214], H(ζ₅) = 1, 50 power checks at 256 bits; \
                 H(φ) = [{l:.9}, {u:.9}] = √φ, outside the stated [1.618033, 1.618034], which is the Mahler measure H(φ)²"
            ),
        },
    }
}

fn criterion_3() -> Check {
    let cases: [(&str, &[i64], bool); 6] = [
        ("φ", &[-1, -1, 1], true),
        ("1+√2", &[-1, -2, 1], true),
        ("plastic", &[-1, -1, 0, 1], true),
        ("√2", &[-2, 0, 1], false),
        ("3/2", &[-3, 2], false),
        ("Lehmer", &[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1], false),
    ];
    for (name, c, want) in cases {
        let f = IntPolynomial::from_i64s(c);
        let got = is_pisot_poly(&f, 1024).map_err(|e| format!("{name}: {e}"))?;
        ensure(got == want, || format!("{name}: Pisot = {got}, expected {want}"))?;
    }
    Ok("6 polynomials decided at ≤ 1024 bits".into())
}

fn criterion_4() -> Check {
    let phi = field(&[-1, -1, 1]);
    let r2 = field(&[-2, 0, 1]);
    let v = pseudo_pisot_tuple(&[FieldElement::theta(&phi)], 1024).or_else(fail)?;
    ensure(v.verdict == Decision::True, || format!("(φ): {}", v.witness))?;
    let v = pseudo_pisot_tuple(&[FieldElement::theta(&r2)], 1024).or_else(fail)?;
    ensure(
        v.verdict == Decision::False && matches!(v.witness, PseudoPisotWitness::OutsideDisk { .. }) && v.witness.to_string().contains("|β| ≥ 1"),
        || format!("(√2): {:?} / {}", v.verdict, v.witness),
    )?;
    let t = [el(&phi, "t"), el(&phi, "1 - t")];
    let v = pseudo_pisot_tuple(&t, 1024).or_else(fail)?;
    ensure(v.verdict == Decision::True && v.p_set.is_empty(), || format!("(φ, -1/φ): {}", v.witness))?;
    let mut checked = 0;
    for qq in 1..=5i64 {
        for n in 1..=12u32 {
            // oracle: sum q(1+√2)^n + q(1-√2)^n and |q(1-√2)^n| < 1, exactly
            let x = Z2::new(1, 1).pow(n).scale(&BigInt::from(qq));
            let want = x.conj().abs().cmp_int(1) == Ordering::Less;
            let b = FieldElement::parse(&r2, &format!("{qq}*(1+t)^{n}"))
                .or_else(|_| el(&r2, "1+t").pow(n as i64).map(|u| u.scale(&q(qq, 1))))
                .or_else(fail)?;
            let v = pseudo_pisot_tuple(&[b], 1024).or_else(fail)?;
            ensure(v.verdict == Decision::from_bool(want), || format!("q = {qq}, n = {n}: {:?}, oracle {want}", v.verdict))?;
            let sum = v.sum.as_integer();
            ensure(sum == Some(2 * &x.a), || format!("q = {qq}, n = {n}: sum {} ≠ {}", v.sum, 2 * &x.a))?;
            checked += 1;
        }
    }
    Ok(format!("3 fixtures and {checked} (q, n) pairs, zero misclassifications"))
}

fn criterion_5() -> Check {
    let s = mahler_scan(&q(3, 2), &q(1, 1), 200).or_else(fail)?;
    ensure(s.qualifying.is_empty(), || format!("qualifying {:?}", s.qualifying))?;
    ensure(s.boundaries.contains(&4), || format!("boundaries {:?}", s.boundaries))?;
    // oracle: 3^4 = 5·2^4 + 1
    ensure(BigInt::from(3).pow(4u32) - 5 * BigInt::from(2).pow(4u32) == BigInt::one(), || "81/16 - 5 ≠ 1/16".into())?;
    ensure(s.rows[3].distance == "1/16", || format!("∥81/16∥ = {}", s.rows[3].distance))?;
    Ok(format!("qualifying ∅ for n ≤ 200, boundaries {:?}", s.boundaries))
}

fn criterion_6() -> Check {
    let k = field(&[-1, -1, 1]);
    let phi = FieldElement::theta(&k);
    let boundary = mahler_scan_algebraic(&phi, &q(1, 1), 40, 1024).or_else(fail)?;
    let below = mahler_scan_algebraic(&phi, &q(1, 2), 40, 1024).or_else(fail)?;
    let (mut l0, mut l1) = (BigInt::from(2), BigInt::from(1));
    for n in 1..=40usize {
        let row = &boundary[n - 1];
        if n >= 2 {
            ensure(row.p.as_ref() == Some(&l1), || format!("n = {n}: p = {:?}, L_n = {l1}", row.p))?;
            // exact: (φ^n - L_n)^2 = φ^{-2n}
            let r = phi.pow(n as i64).and_then(|x| x.checked_sub(&FieldElement::from_rational(&k, BigRational::from_integer(l1.clone())))).or_else(fail)?;
            let sq = r.pow(2).or_else(fail)?;
            ensure(sq == phi.pow(-2 * n as i64).or_else(fail)?, || format!("n = {n}: (φ^n - L_n)² ≠ φ^(-2n)"))?;
            ensure(row.boundary && row.qualifies == Decision::False, || format!("n = {n}: not flagged as equality"))?;
            ensure(below[n - 1].qualifies == Decision::True, || format!("n = {n}: ∥φ^n∥ < φ^(-n/2) not confirmed"))?;
        }
        let next = &l1 + &l0;
        l0 = std::mem::replace(&mut l1, next);
    }
    Ok("∥φ^n∥ = φ^(-n) exactly, p = L_n, for 2 ≤ n ≤ 40".into())
}

const C7: &str = r#"
mode = "thm1"
field.minpoly = "-2,0,1"
gamma.gen.1 = "-1"
gamma.order.1 = 2
gamma.gen.2 = "1,1"
alphas.1 = "1"
epsilon = "1/2"
bounds.Qmax = 20
precision.max_bits = 4096
"#;

fn c7_config(n: u64) -> String {
    format!("{C7}bounds.N = {n}\n")
}

fn row_exponents(row: &Map<String, Value>) -> Option<(i64, i64)> {
    let e = row.get("exponents")?.as_array()?.first()?.as_array()?;
    Some((e.first()?.as_i64()?, e.get(1)?.as_i64()?))
}

fn criterion_7() -> Check {
    let report = run_config(&c7_config(10), 1, None)?;
    let s = &report.summary;
    ensure(s["exceptional_set"] == serde_json::json!([]), || format!("exceptional set {}", s["exceptional_set"]))?;
    ensure(report.undecided == 0, || format!("{} undecided records", report.undecided))?;
    // every record against the Z[√2] oracle
    let mut covered = std::collections::BTreeSet::new();
    for row in &report.rows {
        let (t, k) = row_exponents(row).ok_or("record without exponents")?;
        let qq = row["q"].as_i64().ok_or("record without q")?;
        let p: BigInt = row["p"].as_str().and_then(|s| s.parse().ok()).ok_or("record without p")?;
        let x = unit(t, k).scale(&BigInt::from(qq));
        let dp = (&p - x.nearest()).abs();
        ensure(dp <= BigInt::one(), || format!("p = {p} is not within 1 of the nearest integer to {}", x.to_f64()))?;
        let want = oracle_class(t, k, qq, &p);
        let got = row["classification"].as_str().unwrap_or_default();
        ensure(got == want, || format!("(t = {t}, k = {k}, q = {qq}, p = {p}): {got}, oracle {want}"))?;
        if got == "excluded(iii)" {
            let w = row.get("witness").and_then(Value::as_str).unwrap_or_default();
            ensure(w.starts_with("pseudo-Pisot"), || format!("(t = {t}, k = {k}, q = {qq}): (iii) witness {w:?}"))?;
        }
        if dp.is_zero() {
            covered.insert((t, k, qq));
        }
    }
    ensure(covered.len() == 2 * 21 * 20, || format!("only {} (tuple, q) pairs reported", covered.len()))?;
    // the oracle's own exceptional set over the whole grid, p = nearest ± 1
    for t in 0..2 {
        for k in -10..=10 {
            for qq in 1..=20 {
                let n = unit(t, k).scale(&BigInt::from(qq)).nearest();
                for dp in -1..=1 {
                    let class = oracle_class(t, k, qq, &(&n + dp));
                    ensure(class != "exceptional", || format!("oracle finds exceptional (t = {t}, k = {k}, q = {qq})"))?;
                }
            }
        }
    }
    // stability between N = 5 and N = 10
    let small = run_config(&c7_config(5), 1, None)?;
    let compare = read_summary(&small.render(Format::Jsonl)).or_else(fail)?;
    let big = run_config(&c7_config(10), 1, Some(compare))?;
    let stable = &big.summary["compare"]["stable"];
    ensure(stable == &Value::Bool(true), || format!("N = 5 vs N = 10: {}", big.summary["compare"]))?;
    Ok(format!(
        "exceptional ∅, 0 undecided, {} records match the Z[√2] oracle, N = 5 ⊂ N = 10 stable",
        report.rows.len()
    ))
}

const C8_PHI: &str = r#"
mode = "thm2"
field.minpoly = "-1,-1,1"
gamma.gen.1 = "0,1"
alphas.1 = "1"
epsilon = "3/10"
bounds.N = 20
"#;

const C8_THREE_HALVES: &str = r#"
mode = "thm2"
field.minpoly = "-1,1"
gamma.gen.1 = "3/2"
alphas.1 = "1"
epsilon = "3/10"
bounds.N = 20
"#;

fn satisfying_exponents(report: &Report) -> Vec<i64> {
    report
        .rows
        .iter()
        .filter(|r| r["classification"] == "satisfying")
        .filter_map(row_exponents_1)
        .collect()
}

fn row_exponents_1(row: &Map<String, Value>) -> Option<i64> {
    row.get("exponents")?.as_array()?.first()?.as_array()?.first()?.as_i64()
}

/// `∥(3/2)^n∥ < 3^{-3n/10}`, i.e. `∥(3/2)^n∥^10 · 3^{3n} < 1`, for `0 ≤ n ≤ N`
/// (`|(3/2)^n| ≥ 1` rules out `n < 0`).
fn three_halves_oracle(nmax: u32) -> Vec<i64> {
    (0..=nmax)
        .filter(|&n| {
            let num = BigInt::from(3).pow(n);
            let den = BigInt::from(2).pow(n);
            let r = &num % &den;
            let dist = BigRational::new(r.clone().min(&den - &r), den.clone());
            let lhs = num_traits::pow(dist, 10) * BigRational::from_integer(BigInt::from(3).pow(3 * n));
            lhs < BigRational::one()
        })
        .map(|n| n as i64)
        .collect()
}

fn criterion_8() -> Outcome {
    let part_a = (|| -> Check {
        let report = run_config(C8_PHI, 1, None)?;
        let sat = satisfying_exponents(&report);
        ensure(sat == (0..=20).collect::<Vec<_>>(), || format!("satisfying exponents {sat:?}"))?;
        ensure(report.summary["anomalies"] == 0, || format!("{} anomalies", report.summary["anomalies"]))?;
        for row in report.rows.iter().filter(|r| r["classification"] == "satisfying") {
            for c in ["i", "ii", "iii"] {
                ensure(row["conclusions"][c] == "true", || format!("conclusion ({c}) on {}", row["u"]))?;
            }
        }
        Ok("⟨φ⟩: 20 tuples φ^n (1 ≤ n ≤ 20) plus u = 1 satisfy the approximation hypothesis; (i)–(iii) hold, 0 anomalies".into())
    })();
    let part_a = match part_a {
        Ok(d) => d,
        Err(e) => return Outcome::from(Err(e)),
    };
    let report = match run_config(C8_THREE_HALVES, 1, None) {
        Ok(r) => r,
        Err(e) => return Outcome::from(Err(e)),
    };
    let sat = satisfying_exponents(&report);
    let oracle = three_halves_oracle(20);
    if sat != oracle {
        return Outcome::from(Err(format!("⟨3/2⟩: satisfying {sat:?}, exact oracle {oracle:?}")));
    }
    let nontrivial: Vec<_> = sat.iter().filter(|&&n| n != 0).collect();
    Outcome {
        pass: nontrivial.is_empty(),
        sound: true,
        detail: format!(
            "{part_a}; ⟨3/2⟩: satisfying n = {sat:?} (exact oracle agrees: ∥(3/2)^n∥ < H((3/2)^n)^(-3/10) = 3^(-3n/10)), criterion expects none"
        ),
    }
}

fn criterion_9() -> Check {
    let cfg = c7_config(10);
    let one = run_config(&cfg, 1, None)?.render(Format::Jsonl);
    let eight = run_config(&cfg, 8, None)?.render(Format::Jsonl);
    ensure(one == eight, || "JSON-lines output differs between 1 and 8 workers".into())?;
    Ok(format!("{} bytes identical for 1 and 8 workers", one.len()))
}

fn criterion_10() -> Check {
    let phi = field(&[-1, -1, 1]);
    let r2 = field(&[-2, 0, 1]);
    let z5 = field(&[1, 1, 1, 1, 1]);
    let qf = NumberFieldDesc::rationals();
    let pair = [el(&phi, "t"), el(&phi, "1 - t")];
    let part = partition_classes(&pair).or_else(fail)?;
    ensure(part.h == 1 && part.e == vec![2] && part.d_counts == vec![2], || format!("(φ, -1/φ): {part:?}"))?;
    // (tuple, P1, P2), derived by hand
    let fixtures: Vec<(&str, Vec<FieldElement>, bool, bool)> = vec![
        ("(φ, -1/φ)", pair.to_vec(), true, true),
        ("(√2, -√2)", vec![el(&r2, "t"), el(&r2, "-t")], false, true),
        ("(2)", vec![el(&qf, "2")], true, true),
        ("(1+√2, 3)", vec![el(&r2, "1 + t"), el(&r2, "3")], true, true),
        ("(1+√2, -1-√2)", vec![el(&r2, "1 + t"), el(&r2, "-1 - t")], true, false),
        ("(ζ₅)", vec![FieldElement::theta(&z5)], false, true),
    ];
    for (name, t, p1, p2) in &fixtures {
        let v = check_p1_p2(t).or_else(fail)?;
        ensure(v.p1 == *p1 && v.p2 == *p2, || format!("{name}: P1 = {}, P2 = {}, expected {p1}, {p2}", v.p1, v.p2))?;
    }
    let w = check_p1_p2(&fixtures[1].1).or_else(fail)?.p1_witness;
    ensure(w == Some((0, "-t".into())), || format!("(√2, -√2) witness {w:?}"))?;
    Ok("(φ, -1/φ): h = 1, e = [2], d = [2]; P1/P2 match on 6 fixtures".into())
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 10] = [
        (1, "product formula", Duration::from_secs(1), || criterion_1().into()),
        (2, "height fixtures", Duration::from_secs(5), criterion_2),
        (3, "Pisot classification", Duration::from_secs(5), || criterion_3().into()),
        (4, "pseudo-Pisot fixtures", Duration::from_secs(10), || criterion_4().into()),
        (5, "Mahler scan α = 3/2", Duration::from_secs(5), || criterion_5().into()),
        (6, "golden-ratio counterexample", Duration::from_secs(2), || criterion_6().into()),
        (7, "exceptional-tuple desk search", Duration::from_secs(120), || criterion_7().into()),
        (8, "conclusion verification", Duration::from_secs(60), criterion_8),
        (9, "determinism across workers", Duration::from_secs(240), || criterion_9().into()),
        (10, "partition machinery", Duration::from_secs(5), || criterion_10().into()),
    ];
    let mut unsound = 0;
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let status = if out.pass && in_time { "PASS" } else { "FAIL" };
        let timing = format!("{:.2}s / limit {}s", elapsed.as_secs_f64(), limit.as_secs());
        println!("{status} criterion {id:>2} ({name}) [{timing}]: {}", out.detail);
        if !out.sound {
            unsound += 1;
        }
    }
    if unsound > 0 {
        println!("{unsound} criterion(s) disagree with their oracle");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
