//! Exceptional-tuple search for the rational approximation of
//! `Σ α_i q u_i` by integers.
//!
//! A record `(u, q, p)` is *exceptional* when
//! (i) `u` is admitted by the ratio filter,
//! (ii) `max |α_i q u_i| > 1`,
//! (iii) `(α_1 q u_1, …, α_m q u_m)` is not pseudo-Pisot and
//! (iv) `0 < |Σ α_i q u_i - p| < 1 / ((∏ H(u_i))^ε |q|^{md+ε})`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::eval::{
    interval_decimal, linear_form, modulus_below, nearest_integer, subfield_degree, Bound, HeightCache,
};
use super::report::{Classification, Report, ReportRecord, TupleCandidate, TUPLE_COLUMNS};
use super::{materialize_box, pool, RunOptions};
use crate::certify::{Decision, Dyadic};
use crate::classify::{modulus_gt_one, pseudo_pisot_tuple};
use crate::error::{Error, Result};
use crate::exact::FieldElement;
use crate::gamma::{enumerate, galois_stability_report, ratio_filter, FilterOutcome, GroupDesc, TupleFamilyFilter};
use crate::harness::config::{Mode, RunConfig};

pub const CONDITIONS: &[&str] = &["i", "ii", "iii", "iv"];

struct Ctx<'a> {
    cfg: &'a RunConfig,
    alphas: &'a [FieldElement],
    max_bits: u32,
}

/// Runs the search described by `cfg` (mode `thm1`).
pub fn thm1_search(cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    if cfg.mode != Mode::Thm1 {
        return Err(Error::Config {
            key: "mode".into(),
            msg: format!("search needs mode thm1, got {}", cfg.mode),
        });
    }
    let (field, desc, alphas) = cfg.problem()?;
    field.require_galois()?;
    let max_bits = opts.max_bits.unwrap_or(cfg.max_bits);
    let stability = galois_stability_report(desc, cfg.stability_radius)?;
    let en = enumerate(desc, cfg.bound_n, cfg.m())?;

    // admission is sequential and canonical
    let mut filter = TupleFamilyFilter::with_mode(desc, cfg.stability_mode, Some(&stability));
    let outcomes: Vec<FilterOutcome> = en.iter().map(|t| ratio_filter(&t, &mut filter)).collect();

    let ctx = Ctx { cfg, alphas, max_bits };
    let records: Vec<Vec<ReportRecord>> = pool(opts.jobs)?.install(|| -> Result<_> {
        let values = materialize_box(desc, &en)?;
        (0..en.len())
            .into_par_iter()
            .map(|i| {
                let idx = en.tuple_indices(i);
                let us: Vec<FieldElement> = idx.iter().map(|&k| values[k as usize].clone()).collect();
                eval_tuple(&ctx, &en.tuple(i), &us, &outcomes[i as usize])
            })
            .collect()
    })?;

    let mut report = Report::new("thm1", cfg.echo(), TUPLE_COLUMNS);
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut exceptional = Vec::new();
    for r in records.iter().flatten() {
        report.push_record(r);
        *counts.entry(r.classification.to_string()).or_default() += 1;
        if r.classification == Classification::Exceptional {
            exceptional.push(json!({
                "exponents": r.candidate.exponents,
                "q": r.candidate.q,
                "p": r.candidate.p,
            }));
        }
    }
    let admitted = outcomes.iter().filter(|o| o.admitted()).count();
    let s = &mut report.summary;
    s.insert("N".into(), json!(cfg.bound_n));
    s.insert("Qmax".into(), json!(cfg.q_max));
    s.insert("m".into(), json!(cfg.m()));
    s.insert("epsilon".into(), json!(cfg.epsilon.to_string()));
    s.insert("max_bits".into(), json!(max_bits));
    s.insert("stability_mode".into(), json!(format!("{:?}", cfg.stability_mode)));
    s.insert("grid_tuples".into(), json!(en.len()));
    s.insert("admitted_tuples".into(), json!(admitted));
    s.insert("counts".into(), json!(counts));
    s.insert("exceptional".into(), json!(exceptional.len()));
    s.insert("exceptional_set".into(), Value::Array(exceptional.clone()));
    s.insert(
        "galois_stability".into(),
        json!({
            "radius": stability.radius,
            "all_resolved": stability.all_resolved(),
            "entries": stability.entries,
        }),
    );
    if let Some(prev) = &opts.compare {
        s.insert("compare".into(), compare_exceptional(desc, cfg, &exceptional, prev)?);
    }
    Ok(report)
}

fn eval_tuple(
    ctx: &Ctx<'_>,
    tuple: &[crate::gamma::GroupElement],
    us: &[FieldElement],
    outcome: &FilterOutcome,
) -> Result<Vec<ReportRecord>> {
    let cfg = ctx.cfg;
    let m = us.len();
    let d = subfield_degree(us, cfg.seed);
    let heights = HeightCache::new(us);
    let height_strings = heights.display()?;
    let exponents: Vec<Vec<i64>> = tuple.iter().map(|g| g.exponents.clone()).collect();
    let u_strings: Vec<String> = us.iter().map(|u| u.to_string()).collect();
    let filter_verdict = Decision::from_bool(outcome.admitted());
    let filter_witness = match outcome {
        FilterOutcome::Reject { i1, i2 } => Some(format!(
            "u_{}/u_{} repeats the ratio of an earlier tuple",
            i1 + 1,
            i2 + 1
        )),
        _ => None,
    };
    let half = Dyadic::one().mul_pow2(-1);

    let mut qs: Vec<i64> = Vec::new();
    for q in 1..=cfg.q_max as i64 {
        qs.push(q);
        if cfg.allow_negative_q {
            qs.push(-q);
        }
    }
    let mut out = Vec::new();
    for q in qs {
        let qr = BigRational::from_integer(q.into());
        let ys: Vec<FieldElement> = ctx
            .alphas
            .iter()
            .zip(us)
            .map(|(a, u)| (a * u).scale(&qr))
            .collect();
        let ii = ys
            .iter()
            .fold(Decision::False, |acc, y| acc.or(modulus_gt_one(y, ctx.max_bits)));
        let pp = pseudo_pisot_tuple(&ys, ctx.max_bits)?;
        let iii = pp.verdict.not();
        let x = linear_form(ctx.alphas, us, &qr);
        let bound = Bound {
            heights: &heights,
            epsilon: &cfg.epsilon,
            q_abs: BigInt::from(q).abs(),
            q_exp: (m * d) as u64,
        };
        let nearest = nearest_integer(&x, ctx.max_bits)?;
        // with a bound ≥ 1/2 the inequality may hold for p = nearest ± 1
        let wide = bound.enclosure(64)?.hi() >= &half;
        let ps: Vec<Option<BigInt>> = match &nearest {
            None => vec![None],
            Some(p) if wide => vec![Some(p - 1), Some(p.clone()), Some(p + 1)],
            Some(p) => vec![Some(p.clone())],
        };
        for p in ps {
            let (iv, lhs, rhs) = match &p {
                None => (
                    Decision::Undecided,
                    "undecided".to_string(),
                    interval_decimal(&bound.enclosure(64)?),
                ),
                Some(p) => {
                    let y = x.checked_sub(&FieldElement::from_rational(x.field(), BigRational::from_integer(p.clone())))?;
                    if y.is_zero() {
                        (Decision::False, "0".to_string(), interval_decimal(&bound.enclosure(64)?))
                    } else {
                        let t = modulus_below(&y, &bound, ctx.max_bits)?;
                        (t.verdict, t.lhs.to_decimal(), interval_decimal(&t.rhs))
                    }
                }
            };
            let mut verdicts = BTreeMap::new();
            verdicts.insert("i".to_string(), filter_verdict);
            verdicts.insert("ii".to_string(), ii);
            verdicts.insert("iii".to_string(), iii);
            verdicts.insert("iv".to_string(), iv);
            let mut classification =
                Classification::from_verdicts(&verdicts, CONDITIONS, Classification::Exceptional);
            let mut anomalies = Vec::new();
            if classification == Classification::Exceptional {
                let p = p.clone().expect("decided");
                let y = x.checked_sub(&FieldElement::from_rational(x.field(), BigRational::from_integer(p)))?;
                let again = modulus_below(&y, &bound, ctx.max_bits.saturating_mul(2))?;
                if again.verdict != Decision::True {
                    anomalies.push("(iv) did not re-verify at doubled precision".to_string());
                    classification = Classification::Undecided;
                }
            }
            let witness = match &classification {
                Classification::Excluded(c) if c == "i" => filter_witness.clone(),
                Classification::Excluded(c) if c == "iii" => Some(format!(
                    "{}; P = {{{}}}; sum = {}",
                    pp.witness,
                    pp.p_set.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", "),
                    pp.sum
                )),
                Classification::Excluded(c) if c == "iv" && lhs == "0" => Some("x = p exactly".into()),
                Classification::Undecided if iii == Decision::Undecided => Some(pp.witness.to_string()),
                _ => None,
            };
            out.push(ReportRecord {
                candidate: TupleCandidate {
                    exponents: exponents.clone(),
                    u: u_strings.clone(),
                    q: Some(q),
                    p: p.map(|p| p.to_string()),
                    d: Some(d),
                    verdicts,
                    lhs,
                    rhs,
                },
                classification,
                heights: height_strings.clone(),
                partition: None,
                witness,
                conclusions: BTreeMap::new(),
                anomalies,
            });
        }
    }
    Ok(out)
}

/// Compares the exceptional set with a previous run's summary on the
/// common box `sup-norm ≤ min(N, N')`, `|q| ≤ min(Qmax, Qmax')`.
fn compare_exceptional(desc: &GroupDesc, cfg: &RunConfig, current: &[Value], prev: &Value) -> Result<Value> {
    let bad = |what: &str| Error::BadInput(format!("comparison summary lacks `{what}`"));
    if prev.get("mode").and_then(Value::as_str) != Some("thm1") {
        return Err(Error::BadInput("comparison summary is not from a thm1 run".into()));
    }
    let prev_n = prev.get("N").and_then(Value::as_u64).ok_or_else(|| bad("N"))?;
    let prev_q = prev.get("Qmax").and_then(Value::as_u64).ok_or_else(|| bad("Qmax"))?;
    let prev_set = prev
        .get("exceptional_set")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("exceptional_set"))?;
    let n = cfg.bound_n.min(prev_n);
    let qmax = cfg.q_max.min(prev_q);
    let in_box = |v: &Value| -> bool {
        let q_ok = v["q"].as_i64().is_some_and(|q| q.unsigned_abs() <= qmax);
        let e_ok = v["exponents"].as_array().is_some_and(|rows| {
            rows.iter().all(|row| {
                row.as_array().is_some_and(|es| {
                    es.iter().enumerate().all(|(t, e)| {
                        let e = e.as_i64().unwrap_or(i64::MAX);
                        match desc.orders().get(t).copied().flatten() {
                            Some(_) => true,
                            None => e.unsigned_abs() <= n,
                        }
                    })
                })
            })
        });
        q_ok && e_ok
    };
    let key = |v: &Value| v.to_string();
    let mut a: Vec<String> = current.iter().filter(|v| in_box(v)).map(key).collect();
    let mut b: Vec<String> = prev_set.iter().filter(|v| in_box(v)).map(key).collect();
    a.sort();
    b.sort();
    Ok(json!({
        "previous_N": prev_n,
        "previous_Qmax": prev_q,
        "common_N": n,
        "common_Qmax": qmax,
        "current_in_common_box": a.len(),
        "previous_in_common_box": b.len(),
        "stable": a == b,
    }))
}
