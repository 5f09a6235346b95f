//! Verification of the conclusions drawn from
//! `∥Σ α_i u_i∥ < (∏ H(u_i))^{-ε₁}` over tuples with `|u_i| ≥ 1`
//! satisfying (P1), (P2) and the ratio condition.
//!
//! The conclusions are asserted along an infinite subfamily only, so a
//! failed conclusion on one tuple is reported as an anomaly with its
//! witness rather than treated as an error.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::eval::{interval_decimal, linear_form, modulus_below, nearest_integer, Bound, HeightCache};
use super::report::{Classification, Report, ReportRecord, TupleCandidate, TUPLE_COLUMNS};
use super::{materialize_box, pool, RunOptions};
use crate::certify::{compare_modulus_one, Decision};
use crate::classify::{check_p1_p2, is_root_of_unity, modulus_ge_one, partition_classes, pseudo_pisot_tuple};
use crate::error::{Error, Result};
use crate::exact::{apply_galois, FieldElement};
use crate::gamma::{enumerate, galois_stability_report, ratio_filter, FilterOutcome, GroupElement, TupleFamilyFilter};
use crate::harness::config::{Mode, RunConfig};
use crate::heights::is_algebraic_integer;

pub const HYPOTHESES: &[&str] = &["ge1", "i", "P1", "P2", "approx"];

/// `σ(α_i u_i) = α_j u_j` held on a satisfying tuple, with `σ(u_i)/u_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
struct Relation {
    sigma: usize,
    i: usize,
    j: usize,
    ratio: String,
}

struct Evaluated {
    record: ReportRecord,
    relations: Vec<Relation>,
}

/// Runs the verification described by `cfg` (mode `thm2`).
pub fn thm2_verify(cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    if cfg.mode != Mode::Thm2 {
        return Err(Error::Config {
            key: "mode".into(),
            msg: format!("verify needs mode thm2, got {}", cfg.mode),
        });
    }
    let (field, desc, alphas) = cfg.problem()?;
    field.require_galois()?;
    let max_bits = opts.max_bits.unwrap_or(cfg.max_bits);
    let stability = galois_stability_report(desc, cfg.stability_radius)?;
    let en = enumerate(desc, cfg.bound_n, cfg.m())?;
    let pool = pool(opts.jobs)?;

    let (values, ge1): (Vec<FieldElement>, Vec<Decision>) = pool.install(|| -> Result<_> {
        let values = materialize_box(desc, &en)?;
        let ge1 = values.par_iter().map(|u| modulus_ge_one(u, max_bits)).collect();
        Ok((values, ge1))
    })?;

    // the family condition only concerns tuples with every |u_i| ≥ 1
    let mut filter = TupleFamilyFilter::with_mode(desc, cfg.stability_mode, Some(&stability));
    let mut gate = Vec::with_capacity(en.len() as usize);
    for (i, t) in en.iter().enumerate() {
        let idx = en.tuple_indices(i as u64);
        let g = idx
            .iter()
            .fold(Decision::True, |acc, &k| acc.and(ge1[k as usize]));
        let f = (g == Decision::True).then(|| ratio_filter(&t, &mut filter));
        gate.push((g, f));
    }

    let evaluated: Vec<Evaluated> = pool.install(|| {
        (0..en.len())
            .into_par_iter()
            .map(|i| {
                let idx = en.tuple_indices(i);
                let us: Vec<FieldElement> = idx.iter().map(|&k| values[k as usize].clone()).collect();
                let (g, f) = &gate[i as usize];
                eval_tuple(cfg, alphas, max_bits, &en.tuple(i), &us, *g, f.as_ref())
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut report = Report::new("thm2", cfg.echo(), TUPLE_COLUMNS);
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut satisfying = Vec::new();
    let mut anomalies = 0usize;
    let mut conclusion_counts: BTreeMap<String, BTreeMap<&'static str, usize>> = BTreeMap::new();
    let mut relations: BTreeMap<(usize, usize, usize), Vec<String>> = BTreeMap::new();
    for e in &evaluated {
        let r = &e.record;
        report.push_record(r);
        *counts.entry(r.classification.to_string()).or_default() += 1;
        if r.classification == Classification::Satisfying {
            satisfying.push(json!(r.candidate.exponents));
            anomalies += r.anomalies.len();
            for (c, d) in &r.conclusions {
                *conclusion_counts.entry(c.clone()).or_default().entry(d.as_str()).or_default() += 1;
            }
            for rel in &e.relations {
                relations.entry((rel.sigma, rel.i, rel.j)).or_default().push(rel.ratio.clone());
            }
        }
    }
    let moreover: Vec<Value> = relations
        .into_iter()
        .map(|((sigma, i, j), ratios)| {
            let mut distinct = ratios.clone();
            distinct.sort();
            distinct.dedup();
            json!({
                "sigma": sigma,
                "i": i + 1,
                "j": j + 1,
                "tuples": ratios.len(),
                "constant": distinct.len() == 1,
                "ratios": distinct,
            })
        })
        .collect();
    let s = &mut report.summary;
    s.insert("N".into(), json!(cfg.bound_n));
    s.insert("m".into(), json!(cfg.m()));
    s.insert("epsilon1".into(), json!(cfg.epsilon.to_string()));
    s.insert("max_bits".into(), json!(max_bits));
    s.insert("stability_mode".into(), json!(format!("{:?}", cfg.stability_mode)));
    s.insert("grid_tuples".into(), json!(en.len()));
    s.insert("counts".into(), json!(counts));
    s.insert("satisfying".into(), json!(satisfying.len()));
    s.insert("satisfying_set".into(), Value::Array(satisfying));
    s.insert("conclusions".into(), json!(conclusion_counts));
    s.insert("anomalies".into(), json!(anomalies));
    s.insert("moreover".into(), Value::Array(moreover));
    s.insert(
        "galois_stability".into(),
        json!({ "radius": stability.radius, "all_resolved": stability.all_resolved() }),
    );
    Ok(report)
}

fn eval_tuple(
    cfg: &RunConfig,
    alphas: &[FieldElement],
    max_bits: u32,
    tuple: &[GroupElement],
    us: &[FieldElement],
    ge1: Decision,
    filter: Option<&FilterOutcome>,
) -> Result<Evaluated> {
    let heights = HeightCache::new(us);
    let mut verdicts = BTreeMap::new();
    verdicts.insert("ge1".to_string(), ge1);
    let filter_verdict = match filter {
        Some(o) => Decision::from_bool(o.admitted()),
        None => Decision::Undecided,
    };
    verdicts.insert("i".to_string(), filter_verdict);
    let props = check_p1_p2(us)?;
    verdicts.insert("P1".to_string(), Decision::from_bool(props.p1));
    verdicts.insert("P2".to_string(), Decision::from_bool(props.p2));

    let x = linear_form(alphas, us, &BigRational::one());
    let bound = Bound {
        heights: &heights,
        epsilon: &cfg.epsilon,
        q_abs: 1.into(),
        q_exp: 0,
    };
    let p = nearest_integer(&x, max_bits)?;
    let (h11, lhs, rhs) = match &p {
        Some(p) => {
            let y = x.checked_sub(&FieldElement::from_rational(x.field(), BigRational::from_integer(p.clone())))?;
            let t = modulus_below(&y, &bound, max_bits)?;
            (t.verdict, t.lhs.to_decimal(), interval_decimal(&t.rhs))
        }
        None => (Decision::Undecided, "undecided".into(), interval_decimal(&bound.enclosure(64)?)),
    };
    verdicts.insert("approx".to_string(), h11);
    let classification = Classification::from_verdicts(&verdicts, HYPOTHESES, Classification::Satisfying);
    let witness = match &classification {
        Classification::Excluded(c) if c == "i" => match filter {
            Some(FilterOutcome::Reject { i1, i2 }) => Some(format!(
                "u_{}/u_{} repeats the ratio of an earlier tuple",
                i1 + 1,
                i2 + 1
            )),
            _ => None,
        },
        Classification::Excluded(c) if c == "P1" => props
            .p1_witness
            .as_ref()
            .map(|(i, rho)| format!("conjugate {rho} of u_{} differs from it by a root of unity", i + 1)),
        Classification::Excluded(c) if c == "P2" => props
            .p2_witness
            .map(|(i, j)| format!("u_{} ∼ u_{} but they are not conjugate", i + 1, j + 1)),
        _ => None,
    };
    let partition = if props.p2 { Some(partition_classes(us)?) } else { None };

    let mut conclusions = BTreeMap::new();
    let mut anomalies = Vec::new();
    let mut relations = Vec::new();
    if classification == Classification::Satisfying {
        conclude(alphas, us, max_bits, &mut conclusions, &mut anomalies, &mut relations)?;
    }
    Ok(Evaluated {
        record: ReportRecord {
            candidate: TupleCandidate {
                exponents: tuple.iter().map(|g| g.exponents.clone()).collect(),
                u: us.iter().map(|u| u.to_string()).collect(),
                q: None,
                p: p.map(|p| p.to_string()),
                d: None,
                verdicts,
                lhs,
                rhs,
            },
            classification,
            heights: heights.display()?,
            partition,
            witness,
            conclusions,
            anomalies,
        },
        relations,
    })
}

/// Conclusions (i)–(iv) on a satisfying tuple.
fn conclude(
    alphas: &[FieldElement],
    us: &[FieldElement],
    max_bits: u32,
    conclusions: &mut BTreeMap<String, Decision>,
    anomalies: &mut Vec<String>,
    relations: &mut Vec<Relation>,
) -> Result<()> {
    let field = us[0].field();
    let maps = field.require_galois()?.len();

    let mut c1 = Decision::True;
    for (i, u) in us.iter().enumerate() {
        if !is_algebraic_integer(u) {
            c1 = Decision::False;
            anomalies.push(format!("(i) u_{} = {u} is not an algebraic integer", i + 1));
        }
    }
    conclusions.insert("i".into(), c1);

    let au: Vec<FieldElement> = alphas.iter().zip(us).map(|(a, u)| a * u).collect();
    let mut c2 = Decision::True;
    let mut c4 = Decision::True;
    for sigma in 0..maps {
        for i in 0..us.len() {
            let su = apply_galois(sigma, &us[i])?;
            let sau = apply_galois(sigma, &au[i])?;
            let mut related = false;
            for j in 0..us.len() {
                let ratio = su.checked_div(&us[j])?;
                let in_mu = is_root_of_unity(&ratio)?;
                related |= in_mu;
                let equal = sau == au[j];
                if in_mu && !equal {
                    c4 = Decision::False;
                    anomalies.push(format!(
                        "(iv) σ_{sigma}(u_{})/u_{} ∈ μ but σ_{sigma}(α_{} u_{}) = {sau} ≠ α_{} u_{} = {}",
                        i + 1,
                        j + 1,
                        i + 1,
                        i + 1,
                        j + 1,
                        j + 1,
                        au[j]
                    ));
                }
                if equal {
                    relations.push(Relation {
                        sigma,
                        i,
                        j,
                        ratio: ratio.to_string(),
                    });
                }
            }
            if !related {
                match compare_modulus_one(&su, max_bits) {
                    Ok(std::cmp::Ordering::Less) => {}
                    Ok(_) => {
                        c2 = c2.and(Decision::False);
                        anomalies.push(format!("(ii) |σ_{sigma}(u_{})| = |{su}| ≥ 1", i + 1));
                    }
                    Err(Error::Undecided(_)) => c2 = c2.and(Decision::Undecided),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    conclusions.insert("ii".into(), c2);

    let pp = pseudo_pisot_tuple(&au, max_bits)?;
    if pp.verdict == Decision::False {
        anomalies.push(format!("(iii) (α_i u_i) is not pseudo-Pisot: {}", pp.witness));
    }
    conclusions.insert("iii".into(), pp.verdict);
    conclusions.insert("iv".into(), c4);
    Ok(())
}
