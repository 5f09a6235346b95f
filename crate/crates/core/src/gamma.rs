//! The finitely generated group `Γ = ⟨γ_1, …, γ_s⟩ ⊂ K^×`: exponent
//! vectors, lexicographic box enumeration, the ratio filter for tuple
//! families and Galois-stability diagnostics.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{apply_galois, FieldElement, NumberFieldDesc};

/// Generators of `Γ`, optionally with declared finite orders (torsion).
#[derive(Clone, Debug)]
pub struct GroupDesc {
    field: Arc<NumberFieldDesc>,
    generators: Vec<FieldElement>,
    orders: Vec<Option<u64>>,
}

impl GroupDesc {
    /// `orders[t] = Some(r)` declares `γ_t` of exact order `r`; it is checked.
    pub fn new(generators: Vec<FieldElement>, orders: Vec<Option<u64>>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::BadInput("Γ needs at least one generator".into()))?;
        if orders.len() != generators.len() {
            return Err(Error::BadInput(format!(
                "{} generators but {} order declarations",
                generators.len(),
                orders.len()
            )));
        }
        let field = first.field().clone();
        for (t, g) in generators.iter().enumerate() {
            if !NumberFieldDesc::same_field(&field, g.field()) {
                return Err(Error::FieldMismatch);
            }
            if g.is_zero() {
                return Err(Error::BadInput(format!("generator γ_{} is zero", t + 1)));
            }
            if generators[..t].contains(g) {
                return Err(Error::BadInput(format!("generator γ_{} is a duplicate", t + 1)));
            }
            if let Some(r) = orders[t] {
                let ok = r >= 1
                    && g.pow(r as i64)?.is_one()
                    && (1..r).all(|k| r % k != 0 || !g.pow(k as i64).unwrap().is_one());
                if !ok {
                    return Err(Error::BadInput(format!(
                        "generator γ_{} = {g} does not have order {r}",
                        t + 1
                    )));
                }
            }
        }
        Ok(Self {
            field,
            generators,
            orders,
        })
    }

    /// Generators of infinite (undeclared) order.
    pub fn free(generators: Vec<FieldElement>) -> Result<Self> {
        let n = generators.len();
        Self::new(generators, vec![None; n])
    }

    pub fn field(&self) -> &Arc<NumberFieldDesc> {
        &self.field
    }

    pub fn generators(&self) -> &[FieldElement] {
        &self.generators
    }

    pub fn orders(&self) -> &[Option<u64>] {
        &self.orders
    }

    pub fn s(&self) -> usize {
        self.generators.len()
    }

    /// Exponent range of coordinate `t` in the box of sup-norm `n`:
    /// `[-n, n]` for free generators, `[0, r)` for order-`r` ones.
    pub fn coordinate_range(&self, t: usize, n: u64) -> Range<i64> {
        match self.orders[t] {
            Some(r) => 0..r as i64,
            None => -(n as i64)..n as i64 + 1,
        }
    }

    /// Canonical form: torsion exponents reduced into `[0, r)`.
    pub fn normalize(&self, g: &GroupElement) -> GroupElement {
        GroupElement {
            exponents: g
                .exponents
                .iter()
                .zip(&self.orders)
                .map(|(&e, o)| match o {
                    Some(r) => e.rem_euclid(*r as i64),
                    None => e,
                })
                .collect(),
        }
    }
}

/// Exponent vector `(n^(1), …, n^(s))` standing for `∏ γ_t^(n^(t))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupElement {
    pub exponents: Vec<i64>,
}

impl GroupElement {
    pub fn new(exponents: Vec<i64>) -> Self {
        Self { exponents }
    }

    pub fn identity(s: usize) -> Self {
        Self::new(vec![0; s])
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.exponents.iter().zip(&o.exponents).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.exponents.iter().zip(&o.exponents).map(|(a, b)| a - b).collect())
    }

    pub fn sup_norm(&self) -> u64 {
        self.exponents.iter().map(|e| e.unsigned_abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.exponents.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// `∏ γ_t^(n^(t))` exactly; negative powers go through the field inverse.
pub fn materialize(g: &GroupElement, desc: &GroupDesc) -> Result<FieldElement> {
    if g.exponents.len() != desc.s() {
        return Err(Error::BadInput(format!(
            "exponent vector has length {}, Γ has {} generators",
            g.exponents.len(),
            desc.s()
        )));
    }
    let mut acc = FieldElement::one(&desc.field);
    for (gamma, &e) in desc.generators.iter().zip(&g.exponents) {
        if e != 0 {
            acc = acc.checked_mul(&gamma.pow(e)?)?;
        }
    }
    Ok(acc)
}

/// `𝔫 = max |n_ij^(t)|` over all entries (absolute values).
pub fn frak_n(elements: &[GroupElement]) -> Result<u64> {
    if elements.is_empty() {
        return Err(Error::BadInput("𝔫 of an empty family".into()));
    }
    Ok(elements.iter().map(GroupElement::sup_norm).max().unwrap_or(0))
}

/// All `m`-tuples of exponent vectors in the box of sup-norm `N`, in
/// lexicographic order of the concatenated exponent vectors. Index `i`
/// decodes in mixed radix, so contiguous index ranges are disjoint shards
/// whose concatenation is the full stream.
#[derive(Clone, Debug)]
pub struct TupleEnumerator {
    ranges: Vec<Range<i64>>,
    m: usize,
    box_len: u64,
    total: u64,
}

/// The tuple stream over the box of sup-norm `bound`.
pub fn enumerate(desc: &GroupDesc, bound: u64, m: usize) -> Result<TupleEnumerator> {
    if m == 0 {
        return Err(Error::BadInput("tuple length m must be at least 1".into()));
    }
    let ranges: Vec<Range<i64>> = (0..desc.s()).map(|t| desc.coordinate_range(t, bound)).collect();
    let box_len = ranges
        .iter()
        .try_fold(1u64, |acc, r| acc.checked_mul((r.end - r.start) as u64))
        .ok_or_else(|| Error::BadInput("enumeration box too large".into()))?;
    let total = (0..m)
        .try_fold(1u64, |acc, _| acc.checked_mul(box_len))
        .ok_or_else(|| Error::BadInput("enumeration too large".into()))?;
    Ok(TupleEnumerator {
        ranges,
        m,
        box_len,
        total,
    })
}

impl TupleEnumerator {
    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of group elements in the box.
    pub fn box_len(&self) -> u64 {
        self.box_len
    }

    /// The `k`-th element of the box, lexicographically.
    pub fn box_element(&self, mut k: u64) -> GroupElement {
        let mut e = vec![0i64; self.ranges.len()];
        for (t, r) in self.ranges.iter().enumerate().rev() {
            let w = (r.end - r.start) as u64;
            e[t] = r.start + (k % w) as i64;
            k /= w;
        }
        GroupElement::new(e)
    }

    /// Box indices of the entries of tuple `i`.
    pub fn tuple_indices(&self, mut i: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.m];
        for slot in out.iter_mut().rev() {
            *slot = i % self.box_len;
            i /= self.box_len;
        }
        out
    }

    pub fn tuple(&self, i: u64) -> Vec<GroupElement> {
        self.tuple_indices(i)
            .into_iter()
            .map(|k| self.box_element(k))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<GroupElement>> + '_ {
        (0..self.total).map(move |i| self.tuple(i))
    }

    /// `count` contiguous, disjoint index ranges covering the stream; each
    /// is a lexicographic block (a union of prefix classes).
    pub fn shards(&self, count: usize) -> Vec<Range<u64>> {
        let count = count.max(1) as u64;
        let step = self.total.div_ceil(count).max(1);
        (0..count)
            .map(|k| (k * step).min(self.total)..((k + 1) * step).min(self.total))
            .filter(|r| !r.is_empty())
            .collect()
    }
}

/// How the ratio condition of a tuple family is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StabilityMode {
    /// Ratio signatures only.
    A,
    /// Ratio signatures plus closure of the family under componentwise
    /// Galois conjugation where the conjugate tuple is expressible in `Γ^m`.
    B,
}

impl std::str::FromStr for StabilityMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Self::A),
            "B" | "b" => Ok(Self::B),
            other => Err(Error::BadInput(format!("stability mode must be A or B, got `{other}`"))),
        }
    }
}

/// Verdict of [`ratio_filter`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FilterOutcome {
    Admit,
    /// Admitted as the Galois conjugate of an earlier member (mode B).
    AdmitConjugate,
    /// `u_{i1}/u_{i2}` (0-based) repeats a ratio of an earlier member.
    Reject { i1: usize, i2: usize },
}

impl FilterOutcome {
    pub fn admitted(&self) -> bool {
        !matches!(self, Self::Reject { .. })
    }
}

type Signature = (usize, usize, Vec<i64>);

/// State for the family condition `u_{i1}/u_{i2} ≠ u'_{i1}/u'_{i2}`.
///
/// Ratios are compared through exponent-vector differences (torsion
/// coordinates reduced), so a signature once admitted blocks every later
/// tuple reproducing it.
#[derive(Clone, Debug)]
pub struct TupleFamilyFilter {
    desc: GroupDesc,
    mode: StabilityMode,
    seen: HashSet<Signature>,
    members: HashSet<Vec<GroupElement>>,
    /// Per Galois map, the action on exponent vectors when fully resolved.
    actions: Vec<Option<Vec<Vec<i64>>>>,
}

impl TupleFamilyFilter {
    /// Mode A filter.
    pub fn new(desc: &GroupDesc) -> Self {
        Self {
            desc: desc.clone(),
            mode: StabilityMode::A,
            seen: HashSet::new(),
            members: HashSet::new(),
            actions: Vec::new(),
        }
    }

    /// Filter in the given mode; mode B uses the resolved Galois actions of
    /// `report` (unresolved maps contribute no conjugates).
    pub fn with_mode(desc: &GroupDesc, mode: StabilityMode, report: Option<&StabilityReport>) -> Self {
        let mut f = Self::new(desc);
        f.mode = mode;
        if mode == StabilityMode::B {
            if let Some(r) = report {
                f.actions = r.actions();
            }
        }
        f
    }

    pub fn mode(&self) -> StabilityMode {
        self.mode
    }

    fn signatures(&self, t: &[GroupElement]) -> Vec<Signature> {
        let mut out = Vec::new();
        for i1 in 0..t.len() {
            for i2 in 0..t.len() {
                if i1 != i2 {
                    let d = self.desc.normalize(&t[i1].sub(&t[i2]));
                    out.push((i1, i2, d.exponents));
                }
            }
        }
        out
    }

    fn conjugate_tuples(&self, t: &[GroupElement]) -> Vec<Vec<GroupElement>> {
        let mut out: Vec<Vec<GroupElement>> = Vec::new();
        for act in self.actions.iter().flatten() {
            let c: Vec<GroupElement> = t
                .iter()
                .map(|g| {
                    let mut e = vec![0i64; self.desc.s()];
                    for (row, &k) in act.iter().zip(&g.exponents) {
                        for (x, r) in e.iter_mut().zip(row) {
                            *x += k * r;
                        }
                    }
                    self.desc.normalize(&GroupElement::new(e))
                })
                .collect();
            if c != t && !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }
}

/// Admits `t` iff none of its ratio signatures was seen before, then
/// records them. For `m = 1` the condition is vacuous.
pub fn ratio_filter(t: &[GroupElement], filter: &mut TupleFamilyFilter) -> FilterOutcome {
    let t: Vec<GroupElement> = t.iter().map(|g| filter.desc.normalize(g)).collect();
    if filter.members.contains(&t) {
        return FilterOutcome::AdmitConjugate;
    }
    let sigs = filter.signatures(&t);
    if let Some((i1, i2, _)) = sigs.iter().find(|s| filter.seen.contains(*s)) {
        return FilterOutcome::Reject { i1: *i1, i2: *i2 };
    }
    let orbit = if filter.mode == StabilityMode::B {
        filter.conjugate_tuples(&t)
    } else {
        Vec::new()
    };
    filter.seen.extend(sigs);
    for c in orbit {
        let cs = filter.signatures(&c);
        filter.seen.extend(cs);
        filter.members.insert(c);
    }
    filter.members.insert(t);
    FilterOutcome::Admit
}

/// One line of the Galois-stability diagnostic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityEntry {
    /// 0-based generator index.
    pub generator: usize,
    /// Galois map index.
    pub sigma: usize,
    pub image: String,
    /// Exponents with `σ(γ_t) = ∏ γ^e`, or `None` when unresolved.
    pub expression: Option<Vec<i64>>,
}

/// Whether `σ(γ_t)` lies in `Γ` within a searched exponent radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub radius: u64,
    pub maps: usize,
    pub entries: Vec<StabilityEntry>,
}

impl StabilityReport {
    pub fn all_resolved(&self) -> bool {
        self.entries.iter().all(|e| e.expression.is_some())
    }

    /// Per map, the matrix whose row `t` expresses `σ(γ_t)`, when every
    /// generator is resolved.
    pub fn actions(&self) -> Vec<Option<Vec<Vec<i64>>>> {
        (0..self.maps)
            .map(|k| {
                let mut rows: Vec<(usize, Vec<i64>)> = self
                    .entries
                    .iter()
                    .filter(|e| e.sigma == k)
                    .map(|e| e.expression.clone().map(|x| (e.generator, x)))
                    .collect::<Option<Vec<_>>>()?;
                rows.sort_by_key(|(t, _)| *t);
                Some(rows.into_iter().map(|(_, x)| x).collect())
            })
            .collect()
    }
}

/// Searches, for each generator and Galois map, an exponent vector of
/// sup-norm at most `radius` with `σ(γ_t) = ∏ γ^e`. A diagnostic, not a
/// gate.
pub fn galois_stability_report(desc: &GroupDesc, radius: u64) -> Result<StabilityReport> {
    let g = desc.field.require_galois()?;
    let en = enumerate(desc, radius, 1)?;
    let mut table: HashMap<Vec<num_rational::BigRational>, GroupElement> = HashMap::new();
    // smallest sup-norm first, then lexicographic, for a canonical answer
    let mut elems: Vec<GroupElement> = (0..en.box_len()).map(|k| en.box_element(k)).collect();
    elems.sort_by_key(|e| (e.sup_norm(), e.clone()));
    for e in elems {
        let v = materialize(&e, desc)?;
        table.entry(v.coeffs().to_vec()).or_insert(e);
    }
    let mut entries = Vec::new();
    for sigma in 0..g.len() {
        for (t, gamma) in desc.generators.iter().enumerate() {
            let img = apply_galois(sigma, gamma)?;
            let expression = table.get(img.coeffs()).map(|e| e.exponents.clone());
            entries.push(StabilityEntry {
                generator: t,
                sigma,
                image: img.to_string(),
                expression,
            });
        }
    }
    Ok(StabilityReport {
        radius,
        maps: g.len(),
        entries,
    })
}
