//! Run configuration: flat `key = "value"` lines with dotted keys.
//!
//! ```text
//! mode = "thm1"
//! field.minpoly = "-2,0,1"        # ascending integer coefficients
//! field.galois.1 = "0,1"          # image of θ under σ_1
//! field.galois.2 = "0,-1"
//! gamma.gen.1 = "-1"
//! gamma.order.1 = "2"
//! gamma.gen.2 = "1,1"
//! alphas.1 = "1"
//! epsilon = "1/2"
//! bounds.N = "10"
//! bounds.Qmax = "20"
//! precision.max_bits = "4096"
//! stability_mode = "A"
//! ```
//!
//! The syntax is the dotted-key subset of TOML and is read with the `toml`
//! crate; every leaf is flattened back to its dotted key. Unknown keys are
//! errors naming the key.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::certify::DEFAULT_MAX_BITS;
use crate::error::{Error, Result};
use crate::exact::{parse_rational, FieldElement, IntPolynomial, NumberFieldDesc};
use crate::gamma::{GroupDesc, StabilityMode};

/// Which experiment a config drives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Thm1,
    Thm2,
    Mahler,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "thm1" => Ok(Self::Thm1),
            "thm2" => Ok(Self::Thm2),
            "mahler" => Ok(Self::Mahler),
            other => Err(config_err("mode", format!("expected thm1, thm2 or mahler, got `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Thm1 => "thm1",
            Self::Thm2 => "thm2",
            Self::Mahler => "mahler",
        })
    }
}

/// Default exponent radius for the Galois-stability search.
pub const DEFAULT_STABILITY_RADIUS: u64 = 3;

/// Seed of the primitive-element draws used for `[Q(u_1, …, u_m) : Q]`.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// A parsed, validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    /// Present for `thm1` / `thm2`.
    pub field: Option<Arc<NumberFieldDesc>>,
    pub gamma: Option<GroupDesc>,
    pub alphas: Vec<FieldElement>,
    /// `ε` for `thm1` and `mahler`, `ε₁` for `thm2`.
    pub epsilon: BigRational,
    pub bound_n: u64,
    pub q_max: u64,
    pub nmax: u64,
    pub allow_negative_q: bool,
    pub max_bits: u32,
    pub stability_mode: StabilityMode,
    pub stability_radius: u64,
    pub mahler_alpha: Option<BigRational>,
    pub seed: u64,
    /// The flattened key/value pairs as read, for echoing in reports.
    pub raw: BTreeMap<String, String>,
}

fn config_err(key: &str, msg: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        msg: msg.into(),
    }
}

const SCALAR_KEYS: &[&str] = &[
    "mode",
    "field.minpoly",
    "field.embedding",
    "field.label",
    "epsilon",
    "bounds.N",
    "bounds.Qmax",
    "bounds.nmax",
    "bounds.allow_negative_q",
    "precision.max_bits",
    "stability_mode",
    "stability.radius",
    "mahler.alpha",
    "seed",
];

const INDEXED_KEYS: &[&str] = &["field.galois", "gamma.gen", "gamma.order", "alphas"];

fn flatten(prefix: &str, v: &toml::Value, out: &mut BTreeMap<String, String>) -> Result<()> {
    let leaf = match v {
        toml::Value::Table(t) => {
            for (k, x) in t {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, out)?;
            }
            return Ok(());
        }
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Boolean(b) => b.to_string(),
        _ => return Err(config_err(prefix, "values must be strings, integers or booleans")),
    };
    out.insert(prefix.to_string(), leaf);
    Ok(())
}

fn check_key(key: &str) -> Result<()> {
    if SCALAR_KEYS.contains(&key) {
        return Ok(());
    }
    if let Some((head, idx)) = key.rsplit_once('.') {
        if INDEXED_KEYS.contains(&head) {
            return match idx.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(()),
                _ => Err(config_err(key, "index must be a positive integer")),
            };
        }
    }
    Err(config_err(key, "unknown key"))
}

fn parse_int<T: FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| config_err(key, format!("expected an integer, got `{s}`")))
}

fn parse_bool(key: &str, s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(config_err(key, format!("expected true or false, got `{s}`"))),
    }
}

fn rational_vec(key: &str, s: &str) -> Result<Vec<BigRational>> {
    s.split(',')
        .map(|c| parse_rational(c.trim()).map_err(|e| config_err(key, e.to_string())))
        .collect()
}

/// Values of `head.1`, `head.2`, … in order; gaps are errors.
fn indexed<'a>(raw: &'a BTreeMap<String, String>, head: &str) -> Result<Vec<(String, &'a String)>> {
    let mut items: Vec<(usize, String, &String)> = raw
        .iter()
        .filter_map(|(k, v)| {
            let (h, i) = k.rsplit_once('.')?;
            (h == head).then(|| (i.parse().expect("checked"), k.clone(), v))
        })
        .collect();
    items.sort_by_key(|x| x.0);
    for (pos, (i, k, _)) in items.iter().enumerate() {
        if *i != pos + 1 {
            return Err(config_err(k, format!("indices of `{head}` must run 1, 2, … without gaps")));
        }
    }
    Ok(items.into_iter().map(|(_, k, v)| (k, v)).collect())
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            let msg = e.message().to_string();
            let key = e
                .span()
                .and_then(|s| text.get(s))
                .map(|s| s.trim().to_string())
                .unwrap_or_else(|| "<syntax>".into());
            config_err(&key, msg)
        })?;
        let mut raw = BTreeMap::new();
        flatten("", &toml::Value::Table(value), &mut raw)?;
        Self::from_map(raw)
    }

    /// Builds a config from already flattened pairs.
    pub fn from_map(raw: BTreeMap<String, String>) -> Result<Self> {
        for k in raw.keys() {
            check_key(k)?;
        }
        let get = |k: &str| raw.get(k).map(String::as_str);
        let mode: Mode = get("mode").ok_or_else(|| config_err("mode", "missing"))?.parse()?;
        let epsilon = match get("epsilon") {
            Some(s) => parse_rational(s.trim()).map_err(|e| config_err("epsilon", e.to_string()))?,
            None => return Err(config_err("epsilon", "missing")),
        };
        if !epsilon.is_positive() {
            return Err(config_err("epsilon", "must be positive"));
        }
        let max_bits = match get("precision.max_bits") {
            Some(s) => parse_int("precision.max_bits", s)?,
            None => DEFAULT_MAX_BITS,
        };
        if max_bits < 64 {
            return Err(config_err("precision.max_bits", "must be at least 64"));
        }
        let stability_mode = match get("stability_mode") {
            Some(s) => s.parse().map_err(|e: Error| config_err("stability_mode", e.to_string()))?,
            None => StabilityMode::A,
        };
        let mut cfg = RunConfig {
            mode,
            field: None,
            gamma: None,
            alphas: Vec::new(),
            epsilon,
            bound_n: get("bounds.N").map(|s| parse_int("bounds.N", s)).transpose()?.unwrap_or(0),
            q_max: get("bounds.Qmax").map(|s| parse_int("bounds.Qmax", s)).transpose()?.unwrap_or(1),
            nmax: get("bounds.nmax").map(|s| parse_int("bounds.nmax", s)).transpose()?.unwrap_or(0),
            allow_negative_q: get("bounds.allow_negative_q")
                .map(|s| parse_bool("bounds.allow_negative_q", s))
                .transpose()?
                .unwrap_or(false),
            max_bits,
            stability_mode,
            stability_radius: get("stability.radius")
                .map(|s| parse_int("stability.radius", s))
                .transpose()?
                .unwrap_or(DEFAULT_STABILITY_RADIUS),
            mahler_alpha: None,
            seed: get("seed").map(|s| parse_int("seed", s)).transpose()?.unwrap_or(DEFAULT_SEED),
            raw: BTreeMap::new(),
        };
        match mode {
            Mode::Mahler => {
                let a = get("mahler.alpha").ok_or_else(|| config_err("mahler.alpha", "missing"))?;
                cfg.mahler_alpha =
                    Some(parse_rational(a.trim()).map_err(|e| config_err("mahler.alpha", e.to_string()))?);
                if !raw.contains_key("bounds.nmax") {
                    return Err(config_err("bounds.nmax", "missing"));
                }
            }
            Mode::Thm1 | Mode::Thm2 => cfg.load_problem(&raw)?,
        }
        if cfg.q_max < 1 {
            return Err(config_err("bounds.Qmax", "must be at least 1"));
        }
        cfg.raw = raw;
        Ok(cfg)
    }

    fn load_problem(&mut self, raw: &BTreeMap<String, String>) -> Result<()> {
        let get = |k: &str| raw.get(k).map(String::as_str);
        let minpoly = get("field.minpoly").ok_or_else(|| config_err("field.minpoly", "missing"))?;
        let coeffs = rational_vec("field.minpoly", minpoly)?;
        if coeffs.iter().any(|c| !c.is_integer()) {
            return Err(config_err("field.minpoly", "coefficients must be integers"));
        }
        let poly = IntPolynomial::new(coeffs.iter().map(|c| c.to_integer()).collect());
        let mut b = NumberFieldDesc::builder(poly);
        let galois = indexed(raw, "field.galois")?;
        if !galois.is_empty() {
            let images = galois
                .iter()
                .map(|(k, v)| rational_vec(k, v))
                .collect::<Result<Vec<_>>>()?;
            b = b.galois(images);
        } else {
            b = b.standard_galois();
        }
        if let Some(e) = get("field.embedding") {
            b = b.embedding(parse_int("field.embedding", e)?);
        }
        if let Some(l) = get("field.label") {
            b = b.label(l);
        }
        let field = b.build().map_err(|e| config_err("field.minpoly", e.to_string()))?;

        let elem = |k: &str, v: &str| {
            FieldElement::parse_coeffs(&field, v).map_err(|e| config_err(k, e.to_string()))
        };
        let gens = indexed(raw, "gamma.gen")?
            .iter()
            .map(|(k, v)| elem(k, v))
            .collect::<Result<Vec<_>>>()?;
        if gens.is_empty() {
            return Err(config_err("gamma.gen.1", "at least one generator is required"));
        }
        let mut orders = vec![None; gens.len()];
        for (k, v) in indexed_sparse(raw, "gamma.order") {
            let i: usize = k.rsplit_once('.').expect("dotted").1.parse().expect("checked");
            if i > gens.len() {
                return Err(config_err(&k, "order given for a missing generator"));
            }
            let r: u64 = parse_int(&k, v)?;
            orders[i - 1] = Some(r);
        }
        let gamma = GroupDesc::new(gens, orders).map_err(|e| config_err("gamma.gen", e.to_string()))?;
        let alphas = indexed(raw, "alphas")?
            .iter()
            .map(|(k, v)| elem(k, v))
            .collect::<Result<Vec<_>>>()?;
        if alphas.is_empty() {
            return Err(config_err("alphas.1", "at least one α is required (m ≥ 1)"));
        }
        if let Some((i, _)) = alphas.iter().enumerate().find(|(_, a)| a.is_zero()) {
            return Err(config_err(&format!("alphas.{}", i + 1), "α must be nonzero"));
        }
        self.field = Some(field);
        self.gamma = Some(gamma);
        self.alphas = alphas;
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.alphas.len()
    }

    /// The field, gamma and alphas of a `thm1` / `thm2` config.
    pub fn problem(&self) -> Result<(&Arc<NumberFieldDesc>, &GroupDesc, &[FieldElement])> {
        match (&self.field, &self.gamma) {
            (Some(f), Some(g)) => Ok((f, g, &self.alphas)),
            _ => Err(config_err("field.minpoly", format!("mode {} has no field", self.mode))),
        }
    }

    /// The config echoed as a JSON object with sorted keys.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(&self.raw).expect("string map")
    }
}

fn indexed_sparse<'a>(raw: &'a BTreeMap<String, String>, head: &str) -> Vec<(String, &'a String)> {
    raw.iter()
        .filter(|(k, _)| k.rsplit_once('.').is_some_and(|(h, _)| h == head))
        .map(|(k, v)| (k.clone(), v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2: &str = r#"
mode = "thm1"
field.minpoly = "-2,0,1"
field.galois.1 = "0,1"
field.galois.2 = "0,-1"
gamma.gen.1 = "-1"
gamma.order.1 = "2"
gamma.gen.2 = "1,1"
alphas.1 = "1"
epsilon = "1/2"
bounds.N = "10"
bounds.Qmax = "20"
precision.max_bits = "4096"
stability_mode = "A"
"#;

    #[test]
    fn parses_the_sqrt2_fixture() {
        let c = RunConfig::parse(SQRT2).unwrap();
        assert_eq!(c.mode, Mode::Thm1);
        assert_eq!(c.bound_n, 10);
        assert_eq!(c.q_max, 20);
        assert_eq!(c.m(), 1);
        let g = c.gamma.as_ref().unwrap();
        assert_eq!(g.s(), 2);
        assert_eq!(g.orders(), &[Some(2), None]);
        assert_eq!(c.field.as_ref().unwrap().degree(), 2);
    }

    #[test]
    fn unknown_key_is_named() {
        let text = format!("{SQRT2}\nbounds.M = \"3\"\n");
        match RunConfig::parse(&text) {
            Err(Error::Config { key, .. }) => assert_eq!(key, "bounds.M"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_values_are_named() {
        let text = SQRT2.replace("epsilon = \"1/2\"", "epsilon = \"-1\"");
        assert!(matches!(RunConfig::parse(&text), Err(Error::Config { key, .. }) if key == "epsilon"));
        let text = SQRT2.replace("bounds.N = \"10\"", "bounds.N = \"ten\"");
        assert!(matches!(RunConfig::parse(&text), Err(Error::Config { key, .. }) if key == "bounds.N"));
        let text = SQRT2.replace("gamma.gen.2", "gamma.gen.3");
        assert!(matches!(RunConfig::parse(&text), Err(Error::Config { key, .. }) if key == "gamma.gen.3"));
    }

    #[test]
    fn mahler_config() {
        let c = RunConfig::parse("mode = \"mahler\"\nmahler.alpha = \"3/2\"\nepsilon = \"1\"\nbounds.nmax = 50\n")
            .unwrap();
        assert_eq!(c.nmax, 50);
        assert!(c.field.is_none());
    }
}
