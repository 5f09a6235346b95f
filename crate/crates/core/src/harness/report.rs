//! Versioned JSON-lines and CSV reports.
//!
//! JSON-lines: a header object carrying `"schema": 1`, one object per
//! record, then one summary object. CSV: a `# schema = 1` line, a header
//! row, one row per record and a final `# summary {json}` line. Both are
//! byte-deterministic for identical inputs.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::certify::Decision;
use crate::classify::ClassPartition;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Jsonl,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" | "json" => Ok(Self::Jsonl),
            "csv" => Ok(Self::Csv),
            other => Err(Error::BadInput(format!("format must be jsonl or csv, got `{other}`"))),
        }
    }
}

/// How a record came out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Every condition of the exceptional-tuple search holds.
    Exceptional,
    /// Every hypothesis of the conclusion check holds.
    Satisfying,
    /// The named condition is certified false.
    Excluded(String),
    Undecided,
}

impl Classification {
    /// First false condition in `order`, else undecided if any is, else
    /// `all_true`.
    pub fn from_verdicts(
        verdicts: &BTreeMap<String, Decision>,
        order: &[&str],
        all_true: Classification,
    ) -> Self {
        for c in order {
            if verdicts.get(*c) == Some(&Decision::False) {
                return Self::Excluded((*c).to_string());
            }
        }
        if order.iter().any(|c| verdicts.get(*c) != Some(&Decision::True)) {
            return Self::Undecided;
        }
        all_true
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self, Self::Undecided)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exceptional => f.write_str("exceptional"),
            Self::Satisfying => f.write_str("satisfying"),
            Self::Excluded(c) => write!(f, "excluded({c})"),
            Self::Undecided => f.write_str("undecided"),
        }
    }
}

impl Serialize for Classification {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One evaluated `(u_1, …, u_m, q, p)` (or `(u_1, …, u_m)` in conclusion verification).
#[derive(Clone, Debug, Serialize)]
pub struct TupleCandidate {
    pub exponents: Vec<Vec<i64>>,
    pub u: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    /// Nearest integer; absent when it could not be certified.
    pub p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub verdicts: BTreeMap<String, Decision>,
    /// Decimal enclosures `center ± radius` of the two sides of the
    /// governing inequality.
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportRecord {
    #[serde(flatten)]
    pub candidate: TupleCandidate,
    pub classification: Classification,
    pub heights: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<ClassPartition>,
    /// Evidence for the deciding verdict (pseudo-Pisot witness, filter
    /// collision, …).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub conclusions: BTreeMap<String, Decision>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub anomalies: Vec<String>,
}

impl ReportRecord {
    /// Some verdict of the record (hypothesis or conclusion) is undecided.
    pub fn has_undecided(&self) -> bool {
        self.classification.is_undecided()
            || self
                .conclusions
                .values()
                .any(|d| *d == Decision::Undecided)
    }
}

/// A finished report: header, rows and summary.
#[derive(Clone, Debug)]
pub struct Report {
    pub mode: String,
    pub config: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Map<String, Value>>,
    pub summary: Map<String, Value>,
    /// Rows carrying an undecided verdict.
    pub undecided: usize,
}

pub const TUPLE_COLUMNS: &[&str] = &[
    "exponents",
    "u",
    "q",
    "p",
    "d",
    "verdicts",
    "lhs",
    "rhs",
    "classification",
    "heights",
    "partition",
    "witness",
    "conclusions",
    "anomalies",
];

impl Report {
    pub fn new(mode: &str, config: Value, columns: &[&'static str]) -> Self {
        Self {
            mode: mode.to_string(),
            config,
            columns: columns.to_vec(),
            rows: Vec::new(),
            summary: Map::new(),
            undecided: 0,
        }
    }

    pub fn push_record(&mut self, r: &ReportRecord) {
        if r.has_undecided() {
            self.undecided += 1;
        }
        self.push_row(serde_json::to_value(r).expect("record serializes"));
    }

    pub fn push_row(&mut self, v: Value) {
        match v {
            Value::Object(m) => self.rows.push(m),
            other => panic!("report rows are objects, got {other}"),
        }
    }

    pub fn header_value(&self) -> Value {
        json!({
            "schema": SCHEMA_VERSION,
            "kind": "header",
            "mode": self.mode,
            "config": self.config,
        })
    }

    pub fn summary_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("kind".into(), json!("summary"));
        m.insert("mode".into(), json!(self.mode));
        m.insert("records".into(), json!(self.rows.len()));
        m.insert("undecided_records".into(), json!(self.undecided));
        for (k, v) in &self.summary {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }

    pub fn write_jsonl<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "{}", self.header_value())?;
        for r in &self.rows {
            let mut m = Map::new();
            m.insert("kind".into(), json!("record"));
            m.extend(r.clone());
            writeln!(w, "{}", Value::Object(m))?;
        }
        writeln!(w, "{}", self.summary_value())?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "# schema = {SCHEMA_VERSION}")?;
        writeln!(w, "# header {}", self.header_value())?;
        {
            let mut cw = csv::Writer::from_writer(&mut *w);
            let io = |e: csv::Error| Error::Io(e.to_string());
            cw.write_record(&self.columns).map_err(io)?;
            for r in &self.rows {
                let cells: Vec<String> = self
                    .columns
                    .iter()
                    .map(|c| match r.get(*c) {
                        None | Some(Value::Null) => String::new(),
                        Some(Value::String(s)) => s.clone(),
                        Some(v) => v.to_string(),
                    })
                    .collect();
                cw.write_record(&cells).map_err(io)?;
            }
            cw.flush()?;
        }
        writeln!(w, "# summary {}", self.summary_value())?;
        Ok(())
    }

    pub fn write<W: Write>(&self, w: &mut W, format: Format) -> Result<()> {
        match format {
            Format::Jsonl => self.write_jsonl(w),
            Format::Csv => self.write_csv(w),
        }
    }

    pub fn render(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf, format).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }
}

/// Pulls the summary object out of a previous report (JSON-lines or CSV),
/// or accepts a bare summary line.
pub fn read_summary(text: &str) -> Result<Value> {
    for line in text.lines().rev() {
        let line = line.trim();
        let body = line.strip_prefix("# summary ").unwrap_or(line);
        if !body.starts_with('{') {
            continue;
        }
        if let Ok(v) = serde_json::from_str::<Value>(body) {
            if v.get("kind").and_then(Value::as_str) == Some("summary") {
                return Ok(v);
            }
        }
    }
    Err(Error::BadInput("no summary line found in the comparison input".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> ReportRecord {
        let mut verdicts = BTreeMap::new();
        verdicts.insert("ii".to_string(), Decision::True);
        verdicts.insert("iii".to_string(), Decision::False);
        ReportRecord {
            candidate: TupleCandidate {
                exponents: vec![vec![0, 1]],
                u: vec!["1 + t".into()],
                q: Some(1),
                p: Some("2".into()),
                d: Some(2),
                verdicts,
                lhs: "4.1e-1 ± 0".into(),
                rhs: "1 ± 0".into(),
            },
            classification: Classification::Excluded("iii".into()),
            heights: vec!["1.55".into()],
            partition: None,
            witness: Some("pseudo-Pisot".into()),
            conclusions: BTreeMap::new(),
            anomalies: vec![],
        }
    }

    #[test]
    fn classification_order() {
        let mut v = BTreeMap::new();
        v.insert("ii".to_string(), Decision::Undecided);
        v.insert("iii".to_string(), Decision::False);
        let c = Classification::from_verdicts(&v, &["ii", "iii"], Classification::Exceptional);
        assert_eq!(c, Classification::Excluded("iii".into()));
        v.insert("iii".to_string(), Decision::True);
        let c = Classification::from_verdicts(&v, &["ii", "iii"], Classification::Exceptional);
        assert_eq!(c, Classification::Undecided);
    }

    #[test]
    fn jsonl_and_csv_layout() {
        let mut r = Report::new("thm1", json!({"mode": "thm1"}), TUPLE_COLUMNS);
        r.push_record(&record());
        r.summary.insert("exceptional".into(), json!(0));
        let j = r.render(Format::Jsonl);
        let lines: Vec<&str> = j.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with(r#"{"config""#) || lines[0].contains(r#""schema":1"#));
        assert!(lines[1].contains(r#""classification":"excluded(iii)""#));
        assert_eq!(read_summary(&j).unwrap()["exceptional"], json!(0));
        let c = r.render(Format::Csv);
        assert!(c.starts_with("# schema = 1\n"));
        assert!(c.lines().nth(2).unwrap().starts_with("exponents,u,q,p"));
        assert_eq!(read_summary(&c).unwrap()["records"], json!(1));
    }
}
