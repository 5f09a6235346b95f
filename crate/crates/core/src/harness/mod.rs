//! The experiment layer: run configuration, the two tuple searches, the
//! rational and algebraic `∥α^n∥` scans, self-tests and reports.

pub mod config;
pub mod eval;
pub mod mahler;
pub mod report;
pub mod selftest;
pub mod thm1;
pub mod thm2;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::FieldElement;
use crate::gamma::{materialize, GroupDesc, TupleEnumerator};

pub use config::{Mode, RunConfig};
pub use mahler::{mahler_scan, mahler_scan_algebraic, MahlerScan};
pub use report::{read_summary, Classification, Format, Report, ReportRecord, TupleCandidate};
pub use thm1::thm1_search;
pub use thm2::thm2_verify;

/// Execution options that do not change report content.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; `0` lets rayon choose.
    pub jobs: usize,
    /// Overrides `precision.max_bits` (this does change verdicts).
    pub max_bits: Option<u32>,
    /// A previous `thm1` summary for the stability comparison.
    pub compare: Option<serde_json::Value>,
}

/// Runs whichever experiment `cfg.mode` names.
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    match cfg.mode {
        Mode::Thm1 => thm1_search(cfg, opts),
        Mode::Thm2 => thm2_verify(cfg, opts),
        Mode::Mahler => {
            let alpha = cfg.mahler_alpha.as_ref().expect("validated");
            Ok(mahler_scan(alpha, &cfg.epsilon, cfg.nmax)?.report(cfg.echo()))
        }
    }
}

pub(crate) fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::BadInput(format!("thread pool: {e}")))
}

/// Every element of the enumeration box, materialized once, in box order.
pub(crate) fn materialize_box(desc: &GroupDesc, en: &TupleEnumerator) -> Result<Vec<FieldElement>> {
    (0..en.box_len())
        .into_par_iter()
        .map(|k| materialize(&en.box_element(k), desc))
        .collect()
}
