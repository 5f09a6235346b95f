//! `sunitlab`: heights, Pisot tests, tuple classification, `∥α^n∥` scans
//! and the two tuple searches from the command line.
//!
//! Exit status: 0 when everything was decided, 2 when some record stayed
//! undecided, 1 on configuration or input errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use sunitlab_core::certify::{Decision, DEFAULT_MAX_BITS};
use sunitlab_core::classify::{check_p1_p2, is_pisot_poly, partition_classes, pseudo_pisot_tuple};
use sunitlab_core::exact::{parse_rational, FieldElement, IntPolynomial, NumberFieldDesc};
use sunitlab_core::harness::mahler::{algebraic_report, mahler_scan, mahler_scan_algebraic};
use sunitlab_core::harness::selftest::run_selftest;
use sunitlab_core::harness::{read_summary, run, Format, Mode, Report, RunConfig, RunOptions};
use sunitlab_core::heights::weil_height;
use sunitlab_core::Error;

#[derive(Parser, Debug)]
#[command(name = "sunitlab", version, about = "Exact heights, Pisot tests and S-unit tuple searches")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Precision cap for certified comparisons, in bits.
    #[arg(long, global = true)]
    max_bits: Option<u32>,
    /// Worker threads (0 = all cores); never changes the output.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format: jsonl or csv.
    #[arg(long, global = true, default_value = "jsonl")]
    format: String,
    /// Previous report or summary line to compare the exceptional set with.
    #[arg(long, global = true)]
    compare: Option<PathBuf>,
}

/// A number field given by its defining polynomial.
#[derive(Args, Debug, Clone)]
struct FieldArgs {
    /// Defining polynomial in `x`, e.g. "x^2 - 2". Elements are then written
    /// in `t`, e.g. "1 + t". Without it, elements are rationals.
    #[arg(long)]
    field: Option<String>,
    /// Image of `t` under a Galois map (repeatable). Quadratic and
    /// cyclotomic fields get their group automatically.
    #[arg(long = "galois")]
    galois: Vec<String>,
    /// Root index (canonical root order) used as the embedding.
    #[arg(long)]
    embedding: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Absolute Weil height of an algebraic number.
    Height {
        element: String,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Is the polynomial the minimal polynomial of a Pisot number?
    Pisot { poly: String },
    /// Pseudo-Pisot test of a tuple (entries separated by `;`).
    PseudoPisot {
        tuple: String,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Properties (P1), (P2) and the class partition of a tuple.
    Classify {
        tuple: String,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Scan ∥α^n∥ against ℓ^{-εn} (rational α = k/ℓ) or α^{-εn} (algebraic α).
    Mahler {
        /// Rational α = k/ℓ.
        #[arg(long)]
        alpha: Option<String>,
        /// Minimal polynomial of an algebraic α (its largest real root).
        #[arg(long)]
        minpoly: Option<String>,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        nmax: u64,
    },
    /// Exceptional-tuple search (config mode thm1).
    Search {
        #[arg(long)]
        config: PathBuf,
    },
    /// Conclusion verification (config mode thm2).
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the built-in invariant suites.
    Selftest,
}

struct Outcome {
    text: String,
    undecided: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli.global, &out.text) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(if out.undecided { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(g: &Global, text: &str) -> std::io::Result<()> {
    match &g.out {
        Some(p) => fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn build_field(a: &FieldArgs) -> Result<Arc<NumberFieldDesc>, Error> {
    let Some(poly) = &a.field else {
        return Ok(NumberFieldDesc::rationals());
    };
    let poly = IntPolynomial::parse(poly)?;
    let mut b = NumberFieldDesc::builder(poly);
    if let Some(e) = a.embedding {
        b = b.embedding(e);
    }
    if a.galois.is_empty() {
        return b.standard_galois().build();
    }
    // images are parsed against a Galois-free copy of the field
    let bare = NumberFieldDesc::builder(IntPolynomial::parse(a.field.as_deref().unwrap_or_default())?).build()?;
    let images = a
        .galois
        .iter()
        .map(|s| FieldElement::parse(&bare, s).map(|x| x.coeffs().to_vec()))
        .collect::<Result<Vec<_>, _>>()?;
    b.galois(images).build()
}

fn parse_tuple(k: &Arc<NumberFieldDesc>, s: &str) -> Result<Vec<FieldElement>, Error> {
    s.split(';')
        .map(|x| FieldElement::parse(k, x.trim()))
        .collect()
}

fn max_bits(g: &Global) -> u32 {
    g.max_bits.unwrap_or(DEFAULT_MAX_BITS)
}

fn line(v: Value) -> String {
    format!("{v}\n")
}

fn render(report: &Report, g: &Global) -> Result<Outcome, Error> {
    let format: Format = g.format.parse()?;
    Ok(Outcome {
        text: report.render(format),
        undecided: report.undecided > 0,
    })
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let g = &cli.global;
    let _: Format = g.format.parse()?;
    match &cli.command {
        Command::Height { element, field } => {
            let k = build_field(field)?;
            let a = FieldElement::parse(&k, element)?;
            let h = weil_height(&a, 128)?;
            let value = match &h.exact {
                Some(x) => x.to_string(),
                None => h.value.to_decimal(),
            };
            let text = match g.format.as_str() {
                "csv" => format!("element,height,minimal_polynomial\n{element},{value},{}\n", h.source_poly),
                _ => line(json!({
                    "element": element,
                    "height": value,
                    "exact": h.exact.is_some(),
                    "minimal_polynomial": h.source_poly.to_string(),
                    "provenance": format!("minimal polynomial {}", h.source_poly),
                })),
            };
            Ok(Outcome { text, undecided: false })
        }
        Command::Pisot { poly } => {
            let f = IntPolynomial::parse(poly)?;
            let (verdict, undecided) = match is_pisot_poly(&f, max_bits(g)) {
                Ok(b) => (Decision::from_bool(b), false),
                Err(Error::Undecided(_)) => (Decision::Undecided, true),
                Err(e) => return Err(e),
            };
            let text = line(json!({ "poly": f.to_string(), "pisot": verdict }));
            Ok(Outcome { text, undecided })
        }
        Command::PseudoPisot { tuple, field } => {
            let k = build_field(field)?;
            let t = parse_tuple(&k, tuple)?;
            let v = pseudo_pisot_tuple(&t, max_bits(g))?;
            let text = line(json!({
                "tuple": t.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "pseudo_pisot": v.verdict,
                "witness": v.witness.to_string(),
                "P": v.p_set.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "sum": v.sum.to_string(),
            }));
            Ok(Outcome {
                text,
                undecided: v.verdict == Decision::Undecided,
            })
        }
        Command::Classify { tuple, field } => {
            let k = build_field(field)?;
            let t = parse_tuple(&k, tuple)?;
            let props = check_p1_p2(&t)?;
            let partition = if props.p2 { Some(partition_classes(&t)?) } else { None };
            let text = line(json!({
                "tuple": t.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "P1": props.p1,
                "P2": props.p2,
                "p1_witness": props.p1_witness,
                "p2_witness": props.p2_witness.map(|(i, j)| [i + 1, j + 1]),
                "partition": partition,
            }));
            Ok(Outcome { text, undecided: false })
        }
        Command::Mahler { alpha, minpoly, eps, nmax } => {
            let eps = parse_rational(eps)?;
            let config = json!({ "alpha": alpha, "minpoly": minpoly, "epsilon": eps.to_string(), "nmax": nmax });
            let report = match (alpha, minpoly) {
                (Some(a), None) => mahler_scan(&parse_rational(a)?, &eps, *nmax)?.report(config),
                (None, Some(p)) => {
                    let k = NumberFieldDesc::builder(IntPolynomial::parse(p)?).standard_galois().build()?;
                    let a = FieldElement::theta(&k);
                    let rows = mahler_scan_algebraic(&a, &eps, *nmax, max_bits(g))?;
                    algebraic_report(&a, &eps, &rows, config)
                }
                _ => return Err(Error::BadInput("give exactly one of --alpha and --minpoly".into())),
            };
            render(&report, g)
        }
        Command::Search { config } | Command::Verify { config } => {
            let cfg = RunConfig::load(config)?;
            let want = if matches!(cli.command, Command::Search { .. }) { Mode::Thm1 } else { Mode::Thm2 };
            if cfg.mode != want {
                return Err(Error::Config {
                    key: "mode".into(),
                    msg: format!("this subcommand needs mode {want}, the config says {}", cfg.mode),
                });
            }
            let compare = match &g.compare {
                Some(p) => Some(read_summary(&fs::read_to_string(p)?)?),
                None => None,
            };
            let opts = RunOptions {
                jobs: g.jobs,
                max_bits: g.max_bits,
                compare,
            };
            render(&run(&cfg, &opts)?, g)
        }
        Command::Selftest => {
            let results = run_selftest();
            let failed = results.iter().filter(|r| !r.passed).count();
            let mut text = String::new();
            for r in &results {
                text.push_str(&format!("{} {} — {}\n", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail));
            }
            if failed > 0 {
                eprint!("{text}");
                return Err(Error::BadInput(format!("{failed} self-test suite(s) failed")));
            }
            Ok(Outcome { text, undecided: false })
        }
    }
}
