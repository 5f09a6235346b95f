use std::path::PathBuf;
use std::process::{Command, Output};

fn sunitlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sunitlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sunitlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const SEARCH: &str = r#"
mode = "thm1"
field.minpoly = "-2,0,1"
gamma.gen.1 = "-1"
gamma.order.1 = 2
gamma.gen.2 = "1,1"
alphas.1 = "1"
epsilon = "1/2"
bounds.N = 4
bounds.Qmax = 5
"#;

#[test]
fn height_of_three_halves() {
    let o = sunitlab(&["height", "3/2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["height"], "3");
    assert_eq!(v["provenance"], "minimal polynomial 2x - 3");
}

#[test]
fn pisot_verdicts() {
    assert!(stdout(&sunitlab(&["pisot", "x^2 - x - 1"])).contains(r#""pisot":"true""#));
    assert!(stdout(&sunitlab(&["pisot", "x^2 - 2"])).contains(r#""pisot":"false""#));
}

#[test]
fn classify_and_pseudo_pisot_over_a_field() {
    let o = sunitlab(&["classify", "t; -t", "--field", "x^2 - 2"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["P1"], false);
    assert!(!v["p1_witness"].is_null());
    let o = sunitlab(&["pseudo-pisot", "t", "--field", "x^2 - 2"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["pseudo_pisot"], "false");
}

#[test]
fn mahler_summary_and_csv() {
    let o = sunitlab(&["mahler", "--alpha", "3/2", "--eps", "1", "--nmax", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["qualifying"], serde_json::json!([]));
    assert!(last["boundaries"].as_array().unwrap().contains(&4.into()));
    let csv = stdout(&sunitlab(&["mahler", "--alpha", "3/2", "--eps", "1", "--nmax", "5", "--format", "csv"]));
    assert!(csv.starts_with("# schema = 1\n"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 6);
}

#[test]
fn search_is_deterministic_across_workers() {
    let cfg = scratch("search.toml");
    std::fs::write(&cfg, SEARCH).unwrap();
    let cfg = cfg.to_str().unwrap();
    let a = sunitlab(&["search", "--config", cfg, "--jobs", "1"]);
    let b = sunitlab(&["search", "--config", cfg, "--jobs", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let summary: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(summary["kind"], "summary");
    assert_eq!(summary["exceptional_set"], serde_json::json!([]));
}

#[test]
fn compare_with_previous_report() {
    let cfg = scratch("compare.toml");
    std::fs::write(&cfg, SEARCH).unwrap();
    let prev = scratch("prev.jsonl");
    let cfg = cfg.to_str().unwrap();
    let o = sunitlab(&["search", "--config", cfg, "--out", prev.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = sunitlab(&["search", "--config", cfg, "--compare", prev.to_str().unwrap()]);
    let text = stdout(&o);
    let summary: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(summary["compare"]["stable"], true);
}

#[test]
fn errors_exit_with_one() {
    assert_eq!(sunitlab(&["bogus"]).status.code(), Some(1));
    assert_eq!(sunitlab(&["height", "1/0"]).status.code(), Some(1));
    assert_eq!(sunitlab(&["search", "--config", "/nonexistent.toml"]).status.code(), Some(1));
    let cfg = scratch("bad.toml");
    std::fs::write(&cfg, "mode = \"thm1\"\nbogus.key = 1\n").unwrap();
    let o = sunitlab(&["search", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus.key"));
    let cfg = scratch("mode.toml");
    std::fs::write(&cfg, SEARCH).unwrap();
    assert_eq!(sunitlab(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(sunitlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn selftest_passes() {
    let o = sunitlab(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 6);
}
