use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn job(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(path: &Path, args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tqftkit"));
    cmd.arg(path).args(args).env_remove("TQFTKIT_THREADS");
    if let Some(t) = threads {
        cmd.env("TQFTKIT_THREADS", t);
    }
    cmd.output().unwrap()
}

fn run_json(text: &str, args: &[&str]) -> (Value, i32) {
    let f = job(text);
    let out = run(f.path(), args, None);
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (v, out.status.code().unwrap())
}

fn jobs_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../jobs")
}

#[test]
fn milgram_semion() {
    let (v, code) = run_json("command = \"milgram\"\nfactors = [2]\nq_diag = [\"1/4\"]\n", &["--verify"]);
    assert_eq!(code, 0);
    assert_eq!(v["signature"], 1);
    assert_eq!(v["verified"], true);
    assert_eq!(v["version"], tqftkit_core::VERSION);
    assert_eq!(v["input_sha256"].as_str().unwrap().len(), 64);
    assert!(v["checks"].as_object().unwrap().values().all(|c| c == true));
}

#[test]
fn dim1_trivial_character() {
    let (v, code) = run_json("command = \"dim1\"\ngroup = \"Z5\"\n", &[]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "1");
}

#[test]
fn anomaly_s4_with_a1() {
    let (v, code) = run_json("command = \"anomaly4\"\nname = \"S4\"\nlattice = \"A1\"\n", &["--verify"]);
    assert_eq!(code, 0);
    assert_eq!(v["exact"]["rational"], "2");
    assert_eq!(v["exact"]["sqrt"], 1);
    assert_eq!(v["exact"]["zeta8"], 0);
    assert_eq!(v["sum"]["coeffs"]["0"], "2");
}

#[test]
fn cp2_closed_form_matches_sum() {
    let text = "command = \"anomaly4\"\n[metric_group]\nfactors = [2]\nq_diag = [\"1/4\"]\n[fourmanifold]\nname = \"CP2\"\n";
    let (v, code) = run_json(text, &["--verify"]);
    assert_eq!(code, 0);
    // (√2)³·ζ₈ = 2·(1 + i)
    assert_eq!((v["exact"]["rational"].as_str(), v["exact"]["sqrt"].as_u64(), v["exact"]["zeta8"].as_u64()), (Some("2"), Some(2), Some(1)));
    assert_eq!(v["checks"]["full_sum_equals_closed_form"], true);
}

#[test]
fn domain_error_exit_code() {
    let (v, code) = run_json("command = \"milgram\"\nfactors = [2, 2]\nq_diag = [\"0/1\", \"0/1\"]\n", &[]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "DegenerateForm");
}

#[test]
fn schema_error_exit_code_and_lines() {
    let (v, code) = run_json("command = \"rt3\"\nlattice = \"A1\"\n\n[surgery]\nlinking = [[1, 2], [0, 1]]\n", &[]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "SchemaError");
    assert_eq!(v["error"]["issues"][0]["line"], 5);
    let (v, code) = run_json("command = \"gauss\"\nfactors = [4]\nq_diag = [\"2/16\"]\n", &[]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["issues"][0]["line"], 3);
}

#[test]
fn parse_error_exit_code() {
    let (v, code) = run_json("command = \"gauss\"\nfactors = [2\n", &[]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "ParseError");
}

#[test]
fn missing_file_is_parse_failure() {
    let out = run(Path::new("/nonexistent/job.toml"), &[], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic_across_threads() {
    let text = "command = \"anomaly4\"\nlattice = \"A2\"\n[fourmanifold]\nname = \"T4\"\n";
    let f = job(text);
    let a = run(f.path(), &["--verify"], Some("1"));
    let b = run(f.path(), &["--verify", "--threads", "4"], None);
    let c = run(f.path(), &["--verify"], Some("3"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn indentation_flag() {
    let f = job("command = \"dim1\"\ngroup = \"Z2\"\n");
    let compact = run(f.path(), &["--json-indent", "0"], None);
    let wide = run(f.path(), &["--json-indent", "4"], None);
    assert_eq!(String::from_utf8(compact.stdout.clone()).unwrap().trim().lines().count(), 1);
    let wide_s = String::from_utf8(wide.stdout.clone()).unwrap();
    assert!(wide_s.contains("\n    \""));
    let a: Value = serde_json::from_slice(&compact.stdout).unwrap();
    let b: Value = serde_json::from_slice(&wide.stdout).unwrap();
    assert_eq!(a, b);
}

#[test]
fn hash_matches_file_contents() {
    let text = "command = \"groupoid-card\"\n[pitower]\ncomponents = [[6], [1, 4]]\n";
    let (v, _) = run_json(text, &[]);
    assert_eq!(v["input_sha256"], tqftkit::job::sha256_hex(text));
    assert_eq!(v["value"], "25/6");
}

/// Every sample job in `jobs/` succeeds with all cross-checks enabled.
#[test]
fn sample_jobs_pass_verification() {
    let mut seen = std::collections::BTreeSet::new();
    for entry in std::fs::read_dir(jobs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        // The K3 sample enumerates 2²² gerbes; the unit and acceptance suites
        // cover it.
        if path.file_stem().and_then(|s| s.to_str()) == Some("anomaly4-k3") {
            continue;
        }
        let out = run(&path, &["--verify"], None);
        assert!(out.status.success(), "{}: {}", path.display(), String::from_utf8_lossy(&out.stdout));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        seen.insert(v["command"].as_str().unwrap().to_string());
    }
    let all: std::collections::BTreeSet<String> = tqftkit::Command::ALL.iter().map(|c| c.name().to_string()).collect();
    assert_eq!(seen, all);
}

#[test]
fn twisted_surface_and_cayley_table() {
    // Z2 × Z2 with the Heisenberg cocycle c((a,b),(a',b')) = ab'/2, indices a + 2b.
    let mut rows = Vec::new();
    for x in 0..4 {
        let row: Vec<String> = (0..4).map(|y| if (x & 1) == 1 && (y & 2) == 2 { "\"1/2\"".into() } else { "\"0/1\"".into() }).collect();
        rows.push(format!("[{}]", row.join(", ")));
    }
    let text = format!(
        "command = \"dw-surface\"\n[group]\ncayley = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]\n[cocycle]\ntable = [{}]\n[surface]\ngenus = 1\n",
        rows.join(", ")
    );
    let (v, code) = run_json(&text, &["--verify"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["twisted"], true);
    assert_eq!(v["center_dim"], 1);
    assert_eq!(v["value"], "1");
}

#[test]
fn verify_reports_cross_checks() {
    let (plain, _) = run_json("command = \"dw-surface\"\ngroup = \"S3\"\ngenus = 2\n", &[]);
    let (full, _) = run_json("command = \"dw-surface\"\ngroup = \"S3\"\ngenus = 2\n", &["--verify"]);
    assert_eq!(plain["value"], "81");
    assert!(plain["checks"].get("brute_force_agrees").is_none());
    assert_eq!(full["checks"]["brute_force_agrees"], true);
}
