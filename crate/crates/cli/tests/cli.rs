use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fogsim::report::{aggregate_results, read_rows, ResultRow, SummaryRow, SweepRow};
use tempfile::TempDir;

fn fogsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fogsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("scenario.json");
    fs::write(
        &path,
        r#"{"n_ues": 6, "n_fog": 4, "horizon_s": 120, "field": {"width_m": 800, "height_m": 800}}"#,
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn run_writes_consistent_results_and_summary() {
    let dir = TempDir::new().unwrap();
    let config = small_config(dir.path());
    let out = dir.path().join("out");
    for algo in ["mofco", "gcga", "ra", "onlycloud", "onlylocal"] {
        let o = fogsim(&["run", "--config", &config, "--algo", algo, "--seed", "4", "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{algo}: {}", stderr(&o));
        let results: Vec<ResultRow> = read_rows(fs::File::open(out.join("results.csv")).unwrap()).unwrap();
        let summary: Vec<SummaryRow> = read_rows(fs::File::open(out.join("summary.csv")).unwrap()).unwrap();
        assert!(!results.is_empty());
        assert_eq!(summary.len(), 1);
        let (total, migrations) = aggregate_results(&results);
        assert_eq!(summary[0].total_cost, total, "{algo}");
        assert_eq!(summary[0].migration_count, migrations, "{algo}");
        assert_eq!((summary[0].n_ues, summary[0].n_fog, summary[0].seed), (6, 4, 4));
        let text = fs::read_to_string(out.join("results.csv")).unwrap();
        assert!(!text.contains('\r'));
    }
}

#[test]
fn same_seed_gives_identical_results() {
    let dir = TempDir::new().unwrap();
    let config = small_config(dir.path());
    let mut files = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let o = fogsim(&["run", "--config", &config, "--algo", "mofco", "--seed", "11", "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        files.push(fs::read(out.join("results.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn unknown_algorithm_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let o = fogsim(&["run", "--algo", "bogus", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("Usage:"));
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn invalid_config_exits_one_and_missing_file_exits_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"n_ues": 0, "migration_coeff": -1}"#).unwrap();
    let out = dir.path().join("out");
    let o = fogsim(&["run", "--config", bad.to_str().unwrap(), "--algo", "ra", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    assert!(!out.exists());

    let missing = dir.path().join("nope.json");
    let o = fogsim(&["run", "--config", missing.to_str().unwrap(), "--algo", "ra", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn sweep_emits_one_row_per_algo_and_value() {
    let dir = TempDir::new().unwrap();
    let config = small_config(dir.path());
    let out = dir.path().join("sweep");
    let o = fogsim(&[
        "sweep", "--config", &config, "--param", "n_ues", "--values", "3,5,6", "--algos", "mofco,ra", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows: Vec<SweepRow> = read_rows(fs::File::open(out.join("sweep.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 6);
    for (row, (value, algo)) in rows.iter().zip([(3, "MOFCO"), (3, "RA"), (5, "MOFCO"), (5, "RA"), (6, "MOFCO"), (6, "RA")]) {
        assert_eq!(row.param, "n_ues");
        assert_eq!(row.value, value as f64);
        assert_eq!(row.n_ues, value);
        assert_eq!(row.algo, algo);
    }
}

#[test]
fn delta_sweep_normalizes_per_point() {
    let dir = TempDir::new().unwrap();
    let config = small_config(dir.path());
    let out = dir.path().join("sweep");
    let o = fogsim(&[
        "sweep", "--config", &config, "--param", "delta", "--values", "1e-7,1e-6", "--algos", "ra,onlylocal",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows: Vec<SweepRow> = read_rows(fs::File::open(out.join("sweep.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    for point in rows.chunks(2) {
        assert_eq!(point[0].value, point[1].value);
        assert!(point.iter().all(|r| r.normalized_cost > 0.0 && r.normalized_cost <= 1.0));
    }
}

#[test]
fn sweep_rejects_empty_or_bad_values() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("sweep");
    let out = out.to_str().unwrap();
    assert_eq!(code(&fogsim(&["sweep", "--param", "delta", "--values", "", "--out", out])), 1);
    assert_eq!(code(&fogsim(&["sweep", "--param", "delta", "--out", out])), 1);
    assert_eq!(code(&fogsim(&["sweep", "--param", "bogus", "--values", "1", "--out", out])), 1);
    assert_eq!(code(&fogsim(&["sweep", "--param", "n-ues", "--values", "2.5", "--out", out])), 1);
    assert!(!Path::new(out).exists());
}

#[test]
fn gen_trace_is_seed_stable_and_sized() {
    let dir = TempDir::new().unwrap();
    let mut bytes = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let o = fogsim(&["gen-trace", "--ues", "20", "--horizon", "600", "--seed", "5", "--out", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        bytes.push(fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    let text = String::from_utf8(bytes.remove(0)).unwrap();
    assert_eq!(text.lines().count(), 1 + 601 * 20);

    // The generated trace feeds straight back into a run.
    let trace = dir.path().join("a.csv");
    let out = dir.path().join("out");
    let o = fogsim(&[
        "run", "--trace", trace.to_str().unwrap(), "--algo", "onlylocal", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn gen_trace_errors() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("t.csv");
    let o = fogsim(&["gen-trace", "--ues", "0", "--horizon", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(!path.exists());
    let unwritable = dir.path().join("missing-dir").join("t.csv");
    let o = fogsim(&["gen-trace", "--ues", "2", "--horizon", "10", "--out", unwritable.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}
