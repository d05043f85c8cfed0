use std::path::Path;
use std::process::{Command, Output};

use asm_census_core::report::{census_from_json, ENGINE_VERSION};
use asm_census_core::{BigCount, CenterStructure, SymmetryClass};
use serde_json::{json, Value};

fn run_in(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_asm-census"));
    cmd.current_dir(dir).args(args).env_remove("ASM_CENSUS_CAP");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), args, &[]);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn count_small_orders() {
    let (code, out, _) = run(&["count", "--n", "4"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("total=42") && out.contains("methods agree"),
        "{out}"
    );

    let (code, out, _) = run(&["count", "--n", "1", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["total"], "1");
    assert_eq!(v["agree"], true);
}

#[test]
fn count_by_formula_only() {
    let (code, out, _) = run(&[
        "count", "--n", "30", "--method", "formula", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let row = out.lines().nth(1).unwrap();
    let digits = row.strip_prefix("30,formula,").unwrap();
    assert!(
        digits.len() > 60 && digits.bytes().all(|b| b.is_ascii_digit()),
        "{row}"
    );
    assert!(!out.contains("enumerate"));
}

#[test]
fn census_json_schema() {
    let (code, out, _) = run(&["census", "--class", "ht", "--n", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let order = [
        "schema",
        "n",
        "class",
        "counts",
        "total",
        "method",
        "elapsed_ms",
        "engine_version",
    ];
    assert_eq!(v.as_object().unwrap().len(), order.len());
    let positions: Vec<usize> = order
        .iter()
        .map(|k| out.find(&format!("\"{k}\":")).unwrap())
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{out}");
    assert_eq!(v["schema"], "asm-census/1");
    assert_eq!(v["counts"], json!({"center:+1": "2", "center:-1": "1"}));
    assert_eq!(v["total"], "3");
    assert_eq!(v["engine_version"], ENGINE_VERSION);
    let rec = census_from_json(out.trim()).unwrap();
    assert_eq!(rec.class, SymmetryClass::HalfTurn);
}

#[test]
fn census_qt_table_and_dd_counts() {
    let (code, out, _) = run(&["census", "--class", "qt", "--n", "5"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().filter(|l| l.starts_with("center:")).collect();
    assert_eq!(rows.len(), 2, "{out}");
    assert!(
        rows[0].starts_with("center:+1,adj:0") && rows[0].ends_with("2/1"),
        "{out}"
    );

    let (_, out, _) = run(&["census", "--class", "dd", "--n", "3", "--format", "json"]);
    let rec = census_from_json(out.trim()).unwrap();
    assert_eq!(rec.count(&CenterStructure::center(1)), BigCount::from(2u8));
    assert_eq!(rec.count(&CenterStructure::center(-1)), BigCount::from(1u8));

    let (_, out, _) = run(&["census", "--class", "qt", "--n", "7", "--format", "csv"]);
    assert_eq!(
        out,
        "n,class,structure,count\n7,qt,center:-1,adj:+1,8\n7,qt,center:-1,adj:0,4\n"
    );
}

#[test]
fn verify_sweeps() {
    let (code, out, _) = run(&["verify", "--conjecture", "ht", "--max-n", "7"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    for (line, n) in lines.iter().zip([3, 5, 7]) {
        assert!(
            line.contains(&format!("n={n} ")) && line.ends_with("holds"),
            "{line}"
        );
    }

    let (code, out, _) = run(&[
        "verify",
        "--conjecture",
        "2",
        "--max-n",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["numerator_count"], "2");
    assert_eq!(v[0]["denominator_count"], "1");
    assert_eq!(v[0]["holds"], true);

    let (code, out, _) = run(&[
        "verify",
        "--conjecture",
        "1a",
        "--max-n",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "[]");
}

fn seed_cache(dir: &Path, n: usize, class: &str, counts: Value, total: &str) {
    let doc = json!({
        "schema": "asm-census/1",
        "n": n,
        "class": class,
        "counts": counts,
        "total": total,
        "method": "filter",
        "elapsed_ms": 0,
        "engine_version": ENGINE_VERSION,
    });
    let key = format!("{ENGINE_VERSION}|{n}|{class}");
    let file = json!({ "entries": { key: doc } });
    std::fs::write(dir.join(".asm-census-cache.json"), file.to_string()).unwrap();
}

#[test]
fn violated_conjecture_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    seed_cache(
        dir.path(),
        3,
        "dd",
        json!({"center:+1": "3", "center:-1": "1"}),
        "4",
    );
    let out = run_in(
        dir.path(),
        &["verify", "--conjecture", "2", "--max-n", "3"],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("conjecture violated"), "{stdout}");
    // without the cache the real census is used
    let out = run_in(
        dir.path(),
        &["verify", "--conjecture", "2", "--max-n", "3", "--no-cache"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn failed_theorem_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    seed_cache(
        dir.path(),
        3,
        "ht",
        json!({"center:+1": "3", "center:-1": "1"}),
        "4",
    );
    let out = run_in(
        dir.path(),
        &["verify", "--conjecture", "ht", "--max-n", "3"],
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["census", "--class", "dd", "--n", "7", "--format", "json"];
    let first = run_in(dir.path(), &args, &[]);
    let cache = std::fs::read_to_string(dir.path().join(".asm-census-cache.json")).unwrap();
    assert!(cache.contains(&format!("{ENGINE_VERSION}|7|dd")));
    let second = run_in(dir.path(), &args, &[]);
    let a = census_from_json(std::str::from_utf8(&first.stdout).unwrap().trim()).unwrap();
    let b = census_from_json(std::str::from_utf8(&second.stdout).unwrap().trim()).unwrap();
    assert_eq!(a, b);

    // an entry from another engine version is ignored
    let stale = cache.replace(ENGINE_VERSION, "asm-census-core/0.0.0");
    let stale = stale.replace("\"72\"", "\"71\"");
    std::fs::write(dir.path().join(".asm-census-cache.json"), stale).unwrap();
    let third = run_in(dir.path(), &args, &[]);
    let c = census_from_json(std::str::from_utf8(&third.stdout).unwrap().trim()).unwrap();
    assert_eq!(c.counts, a.counts);

    let fresh = tempfile::tempdir().unwrap();
    run_in(
        fresh.path(),
        &["census", "--class", "ht", "--n", "3", "--no-cache"],
        &[],
    );
    assert!(!fresh.path().join(".asm-census-cache.json").exists());
}

#[test]
fn list_grids() {
    let (code, out, _) = run(&["list", "--class", "qt", "--n", "3", "--limit", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out, ".+.\n+-+\n.+.\n");

    let (_, out, _) = run(&["list", "--class", "ht", "--n", "5", "--limit", "2"]);
    let grids: Vec<&str> = out.split("\n\n").collect();
    assert_eq!(grids.len(), 2);
    assert!(out.chars().all(|c| "+.-\n".contains(c)));

    let (first, _, _) = run(&["list", "--n", "15", "--limit", "1"]);
    assert_eq!(first, 0);
}

#[test]
fn selfcheck_reports() {
    let (code, out, _) = run(&["selfcheck", "--max-n", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("7/7 and 42/42 matrices matched"), "{out}");
    assert!(out.trim_end().ends_with("selfcheck pass"));
    let (code, _, _) = run(&["selfcheck", "--max-n", "1"]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["selfcheck", "--max-n", "8"]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["census", "--class", "ht", "--n", "4"]).0, 2);
    assert_eq!(run(&["census", "--class", "vertical", "--n", "5"]).0, 2);
    assert_eq!(run(&["census", "--class", "plain", "--n", "5"]).0, 2);
    assert_eq!(run(&["verify", "--conjecture", "3", "--max-n", "5"]).0, 2);
    assert_eq!(run(&["count", "--n", "4", "--workers", "0"]).0, 2);
    assert_eq!(run(&["count", "--n", "16", "--method", "enumerate"]).0, 2);
}

#[test]
fn cap_from_flag_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["census", "--class", "ht", "--n", "7", "--no-cache"];
    let out = run_in(dir.path(), &args, &[("ASM_CENSUS_CAP", "5")]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_in(
        dir.path(),
        &[&args[..], &["--cap", "9"]].concat(),
        &[("ASM_CENSUS_CAP", "5")],
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.csv");
    let out = run_in(
        dir.path(),
        &[
            "census",
            "--class",
            "dd",
            "--n",
            "3",
            "--format",
            "csv",
            "--out",
            target.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(target).unwrap(),
        "n,class,structure,count\n3,dd,center:+1,2\n3,dd,center:-1,1\n"
    );
}

#[test]
fn worker_counts_agree() {
    let docs: Vec<_> = ["1", "2", "8"]
        .iter()
        .map(|w| {
            let (_, out, _) = run(&[
                "census",
                "--class",
                "qt",
                "--n",
                "9",
                "--format",
                "json",
                "--workers",
                w,
            ]);
            census_from_json(out.trim()).unwrap().counts
        })
        .collect();
    assert_eq!(docs[0], docs[1]);
    assert_eq!(docs[0], docs[2]);
}
