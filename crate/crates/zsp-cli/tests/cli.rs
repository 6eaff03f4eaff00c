//! End-to-end tests of the `zsp` binary: exit codes, payload shapes,
//! re-verification of printed results, and byte-level determinism.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zsp"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zsp"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("the binary runs")
}

fn payload(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not a single JSON document ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn write_file(dir: &tempfile::TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).expect("temp file");
    f.write_all(contents.as_bytes()).expect("write");
    path.to_str().expect("utf-8 path").to_string()
}

// ──────────────────────────────────────────────────────────────────────────
// info
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn info_reports_structure_and_classification() {
    let out = run(&["info", "Z2xZ4"]);
    assert_eq!(exit_code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["classification"], "level 2");
    assert_eq!(v["guaranteed_floor"], 2);
    assert_eq!(v["order"], 8);
    assert_eq!(v["involution_count"], 3);
    assert_eq!(v["sylow_split"]["two_part"], serde_json::json!([2, 4]));

    let v = payload(&run(&["info", "Z6"]));
    assert_eq!(v["classification"], "none");
    assert_eq!(v["guaranteed_floor"], Value::Null);
    assert_eq!(v["group_sum"], serde_json::json!([3]));

    let v = payload(&run(&["info", "Z2xZ2xZ2xZ5"]));
    assert_eq!(v["classification"], "level 4 (smaller levels open)");
    assert_eq!(v["guaranteed_floor"], 4);

    // Exactly three involutions wins over the odd-part residue.
    let v = payload(&run(&["info", "Z2xZ2xZ35"]));
    assert_eq!(v["classification"], "level 2");

    let out = run(&["info", "Z0"]);
    assert_eq!(exit_code(&out), 2);
}

// ──────────────────────────────────────────────────────────────────────────
// partition
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn partition_honors_count_flags_and_reverifies() {
    let out = run(&["partition", "Z2xZ2xZ2xZ3", "--triple", "5,2,0"]);
    assert_eq!(exit_code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["ok"], true);
    assert_eq!(v["verified"], true);
    assert_eq!(v["engine"], "constructive");
    assert_eq!(v["sizes"], serde_json::json!([3, 3, 3, 3, 3, 4, 4]));
    assert!(v.get("trace").is_none());

    let out = run(&["partition", "Z2xZ2xZ7", "--quadruple", "1,1,2,5"]);
    assert_eq!(exit_code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["sizes"], serde_json::json!([3, 4, 5, 5, 2, 2, 2, 2, 2]));
}

#[test]
fn partition_trace_names_the_route() {
    let out = run(&["partition", "Z7", "3,3", "--trace"]);
    let v = payload(&out);
    assert_eq!(v["trace"]["route"], "odd order direct");
    assert_eq!(v["trace"]["used_fallback_search"], false);
    assert!(v["trace"]["steps"].as_array().is_some_and(|s| !s.is_empty()));
}

#[test]
fn partition_refusals_and_errors_use_the_exit_contract() {
    // Unique involution: proved impossible, exit 1.
    let out = run(&["partition", "Z6", "3,2"]);
    assert_eq!(exit_code(&out), 1);
    let v = payload(&out);
    assert_eq!(v["ok"], false);
    assert_eq!(v["error"]["kind"], "unrealizable");

    // Size 1: refuted floor, exit 1.
    let out = run(&["partition", "Z7", "1,5"]);
    assert_eq!(exit_code(&out), 1);
    let v = payload(&out);
    assert_eq!(v["error"]["kind"], "floor_violation");
    assert_eq!(v["error"]["floor"], 2);
    assert_eq!(v["error"]["floor_status"], "refuted");

    // Below a floor that is merely not covered by any construction: open.
    let mut sizes = vec!["3"; 25];
    sizes.push("4");
    let arg = sizes.join(",");
    let out = run(&["partition", "Z2xZ2xZ2xZ2xZ5", &arg]);
    assert_eq!(exit_code(&out), 1);
    let v = payload(&out);
    assert_eq!(v["error"]["kind"], "floor_violation");
    assert_eq!(v["error"]["floor"], 4);
    assert_eq!(v["error"]["floor_status"], "open");

    // Sum mismatch and zero sizes: invalid input, exit 2, nothing on stdout.
    let out = run(&["partition", "Z7", "3,4"]);
    assert_eq!(exit_code(&out), 2);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("sum"));

    let out = run(&["partition", "Z7", "0,3,3"]);
    assert_eq!(exit_code(&out), 2);

    // Missing sizes entirely.
    let out = run(&["partition", "Z7"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn partition_oracle_engine_answers_small_groups() {
    let out = run(&["partition", "Z7", "3,3", "--engine", "oracle"]);
    assert_eq!(exit_code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["engine"], "oracle");
    assert_eq!(v["verified"], true);
    assert_eq!(v["sizes"], serde_json::json!([3, 3]));
}

// ──────────────────────────────────────────────────────────────────────────
// verify
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn verify_roundtrips_json_and_rejects_defects() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = run(&["partition", "Z2xZ2xZ2xZ3", "--triple", "5,2,0"]);
    let produced = payload(&out);
    let parts = produced["parts"].clone();

    // Wrapped layout.
    let wrapped = write_file(
        &dir,
        "wrapped.json",
        &serde_json::json!({ "parts": parts }).to_string(),
    );
    let out = run(&["verify", "Z2xZ2xZ2xZ3", &wrapped, "--triple", "5,2,0"]);
    assert_eq!(exit_code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["ok"], true);
    assert_eq!(v["tables"][0]["ok"], true);

    // Bare layout.
    let bare = write_file(&dir, "bare.json", &parts.to_string());
    let out = run(&["verify", "Z2xZ2xZ2xZ3", &bare]);
    assert_eq!(exit_code(&out), 0);

    // Flip one coordinate: the sums and coverage break, exit 1.
    let mut tampered = parts.clone();
    let c = tampered[0][0][0].as_u64().expect("coordinate");
    tampered[0][0][0] = Value::from((c + 1) % 2);
    let bad = write_file(&dir, "bad.json", &tampered.to_string());
    let out = run(&["verify", "Z2xZ2xZ2xZ3", &bad]);
    assert_eq!(exit_code(&out), 1);
    let v = payload(&out);
    assert_eq!(v["ok"], false);
    assert!(v["tables"][0]["violations"]
        .as_array()
        .is_some_and(|a| !a.is_empty()));

    // Empty parts list: every element is uncovered.
    let empty = write_file(&dir, "empty.json", "{\"parts\": []}");
    let out = run(&["verify", "Z2xZ2xZ2xZ3", &empty]);
    assert_eq!(exit_code(&out), 1);

    // Unreadable file: invalid input.
    let out = run(&["verify", "Z2xZ2xZ2xZ3", "/nonexistent/x.json"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_reads_the_plain_table_format() {
    let dir = tempfile::tempdir().expect("tempdir");
    let spec: zsp_core::GroupSpec = "Z2xZ2xZ2xZ3".parse().expect("group");
    let real = zsp_core::realize(&spec, &[3, 3, 3, 3, 3, 4, 4]).expect("realizable");
    let text = zsp_core::partition::format_table(&spec, &real.partition);

    let table = write_file(&dir, "table.txt", &text);
    let out = run(&["verify", "Z2xZ2xZ2xZ3", &table, "--appendix-format"]);
    assert_eq!(exit_code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["table_count"], 1);
    assert_eq!(v["tables"][0]["ok"], true);
    assert_eq!(v["tables"][0]["sizes"], serde_json::json!([3, 3, 3, 3, 3, 4, 4]));

    // The declared factor header must match the group argument.
    let out = run(&["verify", "Z24", &table, "--appendix-format"]);
    assert_eq!(exit_code(&out), 1);
    let v = payload(&out);
    let notes = v["tables"][0]["violations"].to_string();
    assert!(notes.contains("factors"), "unexpected violations: {notes}");

    // A flipped entry fails verification.
    let broken = text.replacen("[1, ", "[0, ", 1);
    assert_ne!(broken, text);
    let bad = write_file(&dir, "bad.txt", &broken);
    let out = run(&["verify", "Z2xZ2xZ2xZ3", &bad, "--appendix-format"]);
    assert_eq!(exit_code(&out), 1);

    // No tables at all: invalid input.
    let prose = write_file(&dir, "prose.txt", "nothing here\n");
    let out = run(&["verify", "Z2xZ2xZ2xZ3", &prose, "--appendix-format"]);
    assert_eq!(exit_code(&out), 2);
}

// ──────────────────────────────────────────────────────────────────────────
// skolem
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn skolem_decomposes_odd_groups() {
    let v = payload(&run(&["skolem", "Z7"]));
    assert_eq!(v["six_count"], 1);
    assert_eq!(v["pair_count"], 0);
    assert_eq!(v["verified"], true);

    let v = payload(&run(&["skolem", "Z3"]));
    assert_eq!(v["six_count"], 0);
    assert_eq!(v["pair_count"], 1);
    assert_eq!(v["pairs"], serde_json::json!([[[1], [2]]]));

    let v = payload(&run(&["skolem", "Z9"]));
    assert_eq!(v["six_count"], 1);
    assert_eq!(v["pair_count"], 1);
    assert_eq!(v["universe_size"], 8);

    let out = run(&["skolem", "Z8"]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--subset"));
}

#[test]
fn skolem_subset_files_work_in_both_layouts() {
    let dir = tempfile::tempdir().expect("tempdir");

    let json = write_file(&dir, "s.json", "{\"elements\": [[1],[2],[3],[10],[11],[12]]}");
    let out = run(&["skolem", "Z13", "--subset", &json]);
    assert_eq!(exit_code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["six_count"], 1);
    assert_eq!(v["pair_count"], 0);
    assert_eq!(v["verified"], true);

    let lines = write_file(&dir, "s.txt", "1\n2\n3\n10\n11\n12\n");
    let out = run(&["skolem", "Z13", "--subset", &lines]);
    assert_eq!(exit_code(&out), 0);

    // Odd-sized subsets cannot split into sixes and pairs.
    let odd = write_file(&dir, "odd.txt", "1\n2\n12\n");
    let out = run(&["skolem", "Z13", "--subset", &odd]);
    assert_eq!(exit_code(&out), 2);
}

// ──────────────────────────────────────────────────────────────────────────
// search
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn search_runs_the_oracle_directly() {
    let out = run(&["search", "Z2xZ2xZ3", "3,4,4"]);
    assert_eq!(exit_code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["engine"], "oracle");
    assert_eq!(v["verified"], true);

    let out = run(&["search", "Z6", "3,2"]);
    assert_eq!(exit_code(&out), 1);
    let v = payload(&out);
    assert_eq!(v["error"]["kind"], "infeasible");

    // A one-node budget cannot finish a real search.
    let out = run(&["search", "Z3xZ3xZ3", "3,3,4,4,4,4,4", "--budget", "1"]);
    assert_eq!(exit_code(&out), 1);
    let v = payload(&out);
    assert_eq!(v["error"]["kind"], "budget_exceeded");
    assert!(v["error"]["nodes"].as_u64().is_some());
}

#[test]
fn oracle_budget_env_var_is_honored() {
    let out = run_env(
        &["search", "Z3xZ3xZ3", "3,3,4,4,4,4,4"],
        &[("ZSP_ORACLE_BUDGET", "1")],
    );
    assert_eq!(exit_code(&out), 1);
    let v = payload(&out);
    assert_eq!(v["error"]["kind"], "budget_exceeded");

    // An explicit flag wins over the environment.
    let out = run_env(
        &["search", "Z3xZ3xZ3", "3,3,4,4,4,4,4", "--budget", "100000"],
        &[("ZSP_ORACLE_BUDGET", "1")],
    );
    assert_eq!(exit_code(&out), 0);

    let out = run_env(
        &["search", "Z7", "3,3"],
        &[("ZSP_ORACLE_BUDGET", "not a number")],
    );
    assert_eq!(exit_code(&out), 2);
}

// ──────────────────────────────────────────────────────────────────────────
// label
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn label_tasks_emit_verified_payloads() {
    let dir = tempfile::tempdir().expect("tempdir");
    let k34 = write_file(
        &dir,
        "k34.json",
        "{\"n\":7,\"edges\":[[0,3],[0,4],[0,5],[0,6],[1,3],[1,4],[1,5],[1,6],[2,3],[2,4],[2,5],[2,6]]}",
    );
    let out = run(&["label", "magic", &k34, "Z2xZ4"]);
    assert_eq!(exit_code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["magic_weight"], serde_json::json!([0, 0]));
    assert_eq!(
        v["twin_classes"],
        serde_json::json!([[0, 1, 2], [3, 4, 5, 6]])
    );

    // A star has a singleton twin class: no labeling can exist.
    let star = write_file(&dir, "star.txt", "7\n0 1\n0 2\n0 3\n0 4\n0 5\n0 6\n");
    let out = run(&["label", "magic", &star, "Z8"]);
    assert_eq!(exit_code(&out), 1);
    let v = payload(&out);
    assert_eq!(v["error"]["kind"], "infeasible");

    // Arc-irregular labeling of a path digraph.
    let path4 = write_file(&dir, "path4.txt", "4\n0 1\n1 2\n2 3\n");
    let out = run(&["label", "irregular", &path4, "Z13"]);
    assert_eq!(exit_code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["arcs"].as_array().map(|a| a.len()), Some(3));

    // Too small for every sufficient condition: refused with the bounds shown.
    let out = run(&["label", "irregular", &path4, "Z5"]);
    assert_eq!(exit_code(&out), 1);
    let v = payload(&out);
    assert_eq!(v["error"]["kind"], "infeasible");
    assert_eq!(v["feasibility"]["sqrt_bound"], false);

    // Distance-antimagic labeling of a clique (everyone is a true twin).
    let k4 = write_file(&dir, "k4.json", "{\"n\":4,\"edges\":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}");
    let out = run(&["label", "antimagic", &k4, "Z5"]);
    assert_eq!(exit_code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["verified"], true);

    // Graph files must parse.
    let bad = write_file(&dir, "bad.txt", "3\n0 9\n");
    let out = run(&["label", "magic", &bad, "Z4"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn label_join_pads_twin_classes_to_the_floor() {
    let dir = tempfile::tempdir().expect("tempdir");
    let k34 = write_file(
        &dir,
        "k34.json",
        "{\"n\":7,\"edges\":[[0,3],[0,4],[0,5],[0,6],[1,3],[1,4],[1,5],[1,6],[2,3],[2,4],[2,5],[2,6]]}",
    );
    let out = run(&["label", "join", &k34, "--floor", "4"]);
    assert_eq!(exit_code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["vertex_count"], 8);
    assert_eq!(v["twin_class_sizes"], serde_json::json!([4, 4]));
    assert!(v.get("labeling").is_none());

    // With a group of matching order the padded graph gets labeled too.
    let out = run(&["label", "join", &k34, "Z9", "--floor", "4"]);
    assert_eq!(exit_code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["labeling"]["verified"], true);

    let out = run(&["label", "join", &k34, "--floor", "0"]);
    assert_eq!(exit_code(&out), 2);
}

// ──────────────────────────────────────────────────────────────────────────
// determinism
// ──────────────────────────────────────────────────────────────────────────

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["info", "Z2xZ4xZ9"],
        vec!["partition", "Z2xZ4xZ9", "--triple", "22,0,1"],
        vec!["partition", "Z2xZ2xZ2xZ5", "--triple", "0,1,7"],
        vec!["skolem", "Z45"],
        vec!["search", "Z2xZ4", "3,4"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(exit_code(&a), 0, "args {args:?}");
        assert_eq!(a.stdout, b.stdout, "args {args:?}");
    }
}
