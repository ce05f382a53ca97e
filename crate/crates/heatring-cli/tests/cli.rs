//! End-to-end tests against the real binary: spawn it, check streams and
//! exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn heatring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatring"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn assert_exit(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        stdout(output),
        stderr(output)
    );
}

#[test]
fn bare_invocation_prints_usage_and_fails() {
    let out = heatring(&[]);
    assert_exit(&out, 1);
    let text = format!("{}{}", stdout(&out), stderr(&out));
    assert!(text.contains("Usage"), "{text}");
}

#[test]
fn help_and_version_succeed() {
    let help = heatring(&["--help"]);
    assert_exit(&help, 0);
    assert!(stdout(&help).contains("Usage"));

    let version = heatring(&["--version"]);
    assert_exit(&version, 0);
    assert!(stdout(&version).contains("heatring"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = heatring(&["solve", "--turbo"]);
    assert_exit(&out, 1);
    assert!(stderr(&out).contains("--turbo"), "{}", stderr(&out));
}

#[test]
fn zero_threads_is_a_usage_error() {
    let out = heatring(&["solve", "--strategy", "queues", "--threads", "0"]);
    assert_exit(&out, 1);
    assert!(stderr(&out).contains("--threads"), "{}", stderr(&out));
}

#[test]
fn unstable_parameters_are_a_runtime_error() {
    let out = heatring(&["solve", "--nodes", "10", "--steps", "1", "--alpha", "1.0"]);
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("unstable"), "{}", stderr(&out));
}

#[test]
fn allow_unstable_overrides_the_guard() {
    let out = heatring(&[
        "solve",
        "--nodes",
        "10",
        "--steps",
        "1",
        "--alpha",
        "1.0",
        "--allow-unstable",
    ]);
    assert_exit(&out, 0);
}

#[test]
fn solve_dumps_the_hand_checked_field() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("out.txt");
    let out = heatring(&[
        "solve",
        "--nodes",
        "4",
        "--steps",
        "1",
        "--dump-field",
        dump.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    assert_eq!(std::fs::read_to_string(&dump).unwrap(), "1\n1\n2\n2\n");
    let summary = stdout(&out);
    assert!(summary.contains("min=1 max=2 mean=1.5 total_heat=6"), "{summary}");
}

#[test]
fn validate_never_changes_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("plain.txt");
    let checked = dir.path().join("checked.txt");
    let base = [
        "solve", "--nodes", "600", "--steps", "40", "--threads", "4",
    ];
    let out = heatring(&[&base[..], &["--dump-field", plain.to_str().unwrap()]].concat());
    assert_exit(&out, 0);
    let out = heatring(
        &[
            &base[..],
            &["--validate", "--dump-field", checked.to_str().unwrap()],
        ]
        .concat(),
    );
    assert_exit(&out, 0);
    assert_eq!(
        std::fs::read(&plain).unwrap(),
        std::fs::read(&checked).unwrap(),
        "dumps must be byte-identical"
    );
}

#[test]
fn bench_emits_csv_on_stdout_and_summaries_on_stderr() {
    let out = heatring(&[
        "bench",
        "--nodes",
        "2000",
        "--steps",
        "50",
        "--repetitions",
        "3",
        "--warmup",
        "0",
    ]);
    assert_exit(&out, 0);
    let csv = stdout(&out);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "strategy,threads,nodes,steps,alpha,dt,dx,repetition,elapsed_s,cells_per_s"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for (i, row) in rows.iter().enumerate() {
        assert!(
            row.starts_with(&format!("queues,1,2000,50,0.25,1,1,{i},")),
            "{row}"
        );
    }
    assert_eq!(stderr(&out).lines().count(), 3, "{}", stderr(&out));
}

#[test]
fn bench_zero_steps_is_a_runtime_error() {
    let out = heatring(&["bench", "--steps", "0", "--nodes", "10"]);
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("zero steps"), "{}", stderr(&out));
}

#[test]
fn bench_appends_keep_a_single_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("results.csv");
    let args = [
        "bench", "--nodes", "1000", "--steps", "20", "--repetitions", "2",
        "--warmup", "0", "--output", path.to_str().unwrap(), "--append",
    ];
    for _ in 0..2 {
        let out = heatring(&args);
        assert_exit(&out, 0);
        // With --output, stdout carries the summaries and confirmation.
        assert!(stdout(&out).contains("wrote 2 records"), "{}", stdout(&out));
    }
    let text = std::fs::read_to_string(&path).unwrap();
    let headers = text.lines().filter(|l| l.starts_with("strategy,")).count();
    assert_eq!(headers, 1, "{text}");
    assert_eq!(text.lines().count(), 5, "{text}");
}

#[test]
fn append_without_output_is_a_usage_error() {
    let out = heatring(&["bench", "--append"]);
    assert_exit(&out, 1);
}

#[test]
fn sweep_covers_the_thread_list() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = heatring(&[
        "sweep",
        "--nodes",
        "1000",
        "--steps",
        "20",
        "--thread-list",
        "1,2,4",
        "--repetitions",
        "2",
        "--warmup",
        "0",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    for threads in ["1", "2", "4"] {
        assert_eq!(
            rows.iter()
                .filter(|r| r.starts_with(&format!("queues,{threads},")))
                .count(),
            2,
            "{text}"
        );
    }
}

#[test]
fn sweep_rejects_a_zero_in_the_thread_list() {
    let out = heatring(&["sweep", "--thread-list", "1,0,2"]);
    assert_exit(&out, 1);
    assert!(stderr(&out).contains("--thread-list"), "{}", stderr(&out));
}

fn write_planted_csv(path: &Path) {
    let mut text =
        String::from("strategy,threads,nodes,steps,alpha,dt,dx,repetition,elapsed_s,cells_per_s\n");
    // queues follows t(p) = 1 + 8/p exactly, including the 2/20/40 points.
    for p in [1u32, 2, 4, 8, 16, 20, 40] {
        let t = 1.0 + 8.0 / f64::from(p);
        text.push_str(&format!("queues,{p},1000,10,0.25,1,1,0,{t},{}\n", 10_000.0 / t));
    }
    // barrier follows t(p) = 2 + 4/p, sampled only where t_average needs it.
    for p in [2u32, 20, 40] {
        let t = 2.0 + 4.0 / f64::from(p);
        text.push_str(&format!("barrier,{p},1000,10,0.25,1,1,0,{t},{}\n", 10_000.0 / t));
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn analyze_recovers_planted_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("planted.csv");
    write_planted_csv(&csv);
    let out = heatring(&["analyze", "--input", csv.to_str().unwrap()]);
    assert_exit(&out, 0);
    let report = stdout(&out);
    assert!(
        report.contains("strategy=queues samples=7 serial_s=1.000000 parallel_s=8.000000 r_squared=1.000000"),
        "{report}"
    );
    assert!(
        report.contains("strategy=barrier samples=3 serial_s=2.000000 parallel_s=4.000000 r_squared=1.000000"),
        "{report}"
    );
    // t_average of queues: mean of 5.0, 1.4, 1.2.
    assert!(report.contains("strategy=queues t2=5.000000 t20=1.400000 t40=1.200000 t_average=2.533333"), "{report}");
}

#[test]
fn analyze_classifies_when_efforts_are_given() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("planted.csv");
    write_planted_csv(&csv);
    let out = heatring(&[
        "analyze",
        "--input",
        csv.to_str().unwrap(),
        "--efforts",
        "queues=3.0,barrier=1.5",
    ]);
    assert_exit(&out, 0);
    let report = stdout(&out);
    // queues: more effort (x=+1) and smaller t_average, so faster (y=+1).
    assert!(report.contains("classify label=queues x=1.000000 y=1.000000"), "{report}");
    assert!(report.contains("classify label=barrier x=-1.000000 y=-1.000000"), "{report}");
}

#[test]
fn analyze_names_the_label_missing_t_average_data() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("planted.csv");
    write_planted_csv(&csv);
    let out = heatring(&[
        "analyze",
        "--input",
        csv.to_str().unwrap(),
        "--efforts",
        "sequential=1.0",
    ]);
    assert_exit(&out, 2);
    assert!(stderr(&out).contains("sequential"), "{}", stderr(&out));
}

#[test]
fn analyze_report_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("planted.csv");
    let report_path = dir.path().join("report.txt");
    write_planted_csv(&csv);
    let out = heatring(&[
        "analyze",
        "--input",
        csv.to_str().unwrap(),
        "--output",
        report_path.to_str().unwrap(),
    ]);
    assert_exit(&out, 0);
    let report = std::fs::read_to_string(&report_path).unwrap();
    assert!(report.contains("serial_s=1.000000"), "{report}");
}

#[test]
fn analyze_missing_input_is_a_runtime_error() {
    let out = heatring(&["analyze", "--input", "/nonexistent/results.csv"]);
    assert_exit(&out, 2);
}

#[test]
fn metrics_counts_a_fixture_tree() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("lib.rs"),
        "// doc\nfn a() {}\nfn b() {}\n\n/* block\n   comment */\nfn c() {}\n",
    )
    .unwrap();
    std::fs::write(dir.path().join("tool.py"), "# setup\nx = 1\n").unwrap();
    let out = heatring(&["metrics", "--path", dir.path().to_str().unwrap()]);
    assert_exit(&out, 0);
    let report = stdout(&out);
    assert!(report.contains("total: files=2 code=4 comment=4 blank=1"), "{report}");
    assert!(report.contains("cocomo-organic: kloc=0.004"), "{report}");
}

#[test]
fn metrics_on_a_missing_path_is_a_runtime_error() {
    let out = heatring(&["metrics", "--path", "/nonexistent/src"]);
    assert_exit(&out, 2);
}
