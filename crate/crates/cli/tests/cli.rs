//! End-to-end runs of the `wronsk` binary.

use std::process::{Command, Output};

use wronsk_cli::output::{PhiRow, RatioRow, Record};
use wronsk_core::{const_of_p, ConstReport};

fn wronsk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wronsk"))
        .args(args)
        .output()
        .expect("spawn wronsk")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn const_human_table() {
    let out = wronsk(&["const", "--p", "3", "--quiet"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let line = |key: &str| {
        text.lines()
            .find(|l| l.split_whitespace().next() == Some(key))
            .unwrap_or_else(|| panic!("no {key} line in\n{text}"))
            .split_whitespace()
            .last()
            .unwrap()
            .to_string()
    };
    assert_eq!(line("const(p)"), "90");
    assert_eq!(line("|Φ_p|"), "35");
    assert_eq!(line("|Φ_p|/N!"), "≈1/20");
    assert_eq!(line("even"), "18");
    assert_eq!(line("odd"), "17");
    assert_eq!(line("const(p)/N!"), "0.125");
}

#[test]
fn const_json_round_trips_exactly() {
    for p in [1, 4, 5] {
        let out = wronsk(&[
            "const",
            "--p",
            &p.to_string(),
            "--format",
            "json-lines",
            "--quiet",
        ]);
        assert_eq!(code(&out), 0);
        let parsed: ConstReport = serde_json::from_str(stdout(&out).trim()).unwrap();
        assert_eq!(parsed, const_of_p(p, Some(1)).unwrap());
    }
}

#[test]
fn const_csv_round_trips_exactly() {
    let out = wronsk(&["const", "--p", "4", "--format", "csv", "--quiet"]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<ConstReport> = reader.deserialize().collect::<Result<_, _>>().unwrap();
    assert_eq!(rows, vec![const_of_p(4, Some(1)).unwrap()]);
    assert_eq!(rows[0].const_p.to_string(), "586656");
}

#[test]
fn const_is_independent_of_workers_and_depth() {
    let run = |extra: &[&str]| {
        let mut args = vec!["const", "--p", "5", "--format", "json-lines", "--quiet"];
        args.extend_from_slice(extra);
        stdout(&wronsk(&args))
    };
    let reference = run(&["--workers", "1"]);
    assert_eq!(run(&["--workers", "3", "--depth", "1"]), reference);
    assert_eq!(run(&["--workers", "2", "--depth", "4"]), reference);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&wronsk(&["const", "--p", "0"])), 2);
    assert_eq!(code(&wronsk(&["const", "--p", "64"])), 2);
    assert_eq!(code(&wronsk(&["table", "--max-p", "3", "--which", "4"])), 2);
    assert_eq!(code(&wronsk(&["table", "--max-p", "0", "--which", "2"])), 2);
    assert_eq!(
        code(&wronsk(&["verify", "--p", "5", "--mode", "oracle"])),
        2
    );
    assert_eq!(
        code(&wronsk(&["verify", "--p", "3", "--mode", "theorem-random"])),
        2
    );
    assert_eq!(code(&wronsk(&["bench", "--p", "5", "--algo", "v1"])), 2);
    assert_eq!(code(&wronsk(&["frobnicate"])), 2);
    let refused = wronsk(&["bench", "--p", "5", "--algo", "v1"]);
    assert!(String::from_utf8_lossy(&refused.stderr).contains("WRONSK_V1_MAX_N"));
}

#[test]
fn v1_cap_is_configurable() {
    let out = Command::new(env!("CARGO_BIN_EXE_wronsk"))
        .args(["bench", "--p", "3", "--algo", "v1"])
        .env("WRONSK_V1_MAX_N", "4")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn help_exits_0() {
    let out = wronsk(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("const"));
}

#[test]
fn contributing_set_table() {
    let out = wronsk(&[
        "table",
        "--max-p",
        "4",
        "--which",
        "2",
        "--format",
        "json-lines",
        "--quiet",
    ]);
    assert_eq!(code(&out), 0);
    let rows: Vec<PhiRow> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let summary: Vec<_> = rows
        .iter()
        .map(|r| {
            (
                r.p,
                r.n_factorial.as_str(),
                r.phi_size,
                r.phi_fraction.as_str(),
                r.even,
                r.odd,
                r.const_p.as_str(),
            )
        })
        .collect();
    assert_eq!(
        summary,
        vec![
            (1, "2", 1, "1/2", 1, 0, "1"),
            (2, "24", 3, "1/8", 1, 2, "2"),
            (3, "720", 35, "≈1/20", 18, 17, "90"),
            (4, "40320", 1001, "≈1/40", 500, 501, "586656"),
        ]
    );
}

#[test]
fn ratio_table_human() {
    let out = wronsk(&["table", "--max-p", "6", "--which", "3", "--quiet"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().collect())
        .collect();
    let tail: Vec<_> = rows.iter().map(|r| (r[0], r[4], r[5])).collect();
    assert_eq!(
        tail,
        vec![
            ("1", "1", "0.5"),
            ("2", "1", "0.083"),
            ("3", "15", "0.125"),
            ("4", "24_444", "14.55"),
            // const(5)/10! = 527751.98…, which rounds to 5.3 at two digits.
            ("5", "≈1.6·10^10", "≈5.3·10^5"),
            ("6", "≈1.1·10^19", "≈1.6·10^13"),
        ]
    );
}

#[test]
fn ratio_table_csv_is_exact() {
    let out = wronsk(&[
        "table", "--max-p", "4", "--which", "3", "--format", "csv", "--quiet",
    ]);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<RatioRow> = reader.deserialize().collect::<Result<_, _>>().unwrap();
    let exact: Vec<_> = rows
        .iter()
        .map(|r| r.const_over_n_factorial.as_str())
        .collect();
    assert_eq!(exact, ["1/2", "1/12", "1/8", "291/20"]);
    assert_eq!(rows[3].const_over_p_factorial, "24444/1");
}

fn record(args: &[&str]) -> (i32, Record) {
    let mut full = args.to_vec();
    full.extend_from_slice(&["--format", "json-lines"]);
    let out = wronsk(&full);
    let rec = serde_json::from_str(stdout(&out).trim())
        .unwrap_or_else(|e| panic!("{e}: {}", stdout(&out)));
    (code(&out), rec)
}

#[test]
fn verify_oracle_passes() {
    let (c, rec) = record(&["verify", "--p", "4", "--mode", "oracle"]);
    assert_eq!(c, 0);
    assert!(rec.pass);
    assert!(rec.details[0].contains("= 586656"));
}

#[test]
fn verify_theorem_random_is_seeded() {
    let (c, a) = record(&[
        "verify",
        "--p",
        "2",
        "--mode",
        "theorem-random",
        "--seed",
        "7",
    ]);
    assert_eq!(c, 0);
    assert!(a.pass);
    assert_eq!(a.seed, Some(7));
    assert_eq!(a.details.len(), 5);
    assert!(a.details.iter().all(|d| d.contains("extracted 2 ")));
    let (_, b) = record(&[
        "verify",
        "--p",
        "2",
        "--mode",
        "theorem-random",
        "--seed",
        "7",
    ]);
    assert_eq!(a, b);
    let (_, c3) = record(&[
        "verify",
        "--p",
        "2",
        "--mode",
        "theorem-random",
        "--seed",
        "8",
    ]);
    assert_ne!(a.details, c3.details);
}

#[test]
fn verify_generators_and_parity() {
    let (c, rec) = record(&["verify", "--p", "4", "--mode", "generators"]);
    assert_eq!((c, rec.pass), (0, true));
    assert_eq!(rec.details[0], "filtered: 1001, backtracking: 1001");
    let (c, rec) = record(&["verify", "--p", "6", "--mode", "parity"]);
    assert_eq!((c, rec.pass), (0, true));
    assert!(rec.details[0].contains("even = 2302635, odd = 2302636"));
}

#[test]
fn verify_late_growing_reports_both_lengths() {
    let (c, rec) = record(&["verify", "--p", "1", "--mode", "oeis"]);
    assert_eq!((c, rec.pass), (0, true));
    // From p = 2 on, the count at length 2p differs; the length 2p-1 count matches.
    let (c, rec) = record(&["verify", "--p", "3", "--mode", "oeis"]);
    assert_eq!((c, rec.pass), (1, false));
    assert!(rec.details[0].contains("|Φ_3| = 35; late-growing permutations of 1..=6: 139"));
    assert!(rec.details[1].contains("1..=5: 35"));
}

#[test]
fn verify_human_output() {
    let out = wronsk(&["verify", "--p", "2", "--mode", "generators"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("PASS verify generators p=2\n"));
}

#[test]
fn bench_reports_counters() {
    let (c, rec) = record(&["bench", "--p", "3", "--algo", "v1"]);
    assert_eq!(c, 0);
    assert_eq!(&rec.details[..2], ["examined 720", "emitted 35"]);
    let (c, rec) = record(&["bench", "--p", "4", "--algo", "v2", "--workers", "2"]);
    assert_eq!(c, 0);
    assert!(rec.details.contains(&"emitted 1001".to_string()));
    assert!(rec.details.iter().any(|d| d == "const(p) = 586656"));
}
