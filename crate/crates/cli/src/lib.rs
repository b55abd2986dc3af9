//! Batch front end for computing and verifying `const(p)`; the `wronsk`
//! binary is a thin wrapper around [`run_with_args`].
//!
//! Exit codes: 0 success/pass, 1 verification failure, 2 usage error or
//! refused request, 3 internal consistency failure.

pub mod output;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::{self, Write};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use wronsk_core::oracle::{self, random, Extracted};
use wronsk_core::parallel::{default_depth, partition_work};
use wronsk_core::permutation::enumerate_filtered_capped;
use wronsk_core::{
    const_of_p, const_of_p_with, count_late_growing, enumerate_backtracking, ConstReport, Error,
    ExactRational, RunOptions,
};

use output::{write_phi_table, write_ratio_table, write_record, write_report, Format, Record};

/// Environment variable capping `N` for the exhaustive (v1) generator.
const V1_CAP_ENV: &str = "WRONSK_V1_MAX_N";
const V1_DEFAULT_CAP: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "wronsk",
    version,
    about = "Exact alternating-composition constants const(p)"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute const(p) and the statistics of the contributing set.
    Const {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        workers: Option<usize>,
        /// Split depth for the parallel runner.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value = "human-table")]
        format: Format,
        /// Suppress progress lines on stderr.
        #[arg(long)]
        quiet: bool,
    },
    /// Print the contributing-set table (2) or the ratio table (3) for p = 1..=max-p.
    Table {
        #[arg(long)]
        max_p: u32,
        #[arg(long, value_parser = ["2", "3"])]
        which: String,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value = "human-table")]
        format: Format,
        #[arg(long)]
        quiet: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        p: u32,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        trials: u32,
        /// Allow the long-running sizes beyond the default caps.
        #[arg(long)]
        slow: bool,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value = "human-table")]
        format: Format,
    },
    /// Time one of the two generators.
    Bench {
        #[arg(long)]
        p: u32,
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value = "human-table")]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Oracle,
    TheoremRandom,
    Generators,
    Oeis,
    Parity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    V1,
    V2,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Internal(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InexactDivision { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn v1_cap() -> usize {
    std::env::var(V1_CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(V1_DEFAULT_CAP)
}

fn mode_name(mode: Mode) -> String {
    mode.to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

fn refuse_above(
    p: u32,
    cap: u32,
    what: &str,
    slow_cap: Option<u32>,
    slow: bool,
) -> Result<(), Failure> {
    let limit = if slow { slow_cap.unwrap_or(cap) } else { cap };
    if p > limit {
        let hint = match slow_cap {
            Some(s) if !slow && p <= s => " (pass --slow to allow it)".to_string(),
            _ => String::new(),
        };
        return Err(Failure::Usage(format!(
            "{what} at p = {p} is beyond the feasibility cap p <= {limit}{hint}"
        )));
    }
    Ok(())
}

fn verify(
    p: u32,
    mode: Mode,
    seed: u64,
    trials: u32,
    slow: bool,
    workers: Option<usize>,
) -> Result<Record, Failure> {
    if p == 0 {
        return Err(Failure::Usage("p must be at least 1".into()));
    }
    let mut record = Record {
        command: "verify".into(),
        mode: mode_name(mode),
        p,
        pass: true,
        seed: None,
        details: Vec::new(),
    };
    match mode {
        Mode::Oracle => {
            refuse_above(
                p,
                oracle::ORACLE_SOFT_LIMIT,
                "full-group expansion",
                Some(5),
                slow,
            )?;
            if p > oracle::ORACLE_SOFT_LIMIT {
                eprintln!("warning: expanding all (2p)! compositions at p = {p} takes a while");
            }
            let n = 2 * p as u64;
            let brute = oracle::brute_force_const(p)?;
            let engine = const_of_p(p, workers)?.const_p;
            record.pass = brute == engine;
            record.details.push(format!(
                "brute force over {} compositions = {brute}; engine = {engine}",
                wronsk_core::coefficient::factorial(n)
            ));
        }
        Mode::TheoremRandom => {
            refuse_above(p, 2, "random-weight theorem check", Some(3), slow)?;
            record.seed = Some(seed);
            let expected = const_of_p(p, workers)?.const_p;
            let expected = ExactRational::from_integer(expected);
            let mut rng = random::rng(seed);
            let n = 2 * p;
            for t in 0..trials {
                let weights = random::random_weights(&mut rng, n as usize);
                let f = random::random_test_function(&mut rng, p, n);
                let v = oracle::verify_theorem(p, &weights, Some(&f))?;
                let ok = match &v.extracted {
                    Extracted::Ratio(r) => v.holds && *r == expected,
                    // A vanishing Wronskian is consistent but says nothing.
                    Extracted::Indeterminate => v.holds,
                };
                record.pass &= ok;
                let shown: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
                record.details.push(format!(
                    "trial {t}: {} extracted {} (weights [{}], f = {f})",
                    if ok { "ok" } else { "MISMATCH" },
                    v.extracted,
                    shown.join(", ")
                ));
            }
        }
        Mode::Generators => {
            let v1: BTreeSet<_> = enumerate_filtered_capped(p, v1_cap())?.collect();
            let v2: BTreeSet<_> = enumerate_backtracking(p)?.collect();
            record.pass = v1 == v2;
            record.details.push(format!(
                "filtered: {}, backtracking: {}",
                v1.len(),
                v2.len()
            ));
            if let Some(s) = v1.symmetric_difference(&v2).next() {
                record.details.push(format!("counterexample: {s}"));
            }
        }
        Mode::Oeis => {
            let n = 2 * p as usize;
            let phi = enumerate_backtracking(p)?.count() as u64;
            let late = count_late_growing(n)?;
            record.pass = phi == late;
            record.details.push(format!(
                "|Φ_{p}| = {phi}; late-growing permutations of 1..={n}: {late}"
            ));
            if !record.pass {
                let shifted = count_late_growing(n - 1)?;
                record.details.push(format!(
                    "note: late-growing permutations of 1..={}: {shifted}",
                    n - 1
                ));
            }
        }
        Mode::Parity => {
            let r = const_of_p(p, workers)?;
            let diff = r.even_count.abs_diff(r.odd_count);
            let dominant_ok = if p.is_multiple_of(2) {
                r.odd_count > r.even_count
            } else {
                r.even_count > r.odd_count
            };
            record.pass = diff == 1 && dominant_ok;
            record.details.push(format!(
                "even = {}, odd = {}, difference {diff}, {} dominant",
                r.even_count,
                r.odd_count,
                if r.odd_count > r.even_count {
                    "odd"
                } else {
                    "even"
                }
            ));
        }
    }
    Ok(record)
}

fn bench(p: u32, algo: Algo, workers: Option<usize>) -> Result<Record, Failure> {
    let mut record = Record {
        command: "bench".into(),
        mode: format!("{algo:?}").to_lowercase(),
        p,
        pass: true,
        seed: None,
        details: Vec::new(),
    };
    match algo {
        Algo::V1 => {
            let cap = v1_cap();
            if 2 * p as usize > cap {
                return Err(Failure::Usage(format!(
                    "v1 walks all of S_N; N = {} exceeds the cap {cap} (set {V1_CAP_ENV} to raise it)",
                    2 * p
                )));
            }
            let start = Instant::now();
            let mut gen = enumerate_filtered_capped(p, cap)?;
            let emitted = gen.by_ref().count();
            let elapsed = start.elapsed();
            record.details.push(format!("examined {}", gen.examined()));
            record.details.push(format!("emitted {emitted}"));
            record
                .details
                .push(format!("wall {:.3} ms", elapsed.as_secs_f64() * 1e3));
        }
        Algo::V2 => {
            let start = Instant::now();
            let mut gen = enumerate_backtracking(p)?;
            let emitted = gen.by_ref().count();
            let enumerate = start.elapsed();
            let options = RunOptions {
                workers,
                depth: None,
                progress: false,
            };
            let depth = default_depth(p, options.workers())?;
            let tasks = partition_work(p, depth)?.len();
            let start = Instant::now();
            let report = const_of_p_with(p, &options)?;
            let evaluate = start.elapsed();
            record.details.push(format!("examined {}", gen.examined()));
            record.details.push(format!("pruned {}", gen.pruned()));
            record.details.push(format!("emitted {emitted}"));
            record.details.push(format!(
                "enumerate wall {:.3} ms (streaming, 1 thread)",
                enumerate.as_secs_f64() * 1e3
            ));
            record.details.push(format!(
                "evaluate wall {:.3} ms ({} workers, depth {depth}, {tasks} tasks)",
                evaluate.as_secs_f64() * 1e3,
                options.workers()
            ));
            record.details.push(format!("peak tasks {tasks}"));
            record
                .details
                .push(format!("const(p) = {}", report.const_p));
        }
    }
    Ok(record)
}

/// Executes one parsed command, writing its output to `out`. `Ok(false)`
/// means a verification ran and failed.
pub fn run<W: Write>(cli: Cli, out: &mut W) -> Result<bool, Failure> {
    match cli.command {
        Command::Const {
            p,
            workers,
            depth,
            format,
            quiet,
        } => {
            let report = const_of_p_with(
                p,
                &RunOptions {
                    workers,
                    depth,
                    progress: !quiet,
                },
            )?;
            write_report(out, &report, format)?;
        }
        Command::Table {
            max_p,
            which,
            workers,
            format,
            quiet,
        } => {
            if max_p == 0 {
                return Err(Failure::Usage("--max-p must be at least 1".into()));
            }
            let reports = (1..=max_p)
                .map(|p| {
                    const_of_p_with(
                        p,
                        &RunOptions {
                            workers,
                            depth: None,
                            progress: !quiet,
                        },
                    )
                })
                .collect::<Result<Vec<ConstReport>, _>>()?;
            match which.as_str() {
                "2" => write_phi_table(out, &reports, format)?,
                _ => write_ratio_table(out, &reports, format)?,
            }
        }
        Command::Verify {
            p,
            mode,
            seed,
            trials,
            slow,
            workers,
            format,
        } => {
            let record = verify(p, mode, seed, trials, slow, workers)?;
            write_record(out, &record, format)?;
            out.flush()?;
            return Ok(record.pass);
        }
        Command::Bench {
            p,
            algo,
            workers,
            format,
        } => {
            let record = bench(p, algo, workers)?;
            write_record(out, &record, format)?;
        }
    }
    out.flush()?;
    Ok(true)
}

/// Parses `args` (including the program name), runs the command and maps
/// the outcome to an exit code. Diagnostics go to `err`.
pub fn run_with_args<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let code = match run(cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "internal error: {msg}");
            3
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "io error: {e}");
            3
        }
    };
    let _ = out.flush();
    code
}
