//! Rendering of reports and verification records in the three output formats.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use wronsk_core::coefficient::{factorial, ratios, render_ratio};
use wronsk_core::report::{group_digits, rational_string};
use wronsk_core::ConstReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[value(name = "human-table")]
    Human,
    #[value(name = "json-lines")]
    JsonLines,
    Csv,
}

fn group_if_integer(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || c == '-') {
        group_digits(s)
    } else {
        s.to_string()
    }
}

/// Pads every column to its widest cell.
fn write_aligned<W: Write>(out: &mut W, rows: &[Vec<String>]) -> io::Result<()> {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                let pad = widths[c] - cell.chars().count();
                if c == 0 {
                    format!("{cell}{}", " ".repeat(pad))
                } else {
                    format!("{}{cell}", " ".repeat(pad))
                }
            })
            .collect();
        writeln!(out, "{}", line.join("  ").trim_end())?;
    }
    Ok(())
}

pub fn write_report<W: Write>(out: &mut W, report: &ConstReport, format: Format) -> io::Result<()> {
    match format {
        Format::Human => {
            let r = ratios(report);
            let rows = vec![
                vec!["p".into(), report.p.to_string()],
                vec!["N!".into(), group_digits(&report.group_order().to_string())],
                vec!["|Φ_p|".into(), group_digits(&report.phi_size.to_string())],
                vec!["|Φ_p|/N!".into(), report.phi_fraction_text()],
                vec!["even".into(), group_digits(&report.even_count.to_string())],
                vec!["odd".into(), group_digits(&report.odd_count.to_string())],
                vec![
                    "Wronskian".into(),
                    group_digits(&report.wronskian.to_string()),
                ],
                vec![
                    "signed sum".into(),
                    group_digits(&report.signed_sum.to_string()),
                ],
                vec!["const(p)".into(), group_digits(&report.const_p.to_string())],
                vec![
                    "const(p)/p!".into(),
                    group_if_integer(&r.over_p_factorial_text),
                ],
                vec![
                    "const(p)/N!".into(),
                    group_if_integer(&r.over_n_factorial_text),
                ],
            ];
            write_aligned(out, &rows)
        }
        Format::JsonLines => {
            serde_json::to_writer(&mut *out, report)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.serialize(report).map_err(io::Error::other)?;
            w.flush()
        }
    }
}

/// A row of the `|Φ_p|` / parity / constant table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiRow {
    pub p: u32,
    pub n_factorial: String,
    pub phi_size: u64,
    pub phi_fraction: String,
    pub even: u64,
    pub odd: u64,
    pub const_p: String,
}

/// A row of the ratio table. Exact ratios as `n/d`, plus their renderings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioRow {
    pub p: u32,
    pub p_factorial: String,
    pub n_factorial: String,
    pub const_p: String,
    pub const_over_p_factorial: String,
    pub const_over_p_factorial_text: String,
    pub const_over_n_factorial: String,
    pub const_over_n_factorial_text: String,
}

impl PhiRow {
    pub fn from_report(r: &ConstReport) -> Self {
        PhiRow {
            p: r.p,
            n_factorial: r.group_order().to_string(),
            phi_size: r.phi_size,
            phi_fraction: r.phi_fraction_text(),
            even: r.even_count,
            odd: r.odd_count,
            const_p: r.const_p.to_string(),
        }
    }
}

impl RatioRow {
    pub fn from_report(r: &ConstReport) -> Self {
        RatioRow {
            p: r.p,
            p_factorial: factorial(r.p as u64).to_string(),
            n_factorial: r.group_order().to_string(),
            const_p: r.const_p.to_string(),
            const_over_p_factorial: rational_string(&r.ratio_p_factorial),
            const_over_p_factorial_text: render_ratio(&r.ratio_p_factorial),
            const_over_n_factorial: rational_string(&r.ratio_n_factorial),
            const_over_n_factorial_text: render_ratio(&r.ratio_n_factorial),
        }
    }
}

fn write_rows<W: Write, T: Serialize>(
    out: &mut W,
    rows: &[T],
    header: Vec<String>,
    human: impl Fn(&T) -> Vec<String>,
    format: Format,
) -> io::Result<()> {
    match format {
        Format::Human => {
            let mut table = vec![header];
            table.extend(rows.iter().map(human));
            write_aligned(out, &table)
        }
        Format::JsonLines => {
            for row in rows {
                serde_json::to_writer(&mut *out, row)?;
                writeln!(out)?;
            }
            Ok(())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row).map_err(io::Error::other)?;
            }
            w.flush()
        }
    }
}

pub fn write_phi_table<W: Write>(
    out: &mut W,
    reports: &[ConstReport],
    format: Format,
) -> io::Result<()> {
    let rows: Vec<PhiRow> = reports.iter().map(PhiRow::from_report).collect();
    let header = ["p", "N!", "|Φ_p|", "|Φ_p|/N!", "even", "odd", "const(p)"]
        .map(String::from)
        .to_vec();
    write_rows(
        out,
        &rows,
        header,
        |r| {
            vec![
                r.p.to_string(),
                group_digits(&r.n_factorial),
                group_digits(&r.phi_size.to_string()),
                r.phi_fraction.clone(),
                group_digits(&r.even.to_string()),
                group_digits(&r.odd.to_string()),
                group_digits(&r.const_p),
            ]
        },
        format,
    )
}

pub fn write_ratio_table<W: Write>(
    out: &mut W,
    reports: &[ConstReport],
    format: Format,
) -> io::Result<()> {
    let rows: Vec<RatioRow> = reports.iter().map(RatioRow::from_report).collect();
    let header = ["p", "p!", "N!", "const(p)", "const(p)/p!", "const(p)/N!"]
        .map(String::from)
        .to_vec();
    write_rows(
        out,
        &rows,
        header,
        |r| {
            vec![
                r.p.to_string(),
                group_digits(&r.p_factorial),
                group_digits(&r.n_factorial),
                group_digits(&r.const_p),
                group_if_integer(&r.const_over_p_factorial_text),
                group_if_integer(&r.const_over_n_factorial_text),
            ]
        },
        format,
    )
}

/// Outcome of a `verify` or `bench` run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub command: String,
    pub mode: String,
    pub p: u32,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub details: Vec<String>,
}

pub fn write_record<W: Write>(out: &mut W, record: &Record, format: Format) -> io::Result<()> {
    match format {
        Format::Human => {
            let status = if record.pass { "PASS" } else { "FAIL" };
            write!(
                out,
                "{status} {} {} p={}",
                record.command, record.mode, record.p
            )?;
            if let Some(seed) = record.seed {
                write!(out, " seed={seed}")?;
            }
            writeln!(out)?;
            for d in &record.details {
                writeln!(out, "  {d}")?;
            }
            Ok(())
        }
        Format::JsonLines => {
            serde_json::to_writer(&mut *out, record)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["command", "mode", "p", "pass", "seed", "details"])?;
            w.write_record([
                record.command.clone(),
                record.mode.clone(),
                record.p.to_string(),
                record.pass.to_string(),
                record.seed.map(|s| s.to_string()).unwrap_or_default(),
                record.details.join("; "),
            ])?;
            w.flush()
        }
    }
}
