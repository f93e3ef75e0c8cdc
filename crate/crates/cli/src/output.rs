//! Output rendering: CSV, JSON Lines, and aligned tables over the same
//! row structs. All interval endpoints are rendered outward (lower
//! endpoints toward minus infinity, upper endpoints toward plus
//! infinity) so printed brackets still enclose the exact values.

use std::collections::HashMap;
use std::io::Write;
use std::rc::Rc;

use anyhow::Result;
use clap::ValueEnum;
use num_traits::ToPrimitive;
use serde::Serialize;

use abundance_core::criteria::CheckReport;
use abundance_core::realnum::{IntervalReal, Rounding};
use abundance_core::sieve::{Measure, RangeReport, RangeRow, RecordEntry};

/// Significant digits for interval endpoints in reports.
pub const ENDPOINT_DIGITS: u32 = 20;
/// Significant digits for epsilon endpoints and stats values.
pub const SHORT_DIGITS: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

/// One verification row, pre-rendered.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyRow {
    pub n: u64,
    pub kind: String,
    pub verdict: String,
    pub lhs_lo: String,
    pub lhs_hi: String,
    pub rhs_lo: String,
    pub rhs_hi: String,
    pub bits: u32,
}

pub const VERIFY_HEADER: [&str; 8] = [
    "n", "kind", "verdict", "lhs_lo", "lhs_hi", "rhs_lo", "rhs_hi", "bits",
];

fn outward_pair(interval: &IntervalReal, digits: u32) -> (String, String) {
    interval.to_decimal_pair(digits)
}

/// Exact u64 rendered like the 20-significant-digit endpoint style
/// (integers are exact, so both directions agree).
fn exact_u64_endpoint(v: u64) -> String {
    let digits = v.to_string();
    if digits.len() >= ENDPOINT_DIGITS as usize {
        return digits;
    }
    let mut out = digits.clone();
    out.push('.');
    for _ in 0..(ENDPOINT_DIGITS as usize - digits.len()) {
        out.push('0');
    }
    out
}

impl VerifyRow {
    pub fn from_report(report: &CheckReport) -> Self {
        let (lhs_lo, lhs_hi) = outward_pair(&report.lhs, ENDPOINT_DIGITS);
        let (rhs_lo, rhs_hi) = outward_pair(&report.rhs, ENDPOINT_DIGITS);
        VerifyRow {
            n: report.n.to_u64().unwrap_or(u64::MAX),
            kind: report.kind.token().to_string(),
            verdict: report.verdict.token().to_string(),
            lhs_lo,
            lhs_hi,
            rhs_lo,
            rhs_hi,
            bits: report.precision_used,
        }
    }

    pub fn fields(&self) -> [String; 8] {
        [
            self.n.to_string(),
            self.kind.clone(),
            self.verdict.clone(),
            self.lhs_lo.clone(),
            self.lhs_hi.clone(),
            self.rhs_lo.clone(),
            self.rhs_hi.clone(),
            self.bits.to_string(),
        ]
    }
}

/// Renders verification rows with per-block caching of the shared
/// enclosure strings.
pub struct VerifyRenderer {
    kind: String,
    cache: HashMap<u64, Rc<BlockStrings>>,
}

struct BlockStrings {
    lhs: Option<(String, String)>,
    rhs: (String, String),
    bits: u32,
}

impl VerifyRenderer {
    pub fn new(kind: &str) -> Self {
        VerifyRenderer {
            kind: kind.to_string(),
            cache: HashMap::new(),
        }
    }

    pub fn render(&mut self, row: &RangeRow<'_>) -> VerifyRow {
        match row {
            RangeRow::Checked(report) => VerifyRow::from_report(report),
            RangeRow::Screened { n, sigma, block } => {
                let strings = self
                    .cache
                    .entry(block.id)
                    .or_insert_with(|| {
                        Rc::new(BlockStrings {
                            lhs: block.lhs.as_ref().map(|i| outward_pair(i, ENDPOINT_DIGITS)),
                            rhs: outward_pair(&block.rhs, ENDPOINT_DIGITS),
                            bits: block.bits,
                        })
                    })
                    .clone();
                let (lhs_lo, lhs_hi) = match (&strings.lhs, sigma) {
                    (_, Some(s)) => {
                        let rendered = exact_u64_endpoint(*s);
                        (rendered.clone(), rendered)
                    }
                    (Some((lo, hi)), None) => (lo.clone(), hi.clone()),
                    (None, None) => unreachable!("screened row without a left side"),
                };
                VerifyRow {
                    n: *n,
                    kind: self.kind.clone(),
                    verdict: "strict_holds".to_string(),
                    lhs_lo,
                    lhs_hi,
                    rhs_lo: strings.rhs.0.clone(),
                    rhs_hi: strings.rhs.1.clone(),
                    bits: strings.bits,
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaRow {
    pub index: u32,
    pub n: String,
    pub factorization: String,
    pub sigma_ratio: String,
    pub eps_lo: String,
    pub eps_hi: String,
    pub multiplied_prime: String,
}

pub const CA_HEADER: [&str; 7] = [
    "index",
    "n",
    "factorization",
    "sigma_ratio",
    "eps_lo",
    "eps_hi",
    "multiplied_prime",
];

impl CaRow {
    pub fn from_entry(entry: &abundance_core::CaEntry) -> Self {
        CaRow {
            index: entry.index,
            n: entry.value.to_string(),
            factorization: entry.factorization.to_ascii(),
            sigma_ratio: entry.sigma_ratio.to_decimal(3),
            // Outward bounds of the whole critical interval.
            eps_lo: entry
                .eps_critical
                .0
                .lo()
                .to_decimal(SHORT_DIGITS, Rounding::Down),
            eps_hi: entry
                .eps_critical
                .1
                .hi()
                .to_decimal(SHORT_DIGITS, Rounding::Up),
            multiplied_prime: entry
                .multiplied_prime
                .map(|p| p.to_string())
                .unwrap_or_default(),
        }
    }

    pub fn fields(&self) -> [String; 7] {
        [
            self.index.to_string(),
            self.n.clone(),
            self.factorization.clone(),
            self.sigma_ratio.clone(),
            self.eps_lo.clone(),
            self.eps_hi.clone(),
            self.multiplied_prime.clone(),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RecordRow {
    pub kind: String,
    pub n: u64,
    pub factorization: String,
    pub measure: String,
}

pub const RECORD_HEADER: [&str; 4] = ["kind", "n", "factorization", "measure"];

impl RecordRow {
    pub fn from_entry(entry: &RecordEntry) -> Self {
        let factorization = abundance_core::divisor::factorize_u64(entry.n)
            .map(|f| f.to_ascii())
            .unwrap_or_default();
        RecordRow {
            kind: entry.kind.token().to_string(),
            n: entry.n,
            factorization,
            measure: match &entry.measure {
                Measure::Ratio(r) => r.to_string(),
                Measure::Count(d) => d.to_string(),
            },
        }
    }

    pub fn fields(&self) -> [String; 4] {
        [
            self.kind.clone(),
            self.n.to_string(),
            self.factorization.clone(),
            self.measure.clone(),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub kind: String,
    pub from: u64,
    pub to: u64,
    pub strict_holds: u64,
    pub equality: u64,
    pub violated: u64,
    pub undecided: u64,
    pub fallbacks: u64,
    pub worst_n: String,
    pub worst_margin: String,
}

pub const SUMMARY_HEADER: [&str; 10] = [
    "kind",
    "from",
    "to",
    "strict_holds",
    "equality",
    "violated",
    "undecided",
    "fallbacks",
    "worst_n",
    "worst_margin",
];

impl SummaryRow {
    pub fn from_report(report: &RangeReport) -> Self {
        SummaryRow {
            kind: report.kind.token().to_string(),
            from: report.lo,
            to: report.hi,
            strict_holds: report.counts.strict_holds,
            equality: report.counts.equality,
            violated: report.counts.violated,
            undecided: report.counts.undecided,
            fallbacks: report.fallback_checks,
            worst_n: report.worst.map(|w| w.n.to_string()).unwrap_or_default(),
            worst_margin: report
                .worst
                .map(|w| format!("{:.6e}", w.relative_margin))
                .unwrap_or_default(),
        }
    }

    pub fn fields(&self) -> [String; 10] {
        [
            self.kind.clone(),
            self.from.to_string(),
            self.to.to_string(),
            self.strict_holds.to_string(),
            self.equality.to_string(),
            self.violated.to_string(),
            self.undecided.to_string(),
            self.fallbacks.to_string(),
            self.worst_n.clone(),
            self.worst_margin.clone(),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StatRow {
    pub stat: String,
    pub x: u64,
    pub value: String,
}

pub const STAT_HEADER: [&str; 3] = ["stat", "x", "value"];

impl StatRow {
    pub fn fields(&self) -> [String; 3] {
        [self.stat.clone(), self.x.to_string(), self.value.clone()]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub epsilon: String,
    pub search_limit: u64,
    pub maximizer: u64,
    pub factorization: String,
}

pub const ORACLE_HEADER: [&str; 4] = ["epsilon", "search_limit", "maximizer", "factorization"];

impl OracleRow {
    pub fn fields(&self) -> [String; 4] {
        [
            self.epsilon.clone(),
            self.search_limit.to_string(),
            self.maximizer.to_string(),
            self.factorization.clone(),
        ]
    }
}

/// Streaming sink for one table of rows in the selected format.
///
/// CSV rows are plain comma joins: no field in any schema can contain a
/// comma, quote, or newline (decimals, tokens, factorizations with
/// spaces), so the output is unambiguous CSV with an always-present
/// header, UTF-8, LF line endings.
pub struct RowWriter<'a, W: Write> {
    format: Format,
    out: &'a mut W,
    widths: &'static [usize],
    wrote_header: bool,
    header: &'static [&'static str],
}

impl<'a, W: Write> RowWriter<'a, W> {
    pub fn new(
        format: Format,
        out: &'a mut W,
        header: &'static [&'static str],
        widths: &'static [usize],
    ) -> Self {
        RowWriter {
            format,
            out,
            widths,
            wrote_header: false,
            header,
        }
    }

    fn ensure_header(&mut self) -> Result<()> {
        if self.wrote_header {
            return Ok(());
        }
        self.wrote_header = true;
        match self.format {
            Format::Csv => {
                writeln!(self.out, "{}", self.header.join(","))?;
            }
            Format::Table => {
                let mut line = String::new();
                for (i, h) in self.header.iter().enumerate() {
                    let width = self.widths.get(i).copied().unwrap_or(12);
                    line.push_str(&format!("{h:<width$} "));
                }
                writeln!(self.out, "{}", line.trim_end())?;
            }
            Format::Json => {}
        }
        Ok(())
    }

    pub fn write_fields<S: Serialize>(&mut self, fields: &[String], row: &S) -> Result<()> {
        self.ensure_header()?;
        match self.format {
            Format::Csv => {
                debug_assert!(fields
                    .iter()
                    .all(|f| !f.contains(',') && !f.contains('"') && !f.contains('\n')));
                writeln!(self.out, "{}", fields.join(","))?;
            }
            Format::Table => {
                let mut line = String::new();
                for (i, f) in fields.iter().enumerate() {
                    let width = self.widths.get(i).copied().unwrap_or(12);
                    line.push_str(&format!("{f:<width$} "));
                }
                writeln!(self.out, "{}", line.trim_end())?;
            }
            Format::Json => {
                serde_json::to_writer(&mut *self.out, row)?;
                writeln!(self.out)?;
            }
        }
        Ok(())
    }
}
