//! Command-line front end: argument parsing, subcommand dispatch,
//! streamed report emission, and the exit-code contract.
//!
//! Exit codes: 0 = all checks hold (or pure generation succeeded),
//! 2 = at least one violated verdict, 3 = at least one undecided
//! verdict or a benefit tie, 1 = usage or input error. A command line
//! (plus the `ABUNDANCE_MAX_BITS` environment variable for the global
//! precision cap) fully determines the output.

mod output;

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigUint;

use abundance_core::colossal::{self, CaError, Epsilon};
use abundance_core::criteria::CriterionKind;
use abundance_core::realnum::PrecisionBudget;
use abundance_core::sieve::{self, RangeReport, RecordKind, SieveConfig, VerdictCounts};

use output::{
    CaRow, Format, OracleRow, RecordRow, RowWriter, StatRow, SummaryRow, VerifyRenderer, VerifyRow,
    CA_HEADER, ORACLE_HEADER, RECORD_HEADER, STAT_HEADER, SUMMARY_HEADER, VERIFY_HEADER,
};

pub const ENV_MAX_BITS: &str = "ABUNDANCE_MAX_BITS";

#[derive(Parser, Debug)]
#[command(
    name = "abundance",
    about = "Rigorous verification of divisor-sum inequalities and colossally abundant numbers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check one criterion for every n in a range, streaming one row per n.
    Verify {
        /// One of: lagarias, robin, robin-unconditional, lemma203,
        /// bound204, lemma206, bound207, bound210.
        #[arg(long)]
        criterion: String,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Sieve worker threads (default: available parallelism).
        #[arg(long)]
        workers: Option<usize>,
        /// Sieve segment size.
        #[arg(long)]
        segment_size: Option<u64>,
        /// Starting precision for adaptive comparisons.
        #[arg(long)]
        initial_bits: Option<u32>,
    },
    /// Generate colossally abundant numbers with critical-epsilon intervals.
    Ca {
        /// Generate all entries with value <= LIMIT.
        #[arg(long, conflicts_with = "count")]
        limit: Option<u64>,
        /// Generate the first COUNT entries.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Enumerate record-setters of sigma(n)/n (sa) or d(n) (hc).
    Records {
        /// sa or hc.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        limit: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run the whole harmonic-bound suite up to a limit, one summary row
    /// per criterion.
    Lemmas {
        /// Run all five bounds (the only mode).
        #[arg(long)]
        all: bool,
        #[arg(long)]
        to: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        initial_bits: Option<u32>,
    },
    /// Empirical average-order residuals and prime-product ratios.
    Stats {
        /// Sample points for the summatory-sigma residual.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        bachmann: Vec<u64>,
        /// Sample points for the prime-product ratio.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        mertens: Vec<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Exhaustive maximizer of sigma(k)/k^(1+eps) up to a search limit.
    Oracle {
        /// Exact rational epsilon as U/V.
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        search_limit: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Parse argv (without the binary name) and run. Reports stream to
/// `out`; errors and usage go to `err`.
pub fn run<W: Write, E: Write>(args: &[String], out: &mut W, err: &mut E) -> i32 {
    let mut argv = vec!["abundance".to_string()];
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return 0;
                }
                _ => 1,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

fn budget(initial_bits: Option<u32>) -> Result<PrecisionBudget> {
    let mut b = PrecisionBudget::default_schedule();
    if let Some(init) = initial_bits {
        b = PrecisionBudget::new(init, b.max_bits.max(init), b.growth_factor)
            .map_err(|e| anyhow!("invalid precision budget: {e}"))?;
    }
    if let Ok(cap) = std::env::var(ENV_MAX_BITS) {
        let cap: u32 = cap
            .parse()
            .with_context(|| format!("{ENV_MAX_BITS} must be a positive integer"))?;
        b = b.with_max_bits(cap);
    }
    Ok(b)
}

fn exit_code_for(counts: &VerdictCounts) -> i32 {
    if counts.violated > 0 {
        2
    } else if counts.undecided > 0 {
        3
    } else {
        0
    }
}

fn dispatch<W: Write>(command: Command, out: &mut W) -> Result<i32> {
    match command {
        Command::Verify {
            criterion,
            from,
            to,
            format,
            workers,
            segment_size,
            initial_bits,
        } => {
            let kind = CriterionKind::from_token(&criterion)
                .ok_or_else(|| anyhow!("unknown criterion '{criterion}'"))?;
            let budget = budget(initial_bits)?;
            let config = SieveConfig::new(
                sieve::LIMIT_CAP,
                segment_size.unwrap_or(sieve::DEFAULT_SEGMENT_SIZE),
            )?;
            let workers = workers
                .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
                .unwrap_or(1)
                .max(1);
            let report = run_verify(kind, from, to, &config, budget, workers, format, out)?;
            Ok(exit_code_for(&report.counts))
        }
        Command::Ca {
            limit,
            count,
            format,
        } => {
            let budget = budget(None)?;
            let entries = match (limit, count) {
                (Some(limit), None) => {
                    colossal::ca_sequence_with_budget(&BigUint::from(limit), budget)
                }
                (None, Some(count)) => colossal::ca_sequence_take_with_budget(count, budget),
                _ => bail!("exactly one of --limit or --count is required"),
            };
            let entries = match entries {
                Ok(entries) => entries,
                Err(CaError::FourExponentialsTie { p, q, bits }) => {
                    bail!(TieError { p, q, bits })
                }
                Err(e) => return Err(e.into()),
            };
            let mut writer = RowWriter::new(format, out, &CA_HEADER, &[5, 20, 56, 11, 14, 14, 6]);
            for entry in &entries {
                let row = CaRow::from_entry(entry);
                writer.write_fields(&row.fields(), &row)?;
            }
            Ok(0)
        }
        Command::Records {
            kind,
            limit,
            format,
        } => {
            let kind = RecordKind::from_token(&kind)
                .ok_or_else(|| anyhow!("record kind must be 'sa' or 'hc'"))?;
            let entries = sieve::records(kind, limit)?;
            let mut writer = RowWriter::new(format, out, &RECORD_HEADER, &[4, 12, 44, 20]);
            for entry in &entries {
                let row = RecordRow::from_entry(entry);
                writer.write_fields(&row.fields(), &row)?;
            }
            Ok(0)
        }
        Command::Lemmas {
            all,
            to,
            format,
            initial_bits,
        } => {
            if !all {
                bail!("pass --all to run the harmonic-bound suite");
            }
            let budget = budget(initial_bits)?;
            let config = SieveConfig::default();
            let mut writer = RowWriter::new(
                format,
                out,
                &SUMMARY_HEADER,
                &[20, 8, 9, 12, 9, 9, 9, 9, 9, 14],
            );
            let mut counts = VerdictCounts::default();
            for kind in CriterionKind::LEMMA_SUITE {
                let lo = kind.validity_min();
                if to < lo {
                    continue;
                }
                let report = sieve::verify_range(kind, lo, to, &config, budget)?;
                let row = SummaryRow::from_report(&report);
                writer.write_fields(&row.fields(), &row)?;
                counts.strict_holds += report.counts.strict_holds;
                counts.equality += report.counts.equality;
                counts.violated += report.counts.violated;
                counts.undecided += report.counts.undecided;
            }
            Ok(exit_code_for(&counts))
        }
        Command::Stats {
            bachmann,
            mertens,
            format,
        } => {
            let stats = sieve::compute_stats(&bachmann, &mertens)?;
            let mut writer = RowWriter::new(format, out, &STAT_HEADER, &[9, 12, 16]);
            for (n, residual) in &stats.bachmann_residuals {
                let row = StatRow {
                    stat: "bachmann".to_string(),
                    x: *n,
                    value: format!("{residual:.9}"),
                };
                writer.write_fields(&row.fields(), &row)?;
            }
            for (x, ratio) in &stats.mertens_ratios {
                let row = StatRow {
                    stat: "mertens".to_string(),
                    x: *x,
                    value: format!("{ratio:.9}"),
                };
                writer.write_fields(&row.fields(), &row)?;
            }
            Ok(0)
        }
        Command::Oracle {
            epsilon,
            search_limit,
            format,
        } => {
            let eps = parse_epsilon(&epsilon)?;
            let maximizer = colossal::brute_force_ca_oracle(&eps, search_limit)?;
            let factorization = abundance_core::divisor::factorize_u64(maximizer)
                .expect("maximizer is positive")
                .to_ascii();
            let row = OracleRow {
                epsilon: eps.to_string(),
                search_limit,
                maximizer,
                factorization,
            };
            let mut writer = RowWriter::new(format, out, &ORACLE_HEADER, &[10, 14, 12, 44]);
            writer.write_fields(&row.fields(), &row)?;
            Ok(0)
        }
    }
}

#[derive(Debug)]
struct TieError {
    p: u64,
    q: u64,
    bits: u32,
}

impl std::fmt::Display for TieError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "benefit tie between primes {} and {} undecided at {} bits",
            self.p, self.q, self.bits
        )
    }
}

impl std::error::Error for TieError {}

fn parse_epsilon(text: &str) -> Result<Epsilon> {
    let (u, v) = text
        .split_once('/')
        .ok_or_else(|| anyhow!("epsilon must be of the form U/V"))?;
    let u: u64 = u.trim().parse().context("epsilon numerator")?;
    let v: u64 = v.trim().parse().context("epsilon denominator")?;
    Epsilon::new(u, v).map_err(|e| anyhow!("{e}"))
}

/// Chunked, order-preserving parallel range verification. Workers pull
/// contiguous chunks and render rows; the writer emits chunks strictly
/// in range order, so output is identical for any worker count.
#[allow(clippy::too_many_arguments)]
fn run_verify<W: Write>(
    kind: CriterionKind,
    from: u64,
    to: u64,
    config: &SieveConfig,
    budget: PrecisionBudget,
    workers: usize,
    format: Format,
    out: &mut W,
) -> Result<RangeReport> {
    const VERIFY_WIDTHS: &[usize] = &[10, 20, 13, 24, 24, 24, 24, 5];
    if from > to {
        bail!("--from must not exceed --to");
    }
    let mut writer = RowWriter::new(format, out, &VERIFY_HEADER, VERIFY_WIDTHS);

    // Chunk boundaries depend only on the range, so the emitted rows
    // are byte-identical for every worker count.
    let span = to - from + 1;
    let chunk_size = span.div_ceil(64).max(4096);
    let chunks: Vec<(u64, u64)> = {
        let mut v = Vec::new();
        let mut lo = from;
        while lo <= to {
            let hi = lo.saturating_add(chunk_size - 1).min(to);
            v.push((lo, hi));
            lo = hi + 1;
        }
        v
    };

    if workers == 1 || chunks.len() == 1 {
        // Same chunk walk as the parallel path, processed in order and
        // streamed without buffering.
        let mut reports = Vec::with_capacity(chunks.len());
        for &(lo, hi) in &chunks {
            let mut renderer = VerifyRenderer::new(kind.token());
            let mut io_error: Option<anyhow::Error> = None;
            let report = sieve::verify_range_streamed(kind, lo, hi, config, budget, &mut |row| {
                if io_error.is_some() {
                    return;
                }
                let rendered = renderer.render(&row);
                if let Err(e) = writer.write_fields(&rendered.fields(), &rendered) {
                    io_error = Some(e);
                }
            })?;
            if let Some(e) = io_error {
                return Err(e);
            }
            reports.push(report);
        }
        return RangeReport::merge(reports).ok_or_else(|| anyhow!("empty verification range"));
    }

    let next_chunk = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Result<(Vec<VerifyRow>, RangeReport)>)>();
    let reports = std::thread::scope(|scope| -> Result<Vec<RangeReport>> {
        for _ in 0..workers.min(chunks.len()) {
            let tx = tx.clone();
            let chunks = &chunks;
            let next = &next_chunk;
            let config = config.clone();
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= chunks.len() {
                    break;
                }
                let (lo, hi) = chunks[i];
                let mut rows = Vec::new();
                let mut renderer = VerifyRenderer::new(kind.token());
                let result =
                    sieve::verify_range_streamed(kind, lo, hi, &config, budget, &mut |row| {
                        rows.push(renderer.render(&row));
                    })
                    .map(|report| (rows, report))
                    .map_err(|e| anyhow!("{e}"));
                if tx.send((i, result)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        // Reorder buffer: emit chunk i only after 0..i are done.
        let mut pending: std::collections::BTreeMap<usize, (Vec<VerifyRow>, RangeReport)> =
            std::collections::BTreeMap::new();
        let mut next_to_write = 0usize;
        let mut reports = Vec::with_capacity(chunks.len());
        for (i, result) in rx {
            pending.insert(i, result?);
            while let Some(entry) = pending.remove(&next_to_write) {
                let (rows, report) = entry;
                for row in &rows {
                    writer.write_fields(&row.fields(), row)?;
                }
                reports.push(report);
                next_to_write += 1;
            }
        }
        if next_to_write != chunks.len() {
            bail!("worker pool ended early");
        }
        Ok(reports)
    })?;

    RangeReport::merge(reports).ok_or_else(|| anyhow!("empty verification range"))
}
