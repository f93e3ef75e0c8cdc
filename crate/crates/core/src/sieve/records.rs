//! Record-setters of sigma(n)/n (superabundant) and of the divisor
//! count d(n) (highly composite), by segmented sieve with exact
//! cross-multiplied comparisons.

use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::divisor::SigmaRatio;

use super::{divisor_count_segment, sigma_segment, SieveError, DEFAULT_SEGMENT_SIZE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordKind {
    /// sigma(n)/n record-setters (superabundant numbers).
    Sa,
    /// d(n) record-setters (highly composite numbers).
    Hc,
}

impl RecordKind {
    pub fn token(&self) -> &'static str {
        match self {
            RecordKind::Sa => "sa",
            RecordKind::Hc => "hc",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "sa" => Some(RecordKind::Sa),
            "hc" => Some(RecordKind::Hc),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Measure {
    /// Exact sigma(n)/n.
    Ratio(SigmaRatio),
    /// d(n).
    Count(u64),
}

#[derive(Debug, Clone)]
pub struct RecordEntry {
    pub n: u64,
    pub kind: RecordKind,
    pub measure: Measure,
}

/// All record-setters up to `limit` in increasing n. Records are
/// defined against every smaller positive integer, so n = 1 opens each
/// list.
pub fn records(kind: RecordKind, limit: u64) -> Result<Vec<RecordEntry>, SieveError> {
    if limit < 1 {
        return Err(SieveError::InputError("limit must be at least 1"));
    }
    let mut out = Vec::new();
    match kind {
        RecordKind::Sa => {
            // Best ratio so far as an exact fraction sigma/n.
            let mut best: Option<(u64, u64)> = None;
            for_each_segment(limit, |lo, hi| {
                let (sigmas, overflows) = sigma_segment(lo, hi)?;
                if let Some(&n) = overflows.first() {
                    return Err(SieveError::Overflow { n });
                }
                for (i, &s) in sigmas.iter().enumerate() {
                    let n = lo + i as u64;
                    let is_record = match best {
                        None => true,
                        Some((bs, bn)) => (s as u128) * (bn as u128) > (bs as u128) * (n as u128),
                    };
                    if is_record {
                        best = Some((s, n));
                        out.push(RecordEntry {
                            n,
                            kind,
                            measure: Measure::Ratio(SigmaRatio::new(
                                BigUint::from(s),
                                BigUint::from(n),
                            )),
                        });
                    }
                }
                Ok(())
            })?;
        }
        RecordKind::Hc => {
            let mut best = 0u64;
            for_each_segment(limit, |lo, hi| {
                let counts = divisor_count_segment(lo, hi)?;
                for (i, &d) in counts.iter().enumerate() {
                    let n = lo + i as u64;
                    if d > best {
                        best = d;
                        out.push(RecordEntry {
                            n,
                            kind,
                            measure: Measure::Count(d),
                        });
                    }
                }
                Ok(())
            })?;
        }
    }
    Ok(out)
}

fn for_each_segment(
    limit: u64,
    mut body: impl FnMut(u64, u64) -> Result<(), SieveError>,
) -> Result<(), SieveError> {
    let mut lo = 1u64;
    while lo <= limit {
        let hi = lo.saturating_add(DEFAULT_SEGMENT_SIZE - 1).min(limit);
        body(lo, hi)?;
        lo = hi + 1;
    }
    Ok(())
}
