//! Exact rational densities for eventually periodic sets, plus the windowed
//! estimator for everything else.
//!
//! Schnirelmann density is an infimum over all prefixes; for an eventually
//! periodic set the prefix ratio is eventually monotone toward the limit
//! density along each period-aligned residue class, so a finite scan plus a
//! comparison with the limit is a complete certificate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intsets::{EventuallyPeriodic, IntegerSet, WindowSample};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Windowed,
}

/// Where a density value is attained or approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum DensityWitness {
    Point { n: i64 },
    Interval { lo: i64, hi: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub value: Rational,
    pub witness: Option<DensityWitness>,
    pub method: Method,
}

fn require_non_negative(s: &IntegerSet) -> Result<()> {
    let negative = match s {
        IntegerSet::EventuallyPeriodic(ep) => ep.has_negative_members(),
        IntegerSet::Explicit(v) => v.first().is_some_and(|&x| x < 0),
        IntegerSet::BlockFamily(_) => false,
    };
    if negative {
        Err(Error::NegativeMembers)
    } else {
        Ok(())
    }
}

/// Limit density |residues| / period of the periodic tail.
fn tail_density(ep: &EventuallyPeriodic) -> Rational {
    Rational::new(ep.residues().len() as i64, ep.period())
}

/// Schnirelmann density: the exact infimum over n of |A ∩ [1, n]| / n.
///
/// Defined for eventually periodic and explicit sets without negative
/// members. The witness is the least prefix attaining the infimum; it is
/// absent when the infimum equals the unattained limit density, except for
/// explicit sets with 1 as a member, where the reported witness points just
/// beyond the maximum element (the ratio only approaches 0 there).
pub fn schnirelmann(s: &IntegerSet) -> Result<DensityReport> {
    require_non_negative(s)?;
    match s {
        IntegerSet::EventuallyPeriodic(ep) => {
            let delta = tail_density(ep);
            let p = ep.period();
            let t = ep.threshold();
            // Scan bound: the prefix ratio is monotone toward the limit
            // density along each period-aligned class once past the
            // threshold, and never crosses it, so scanning one full period
            // beyond max(T, 1) decides the infimum. Kept at the larger
            // T + p*max(2, T) for headroom.
            let n0 = (t + p * t.max(2)).max(t.max(1) + 2 * p);
            let mut count: u64 = 0;
            let mut best: Option<(Rational, i64)> = None;
            for n in 1..=n0 {
                count += ep.contains(n) as u64;
                let ratio = Rational::new(count as i64, n);
                if best.is_none_or(|(b, _)| ratio < b) {
                    best = Some((ratio, n));
                }
            }
            let (mut min_ratio, argmin) = best.unwrap();
            // Probe one more period block: past the scan bound the running
            // minimum may only creep toward the limit density from above,
            // never improve below it.
            for n in n0 + 1..=n0 + p {
                count += ep.contains(n) as u64;
                let ratio = Rational::new(count as i64, n);
                if ratio < min_ratio {
                    debug_assert!(ratio > delta, "scan bound too small for {ep:?}");
                    min_ratio = ratio;
                }
            }
            if min_ratio <= delta {
                Ok(DensityReport {
                    value: min_ratio,
                    witness: Some(DensityWitness::Point { n: argmin }),
                    method: Method::Exact,
                })
            } else {
                Ok(DensityReport {
                    value: delta,
                    witness: None,
                    method: Method::Exact,
                })
            }
        }
        IntegerSet::Explicit(v) => {
            let min_positive = v.iter().copied().find(|&x| x >= 1);
            let witness = match min_positive {
                // 1 is absent: the prefix [1, n] is empty either at n = 1 or
                // at the least n below the first member, so 0 is attained.
                None => Some(DensityWitness::Point { n: 1 }),
                Some(m) if m > 1 => Some(DensityWitness::Point { n: 1 }),
                // 1 is a member: every prefix ratio is positive; the infimum
                // 0 is only approached beyond the maximum element.
                Some(_) => Some(DensityWitness::Point {
                    n: v.last().copied().unwrap_or(0) + 1,
                }),
            };
            Ok(DensityReport {
                value: Rational::zero(),
                witness,
                method: Method::Exact,
            })
        }
        IntegerSet::BlockFamily(_) => Err(Error::UnsupportedRepresentation),
    }
}

/// Upper asymptotic density: limsup of |A ∩ [1, n]| / n. For an eventually
/// periodic set the limit exists and equals the tail density.
pub fn upper_density(s: &IntegerSet) -> Result<DensityReport> {
    require_non_negative(s)?;
    match s {
        IntegerSet::EventuallyPeriodic(ep) => Ok(DensityReport {
            value: tail_density(ep),
            witness: None,
            method: Method::Exact,
        }),
        IntegerSet::Explicit(_) => Ok(DensityReport {
            value: Rational::zero(),
            witness: None,
            method: Method::Exact,
        }),
        IntegerSet::BlockFamily(_) => Err(Error::UnsupportedRepresentation),
    }
}

/// Upper Banach density: the limit over n of the best length-n window ratio.
///
/// Eventually periodic sets attain their tail density on any aligned period
/// window past the threshold; block families with unbounded block lengths are
/// thick at scale, giving density 1 with a representative full block.
pub fn banach_density(s: &IntegerSet) -> Result<DensityReport> {
    match s {
        IntegerSet::EventuallyPeriodic(ep) => {
            let t = ep.threshold();
            Ok(DensityReport {
                value: tail_density(ep),
                witness: Some(DensityWitness::Interval {
                    lo: t,
                    hi: t + ep.period() - 1,
                }),
                method: Method::Exact,
            })
        }
        IntegerSet::BlockFamily(g) => {
            if !g.unbounded_lengths() {
                return Err(Error::UnsupportedRepresentation);
            }
            // Representative witness: the first block at least 10 long.
            let mut idx = 1u32;
            let witness = loop {
                match g.block(idx) {
                    Some((start, len)) if len >= 10 => {
                        break Some(DensityWitness::Interval {
                            lo: start,
                            hi: start + len - 1,
                        })
                    }
                    Some(_) => idx += 1,
                    None => break None,
                }
            };
            Ok(DensityReport {
                value: Rational::one(),
                witness,
                method: Method::Exact,
            })
        }
        IntegerSet::Explicit(_) => Ok(DensityReport {
            value: Rational::zero(),
            witness: None,
            method: Method::Exact,
        }),
    }
}

/// Best relative density over length-`len` subwindows of `w`: the leftmost
/// position x with `[x+1, x+len]` inside the window maximizing the member
/// count, together with the exact ratio.
pub fn best_window_density(w: &WindowSample, len: u64) -> Result<(i64, Rational)> {
    if len == 0 {
        return Err(Error::InvalidInput("subwindow length must be positive".into()));
    }
    if len > w.len() {
        return Err(Error::SubwindowTooLong {
            sub: len,
            len: w.len(),
        });
    }
    let counts = w.prefix_counts();
    let l = len as usize;
    let mut best_count = 0u64;
    let mut best_offset = 0usize;
    for offset in 0..=(w.len() as usize - l) {
        let c = counts[offset + l] - counts[offset];
        if c > best_count {
            best_count = c;
            best_offset = offset;
        }
    }
    // The subwindow [x+1, x+len] starts at cell `best_offset`, so x is one
    // position to its left.
    let x = w.lo() + best_offset as i64 - 1;
    Ok((x, Rational::new(best_count as i64, len as i64)))
}
