//! The constructive core of the density-embedding theorem: from a window
//! where a set has relative density near beta, extract a base point whose
//! forward prefix densities all clear beta - 1/k, and package the offsets as
//! a finite set embedded in the original one.
//!
//! On a finite window the search can genuinely fail; in that case the
//! stepping argument from the proof runs as an actual computation and
//! produces a trace bounding the window's density, with an explicit 2k/M
//! edge term replacing the proof's vanishing error.
//!
//! Certificates are anchored at a member of the set. Whenever the bound
//! beta - 1/k is positive this is no extra demand (a non-member base point
//! already fails the length-1 prefix); in the degenerate regime where the
//! bound is non-positive it keeps the search meaningful: a window with no
//! member in range yields no certificate, and the refuting walk records
//! unit steps with zero counts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intsets::{IntegerSet, WindowSample};
use crate::rational::Rational;

/// Certificate that all prefix ratios at `xi` clear `beta - 1/k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JinCertificate {
    pub xi: i64,
    pub k: i64,
    pub beta: Rational,
    /// `prefix_ratios[i-1]` = members of `[xi, xi+i)` over `i`, for i = 1..=k.
    pub prefix_ratios: Vec<Rational>,
    /// Offsets n in `[0, k)` with `xi + n` a member; the extracted set E.
    pub offsets: Vec<i64>,
}

/// One step of the refuting walk: at `xi`, the least prefix length `n <= k`
/// whose member count falls below `n * (beta - 1/k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RefuterStep {
    pub xi: i64,
    pub n: i64,
    pub count: u64,
}

/// Replay of the proof's contradiction machinery on a concrete window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SteppingTrace {
    pub steps: Vec<RefuterStep>,
    /// Where the walk stopped (at least M - k).
    pub final_xi: i64,
    /// Sum of the per-step counts = members of `[1, final_xi)`.
    pub total_count: u64,
    /// Members of the whole window over its length.
    pub window_density: Rational,
    /// Positive part of `beta - 1/k`, plus `2k/M`; the trace certifies
    /// window_density < threshold.
    pub threshold: Rational,
}

fn check_args(w: &WindowSample, k: i64, beta: Rational) -> Result<()> {
    if w.lo() != 1 {
        return Err(Error::InvalidInput(format!(
            "window must start at 1, got {}",
            w.lo()
        )));
    }
    if beta <= Rational::zero() || beta > Rational::one() {
        return Err(Error::InvalidInput(format!(
            "beta must lie in (0, 1], got {beta}"
        )));
    }
    if k < 1 {
        return Err(Error::InvalidInput(format!("k must be positive, got {k}")));
    }
    if k as u64 > w.len() {
        return Err(Error::InvalidInput(format!(
            "k = {k} exceeds the window length {}",
            w.len()
        )));
    }
    Ok(())
}

fn xi_passes(w: &WindowSample, counts: &[u64], xi: i64, k: i64, bar: Rational) -> bool {
    if w.get(xi) != Some(true) {
        return false;
    }
    // counts[j] = members among the first j cells of [1, M].
    (1..=k).all(|i| {
        let c = counts[(xi + i - 1) as usize] - counts[(xi - 1) as usize];
        Rational::new(c as i64, i) >= bar
    })
}

/// Least `xi` in `[1, M-k]` that is a member and whose first k prefix ratios
/// all reach `beta - 1/k`, packaged as a certificate; `None` when no window
/// position qualifies.
pub fn xi_search(
    w: &WindowSample,
    k: i64,
    beta: Rational,
    threads: usize,
) -> Result<Option<JinCertificate>> {
    check_args(w, k, beta)?;
    let m = w.hi();
    let counts = w.prefix_counts();
    let bar = beta - Rational::new(1, k);
    if m - k < 1 {
        return Ok(None);
    }
    let total = (m - k) as u64;
    let hit = crate::parallel::first_hit(total, 2048, threads, |i| {
        let xi = 1 + i as i64;
        xi_passes(w, &counts, xi, k, bar).then_some(xi)
    });
    let Some((_, xi)) = hit else {
        return Ok(None);
    };
    let prefix_ratios = (1..=k)
        .map(|i| {
            let c = counts[(xi + i - 1) as usize] - counts[(xi - 1) as usize];
            Rational::new(c as i64, i)
        })
        .collect();
    let offsets = (0..k)
        .filter(|&n| w.get(xi + n) == Some(true))
        .collect();
    Ok(Some(JinCertificate {
        xi,
        k,
        beta,
        prefix_ratios,
        offsets,
    }))
}

/// When the search fails, walks `xi_1 = 1`, `xi_{s+1} = xi_s + n_s` with
/// `n_s` the least prefix length violating the bound (a unit step over a
/// non-member cell when the bound is non-positive), and returns the trace
/// certifying that the window density stays below the threshold. Returns
/// `None` when the search succeeds.
pub fn stepping_refuter(
    w: &WindowSample,
    k: i64,
    beta: Rational,
    threads: usize,
) -> Result<Option<SteppingTrace>> {
    check_args(w, k, beta)?;
    if xi_search(w, k, beta, threads)?.is_some() {
        return Ok(None);
    }
    let m = w.hi();
    let counts = w.prefix_counts();
    let bar = beta - Rational::new(1, k);
    let mut steps = Vec::new();
    let mut xi = 1i64;
    let mut total_count = 0u64;
    while xi < m - k {
        let mut found = None;
        for n in 1..=k {
            let c = counts[(xi + n - 1) as usize] - counts[(xi - 1) as usize];
            if Rational::new(c as i64, n) < bar {
                found = Some((n, c));
                break;
            }
        }
        let (n, c) = match found {
            Some(pair) => pair,
            None => {
                // Only reachable with bar <= 0, where a failed search means
                // every position in range is a non-member.
                if bar > Rational::zero() || w.get(xi) == Some(true) {
                    return Err(Error::InternalVerification(format!(
                        "no violating prefix at xi = {xi}"
                    )));
                }
                (1, 0)
            }
        };
        steps.push(RefuterStep { xi, n, count: c });
        total_count += c;
        xi += n;
    }
    let window_density = Rational::new(w.member_count() as i64, m);
    let threshold = bar.max(Rational::zero()) + Rational::new(2 * k, m);
    Ok(Some(SteppingTrace {
        steps,
        final_xi: xi,
        total_count,
        window_density,
        threshold,
    }))
}

/// Rechecks a certificate against the set it was cut from: every offset must
/// land in the set, and the prefix ratios recomputed from the offsets alone
/// (the Schnirelmann-style ratios of E shifted to start at 1) must clear
/// `beta - 1/k`.
pub fn embed_check(cert: &JinCertificate, a: &IntegerSet) -> bool {
    if cert.k < 1 {
        return false;
    }
    if !cert.offsets.iter().all(|&n| a.member(cert.xi + n)) {
        return false;
    }
    let bar = cert.beta - Rational::new(1, cert.k);
    (1..=cert.k).all(|n| {
        let c = cert.offsets.iter().filter(|&&o| o < n).count() as i64;
        Rational::new(c, n) >= bar
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intsets::parse_set_spec;
    use crate::limits::Limits;

    fn window_of(spec: &str, m: i64) -> WindowSample {
        parse_set_spec(spec)
            .unwrap()
            .window(1, m, &Limits::default())
            .unwrap()
    }

    #[test]
    fn multiples_of_three_certificate() {
        let w = window_of("periodic p=3 r=0", 3000);
        let cert = xi_search(&w, 10, Rational::new(1, 3), 1).unwrap().unwrap();
        // Exhaustive prefix-scan oracle: xi = 1 and 2 both fail at i = 1
        // (empty length-1 prefix), xi = 3 passes everything.
        let bar = Rational::new(1, 3) - Rational::new(1, 10);
        for xi in 1..3i64 {
            let c = i64::from(xi % 3 == 0);
            assert!(Rational::new(c, 1) < bar, "xi = {xi} should fail");
        }
        assert_eq!(cert.xi, 3);
        assert!(cert.prefix_ratios.iter().all(|&r| r >= bar));
        assert_eq!(cert.offsets, vec![0, 3, 6, 9]);
    }

    #[test]
    fn full_window_trivial_certificate() {
        let w = window_of("periodic p=1 r=0", 100);
        let cert = xi_search(&w, 7, Rational::one(), 1).unwrap().unwrap();
        assert_eq!(cert.xi, 1);
        assert!(cert.prefix_ratios.iter().all(|&r| r == Rational::one()));
        assert_eq!(cert.offsets, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn empty_window_has_no_certificate() {
        let w = window_of("explicit", 50);
        assert_eq!(xi_search(&w, 1, Rational::new(1, 2), 1).unwrap(), None);
        let trace = stepping_refuter(&w, 1, Rational::new(1, 2), 1)
            .unwrap()
            .unwrap();
        assert_eq!(trace.total_count, 0);
        assert!(trace.window_density < trace.threshold);
    }

    #[test]
    fn argument_errors() {
        let w = window_of("periodic p=2 r=0", 10);
        assert!(xi_search(&w, 0, Rational::new(1, 2), 1).is_err());
        assert!(xi_search(&w, 11, Rational::new(1, 2), 1).is_err());
        assert!(xi_search(&w, 2, Rational::zero(), 1).is_err());
        assert!(xi_search(&w, 2, Rational::new(3, 2), 1).is_err());
        let off = parse_set_spec("periodic p=2 r=0")
            .unwrap()
            .window(2, 12, &Limits::default())
            .unwrap();
        assert!(xi_search(&off, 2, Rational::new(1, 2), 1).is_err());
    }

    #[test]
    fn evens_refuted_against_nine_tenths() {
        let w = window_of("periodic p=2 r=0", 1000);
        let k = 5;
        let beta = Rational::new(9, 10);
        assert!(xi_search(&w, k, beta, 1).unwrap().is_none());
        let trace = stepping_refuter(&w, k, beta, 1).unwrap().unwrap();
        // Telescoping: per-step counts re-sum to the member count of
        // [1, final_xi).
        let resummed: u64 = trace.steps.iter().map(|s| s.count).sum();
        assert_eq!(resummed, trace.total_count);
        assert_eq!(trace.total_count, w.count_in(1, trace.final_xi - 1));
        assert!(trace.final_xi >= w.hi() - k);
        // Density 1/2 sits below the certified threshold 7/10 + 2k/M.
        assert_eq!(trace.window_density, Rational::new(1, 2));
        assert!(trace.window_density < trace.threshold);
    }

    #[test]
    fn sparse_window_trace_bounds_density() {
        // Density exactly 1/10 against beta = 1/2. At k = 5 the bound is
        // 3/10 and the length-4 prefix of any isolated member gives 1/4,
        // so no position certifies and the walk must fire.
        let w = window_of("periodic p=10 r=0", 2000);
        let beta = Rational::new(1, 2);
        assert!(xi_search(&w, 5, beta, 1).unwrap().is_none());
        let trace = stepping_refuter(&w, 5, beta, 1).unwrap().unwrap();
        let bar = beta - Rational::new(1, 5);
        assert_eq!(trace.window_density, Rational::new(1, 10));
        assert!(trace.window_density < bar + Rational::new(2 * 5, 2000));
        assert_eq!(trace.threshold, bar + Rational::new(10, 2000));
        // Every step's prefix genuinely violates the bound.
        for s in &trace.steps {
            assert!(Rational::new(s.count as i64, s.n) < bar);
            assert_eq!(s.count, w.count_in(s.xi, s.xi + s.n - 1));
        }
    }

    #[test]
    fn full_window_refuter_declines() {
        let w = window_of("periodic p=1 r=0", 60);
        assert_eq!(stepping_refuter(&w, 3, Rational::one(), 1).unwrap(), None);
    }

    #[test]
    fn embed_check_accepts_genuine_and_rejects_tampered() {
        let a = parse_set_spec("periodic p=3 r=0").unwrap();
        let w = a.window(1, 3000, &Limits::default()).unwrap();
        let cert = xi_search(&w, 10, Rational::new(1, 3), 1).unwrap().unwrap();
        assert!(embed_check(&cert, &a));

        let mut tampered = cert.clone();
        tampered.offsets.push(1); // xi + 1 = 4 is not a multiple of 3
        assert!(!embed_check(&tampered, &a));
    }

    #[test]
    fn k1_certificate_with_member_xi() {
        // A k = 1 certificate only demands ratio >= beta - 1.
        let a = parse_set_spec("explicit 5").unwrap();
        let cert = JinCertificate {
            xi: 5,
            k: 1,
            beta: Rational::new(1, 2),
            prefix_ratios: vec![Rational::one()],
            offsets: vec![0],
        };
        assert!(embed_check(&cert, &a));
        // The search on the same window anchors at the only member.
        let w = a.window(1, 10, &Limits::default()).unwrap();
        let found = xi_search(&w, 1, Rational::new(1, 2), 1).unwrap().unwrap();
        assert_eq!(found.xi, 5);
        assert_eq!(found.offsets, vec![0]);
    }

    #[test]
    fn search_monotone_in_k() {
        let w = window_of("periodic p=4 r=0,1", 500);
        let beta = Rational::new(1, 2);
        for k in (1..=20).rev() {
            if xi_search(&w, k, beta, 1).unwrap().is_some() {
                for smaller in 1..k {
                    assert!(
                        xi_search(&w, smaller, beta, 1).unwrap().is_some(),
                        "succeeded at k = {k} but not at {smaller}"
                    );
                }
                break;
            }
        }
    }

    #[test]
    fn dichotomy_on_thread_counts() {
        let w = window_of("periodic p=7 r=0,3", 2000);
        for threads in [1, 4] {
            for k in [1, 5, 19] {
                for beta in [Rational::new(1, 4), Rational::new(2, 7), Rational::new(9, 10)] {
                    let s = xi_search(&w, k, beta, threads).unwrap();
                    let r = stepping_refuter(&w, k, beta, threads).unwrap();
                    assert!(s.is_some() != r.is_some());
                    if let Some(trace) = r {
                        assert!(trace.window_density < trace.threshold);
                    }
                }
            }
        }
    }
}
