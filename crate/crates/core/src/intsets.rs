//! Finitely described subsets of the integers, and concrete window samples of
//! them.
//!
//! Three representations are supported:
//!
//! * eventually periodic sets — an explicit transient part below a threshold,
//!   and residue classes modulo a period at and above it; every exact density
//!   and structure computation in this crate is defined on these;
//! * builtin block families (unions of intervals with strictly increasing
//!   starts), which get window-based analysis;
//! * explicit finite lists.
//!
//! The set-spec mini-language (one spec per line):
//!
//! ```text
//! periodic p=<int> r=<int>,<int>,... [from=<int>] [plus=<int>,...]
//! explicit <int>,<int>,...
//! blocks <generator-id>
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;

/// Transient-below-threshold, periodic-at-and-above representation.
///
/// For `n >= threshold` membership depends only on `n mod period`; below the
/// threshold the finite `transient` list is the whole story.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EventuallyPeriodic {
    transient: BTreeSet<i64>,
    threshold: i64,
    period: i64,
    residues: BTreeSet<i64>,
}

impl EventuallyPeriodic {
    pub fn new(
        transient: BTreeSet<i64>,
        threshold: i64,
        period: i64,
        residues: BTreeSet<i64>,
    ) -> Result<Self> {
        if period < 1 {
            return Err(Error::InvalidInput(format!(
                "period must be positive, got {period}"
            )));
        }
        if let Some(&r) = residues.iter().find(|&&r| r < 0 || r >= period) {
            return Err(Error::InvalidInput(format!(
                "residue {r} outside 0..{period}"
            )));
        }
        if let Some(&t) = transient.iter().find(|&&t| t >= threshold) {
            return Err(Error::InvalidInput(format!(
                "transient element {t} is not below the threshold {threshold}"
            )));
        }
        Ok(EventuallyPeriodic {
            transient,
            threshold,
            period,
            residues,
        })
    }

    /// Pure periodic set: threshold 0, no transient part.
    pub fn periodic(period: i64, residues: impl IntoIterator<Item = i64>) -> Result<Self> {
        Self::new(BTreeSet::new(), 0, period, residues.into_iter().collect())
    }

    pub fn period(&self) -> i64 {
        self.period
    }

    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    pub fn residues(&self) -> &BTreeSet<i64> {
        &self.residues
    }

    pub fn transient(&self) -> &BTreeSet<i64> {
        &self.transient
    }

    pub fn contains(&self, n: i64) -> bool {
        if n >= self.threshold {
            self.residues.contains(&n.rem_euclid(self.period))
        } else {
            self.transient.contains(&n)
        }
    }

    /// True if some member of the set is negative.
    pub fn has_negative_members(&self) -> bool {
        if self.transient.iter().next().is_some_and(|&t| t < 0) {
            return true;
        }
        if self.threshold < 0 && !self.residues.is_empty() {
            // A full period below zero guarantees a hit; otherwise scan the
            // short range [threshold, -1].
            if -self.threshold >= self.period {
                return true;
            }
            return (self.threshold..0).any(|n| self.contains(n));
        }
        false
    }
}

/// Builtin block-family generators. Each produces intervals
/// `[start(n), start(n) + len(n))` for `n = 1, 2, ...` with strictly
/// increasing, pairwise disjoint blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BlockGenerator {
    /// Blocks `[4^n, 4^n + n)`: thick-but-sparse, block lengths unbounded.
    Pow4,
}

impl BlockGenerator {
    pub fn id(&self) -> &'static str {
        match self {
            BlockGenerator::Pow4 => "pow4",
        }
    }

    pub fn from_id(id: &str) -> Option<BlockGenerator> {
        match id {
            "pow4" => Some(BlockGenerator::Pow4),
            _ => None,
        }
    }

    /// The `n`-th block (`n >= 1`), or `None` once the start overflows.
    pub fn block(&self, n: u32) -> Option<(i64, i64)> {
        match self {
            BlockGenerator::Pow4 => {
                let start = 4i64.checked_pow(n)?;
                Some((start, n as i64))
            }
        }
    }

    /// Whether block lengths grow without bound (monotone generators only).
    pub fn unbounded_lengths(&self) -> bool {
        match self {
            BlockGenerator::Pow4 => true,
        }
    }

    pub fn contains(&self, n: i64) -> bool {
        let mut idx = 1u32;
        while let Some((start, len)) = self.block(idx) {
            if n < start {
                return false;
            }
            if n < start + len {
                return true;
            }
            idx += 1;
        }
        false
    }

    /// Blocks intersecting `[lo, hi]`, clipped to it.
    pub fn blocks_in(&self, lo: i64, hi: i64) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        let mut idx = 1u32;
        while let Some((start, len)) = self.block(idx) {
            if start > hi {
                break;
            }
            let end = start + len - 1;
            if end >= lo {
                out.push((start.max(lo), end.min(hi)));
            }
            idx += 1;
        }
        out
    }
}

/// A finitely described subset of the integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IntegerSet {
    EventuallyPeriodic(EventuallyPeriodic),
    BlockFamily(BlockGenerator),
    /// Strictly sorted, duplicate-free.
    Explicit(Vec<i64>),
}

impl IntegerSet {
    /// Builds an explicit set; the input is sorted and deduplicated.
    pub fn explicit(mut elements: Vec<i64>) -> IntegerSet {
        elements.sort_unstable();
        elements.dedup();
        IntegerSet::Explicit(elements)
    }

    pub fn member(&self, n: i64) -> bool {
        match self {
            IntegerSet::EventuallyPeriodic(ep) => ep.contains(n),
            IntegerSet::BlockFamily(g) => g.contains(n),
            IntegerSet::Explicit(v) => v.binary_search(&n).is_ok(),
        }
    }

    /// Samples the membership indicator on `[lo, hi]`.
    pub fn window(&self, lo: i64, hi: i64, limits: &Limits) -> Result<WindowSample> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        let len = (hi - lo + 1) as u64;
        if len > limits.max_window {
            return Err(Error::WindowTooLarge {
                len,
                limit: limits.max_window,
            });
        }
        let bits = (lo..=hi).map(|n| self.member(n)).collect();
        WindowSample::new(lo, hi, bits)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(it: impl IntoIterator<Item = i64>) -> String {
            it.into_iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
        match self {
            IntegerSet::EventuallyPeriodic(ep) => {
                write!(f, "periodic p={} r={}", ep.period, join(ep.residues.iter().copied()))?;
                if ep.threshold != 0 {
                    write!(f, " from={}", ep.threshold)?;
                }
                if !ep.transient.is_empty() {
                    write!(f, " plus={}", join(ep.transient.iter().copied()))?;
                }
                Ok(())
            }
            IntegerSet::BlockFamily(g) => write!(f, "blocks {}", g.id()),
            IntegerSet::Explicit(v) => {
                if v.is_empty() {
                    write!(f, "explicit")
                } else {
                    write!(f, "explicit {}", join(v.iter().copied()))
                }
            }
        }
    }
}

impl FromStr for IntegerSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<IntegerSet> {
        parse_set_spec(s)
    }
}

fn parse_int_list(text: &str, pos: usize) -> Result<Vec<i64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim().parse::<i64>().map_err(|e| Error::Parse {
                pos,
                msg: format!("bad integer {:?}: {e}", t.trim()),
            })
        })
        .collect()
}

/// Parses one line of the set-spec mini-language.
pub fn parse_set_spec(text: &str) -> Result<IntegerSet> {
    let trimmed = text.trim();
    let head_pos = text.len() - text.trim_start().len();
    let (head, rest) = match trimmed.split_once(char::is_whitespace) {
        Some((h, r)) => (h, r.trim()),
        None => (trimmed, ""),
    };
    match head {
        "periodic" => {
            let mut period: Option<i64> = None;
            let mut residues: Option<Vec<i64>> = None;
            let mut threshold = 0i64;
            let mut transient = Vec::new();
            for tok in rest.split_whitespace() {
                let pos = text.find(tok).unwrap_or(head_pos);
                let (key, val) = tok.split_once('=').ok_or_else(|| Error::Parse {
                    pos,
                    msg: format!("expected key=value, got {tok:?}"),
                })?;
                match key {
                    "p" => {
                        period = Some(val.parse::<i64>().map_err(|e| Error::Parse {
                            pos,
                            msg: format!("bad period {val:?}: {e}"),
                        })?)
                    }
                    "r" => residues = Some(parse_int_list(val, pos)?),
                    "from" => {
                        threshold = val.parse::<i64>().map_err(|e| Error::Parse {
                            pos,
                            msg: format!("bad threshold {val:?}: {e}"),
                        })?
                    }
                    "plus" => transient = parse_int_list(val, pos)?,
                    _ => {
                        return Err(Error::Parse {
                            pos,
                            msg: format!("unknown key {key:?}"),
                        })
                    }
                }
            }
            let period = period.ok_or_else(|| Error::Parse {
                pos: head_pos,
                msg: "periodic spec needs p=<int>".into(),
            })?;
            if period == 0 {
                return Err(Error::Parse {
                    pos: head_pos,
                    msg: "period must be positive".into(),
                });
            }
            let residues = residues.ok_or_else(|| Error::Parse {
                pos: head_pos,
                msg: "periodic spec needs r=<list>".into(),
            })?;
            if let Some(&r) = residues.iter().find(|&&r| r < 0 || r >= period) {
                return Err(Error::Parse {
                    pos: head_pos,
                    msg: format!("residue {r} not in 0..{period}"),
                });
            }
            let ep = EventuallyPeriodic::new(
                transient.into_iter().collect(),
                threshold,
                period,
                residues.into_iter().collect(),
            )
            .map_err(|e| Error::Parse {
                pos: head_pos,
                msg: e.to_string(),
            })?;
            Ok(IntegerSet::EventuallyPeriodic(ep))
        }
        "explicit" => Ok(IntegerSet::explicit(parse_int_list(rest, head_pos)?)),
        "blocks" => {
            let gen = BlockGenerator::from_id(rest).ok_or_else(|| Error::Parse {
                pos: head_pos,
                msg: format!("unknown block generator {rest:?}"),
            })?;
            Ok(IntegerSet::BlockFamily(gen))
        }
        "" => Err(Error::Parse {
            pos: head_pos,
            msg: "empty set spec".into(),
        }),
        other => Err(Error::Parse {
            pos: head_pos,
            msg: format!("unknown set kind {other:?}"),
        }),
    }
}

/// A concrete bit-indexed membership sample on an interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSample {
    lo: i64,
    hi: i64,
    bits: Vec<bool>,
}

impl WindowSample {
    pub fn new(lo: i64, hi: i64, bits: Vec<bool>) -> Result<WindowSample> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        let len = (hi - lo + 1) as usize;
        if bits.len() != len {
            return Err(Error::InvalidInput(format!(
                "window [{lo}, {hi}] needs {len} bits, got {}",
                bits.len()
            )));
        }
        Ok(WindowSample { lo, hi, bits })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> u64 {
        self.bits.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        false // an interval [lo, hi] with lo <= hi has at least one cell
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Membership of `n`, or `None` outside the window.
    pub fn get(&self, n: i64) -> Option<bool> {
        if n < self.lo || n > self.hi {
            None
        } else {
            Some(self.bits[(n - self.lo) as usize])
        }
    }

    /// Positions of the members, in increasing order.
    pub fn members(&self) -> impl Iterator<Item = i64> + '_ {
        let lo = self.lo;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| lo + i as i64)
    }

    pub fn member_count(&self) -> u64 {
        self.bits.iter().filter(|&&b| b).count() as u64
    }

    /// `counts[i]` = number of members among the first `i` cells.
    pub fn prefix_counts(&self) -> Vec<u64> {
        let mut counts = Vec::with_capacity(self.bits.len() + 1);
        counts.push(0);
        let mut acc = 0u64;
        for &b in &self.bits {
            acc += b as u64;
            counts.push(acc);
        }
        counts
    }

    /// Members in `[a, b]` (which must lie inside the window).
    pub fn count_in(&self, a: i64, b: i64) -> u64 {
        debug_assert!(a >= self.lo && b <= self.hi);
        if a > b {
            return 0;
        }
        self.bits[(a - self.lo) as usize..=(b - self.lo) as usize]
            .iter()
            .filter(|&&x| x)
            .count() as u64
    }
}

/// A maximal run of consecutive members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Run {
    pub start: i64,
    pub len: u64,
}

/// Largest count of consecutive non-members inside the window. Runs touching
/// the window edges count (distance from `lo` to the first member, and from
/// the last member to `hi`).
pub fn max_gap(w: &WindowSample) -> Result<u64> {
    let mut best: u64 = 0;
    let mut current: u64 = 0;
    let mut seen_member = false;
    for &b in w.bits() {
        if b {
            seen_member = true;
            best = best.max(current);
            current = 0;
        } else {
            current += 1;
        }
    }
    if !seen_member {
        return Err(Error::EmptyWindow);
    }
    Ok(best.max(current))
}

/// Leftmost maximal run of consecutive members; a run of length 0 starting at
/// `lo` when the window has no member.
pub fn longest_run(w: &WindowSample) -> Run {
    let mut best = Run { start: w.lo(), len: 0 };
    let mut current_start = w.lo();
    let mut current_len: u64 = 0;
    for (i, &b) in w.bits().iter().enumerate() {
        if b {
            if current_len == 0 {
                current_start = w.lo() + i as i64;
            }
            current_len += 1;
            if current_len > best.len {
                best = Run {
                    start: current_start,
                    len: current_len,
                };
            }
        } else {
            current_len = 0;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn evens() -> IntegerSet {
        parse_set_spec("periodic p=2 r=0").unwrap()
    }

    fn pow4() -> IntegerSet {
        parse_set_spec("blocks pow4").unwrap()
    }

    #[test]
    fn parse_canonical_even_spec() {
        let s = evens();
        match &s {
            IntegerSet::EventuallyPeriodic(ep) => {
                assert_eq!(ep.threshold(), 0);
                assert_eq!(ep.period(), 2);
                assert_eq!(ep.residues().iter().copied().collect::<Vec<_>>(), vec![0]);
                assert!(ep.transient().is_empty());
            }
            _ => panic!("expected eventually periodic"),
        }
    }

    #[test]
    fn parse_explicit_sorts_and_dedups() {
        let s = parse_set_spec("explicit 3,1,2").unwrap();
        assert_eq!(s, IntegerSet::Explicit(vec![1, 2, 3]));
        let s = parse_set_spec("explicit 5,5,1").unwrap();
        assert_eq!(s, IntegerSet::Explicit(vec![1, 5]));
    }

    #[test]
    fn parse_blocks_pow4_matches_enumeration_oracle() {
        let s = pow4();
        // Oracle: enumerate the blocks [4^n, 4^n + n) for n <= 10 directly.
        let mut expected = BTreeSet::new();
        for n in 1u32..=10 {
            let start = 4i64.pow(n);
            for x in start..start + n as i64 {
                expected.insert(x);
            }
        }
        let max = *expected.iter().max().unwrap();
        for x in 0..=max {
            assert_eq!(s.member(x), expected.contains(&x), "x = {x}");
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_set_spec("periodic p=0 r=0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_set_spec("periodic p=2 r=2"), Err(Error::Parse { .. })));
        assert!(matches!(parse_set_spec("periodic r=0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_set_spec("blocks pow5"), Err(Error::Parse { .. })));
        assert!(matches!(parse_set_spec("nonsense 1,2"), Err(Error::Parse { .. })));
        assert!(matches!(parse_set_spec(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_set_spec("explicit 1,x"), Err(Error::Parse { .. })));
    }

    #[test]
    fn membership_examples() {
        assert!(evens().member(4));
        assert!(!evens().member(7));
        assert!(pow4().member(17)); // 17 in [16, 18)
        assert!(!pow4().member(15));
        // Threshold 0 and an empty transient part: nothing below zero.
        assert!(!evens().member(-2));
        let with_tail = parse_set_spec("periodic p=2 r=0 from=-10").unwrap();
        assert!(with_tail.member(-2));
    }

    #[test]
    fn window_examples() {
        let limits = Limits::default();
        let w = evens().window(1, 4, &limits).unwrap();
        assert_eq!(w.bits(), &[false, true, false, true]);

        let w = IntegerSet::explicit(vec![5]).window(1, 4, &limits).unwrap();
        assert!(w.bits().iter().all(|&b| !b));

        let w = pow4().window(1, 20, &limits).unwrap();
        assert_eq!(w.members().collect::<Vec<_>>(), vec![4, 16, 17]);
    }

    #[test]
    fn window_errors() {
        let limits = Limits {
            max_window: 10,
            ..Limits::default()
        };
        assert!(matches!(
            evens().window(5, 4, &limits),
            Err(Error::InvalidWindow { .. })
        ));
        assert!(matches!(
            evens().window(1, 100, &limits),
            Err(Error::WindowTooLarge { .. })
        ));
    }

    #[test]
    fn max_gap_examples() {
        let limits = Limits::default();
        let w = evens().window(1, 10, &limits).unwrap();
        assert_eq!(max_gap(&w).unwrap(), 1);

        let w = IntegerSet::explicit(vec![1, 10]).window(1, 10, &limits).unwrap();
        assert_eq!(max_gap(&w).unwrap(), 8);

        let w = pow4().window(1, 20, &limits).unwrap();
        assert_eq!(max_gap(&w).unwrap(), 11); // the stretch 5..=15 between 4 and 16

        let w = IntegerSet::explicit(vec![]).window(1, 10, &limits).unwrap();
        assert_eq!(max_gap(&w), Err(Error::EmptyWindow));
    }

    #[test]
    fn longest_run_examples() {
        let limits = Limits::default();
        let w = evens().window(1, 10, &limits).unwrap();
        assert_eq!(longest_run(&w), Run { start: 2, len: 1 });

        let w = IntegerSet::explicit(vec![3, 4, 5, 9]).window(1, 10, &limits).unwrap();
        assert_eq!(longest_run(&w), Run { start: 3, len: 3 });

        let w = pow4().window(1, 70, &limits).unwrap();
        assert_eq!(longest_run(&w), Run { start: 64, len: 3 }); // block [64, 67)

        let w = IntegerSet::explicit(vec![]).window(2, 6, &limits).unwrap();
        assert_eq!(longest_run(&w), Run { start: 2, len: 0 });
    }

    #[test]
    fn render_round_trips() {
        for spec in [
            "periodic p=2 r=0",
            "periodic p=5 r=0,2 from=3 plus=1,2",
            "periodic p=1 r=",
            "explicit 1,2,3",
            "explicit",
            "blocks pow4",
        ] {
            let s = parse_set_spec(spec).unwrap();
            let rendered = s.render();
            let back = parse_set_spec(&rendered).unwrap();
            assert_eq!(s, back, "spec {spec:?} rendered as {rendered:?}");
        }
    }

    #[test]
    fn negative_member_detection() {
        let ep = EventuallyPeriodic::new(BTreeSet::new(), -3, 10, [0].into()).unwrap();
        assert!(ep.has_negative_members() == ep_contains_negative_oracle(&ep));
        let ep = EventuallyPeriodic::new([-4].into(), 0, 2, [0].into()).unwrap();
        assert!(ep.has_negative_members());
        let ep = EventuallyPeriodic::new(BTreeSet::new(), 0, 2, [0].into()).unwrap();
        assert!(!ep.has_negative_members());
        // threshold below zero but residues never hit in [-2, -1]
        let ep = EventuallyPeriodic::new(BTreeSet::new(), -2, 10, [5].into()).unwrap();
        assert!(ep.has_negative_members() == ep_contains_negative_oracle(&ep));
        assert!(!ep.has_negative_members());
    }

    fn ep_contains_negative_oracle(ep: &EventuallyPeriodic) -> bool {
        (-1000..0).any(|n| ep.contains(n))
    }
}
