//! Thick / syndetic / piecewise-syndetic structure, the partition-splitting
//! step behind "PS sets survive 2-partitions", and finite embeddability.
//!
//! Gap bounds follow one convention everywhere: a set is gap-bounded by `b`
//! on an interval when every length-`b` subinterval meets it. In spacing
//! terms that is consecutive-member differences at most `b` and edge
//! distances at most `b - 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intsets::{IntegerSet, WindowSample};

/// Exact structure classification of an eventually periodic set, read off
/// the periodic tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub thick: bool,
    pub syndetic: bool,
    pub ps: bool,
}

/// Classifies an eventually periodic set: thick iff every residue class is
/// present, syndetic iff some residue is present; for this class of sets
/// piecewise syndetic coincides with syndetic.
pub fn classify_ep(s: &IntegerSet) -> Result<Classification> {
    let IntegerSet::EventuallyPeriodic(ep) = s else {
        return Err(Error::NotEventuallyPeriodic);
    };
    let thick = ep.residues().len() as i64 == ep.period();
    let syndetic = !ep.residues().is_empty();
    Ok(Classification {
        thick,
        syndetic,
        ps: syndetic,
    })
}

/// An interval on which every length-`gap_bound` subinterval meets the set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PSWitness {
    pub lo: i64,
    pub hi: i64,
    pub gap_bound: i64,
}

impl PSWitness {
    /// Re-verifies the witness by direct scan over the given members.
    pub fn verify(&self, members: &[i64]) -> bool {
        gaps_bounded(self.lo, self.hi, members, self.gap_bound)
    }
}

/// True when every length-`bound` subinterval of `[lo, hi]` contains one of
/// `members` (sorted). Vacuously true when the interval is shorter than
/// `bound`.
pub fn gaps_bounded(lo: i64, hi: i64, members: &[i64], bound: i64) -> bool {
    debug_assert!(bound >= 1);
    let inside: Vec<i64> = members
        .iter()
        .copied()
        .filter(|&m| m >= lo && m <= hi)
        .collect();
    if hi - lo + 1 < bound {
        return true;
    }
    if inside.is_empty() {
        return false;
    }
    if inside[0] - lo >= bound || hi - inside[inside.len() - 1] >= bound {
        return false;
    }
    inside.windows(2).all(|p| p[1] - p[0] <= bound)
}

/// Leftmost subinterval of length at least `min_len` inside `w` on which the
/// set's gaps are bounded by `k`, extended maximally; `None` if no such
/// stretch exists.
pub fn is_ps_window(w: &WindowSample, k: i64, min_len: i64) -> Result<Option<PSWitness>> {
    if k < 1 {
        return Err(Error::InvalidInput("gap bound k must be positive".into()));
    }
    if min_len < k {
        return Err(Error::InvalidInput(format!(
            "interval length {min_len} must be at least the gap bound {k}"
        )));
    }
    if min_len as u64 > w.len() {
        return Err(Error::SubwindowTooLong {
            sub: min_len as u64,
            len: w.len(),
        });
    }
    let members: Vec<i64> = w.members().collect();
    // Clusters of members with consecutive spacing <= k; each extends by up
    // to k-1 cells on both sides without absorbing a neighbouring member.
    let mut i = 0usize;
    while i < members.len() {
        let mut j = i;
        while j + 1 < members.len() && members[j + 1] - members[j] <= k {
            j += 1;
        }
        let mut lo = (members[i] - (k - 1)).max(w.lo());
        if i > 0 {
            lo = lo.max(members[i - 1] + 1);
        }
        let mut hi = (members[j] + (k - 1)).min(w.hi());
        if j + 1 < members.len() {
            hi = hi.min(members[j + 1] - 1);
        }
        if hi - lo + 1 >= min_len {
            let witness = PSWitness { lo, hi, gap_bound: k };
            debug_assert!(witness.verify(&members));
            return Ok(Some(witness));
        }
        i = j + 1;
    }
    Ok(None)
}

/// One side of a 2-partition of a window's members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SplitColor {
    One,
    Two,
}

/// The splitting step of the partition-regularity proof for PS sets, run on
/// a finite window.
///
/// `w` must be gap-bounded by `k`; `colors` assigns a side to each member of
/// `w` in increasing order. If the color-one members are gap-bounded by `K`
/// across the whole window, color one wins with the window itself as
/// witness. Otherwise some length-`K` stretch is free of color-one members;
/// every member there is color two, and the set's own `k` bound transfers to
/// them, so color two wins with that stretch (extended maximally) as
/// witness. The returned witness is re-verified by scan before returning.
pub fn ps_partition_split(
    w: &WindowSample,
    colors: &[SplitColor],
    k: i64,
    big_k: i64,
) -> Result<(SplitColor, PSWitness)> {
    let members: Vec<i64> = w.members().collect();
    if colors.len() != members.len() {
        return Err(Error::InvalidInput(format!(
            "partition assigns {} colors to {} members",
            colors.len(),
            members.len()
        )));
    }
    if big_k < k {
        return Err(Error::InvalidInput(format!(
            "K = {big_k} must be at least k = {k}"
        )));
    }
    if !gaps_bounded(w.lo(), w.hi(), &members, k) {
        return Err(Error::InvalidInput(format!(
            "window is not gap-bounded by k = {k}"
        )));
    }
    let ones: Vec<i64> = members
        .iter()
        .zip(colors)
        .filter(|(_, &c)| c == SplitColor::One)
        .map(|(&m, _)| m)
        .collect();
    if gaps_bounded(w.lo(), w.hi(), &ones, big_k) {
        let witness = PSWitness {
            lo: w.lo(),
            hi: w.hi(),
            gap_bound: big_k,
        };
        if !witness.verify(&ones) {
            return Err(Error::InternalVerification(
                "color-one witness failed re-verification".into(),
            ));
        }
        return Ok((SplitColor::One, witness));
    }
    // Color one fails the K bound, so some length-K subinterval has no
    // color-one member. Take the leftmost maximal color-one-free stretch of
    // length >= K; its members are all color two and inherit the k bound.
    let mut start = w.lo();
    let mut best: Option<(i64, i64)> = None;
    for &m in ones.iter() {
        if m - start >= big_k {
            best = Some((start, m - 1));
            break;
        }
        start = m + 1;
    }
    if best.is_none() && w.hi() - start + 1 >= big_k {
        best = Some((start, w.hi()));
    }
    let (lo, hi) = best.ok_or_else(|| {
        Error::InternalVerification("no color-one-free stretch despite failed K bound".into())
    })?;
    let twos: Vec<i64> = members
        .iter()
        .zip(colors)
        .filter(|(_, &c)| c == SplitColor::Two)
        .map(|(&m, _)| m)
        .collect();
    let witness = PSWitness { lo, hi, gap_bound: k };
    if !witness.verify(&twos) {
        return Err(Error::InternalVerification(
            "color-two witness failed re-verification".into(),
        ));
    }
    Ok((SplitColor::Two, witness))
}

/// A shift certifying `t + F ⊆ Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Shift {
    pub t: i64,
}

/// Result of a bounded shift search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbedOutcome {
    /// Least shift in `[-bound, bound]` embedding `F` into `Y`.
    Found(Shift),
    /// No shift in range; nothing is implied beyond the bound.
    Inconclusive,
    /// No shift anywhere embeds `F` into `Y` (decided via periodicity).
    Impossible,
}

impl EmbedOutcome {
    pub fn shift(&self) -> Option<Shift> {
        match self {
            EmbedOutcome::Found(s) => Some(*s),
            _ => None,
        }
    }
}

fn embeds_at(f: &[i64], y: &IntegerSet, t: i64) -> bool {
    f.iter().all(|&x| y.member(t + x))
}

/// Shift enumeration order: 0, 1, -1, 2, -2, ...
fn shift_at(i: u64) -> i64 {
    if i == 0 {
        0
    } else if i % 2 == 1 {
        (i as i64 + 1) / 2
    } else {
        -(i as i64) / 2
    }
}

/// Searches `t ∈ [-bound, bound]` for the least shift with `t + F ⊆ Y`,
/// where least means smallest magnitude, non-negative first. For eventually
/// periodic `Y` a failed search is upgraded to `Impossible` when the full
/// decision procedure (residue scan plus transient candidates) rules out
/// every shift.
pub fn finite_embeds(f: &[i64], y: &IntegerSet, bound: i64, threads: usize) -> Result<EmbedOutcome> {
    if f.is_empty() {
        return Err(Error::InvalidInput("F must be non-empty".into()));
    }
    if bound < 0 {
        return Err(Error::InvalidInput("bound must be non-negative".into()));
    }
    let total = 2 * bound as u64 + 1;
    let hit = crate::parallel::first_hit(total, 4096, threads, |i| {
        let t = shift_at(i);
        embeds_at(f, y, t).then_some(t)
    });
    if let Some((_, t)) = hit {
        return Ok(EmbedOutcome::Found(Shift { t }));
    }
    if let IntegerSet::EventuallyPeriodic(ep) = y {
        let p = ep.period();
        let periodic_feasible = (0..p).any(|rho| {
            f.iter()
                .all(|&x| ep.residues().contains(&(rho + x).rem_euclid(p)))
        });
        let transient_feasible = ep.transient().iter().any(|&tr| {
            f.iter().any(|&x| {
                let t = tr - x;
                embeds_at(f, y, t)
            })
        });
        if !periodic_feasible && !transient_feasible {
            return Ok(EmbedOutcome::Impossible);
        }
    }
    Ok(EmbedOutcome::Inconclusive)
}

/// Number of shifts in `[-bound, bound]` embedding `F` into `Y`.
pub fn count_embeddings(f: &[i64], y: &IntegerSet, bound: i64) -> Result<u64> {
    if f.is_empty() {
        return Err(Error::InvalidInput("F must be non-empty".into()));
    }
    Ok((-bound..=bound).filter(|&t| embeds_at(f, y, t)).count() as u64)
}

/// Checks that every difference of two elements of `X` is realized as a
/// difference of two members of `Y`, searching base points within
/// `[-bound, bound]`.
pub fn fe_difference_property(x: &[i64], y: &IntegerSet, bound: i64) -> bool {
    let mut diffs: Vec<i64> = Vec::new();
    for &a in x {
        for &b in x {
            diffs.push(a - b);
        }
    }
    diffs.sort_unstable();
    diffs.dedup();
    diffs.iter().all(|&d| {
        (-bound..=bound).any(|base| y.member(base) && y.member(base + d))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intsets::parse_set_spec;
    use crate::limits::Limits;

    fn set(s: &str) -> IntegerSet {
        parse_set_spec(s).unwrap()
    }

    #[test]
    fn classify_examples() {
        let c = classify_ep(&set("periodic p=2 r=0")).unwrap();
        assert_eq!(
            c,
            Classification {
                thick: false,
                syndetic: true,
                ps: true
            }
        );
        let c = classify_ep(&set("periodic p=1 r=0")).unwrap();
        assert!(c.thick && c.syndetic && c.ps);
        let c = classify_ep(&set("periodic p=3 r=")).unwrap();
        assert!(!c.thick && !c.syndetic && !c.ps);
        assert!(classify_ep(&set("blocks pow4")).is_err());
    }

    #[test]
    fn classify_implications() {
        // thick => ps and syndetic => ps on a sweep of small periodic sets.
        for p in 1..=6i64 {
            for mask in 0..(1u32 << p) {
                let residues: Vec<i64> = (0..p).filter(|&r| mask >> r & 1 == 1).collect();
                let s = IntegerSet::EventuallyPeriodic(
                    crate::intsets::EventuallyPeriodic::periodic(p, residues).unwrap(),
                );
                let c = classify_ep(&s).unwrap();
                if c.thick {
                    assert!(c.ps);
                }
                if c.syndetic {
                    assert!(c.ps);
                }
                // A set and its complement are never both thick.
                let comp: Vec<i64> = (0..p).filter(|&r| mask >> r & 1 == 0).collect();
                let cs = IntegerSet::EventuallyPeriodic(
                    crate::intsets::EventuallyPeriodic::periodic(p, comp).unwrap(),
                );
                assert!(!(c.thick && classify_ep(&cs).unwrap().thick));
            }
        }
    }

    #[test]
    fn ps_window_examples() {
        let limits = Limits::default();
        let w = set("periodic p=2 r=0").window(1, 100, &limits).unwrap();
        let witness = is_ps_window(&w, 2, 50).unwrap().unwrap();
        assert_eq!((witness.lo, witness.hi), (1, 100));
        assert!(witness.verify(&w.members().collect::<Vec<_>>()));

        let w = IntegerSet::explicit(vec![1, 10]).window(1, 10, &limits).unwrap();
        assert_eq!(is_ps_window(&w, 2, 5).unwrap(), None);

        let w = set("blocks pow4").window(1, 300, &limits).unwrap();
        let witness = is_ps_window(&w, 1, 4).unwrap().unwrap();
        // The only 4 consecutive members below 300 sit inside [256, 260).
        assert_eq!((witness.lo, witness.hi), (256, 259));
    }

    #[test]
    fn ps_window_argument_errors() {
        let limits = Limits::default();
        let w = set("periodic p=2 r=0").window(1, 10, &limits).unwrap();
        assert!(is_ps_window(&w, 2, 100).is_err());
        assert!(is_ps_window(&w, 0, 5).is_err());
        assert!(is_ps_window(&w, 4, 2).is_err());
    }

    #[test]
    fn split_degenerate_all_one_color() {
        let limits = Limits::default();
        let w = set("periodic p=2 r=0").window(1, 100, &limits).unwrap();
        let n = w.member_count() as usize;
        let (color, witness) = ps_partition_split(&w, &vec![SplitColor::One; n], 2, 10).unwrap();
        assert_eq!(color, SplitColor::One);
        assert_eq!((witness.lo, witness.hi), (1, 100));
    }

    #[test]
    fn split_alternating_coloring_keeps_color_one() {
        let limits = Limits::default();
        let w = set("periodic p=2 r=0").window(1, 100, &limits).unwrap();
        let colors: Vec<SplitColor> = (0..w.member_count())
            .map(|i| if i % 2 == 0 { SplitColor::One } else { SplitColor::Two })
            .collect();
        // Color-one members are 2, 6, 10, ...: spacing 4 <= K = 6.
        let (color, witness) = ps_partition_split(&w, &colors, 2, 6).unwrap();
        assert_eq!(color, SplitColor::One);
        assert_eq!((witness.lo, witness.hi), (1, 100));
        assert_eq!(witness.gap_bound, 6);
    }

    #[test]
    fn split_prefix_coloring_yields_scan_verified_witness() {
        let limits = Limits::default();
        let w = set("periodic p=2 r=0").window(1, 100, &limits).unwrap();
        let members: Vec<i64> = w.members().collect();
        let colors: Vec<SplitColor> = members
            .iter()
            .map(|&m| if m < 50 { SplitColor::One } else { SplitColor::Two })
            .collect();
        let (color, witness) = ps_partition_split(&w, &colors, 2, 10).unwrap();
        let chosen: Vec<i64> = members
            .iter()
            .zip(&colors)
            .filter(|(_, &c)| c == color)
            .map(|(&m, _)| m)
            .collect();
        assert!(witness.verify(&chosen));
        assert!(witness.hi - witness.lo + 1 >= 10);
    }

    #[test]
    fn split_rejects_bad_inputs() {
        let limits = Limits::default();
        let w = IntegerSet::explicit(vec![1, 10]).window(1, 10, &limits).unwrap();
        // gap 8 > k = 2: precondition violation.
        assert!(ps_partition_split(&w, &[SplitColor::One, SplitColor::Two], 2, 4).is_err());
        let w = set("periodic p=2 r=0").window(1, 10, &limits).unwrap();
        assert!(ps_partition_split(&w, &[SplitColor::One], 2, 1).is_err());
    }

    #[test]
    fn embed_examples() {
        let odds = set("periodic p=2 r=1");
        assert_eq!(
            finite_embeds(&[1, 3], &odds, 10, 1).unwrap(),
            EmbedOutcome::Found(Shift { t: 0 })
        );

        let evens = set("periodic p=2 r=0");
        assert_eq!(
            finite_embeds(&[1, 2], &evens, 100, 1).unwrap(),
            EmbedOutcome::Impossible
        );

        let s = set("periodic p=5 r=0,2,4");
        assert_eq!(
            finite_embeds(&[0, 2, 4], &s, 10, 1).unwrap(),
            EmbedOutcome::Found(Shift { t: 0 })
        );
    }

    #[test]
    fn embed_returns_least_shift_for_any_thread_count() {
        // Valid shifts are t ≡ 1 mod 7; the least by magnitude is 1.
        let s = set("periodic p=7 r=1,2,5");
        for threads in [1, 3, 8] {
            let out = finite_embeds(&[0, 1], &s, 50, threads).unwrap();
            assert_eq!(out, EmbedOutcome::Found(Shift { t: 1 }));
        }
        // Negative-only witness: t ≡ 4 mod 7 picks -3 over 4.
        let out = finite_embeds(&[4, 5], &s, 50, 1).unwrap();
        assert_eq!(out, EmbedOutcome::Found(Shift { t: -3 }));
    }

    #[test]
    fn embed_inconclusive_vs_impossible() {
        // Explicit sets never get the impossibility upgrade.
        let y = IntegerSet::explicit(vec![100, 101]);
        assert_eq!(
            finite_embeds(&[0, 1], &y, 10, 1).unwrap(),
            EmbedOutcome::Inconclusive
        );
        // Transient members can carry an embedding even when the periodic
        // tail cannot.
        let y = set("periodic p=2 r=0 plus=-5,-4 from=0");
        assert_eq!(
            finite_embeds(&[0, 1], &y, 10, 1).unwrap(),
            EmbedOutcome::Found(Shift { t: -5 })
        );
        assert!(finite_embeds(&[], &y, 10, 1).is_err());
    }

    #[test]
    fn embed_count_variant() {
        // With threshold 0 the odds have no members below zero, so only the
        // even shifts t >= 0 land {1, 3} inside: 0, 2, 4, 6, 8, 10.
        let odds = set("periodic p=2 r=1");
        assert_eq!(count_embeddings(&[1, 3], &odds, 10).unwrap(), 6);
        let all_odds = set("periodic p=2 r=1 from=-100");
        assert_eq!(count_embeddings(&[1, 3], &all_odds, 10).unwrap(), 11);
    }

    #[test]
    fn difference_property_examples() {
        assert!(fe_difference_property(&[1, 3], &set("periodic p=2 r=1"), 50));
        assert!(fe_difference_property(&[0, 5], &set("periodic p=5 r=0"), 50));
        assert!(fe_difference_property(&[0, 1, 4], &set("periodic p=8 r=0,1,4"), 50));
    }

    #[test]
    fn embedding_transitivity_on_explicit_sets() {
        let f = vec![1, 4, 6];
        let y = IntegerSet::explicit(vec![3, 6, 8, 11, 13, 20]);
        let z = IntegerSet::explicit(vec![0, 5, 8, 10, 13, 15, 30]);
        let t = finite_embeds(&f, &y, 30, 1).unwrap().shift().unwrap().t;
        let shifted: Vec<i64> = f.iter().map(|&x| x + t).collect();
        let u = finite_embeds(&shifted, &z, 30, 1).unwrap().shift().unwrap().t;
        for &x in &f {
            assert!(z.member(t + u + x));
        }
    }

    #[test]
    fn embedding_preserves_arithmetic_progressions() {
        // F contains the 3-AP 1, 4, 7; any shifted copy contains one too.
        let f = vec![1, 4, 7, 9];
        let y = set("periodic p=3 r=1,0 plus=");
        if let EmbedOutcome::Found(Shift { t }) = finite_embeds(&f, &y, 20, 1).unwrap() {
            let shifted: Vec<i64> = f.iter().map(|&x| x + t).collect();
            let has_ap = shifted.iter().any(|&a| {
                shifted.iter().any(|&b| b > a && shifted.contains(&(2 * b - a)))
            });
            assert!(has_ap);
            assert!(shifted.iter().all(|&x| y.member(x)));
        } else {
            panic!("embedding should exist");
        }
    }
}
