//! The equivalence calculus on finite integer strings: the smallest
//! equivalence generated by inserting or deleting zeros and duplicating or
//! collapsing adjacent equal entries, closed under concatenation.
//!
//! A string encodes the coefficients of a linear combination of iterated
//! hyper-extensions of a fixed base point; two combinations are
//! indiscernible exactly when their coefficient strings are equivalent.
//! Deciding equivalence reduces to a canonical form: delete all zeros, then
//! collapse every run of equal adjacent entries. Each pass is a sequence of
//! generator applications, collapsing cannot create zeros, and zero deletion
//! only merges runs, so the two passes reach a fixpoint that is zero-free
//! and run-free; the closure oracle below validates uniqueness at small
//! sizes by brute force.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;

/// A finite (possibly empty) string of integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CoeffString {
    pub entries: Vec<i64>,
}

impl CoeffString {
    pub fn new(entries: Vec<i64>) -> CoeffString {
        CoeffString { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl From<Vec<i64>> for CoeffString {
    fn from(entries: Vec<i64>) -> CoeffString {
        CoeffString { entries }
    }
}

impl fmt::Display for CoeffString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}>",
            self.entries
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Zero-free, run-free normal form of a coefficient string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalString {
    entries: Vec<i64>,
}

impl CanonicalString {
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn as_coeff_string(&self) -> CoeffString {
        CoeffString::new(self.entries.clone())
    }
}

fn strip_zeros(entries: &[i64]) -> Vec<i64> {
    entries.iter().copied().filter(|&e| e != 0).collect()
}

fn collapse_runs(entries: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::with_capacity(entries.len());
    for &e in entries {
        if out.last() != Some(&e) {
            out.push(e);
        }
    }
    out
}

/// Deletes all zeros, then collapses runs of equal adjacent entries,
/// repeating until the string is zero-free and run-free.
pub fn canonical_form(s: &CoeffString) -> CanonicalString {
    let mut cur = s.entries.clone();
    loop {
        let next = collapse_runs(&strip_zeros(&cur));
        if next == cur {
            return CanonicalString { entries: cur };
        }
        cur = next;
    }
}

/// Decides string equivalence by comparing canonical forms.
pub fn equivalent(s: &CoeffString, t: &CoeffString) -> bool {
    canonical_form(s) == canonical_form(t)
}

/// Independent brute-force oracle: BFS over single-step rewrites (insert or
/// delete a zero, duplicate an entry, collapse two adjacent equal entries),
/// restricted to strings over `alphabet` of length at most `max_len`.
/// Returns every reached string, including `s` itself.
pub fn closure_oracle(
    s: &CoeffString,
    max_len: usize,
    alphabet: &BTreeSet<i64>,
    limits: &Limits,
) -> Result<BTreeSet<CoeffString>> {
    if s.len() > max_len {
        return Err(Error::InvalidInput(format!(
            "start string of length {} exceeds max_len {max_len}",
            s.len()
        )));
    }
    if !alphabet.contains(&0) {
        return Err(Error::InvalidInput("alphabet must contain 0".into()));
    }
    if let Some(&e) = s.entries.iter().find(|e| !alphabet.contains(e)) {
        return Err(Error::InvalidInput(format!(
            "entry {e} of the start string is outside the alphabet"
        )));
    }

    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    seen.insert(s.entries.clone());
    queue.push_back(s.entries.clone());

    let push = |state: Vec<i64>, seen: &mut BTreeSet<Vec<i64>>, queue: &mut VecDeque<Vec<i64>>| {
        if state.len() <= max_len && seen.insert(state.clone()) {
            queue.push_back(state);
        }
    };

    while let Some(cur) = queue.pop_front() {
        if seen.len() as u64 > limits.max_search_nodes {
            return Err(Error::StateSpaceExceeded {
                limit: limits.max_search_nodes,
            });
        }
        // Insert a zero at each position.
        for i in 0..=cur.len() {
            let mut next = cur.clone();
            next.insert(i, 0);
            push(next, &mut seen, &mut queue);
        }
        for i in 0..cur.len() {
            // Delete a zero.
            if cur[i] == 0 {
                let mut next = cur.clone();
                next.remove(i);
                push(next, &mut seen, &mut queue);
            }
            // Duplicate an entry.
            let mut dup = cur.clone();
            dup.insert(i, cur[i]);
            push(dup, &mut seen, &mut queue);
            // Collapse two adjacent equal entries.
            if i + 1 < cur.len() && cur[i] == cur[i + 1] {
                let mut next = cur.clone();
                next.remove(i);
                push(next, &mut seen, &mut queue);
            }
        }
    }
    Ok(seen.into_iter().map(CoeffString::new).collect())
}

/// The identity embedding of a linear combination
/// `a_0 x + a_1 *x + ... + a_k (k*)x` as its coefficient string.
pub fn combo_to_string(coeffs: &[i64]) -> CoeffString {
    CoeffString::new(coeffs.to_vec())
}

/// String side of the indiscernibility characterization: two combinations of
/// iterated hyper-extensions of an idempotent base are indiscernible exactly
/// when the coefficient strings are equivalent.
pub fn indiscernible_combo(u: &[i64], v: &[i64]) -> bool {
    equivalent(&combo_to_string(u), &combo_to_string(v))
}
