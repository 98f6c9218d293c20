//! Finite-scale Ramsey machinery: the longest-branch reading of König's
//! lemma, monochromatic clique extraction for pair colorings by majority
//! focusing, and monochromatic 3-term arithmetic progressions.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::prcalc::Coloring;

/// A finitely branching tree given by its levels and parent pointers.
#[derive(Debug, Clone)]
pub struct LevelTree {
    levels: Vec<Vec<u64>>,
    parent: HashMap<u64, u64>,
}

impl LevelTree {
    /// `levels[0]` holds the roots; every node at level i+1 must name a
    /// parent at level i and ids must be unique across the tree.
    pub fn new(levels: Vec<Vec<u64>>, parent: HashMap<u64, u64>) -> Result<LevelTree> {
        let mut seen = HashMap::new();
        for (depth, level) in levels.iter().enumerate() {
            for &node in level {
                if seen.insert(node, depth).is_some() {
                    return Err(Error::InvalidInput(format!("duplicate node id {node}")));
                }
            }
        }
        for (depth, level) in levels.iter().enumerate().skip(1) {
            for &node in level {
                let Some(&p) = parent.get(&node) else {
                    return Err(Error::InvalidInput(format!("node {node} has no parent")));
                };
                if seen.get(&p) != Some(&(depth - 1)) {
                    return Err(Error::InvalidInput(format!(
                        "parent {p} of node {node} is not one level down"
                    )));
                }
            }
        }
        Ok(LevelTree { levels, parent })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }
}

/// Root-to-deepest-level branch obtained by walking parent pointers up from
/// the least node of the deepest level. Requires every level non-empty.
pub fn koenig_branch(tree: &LevelTree) -> Result<Vec<u64>> {
    if let Some(level) = tree.levels.iter().position(|l| l.is_empty()) {
        return Err(Error::EmptyLevel { level });
    }
    if tree.levels.is_empty() {
        return Ok(Vec::new());
    }
    let start = *tree.levels.last().unwrap().iter().min().unwrap();
    let mut branch = vec![start];
    let mut cur = start;
    while let Some(&p) = tree.parent.get(&cur) {
        branch.push(p);
        cur = p;
    }
    branch.reverse();
    Ok(branch)
}

/// A total coloring of the unordered pairs of [1, N].
#[derive(Debug, Clone)]
pub struct PairColoring {
    n: u32,
    r: u32,
    // Triangular table indexed by pairs i < j.
    table: Vec<u32>,
}

impl PairColoring {
    fn index(i: u32, j: u32) -> usize {
        debug_assert!(i < j);
        let j = j as usize;
        (j - 1) * (j - 2) / 2 + (i as usize - 1)
    }

    /// Builds the coloring from a function on pairs i < j.
    pub fn from_fn(n: u32, r: u32, mut color: impl FnMut(u32, u32) -> u32) -> Result<PairColoring> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("need N >= 2, got {n}")));
        }
        if r < 1 {
            return Err(Error::InvalidInput("need at least one color".into()));
        }
        let mut table = vec![0u32; (n as usize) * (n as usize - 1) / 2];
        for j in 2..=n {
            for i in 1..j {
                let c = color(i, j);
                if c < 1 || c > r {
                    return Err(Error::InvalidInput(format!(
                        "color {c} of pair ({i}, {j}) outside 1..={r}"
                    )));
                }
                table[Self::index(i, j)] = c;
            }
        }
        Ok(PairColoring { n, r, table })
    }

    /// Builds the coloring from explicit triples (i, j, color); every pair
    /// must be covered exactly once.
    pub fn from_triples(n: u32, r: u32, triples: &[(u32, u32, u32)]) -> Result<PairColoring> {
        let mut map = HashMap::new();
        for &(i, j, c) in triples {
            if i == j || i < 1 || j < 1 || i > n || j > n {
                return Err(Error::InvalidInput(format!("bad pair ({i}, {j})")));
            }
            let key = (i.min(j), i.max(j));
            if map.insert(key, c).is_some() {
                return Err(Error::InvalidInput(format!(
                    "pair ({}, {}) colored twice",
                    key.0, key.1
                )));
            }
        }
        let expected = (n as usize) * (n as usize - 1) / 2;
        if map.len() != expected {
            return Err(Error::InvalidInput(format!(
                "{} pairs colored, expected {expected}",
                map.len()
            )));
        }
        PairColoring::from_fn(n, r, |i, j| map[&(i, j)])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn colors(&self) -> u32 {
        self.r
    }

    pub fn color(&self, i: u32, j: u32) -> u32 {
        debug_assert!(i != j && i >= 1 && j >= 1 && i <= self.n && j <= self.n);
        self.table[Self::index(i.min(j), i.max(j))]
    }
}

/// A monochromatic set extracted from a pair coloring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonoClique {
    pub members: Vec<u32>,
    pub color: u32,
}

/// Greedy majority-focusing extraction of a monochromatic set.
///
/// Repeatedly take the least remaining element a, label it with the color
/// class holding the majority of the remaining candidates as seen from a
/// (ties to the smaller color), and keep only that class. Every pair (a, b)
/// with b kept later is colored with a's label, so the entries sharing the
/// most frequent label form a monochromatic set of size at least
/// floor(log2(N) / 2) when r = 2.
pub fn greedy_clique(pc: &PairColoring) -> MonoClique {
    let mut remaining: Vec<u32> = (1..=pc.n()).collect();
    let mut labelled: Vec<(u32, u32)> = Vec::new();
    while let Some(&a) = remaining.first() {
        let rest = &remaining[1..];
        if rest.is_empty() {
            // The dangling last element has no later partners; its label
            // never constrains a pair, so it joins the class it survived
            // into.
            let label = labelled.last().map_or(1, |&(_, c)| c);
            labelled.push((a, label));
            break;
        }
        let mut counts = vec![0u32; pc.colors() as usize + 1];
        for &b in rest {
            counts[pc.color(a, b) as usize] += 1;
        }
        let majority = (1..=pc.colors())
            .max_by_key(|&c| (counts[c as usize], std::cmp::Reverse(c)))
            .unwrap();
        labelled.push((a, majority));
        remaining = rest
            .iter()
            .copied()
            .filter(|&b| pc.color(a, b) == majority)
            .collect();
    }
    let mut totals = vec![0u32; pc.colors() as usize + 1];
    for &(_, c) in &labelled {
        totals[c as usize] += 1;
    }
    let color = (1..=pc.colors())
        .max_by_key(|&c| (totals[c as usize], std::cmp::Reverse(c)))
        .unwrap();
    let members = labelled
        .iter()
        .filter(|&&(_, c)| c == color)
        .map(|&(a, _)| a)
        .collect();
    MonoClique { members, color }
}

/// Least (a, d) with d >= 1 such that a, a+d, a+2d all share a color, or
/// `None`.
pub fn find_mono_3ap(col: &Coloring) -> Option<(i64, i64)> {
    let n = col.n();
    for a in 1..=n {
        for d in 1..=(n - a) / 2 {
            let c = col.color_of(a);
            if col.color_of(a + d) == c && col.color_of(a + 2 * d) == c {
                return Some((a, d));
            }
        }
    }
    None
}
