//! Partition-regularity laboratory: the coefficient condition for single
//! linear equations, exhaustive avoiding-coloring search with canonical
//! symmetry breaking, the base-5 obstruction coloring for x + y = z², and
//! the injective-regularity coefficient pipeline.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::strcalc::{self, CoeffString};

/// A diophantine equation form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Equation {
    /// c_1 X_1 + ... + c_n X_n = 0 with non-zero coefficients, n >= 2.
    Linear(Vec<i64>),
    /// X + Y - Z² = 0.
    SumEqualsSquare,
}

impl Equation {
    pub fn linear(coeffs: Vec<i64>) -> Result<Equation> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a linear equation needs at least 2 coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c == 0) {
            return Err(Error::InvalidInput("coefficients must be non-zero".into()));
        }
        Ok(Equation::Linear(coeffs))
    }

    pub fn arity(&self) -> usize {
        match self {
            Equation::Linear(c) => c.len(),
            Equation::SumEqualsSquare => 3,
        }
    }

    /// Whether the tuple solves the equation.
    pub fn satisfied_by(&self, xs: &[i64]) -> bool {
        match self {
            Equation::Linear(c) => {
                xs.len() == c.len() && c.iter().zip(xs).map(|(&c, &x)| c * x).sum::<i64>() == 0
            }
            Equation::SumEqualsSquare => xs.len() == 3 && xs[0] + xs[1] == xs[2] * xs[2],
        }
    }
}

/// A total coloring of [1, N] with colors 1..=r.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coloring {
    r: u32,
    assign: Vec<u32>,
}

impl Coloring {
    pub fn new(r: u32, assign: Vec<u32>) -> Result<Coloring> {
        if r < 1 {
            return Err(Error::InvalidInput("need at least one color".into()));
        }
        if assign.is_empty() {
            return Err(Error::InvalidInput("coloring of an empty range".into()));
        }
        if let Some(&c) = assign.iter().find(|&&c| c < 1 || c > r) {
            return Err(Error::InvalidInput(format!("color {c} outside 1..={r}")));
        }
        Ok(Coloring { r, assign })
    }

    pub fn n(&self) -> i64 {
        self.assign.len() as i64
    }

    pub fn colors(&self) -> u32 {
        self.r
    }

    pub fn assignments(&self) -> &[u32] {
        &self.assign
    }

    /// Color of `x` (1-based); panics outside [1, N].
    pub fn color_of(&self, x: i64) -> u32 {
        self.assign[(x - 1) as usize]
    }
}

/// Lexicographically least non-empty index subset (1-based, ascending) whose
/// coefficients sum to zero, or `None`. By the classical criterion the
/// equation is partition regular exactly when such a subset exists.
pub fn rado_condition(coeffs: &[i64]) -> Result<Option<Vec<usize>>> {
    if coeffs.iter().any(|&c| c == 0) {
        return Err(Error::InvalidInput("coefficients must be non-zero".into()));
    }
    if coeffs.len() > 62 {
        return Err(Error::InvalidInput("too many coefficients".into()));
    }
    fn rec(coeffs: &[i64], start: usize, sum: i64, chosen: &mut Vec<usize>) -> bool {
        for i in start..coeffs.len() {
            chosen.push(i + 1);
            let s = sum + coeffs[i];
            if !chosen.is_empty() && s == 0 {
                return true;
            }
            if rec(coeffs, i + 1, s, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    if rec(coeffs, 0, 0, &mut chosen) {
        Ok(Some(chosen))
    } else {
        Ok(None)
    }
}

fn isqrt(v: i64) -> i64 {
    if v < 0 {
        return -1;
    }
    let mut r = (v as f64).sqrt() as i64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// Least (lexicographic) monochromatic solution tuple in [1, N]^arity, with
/// distinct entries when `injective`; `None` if there is none.
pub fn find_mono_solution(eq: &Equation, col: &Coloring, injective: bool) -> Option<Vec<i64>> {
    let n = col.n();
    match eq {
        Equation::Linear(c) => {
            let vars = c.len();
            let mut xs = vec![0i64; vars];
            find_linear_rec(c, col, injective, n, 0, &mut xs)
        }
        Equation::SumEqualsSquare => {
            for x in 1..=n {
                for y in 1..=n {
                    let z = isqrt(x + y);
                    if z < 1 || z > n || z * z != x + y {
                        continue;
                    }
                    if injective && (x == y || x == z || y == z) {
                        continue;
                    }
                    let color = col.color_of(x);
                    if col.color_of(y) == color && col.color_of(z) == color {
                        return Some(vec![x, y, z]);
                    }
                }
            }
            None
        }
    }
}

fn find_linear_rec(
    c: &[i64],
    col: &Coloring,
    injective: bool,
    n: i64,
    depth: usize,
    xs: &mut Vec<i64>,
) -> Option<Vec<i64>> {
    let color_ok = |xs: &[i64]| {
        let color = col.color_of(xs[0]);
        xs.iter().all(|&x| col.color_of(x) == color)
    };
    if depth == c.len() - 1 {
        // The last variable is determined by the prefix.
        let partial: i64 = c[..depth].iter().zip(xs.iter()).map(|(&ci, &x)| ci * x).sum();
        let last = c[depth];
        if partial % last != 0 {
            return None;
        }
        let x = -partial / last;
        if x < 1 || x > n {
            return None;
        }
        if injective && xs[..depth].contains(&x) {
            return None;
        }
        xs[depth] = x;
        let ok = color_ok(&xs[..=depth]);
        let found = ok.then(|| xs[..=depth].to_vec());
        return found;
    }
    for x in 1..=n {
        if injective && xs[..depth].contains(&x) {
            continue;
        }
        xs[depth] = x;
        if let Some(sol) = find_linear_rec(c, col, injective, n, depth + 1, xs) {
            return Some(sol);
        }
    }
    None
}

/// Distinct-value supports of solutions within [1, N], grouped by maximum
/// element: `out[m]` lists the supports whose largest element is `m`.
fn solution_supports(eq: &Equation, n: i64, injective: bool) -> Vec<Vec<Vec<i64>>> {
    let mut by_max: Vec<BTreeSet<Vec<i64>>> = vec![BTreeSet::new(); n as usize + 1];
    let mut add = |xs: &[i64]| {
        if injective {
            let mut sorted = xs.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != xs.len() {
                return;
            }
        }
        let mut support = xs.to_vec();
        support.sort_unstable();
        support.dedup();
        let max = *support.last().unwrap();
        by_max[max as usize].insert(support);
    };
    match eq {
        Equation::Linear(c) => {
            let vars = c.len();
            let mut xs = vec![1i64; vars];
            loop {
                let partial: i64 = c[..vars - 1]
                    .iter()
                    .zip(xs.iter())
                    .map(|(&ci, &x)| ci * x)
                    .sum();
                if partial % c[vars - 1] == 0 {
                    let last = -partial / c[vars - 1];
                    if (1..=n).contains(&last) {
                        xs[vars - 1] = last;
                        add(&xs);
                    }
                }
                // Advance the prefix odometer.
                let mut i = vars - 1;
                loop {
                    if i == 0 {
                        return by_max.into_iter().map(|s| s.into_iter().collect()).collect();
                    }
                    i -= 1;
                    if xs[i] < n {
                        xs[i] += 1;
                        for x in xs[i + 1..vars - 1].iter_mut() {
                            *x = 1;
                        }
                        break;
                    }
                }
            }
        }
        Equation::SumEqualsSquare => {
            let mut z = 1i64;
            while z * z <= 2 * n && z <= n {
                let square = z * z;
                for x in (square - n).max(1)..=(square - 1).min(n) {
                    let y = square - x;
                    add(&[x, y, z]);
                }
                z += 1;
            }
            by_max.into_iter().map(|s| s.into_iter().collect()).collect()
        }
    }
}

/// Result of an avoiding-coloring search that ran to completion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    /// Least canonical coloring with no monochromatic solution, if any.
    pub coloring: Option<Coloring>,
    /// Assignment attempts, identical for every thread count.
    pub nodes: u64,
}

struct SearchCtx<'a> {
    supports_by_max: &'a [Vec<Vec<i64>>],
    r: u32,
    n: usize,
    budget: u64,
    deadline: Option<Instant>,
    budget_ms: u64,
}

/// Returns Ok(true) when a completion was found (it is left in `assign`).
fn search_dfs(
    ctx: &SearchCtx<'_>,
    assign: &mut Vec<u32>,
    max_used: u32,
    stop_depth: usize,
    nodes: &mut u64,
) -> Result<bool> {
    if assign.len() == stop_depth {
        return Ok(true);
    }
    let m = assign.len() + 1; // element being colored
    for color in 1..=ctx.r.min(max_used + 1) {
        *nodes += 1;
        if *nodes > ctx.budget {
            return Err(Error::SearchNodesExceeded { limit: ctx.budget });
        }
        if *nodes % 4096 == 0 {
            if let Some(deadline) = ctx.deadline {
                if Instant::now() > deadline {
                    return Err(Error::TimeBudgetExceeded {
                        budget_ms: ctx.budget_ms,
                    });
                }
            }
        }
        // Every support in bucket m contains m, which would take `color`; the
        // support goes monochromatic iff all its earlier elements carry it.
        let conflict = ctx.supports_by_max[m].iter().any(|support| {
            support
                .iter()
                .all(|&e| e == m as i64 || assign[(e - 1) as usize] == color)
        });
        if conflict {
            continue;
        }
        assign.push(color);
        if search_dfs(ctx, assign, max_used.max(color), stop_depth, nodes)? {
            return Ok(true);
        }
        assign.pop();
    }
    Ok(false)
}

/// Exhaustive search for a coloring of [1, N] with no monochromatic
/// solution of `eq` (distinct-entry solutions only when `injective`).
///
/// Canonical symmetry breaking: element 1 gets color 1 and color k+1 may
/// appear only after color k; the search returns the least such coloring in
/// color-sequence order. `None` inside the report is an exhaustive proof
/// that every r-coloring of [1, N] has a monochromatic solution.
///
/// The tree is split at a fixed shallow depth into canonical branches; the
/// node budget applies per branch and threads only distribute branches, so
/// result and node count are independent of `threads`.
pub fn search_avoiding_coloring(
    eq: &Equation,
    r: u32,
    n: i64,
    injective: bool,
    limits: &Limits,
    threads: usize,
) -> Result<SearchReport> {
    if r < 1 {
        return Err(Error::InvalidInput("need at least one color".into()));
    }
    if n < 1 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let supports = solution_supports(eq, n, injective);
    let ctx = SearchCtx {
        supports_by_max: &supports,
        r,
        n: n as usize,
        budget: limits.max_search_nodes,
        deadline: limits.deadline(),
        budget_ms: limits.time_budget_ms.unwrap_or(0),
    };

    // Canonical prefixes at a fixed depth; their enumeration order is the
    // color-sequence order on subtrees.
    let split_depth = (n as usize).min(5);
    let mut prefixes: Vec<Vec<u32>> = Vec::new();
    let mut prefix_nodes = 0u64;
    {
        let mut assign: Vec<u32> = Vec::new();
        collect_prefixes(&ctx, &mut assign, 0, split_depth, &mut prefix_nodes, &mut prefixes)?;
    }

    // Evaluate subtrees; merge in prefix order. Sequential evaluation stops
    // at the first hit, the parallel path computes extras and discards them.
    type SubtreeResult = Result<(Option<Vec<u32>>, u64)>;
    let eval = |prefix: &Vec<u32>| -> SubtreeResult {
        let mut assign = prefix.clone();
        let max_used = assign.iter().copied().max().unwrap_or(0);
        let mut nodes = 0u64;
        let found = search_dfs(&ctx, &mut assign, max_used, ctx.n, &mut nodes)?;
        Ok((found.then_some(assign), nodes))
    };

    let results: Vec<SubtreeResult> = if threads <= 1 || prefixes.len() <= 1 {
        let mut out = Vec::new();
        for p in &prefixes {
            let r = eval(p);
            let stop = matches!(&r, Ok((Some(_), _)) | Err(_));
            out.push(r);
            if stop {
                break;
            }
        }
        out
    } else {
        use std::sync::atomic::{AtomicUsize, Ordering};
        use std::sync::Mutex;
        let cursor = AtomicUsize::new(0);
        let slots: Vec<Mutex<Option<SubtreeResult>>> =
            prefixes.iter().map(|_| Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..threads.min(prefixes.len()) {
                scope.spawn(|| loop {
                    let i = cursor.fetch_add(1, Ordering::Relaxed);
                    if i >= prefixes.len() {
                        break;
                    }
                    *slots[i].lock().unwrap() = Some(eval(&prefixes[i]));
                });
            }
        });
        slots
            .into_iter()
            .map(|s| s.into_inner().unwrap().expect("subtree evaluated"))
            .collect()
    };

    let mut nodes = prefix_nodes;
    for res in results {
        match res {
            Err(e) => return Err(e),
            Ok((Some(assign), sub_nodes)) => {
                nodes += sub_nodes;
                let coloring = Coloring::new(r, assign)?;
                if find_mono_solution(eq, &coloring, injective).is_some() {
                    return Err(Error::InternalVerification(
                        "avoiding coloring failed re-verification".into(),
                    ));
                }
                return Ok(SearchReport {
                    coloring: Some(coloring),
                    nodes,
                });
            }
            Ok((None, sub_nodes)) => nodes += sub_nodes,
        }
    }
    Ok(SearchReport {
        coloring: None,
        nodes,
    })
}

fn collect_prefixes(
    ctx: &SearchCtx<'_>,
    assign: &mut Vec<u32>,
    max_used: u32,
    depth: usize,
    nodes: &mut u64,
    out: &mut Vec<Vec<u32>>,
) -> Result<()> {
    if assign.len() == depth {
        out.push(assign.clone());
        return Ok(());
    }
    let m = assign.len() + 1;
    for color in 1..=ctx.r.min(max_used + 1) {
        *nodes += 1;
        if *nodes > ctx.budget {
            return Err(Error::SearchNodesExceeded { limit: ctx.budget });
        }
        let conflict = ctx.supports_by_max[m].iter().any(|support| {
            support
                .iter()
                .all(|&e| e == m as i64 || assign[(e - 1) as usize] == color)
        });
        if conflict {
            continue;
        }
        assign.push(color);
        collect_prefixes(ctx, assign, max_used.max(color), depth, nodes, out)?;
        assign.pop();
    }
    Ok(())
}

/// The obstruction coloring for x + y = z²: class `(i, j)` where
/// `i = n mod 5` and `j` is the mod-5 class of the 5-free part of `n - i`
/// (j in 1..=4), with `j = 0` reserved for the finitely many n equal to
/// their own residue.
pub fn quintic_color(n: i64) -> Result<(u8, u8)> {
    if n < 1 {
        return Err(Error::InvalidInput(format!("n must be positive, got {n}")));
    }
    let i = n % 5;
    let mut m = n - i;
    if m == 0 {
        return Ok((i as u8, 0));
    }
    while m % 5 == 0 {
        m /= 5;
    }
    Ok((i as u8, (m % 5) as u8))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuinticReport {
    pub holds: bool,
    pub counterexample: Option<[i64; 3]>,
    pub triples_checked: u64,
}

/// Scans all x, y, z <= N with x + y = z² and reports whether any triple is
/// monochromatic under the quintic coloring (none should be). The lone
/// all-equal solution x = y = z = 2 is structurally trivial and excluded.
pub fn verify_quintic_obstruction(n: i64) -> Result<QuinticReport> {
    if n < 1 {
        return Err(Error::InvalidInput(format!("N must be positive, got {n}")));
    }
    let mut checked = 0u64;
    let mut z = 1i64;
    while z <= n && z * z <= 2 * n {
        let square = z * z;
        let cz = quintic_color(z)?;
        for x in (square - n).max(1)..=(square - 1).min(n) {
            let y = square - x;
            if x == y && y == z {
                continue;
            }
            checked += 1;
            if quintic_color(x)? == cz && quintic_color(y)? == cz {
                return Ok(QuinticReport {
                    holds: false,
                    counterexample: Some([x, y, z]),
                    triples_checked: checked,
                });
            }
        }
        z += 1;
    }
    Ok(QuinticReport {
        holds: true,
        counterexample: None,
        triples_checked: checked,
    })
}

/// Positive coefficients for the injective-regularity construction, plus the
/// row-shape assignment that makes the combination vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoeffSolution {
    /// a_1 .. a_{n-1}, all positive, primitive (gcd 1).
    pub a: Vec<i64>,
    /// `shape_of_var[i]` is the row shape given to variable i: shape 0
    /// duplicates a_1 in the first two slots, shape n-1 duplicates a_{n-1}
    /// in the last two, and an interior shape q puts a single 0 at position
    /// q with the tail shifted.
    pub shape_of_var: Vec<usize>,
}

fn gcd64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Solves the row-shape system for an equation with coefficients summing to
/// zero, returning positive integers a_1..a_{n-1} and the shape assignment.
///
/// Ordering the coefficients positives-first makes every proper prefix sum
/// positive; the interior column constraints then read
/// `a_m * L_m = a_{m+1} * L_{m+1}` over those prefix sums, which the
/// primitive solution `a_m = lcm(L) / L_m` satisfies exactly.
pub fn injective_pr_coeffs(coeffs: &[i64]) -> Result<CoeffSolution> {
    let n = coeffs.len();
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 coefficients, got {n}"
        )));
    }
    if coeffs.iter().any(|&c| c == 0) {
        return Err(Error::InvalidInput("coefficients must be non-zero".into()));
    }
    if coeffs.iter().sum::<i64>() != 0 {
        return Err(Error::InvalidInput(
            "coefficients must sum to zero".into(),
        ));
    }
    // tau[q] = variable index placed at shape position q.
    let mut tau: Vec<usize> = Vec::with_capacity(n);
    tau.extend((0..n).filter(|&i| coeffs[i] > 0));
    tau.extend((0..n).filter(|&i| coeffs[i] < 0));

    // Proper prefix sums L_1 .. L_{n-1}; positives-first keeps them > 0.
    let mut prefix = Vec::with_capacity(n - 1);
    let mut acc = 0i64;
    for &v in tau.iter().take(n - 1) {
        acc += coeffs[v];
        prefix.push(acc);
    }
    debug_assert!(prefix.iter().all(|&l| l > 0));

    let lcm = prefix
        .iter()
        .fold(1i64, |l, &v| l / gcd64(l, v) * v);
    let mut a: Vec<i64> = prefix.iter().map(|&l| lcm / l).collect();
    let g = a.iter().fold(0i64, |g, &v| gcd64(g, v));
    if g > 1 {
        for v in a.iter_mut() {
            *v /= g;
        }
    }

    let mut shape_of_var = vec![0usize; n];
    for (q, &var) in tau.iter().enumerate() {
        shape_of_var[var] = q;
    }
    let sol = CoeffSolution { a, shape_of_var };

    // The middle equations must hold exactly: column m pairs the variables
    // with shapes above m against those below.
    for m in 1..=n - 2 {
        let above: i64 = (0..n)
            .filter(|&i| sol.shape_of_var[i] > m)
            .map(|i| coeffs[i])
            .sum();
        let below: i64 = (0..n)
            .filter(|&i| sol.shape_of_var[i] < m)
            .map(|i| coeffs[i])
            .sum();
        if sol.a[m] * above + sol.a[m - 1] * below != 0 {
            return Err(Error::InternalVerification(format!(
                "column {m} constraint violated"
            )));
        }
    }
    Ok(sol)
}

fn mu_row(a: &[i64], n: usize, shape: usize) -> Vec<i64> {
    (0..n)
        .map(|m| {
            use std::cmp::Ordering::*;
            match m.cmp(&shape) {
                Less => a[m],
                Greater => a[m - 1],
                Equal => {
                    if shape == 0 {
                        a[0]
                    } else if shape == n - 1 {
                        a[n - 2]
                    } else {
                        0
                    }
                }
            }
        })
        .collect()
}

/// Builds the n coefficient strings mu_1 .. mu_n (one per variable, using
/// the solution's shape assignment) and verifies the three postconditions:
/// the c-weighted sum vanishes, every row is string-equivalent to
/// ⟨a_1, ..., a_{n-1}⟩, and the rows are pairwise distinct.
pub fn build_mu_matrix(coeffs: &[i64], sol: &CoeffSolution) -> Result<Vec<CoeffString>> {
    let n = coeffs.len();
    if sol.a.len() != n - 1 || sol.shape_of_var.len() != n {
        return Err(Error::InvalidInput(
            "solution size does not match the equation".into(),
        ));
    }
    let rows: Vec<Vec<i64>> = (0..n).map(|i| mu_row(&sol.a, n, sol.shape_of_var[i])).collect();

    for m in 0..n {
        let s: i64 = (0..n).map(|i| coeffs[i] * rows[i][m]).sum();
        if s != 0 {
            return Err(Error::InternalVerification(format!(
                "weighted row sum does not vanish at column {m}"
            )));
        }
    }
    let base = CoeffString::new(sol.a.clone());
    for row in &rows {
        if !strcalc::equivalent(&CoeffString::new(row.clone()), &base) {
            return Err(Error::InternalVerification(format!(
                "row {row:?} is not equivalent to the base string"
            )));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if rows[i] == rows[j] {
                return Err(Error::InternalVerification(format!(
                    "rows {i} and {j} coincide"
                )));
            }
        }
    }
    Ok(rows.into_iter().map(CoeffString::new).collect())
}
