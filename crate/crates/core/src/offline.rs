//! Linear-time optimal offline trajectory.
//!
//! Every optimal trajectory can be taken to be a sequence of triples whose
//! left turns sit on potential triple delimiters, optionally followed by a
//! final double whose left turn is the anchor `c`. The solver enumerates the
//! `m + 1` candidates `T_0..T_m` through their overheads in a single pass.

use crate::model::{compute_gaps, coverage_balances, BalanceTable, Instance, Trajectory};

/// Potential triple delimiters: pairs `(b_i, a_i)` of 1-based sensor indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DelimiterList {
    pub pairs: Vec<(usize, usize)>,
    /// First negative-balance sensor after `a_m` (at or before the anchor
    /// sensor), if any. Its presence forces every candidate to end with a
    /// double.
    pub trailing_b: Option<usize>,
}

impl DelimiterList {
    pub fn m(&self) -> usize {
        self.pairs.len()
    }

    pub fn a_indices(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(_, a)| a).collect()
    }
}

/// The last sensor to be moved and the double/termination anchor `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnchorInfo {
    pub k: usize,
    pub c: f64,
}

/// Whether sensor `j` can be the left turn of a triple.
pub(crate) fn is_delimiter(inst: &Instance, bal: &BalanceTable, j: usize) -> bool {
    let tol = inst.tol();
    let two_r = 2.0 * inst.range();
    let c = bal.get(j);
    if tol.is_negative(c) && c > -two_r + tol.eps() {
        return true;
    }
    tol.eq(c, -two_r) && j < inst.n() && tol.eq(inst.x(j), inst.x(j + 1))
}

/// Smallest `k` such that placing sensors `1..=k` on their attached
/// positions, with every later sensor left where it is, covers the barrier;
/// together with the anchor `c` where the robot turns for the final double
/// or stops.
///
/// Returns `None` when the barrier is already covered.
pub fn anchor_point(inst: &Instance, bal: &BalanceTable) -> Option<AnchorInfo> {
    if compute_gaps(inst).is_empty() {
        return None;
    }
    let n = inst.n();
    let r = inst.range();
    let len = inst.length();
    let eps = inst.tol().eps();
    // suffix_gap_hi[s]: right end of the rightmost gap left by sensors s..=n (1-based)
    let mut suffix_gap_hi = vec![f64::NEG_INFINITY; n + 2];
    if inst.x(n) + r < len - eps {
        suffix_gap_hi[n] = len;
    }
    for s in (1..n).rev() {
        let (lo, hi) = (inst.x(s) + r, (inst.x(s + 1) - r).min(len));
        let here = if hi - lo > eps { hi } else { f64::NEG_INFINITY };
        suffix_gap_hi[s] = suffix_gap_hi[s + 1].max(here);
    }
    let covers = |k: usize| {
        let edge = 2.0 * r * k as f64;
        edge >= len - eps
            || (k < n && inst.x(k + 1) - r <= edge + eps && suffix_gap_hi[k + 1] <= edge + eps)
    };
    let k = (1..=n).find(|&k| covers(k)).unwrap_or(n);
    let c = if inst.tol().is_negative(bal.get(k)) {
        inst.x(k)
    } else {
        inst.target(k)
    };
    Some(AnchorInfo { k, c })
}

/// Delimiter list of an instance with at least one gap (empty otherwise).
pub fn potential_delimiters(inst: &Instance, bal: &BalanceTable) -> DelimiterList {
    anchor_point(inst, bal).map_or_else(DelimiterList::default, |a| delimiters_upto(inst, bal, a.k))
}

/// Builds the delimiter list over sensors `1..=k`.
pub fn delimiters_upto(inst: &Instance, bal: &BalanceTable, k: usize) -> DelimiterList {
    let tol = inst.tol();
    let mut pairs = Vec::new();
    let mut pending_b: Option<usize> = None;
    for j in 1..=k {
        if !tol.is_negative(bal.get(j)) {
            continue;
        }
        let b = *pending_b.get_or_insert(j);
        if is_delimiter(inst, bal, j) {
            pairs.push((b, j));
            pending_b = None;
        }
    }
    DelimiterList {
        pairs,
        trailing_b: pending_b,
    }
}

/// Overheads `o_0..o_m` of the candidate trajectories over the straight
/// walk to `c`. `o_j` performs triples on the first `j` delimiter pairs and
/// finishes with a double unless `j = m` and no negative sensor remains.
pub fn overheads(inst: &Instance, delims: &DelimiterList, anchor: &AnchorInfo) -> Vec<f64> {
    let m = delims.m();
    let mut out = Vec::with_capacity(m + 1);
    let mut triples = 0.0;
    for j in 0..=m {
        let next_b = if j < m {
            Some(delims.pairs[j].0)
        } else {
            delims.trailing_b
        };
        let double = next_b.map_or(0.0, |b| anchor.c - inst.target(b));
        out.push(double + triples);
        if j < m {
            let (b, a) = delims.pairs[j];
            triples += 2.0 * (inst.x(a) - inst.target(b));
        }
    }
    out
}

/// Full breakdown of an offline solve.
#[derive(Debug, Clone, PartialEq)]
pub struct OfflineSolution {
    pub trajectory: Trajectory,
    pub balances: BalanceTable,
    pub anchor: Option<AnchorInfo>,
    pub delimiters: DelimiterList,
    pub overheads: Vec<f64>,
    /// Number of triples in the chosen candidate.
    pub triples: usize,
    pub ends_with_double: bool,
}

/// Builds the candidate trajectory `T_j`.
pub fn candidate_trajectory(
    inst: &Instance,
    delims: &DelimiterList,
    anchor: &AnchorInfo,
    j: usize,
) -> Trajectory {
    let mut b = crate::model::TrajectoryBuilder::new(0.0, inst.tol());
    for &(bi, ai) in &delims.pairs[..j] {
        b.move_to(inst.x(ai));
        b.move_to(inst.target(bi));
    }
    b.move_to(anchor.c);
    let next_b = if j < delims.m() {
        Some(delims.pairs[j].0)
    } else {
        delims.trailing_b
    };
    if let Some(nb) = next_b {
        b.move_to(inst.target(nb));
    }
    b.build()
}

pub fn solve_offline_detailed(inst: &Instance) -> OfflineSolution {
    let balances = coverage_balances(inst);
    let Some(anchor) = anchor_point(inst, &balances) else {
        return OfflineSolution {
            trajectory: Trajectory::empty(0.0),
            balances,
            anchor: None,
            delimiters: DelimiterList::default(),
            overheads: Vec::new(),
            triples: 0,
            ends_with_double: false,
        };
    };
    let delimiters = delimiters_upto(inst, &balances, anchor.k);
    let overheads = overheads(inst, &delimiters, &anchor);
    // smallest j on ties
    let eps = inst.tol().eps();
    let mut best = 0;
    for (j, &o) in overheads.iter().enumerate() {
        if o < overheads[best] - eps {
            best = j;
        }
    }
    let trajectory = candidate_trajectory(inst, &delimiters, &anchor, best);
    let ends_with_double = best < delimiters.m() || delimiters.trailing_b.is_some();
    OfflineSolution {
        trajectory,
        balances,
        anchor: Some(anchor),
        delimiters,
        overheads,
        triples: best,
        ends_with_double,
    }
}

/// Optimal trajectory restoring coverage; empty if the barrier is covered.
pub fn solve_offline(inst: &Instance) -> Trajectory {
    solve_offline_detailed(inst).trajectory
}
