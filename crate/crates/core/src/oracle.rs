//! Exhaustive reference solver for small instances.
//!
//! Any subset of sensors may serve as triple left turns (not only the
//! delimiters the offline solver keeps), each right turn is the attached
//! position of the first deficit sensor the triple must carry back, and the
//! candidate ends either walking straight to the anchor or with a double.
//! Every candidate is executed in the simulator; the shortest one that
//! restores coverage wins.

use crate::error::{Error, Result};
use crate::model::{compute_gaps, gaps_of, Instance, Trajectory, TrajectoryBuilder};
use crate::sim::execute_trajectory;

pub const DEFAULT_MAX_N: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub trajectory: Trajectory,
    pub length: f64,
    pub triples: usize,
    pub candidates_checked: usize,
}

/// Every anchor the robot could finish at: for each `k` whose attached
/// prefix `1..=k` plus the untouched suffix leaves no gap, the point the
/// robot must reach to place sensor `k`.
fn anchors(inst: &Instance) -> Vec<f64> {
    let n = inst.n();
    let eps = inst.tol().eps();
    let mut out = Vec::new();
    for k in 1..=n {
        let mut config: Vec<f64> = (1..=k).map(|i| inst.target(i)).collect();
        config.extend_from_slice(&inst.positions()[k..]);
        config.sort_by(f64::total_cmp);
        if !gaps_of(inst.length(), inst.range(), &config, inst.tol()).is_empty() {
            continue;
        }
        let balance = (2 * k - 1) as f64 * inst.range() - inst.x(k);
        let c = if balance < -eps { inst.x(k) } else { inst.target(k) };
        if !out.iter().any(|&o: &f64| (o - c).abs() <= eps) {
            out.push(c);
        }
    }
    out
}

pub fn brute_force_optimal(inst: &Instance, max_n: usize) -> Result<OracleResult> {
    let n = inst.n();
    if n > max_n {
        return Err(Error::TooLarge { n, max: max_n });
    }
    if compute_gaps(inst).is_empty() {
        return Ok(OracleResult {
            trajectory: Trajectory::empty(0.0),
            length: 0.0,
            triples: 0,
            candidates_checked: 0,
        });
    }
    let anchors = anchors(inst);
    let eps = inst.tol().eps();
    let r = inst.range();
    let negative: Vec<bool> = (1..=n)
        .map(|i| (2 * i - 1) as f64 * r - inst.x(i) < -eps)
        .collect();
    let first_negative = |after: usize, upto: usize| (after + 1..=upto).find(|&j| negative[j - 1]);

    let mut best: Option<OracleResult> = None;
    let mut checked = 0;
    for mask in 0u32..(1u32 << n) {
        let lefts: Vec<usize> = (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        let mut prefix = TrajectoryBuilder::new(0.0, inst.tol());
        let mut prev = 0;
        let mut ok = true;
        for &s in &lefts {
            let Some(b) = first_negative(prev, s) else {
                ok = false;
                break;
            };
            prefix.move_to(inst.x(s));
            prefix.move_to(inst.target(b));
            prev = s;
        }
        if !ok {
            continue;
        }
        let mut endings = Vec::with_capacity(2 * anchors.len());
        let double_b = first_negative(prev, n);
        for &c in &anchors {
            let mut straight = prefix.clone();
            straight.move_to(c);
            endings.push(straight.build());
            if let Some(b) = double_b {
                let mut double = prefix.clone();
                double.move_to(c);
                double.move_to(inst.target(b));
                endings.push(double.build());
            }
        }
        for t in endings {
            checked += 1;
            if t.validate().is_err() {
                continue;
            }
            let rep = execute_trajectory(inst, &t);
            if !rep.covered {
                continue;
            }
            let better = match &best {
                None => true,
                Some(cur) => {
                    rep.length < cur.length - eps
                        || (rep.length <= cur.length + eps && lefts.len() < cur.triples)
                }
            };
            if better {
                best = Some(OracleResult {
                    length: rep.length,
                    trajectory: t,
                    triples: lefts.len(),
                    candidates_checked: 0,
                });
            }
        }
    }
    let mut best = best.ok_or_else(|| {
        Error::InvalidTrajectory("no candidate restores coverage".into())
    })?;
    best.candidates_checked = checked;
    Ok(best)
}
