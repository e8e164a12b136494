//! Trajectory execution and structural checks.
//!
//! The robot follows an early pick-up, late drop policy: every sensor it
//! meets that is not already at its attached position is picked up, and a
//! carried sensor is dropped the moment the robot crosses that sensor's
//! attached position. Sensors that are never carried across their
//! attached position keep their initial location.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::model::{gaps_of, Instance, Tolerance, Trajectory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub final_positions: Vec<f64>,
    /// `true` for sensors the robot moved.
    pub relocated: Vec<bool>,
    pub length: f64,
    pub max_visits: usize,
    pub terminal_visits: usize,
    pub covered: bool,
    pub order_preserved: bool,
}

impl SimulationReport {
    /// Every relocated sensor sits on its attached position.
    pub fn fully_stretched(&self, inst: &Instance) -> bool {
        let eps = inst.tol().eps();
        self.relocated
            .iter()
            .zip(&self.final_positions)
            .enumerate()
            .all(|(k, (&moved, &p))| !moved || (p - inst.target(k + 1)).abs() <= eps)
    }
}

/// Skip-list over sensors not yet visited, so each sensor is examined once.
struct Unvisited {
    next: Vec<usize>,
}

impl Unvisited {
    fn new(n: usize) -> Self {
        Unvisited {
            next: (0..=n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.next[i] != i {
            let up = self.next[self.next[i]];
            self.next[i] = up;
            i = up;
        }
        i
    }

    fn remove(&mut self, i: usize) {
        self.next[i] = i + 1;
    }
}

/// Runs `t` against `inst` and reports the resulting configuration.
pub fn execute_trajectory(inst: &Instance, t: &Trajectory) -> SimulationReport {
    let n = inst.n();
    let eps = inst.tol().eps();
    let xs = inst.positions();
    let targets: Vec<f64> = (1..=n).map(|i| inst.target(i)).collect();

    let mut final_positions = xs.to_vec();
    let mut relocated = vec![false; n];
    let mut unvisited = Unvisited::new(n);
    let mut carried: BTreeSet<usize> = BTreeSet::new();

    for (from, to) in t.segments() {
        let (lo, hi) = if from <= to { (from, to) } else { (to, from) };
        let rightward = to > from;

        // carried sensors whose attached position lies on this leg
        let first = targets.partition_point(|&p| p < lo - eps);
        let last = targets.partition_point(|&p| p <= hi + eps);
        let dropped: Vec<usize> = carried.range(first..last).copied().collect();
        for k in dropped {
            carried.remove(&k);
            final_positions[k] = targets[k];
            relocated[k] = true;
        }

        // sensors met for the first time
        let mut k = unvisited.find(xs.partition_point(|&x| x < lo - eps));
        while k < n && xs[k] <= hi + eps {
            unvisited.remove(k);
            let x = xs[k];
            let target = targets[k];
            if (x - target).abs() > eps {
                let ahead = if rightward {
                    target >= x && target <= hi + eps
                } else {
                    target <= x && target >= lo - eps
                };
                if ahead {
                    final_positions[k] = target;
                    relocated[k] = true;
                } else {
                    carried.insert(k);
                }
            }
            k = unvisited.find(k + 1);
        }
    }

    let order_preserved = final_positions.windows(2).all(|w| w[1] >= w[0] - eps);
    let mut sorted = final_positions.clone();
    sorted.sort_by(f64::total_cmp);
    let covered = gaps_of(inst.length(), inst.range(), &sorted, inst.tol()).is_empty();
    let (max_visits, terminal_visits) = verify_three_visits(t, inst.tol());

    SimulationReport {
        final_positions,
        relocated,
        length: t.length(),
        max_visits,
        terminal_visits,
        covered,
        order_preserved,
    }
}

/// Maximum number of passes over any interior stretch of the barrier, and
/// the number of visits to the termination point.
pub fn verify_three_visits(t: &Trajectory, tol: Tolerance) -> (usize, usize) {
    if t.is_empty() {
        return (1, 1);
    }
    let eps = tol.eps();
    let segs = t.segments();
    let mut cuts: Vec<f64> = t.points();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= eps);

    let mut diff = vec![0_i64; cuts.len() + 1];
    let locate = |v: f64| cuts.partition_point(|&c| c < v - eps);
    for &(a, b) in &segs {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (i, j) = (locate(lo), locate(hi));
        if j > i {
            diff[i] += 1;
            diff[j] -= 1;
        }
    }
    let mut run = 0_i64;
    let mut max_interior = 0_i64;
    for d in &diff[..cuts.len()] {
        run += d;
        max_interior = max_interior.max(run);
    }

    let p = t.terminal;
    let containing = segs
        .iter()
        .filter(|&&(a, b)| a.min(b) <= p + eps && p - eps <= a.max(b))
        .count();
    let joints = t.turns.iter().filter(|&&q| (q - p).abs() <= eps).count();
    (max_interior as usize, containing - joints)
}

/// Checks that `t` is a run of triples and straight segments, ending with a
/// straight segment or a single double: the retraced intervals must be
/// pairwise disjoint except at their endpoints.
pub fn verify_shape(t: &Trajectory, tol: Tolerance) -> bool {
    if t.is_empty() {
        return true;
    }
    if t.validate().is_err() {
        return false;
    }
    let eps = tol.eps();
    let pts = t.points();
    let m = pts.len() - 1;
    let mut prev_hi = pts[0];
    let mut i = 1;
    while i < m {
        // pts[i] is a left turn, pts[i + 1] the following right turn or terminal
        let (hi, lo) = (pts[i], pts[i + 1]);
        if lo < prev_hi - eps {
            return false;
        }
        prev_hi = hi;
        i += 2;
    }
    if m % 2 == 1 && m >= 3 && pts[m] < pts[m - 2] - eps {
        // the last rightward leg must clear the final triple
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Instance {
        Instance::new(2.0, 0.5, vec![2.0, 2.0]).unwrap()
    }

    fn eight_sensors() -> Instance {
        Instance::new(8.0, 0.5, vec![0.3, 2.6, 2.7, 3.6, 4.3, 5.2, 7.3, 7.3]).unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn tiny_double() {
        let t = Trajectory::from_points(&[0.0, 2.0, 0.5]).unwrap();
        let rep = execute_trajectory(&tiny(), &t);
        assert_eq!(rep.final_positions, vec![0.5, 1.5]);
        assert!(rep.covered && rep.order_preserved);
        assert!((rep.length - 3.5).abs() < 1e-12);
        assert_eq!(rep.max_visits, 2);
    }

    #[test]
    fn covered_instance_empty_trajectory() {
        let inst = Instance::new(2.0, 1.0, vec![1.0]).unwrap();
        let rep = execute_trajectory(&inst, &Trajectory::empty(0.0));
        assert_eq!(rep.final_positions, vec![1.0]);
        assert!(rep.covered);
        assert_eq!(rep.length, 0.0);
    }

    #[test]
    fn eight_sensors_optimal_trajectory() {
        let t = Trajectory::from_points(&[0.0, 2.7, 1.5, 3.6, 3.5, 7.5, 6.5]).unwrap();
        let inst = eight_sensors();
        let rep = execute_trajectory(&inst, &t);
        let want = [0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5, 7.5];
        for (p, w) in rep.final_positions.iter().zip(want) {
            assert!((p - w).abs() < 1e-9, "{:?}", rep.final_positions);
        }
        assert!(rep.covered && rep.order_preserved && rep.fully_stretched(&inst));
        assert!((rep.length - 11.1).abs() < 1e-9);
        assert_eq!(rep.max_visits, 3);
    }

    #[test]
    fn incomplete_trajectory_is_reported() {
        let t = Trajectory::from_points(&[0.0, 2.0]).unwrap();
        let rep = execute_trajectory(&tiny(), &t);
        assert!(!rep.covered);
        // picked at 2.0 but never carried back: initial positions kept
        assert_eq!(rep.final_positions, vec![2.0, 2.0]);
    }

    #[test]
    fn three_visits_examples() {
        let t = Trajectory::from_points(&[0.0, 2.0, 0.5]).unwrap();
        assert_eq!(verify_three_visits(&t, tol()), (2, 2));
        let t = Trajectory::from_points(&[0.0, 2.7, 1.5, 3.6, 3.5, 7.5, 6.5]).unwrap();
        assert_eq!(verify_three_visits(&t, tol()), (3, 2));
        assert_eq!(verify_three_visits(&Trajectory::empty(0.0), tol()), (1, 1));
        let t = Trajectory::from_points(&[0.0, 3.0, 1.0, 2.0]).unwrap();
        assert_eq!(verify_three_visits(&t, tol()).0, 3);
    }

    #[test]
    fn shape_examples() {
        for pts in [
            &[0.0, 2.0, 0.5][..],
            &[0.0, 2.7, 1.5, 3.6, 3.5, 7.5, 6.5],
            &[0.0, 1.3, 0.5, 2.5],
        ] {
            assert!(verify_shape(&Trajectory::from_points(pts).unwrap(), tol()));
        }
        assert!(verify_shape(&Trajectory::empty(0.0), tol()));
        let nested = Trajectory::from_points(&[0.0, 3.0, 1.0, 2.0]).unwrap();
        assert!(!verify_shape(&nested, tol()));
        let overlapping = Trajectory::from_points(&[0.0, 3.0, 1.0, 4.0, 2.0]).unwrap();
        assert!(!verify_shape(&overlapping, tol()));
    }
}
