//! Problem data model: sensors on a barrier segment, coverage gaps,
//! coverage balances and robot trajectories.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance for sign and equality tests.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Absolute comparison tolerance.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Tolerance(pub f64);

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(DEFAULT_EPSILON)
    }
}

impl Tolerance {
    #[inline]
    pub fn eps(self) -> f64 {
        self.0
    }

    /// `v < -eps`; values within tolerance of zero count as nonnegative.
    #[inline]
    pub fn is_negative(self, v: f64) -> bool {
        v < -self.0
    }

    #[inline]
    pub fn eq(self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.0
    }
}

/// Unvalidated instance, the shape of the on-disk instance document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInstance {
    pub length: f64,
    pub range: f64,
    pub positions: Vec<f64>,
}

/// A validated problem instance: `n` sensors of range `r` on `[0, L]`.
///
/// Positions are sorted, lie in `[0, L]` and satisfy `2rn >= L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    length: f64,
    range: f64,
    positions: Vec<f64>,
    tol: Tolerance,
}

impl Instance {
    pub fn new(length: f64, range: f64, positions: Vec<f64>) -> Result<Self> {
        validate_instance(RawInstance {
            length,
            range,
            positions,
        })
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    #[inline]
    pub fn range(&self) -> f64 {
        self.range
    }

    #[inline]
    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.positions.len()
    }

    #[inline]
    pub fn tol(&self) -> Tolerance {
        self.tol
    }

    /// Position of sensor `i` (1-based).
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.positions[i - 1]
    }

    /// Coverage balance of sensor `i` (1-based).
    #[inline]
    pub fn balance(&self, i: usize) -> f64 {
        balance_of(self.range, i, self.x(i))
    }

    /// Attached position of sensor `i` (1-based): `(2i - 1) r`, clamped to
    /// `L - r` so the last useful sensor never lands past the barrier.
    #[inline]
    pub fn target(&self, i: usize) -> f64 {
        attached_position(self.length, self.range, i)
    }

    /// True when the point `L` is not covered.
    pub fn has_end_gap(&self) -> bool {
        compute_gaps(self)
            .last()
            .is_some_and(|g| self.tol.eq(g.hi, self.length))
    }

    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            length: self.length,
            range: self.range,
            positions: self.positions.clone(),
        }
    }

    /// Same sensors and range, with sensors replaced (re-validated).
    pub fn with_positions(&self, positions: Vec<f64>) -> Result<Self> {
        Ok(Instance::new(self.length, self.range, positions)?.with_tolerance(self.tol))
    }
}

#[inline]
pub(crate) fn balance_of(range: f64, i: usize, x: f64) -> f64 {
    (2.0 * range * i as f64 - range) - x
}

#[inline]
pub(crate) fn attached_position(length: f64, range: f64, i: usize) -> f64 {
    let cap = (length - range).max(0.0);
    ((2 * i - 1) as f64 * range).min(cap)
}

/// Number of attached sensors needed to cover `[0, L]`.
pub fn sensors_needed(length: f64, range: f64, tol: Tolerance) -> usize {
    let q = (length - tol.eps()) / (2.0 * range);
    (q.ceil() as usize).max(1)
}

/// Validates a candidate instance, sorting positions if needed.
pub fn validate_instance(raw: RawInstance) -> Result<Instance> {
    let RawInstance {
        length,
        range,
        mut positions,
    } = raw;
    if !(range > 0.0 && range.is_finite()) {
        return Err(Error::NonPositiveRange(range));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::NonPositiveLength(length));
    }
    if positions.is_empty() {
        return Err(Error::NoSensors);
    }
    for (i, &p) in positions.iter().enumerate() {
        if !(p.is_finite() && (0.0..=length).contains(&p)) {
            return Err(Error::PositionOutOfRange {
                index: i + 1,
                position: p,
                length,
            });
        }
    }
    let total = 2.0 * range * positions.len() as f64;
    if total < length {
        return Err(Error::InfeasibleCoverage { total, length });
    }
    positions.sort_by(f64::total_cmp);
    Ok(Instance {
        length,
        range,
        positions,
        tol: Tolerance::default(),
    })
}

/// A maximal closed uncovered subinterval of the barrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub lo: f64,
    pub hi: f64,
}

impl Gap {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Uncovered stretches of `[0, L]` for the given sensor placement, left to right.
pub fn compute_gaps(inst: &Instance) -> Vec<Gap> {
    gaps_of(inst.length, inst.range, &inst.positions, inst.tol)
}

/// Gap sweep over sorted `positions`.
pub fn gaps_of(length: f64, range: f64, positions: &[f64], tol: Tolerance) -> Vec<Gap> {
    let eps = tol.eps();
    let mut gaps = Vec::new();
    let mut covered = 0.0_f64;
    for &x in positions {
        let lo = (x - range).min(length);
        if lo - covered > eps {
            gaps.push(Gap { lo: covered, hi: lo });
        }
        covered = covered.max(x + range);
        if covered >= length {
            break;
        }
    }
    if length - covered > eps {
        gaps.push(Gap {
            lo: covered,
            hi: length,
        });
    }
    gaps
}

/// Coverage balances `C_1..C_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceTable {
    pub values: Vec<f64>,
}

impl BalanceTable {
    /// Balance of sensor `i` (1-based).
    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn coverage_balances(inst: &Instance) -> BalanceTable {
    BalanceTable {
        values: inst
            .positions
            .iter()
            .enumerate()
            .map(|(k, &x)| balance_of(inst.range, k + 1, x))
            .collect(),
    }
}

/// Robot trajectory `[t_0, t_1, ..., t_m]`: odd-indexed points are left
/// turns, even-indexed ones right turns, `t_m` is the termination point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start: f64,
    pub turns: Vec<f64>,
    pub terminal: f64,
}

impl Trajectory {
    /// The robot never moves.
    pub fn empty(start: f64) -> Self {
        Trajectory {
            start,
            turns: Vec::new(),
            terminal: start,
        }
    }

    pub fn from_points(points: &[f64]) -> Result<Self> {
        match points {
            [] => Err(Error::InvalidTrajectory("no points".into())),
            [p] => Ok(Trajectory::empty(*p)),
            [first, mid @ .., last] => {
                let t = Trajectory {
                    start: *first,
                    turns: mid.to_vec(),
                    terminal: *last,
                };
                t.validate()?;
                Ok(t)
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.turns.is_empty() && self.terminal == self.start
    }

    /// All points `t_0..t_m`; a single point for the empty trajectory.
    pub fn points(&self) -> Vec<f64> {
        let mut pts = Vec::with_capacity(self.turns.len() + 2);
        pts.push(self.start);
        if !self.is_empty() {
            pts.extend_from_slice(&self.turns);
            pts.push(self.terminal);
        }
        pts
    }

    /// Directed legs `(from, to)` in travel order.
    pub fn segments(&self) -> Vec<(f64, f64)> {
        self.points().windows(2).map(|w| (w[0], w[1])).collect()
    }

    pub fn length(&self) -> f64 {
        trajectory_length(self)
    }

    /// Number of left turns (`t_1, t_3, ...`).
    pub fn left_turns(&self) -> usize {
        self.turns.len().div_ceil(2)
    }

    /// Strict alternation check; points inside `[lo, hi]`.
    pub fn validate_within(&self, lo: f64, hi: f64) -> Result<()> {
        self.validate()?;
        if let Some(p) = self.points().into_iter().find(|p| *p < lo || *p > hi) {
            return Err(Error::InvalidTrajectory(format!(
                "point {p} outside [{lo}, {hi}]"
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let pts = self.points();
        if pts.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidTrajectory("non-finite point".into()));
        }
        for (i, w) in pts.windows(2).enumerate() {
            let odd = (i + 1) % 2 == 1;
            let ok = if odd { w[1] > w[0] } else { w[1] < w[0] };
            if !ok {
                return Err(Error::InvalidTrajectory(format!(
                    "t_{} = {} does not alternate with t_{} = {}",
                    i + 1,
                    w[1],
                    i,
                    w[0]
                )));
            }
        }
        Ok(())
    }
}

pub fn trajectory_length(t: &Trajectory) -> f64 {
    t.points().windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Accumulates robot moves into a [`Trajectory`], merging collinear legs
/// and dropping moves shorter than the tolerance.
#[derive(Debug, Clone)]
pub struct TrajectoryBuilder {
    points: Vec<f64>,
    pos: f64,
    odometer: f64,
    eps: f64,
}

impl TrajectoryBuilder {
    pub fn new(start: f64, tol: Tolerance) -> Self {
        TrajectoryBuilder {
            points: vec![start],
            pos: start,
            odometer: 0.0,
            eps: tol.eps(),
        }
    }

    #[inline]
    pub fn position(&self) -> f64 {
        self.pos
    }

    /// Distance travelled so far.
    #[inline]
    pub fn odometer(&self) -> f64 {
        self.odometer
    }

    /// Current heading: `Some(true)` right, `Some(false)` left.
    pub fn heading(&self) -> Option<bool> {
        let n = self.points.len();
        (n >= 2).then(|| self.points[n - 1] > self.points[n - 2])
    }

    /// Moves to `x`. Returns `Some(p)` when the move starts with a turn at `p`.
    pub fn move_to(&mut self, x: f64) -> Option<f64> {
        if (x - self.pos).abs() <= self.eps {
            return None;
        }
        let right = x > self.pos;
        let mut turned = None;
        match self.heading() {
            Some(h) if h == right => {
                *self.points.last_mut().expect("non-empty") = x;
            }
            Some(_) => {
                turned = Some(self.pos);
                self.points.push(x);
            }
            None => self.points.push(x),
        }
        self.odometer += (x - self.pos).abs();
        self.pos = x;
        turned
    }

    pub fn build(&self) -> Trajectory {
        match self.points.as_slice() {
            [p] => Trajectory::empty(*p),
            [first, mid @ .., last] => Trajectory {
                start: *first,
                turns: mid.to_vec(),
                terminal: *last,
            },
            [] => unreachable!("builder always holds the start point"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eight_sensors() -> Instance {
        Instance::new(8.0, 0.5, vec![0.3, 2.6, 2.7, 3.6, 4.3, 5.2, 7.3, 7.3]).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(Instance::new(2.0, 1.0, vec![1.0]).is_ok());
        assert!(matches!(
            Instance::new(10.0, 0.5, vec![1.0]),
            Err(Error::InfeasibleCoverage { .. })
        ));
        assert!(matches!(
            Instance::new(2.0, 0.0, vec![1.0]),
            Err(Error::NonPositiveRange(_))
        ));
        assert!(matches!(
            Instance::new(2.0, 1.0, vec![2.5]),
            Err(Error::PositionOutOfRange { index: 1, .. })
        ));
        let inst = Instance::new(2.0, 0.5, vec![2.0, 0.1]).unwrap();
        assert_eq!(inst.positions(), &[0.1, 2.0]);
    }

    #[test]
    fn gaps_examples() {
        let single = Instance::new(2.0, 1.0, vec![1.0]).unwrap();
        assert!(compute_gaps(&single).is_empty());

        let tiny = Instance::new(2.0, 0.5, vec![2.0, 2.0]).unwrap();
        assert_eq!(compute_gaps(&tiny), vec![Gap { lo: 0.0, hi: 1.5 }]);

        let g = compute_gaps(&eight_sensors());
        let want = [(0.8, 2.1), (5.7, 6.8), (7.8, 8.0)];
        assert_eq!(g.len(), 3);
        for (gap, (lo, hi)) in g.iter().zip(want) {
            assert!((gap.lo - lo).abs() < 1e-9 && (gap.hi - hi).abs() < 1e-9, "{gap:?}");
        }
    }

    #[test]
    fn touching_intervals_are_covered() {
        let inst = Instance::new(2.0, 0.5, vec![0.5, 1.5]).unwrap();
        assert!(compute_gaps(&inst).is_empty());
    }

    #[test]
    fn balances_examples() {
        let b = coverage_balances(&eight_sensors());
        let want = [0.2, -1.1, -0.2, -0.1, 0.2, 0.3, -0.8, 0.2];
        for (v, w) in b.values.iter().zip(want) {
            assert!((v - w).abs() < 1e-9);
        }
        let single = Instance::new(2.0, 1.0, vec![1.0]).unwrap();
        assert_eq!(coverage_balances(&single).values, vec![0.0]);
        let tiny = Instance::new(2.0, 0.5, vec![2.0, 2.0]).unwrap();
        assert_eq!(coverage_balances(&tiny).values, vec![-1.5, -0.5]);
    }

    #[test]
    fn length_examples() {
        assert_eq!(trajectory_length(&Trajectory::empty(0.0)), 0.0);
        let t = Trajectory::from_points(&[0.0, 2.0, 0.5]).unwrap();
        assert!((t.length() - 3.5).abs() < 1e-12);
        let t = Trajectory::from_points(&[0.0, 2.7, 1.5, 3.6, 3.5, 7.5, 6.5]).unwrap();
        assert!((t.length() - 11.1).abs() < 1e-9);
    }

    #[test]
    fn alternation_is_enforced() {
        assert!(Trajectory::from_points(&[0.0, 2.0, 3.0]).is_err());
        assert!(Trajectory::from_points(&[1.0, 0.5]).is_err());
        assert!(Trajectory::from_points(&[0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn builder_merges_and_reports_turns() {
        let mut b = TrajectoryBuilder::new(0.0, Tolerance::default());
        assert_eq!(b.move_to(1.0), None);
        assert_eq!(b.move_to(2.0), None);
        assert_eq!(b.move_to(2.0), None);
        assert_eq!(b.move_to(0.5), Some(2.0));
        assert_eq!(b.move_to(3.0), Some(0.5));
        let t = b.build();
        assert_eq!(t.points(), vec![0.0, 2.0, 0.5, 3.0]);
        assert!((b.odometer() - t.length()).abs() < 1e-12);
    }

    #[test]
    fn attached_position_is_capped() {
        let inst = Instance::new(3.7, 0.5, vec![0.5, 1.5, 2.5, 3.5]).unwrap();
        assert_eq!(inst.target(1), 0.5);
        assert!((inst.target(4) - 3.2).abs() < 1e-12);
    }
}
