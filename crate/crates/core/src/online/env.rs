//! Progressive-revelation environment for online robots.
//!
//! The robot only learns about sensors at points it has physically reached.
//! Sensors come from a [`SensorSource`], which may be a fixed instance or an
//! adversary that decides the layout lazily.

use crate::error::Result;
use crate::model::{Instance, Tolerance, Trajectory, TrajectoryBuilder};

/// Supplier of sensors to an [`OnlineEnvironment`].
///
/// A source must never contradict what it has already returned: a group
/// reported at `p` stays at `p`, and the absence of sensors in a queried
/// interval is final.
pub trait SensorSource {
    fn range(&self) -> f64;

    /// Barrier length, if the robot is told it up front.
    fn disclosed_length(&self) -> Option<f64>;

    /// First group of collocated sensors strictly right of `after` and at
    /// or before `upto`.
    fn next_group(&mut self, after: f64, upto: f64) -> Option<Vec<f64>>;

    /// Point from which the barrier end becomes visible. Only consulted
    /// while the length is hidden.
    fn sight_point(&self) -> f64;

    /// Commits and returns the barrier length once the robot sights the end.
    fn reveal_end(&mut self) -> f64;

    /// Called whenever the robot turns from a rightward to a leftward move.
    fn on_left_turn(&mut self, _at: f64, _frontier: f64) {}

    /// The full instance the robot faced.
    fn materialize(&mut self) -> Result<Instance>;
}

/// A fixed instance, revealed as the robot walks.
#[derive(Debug, Clone)]
pub struct StaticSource {
    inst: Instance,
    hide_length: bool,
    cursor: usize,
}

impl StaticSource {
    pub fn new(inst: Instance) -> Self {
        StaticSource {
            inst,
            hide_length: false,
            cursor: 0,
        }
    }

    /// The robot learns the length only when it comes within `r` of the end.
    pub fn hidden(inst: Instance) -> Self {
        StaticSource {
            hide_length: true,
            ..StaticSource::new(inst)
        }
    }
}

impl SensorSource for StaticSource {
    fn range(&self) -> f64 {
        self.inst.range()
    }

    fn disclosed_length(&self) -> Option<f64> {
        (!self.hide_length).then(|| self.inst.length())
    }

    fn next_group(&mut self, after: f64, upto: f64) -> Option<Vec<f64>> {
        let xs = self.inst.positions();
        while self.cursor < xs.len() && xs[self.cursor] <= after {
            self.cursor += 1;
        }
        let first = *xs.get(self.cursor)?;
        if first > upto {
            return None;
        }
        let eps = self.inst.tol().eps();
        let end = self.cursor + xs[self.cursor..].partition_point(|&x| x <= first + eps);
        let group = xs[self.cursor..end].to_vec();
        self.cursor = end;
        Some(group)
    }

    fn sight_point(&self) -> f64 {
        self.inst.length() - self.inst.range()
    }

    fn reveal_end(&mut self) -> f64 {
        self.inst.length()
    }

    fn materialize(&mut self) -> Result<Instance> {
        Ok(self.inst.clone())
    }
}

/// Wraps a source so that its length stays hidden until sighted.
#[derive(Debug, Clone)]
pub struct HiddenLength<S>(pub S);

impl<S: SensorSource> SensorSource for HiddenLength<S> {
    fn range(&self) -> f64 {
        self.0.range()
    }

    fn disclosed_length(&self) -> Option<f64> {
        None
    }

    fn next_group(&mut self, after: f64, upto: f64) -> Option<Vec<f64>> {
        self.0.next_group(after, upto)
    }

    fn sight_point(&self) -> f64 {
        match self.0.disclosed_length() {
            Some(l) => l - self.0.range(),
            None => self.0.sight_point(),
        }
    }

    fn reveal_end(&mut self) -> f64 {
        match self.0.disclosed_length() {
            Some(l) => l,
            None => self.0.reveal_end(),
        }
    }

    fn on_left_turn(&mut self, at: f64, frontier: f64) {
        self.0.on_left_turn(at, frontier)
    }

    fn materialize(&mut self) -> Result<Instance> {
        self.0.materialize()
    }
}

/// Robot position, revealed sensors and the path walked so far.
pub struct OnlineEnvironment<S> {
    source: S,
    tol: Tolerance,
    length: Option<f64>,
    frontier: f64,
    revealed: Vec<f64>,
    path: TrajectoryBuilder,
}

impl<S: SensorSource> OnlineEnvironment<S> {
    pub fn new(source: S, tol: Tolerance) -> Self {
        let length = source.disclosed_length();
        let mut env = OnlineEnvironment {
            source,
            tol,
            length,
            frontier: f64::NEG_INFINITY,
            revealed: Vec::new(),
            path: TrajectoryBuilder::new(0.0, tol),
        };
        if let Some(group) = env.source.next_group(f64::NEG_INFINITY, tol.eps()) {
            env.revealed.extend(group);
        }
        env.frontier = env.revealed.last().copied().unwrap_or(0.0).max(0.0);
        env.check_sight();
        env
    }

    pub fn range(&self) -> f64 {
        self.source.range()
    }

    pub fn tol(&self) -> Tolerance {
        self.tol
    }

    /// Barrier length, once known.
    pub fn length(&self) -> Option<f64> {
        self.length
    }

    pub fn position(&self) -> f64 {
        self.path.position()
    }

    pub fn odometer(&self) -> f64 {
        self.path.odometer()
    }

    /// Rightmost point seen so far.
    pub fn frontier(&self) -> f64 {
        self.frontier
    }

    /// Number of sensors revealed so far.
    pub fn revealed_count(&self) -> usize {
        self.revealed.len()
    }

    /// Position of sensor `j` (1-based) if already revealed.
    pub fn sensor(&self, j: usize) -> Option<f64> {
        self.revealed.get(j.checked_sub(1)?).copied()
    }

    pub fn revealed(&self) -> &[f64] {
        &self.revealed
    }

    pub fn trajectory(&self) -> Trajectory {
        self.path.build()
    }

    pub fn materialize(&mut self) -> Result<Instance> {
        self.source.materialize()
    }

    /// Point where the barrier end will come into view, while still unknown.
    pub fn sight_ahead(&self) -> Option<f64> {
        self.length.is_none().then(|| self.source.sight_point())
    }

    fn check_sight(&mut self) {
        if self.length.is_none() && self.frontier >= self.source.sight_point() - self.tol.eps() {
            self.length = Some(self.source.reveal_end());
        }
    }

    fn step(&mut self, x: f64) {
        let was_right = self.path.heading() != Some(false);
        if let Some(turn) = self.path.move_to(x) {
            if was_right && x < turn {
                self.source.on_left_turn(turn, self.frontier);
            }
        }
    }

    /// Walks right towards `goal` until sensor `want` (1-based) is revealed.
    /// Without `want` the robot walks all the way. The walk never passes the
    /// barrier end. Returns whether the wanted sensor was found.
    pub fn advance_until(&mut self, goal: f64, want: Option<usize>) -> bool {
        let eps = self.tol.eps();
        loop {
            if want.is_some_and(|j| self.revealed.len() >= j) {
                return true;
            }
            let (bound, sighting) = match self.length {
                Some(l) => (goal.min(l), false),
                None => {
                    let s = self.source.sight_point();
                    if goal >= s {
                        (s, true)
                    } else {
                        (goal, false)
                    }
                }
            };
            if bound <= self.frontier {
                let to = bound.max(self.position());
                self.step(to);
                return want.is_none();
            }
            let frontier = self.frontier;
            self.step(frontier.max(self.position()));
            match self.source.next_group(frontier, bound + eps) {
                Some(group) => {
                    self.step(group[0]);
                    self.frontier = group[group.len() - 1].max(frontier);
                    self.revealed.extend(group);
                    self.check_sight();
                }
                None => {
                    self.step(bound);
                    self.frontier = bound;
                    if sighting {
                        self.length = Some(self.source.reveal_end());
                    } else {
                        return want.is_none();
                    }
                }
            }
        }
    }

    /// Moves to `x`, revealing sensors on the way if `x` is new ground.
    pub fn move_to(&mut self, x: f64) {
        if x > self.frontier {
            self.advance_until(x, None);
        } else {
            self.step(x);
        }
    }
}
