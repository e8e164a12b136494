//! Online strategies: the robot discovers sensors only where it has been.
//!
//! All three strategies share the same building blocks. A surplus walk
//! places sensors with nonnegative balance on their attached positions
//! until a gap opens; a deficit walk collects deficit sensors until it finds
//! a potential left turn. At that point a strategy either performs a triple
//! back to the gap or finishes with a single final double.

mod env;

pub use env::{HiddenLength, OnlineEnvironment, SensorSource, StaticSource};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{attached_position, balance_of, sensors_needed, Instance, Tolerance, Trajectory};

/// Recursion guard of the adaptive strategy: an epoch closes once the
/// trajectory spent on it is at most this multiple of its length.
pub const EPOCH_RATIO_LIMIT: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WalkKind {
    Surplus,
    Deficit,
}

/// Control accumulator of the adaptive strategy across one walk, with
/// positions relative to the epoch origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlSpan {
    pub control_start: f64,
    pub control_end: f64,
    pub position_start: f64,
    pub position_end: f64,
}

/// One surplus or deficit walk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub kind: WalkKind,
    pub start: f64,
    pub end: f64,
    pub odometer_start: f64,
    pub odometer_end: f64,
    pub control: Option<ControlSpan>,
}

impl WalkRecord {
    /// Change of (distance walked - position) across the walk.
    pub fn odometer_drift(&self) -> f64 {
        (self.odometer_end - self.end) - (self.odometer_start - self.start)
    }

    /// Change of (control - epoch-relative position) across the walk.
    pub fn control_drift(&self) -> Option<f64> {
        self.control.map(|c| {
            (c.control_end - c.position_end) - (c.control_start - c.position_start)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub origin: f64,
    /// Gap start where the next epoch opened; `None` for the last epoch.
    pub closed_at: Option<f64>,
    /// Distance walked by the robot during the epoch.
    pub walked: f64,
    /// Control accumulator when the epoch closed (NaN for the last epoch).
    pub control: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnlineRun {
    pub trajectory: Trajectory,
    /// The instance the robot ended up facing.
    pub instance: Instance,
    pub triples: usize,
    pub ended_with_double: bool,
    pub epochs: Vec<EpochRecord>,
    pub walks: Vec<WalkRecord>,
    /// Sensor positions the robot saw, in order.
    pub revealed: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurplusOutcome {
    /// A gap starts at `x - r`.
    Gap { x: f64 },
    /// The barrier is covered up to its end.
    Done,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeficitOutcome {
    /// Potential left turn at sensor `a`, located at `y`.
    Turn { a: usize, y: f64 },
    EndOfBarrier,
}

/// Robot walking an [`OnlineEnvironment`], keeping track of the prefix of
/// sensors already settled on attached positions.
pub struct Robot<S> {
    env: OnlineEnvironment<S>,
    placed: usize,
    triples: usize,
    ended_with_double: bool,
    walks: Vec<WalkRecord>,
}

impl<S: SensorSource> Robot<S> {
    pub fn new(source: S, tol: Tolerance) -> Self {
        Robot {
            env: OnlineEnvironment::new(source, tol),
            placed: 0,
            triples: 0,
            ended_with_double: false,
            walks: Vec::new(),
        }
    }

    pub fn env(&self) -> &OnlineEnvironment<S> {
        &self.env
    }

    /// Number of sensors settled so far.
    pub fn placed(&self) -> usize {
        self.placed
    }

    fn r(&self) -> f64 {
        self.env.range()
    }

    fn eps(&self) -> f64 {
        self.env.tol().eps()
    }

    fn target(&self, j: usize) -> f64 {
        match self.env.length() {
            Some(l) => attached_position(l, self.r(), j),
            None => (2 * j - 1) as f64 * self.r(),
        }
    }

    fn balance(&self, j: usize) -> f64 {
        balance_of(self.r(), j, self.env.sensor(j).expect("revealed sensor"))
    }

    fn covered_to_end(&self) -> bool {
        self.env
            .length()
            .is_some_and(|l| 2.0 * self.r() * self.placed as f64 >= l - self.eps())
    }

    /// Whether the robot has come within `r` of a known barrier end.
    pub fn end_in_sight(&self) -> bool {
        self.env
            .length()
            .is_some_and(|l| self.env.frontier() >= l - self.r() - self.eps())
    }

    /// A left turn at `y` with the end within `r`: the double is never
    /// longer than a triple from here.
    fn turn_reaches_end(&self, y: f64) -> bool {
        self.env
            .length()
            .is_some_and(|l| y >= l - self.r() - self.eps())
    }

    fn record(&mut self, kind: WalkKind, start: (f64, f64)) {
        self.walks.push(WalkRecord {
            kind,
            start: start.0,
            end: self.env.position(),
            odometer_start: start.1,
            odometer_end: self.env.odometer(),
            control: None,
        });
    }

    fn annotate_last_walk(&mut self, span: ControlSpan) {
        if let Some(w) = self.walks.last_mut() {
            w.control = Some(span);
        }
    }

    /// Places sensors with nonnegative balance, in index order, until a gap
    /// opens or the barrier is covered.
    pub fn walk_in_surplus(&mut self) -> SurplusOutcome {
        let start = (self.env.position(), self.env.odometer());
        let out = self.surplus_inner();
        self.record(WalkKind::Surplus, start);
        out
    }

    fn surplus_inner(&mut self) -> SurplusOutcome {
        let eps = self.eps();
        loop {
            if self.covered_to_end() {
                return SurplusOutcome::Done;
            }
            let j = self.placed + 1;
            let known = self.env.length().is_some();
            let goal = self.target(j);
            // a sensor in surplus sits at or before its uncapped attached position
            let found = self.env.advance_until((2 * j - 1) as f64 * self.r(), Some(j));
            if self.env.length().is_some() != known {
                // end sighted on the way: the target may have moved
                continue;
            }
            if !found || self.balance(j) < -eps {
                self.env.move_to(goal.max(self.env.position()));
                return SurplusOutcome::Gap { x: goal };
            }
            if let Some(s) = self.env.sight_ahead().filter(|&s| s < goal) {
                // look at the end before committing to a target that may lie past it
                self.env.move_to(s.max(self.env.position()));
                continue;
            }
            let x = self.env.sensor(j).expect("revealed");
            if x <= goal + eps {
                self.env.move_to(goal.max(self.env.position()));
            }
            // otherwise the sensor already covers the end where it stands
            self.placed = j;
        }
    }

    /// Collects deficit sensors until a potential left turn.
    pub fn walk_in_deficit(&mut self) -> DeficitOutcome {
        let start = (self.env.position(), self.env.odometer());
        let out = self.deficit_inner();
        self.record(WalkKind::Deficit, start);
        out
    }

    fn deficit_inner(&mut self) -> DeficitOutcome {
        let eps = self.eps();
        let two_r = 2.0 * self.r();
        let mut j = self.placed + 1;
        loop {
            if !self.env.advance_until(f64::INFINITY, Some(j)) {
                return DeficitOutcome::EndOfBarrier;
            }
            let x = self.env.sensor(j).expect("revealed");
            self.env.move_to(x.max(self.env.position()));
            let c = self.balance(j);
            if c >= -eps {
                if j == self.placed + 1 {
                    // nothing to carry; cannot follow a surplus walk's gap
                    debug_assert!(false, "deficit walk started on a surplus sensor");
                    return DeficitOutcome::EndOfBarrier;
                }
                let y = self.env.sensor(j - 1).expect("revealed");
                return DeficitOutcome::Turn { a: j - 1, y };
            }
            if c > -two_r + eps {
                return DeficitOutcome::Turn { a: j, y: x };
            }
            let collocated = self
                .env
                .sensor(j + 1)
                .is_some_and(|next| (next - x).abs() <= eps);
            if (c + two_r).abs() <= eps && collocated {
                return DeficitOutcome::Turn { a: j, y: x };
            }
            j += 1;
        }
    }

    /// Back to the attached position of the first unsettled sensor and
    /// forward again, settling sensors up to `a`.
    pub fn triple(&mut self, a: usize) {
        let y = self.env.position();
        let back = self.target(self.placed + 1);
        self.env.move_to(back);
        self.env.move_to(y);
        self.placed = a;
        self.triples += 1;
    }

    /// Final double: sweep right far enough to collect every sensor still
    /// needed, then left to the leftmost attached position still missing.
    pub fn final_double(&mut self) -> Result<()> {
        let r = self.r();
        let eps = self.eps();
        if self.env.length().is_none() {
            self.env.advance_until(f64::INFINITY, None);
        }
        let l = self.env.length().ok_or(Error::UnknownLength)?;
        let q = sensors_needed(l, r, self.env.tol());
        self.env.move_to((l - r).max(self.env.position()));
        if q > self.placed {
            if !self.env.advance_until(f64::INFINITY, Some(q)) {
                return Err(Error::EndOfBarrier(self.env.position()));
            }
            let xq = self.env.sensor(q).expect("revealed");
            self.env.move_to(xq.max(self.env.position()));
            let first_deficit = (self.placed + 1..=q)
                .find(|&j| self.env.sensor(j).expect("revealed") > self.target(j) + eps);
            if let Some(j) = first_deficit {
                self.env.move_to(self.target(j));
            }
            self.placed = q;
        }
        self.ended_with_double = true;
        Ok(())
    }

    fn finish(mut self, epochs: Vec<EpochRecord>) -> Result<OnlineRun> {
        let instance = self.env.materialize()?;
        Ok(OnlineRun {
            trajectory: self.env.trajectory(),
            instance,
            triples: self.triples,
            ended_with_double: self.ended_with_double,
            epochs,
            walks: self.walks,
            revealed: self.env.revealed().to_vec(),
        })
    }
}

/// Adaptive strategy for a barrier of known length: performs triples while
/// their extra cost stays affordable, restarting its bookkeeping whenever
/// the trajectory spent so far is at most 2.5 times the distance covered.
pub fn adaptive_online<S: SensorSource>(source: S, tol: Tolerance) -> Result<OnlineRun> {
    let mut robot = Robot::new(source, tol);
    let length = robot.env.length().ok_or(Error::UnknownLength)?;
    let r = robot.r();
    let eps = tol.eps();
    let mut epochs = Vec::new();

    let mut step = robot.walk_in_surplus();
    let mut last_epoch = None;
    'epochs: while let SurplusOutcome::Gap { x: first } = step {
        let origin = first - r;
        let walked_from = robot.env.odometer();
        let mut x = first - origin;
        let mut control = 0.0;
        last_epoch = Some((origin, walked_from));
        loop {
            let b = x;
            let before = control;
            let turn = robot.walk_in_deficit();
            let DeficitOutcome::Turn { a, y } = turn else {
                robot.final_double()?;
                break 'epochs;
            };
            let a_rel = y - origin;
            control += r + 3.0 * (a_rel - b);
            // the deficit walk's share excludes the two extra passes of the triple
            robot.annotate_last_walk(ControlSpan {
                control_start: before,
                control_end: control - 2.0 * (a_rel - b),
                position_start: b - r,
                position_end: a_rel,
            });
            if control - a_rel > length - origin + eps || robot.turn_reaches_end(y) {
                robot.final_double()?;
                break 'epochs;
            }
            robot.triple(a);
            let before = control;
            step = robot.walk_in_surplus();
            let SurplusOutcome::Gap { x: next } = step else {
                break 'epochs;
            };
            x = next - origin;
            control += x - r - a_rel;
            robot.annotate_last_walk(ControlSpan {
                control_start: before,
                control_end: control,
                position_start: a_rel,
                position_end: x - r,
            });
            if control / (x - r) <= EPOCH_RATIO_LIMIT + eps {
                epochs.push(EpochRecord {
                    origin,
                    closed_at: Some(next - r),
                    walked: robot.env.odometer() - walked_from,
                    control,
                });
                continue 'epochs;
            }
        }
    }
    if let Some((origin, walked_from)) = last_epoch {
        epochs.push(EpochRecord {
            origin,
            closed_at: None,
            walked: robot.env.odometer() - walked_from,
            control: f64::NAN,
        });
    }
    robot.finish(epochs)
}

/// Covers every gap with a triple, finishing with a double only when the
/// potential left turn already has the barrier end in sight. Works without
/// knowing the barrier length.
pub fn triple_always<S: SensorSource>(source: S, tol: Tolerance) -> Result<OnlineRun> {
    let mut robot = Robot::new(source, tol);
    while let SurplusOutcome::Gap { .. } = robot.walk_in_surplus() {
        match robot.walk_in_deficit() {
            DeficitOutcome::Turn { a, .. } if !robot.end_in_sight() => robot.triple(a),
            _ => {
                robot.final_double()?;
                break;
            }
        }
    }
    robot.finish(Vec::new())
}

/// Triples at potential left turns up to `switch_point`, final double after.
/// With `switch_point < r` this is the strategy that never performs a triple.
pub fn fixed_switch<S: SensorSource>(source: S, switch_point: f64, tol: Tolerance) -> Result<OnlineRun> {
    let mut robot = Robot::new(source, tol);
    while let SurplusOutcome::Gap { .. } = robot.walk_in_surplus() {
        match robot.walk_in_deficit() {
            DeficitOutcome::Turn { a, y } if y <= switch_point + tol.eps() && !robot.turn_reaches_end(y) => {
                robot.triple(a)
            }
            _ => {
                robot.final_double()?;
                break;
            }
        }
    }
    robot.finish(Vec::new())
}

/// Default switching point: two thirds of the barrier.
pub fn default_switch_point(length: f64) -> f64 {
    2.0 * length / 3.0
}

/// Selects an online strategy by name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OnlineAlgorithm {
    Adaptive,
    TripleAlways,
    /// Switching point; `None` means two thirds of the barrier.
    FixedSwitch(Option<f64>),
}

impl OnlineAlgorithm {
    pub const ALL: [OnlineAlgorithm; 3] = [
        OnlineAlgorithm::Adaptive,
        OnlineAlgorithm::TripleAlways,
        OnlineAlgorithm::FixedSwitch(None),
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OnlineAlgorithm::Adaptive => "adaptive",
            OnlineAlgorithm::TripleAlways => "triple-always",
            OnlineAlgorithm::FixedSwitch(Some(z)) if *z < 0.0 => "always-double",
            OnlineAlgorithm::FixedSwitch(_) => "fixed-switch",
        }
    }

    /// Whether the strategy is meant to run without knowing the length.
    pub fn hides_length(&self) -> bool {
        matches!(self, OnlineAlgorithm::TripleAlways)
    }

    /// Whether the strategy can run at all without knowing the length.
    pub fn works_without_length(&self) -> bool {
        !matches!(
            self,
            OnlineAlgorithm::Adaptive | OnlineAlgorithm::FixedSwitch(None)
        )
    }

    /// Strawman that never performs a triple.
    pub const ALWAYS_DOUBLE: OnlineAlgorithm = OnlineAlgorithm::FixedSwitch(Some(-1.0));

    pub fn run<S: SensorSource>(&self, source: S, tol: Tolerance) -> Result<OnlineRun> {
        match *self {
            OnlineAlgorithm::Adaptive => adaptive_online(source, tol),
            OnlineAlgorithm::TripleAlways => triple_always(source, tol),
            OnlineAlgorithm::FixedSwitch(Some(z)) => fixed_switch(source, z, tol),
            OnlineAlgorithm::FixedSwitch(None) => {
                let l = source.disclosed_length().ok_or(Error::UnknownLength)?;
                fixed_switch(source, default_switch_point(l), tol)
            }
        }
    }

    /// Runs on a fixed instance, hiding the length for strategies that do
    /// not need it.
    pub fn run_on(&self, inst: &Instance) -> Result<OnlineRun> {
        let tol = inst.tol();
        if self.hides_length() {
            self.run(StaticSource::hidden(inst.clone()), tol)
        } else {
            self.run(StaticSource::new(inst.clone()), tol)
        }
    }
}

impl std::str::FromStr for OnlineAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adaptive" => Ok(OnlineAlgorithm::Adaptive),
            "triple-always" => Ok(OnlineAlgorithm::TripleAlways),
            "fixed-switch" => Ok(OnlineAlgorithm::FixedSwitch(None)),
            "always-double" => Ok(OnlineAlgorithm::ALWAYS_DOUBLE),
            other => Err(Error::Parse(format!("unknown online algorithm {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::offline::solve_offline;
    use crate::sim::execute_trajectory;

    fn eight_sensors() -> Instance {
        Instance::new(8.0, 0.5, vec![0.3, 2.6, 2.7, 3.6, 4.3, 5.2, 7.3, 7.3]).unwrap()
    }
    fn tiny() -> Instance {
        Instance::new(2.0, 0.5, vec![2.0, 2.0]).unwrap()
    }
    fn tri() -> Instance {
        Instance::new(4.0, 0.5, vec![1.3, 1.3, 1.3, 3.5]).unwrap()
    }

    fn length_of(run: &OnlineRun) -> f64 {
        let rep = execute_trajectory(&run.instance, &run.trajectory);
        assert!(rep.covered, "{:?}", run.trajectory.points());
        rep.length
    }

    #[test]
    fn surplus_then_deficit_on_eight_sensors() {
        let mut robot = Robot::new(StaticSource::new(eight_sensors()), Tolerance::default());
        assert_eq!(robot.walk_in_surplus(), SurplusOutcome::Gap { x: 1.5 });
        assert_eq!(robot.placed(), 1);
        assert_eq!(robot.walk_in_deficit(), DeficitOutcome::Turn { a: 3, y: 2.7 });
    }

    #[test]
    fn deficit_on_tiny() {
        let mut robot = Robot::new(StaticSource::new(tiny()), Tolerance::default());
        assert_eq!(robot.walk_in_surplus(), SurplusOutcome::Gap { x: 0.5 });
        assert_eq!(robot.walk_in_deficit(), DeficitOutcome::Turn { a: 2, y: 2.0 });
    }

    #[test]
    fn surplus_after_triple_on_tri() {
        let mut robot = Robot::new(StaticSource::new(tri()), Tolerance::default());
        assert_eq!(robot.walk_in_surplus(), SurplusOutcome::Gap { x: 0.5 });
        let DeficitOutcome::Turn { a, y } = robot.walk_in_deficit() else { panic!() };
        assert_eq!((a, y), (1, 1.3));
        robot.triple(a);
        assert_eq!(robot.walk_in_surplus(), SurplusOutcome::Done);
        assert!((robot.env().position() - 3.5).abs() < 1e-12);
    }

    #[test]
    fn adaptive_examples() {
        let run = adaptive_online(StaticSource::new(eight_sensors()), Tolerance::default()).unwrap();
        assert!((length_of(&run) - 11.7).abs() < 1e-9);
        assert_eq!(run.triples, 3);
        let origins: Vec<f64> = run.epochs.iter().map(|e| e.origin).collect();
        assert_eq!(origins.len(), 3);
        for (o, want) in origins.iter().zip([1.0, 3.0, 6.0]) {
            assert!((o - want).abs() < 1e-9, "{origins:?}");
        }

        let run = adaptive_online(StaticSource::new(tiny()), Tolerance::default()).unwrap();
        assert!((length_of(&run) - 3.5).abs() < 1e-9);
        assert!(run.ended_with_double);
    }

    #[test]
    fn triple_always_examples() {
        for (inst, want) in [(tri(), 5.1), (eight_sensors(), 11.7), (tiny(), 3.5)] {
            let run = triple_always(StaticSource::hidden(inst), Tolerance::default()).unwrap();
            assert!((length_of(&run) - want).abs() < 1e-9, "{:?}", run.trajectory.points());
        }
    }

    #[test]
    fn fixed_switch_examples() {
        for (inst, want) in [(tri(), 5.1), (tiny(), 3.5), (eight_sensors(), 11.1)] {
            let run = OnlineAlgorithm::FixedSwitch(None).run_on(&inst).unwrap();
            assert!((length_of(&run) - want).abs() < 1e-9, "{:?}", run.trajectory.points());
        }
        let inst = eight_sensors();
        let run = OnlineAlgorithm::FixedSwitch(None).run_on(&inst).unwrap();
        assert!(length_of(&run) / solve_offline(&inst).length() <= 4.0 / 3.0);
    }

    #[test]
    fn walks_keep_distance_minus_position() {
        let run = adaptive_online(StaticSource::new(eight_sensors()), Tolerance::default()).unwrap();
        assert!(!run.walks.is_empty());
        for w in &run.walks {
            assert!(w.odometer_drift().abs() < 1e-9, "{w:?}");
            if let Some(d) = w.control_drift() {
                assert!(d.abs() < 1e-9, "{w:?}");
            }
        }
    }

    #[test]
    fn hidden_length_is_refused_by_adaptive() {
        let res = adaptive_online(StaticSource::hidden(tiny()), Tolerance::default());
        assert_eq!(res.unwrap_err(), Error::UnknownLength);
    }

    #[test]
    fn covered_barrier_is_walked_straight() {
        let inst = Instance::new(2.0, 0.5, vec![0.5, 1.5]).unwrap();
        for algo in OnlineAlgorithm::ALL {
            let run = algo.run_on(&inst).unwrap();
            assert_eq!(run.triples, 0);
            assert!(execute_trajectory(&inst, &run.trajectory).covered);
        }
    }
}
