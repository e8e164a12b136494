//! Hard instances for the online strategies, and random instances.
//!
//! The known-length and unknown-length adversaries are [`SensorSource`]s:
//! they decide where sensors go while the robot walks, reacting to its left
//! turns, and only ever commit to ground the robot has not yet seen.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{sensors_needed, Instance, Tolerance};
use crate::offline::solve_offline;
use crate::online::{OnlineAlgorithm, OnlineRun, SensorSource};
use crate::sim::execute_trajectory;

/// Result of playing an online strategy against an instance or adversary.
#[derive(Debug, Clone)]
pub struct AdversaryOutcome {
    pub instance: Instance,
    pub run: OnlineRun,
    pub online_length: f64,
    pub offline_length: f64,
    pub ratio: f64,
}

/// Scores a finished run against the offline optimum of its instance.
pub fn score(run: OnlineRun) -> Result<AdversaryOutcome> {
    let instance = run.instance.clone();
    let rep = execute_trajectory(&instance, &run.trajectory);
    if !rep.covered {
        return Err(Error::InvalidTrajectory(
            "online trajectory leaves a gap".into(),
        ));
    }
    let offline_length = solve_offline(&instance).length();
    let ratio = if offline_length > 0.0 {
        rep.length / offline_length
    } else {
        1.0
    };
    Ok(AdversaryOutcome {
        instance,
        run,
        online_length: rep.length,
        offline_length,
        ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnownLengthConfig {
    pub length: f64,
    pub range: f64,
    /// Sensors per stack; each gap is `2r(stack - 1)` wide.
    pub stack: usize,
}

impl KnownLengthConfig {
    /// Range and stack size both about the cube root of the length.
    pub fn for_length(length: f64) -> Self {
        let k = length.cbrt().round().max(1.0);
        KnownLengthConfig {
            length,
            range: k,
            stack: k as usize,
        }
    }
}

/// Gaps followed by just-sufficient stacks for as long as the robot keeps
/// answering them with triples; attached sensors once it stops.
#[derive(Debug, Clone)]
pub struct KnownLengthAdversary {
    cfg: KnownLengthConfig,
    total: usize,
    eps: f64,
    committed: Vec<f64>,
    last_left_turn: f64,
    complete: bool,
}

impl KnownLengthAdversary {
    pub fn new(cfg: KnownLengthConfig) -> Result<Self> {
        let KnownLengthConfig {
            length,
            range,
            stack,
        } = cfg;
        if !(range > 0.0 && range.is_finite()) {
            return Err(Error::NonPositiveRange(range));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::NonPositiveLength(length));
        }
        let tol = Tolerance::default();
        let total = sensors_needed(length, range, tol);
        if stack < 2 || total < 2 * stack + 1 {
            return Err(Error::DegenerateLength(format!(
                "L = {length} with r = {range} leaves room for fewer than two stacks of {stack}"
            )));
        }
        Ok(KnownLengthAdversary {
            cfg,
            total,
            eps: tol.eps(),
            committed: Vec::new(),
            last_left_turn: f64::NEG_INFINITY,
            complete: false,
        })
    }

    fn place_last(&mut self) {
        let KnownLengthConfig { length, range, .. } = self.cfg;
        let last = self.committed.last().copied().unwrap_or(0.0);
        self.committed.push((length - 1.5 * range).max(last));
        self.complete = true;
    }

    fn next_unit(&mut self) {
        let r = self.cfg.range;
        let k = self.cfg.stack;
        let s = self.committed.len();
        let edge = 2.0 * r * s as f64;
        let stacking = match self.committed.last() {
            None => true,
            Some(&p) => self.last_left_turn >= p - self.eps,
        };
        let room = self.total - 1 - s;
        if room == 0 {
            self.place_last();
        } else if stacking {
            // the last stack shrinks to what the barrier still needs
            let m = room.min(k);
            let at = edge + (2 * m - 1) as f64 * r;
            self.committed.extend(std::iter::repeat_n(at, m));
        } else {
            self.committed.push(edge + r);
        }
    }
}

impl SensorSource for KnownLengthAdversary {
    fn range(&self) -> f64 {
        self.cfg.range
    }

    fn disclosed_length(&self) -> Option<f64> {
        Some(self.cfg.length)
    }

    fn next_group(&mut self, after: f64, upto: f64) -> Option<Vec<f64>> {
        while !self.complete && self.committed.last().is_none_or(|&p| p <= after) {
            self.next_unit();
        }
        let i = self.committed.partition_point(|&p| p <= after);
        let first = *self.committed.get(i)?;
        if first > upto {
            return None;
        }
        let end = i + self.committed[i..].partition_point(|&p| p <= first + self.eps);
        Some(self.committed[i..end].to_vec())
    }

    fn sight_point(&self) -> f64 {
        self.cfg.length - self.cfg.range
    }

    fn reveal_end(&mut self) -> f64 {
        self.cfg.length
    }

    fn on_left_turn(&mut self, at: f64, _frontier: f64) {
        self.last_left_turn = self.last_left_turn.max(at);
    }

    fn materialize(&mut self) -> Result<Instance> {
        while !self.complete {
            self.next_unit();
        }
        Instance::new(self.cfg.length, self.cfg.range, self.committed.clone())
    }
}

/// Plays `algo` against the known-length adversary.
pub fn adversary_known_length(cfg: KnownLengthConfig, algo: OnlineAlgorithm) -> Result<AdversaryOutcome> {
    let source = KnownLengthAdversary::new(cfg)?;
    let tol = Tolerance::default();
    let run = if algo.hides_length() {
        algo.run(crate::online::HiddenLength(source), tol)?
    } else {
        algo.run(source, tol)?
    };
    score(run)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnknownLengthConfig {
    /// Number of sensors in the first stack.
    pub stack: usize,
    pub range: f64,
    /// Slack between the robot's turn and the barrier end.
    pub delta: f64,
}

impl UnknownLengthConfig {
    pub fn new(stack: usize, range: f64) -> Self {
        UnknownLengthConfig {
            stack,
            range,
            delta: range / 10.0,
        }
    }
}

/// A stack of `i` sensors at `x = 2ir` followed by sensors `2r` apart. The
/// barrier ends just past the robot's first left turn, or at `6x` if the
/// robot never turns.
#[derive(Debug, Clone)]
pub struct UnknownLengthAdversary {
    cfg: UnknownLengthConfig,
    stack_at: f64,
    eps: f64,
    planned: Vec<f64>,
    length: Option<f64>,
}

impl UnknownLengthAdversary {
    pub fn new(cfg: UnknownLengthConfig) -> Result<Self> {
        let UnknownLengthConfig {
            stack,
            range: r,
            delta,
        } = cfg;
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::NonPositiveRange(r));
        }
        if stack == 0 || !(delta > 0.0 && delta < r) {
            return Err(Error::DegenerateLength(format!(
                "need a nonempty stack and 0 < delta < r, got {stack} and {delta}"
            )));
        }
        let x = 2.0 * stack as f64 * r;
        let mut planned = vec![x; stack];
        let mut p = x + 2.0 * r;
        while p < 6.0 * x - 2.0 * r {
            planned.push(p);
            p += 2.0 * r;
        }
        let last = *planned.last().expect("nonempty");
        while planned.len() < 6 * stack {
            planned.push(last);
        }
        Ok(UnknownLengthAdversary {
            cfg,
            stack_at: x,
            eps: Tolerance::default().eps(),
            planned,
            length: None,
        })
    }
}

impl SensorSource for UnknownLengthAdversary {
    fn range(&self) -> f64 {
        self.cfg.range
    }

    fn disclosed_length(&self) -> Option<f64> {
        None
    }

    fn next_group(&mut self, after: f64, upto: f64) -> Option<Vec<f64>> {
        let i = self.planned.partition_point(|&p| p <= after);
        let first = *self.planned.get(i)?;
        if first > upto {
            return None;
        }
        let end = i + self.planned[i..].partition_point(|&p| p <= first + self.eps);
        Some(self.planned[i..end].to_vec())
    }

    fn sight_point(&self) -> f64 {
        match self.length {
            Some(l) => l - self.cfg.range,
            None => 6.0 * self.stack_at - self.cfg.range,
        }
    }

    fn reveal_end(&mut self) -> f64 {
        *self.length.get_or_insert(6.0 * self.stack_at)
    }

    fn on_left_turn(&mut self, at: f64, frontier: f64) {
        if self.length.is_some() || at < self.stack_at - self.eps {
            return;
        }
        let r = self.cfg.range;
        let delta = self.cfg.delta;
        let l = frontier + r + delta;
        self.planned.retain(|&p| p <= frontier);
        let needed = sensors_needed(l, r, Tolerance(self.eps));
        while self.planned.len() < needed {
            self.planned.push(frontier + delta / 2.0);
        }
        self.length = Some(l);
    }

    fn materialize(&mut self) -> Result<Instance> {
        let l = self.reveal_end();
        Instance::new(l, self.cfg.range, self.planned.clone())
    }
}

/// Plays `algo` against the unknown-length adversary. Only strategies that
/// work without the length can face it.
pub fn adversary_unknown_length(cfg: UnknownLengthConfig, algo: OnlineAlgorithm) -> Result<AdversaryOutcome> {
    let source = UnknownLengthAdversary::new(cfg)?;
    score(algo.run(source, Tolerance::default())?)
}

/// Static instance defeating a strategy that stops doing triples at `z`.
///
/// For `z <= 2L/3` the only interior gap sits just past `z`; otherwise a
/// stack at `z` invites one last triple and a gap follows right after it.
pub fn adversary_fixed_switch(z: f64, length: f64, r: f64) -> Result<Instance> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::NonPositiveRange(r));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::NonPositiveLength(length));
    }
    if !(0.0..=length).contains(&z) {
        return Err(Error::DegenerateLength(format!("switch point {z} outside [0, {length}]")));
    }
    let tol = Tolerance::default();
    let total = sensors_needed(length, r, tol);
    if total < 4 {
        return Err(Error::DegenerateLength(format!("L = {length} too short for r = {r}")));
    }
    let mut xs = Vec::with_capacity(total);
    let k;
    if z <= 2.0 * length / 3.0 + tol.eps() {
        k = (((z + r) / (2.0 * r)).floor() as usize).min(total - 3);
        xs.extend((1..=k).map(|i| (2 * i - 1) as f64 * r));
    } else {
        k = ((z / (2.0 * r)).ceil() as usize).min(total);
        let at = z.min(length - 1.5 * r);
        xs.extend(std::iter::repeat_n(at, k));
    }
    let probe = 2.0 * k as f64 * r + 1.5 * r;
    if total - xs.len() >= 3 && probe <= length - 1.5 * r {
        xs.push(probe);
        // attached from k + 2 on, the last one doubled to leave the end open
        for i in k + 2..total {
            xs.push((2 * i - 1) as f64 * r);
        }
        let last = *xs.last().expect("nonempty");
        xs.push(last);
    } else {
        let last = *xs.last().unwrap_or(&(length - 1.5 * r));
        xs.resize(total, last);
    }
    Instance::new(length, r, xs)
}

/// Uniformly random positions; with `require_end_gap` every sensor stays
/// clear of the last `r` of the barrier so that `L` is uncovered.
pub fn gen_random_instance(
    n: usize,
    length: f64,
    r: f64,
    seed: u64,
    require_end_gap: bool,
) -> Result<Instance> {
    if n == 0 {
        return Err(Error::NoSensors);
    }
    if 2.0 * r * (n as f64) < length {
        return Err(Error::InfeasibleCoverage {
            total: 2.0 * r * n as f64,
            length,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hi = if require_end_gap {
        (length - r) * (1.0 - 1e-6)
    } else {
        length
    };
    if hi <= 0.0 {
        return Err(Error::DegenerateLength(format!(
            "no room for an end gap with L = {length}, r = {r}"
        )));
    }
    let xs = (0..n).map(|_| rng.gen_range(0.0..hi)).collect();
    Instance::new(length, r, xs)
}

/// Random instance on a quarter-unit grid with `r = 0.5`, which hits exact
/// ties between balances, collocations and attached positions.
pub fn gen_grid_instance(n: usize, seed: u64, require_end_gap: bool) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = 0.5;
    let length = rng.gen_range(1..=n) as f64;
    let top = if require_end_gap {
        ((length - r) * 4.0) as u32 - 1
    } else {
        (length * 4.0) as u32
    };
    let xs = (0..n)
        .map(|_| rng.gen_range(0..=top) as f64 / 4.0)
        .collect();
    Instance::new(length, r, xs)
}
