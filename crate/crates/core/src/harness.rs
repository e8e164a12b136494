//! Experiment harness: benchmark corpus, competitive ratios, runtime
//! scaling, CSV results, SVG rendering and instance files.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::{
    adversary_fixed_switch, gen_random_instance, score, KnownLengthAdversary, KnownLengthConfig,
    UnknownLengthAdversary, UnknownLengthConfig,
};
use crate::error::{Error, Result};
use crate::model::{validate_instance, Instance, RawInstance, Trajectory};
use crate::offline::solve_offline;
use crate::online::{HiddenLength, OnlineAlgorithm, OnlineRun};
use crate::sim::{execute_trajectory, SimulationReport};

/// One row of the results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub instance_id: String,
    pub algo: String,
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub r: f64,
    pub online_len: f64,
    pub offline_len: f64,
    pub ratio: f64,
    pub triples: usize,
    pub epochs: usize,
    pub ms: f64,
}

/// Structural properties of a simulated trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureCheck {
    pub covered: bool,
    pub max_visits: usize,
    pub terminal_visits: usize,
    pub order_preserved: bool,
    pub fully_stretched: bool,
}

impl StructureCheck {
    pub fn of(inst: &Instance, rep: &SimulationReport) -> Self {
        StructureCheck {
            covered: rep.covered,
            max_visits: rep.max_visits,
            terminal_visits: rep.terminal_visits,
            order_preserved: rep.order_preserved,
            fully_stretched: rep.fully_stretched(inst),
        }
    }

    pub fn ok(&self) -> bool {
        self.covered
            && self.max_visits <= 3
            && self.terminal_visits <= 2
            && self.order_preserved
            && self.fully_stretched
    }
}

#[derive(Debug, Clone)]
pub struct BenchOutcome {
    pub result: BenchResult,
    pub online: StructureCheck,
    pub offline: StructureCheck,
    pub run: OnlineRun,
}

/// What goes into the benchmark corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusConfig {
    /// Number of random instances with the barrier end uncovered.
    pub random: usize,
    pub seed: u64,
    pub n_min: usize,
    pub n_max: usize,
    /// Include the adversary families.
    pub adversaries: bool,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            random: 10_000,
            seed: 0,
            n_min: 5,
            n_max: 50,
            adversaries: true,
        }
    }
}

/// A corpus entry: a fixed instance, or an adversary that builds the
/// instance while the robot walks.
#[derive(Debug, Clone)]
pub enum CorpusItem {
    Static { id: String, instance: Instance },
    KnownLength { id: String, cfg: KnownLengthConfig },
    UnknownLength { id: String, cfg: UnknownLengthConfig },
}

impl CorpusItem {
    pub fn id(&self) -> &str {
        match self {
            CorpusItem::Static { id, .. }
            | CorpusItem::KnownLength { id, .. }
            | CorpusItem::UnknownLength { id, .. } => id,
        }
    }

    /// Plays `algo` on this item; `None` if the pairing makes no sense
    /// (a strategy that needs the length against an adversary hiding it).
    pub fn play(&self, algo: OnlineAlgorithm) -> Option<Result<OnlineRun>> {
        let tol = crate::model::Tolerance::default();
        match self {
            CorpusItem::Static { instance, .. } => Some(algo.run_on(instance)),
            CorpusItem::KnownLength { cfg, .. } => Some(KnownLengthAdversary::new(*cfg).and_then(|src| {
                if algo.hides_length() {
                    algo.run(HiddenLength(src), tol)
                } else {
                    algo.run(src, tol)
                }
            })),
            CorpusItem::UnknownLength { cfg, .. } => algo
                .works_without_length()
                .then(|| UnknownLengthAdversary::new(*cfg).and_then(|src| algo.run(src, tol))),
        }
    }
}

/// Random instance number `id` of the corpus: `n` in the given range,
/// `r` in `[0.5, 2)`, `L = 2rn * u` with `u` in `[0.5, 1)`, end uncovered.
pub fn corpus_instance(seed: u64, id: u64, n_min: usize, n_max: usize) -> Result<Instance> {
    let s = seed.wrapping_add(id);
    let mut rng = ChaCha8Rng::seed_from_u64(s);
    let n = rng.gen_range(n_min..=n_max);
    let r = rng.gen_range(0.5..2.0);
    let length = 2.0 * r * n as f64 * rng.gen_range(0.5..1.0);
    gen_random_instance(n, length, r, s, true)
}

pub fn build_corpus(config: &CorpusConfig) -> Result<Vec<CorpusItem>> {
    let mut items = Vec::with_capacity(config.random + 32);
    for id in 0..config.random as u64 {
        items.push(CorpusItem::Static {
            id: format!("random-{id:05}"),
            instance: corpus_instance(config.seed, id, config.n_min, config.n_max)?,
        });
    }
    if !config.adversaries {
        return Ok(items);
    }
    for length in [1e3, 1e4, 1e5, 1e6] {
        items.push(CorpusItem::KnownLength {
            id: format!("known-l-{length:.0}"),
            cfg: KnownLengthConfig::for_length(length),
        });
    }
    for stack in [1, 10, 100] {
        let cfg = UnknownLengthConfig {
            stack,
            range: 1.0,
            delta: 0.1,
        };
        items.push(CorpusItem::UnknownLength {
            id: format!("unknown-l-{stack}"),
            cfg,
        });
        // the two ways the adversary can end the barrier, frozen
        for (tag, algo) in [
            ("turned", OnlineAlgorithm::TripleAlways),
            ("straight", OnlineAlgorithm::ALWAYS_DOUBLE),
        ] {
            let run = algo.run(UnknownLengthAdversary::new(cfg)?, Default::default())?;
            items.push(CorpusItem::Static {
                id: format!("unknown-l-{stack}-{tag}"),
                instance: run.instance,
            });
        }
    }
    for (tag, frac) in [("0", 0.0), ("l3", 1.0 / 3.0), ("2l3", 2.0 / 3.0), ("9l10", 0.9), ("l", 1.0)] {
        items.push(CorpusItem::Static {
            id: format!("fixed-switch-{tag}"),
            instance: adversary_fixed_switch(1000.0 * frac, 1000.0, 1.0)?,
        });
    }
    Ok(items)
}

fn bench_one(item: &CorpusItem, algo: OnlineAlgorithm) -> Option<Result<BenchOutcome>> {
    let start = Instant::now();
    let run = item.play(algo)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    Some(run.and_then(|run| {
        let inst = run.instance.clone();
        let rep = execute_trajectory(&inst, &run.trajectory);
        let offline = solve_offline(&inst);
        let off_rep = execute_trajectory(&inst, &offline);
        let scored = score(run)?;
        Ok(BenchOutcome {
            result: BenchResult {
                instance_id: item.id().to_string(),
                algo: algo.name().to_string(),
                n: inst.n(),
                length: inst.length(),
                r: inst.range(),
                online_len: scored.online_length,
                offline_len: scored.offline_length,
                ratio: scored.ratio,
                triples: scored.run.triples,
                epochs: scored.run.epochs.len(),
                ms,
            },
            online: StructureCheck::of(&inst, &rep),
            offline: StructureCheck::of(&inst, &off_rep),
            run: scored.run,
        })
    }))
}

/// Runs every algorithm on every corpus item, in parallel. Results come back
/// ordered by item, then by algorithm, whatever the scheduling.
pub fn bench_competitive(corpus: &[CorpusItem], algos: &[OnlineAlgorithm]) -> Result<Vec<BenchOutcome>> {
    let pairs: Vec<(usize, usize)> = (0..corpus.len())
        .flat_map(|i| (0..algos.len()).map(move |a| (i, a)))
        .collect();
    let mut out: Vec<((usize, usize), BenchOutcome)> = pairs
        .par_iter()
        .filter_map(|&(i, a)| bench_one(&corpus[i], algos[a]).map(|r| r.map(|o| ((i, a), o))))
        .collect::<Result<_>>()?;
    out.sort_by_key(|(k, _)| *k);
    Ok(out.into_iter().map(|(_, o)| o).collect())
}

pub fn write_csv<W: Write>(results: &[BenchResult], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in results {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<BenchResult>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub median_ms: f64,
}

/// Median offline solve time per size over `trials` random instances.
pub fn measure_scaling(sizes: &[usize], trials: usize, seed: u64) -> Result<Vec<ScalingRow>> {
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let mut times = Vec::with_capacity(trials);
        for t in 0..trials.max(1) as u64 {
            let inst = gen_random_instance(n, 1.5 * n as f64, 1.0, seed.wrapping_add(t), true)?;
            let start = Instant::now();
            let traj = solve_offline(&inst);
            times.push(start.elapsed().as_secs_f64() * 1e3);
            std::hint::black_box(traj);
        }
        times.sort_by(f64::total_cmp);
        rows.push(ScalingRow {
            n,
            median_ms: times[times.len() / 2],
        });
    }
    Ok(rows)
}

/// SVG picture: coverage boxes before and after, and the trajectory drawn
/// as one horizontal line per pass with markers at the turns.
pub fn render_svg(inst: &Instance, t: &Trajectory, report: &SimulationReport) -> String {
    const WIDTH: f64 = 960.0;
    const MARGIN: f64 = 40.0;
    const ROW: f64 = 28.0;
    let scale = (WIDTH - 2.0 * MARGIN) / inst.length();
    let px = |x: f64| MARGIN + x * scale;
    let r = inst.range();
    let segs = t.segments();
    let rows = if t.is_empty() { 1 } else { 2 } as f64;
    let height = 2.0 * MARGIN + ROW * (rows + 1.0) + 16.0 * segs.len() as f64;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height:.1}" viewBox="0 0 {WIDTH} {height:.1}">"#
    );
    let _ = writeln!(
        s,
        r#"<style>.initial{{fill:#9ecae1;stroke:#3182bd}}.final{{fill:#a1d99b;stroke:#31a354}}.pass{{stroke:#de2d26;stroke-width:2}}.turn{{fill:#de2d26}}.barrier{{stroke:#000;stroke-width:2}}text{{font:12px sans-serif}}</style>"#
    );
    let mut y = MARGIN;
    let _ = writeln!(
        s,
        r#"<line class="barrier" x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#,
        px(0.0),
        px(inst.length())
    );
    let boxes = |s: &mut String, class: &str, xs: &[f64], y: f64| {
        for &x in xs {
            let lo = (x - r).max(0.0);
            let hi = (x + r).min(inst.length());
            let _ = writeln!(
                s,
                r#"<rect class="{class}" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill-opacity="0.5"/>"#,
                px(lo),
                y,
                (hi - lo) * scale,
                ROW - 8.0
            );
        }
    };
    y += 8.0;
    boxes(&mut s, "initial", inst.positions(), y);
    if t.is_empty() {
        let _ = writeln!(s, r#"<text x="{MARGIN}" y="{:.2}">no action</text>"#, y + ROW + 12.0);
        s.push_str("</svg>\n");
        return s;
    }
    y += ROW;
    boxes(&mut s, "final", &report.final_positions, y);
    y += ROW + 8.0;
    for (a, b) in segs {
        let _ = writeln!(
            s,
            r#"<line class="pass" x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#,
            px(a),
            px(b)
        );
        let _ = writeln!(s, r#"<circle class="turn" cx="{:.2}" cy="{y:.2}" r="3"/>"#, px(b));
        y += 16.0;
    }
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{:.2}">length {:.4}</text>"#,
        y + 8.0,
        t.length()
    );
    s.push_str("</svg>\n");
    s
}

/// Trajectory file contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryDoc {
    pub start: f64,
    pub turns: Vec<f64>,
    pub terminal: f64,
    pub length: f64,
}

impl From<&Trajectory> for TrajectoryDoc {
    fn from(t: &Trajectory) -> Self {
        TrajectoryDoc {
            start: t.start,
            turns: t.turns.clone(),
            terminal: t.terminal,
            length: t.length(),
        }
    }
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    let raw: RawInstance = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    validate_instance(raw)
}

pub fn write_instance(path: &Path, inst: &Instance) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(&inst.to_raw())? + "\n")?;
    Ok(())
}

pub fn read_trajectory(path: &Path) -> Result<Trajectory> {
    let doc: TrajectoryDoc = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let t = Trajectory {
        start: doc.start,
        turns: doc.turns,
        terminal: doc.terminal,
    };
    t.validate()?;
    Ok(t)
}

pub fn write_trajectory(path: &Path, t: &Trajectory) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(&TrajectoryDoc::from(t))? + "\n")?;
    Ok(())
}
