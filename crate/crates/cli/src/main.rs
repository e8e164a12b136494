use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use barrier_core::adversary::{adversary_fixed_switch, gen_random_instance};
use barrier_core::harness::{
    build_corpus, read_instance, read_trajectory, write_csv, write_instance, write_trajectory,
    BenchOutcome, CorpusConfig, TrajectoryDoc,
};
use barrier_core::online::default_switch_point;
use barrier_core::{
    adversary_known_length, adversary_unknown_length, bench_competitive, brute_force_optimal,
    compute_gaps, execute_trajectory, measure_scaling, render_svg, solve_offline, Instance,
    KnownLengthConfig, OnlineAlgorithm, SimulationReport, Tolerance, Trajectory,
    UnknownLengthConfig, DEFAULT_EPSILON,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "barrier", version, about = "Restore barrier coverage on a line with a sensor-carrying robot")]
struct Cli {
    /// Numeric tolerance for comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Base seed for anything random.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Plain,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Random,
    KnownLAdv,
    UnknownLAdv,
    FixedSwitchAdv,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the uncovered intervals of an instance.
    Gaps {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Optimal trajectory when all positions are known.
    SolveOffline {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        emit_trajectory: Option<PathBuf>,
        #[arg(long)]
        emit_svg: Option<PathBuf>,
    },
    /// Run an online strategy that discovers sensors as it walks.
    SolveOnline {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "adaptive")]
        algo: String,
        /// Switch point for fixed-switch (defaults to 2L/3).
        #[arg(long)]
        switch_point: Option<f64>,
        /// Reveal the barrier length only once the robot sees the end.
        #[arg(long)]
        hide_length: bool,
        #[arg(long)]
        emit_trajectory: Option<PathBuf>,
    },
    /// Exhaustive search, for small instances.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = barrier_core::oracle::DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Simulate a trajectory and report coverage and visit counts.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        trajectory: PathBuf,
    },
    /// Write an instance file.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        out: PathBuf,
        /// Sensor count (random).
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// Barrier length (random, known-l-adv, fixed-switch-adv).
        #[arg(long)]
        length: Option<f64>,
        /// Sensor range (random, unknown-l-adv, fixed-switch-adv).
        #[arg(long)]
        range: Option<f64>,
        /// Stack size (unknown-l-adv).
        #[arg(long, default_value_t = 10)]
        stack: usize,
        /// Switch point the fixed-switch adversary targets (defaults to 2L/3).
        #[arg(long)]
        z: Option<f64>,
        /// Robot the adversary plays against.
        #[arg(long)]
        algo: Option<String>,
    },
    /// Competitive ratios over the benchmark corpus.
    Bench {
        /// Number of random instances.
        #[arg(long, default_value_t = 10_000)]
        random: usize,
        #[arg(long)]
        no_adversaries: bool,
        /// Write results CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit with status 2 if a ratio ceiling or structural check fails.
        #[arg(long)]
        assert: bool,
    },
    /// Median offline solve time per size.
    Scale {
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
    /// Draw an instance and a trajectory (offline optimum by default) as SVG.
    Render {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        trajectory: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Worst ratio each strategy is allowed to reach on the corpus.
fn ceiling(algo: &str) -> Option<f64> {
    match algo {
        "adaptive" => Some(1.25),
        "triple-always" => Some(1.5),
        "fixed-switch" => Some(4.0 / 3.0),
        _ => None,
    }
}

fn load(path: &Path, tol: Tolerance) -> anyhow::Result<Instance> {
    let inst = read_instance(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(inst.with_tolerance(tol))
}

fn print_trajectory(t: &Trajectory, format: Format) {
    let doc = TrajectoryDoc::from(t);
    match format {
        Format::Csv => {
            println!("kind,x");
            println!("start,{}", doc.start);
            for x in &doc.turns {
                println!("turn,{x}");
            }
            println!("terminal,{}", doc.terminal);
            println!("length,{}", doc.length);
        }
        Format::Plain => {
            let turns: Vec<String> = doc.turns.iter().map(|x| x.to_string()).collect();
            println!("start: {}", doc.start);
            println!("turns: [{}]", turns.join(", "));
            println!("terminal: {}", doc.terminal);
            println!("length: {}", doc.length);
        }
    }
}

fn print_report(rep: &SimulationReport, inst: &Instance, format: Format) {
    let fields = [
        ("covered", rep.covered.to_string()),
        ("length", rep.length.to_string()),
        ("max_visits", rep.max_visits.to_string()),
        ("terminal_visits", rep.terminal_visits.to_string()),
        ("order_preserved", rep.order_preserved.to_string()),
        ("fully_stretched", rep.fully_stretched(inst).to_string()),
        ("relocated", rep.relocated.iter().filter(|&&m| m).count().to_string()),
    ];
    match format {
        Format::Csv => {
            let (k, v): (Vec<_>, Vec<_>) = fields.into_iter().unzip();
            println!("{}", k.join(","));
            println!("{}", v.join(","));
        }
        Format::Plain => {
            for (k, v) in fields {
                println!("{k}: {v}");
            }
        }
    }
}

fn parse_algo(name: &str, switch_point: Option<f64>) -> anyhow::Result<OnlineAlgorithm> {
    let algo: OnlineAlgorithm = name.parse().map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(match (algo, switch_point) {
        (OnlineAlgorithm::FixedSwitch(_), Some(z)) => OnlineAlgorithm::FixedSwitch(Some(z)),
        (_, Some(_)) => bail!("--switch-point only applies to fixed-switch"),
        (a, None) => a,
    })
}

fn summarize(out: &[BenchOutcome]) -> Vec<(String, usize, f64, String)> {
    let mut rows: Vec<(String, usize, f64, String)> = Vec::new();
    for o in out {
        let r = &o.result;
        match rows.iter_mut().find(|row| row.0 == r.algo) {
            Some(row) => {
                row.1 += 1;
                if r.ratio > row.2 {
                    row.2 = r.ratio;
                    row.3 = r.instance_id.clone();
                }
            }
            None => rows.push((r.algo.clone(), 1, r.ratio, r.instance_id.clone())),
        }
    }
    rows
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let tol = Tolerance(cli.epsilon);
    if !(cli.epsilon.is_finite() && cli.epsilon >= 0.0) {
        bail!("--epsilon must be a nonnegative number");
    }
    match cli.cmd {
        Cmd::Gaps { instance } => {
            let inst = load(&instance, tol)?;
            let gaps = compute_gaps(&inst);
            match cli.format {
                Format::Csv => {
                    println!("start,end");
                    for g in &gaps {
                        println!("{},{}", g.lo, g.hi);
                    }
                }
                Format::Plain => {
                    if gaps.is_empty() {
                        println!("barrier fully covered");
                    }
                    for g in &gaps {
                        println!("[{}, {}]", g.lo, g.hi);
                    }
                }
            }
        }
        Cmd::SolveOffline {
            instance,
            emit_trajectory,
            emit_svg,
        } => {
            let inst = load(&instance, tol)?;
            let t = solve_offline(&inst);
            print_trajectory(&t, cli.format);
            if let Some(p) = emit_trajectory {
                write_trajectory(&p, &t)?;
            }
            if let Some(p) = emit_svg {
                let rep = execute_trajectory(&inst, &t);
                std::fs::write(&p, render_svg(&inst, &t, &rep))?;
            }
        }
        Cmd::SolveOnline {
            instance,
            algo,
            switch_point,
            hide_length,
            emit_trajectory,
        } => {
            let inst = load(&instance, tol)?;
            let algo = parse_algo(&algo, switch_point)?;
            let source = if hide_length || algo.hides_length() {
                barrier_core::online::StaticSource::hidden(inst.clone())
            } else {
                barrier_core::online::StaticSource::new(inst.clone())
            };
            let run = algo.run(source, tol)?;
            print_trajectory(&run.trajectory, cli.format);
            let online = run.trajectory.length();
            let offline = solve_offline(&inst).length();
            let rep = execute_trajectory(&inst, &run.trajectory);
            println!("triples: {}", run.triples);
            println!("epochs: {}", run.epochs.len());
            println!("covered: {}", rep.covered);
            if offline > 0.0 {
                println!("offline: {offline}");
                println!("ratio: {}", online / offline);
            }
            if let Some(p) = emit_trajectory {
                write_trajectory(&p, &run.trajectory)?;
            }
            if !rep.covered {
                return Ok(ExitCode::from(2));
            }
        }
        Cmd::Oracle { instance, max_n } => {
            let inst = load(&instance, tol)?;
            let res = brute_force_optimal(&inst, max_n)?;
            print_trajectory(&res.trajectory, cli.format);
            println!("triples: {}", res.triples);
            println!("candidates: {}", res.candidates_checked);
        }
        Cmd::Verify {
            instance,
            trajectory,
        } => {
            let inst = load(&instance, tol)?;
            let t = read_trajectory(&trajectory)?;
            t.validate_within(0.0, inst.length())?;
            let rep = execute_trajectory(&inst, &t);
            print_report(&rep, &inst, cli.format);
            if !rep.covered {
                return Ok(ExitCode::from(2));
            }
        }
        Cmd::Generate {
            kind,
            out,
            n,
            length,
            range,
            stack,
            z,
            algo,
        } => {
            let inst = match kind {
                Kind::Random => {
                    let r = range.unwrap_or(1.0);
                    let l = length.unwrap_or(1.5 * r * n as f64);
                    gen_random_instance(n, l, r, cli.seed, true)?
                }
                Kind::KnownLAdv => {
                    let algo = parse_algo(algo.as_deref().unwrap_or("adaptive"), None)?;
                    let mut cfg = KnownLengthConfig::for_length(length.unwrap_or(1e4));
                    if let Some(r) = range {
                        cfg.range = r;
                    }
                    let o = adversary_known_length(cfg, algo)?;
                    eprintln!("{} ratio {}", algo.name(), o.ratio);
                    o.instance
                }
                Kind::UnknownLAdv => {
                    let algo = parse_algo(algo.as_deref().unwrap_or("triple-always"), None)?;
                    let cfg = UnknownLengthConfig::new(stack, range.unwrap_or(1.0));
                    let o = adversary_unknown_length(cfg, algo)?;
                    eprintln!("{} ratio {}", algo.name(), o.ratio);
                    o.instance
                }
                Kind::FixedSwitchAdv => {
                    let l = length.unwrap_or(1000.0);
                    adversary_fixed_switch(z.unwrap_or(default_switch_point(l)), l, range.unwrap_or(1.0))?
                }
            };
            write_instance(&out, &inst)?;
        }
        Cmd::Bench {
            random,
            no_adversaries,
            out,
            assert,
        } => {
            let config = CorpusConfig {
                random,
                seed: cli.seed,
                adversaries: !no_adversaries,
                ..CorpusConfig::default()
            };
            let corpus = build_corpus(&config)?;
            let outcomes = bench_competitive(&corpus, &OnlineAlgorithm::ALL)?;
            let rows: Vec<_> = outcomes.iter().map(|o| o.result.clone()).collect();
            match &out {
                Some(p) => write_csv(&rows, std::fs::File::create(p)?)?,
                None if cli.format == Format::Csv => write_csv(&rows, std::io::stdout().lock())?,
                None => {}
            }
            let summary = summarize(&outcomes);
            let mut violated = false;
            for (algo, count, max, worst) in &summary {
                let over = ceiling(algo).is_some_and(|c| *max > c + cli.epsilon);
                violated |= over;
                eprintln!(
                    "{algo}: {count} runs, max ratio {max:.6} on {worst}{}",
                    if over { " (above ceiling)" } else { "" }
                );
            }
            let broken = outcomes
                .iter()
                .filter(|o| !(o.online.ok() && o.offline.ok()))
                .count();
            if broken > 0 {
                eprintln!("{broken} runs failed structural checks");
                violated = true;
            }
            eprintln!("seed {}", cli.seed);
            if assert && violated {
                return Ok(ExitCode::from(2));
            }
        }
        Cmd::Scale { sizes, trials } => {
            let rows = measure_scaling(&sizes, trials, cli.seed)?;
            match cli.format {
                Format::Csv => {
                    println!("n,median_ms");
                    for r in rows {
                        println!("{},{}", r.n, r.median_ms);
                    }
                }
                Format::Plain => {
                    for r in rows {
                        println!("n = {:>9}  median {:.3} ms", r.n, r.median_ms);
                    }
                }
            }
        }
        Cmd::Render {
            instance,
            trajectory,
            out,
        } => {
            let inst = load(&instance, tol)?;
            let t = match trajectory {
                Some(p) => read_trajectory(&p)?,
                None => solve_offline(&inst),
            };
            let rep = execute_trajectory(&inst, &t);
            std::fs::write(&out, render_svg(&inst, &t, &rep))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
