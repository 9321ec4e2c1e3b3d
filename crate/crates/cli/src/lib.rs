//! Command-line front end: instance files, analysis reports, DOT export,
//! solver runs and the decision harness.
//!
//! Exit codes: 0 success, 1 usage, 2 parse or validation error, 3 budget
//! exceeded, 4 infeasible.

pub mod dot;
pub mod error;
pub mod instance;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use mcdep_core::dependency::{analyze, replay_dependency_witness, AnalysisOptions, DependencyVerdict, Mode, DEFAULT_BUDGET};
use mcdep_core::lrp::{LrpData, LrpProblem};
use mcdep_core::schedpack::{
    fifo_episode, realized_horizon, solve_episode_exhaustive, solve_episode_isolated, EpisodeStatus, SchedPack,
    SchedPackData,
};
use mcdep_core::solvers::{brute_force_joint, cooperative_search, solve_isolated, CoopOptions, SolveStatus, DEFAULT_JOINT_BUDGET};
use mcdep_core::time::{compress_time_graph, detect_time_dependency, expand_time_graph, TimeVerdict};
use mcdep_core::{CompositeProblem, Decision};

pub use error::CliError;
pub use instance::InstanceFile;

use report::StreamFinding;

#[derive(Parser, Debug)]
#[command(name = "mcdep", version, about = "Analyse and solve problems with multiple interdependent components")]
struct Cli {
    /// Worker threads for enumeration (0 = all cores). Never changes results.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Detect and classify dependencies; build the graph of dependencies.
    Analyze {
        file: PathBuf,
        /// Configurations enumerated per space.
        #[arg(long)]
        budget: Option<u64>,
        /// Root seed for sampled mode (default: $MCDEP_SEED or 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Sample spaces larger than the budget instead of giving up on them.
        #[arg(long)]
        sampled: bool,
        /// Also write the graph as DOT to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run a solver.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum)]
        solver: SolverKind,
        #[arg(long)]
        seed: Option<u64>,
        /// Maximum improvement sweeps (coop).
        #[arg(long, default_value_t = 100)]
        iters: usize,
        /// Joint configurations (oracle) or configurations per component (isolated, coop).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Is there a feasible solution with overall objective ≤ k?
    Decide {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long)]
        budget: Option<u64>,
        /// Decide the reduced problem with only this component's weight set to 1.
        #[arg(long)]
        component: Option<String>,
    },
    /// Print the expanded (or compressed) time graph as DOT.
    Timegraph {
        file: PathBuf,
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        compressed: bool,
    },
    /// Print a random instance file.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolverKind {
    Oracle,
    Isolated,
    Coop,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Lrp,
    Schedpack,
}

/// Text for stdout/stderr plus the exit code.
#[derive(Default)]
struct Outcome {
    stdout: String,
    stderr: String,
    code: i32,
}

/// Runs the CLI, reading `MCDEP_SEED` from the environment.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let env_seed = std::env::var("MCDEP_SEED").ok();
    run_with_env(args, env_seed.as_deref(), out, err)
}

/// As [`run`], with the `MCDEP_SEED` value passed explicitly.
pub fn run_with_env<I, S>(args: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let outcome = match root_seed(env_seed) {
        Err(e) => Err(e),
        Ok(seed) => mcdep_core::par::with_jobs(cli.jobs, || execute(cli.command, seed)),
    };
    match outcome {
        Ok(o) => {
            let _ = out.write_all(o.stdout.as_bytes());
            let _ = err.write_all(o.stderr.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn root_seed(env: Option<&str>) -> Result<u64, CliError> {
    match env {
        None => Ok(0),
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("MCDEP_SEED must be a non-negative integer, got `{v}`"))),
    }
}

pub fn load_instance(path: &Path) -> Result<InstanceFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    instance::parse(&text)
}

/// The static problem behind an instance, if it has one.
fn composite(file: &InstanceFile) -> Result<(CompositeProblem, Option<LrpProblem>), CliError> {
    match file {
        InstanceFile::Lrp(d) => {
            let lrp = LrpProblem::new(d.clone())?;
            Ok((lrp.composite(), Some(lrp)))
        }
        InstanceFile::Synthetic(s) => Ok((s.build()?, None)),
        InstanceFile::SchedPack(_) => unreachable!("schedpack has no static composite"),
    }
}

fn warnings(file: &InstanceFile) -> String {
    match file {
        InstanceFile::Lrp(d) => d.warnings().iter().map(|w| format!("warning: {w}\n")).collect(),
        _ => String::new(),
    }
}

fn execute(command: Command, root_seed: u64) -> Result<Outcome, CliError> {
    match command {
        Command::Analyze { file, budget, seed, sampled, dot } => {
            let inst = load_instance(&file)?;
            let budget = budget.unwrap_or(DEFAULT_BUDGET);
            if budget == 0 {
                return Err(CliError::Usage("--budget must be positive".into()));
            }
            let seed = seed.unwrap_or(root_seed);
            let mut o = Outcome { stderr: warnings(&inst), ..Default::default() };
            let (text, dot_text, code) = match &inst {
                InstanceFile::SchedPack(d) => analyze_time(d)?,
                _ => {
                    let (problem, _) = composite(&inst)?;
                    let mode = if sampled { Mode::Sampled { seed } } else { Mode::Exhaustive };
                    let opts = AnalysisOptions { budget, mode };
                    let a = analyze(&problem, &opts)?;
                    let replays: Vec<Option<bool>> = a
                        .pairs
                        .iter()
                        .map(|p| match &p.verdict {
                            DependencyVerdict::Dependent { witness, .. } => {
                                replay_dependency_witness(&problem, p.target, p.source, witness, budget).ok()
                            }
                            _ => None,
                        })
                        .collect();
                    let code = if a.graph.is_partial() { 3 } else { 0 };
                    let r = report::analysis(inst.kind(), &problem, &a, &replays);
                    (r.render(), dot::dependency_dot(&a.graph), code)
                }
            };
            if let Some(path) = dot {
                std::fs::write(&path, &dot_text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            }
            o.stdout = text;
            o.code = code;
            Ok(o)
        }
        Command::Solve { file, solver, seed, iters, budget } => {
            let inst = load_instance(&file)?;
            let seed = seed.unwrap_or(root_seed);
            if iters == 0 {
                return Err(CliError::Usage("--iters must be at least 1".into()));
            }
            let mut o = Outcome { stderr: warnings(&inst), ..Default::default() };
            if let InstanceFile::SchedPack(d) = &inst {
                let (name, s) = match solver {
                    SolverKind::Oracle => ("oracle", solve_episode_exhaustive(d)?),
                    SolverKind::Isolated => ("isolated", solve_episode_isolated(d)?),
                    SolverKind::Coop => {
                        return Err(CliError::Usage("solver coop is not available for schedpack instances".into()))
                    }
                };
                o.stdout = report::episode(name, d, &s).render();
                o.code = if s.status == EpisodeStatus::InfeasibleNoneFound { 4 } else { 0 };
                return Ok(o);
            }
            let (problem, lrp) = composite(&inst)?;
            let (name, result) = match solver {
                SolverKind::Oracle => ("oracle", brute_force_joint(&problem, budget.unwrap_or(DEFAULT_JOINT_BUDGET))?),
                SolverKind::Isolated => ("isolated", solve_isolated(&problem, budget.unwrap_or(DEFAULT_BUDGET))?),
                SolverKind::Coop => {
                    let opts = CoopOptions {
                        seed,
                        max_iters: iters,
                        budget: budget.unwrap_or(DEFAULT_BUDGET),
                        ..Default::default()
                    };
                    ("coop", cooperative_search(&problem, &opts)?)
                }
            };
            o.stdout = report::solve(name, &problem, &result, lrp.as_ref()).render();
            o.code = if result.status == SolveStatus::InfeasibleNoneFound { 4 } else { 0 };
            Ok(o)
        }
        Command::Decide { file, k, budget, component } => {
            if !k.is_finite() {
                return Err(CliError::Usage("--k must be a finite number".into()));
            }
            let inst = load_instance(&file)?;
            let budget = budget.unwrap_or(DEFAULT_JOINT_BUDGET);
            let mut o = Outcome { stderr: warnings(&inst), ..Default::default() };
            let (decision, scope) = if let InstanceFile::SchedPack(d) = &inst {
                if component.is_some() {
                    return Err(CliError::Usage("--component applies to static problems only".into()));
                }
                let s = solve_episode_exhaustive(d)?;
                let decision = match s.value {
                    Some(v) if v.value <= k => Decision::Yes {
                        witness: mcdep_core::JointSolution::new(vec![]),
                        value: v.value,
                    },
                    _ => Decision::No,
                };
                (decision, "episode".to_string())
            } else {
                let (problem, _) = composite(&inst)?;
                let (problem, scope) = match component {
                    None => (problem, "all".to_string()),
                    Some(name) => {
                        let i = problem
                            .names()
                            .iter()
                            .position(|n| *n == name)
                            .ok_or_else(|| CliError::Usage(format!("unknown component `{name}`")))?;
                        (problem.reduce_to_component(i)?, name)
                    }
                };
                (problem.decide(k, budget)?, scope)
            };
            o.stdout = report::decision(&decision, k, &scope).render();
            o.code = if matches!(decision, Decision::BudgetExceeded { .. }) { 3 } else { 0 };
            Ok(o)
        }
        Command::Timegraph { file, horizon, compressed } => {
            let inst = load_instance(&file)?;
            let InstanceFile::SchedPack(d) = inst else {
                return Err(CliError::Usage(format!("instance kind {} declares no time streams", inst.kind())));
            };
            let pipeline = SchedPack::new(d)?.pipeline();
            if horizon > pipeline.horizon_cap() {
                return Err(CliError::Validation(format!(
                    "horizon {horizon} exceeds the cap of {} windows",
                    pipeline.horizon_cap()
                )));
            }
            let g = expand_time_graph(&pipeline, horizon)?;
            let stdout = if compressed { dot::dependency_dot(&compress_time_graph(&g)) } else { dot::expanded_dot(&g) };
            Ok(Outcome { stdout, ..Default::default() })
        }
        Command::Gen { kind, seed } => {
            let seed = seed.unwrap_or(root_seed);
            let file = match kind {
                GenKind::Lrp => InstanceFile::Lrp(LrpData::generate(seed)),
                GenKind::Schedpack => InstanceFile::SchedPack(SchedPackData::generate(seed)),
            };
            Ok(Outcome { stdout: instance::serialize(&file), ..Default::default() })
        }
    }
}

/// Time-dependency report for a schedpack instance.
fn analyze_time(d: &SchedPackData) -> Result<(String, String, i32), CliError> {
    let sp = SchedPack::new(d.clone())?;
    let pipeline = sp.pipeline();
    let names = pipeline.components().to_vec();
    let findings = pipeline
        .streams()
        .iter()
        .map(|s| {
            let verdict = detect_time_dependency(&pipeline, s.target(), s.source(), false)?;
            let witness = match verdict {
                TimeVerdict::TimeDependent(w) => Some(w),
                TimeVerdict::NotDetected => None,
            };
            Ok(StreamFinding {
                source: names[s.source()].clone(),
                target: names[s.target()].clone(),
                replayed: witness.as_ref().map(|w| w.replay(&pipeline)),
                witness,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    // enough windows for both same-window and cross-window edges to appear
    let horizon = realized_horizon(d, &fifo_episode(d)?)?.max(2);
    let expanded = expand_time_graph(&pipeline, horizon)?;
    let graph = compress_time_graph(&expanded);
    let r = report::time_analysis(&names, &findings, horizon, &graph);
    Ok((r.render(), dot::dependency_dot(&graph), 0))
}
