//! Solvers over a [`CompositeProblem`]: the exhaustive oracle, component-wise
//! isolated optimisation, and cooperative coordinate descent.

use std::fmt;
use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{CompositeProblem, JointScan, JointSolution, SolutionConfig};
use crate::par;

/// Default cap on the joint space walked by the oracle and `decide`.
pub const DEFAULT_JOINT_BUDGET: u64 = 1 << 24;
/// Objective values closer than this are treated as tied.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    OptimalExhaustive,
    Heuristic,
    InfeasibleNoneFound,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::OptimalExhaustive => "optimal_exhaustive",
            SolveStatus::Heuristic => "heuristic",
            SolveStatus::InfeasibleNoneFound => "infeasible_none_found",
        }
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Best joint found; for an infeasible composition, the joint that failed.
    pub joint: Option<JointSolution>,
    pub value: Option<f64>,
    pub component_values: Option<Vec<f64>>,
    /// Components infeasible in `joint`.
    pub violated: Vec<usize>,
    pub evaluations: u64,
    /// Accepted objective values, starting with the initial one.
    pub trace: Vec<f64>,
    pub seed: Option<u64>,
}

impl SolveResult {
    fn none_found(joint: Option<JointSolution>, violated: Vec<usize>, evaluations: u64) -> Self {
        SolveResult {
            status: SolveStatus::InfeasibleNoneFound,
            joint,
            value: None,
            component_values: None,
            violated,
            evaluations,
            trace: Vec::new(),
            seed: None,
        }
    }

    fn found(problem: &CompositeProblem, status: SolveStatus, joint: JointSolution, value: f64, evaluations: u64) -> Result<Self> {
        let component_values = problem.component_values(&joint)?;
        let rechecked = problem.evaluate_overall(&joint)?;
        if rechecked != value {
            return Err(Error::model(format!("solver value {value} differs from re-evaluation {rechecked}")));
        }
        Ok(SolveResult {
            status,
            joint: Some(joint),
            value: Some(value),
            component_values: Some(component_values),
            violated: Vec::new(),
            evaluations,
            trace: Vec::new(),
            seed: None,
        })
    }
}

fn check_joint_budget(problem: &CompositeProblem, budget: u64) -> Result<u64> {
    let required = problem.joint_space_size();
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(required as u64)
}

fn check_component_budget(problem: &CompositeProblem, budget: u64) -> Result<()> {
    for i in 0..problem.n() {
        let required = problem.space_size(i);
        if required > budget {
            return Err(Error::BudgetExceeded { required: required as u128, budget });
        }
    }
    Ok(())
}

/// Exact minimiser of the weighted objective by full enumeration.
///
/// Returns the lexicographically first joint solution within [`TOLERANCE`] of
/// the minimum, so the result does not depend on the worker count.
pub fn brute_force_joint(problem: &CompositeProblem, budget: u64) -> Result<SolveResult> {
    let evaluations = check_joint_budget(problem, budget)?;
    let scan = JointScan::new(problem);
    // per prefix: strict running minima in lexicographic order; the first
    // joint below any threshold is always one of them
    let records = par::map_range(scan.prefix_count(), |prefix| {
        let mut records: Vec<(JointSolution, f64)> = Vec::new();
        scan.visit_prefix(prefix, |joint, value| {
            if records.last().is_none_or(|(_, best)| value < *best) {
                records.push((joint.clone(), value));
            }
            ControlFlow::Continue(())
        })
        .map(|()| records)
    });
    let records = records.into_iter().collect::<Result<Vec<_>>>()?;
    let Some(min) = records
        .iter()
        .filter_map(|r| r.last().map(|(_, v)| *v))
        .min_by(f64::total_cmp)
    else {
        return Ok(SolveResult::none_found(None, Vec::new(), evaluations));
    };
    let (joint, value) = records
        .into_iter()
        .find_map(|r| r.into_iter().find(|(_, v)| *v <= min + TOLERANCE))
        .expect("minimum comes from some prefix");
    SolveResult::found(problem, SolveStatus::OptimalExhaustive, joint, value, evaluations)
}

/// Minimum value and every joint within [`TOLERANCE`] of it, in
/// lexicographic order. `None` when nothing is feasible.
pub fn optimal_set(problem: &CompositeProblem, budget: u64) -> Result<Option<(f64, Vec<JointSolution>)>> {
    check_joint_budget(problem, budget)?;
    let scan = JointScan::new(problem);
    let all = par::map_range(scan.prefix_count(), |prefix| {
        let mut out = Vec::new();
        scan.visit_prefix(prefix, |joint, value| {
            out.push((joint.clone(), value));
            ControlFlow::Continue(())
        })
        .map(|()| out)
    });
    let all: Vec<(JointSolution, f64)> = all.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
    let Some(min) = all.iter().map(|(_, v)| *v).min_by(f64::total_cmp) else {
        return Ok(None);
    };
    let set = all
        .into_iter()
        .filter(|(_, v)| *v <= min + TOLERANCE)
        .map(|(j, _)| j)
        .collect();
    Ok(Some((min, set)))
}

/// First configuration of component `i` feasible against `slots`, if any.
fn first_feasible(problem: &CompositeProblem, i: usize, slots: &[SolutionConfig]) -> Result<Option<SolutionConfig>> {
    let x = problem.instance_at(i, slots)?;
    for bits in 0..problem.space_size(i) {
        let s = problem.config(i, bits)?;
        if problem.is_feasible(i, &x, s) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

fn without(slots: &[SolutionConfig], i: usize) -> Vec<SolutionConfig> {
    slots
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, c)| *c)
        .collect()
}

fn violated(problem: &CompositeProblem, slots: &[SolutionConfig]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for k in 0..problem.n() {
        let x = problem.instance_at(k, slots)?;
        if !problem.is_feasible(k, &x, slots[k]) {
            out.push(k);
        }
    }
    Ok(out)
}

/// Each component minimises its own unweighted objective, in index order.
///
/// Components already solved contribute their chosen configuration to the
/// context; components not yet solved contribute a baseline, the first
/// configuration feasible against the all-zero context. Ties go to the
/// lexicographically smallest configuration. The composition may turn out
/// jointly infeasible, which is reported rather than repaired.
pub fn solve_isolated(problem: &CompositeProblem, budget: u64) -> Result<SolveResult> {
    check_component_budget(problem, budget)?;
    let n = problem.n();
    let zeros = problem.zero_joint();
    let mut slots = zeros.configs().to_vec();
    for (j, slot) in slots.iter_mut().enumerate() {
        if let Some(s) = first_feasible(problem, j, zeros.configs())? {
            *slot = s;
        }
    }
    let mut evaluations = 0;
    for i in 0..n {
        let x = problem.instance_at(i, &slots)?;
        let context = without(&slots, i);
        let mut best: Option<(SolutionConfig, f64)> = None;
        for bits in 0..problem.space_size(i) {
            let s = problem.config(i, bits)?;
            evaluations += 1;
            if !problem.is_feasible(i, &x, s) {
                continue;
            }
            let z = problem.evaluate_component(i, &x, s, &context)?;
            if best.is_none_or(|(_, b)| z < b) {
                best = Some((s, z));
            }
        }
        slots[i] = match best {
            Some((s, _)) => s,
            None => SolutionConfig::zeros(problem.width(i)),
        };
    }
    let joint = JointSolution::new(slots);
    let bad = violated(problem, joint.configs())?;
    if !bad.is_empty() {
        return Ok(SolveResult::none_found(Some(joint), bad, evaluations));
    }
    let value = problem.evaluate_overall(&joint)?;
    let mut result = SolveResult::found(problem, SolveStatus::Heuristic, joint, value, evaluations)?;
    result.trace = vec![value];
    Ok(result)
}

#[derive(Clone, Debug)]
pub struct CoopOptions {
    pub seed: u64,
    /// Maximum number of full improvement sweeps.
    pub max_iters: usize,
    /// Random starts tried before giving up on finding a feasible one.
    pub restarts: usize,
    /// Per-component enumeration cap.
    pub budget: u64,
    /// Starting joint; a random one when absent.
    pub start: Option<JointSolution>,
}

impl Default for CoopOptions {
    fn default() -> Self {
        CoopOptions {
            seed: 0,
            max_iters: 100,
            restarts: 100,
            budget: crate::dependency::DEFAULT_BUDGET,
            start: None,
        }
    }
}

fn random_joint(problem: &CompositeProblem, rng: &mut ChaCha8Rng) -> Result<Vec<SolutionConfig>> {
    (0..problem.n())
        .map(|i| problem.config(i, rng.gen_range(0..problem.space_size(i))))
        .collect()
}

/// Replaces every infeasible component with a random feasible configuration
/// until the joint is feasible or `rounds` sweeps pass.
fn repair(problem: &CompositeProblem, slots: &mut [SolutionConfig], rng: &mut ChaCha8Rng, rounds: usize, evaluations: &mut u64) -> Result<bool> {
    for _ in 0..rounds {
        let bad = violated(problem, slots)?;
        if bad.is_empty() {
            return Ok(true);
        }
        for k in bad {
            let x = problem.instance_at(k, slots)?;
            let mut options = Vec::new();
            for bits in 0..problem.space_size(k) {
                *evaluations += 1;
                let s = problem.config(k, bits)?;
                if problem.is_feasible(k, &x, s) {
                    options.push(s);
                }
            }
            if let Some(s) = options.choose(rng) {
                slots[k] = *s;
            }
        }
    }
    Ok(violated(problem, slots)?.is_empty())
}

/// Round-robin coordinate descent on the weighted objective.
///
/// From a feasible start, each sweep visits components in order and moves a
/// component to the configuration giving the lowest joint objective, only if
/// it improves by more than [`TOLERANCE`] (rounding noise is not progress). Stops after a sweep with no move or `max_iters` sweeps.
pub fn cooperative_search(problem: &CompositeProblem, options: &CoopOptions) -> Result<SolveResult> {
    check_component_budget(problem, options.budget)?;
    let n = problem.n();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut evaluations = 0;

    let mut start = None;
    if let Some(joint) = &options.start {
        problem.check_joint(joint)?;
        let mut slots = joint.configs().to_vec();
        if repair(problem, &mut slots, &mut rng, 2 * n, &mut evaluations)? {
            start = Some(slots);
        }
    }
    for _ in 0..options.restarts {
        if start.is_some() {
            break;
        }
        let mut slots = random_joint(problem, &mut rng)?;
        if repair(problem, &mut slots, &mut rng, 2 * n, &mut evaluations)? {
            start = Some(slots);
        }
    }
    let Some(slots) = start else {
        let mut result = SolveResult::none_found(None, Vec::new(), evaluations);
        result.seed = Some(options.seed);
        return Ok(result);
    };

    let mut current = JointSolution::new(slots);
    let mut value = problem.evaluate_overall(&current)?;
    let mut trace = vec![value];
    for _ in 0..options.max_iters {
        let mut moved = false;
        for i in 0..n {
            let mut best: Option<(JointSolution, f64)> = None;
            for bits in 0..problem.space_size(i) {
                if bits == current.get(i).bits() {
                    continue;
                }
                let candidate = current.with(i, problem.config(i, bits)?);
                evaluations += 1;
                match problem.evaluate_overall(&candidate) {
                    Ok(v) if v < best.as_ref().map_or(value, |(_, b)| *b) - TOLERANCE => best = Some((candidate, v)),
                    Ok(_) | Err(Error::InfeasibleJoint { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            if let Some((joint, v)) = best {
                current = joint;
                value = v;
                trace.push(v);
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    let mut result = SolveResult::found(problem, SolveStatus::Heuristic, current, value, evaluations)?;
    result.trace = trace;
    result.seed = Some(options.seed);
    Ok(result)
}
