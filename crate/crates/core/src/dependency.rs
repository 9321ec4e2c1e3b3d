//! Detection and classification of dependencies between components, and the
//! labelled graph of dependencies.
//!
//! `P_i` is instance-dependent on `P_j` when two configurations of `P_j`
//! yield different `P_i` instances under every configuration of the remaining
//! components. A dependent pair is then classified:
//!
//! * **feasibility** when two reachable instances of `P_i` have different
//!   feasible sets (compared as membership bitmaps over all of `S_i`);
//! * **fitness** otherwise.
//!
//! Reachable instances are the image of χ over the enumerated contexts, not
//! the whole instance space. An edge `j -> i` means changes in `P_j`'s
//! solution reach `P_i`'s instance. When a pair shows both effects only the
//! feasibility edge is kept.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{CompositeProblem, Context, Instance, SolutionConfig};
use crate::par;

pub const DEFAULT_BUDGET: u64 = 1 << 16;

const OBJECTIVE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Enumerate everything; spaces beyond the budget yield `BudgetExceeded`.
    Exhaustive,
    /// Fall back to seeded sampling when a space exceeds the budget.
    Sampled { seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Cap on configurations enumerated per space.
    pub budget: u64,
    pub mode: Mode,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            budget: DEFAULT_BUDGET,
            mode: Mode::Exhaustive,
        }
    }
}

impl AnalysisOptions {
    fn pair_seed(&self, j: usize, i: usize, n: usize) -> Option<u64> {
        match self.mode {
            Mode::Exhaustive => None,
            Mode::Sampled { seed } => Some(seed ^ (j * n + i) as u64),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DependencyLabel {
    Fitness,
    Feasibility,
    Time,
}

impl DependencyLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            DependencyLabel::Fitness => "fitness",
            DependencyLabel::Feasibility => "feasibility",
            DependencyLabel::Time => "time",
        }
    }
}

impl fmt::Display for DependencyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Two configurations of the source whose target instances always differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DependencyWitness {
    pub first: SolutionConfig,
    pub second: SolutionConfig,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DependencyVerdict {
    Dependent {
        witness: DependencyWitness,
        /// `false` when the ∀-context check only covered sampled contexts.
        exhaustive_contexts: bool,
    },
    IndependentExhaustive,
    /// No witness among the samples; not a proof of independence.
    IndependentSampled { samples: u64, seed: u64 },
    BudgetExceeded { required: u128 },
}

impl DependencyVerdict {
    pub fn is_dependent(&self) -> bool {
        matches!(self, DependencyVerdict::Dependent { .. })
    }

    pub fn witness(&self) -> Option<DependencyWitness> {
        match self {
            DependencyVerdict::Dependent { witness, .. } => Some(*witness),
            _ => None,
        }
    }
}

/// Two reachable target instances with different feasible sets.
#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityWitness {
    /// Contexts (`n − 1` configs) that produce the two instances.
    pub first_context: Vec<SolutionConfig>,
    pub second_context: Vec<SolutionConfig>,
    /// A target configuration feasible in exactly one of them.
    pub config: SolutionConfig,
    pub feasible_in_first: bool,
}

/// Two reachable target instances with equal feasible sets but a config
/// whose objective differs between them.
#[derive(Clone, Debug, PartialEq)]
pub struct FitnessWitness {
    pub first_context: Vec<SolutionConfig>,
    pub second_context: Vec<SolutionConfig>,
    pub config: SolutionConfig,
    pub values: (f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub label: DependencyLabel,
    pub feasibility: Option<FeasibilityWitness>,
    pub fitness: Option<FitnessWitness>,
    pub reachable_instances: usize,
    pub exhaustive: bool,
}

impl Classification {
    /// Both effects were established and the fitness edge was dropped.
    pub fn omission_applied(&self) -> bool {
        self.label == DependencyLabel::Feasibility && self.fitness.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DependencyEdge {
    pub source: usize,
    pub target: usize,
    pub label: DependencyLabel,
}

/// Directed labelled graph over components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyGraph {
    nodes: Vec<String>,
    edges: Vec<DependencyEdge>,
    unknown: Vec<(usize, usize)>,
}

impl DependencyGraph {
    /// Edges are sorted and deduplicated. Self-loops are only allowed for
    /// `time` edges.
    pub fn new(nodes: Vec<String>, mut edges: Vec<DependencyEdge>) -> Result<Self> {
        for e in &edges {
            if e.source >= nodes.len() || e.target >= nodes.len() {
                return Err(Error::invalid(format!("edge {} -> {} out of range", e.source, e.target)));
            }
            if e.source == e.target && e.label != DependencyLabel::Time {
                return Err(Error::invalid(format!("self-loop on `{}` labelled {}", nodes[e.source], e.label)));
            }
        }
        edges.sort();
        edges.dedup();
        Ok(DependencyGraph { nodes, edges, unknown: Vec::new() })
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[DependencyEdge] {
        &self.edges
    }

    /// Pairs `(source, target)` whose analysis ran out of budget.
    pub fn unknown(&self) -> &[(usize, usize)] {
        &self.unknown
    }

    pub fn is_partial(&self) -> bool {
        !self.unknown.is_empty()
    }

    pub fn edge(&self, source: usize, target: usize) -> Option<DependencyLabel> {
        self.edges
            .iter()
            .find(|e| e.source == source && e.target == target)
            .map(|e| e.label)
    }

    /// Weak connectivity of the underlying undirected graph.
    pub fn is_multicomponent(&self) -> Result<bool> {
        if self.is_partial() {
            return Err(Error::Indeterminate(format!(
                "graph is partial ({} pairs unknown)",
                self.unknown.len()
            )));
        }
        if self.nodes.is_empty() {
            return Ok(false);
        }
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.source].push(e.target);
            adj[e.target].push(e.source);
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !std::mem::replace(&mut seen[w], true) {
                    stack.push(w);
                }
            }
        }
        Ok(seen.iter().all(|s| *s))
    }
}

/// Outcome for one ordered pair `source -> target`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairAnalysis {
    pub source: usize,
    pub target: usize,
    pub verdict: DependencyVerdict,
    pub classification: Option<Classification>,
    /// Classification failure, if any (the pair is then unknown).
    pub error: Option<String>,
}

impl PairAnalysis {
    pub fn label(&self) -> Option<DependencyLabel> {
        self.classification.as_ref().map(|c| c.label)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    pub options: AnalysisOptions,
    pub pairs: Vec<PairAnalysis>,
    pub graph: DependencyGraph,
}

/// Mixed-radix enumeration of the configurations of a subset of components.
struct Space {
    members: Vec<usize>,
    widths: Vec<u32>,
}

impl Space {
    fn new(problem: &CompositeProblem, members: Vec<usize>) -> Self {
        let widths = members.iter().map(|&k| problem.width(k)).collect();
        Space { members, widths }
    }

    fn size(&self) -> u128 {
        let total: u32 = self.widths.iter().sum();
        if total >= 128 {
            u128::MAX
        } else {
            1u128 << total
        }
    }

    /// Writes point `index` into `slots` (first member most significant).
    fn fill(&self, index: u64, slots: &mut [SolutionConfig]) {
        let mut rest = index;
        for (&k, &w) in self.members.iter().zip(&self.widths).rev() {
            let mask = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
            slots[k] = SolutionConfig::new(w, rest & mask).expect("masked");
            rest = rest.checked_shr(w).unwrap_or(0);
        }
    }

    /// All points when the space fits `cap`, else `cap` sorted distinct samples.
    fn points(&self, cap: u64, rng: Option<&mut ChaCha8Rng>) -> Option<(Vec<u64>, bool)> {
        let size = self.size();
        if size <= cap as u128 {
            return Some(((0..size as u64).collect(), true));
        }
        let rng = rng?;
        let mut pts: Vec<u64> = (0..cap)
            .map(|_| rng.gen_range(0..size.min(u64::MAX as u128) as u64))
            .collect();
        pts.sort_unstable();
        pts.dedup();
        Some((pts, false))
    }
}

fn isqrt(v: u64) -> u64 {
    (v as f64).sqrt() as u64
}

fn check_pair(problem: &CompositeProblem, i: usize, j: usize) -> Result<()> {
    let n = problem.n();
    if i >= n || j >= n {
        return Err(Error::invalid(format!("pair ({j}, {i}) out of range 0..{n}")));
    }
    if i == j {
        return Err(Error::invalid(format!("component {i} cannot depend on itself")));
    }
    Ok(())
}

/// Is `P_i` instance-dependent on `P_j`?
pub fn detect_instance_dependency(
    problem: &CompositeProblem,
    i: usize,
    j: usize,
    options: &AnalysisOptions,
) -> Result<DependencyVerdict> {
    check_pair(problem, i, j)?;
    let n = problem.n();
    let source = Space::new(problem, vec![j]);
    let rest = Space::new(problem, (0..n).filter(|&k| k != i && k != j).collect());
    let budget = options.budget;

    let seed = options.pair_seed(j, i, n);
    let (source_pts, rest_pts, exhaustive) = match seed {
        None => {
            let required = source.size().max(rest.size());
            if required > budget as u128 {
                return Ok(DependencyVerdict::BudgetExceeded { required });
            }
            (source.points(budget, None).unwrap().0, rest.points(budget, None).unwrap().0, true)
        }
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fits = source.size() <= budget as u128 && rest.size() <= budget as u128;
            let cap = if fits { budget } else { isqrt(budget).max(2) };
            let (s, se) = source.points(cap, Some(&mut rng)).unwrap();
            let (r, re) = rest.points(cap, Some(&mut rng)).unwrap();
            (s, r, se && re)
        }
    };

    let base = problem.zero_joint();
    let rows: Vec<Result<Vec<Instance>>> = par::map_slice(&source_pts, |&sp| {
        let mut slots = base.configs().to_vec();
        source.fill(sp, &mut slots);
        rest_pts
            .iter()
            .map(|&rp| {
                rest.fill(rp, &mut slots);
                problem.instance_at(i, &slots)
            })
            .collect()
    });

    // distinct rows in order of first appearance
    let mut distinct: Vec<(u64, Vec<Instance>)> = Vec::new();
    let mut index: HashMap<Vec<Instance>, usize> = HashMap::new();
    for (sp, row) in source_pts.iter().zip(rows) {
        let row = row?;
        if !index.contains_key(&row) {
            index.insert(row.clone(), distinct.len());
            distinct.push((*sp, row));
        }
    }

    for a in 0..distinct.len() {
        for b in a + 1..distinct.len() {
            let differs_everywhere = distinct[a]
                .1
                .iter()
                .zip(&distinct[b].1)
                .all(|(x, y)| x != y);
            if differs_everywhere {
                let w = problem.width(j);
                return Ok(DependencyVerdict::Dependent {
                    witness: DependencyWitness {
                        first: SolutionConfig::new(w, distinct[a].0)?,
                        second: SolutionConfig::new(w, distinct[b].0)?,
                    },
                    exhaustive_contexts: exhaustive,
                });
            }
        }
    }
    Ok(match seed {
        Some(seed) if !exhaustive => DependencyVerdict::IndependentSampled {
            samples: (source_pts.len() * rest_pts.len()) as u64,
            seed,
        },
        _ => DependencyVerdict::IndependentExhaustive,
    })
}

/// Replays a dependency witness over every context of the remaining
/// components; `true` iff the two target instances differ in all of them.
pub fn replay_dependency_witness(
    problem: &CompositeProblem,
    i: usize,
    j: usize,
    witness: &DependencyWitness,
    budget: u64,
) -> Result<bool> {
    check_pair(problem, i, j)?;
    let rest = Space::new(problem, (0..problem.n()).filter(|&k| k != i && k != j).collect());
    if rest.size() > budget as u128 {
        return Err(Error::BudgetExceeded { required: rest.size(), budget });
    }
    let mut slots = problem.zero_joint().configs().to_vec();
    for rp in 0..rest.size() as u64 {
        rest.fill(rp, &mut slots);
        slots[j] = witness.first;
        let a = problem.instance_at(i, &slots)?;
        slots[j] = witness.second;
        let b = problem.instance_at(i, &slots)?;
        if a == b {
            return Ok(false);
        }
    }
    Ok(true)
}

fn strip_owner(slots: &[SolutionConfig], owner: usize) -> Vec<SolutionConfig> {
    slots
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != owner)
        .map(|(_, c)| *c)
        .collect()
}

/// Fitness or feasibility, decided over the reachable instances of `P_i`.
///
/// The source `j` does not enter the feasible-set comparison (reachable
/// instances come from every context); it only selects the sampling seed.
pub fn classify_dependency(
    problem: &CompositeProblem,
    i: usize,
    j: usize,
    options: &AnalysisOptions,
) -> Result<Classification> {
    check_pair(problem, i, j)?;
    let n = problem.n();
    let budget = options.budget;
    let target_space = problem.space_size(i);
    if target_space > budget {
        return Err(Error::Classification {
            attempted: target_space as u128,
            budget,
        });
    }
    let contexts = Space::new(problem, (0..n).filter(|&k| k != i).collect());
    let (ctx_pts, exhaustive) = match options.pair_seed(j, i, n) {
        None => {
            if contexts.size() > budget as u128 {
                return Err(Error::BudgetExceeded { required: contexts.size(), budget });
            }
            contexts.points(budget, None).unwrap()
        }
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.rotate_left(17));
            contexts.points(budget, Some(&mut rng)).unwrap()
        }
    };

    let base = problem.zero_joint();
    let images: Vec<Result<(Instance, Vec<SolutionConfig>)>> = par::map_slice(&ctx_pts, |&cp| {
        let mut slots = base.configs().to_vec();
        contexts.fill(cp, &mut slots);
        problem.instance_at(i, &slots).map(|x| (x, slots))
    });
    let mut reachable: Vec<(Instance, Vec<SolutionConfig>)> = Vec::new();
    let mut seen: HashMap<Instance, ()> = HashMap::new();
    for image in images {
        let (x, slots) = image?;
        if seen.insert(x.clone(), ()).is_none() {
            reachable.push((x, slots));
        }
    }

    let width = problem.width(i);
    let words = target_space.div_ceil(64) as usize;
    let bitmaps: Vec<Vec<u64>> = par::map_slice(&reachable, |(x, _)| {
        let mut bm = vec![0u64; words];
        for s in 0..target_space {
            let cfg = SolutionConfig::new(width, s).expect("in range");
            if problem.is_feasible(i, x, cfg) {
                bm[(s / 64) as usize] |= 1 << (s % 64);
            }
        }
        bm
    });

    // group instances by feasible set, preserving first-appearance order
    let mut groups: Vec<(Vec<u64>, Vec<usize>)> = Vec::new();
    let mut group_of: HashMap<&[u64], usize> = HashMap::new();
    for (idx, bm) in bitmaps.iter().enumerate() {
        match group_of.get(bm.as_slice()) {
            Some(&g) => groups[g].1.push(idx),
            None => {
                group_of.insert(bm, groups.len());
                groups.push((bm.clone(), vec![idx]));
            }
        }
    }

    let feasibility = if groups.len() >= 2 {
        let (bm_a, members_a) = &groups[0];
        let (bm_b, members_b) = &groups[1];
        let s = (0..target_space)
            .find(|s| {
                let (w, b) = ((s / 64) as usize, s % 64);
                (bm_a[w] >> b) & 1 != (bm_b[w] >> b) & 1
            })
            .expect("bitmaps differ");
        let in_first = (bm_a[(s / 64) as usize] >> (s % 64)) & 1 == 1;
        Some(FeasibilityWitness {
            first_context: strip_owner(&reachable[members_a[0]].1, i),
            second_context: strip_owner(&reachable[members_b[0]].1, i),
            config: SolutionConfig::new(width, s)?,
            feasible_in_first: in_first,
        })
    } else {
        None
    };

    let fitness = fitness_effect(problem, i, &reachable, &groups);
    let label = match (&feasibility, &fitness) {
        (Some(_), _) => DependencyLabel::Feasibility,
        (None, Some(_)) => DependencyLabel::Fitness,
        // instances differ yet nothing observable does
        (None, None) if exhaustive => {
            return Err(Error::model(format!(
                "`{}` instances differ but neither feasible sets nor objectives do",
                problem.component(i).name()
            )))
        }
        (None, None) => {
            return Err(Error::Indeterminate(format!(
                "no feasibility or fitness effect on `{}` among sampled instances",
                problem.component(i).name()
            )))
        }
    };
    Ok(Classification {
        label,
        feasibility,
        fitness,
        reachable_instances: reachable.len(),
        exhaustive,
    })
}

/// Looks for two instances with the same feasible set and a shared feasible
/// config whose objective differs between them.
fn fitness_effect(
    problem: &CompositeProblem,
    i: usize,
    reachable: &[(Instance, Vec<SolutionConfig>)],
    groups: &[(Vec<u64>, Vec<usize>)],
) -> Option<FitnessWitness> {
    let width = problem.width(i);
    let component = problem.component(i);
    for (bm, members) in groups {
        let feasible: Vec<u64> = (0..(bm.len() as u64 * 64))
            .filter(|s| (bm[(s / 64) as usize] >> (s % 64)) & 1 == 1)
            .collect();
        if feasible.is_empty() {
            continue;
        }
        let (x0, ctx0) = &reachable[members[0]];
        for &other in &members[1..] {
            let (x1, ctx1) = &reachable[other];
            for &s in &feasible {
                let cfg = SolutionConfig::new(width, s).expect("in range");
                let mut a = ctx0.clone();
                a[i] = cfg;
                let mut b = ctx1.clone();
                b[i] = cfg;
                let z0 = component.objective(x0, cfg, &Context::new(&a, i));
                let z1 = component.objective(x1, cfg, &Context::new(&b, i));
                if (z0 - z1).abs() > OBJECTIVE_TOLERANCE {
                    return Some(FitnessWitness {
                        first_context: strip_owner(ctx0, i),
                        second_context: strip_owner(ctx1, i),
                        config: cfg,
                        values: (z0, z1),
                    });
                }
            }
        }
    }
    None
}

fn analyze_pair(problem: &CompositeProblem, j: usize, i: usize, options: &AnalysisOptions) -> Result<PairAnalysis> {
    let verdict = detect_instance_dependency(problem, i, j, options)?;
    let (classification, error) = if verdict.is_dependent() {
        match classify_dependency(problem, i, j, options) {
            Ok(c) => (Some(c), None),
            Err(e @ (Error::Classification { .. } | Error::BudgetExceeded { .. } | Error::Indeterminate(_))) => {
                (None, Some(e.to_string()))
            }
            Err(e) => return Err(e),
        }
    } else {
        (None, None)
    };
    Ok(PairAnalysis {
        source: j,
        target: i,
        verdict,
        classification,
        error,
    })
}

/// Runs detection and classification over every ordered pair.
pub fn analyze(problem: &CompositeProblem, options: &AnalysisOptions) -> Result<Analysis> {
    let n = problem.n();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (0..n).filter(move |&i| i != j).map(move |i| (j, i)))
        .collect();
    let results = par::map_slice(&pairs, |&(j, i)| analyze_pair(problem, j, i, options));
    let pairs = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut edges = Vec::new();
    let mut unknown = Vec::new();
    for p in &pairs {
        match (&p.verdict, &p.classification) {
            (DependencyVerdict::BudgetExceeded { .. }, _) => unknown.push((p.source, p.target)),
            (DependencyVerdict::Dependent { .. }, None) => unknown.push((p.source, p.target)),
            (DependencyVerdict::Dependent { .. }, Some(c)) => edges.push(DependencyEdge {
                source: p.source,
                target: p.target,
                label: c.label,
            }),
            _ => {}
        }
    }
    let mut graph = DependencyGraph::new(problem.names(), edges)?;
    graph.unknown = unknown;
    Ok(Analysis {
        options: *options,
        pairs,
        graph,
    })
}

/// The graph of dependencies `G = (P, D)`.
pub fn build_dependency_graph(problem: &CompositeProblem, options: &AnalysisOptions) -> Result<DependencyGraph> {
    analyze(problem, options).map(|a| a.graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Component;
    use crate::synthetic::{spec, LinkKind};

    #[test]
    fn constant_chi_is_independent() {
        let p = spec(&[("A", 2), ("B", 2)], &[]).build().unwrap();
        let v = detect_instance_dependency(&p, 1, 0, &AnalysisOptions::default()).unwrap();
        assert_eq!(v, DependencyVerdict::IndependentExhaustive);
        let g = build_dependency_graph(&p, &AnalysisOptions::default()).unwrap();
        assert!(g.edges().is_empty());
        assert!(!g.is_multicomponent().unwrap());
    }

    #[test]
    fn zero_width_source_has_no_pair() {
        let p = spec(&[("A", 0), ("B", 2)], &[(0, 1, LinkKind::Feasibility)]).build().unwrap();
        let v = detect_instance_dependency(&p, 1, 0, &AnalysisOptions::default()).unwrap();
        assert_eq!(v, DependencyVerdict::IndependentExhaustive);
    }

    #[test]
    fn fitness_link_classifies_as_fitness() {
        let p = spec(&[("A", 2), ("B", 2)], &[(0, 1, LinkKind::Fitness)]).build().unwrap();
        let opts = AnalysisOptions::default();
        assert!(detect_instance_dependency(&p, 1, 0, &opts).unwrap().is_dependent());
        let c = classify_dependency(&p, 1, 0, &opts).unwrap();
        assert_eq!(c.label, DependencyLabel::Fitness);
        assert!(c.feasibility.is_none());
        assert!(c.fitness.is_some());
        assert!(!c.omission_applied());
    }

    #[test]
    fn self_pair_rejected() {
        let p = spec(&[("A", 1), ("B", 1)], &[]).build().unwrap();
        assert!(detect_instance_dependency(&p, 0, 0, &AnalysisOptions::default()).is_err());
    }

    #[test]
    fn budget_exceeded_marks_graph_partial() {
        let p = spec(&[("A", 6), ("B", 6)], &[(0, 1, LinkKind::Feasibility)]).build().unwrap();
        let opts = AnalysisOptions { budget: 16, mode: Mode::Exhaustive };
        let v = detect_instance_dependency(&p, 1, 0, &opts).unwrap();
        assert_eq!(v, DependencyVerdict::BudgetExceeded { required: 64 });
        let g = build_dependency_graph(&p, &opts).unwrap();
        assert!(g.is_partial());
        assert!(matches!(g.is_multicomponent(), Err(Error::Indeterminate(_))));
    }

    #[test]
    fn target_space_over_budget_is_classification_error() {
        let p = spec(&[("A", 2), ("B", 6)], &[(0, 1, LinkKind::Feasibility)]).build().unwrap();
        let opts = AnalysisOptions { budget: 16, mode: Mode::Exhaustive };
        let err = classify_dependency(&p, 1, 0, &opts).unwrap_err();
        assert_eq!(err, Error::Classification { attempted: 64, budget: 16 });
    }

    #[test]
    fn sampled_mode_never_claims_independence() {
        let p = spec(&[("A", 6), ("B", 6)], &[]).build().unwrap();
        let opts = AnalysisOptions { budget: 16, mode: Mode::Sampled { seed: 3 } };
        match detect_instance_dependency(&p, 1, 0, &opts).unwrap() {
            DependencyVerdict::IndependentSampled { samples, .. } => assert!(samples > 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn graph_rejects_non_time_self_loops() {
        let e = |l| DependencyEdge { source: 0, target: 0, label: l };
        assert!(DependencyGraph::new(vec!["A".into()], vec![e(DependencyLabel::Fitness)]).is_err());
        assert!(DependencyGraph::new(vec!["A".into()], vec![e(DependencyLabel::Time)]).is_ok());
    }

    /// Echoes the other component's config into its instance but ignores it.
    struct Inert {
        name: &'static str,
        width: u32,
    }

    impl Component for Inert {
        fn name(&self) -> &str {
            self.name
        }
        fn encoding_width(&self) -> u32 {
            self.width
        }
        fn dimension(&self) -> usize {
            1
        }
        fn chi(&self, context: &Context<'_>) -> Instance {
            let bits: Vec<u8> = context.others().map(|(_, c)| c.bits() as u8).collect();
            Instance::new(1, bits, ())
        }
        fn violation(&self, _: &Instance, _: SolutionConfig) -> Option<&'static str> {
            None
        }
        fn objective(&self, _: &Instance, s: SolutionConfig, _: &Context<'_>) -> f64 {
            s.bits() as f64
        }
    }

    fn inert_pair() -> CompositeProblem {
        CompositeProblem::with_unit_weights(vec![
            std::sync::Arc::new(Inert { name: "A", width: 2 }),
            std::sync::Arc::new(Inert { name: "B", width: 2 }),
        ])
        .unwrap()
    }

    #[test]
    fn dependence_without_any_effect_is_a_model_violation() {
        let p = inert_pair();
        let opts = AnalysisOptions::default();
        assert!(detect_instance_dependency(&p, 1, 0, &opts).unwrap().is_dependent());
        assert!(matches!(classify_dependency(&p, 1, 0, &opts), Err(Error::ModelViolation(_))));
        assert!(analyze(&p, &opts).is_err());
    }

    #[test]
    fn sampled_dependence_without_effect_stays_unknown() {
        let p = inert_pair();
        let opts = AnalysisOptions { budget: 2, mode: Mode::Sampled { seed: 1 } };
        let a = analyze(&p, &opts).unwrap();
        assert!(a.graph.edges().is_empty());
        assert!(a.graph.is_partial());
    }
}
