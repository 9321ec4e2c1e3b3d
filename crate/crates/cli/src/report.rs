//! Human-readable text followed by a fenced `key=value` block.

use std::fmt::Write as _;

use mcdep_core::dependency::{Analysis, DependencyVerdict, Mode};
use mcdep_core::lrp::{LrpProblem, FLP, VRP};
use mcdep_core::schedpack::{EpisodeSolution, SchedPackData};
use mcdep_core::solvers::SolveResult;
use mcdep_core::time::TimeWitness;
use mcdep_core::{CompositeProblem, Decision, DependencyGraph};

#[derive(Default)]
pub struct Report {
    text: String,
    pairs: Vec<(String, String)>,
}

impl Report {
    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn kv(&mut self, key: impl Into<String>, value: impl ToString) {
        self.pairs.push((key.into(), value.to_string()));
    }

    pub fn render(&self) -> String {
        let mut out = self.text.clone();
        out.push_str("\n```report\n");
        for (k, v) in &self.pairs {
            writeln!(out, "{k}={v}").unwrap();
        }
        out.push_str("```\n");
        out
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// Like [`join`], but `-` for an empty list.
fn list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let s = join(items, " ");
    if s.is_empty() {
        "-".into()
    } else {
        s
    }
}

fn edges_text(graph: &DependencyGraph) -> String {
    let names = graph.nodes();
    join(
        graph
            .edges()
            .iter()
            .map(|e| format!("{}->{}:{}", names[e.source], names[e.target], e.label)),
        ";",
    )
}

fn connectivity(r: &mut Report, graph: &DependencyGraph) {
    match graph.is_multicomponent() {
        Ok(c) => {
            r.line(format!(
                "connected: {c} (weak connectivity) => {}",
                if c { "multi-component problem" } else { "not a multi-component problem" }
            ));
            r.kv("connected", c);
            r.kv("multicomponent", c);
        }
        Err(e) => {
            r.line(format!("connected: unknown ({e})"));
            r.kv("connected", "unknown");
            r.kv("multicomponent", "unknown");
        }
    }
}

pub fn analysis(kind: &str, problem: &CompositeProblem, a: &Analysis, replays: &[Option<bool>]) -> Report {
    let names = problem.names();
    let mut r = Report::default();
    r.line(format!("dependency analysis: {} components ({})", names.len(), names.join(", ")));
    let (mode, seed) = match a.options.mode {
        Mode::Exhaustive => ("exhaustive".to_string(), None),
        Mode::Sampled { seed } => ("sampled".to_string(), Some(seed)),
    };
    r.line(format!("mode: {mode}; budget: {} configurations per enumerated space", a.options.budget));
    r.kv("kind", kind);
    r.kv("components", names.join(","));
    r.kv("mode", &mode);
    r.kv("budget", a.options.budget);
    if let Some(seed) = seed {
        r.line(format!("root seed: {seed} (pair seed = root xor (source*n + target))"));
        r.kv("seed", seed);
    }
    r.line("");
    for (p, replay) in a.pairs.iter().zip(replays) {
        let (s, t) = (&names[p.source], &names[p.target]);
        let key = format!("pair.{s}.{t}");
        match &p.verdict {
            DependencyVerdict::Dependent { witness, exhaustive_contexts } => {
                let scope = if *exhaustive_contexts { "all contexts" } else { "sampled contexts" };
                r.line(format!(
                    "{s} -> {t}: dependent ({scope}); witness {s}={} vs {s}={}",
                    witness.first, witness.second
                ));
                r.kv(format!("{key}.verdict"), "dependent");
                r.kv(format!("{key}.contexts"), if *exhaustive_contexts { "exhaustive" } else { "sampled" });
                r.kv(format!("{key}.witness"), format!("{},{}", witness.first, witness.second));
                let replay = match replay {
                    Some(true) => "ok",
                    Some(false) => "failed",
                    None => "skipped",
                };
                r.line(format!("  witness replay: {replay}"));
                r.kv(format!("{key}.replay"), replay);
            }
            DependencyVerdict::IndependentExhaustive => {
                r.line(format!("{s} -> {t}: independent (exhaustive)"));
                r.kv(format!("{key}.verdict"), "independent_exhaustive");
            }
            DependencyVerdict::IndependentSampled { samples, seed } => {
                r.line(format!("{s} -> {t}: not detected ({samples} samples, seed {seed})"));
                r.kv(format!("{key}.verdict"), "independent_sampled");
                r.kv(format!("{key}.samples"), samples);
                r.kv(format!("{key}.seed"), seed);
            }
            DependencyVerdict::BudgetExceeded { required } => {
                r.line(format!("{s} -> {t}: unknown (needs {required} configurations)"));
                r.kv(format!("{key}.verdict"), "budget_exceeded");
                r.kv(format!("{key}.required"), required);
            }
        }
        if let Some(c) = &p.classification {
            r.line(format!(
                "  classification: {} over {} reachable instances{}",
                c.label,
                c.reachable_instances,
                if c.exhaustive { "" } else { " (sampled)" }
            ));
            r.kv(format!("{key}.label"), c.label);
            r.kv(format!("{key}.reachable_instances"), c.reachable_instances);
            if let Some(w) = &c.feasibility {
                let text = format!(
                    "{}={} feasible in [{}] only",
                    t,
                    w.config,
                    if w.feasible_in_first { join(&w.first_context, "|") } else { join(&w.second_context, "|") }
                );
                r.line(format!(
                    "  feasibility witness: contexts [{}] vs [{}]; {text}",
                    join(&w.first_context, "|"),
                    join(&w.second_context, "|")
                ));
                r.kv(
                    format!("{key}.feasibility_witness"),
                    format!("{};{};{};{}", join(&w.first_context, "|"), join(&w.second_context, "|"), w.config, w.feasible_in_first),
                );
            }
            if let Some(w) = &c.fitness {
                r.line(format!(
                    "  fitness witness: contexts [{}] vs [{}]; {t}={} scores {} vs {}",
                    join(&w.first_context, "|"),
                    join(&w.second_context, "|"),
                    w.config,
                    w.values.0,
                    w.values.1
                ));
                r.kv(
                    format!("{key}.fitness_witness"),
                    format!("{};{};{};{};{}", join(&w.first_context, "|"), join(&w.second_context, "|"), w.config, w.values.0, w.values.1),
                );
            }
            if c.omission_applied() {
                r.line("  omission rule: fitness effect also present; only the feasibility edge is kept");
            }
            r.kv(format!("{key}.omission"), c.omission_applied());
        }
        if let Some(e) = &p.error {
            r.line(format!("  classification failed: {e}"));
            r.kv(format!("{key}.error"), e);
        }
    }
    r.line("");
    r.line("edges:");
    let names = a.graph.nodes();
    for e in a.graph.edges() {
        r.line(format!("  {} -> {} [{}]", names[e.source], names[e.target], e.label));
    }
    if a.graph.edges().is_empty() {
        r.line("  (none)");
    }
    r.kv("edges", edges_text(&a.graph));
    let unknown = join(a.graph.unknown().iter().map(|&(s, t)| format!("{}->{}", names[s], names[t])), ";");
    if !unknown.is_empty() {
        r.line(format!("unknown pairs (graph is partial): {unknown}"));
    }
    r.kv("unknown", unknown);
    r.kv("partial", a.graph.is_partial());
    connectivity(&mut r, &a.graph);
    r.line("interpretation: feasible sets compared over reachable instances (images of χ); connectivity ignores edge direction");
    r.kv("interpretation.instances", "reachable");
    r.kv("interpretation.connectivity", "weak");
    r
}

pub struct StreamFinding {
    pub source: String,
    pub target: String,
    pub witness: Option<TimeWitness>,
    pub replayed: Option<(usize, usize)>,
}

pub fn time_analysis(components: &[String], findings: &[StreamFinding], horizon: usize, graph: &DependencyGraph) -> Report {
    let mut r = Report::default();
    r.line(format!("time dependency analysis: {} components ({})", components.len(), components.join(", ")));
    r.kv("kind", "schedpack");
    r.kv("components", components.join(","));
    r.line("");
    for f in findings {
        let key = format!("stream.{}.{}", f.source, f.target);
        match &f.witness {
            Some(w) => {
                r.line(format!(
                    "{} -> {}: time dependent; upstream `{}` gives dimension {}, `{}` gives {}",
                    f.source, f.target, w.first.label, w.dimensions.0, w.second.label, w.dimensions.1
                ));
                r.kv(format!("{key}.verdict"), "time_dependent");
                r.kv(format!("{key}.witness"), format!("{};{}", w.first.label, w.second.label));
                r.kv(format!("{key}.dimensions"), format!("{},{}", w.dimensions.0, w.dimensions.1));
                let ok = f.replayed == Some(w.dimensions);
                r.line(format!("  witness replay: {}", if ok { "ok" } else { "failed" }));
                r.kv(format!("{key}.replay"), if ok { "ok" } else { "failed" });
            }
            None => {
                r.line(format!("{} -> {}: not detected", f.source, f.target));
                r.kv(format!("{key}.verdict"), "not_detected");
            }
        }
    }
    r.line("");
    r.line(format!("compressed graph over {horizon} windows:"));
    let names = graph.nodes();
    for e in graph.edges() {
        r.line(format!("  {} -> {} [{}]", names[e.source], names[e.target], e.label));
    }
    r.kv("horizon", horizon);
    r.kv("edges", edges_text(graph));
    connectivity(&mut r, graph);
    r.kv("interpretation.connectivity", "weak");
    r
}

pub fn solve(solver: &str, problem: &CompositeProblem, result: &SolveResult, lrp: Option<&LrpProblem>) -> Report {
    let names = problem.names();
    let mut r = Report::default();
    r.line(format!("solver: {solver}"));
    r.line(format!("status: {}", result.status));
    r.kv("solver", solver);
    r.kv("status", result.status);
    if let Some(j) = &result.joint {
        r.line(format!("joint: {j}"));
        r.kv("joint", j);
    }
    match result.value {
        Some(v) => {
            r.line(format!("value: {v}"));
            r.kv("value", v);
        }
        None => r.kv("value", "none"),
    }
    if let Some(values) = &result.component_values {
        for (name, v) in names.iter().zip(values) {
            r.line(format!("  {name}: {v}"));
            r.kv(format!("value.{name}"), v);
        }
    }
    if !result.violated.is_empty() {
        let v = join(result.violated.iter().map(|&k| &names[k]), ",");
        r.line(format!("violated components: {v}"));
        r.kv("violated", v);
    }
    if let (Some(lrp), Some(j)) = (lrp, &result.joint) {
        if let (Some(flp), Some(vrp)) = (lrp.decode_flp(j.get(FLP)), lrp.decode_vrp(j.get(VRP))) {
            r.line(format!("open locations: {}", join(flp.open.iter().map(|l| format!("L{l}")), " ")));
            for (slot, route) in vrp.routes.iter().enumerate() {
                let depot = flp.open[slot];
                r.line(format!("  route from L{depot}: {}", list(route.iter().map(|c| format!("C{c}")))));
            }
        }
    }
    r.line(format!("evaluations: {}", result.evaluations));
    r.kv("evaluations", result.evaluations);
    if let Some(seed) = result.seed {
        r.line(format!("seed: {seed}"));
        r.kv("seed", seed);
    }
    if !result.trace.is_empty() {
        r.kv("trace", join(&result.trace, ","));
    }
    r
}

pub fn episode(solver: &str, data: &SchedPackData, s: &EpisodeSolution) -> Report {
    let mut r = Report::default();
    let status = match s.status {
        mcdep_core::schedpack::EpisodeStatus::OptimalExhaustive => "optimal_exhaustive",
        mcdep_core::schedpack::EpisodeStatus::Heuristic => "heuristic",
        mcdep_core::schedpack::EpisodeStatus::InfeasibleNoneFound => "infeasible_none_found",
    };
    r.line(format!("solver: {solver}"));
    r.line(format!("status: {status}"));
    r.kv("solver", solver);
    r.kv("status", status);
    let mut pending = data.initial_pending();
    for (d, w) in s.episode.windows.iter().enumerate() {
        let Ok(week) = mcdep_core::schedpack::simulate_week(data, &pending, &w.schedule) else { break };
        r.line(format!(
            "window {d}: {} | finished {} | containers {}",
            w.schedule,
            list(week.finished.iter().map(|f| f.id)),
            w.plan.opened()
        ));
        r.kv(format!("window.{d}.schedule"), &w.schedule);
        r.kv(format!("window.{d}.finished"), join(week.finished.iter().map(|f| f.id), ","));
        r.kv(format!("window.{d}.containers"), w.plan.opened());
        pending = week.carryover;
    }
    match &s.value {
        Some(v) => {
            r.line(format!("value: {} (delay {}, containers {}{})", v.value, v.delay, v.containers, if v.complete { "" } else { ", incomplete" }));
            r.kv("value", v.value);
            r.kv("delay", v.delay);
            r.kv("containers", v.containers);
            r.kv("complete", v.complete);
        }
        None => r.kv("value", "none"),
    }
    r.line(format!("evaluations: {}", s.evaluations));
    r.kv("evaluations", s.evaluations);
    r
}

pub fn decision(d: &Decision, k: f64, scope: &str) -> Report {
    let mut r = Report::default();
    r.kv("k", k);
    r.kv("scope", scope);
    match d {
        Decision::Yes { witness, value } => {
            r.line(format!("answer: yes (Z = {value} ≤ {k})"));
            r.kv("answer", "yes");
            if !witness.configs().is_empty() {
                r.line(format!("witness: {witness}"));
                r.kv("witness", witness);
            }
            r.kv("value", value);
        }
        Decision::No => {
            r.line(format!("answer: no (no feasible solution with Z ≤ {k})"));
            r.kv("answer", "no");
        }
        Decision::BudgetExceeded { required, budget } => {
            r.line(format!("answer: budget_exceeded ({required} joint configurations, budget {budget})"));
            r.kv("answer", "budget_exceeded");
            r.kv("required", required);
            r.kv("budget", budget);
        }
    }
    r
}
