//! Multi-component optimisation problems and the dependencies between their
//! components.
//!
//! A [`CompositeProblem`] is a list of components, each with a bitstring
//! solution space, a χ-mapping from the other components' configurations to
//! its instance, a feasibility predicate and an objective. On top of it:
//!
//! * [`dependency`] detects and classifies instance dependencies and builds
//!   the dependency graph;
//! * [`time`] models data streams across time windows;
//! * [`solvers`] holds the exhaustive oracle and two heuristics;
//! * [`lrp`] and [`schedpack`] are the two worked problems;
//! * [`synthetic`] builds small hand-wired composites.
//!
//! Exhaustive work is split across rayon workers by default; build without
//! the `parallel` feature for a purely sequential core. Results are
//! identical either way.

pub mod dependency;
pub mod error;
pub mod lrp;
pub mod model;
pub mod par;
pub mod schedpack;
pub mod solvers;
pub mod synthetic;
pub mod time;

pub use dependency::{
    analyze, build_dependency_graph, classify_dependency, detect_instance_dependency, AnalysisOptions,
    DependencyGraph, DependencyLabel, Mode,
};
pub use error::{Error, Result};
pub use model::{Component, CompositeProblem, Context, Decision, Instance, JointSolution, SolutionConfig};
pub use solvers::{brute_force_joint, cooperative_search, solve_isolated, CoopOptions, SolveResult, SolveStatus};
