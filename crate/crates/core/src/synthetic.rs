//! Small hand-wired composites for exercising the analyzer and solvers.
//!
//! Each component has a cost table over its configurations. A link
//! `source -> target` copies the source configuration into the target's
//! instance:
//!
//! * `feasibility` links forbid the target from taking the same value as the
//!   source (`s_target != s_source`);
//! * `fitness` links add `|s_target - s_source|` to the target's objective.
//!
//! A component without incoming links has a constant χ.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{Component, CompositeProblem, Context, Instance, SolutionConfig, MAX_WIDTH};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinkKind {
    Fitness,
    Feasibility,
}

impl LinkKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            LinkKind::Fitness => "fitness",
            LinkKind::Feasibility => "feasibility",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticComponent {
    pub name: String,
    pub width: u32,
    /// `2^width` costs, or `None` for `cost(s) = s`.
    pub costs: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Link {
    pub source: usize,
    pub target: usize,
    pub kind: LinkKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticSpec {
    pub components: Vec<SyntheticComponent>,
    pub links: Vec<Link>,
    pub alpha: Option<Vec<f64>>,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.components.len();
        for c in &self.components {
            if c.width > MAX_WIDTH {
                return Err(Error::invalid(format!("component `{}` width {} > {MAX_WIDTH}", c.name, c.width)));
            }
            if let Some(costs) = &c.costs {
                if costs.len() as u64 != SolutionConfig::space_size(c.width) {
                    return Err(Error::invalid(format!(
                        "component `{}` needs {} costs, got {}",
                        c.name,
                        SolutionConfig::space_size(c.width),
                        costs.len()
                    )));
                }
                if costs.iter().any(|v| !v.is_finite()) {
                    return Err(Error::invalid(format!("component `{}` has a non-finite cost", c.name)));
                }
            }
        }
        for l in &self.links {
            if l.source >= n || l.target >= n {
                return Err(Error::invalid(format!("link {} -> {} out of range", l.source, l.target)));
            }
            if l.source == l.target {
                return Err(Error::invalid(format!("self-link on component {}", l.source)));
            }
        }
        if let Some(a) = &self.alpha {
            if a.len() != n {
                return Err(Error::invalid(format!("{} alpha weights for {n} components", a.len())));
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<CompositeProblem> {
        self.validate()?;
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut incoming: Vec<(usize, LinkKind)> = self
                    .links
                    .iter()
                    .filter(|l| l.target == i)
                    .map(|l| (l.source, l.kind))
                    .collect();
                incoming.sort();
                incoming.dedup();
                Arc::new(Linked {
                    spec: c.clone(),
                    incoming,
                }) as Arc<dyn Component>
            })
            .collect();
        let weights = self.alpha.clone().unwrap_or_else(|| vec![1.0; self.components.len()]);
        CompositeProblem::new(components, weights)
    }
}

/// Builds a spec from `(name, width)` pairs with default costs.
pub fn spec(components: &[(&str, u32)], links: &[(usize, usize, LinkKind)]) -> SyntheticSpec {
    SyntheticSpec {
        components: components
            .iter()
            .map(|(n, w)| SyntheticComponent { name: n.to_string(), width: *w, costs: None })
            .collect(),
        links: links
            .iter()
            .map(|&(source, target, kind)| Link { source, target, kind })
            .collect(),
        alpha: None,
    }
}

struct Linked {
    spec: SyntheticComponent,
    incoming: Vec<(usize, LinkKind)>,
}

/// Instance payload: the linked source values.
struct LinkedInstance {
    values: Vec<(LinkKind, u64)>,
}

impl Component for Linked {
    fn name(&self) -> &str {
        &self.spec.name
    }

    fn encoding_width(&self) -> u32 {
        self.spec.width
    }

    fn dimension(&self) -> usize {
        1
    }

    fn chi(&self, context: &Context<'_>) -> Instance {
        let mut bytes = Vec::new();
        let values = self
            .incoming
            .iter()
            .map(|&(source, kind)| {
                let v = context.get(source).bits();
                bytes.extend((source as u32).to_le_bytes());
                bytes.push(kind as u8);
                bytes.extend(v.to_le_bytes());
                (kind, v)
            })
            .collect();
        Instance::new(1, bytes, LinkedInstance { values })
    }

    fn violation(&self, instance: &Instance, s: SolutionConfig) -> Option<&'static str> {
        let Some(x) = instance.data::<LinkedInstance>() else {
            return Some("instance-kind");
        };
        x.values
            .iter()
            .any(|&(kind, v)| kind == LinkKind::Feasibility && v == s.bits())
            .then_some("link-exclusion")
    }

    fn objective(&self, instance: &Instance, s: SolutionConfig, _: &Context<'_>) -> f64 {
        let base = match &self.spec.costs {
            Some(costs) => costs[s.bits() as usize],
            None => s.bits() as f64,
        };
        let x = instance.data::<LinkedInstance>().expect("linked instance");
        base + x
            .values
            .iter()
            .filter(|(kind, _)| *kind == LinkKind::Fitness)
            .map(|&(_, v)| (s.bits() as f64 - v as f64).abs())
            .sum::<f64>()
    }
}
