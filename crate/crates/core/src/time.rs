//! Time-windowed pipelines and time dependency.
//!
//! Components receive data streams window after window. A stream either
//! feeds its target in the same window or in the next one. `P_i` is time
//! dependent on `P_j` when the dimension of the instance `P_i` receives
//! changes with the upstream choice made for `P_j`.

use std::any::Any;
use std::fmt;
use std::sync::Arc;

use crate::dependency::{DependencyEdge, DependencyGraph, DependencyLabel};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::par;

/// Safety cap on the number of windows an episode may use.
pub const HORIZON_CAP: usize = 52;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimeWindow {
    pub index: usize,
    pub duration: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lag {
    SameWindow,
    NextWindow,
}

/// An upstream instance/solution choice, opaque to the pipeline.
#[derive(Clone)]
pub struct UpstreamChoice {
    pub label: String,
    pub data: Arc<dyn Any + Send + Sync>,
}

impl fmt::Debug for UpstreamChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// A data stream `source -> target`.
pub trait DataStream: Send + Sync {
    fn source(&self) -> usize;
    fn target(&self) -> usize;
    fn lag(&self) -> Lag;

    /// Upstream choices available in the first window, in a fixed order.
    fn upstream_choices(&self) -> Vec<UpstreamChoice>;

    /// Target instance induced by one upstream choice.
    fn payload(&self, upstream: &UpstreamChoice) -> Instance;
}

#[derive(Clone)]
pub struct TimePipeline {
    components: Vec<String>,
    streams: Vec<Arc<dyn DataStream>>,
    window_duration: u64,
    horizon_cap: usize,
}

impl fmt::Debug for TimePipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimePipeline")
            .field("components", &self.components)
            .field("streams", &self.streams.iter().map(|s| (s.source(), s.target(), s.lag())).collect::<Vec<_>>())
            .field("window_duration", &self.window_duration)
            .field("horizon_cap", &self.horizon_cap)
            .finish()
    }
}

impl TimePipeline {
    pub fn new(
        components: Vec<String>,
        streams: Vec<Arc<dyn DataStream>>,
        window_duration: u64,
        horizon_cap: usize,
    ) -> Result<Self> {
        if horizon_cap < 1 {
            return Err(Error::invalid("horizon cap must be at least 1"));
        }
        if window_duration == 0 {
            return Err(Error::invalid("window duration must be positive"));
        }
        let n = components.len();
        for s in &streams {
            if s.source() >= n || s.target() >= n {
                return Err(Error::invalid(format!("stream {} -> {} out of range", s.source(), s.target())));
            }
        }
        let pipeline = TimePipeline {
            components,
            streams,
            window_duration,
            horizon_cap,
        };
        if pipeline.same_window_cycle() {
            return Err(Error::invalid("streams within one window must be acyclic"));
        }
        Ok(pipeline)
    }

    fn same_window_cycle(&self) -> bool {
        let n = self.components.len();
        let mut indegree = vec![0usize; n];
        let same: Vec<_> = self
            .streams
            .iter()
            .filter(|s| s.lag() == Lag::SameWindow)
            .map(|s| (s.source(), s.target()))
            .collect();
        for &(_, t) in &same {
            indegree[t] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = ready.pop() {
            removed += 1;
            for &(s, t) in &same {
                if s == v {
                    indegree[t] -= 1;
                    if indegree[t] == 0 {
                        ready.push(t);
                    }
                }
            }
        }
        removed < n
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn streams(&self) -> &[Arc<dyn DataStream>] {
        &self.streams
    }

    pub fn horizon_cap(&self) -> usize {
        self.horizon_cap
    }

    pub fn windows(&self, horizon: usize) -> Vec<TimeWindow> {
        (0..horizon)
            .map(|index| TimeWindow { index, duration: self.window_duration })
            .collect()
    }

    /// Same components and cap, only the streams accepted by `keep`.
    pub fn filter_streams(&self, keep: impl Fn(usize, &dyn DataStream) -> bool) -> TimePipeline {
        TimePipeline {
            components: self.components.clone(),
            streams: self
                .streams
                .iter()
                .enumerate()
                .filter(|(k, s)| keep(*k, s.as_ref()))
                .map(|(_, s)| s.clone())
                .collect(),
            window_duration: self.window_duration,
            horizon_cap: self.horizon_cap,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TimeWitness {
    /// Index of the stream in the pipeline.
    pub stream: usize,
    pub first: UpstreamChoice,
    pub second: UpstreamChoice,
    pub dimensions: (usize, usize),
}

impl TimeWitness {
    /// Recomputes the two downstream dimensions through the stream.
    pub fn replay(&self, pipeline: &TimePipeline) -> (usize, usize) {
        let s = &pipeline.streams[self.stream];
        (
            s.payload(&self.first).dimension(),
            s.payload(&self.second).dimension(),
        )
    }
}

#[derive(Clone, Debug)]
pub enum TimeVerdict {
    TimeDependent(TimeWitness),
    NotDetected,
}

impl TimeVerdict {
    pub fn is_dependent(&self) -> bool {
        matches!(self, TimeVerdict::TimeDependent(_))
    }
}

/// Is `P_target` time dependent on `P_source`?
///
/// Only instance dimensions are compared. Without a declared stream the
/// call is an error unless `probe` is set, in which case nothing is detected.
pub fn detect_time_dependency(
    pipeline: &TimePipeline,
    target: usize,
    source: usize,
    probe: bool,
) -> Result<TimeVerdict> {
    let candidates: Vec<usize> = pipeline
        .streams
        .iter()
        .enumerate()
        .filter(|(_, s)| s.source() == source && s.target() == target)
        .map(|(k, _)| k)
        .collect();
    if candidates.is_empty() && !probe {
        return Err(Error::invalid(format!(
            "no stream declared from `{}` to `{}`",
            pipeline.components.get(source).map(String::as_str).unwrap_or("?"),
            pipeline.components.get(target).map(String::as_str).unwrap_or("?"),
        )));
    }
    for k in candidates {
        let stream = &pipeline.streams[k];
        let choices = stream.upstream_choices();
        let dims = par::map_slice(&choices, |c| stream.payload(c).dimension());
        let Some(&d0) = dims.first() else { continue };
        if let Some(pos) = dims.iter().position(|&d| d != d0) {
            return Ok(TimeVerdict::TimeDependent(TimeWitness {
                stream: k,
                first: choices[0].clone(),
                second: choices[pos].clone(),
                dimensions: (d0, dims[pos]),
            }));
        }
    }
    Ok(TimeVerdict::NotDetected)
}

/// Truncation with carryover: keeps the longest prefix of `items` accepted
/// by `fits`; the first rejected item and everything after it carry over.
pub fn truncate_with_carryover<T>(items: Vec<T>, mut fits: impl FnMut(&T) -> bool) -> (Vec<T>, Vec<T>) {
    let mut kept = Vec::new();
    let mut iter = items.into_iter();
    for item in iter.by_ref() {
        if fits(&item) {
            kept.push(item);
        } else {
            let mut carried = vec![item];
            carried.extend(iter);
            return (kept, carried);
        }
    }
    (kept, Vec::new())
}

/// `(component, window)`.
pub type WindowNode = (usize, usize);

/// One node per `(component, window)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedTimeGraph {
    components: Vec<String>,
    horizon: usize,
    /// `((component, window), (component, window))`, sorted.
    edges: Vec<(WindowNode, WindowNode)>,
}

impl ExpandedTimeGraph {
    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Nodes sorted by component, then window.
    pub fn nodes(&self) -> Vec<(usize, usize)> {
        (0..self.components.len())
            .flat_map(|c| (0..self.horizon).map(move |w| (c, w)))
            .collect()
    }

    pub fn edges(&self) -> &[(WindowNode, WindowNode)] {
        &self.edges
    }

    pub fn node_name(&self, node: (usize, usize)) -> String {
        format!("{}_{}", self.components[node.0], node.1)
    }
}

pub fn expand_time_graph(pipeline: &TimePipeline, horizon: usize) -> Result<ExpandedTimeGraph> {
    if horizon == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let mut edges = Vec::new();
    for d in 0..horizon {
        for s in &pipeline.streams {
            match s.lag() {
                Lag::SameWindow => edges.push(((s.source(), d), (s.target(), d))),
                Lag::NextWindow if d + 1 < horizon => edges.push(((s.source(), d), (s.target(), d + 1))),
                Lag::NextWindow => {}
            }
        }
    }
    edges.sort();
    edges.dedup();
    Ok(ExpandedTimeGraph {
        components: pipeline.components.clone(),
        horizon,
        edges,
    })
}

/// Quotient by component: `j -> i` (labelled `time`) iff any window-level
/// edge joins them. Self-loops are kept.
pub fn compress_time_graph(expanded: &ExpandedTimeGraph) -> DependencyGraph {
    let edges = expanded
        .edges
        .iter()
        .map(|&((s, _), (t, _))| DependencyEdge {
            source: s,
            target: t,
            label: DependencyLabel::Time,
        })
        .collect();
    DependencyGraph::new(expanded.components.clone(), edges).expect("edges index known components")
}
