//! Components, instances, solution configurations and the weighted-sum
//! composite objective.
//!
//! A [`CompositeProblem`] is an ordered list of [`Component`]s. Each component
//! owns a fixed-width bitstring solution space, a χ-mapping from the other
//! components' configurations to one of its instances, a feasibility
//! predicate and an objective. The overall objective is `Σ α_k · Z_k`, where
//! every term is evaluated on the instance induced by the rest of the joint
//! solution.

use std::any::Any;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::par;

/// Widest supported encoding; `2^width` must fit a `u64` count.
pub const MAX_WIDTH: u32 = 63;

/// Number of bits needed to index `count` distinct values.
pub fn bits_for(count: u64) -> u32 {
    if count <= 1 {
        0
    } else {
        64 - (count - 1).leading_zeros()
    }
}

/// One point of a component's solution space `S`: a fixed-width bitstring.
///
/// Bits are read most-significant first, so for equal widths the numeric
/// order of `bits` is the lexicographic order of the bitstring.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SolutionConfig {
    bits: u64,
    width: u32,
}

impl SolutionConfig {
    pub fn new(width: u32, bits: u64) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::invalid(format!(
                "encoding width {width} exceeds {MAX_WIDTH}"
            )));
        }
        if bits >> width != 0 {
            return Err(Error::invalid(format!(
                "value {bits} does not fit in {width} bits"
            )));
        }
        Ok(SolutionConfig { bits, width })
    }

    pub fn zeros(width: u32) -> Self {
        assert!(width <= MAX_WIDTH, "encoding width {width} exceeds {MAX_WIDTH}");
        SolutionConfig { bits: 0, width }
    }

    /// Parses a bitstring such as `"0110"`; `"-"` is the empty configuration.
    pub fn parse(text: &str) -> Result<Self> {
        if text == "-" {
            return Ok(SolutionConfig::zeros(0));
        }
        if text.len() as u32 > MAX_WIDTH || text.is_empty() {
            return Err(Error::invalid(format!("bad bitstring `{text}`")));
        }
        let mut bits = 0u64;
        for ch in text.chars() {
            bits = (bits << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::invalid(format!("bad bitstring `{text}`"))),
                };
        }
        SolutionConfig::new(text.len() as u32, bits)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// `|S| = 2^width`.
    pub fn space_size(width: u32) -> u64 {
        1u64 << width
    }
}

impl fmt::Display for SolutionConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.width == 0 {
            return f.write_str("-");
        }
        for pos in (0..self.width).rev() {
            f.write_str(if (self.bits >> pos) & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A component instance. Equality is byte equality of the canonical payload.
#[derive(Clone)]
pub struct Instance {
    component: usize,
    dimension: usize,
    canonical: Arc<[u8]>,
    data: Arc<dyn Any + Send + Sync>,
}

impl Instance {
    pub fn new<T: Any + Send + Sync>(dimension: usize, canonical: Vec<u8>, data: T) -> Self {
        Instance {
            component: 0,
            dimension,
            canonical: canonical.into(),
            data: Arc::new(data),
        }
    }

    pub fn component(&self) -> usize {
        self.component
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn canonical(&self) -> &[u8] {
        &self.canonical
    }

    pub fn data<T: Any>(&self) -> Option<&T> {
        self.data.downcast_ref::<T>()
    }

    pub fn with_component(mut self, component: usize) -> Self {
        self.component = component;
        self
    }
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.component == other.component && self.canonical == other.canonical
    }
}

impl Eq for Instance {}

impl Hash for Instance {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.component.hash(state);
        self.canonical.hash(state);
    }
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Instance")
            .field("component", &self.component)
            .field("dimension", &self.dimension)
            .field("canonical", &self.canonical)
            .finish()
    }
}

/// The configurations of every component other than `owner`.
///
/// Backed by a full-length joint slice; the owner's slot is never exposed.
#[derive(Clone, Copy, Debug)]
pub struct Context<'a> {
    slots: &'a [SolutionConfig],
    owner: usize,
}

impl<'a> Context<'a> {
    pub fn new(slots: &'a [SolutionConfig], owner: usize) -> Self {
        assert!(owner < slots.len(), "owner {owner} out of range");
        Context { slots, owner }
    }

    pub fn owner(&self) -> usize {
        self.owner
    }

    /// Number of components in the problem (context holds one fewer).
    pub fn components(&self) -> usize {
        self.slots.len()
    }

    pub fn get(&self, j: usize) -> SolutionConfig {
        assert!(j != self.owner, "component {j} is the context owner");
        self.slots[j]
    }

    pub fn others(&self) -> impl Iterator<Item = (usize, SolutionConfig)> + '_ {
        self.slots
            .iter()
            .copied()
            .enumerate()
            .filter(move |(j, _)| *j != self.owner)
    }

    pub(crate) fn slots(&self) -> &'a [SolutionConfig] {
        self.slots
    }
}

/// One optimisation component `P_i`.
pub trait Component: Send + Sync {
    fn name(&self) -> &str;

    /// Bitstring width `N`; the solution space has `2^N` configurations.
    fn encoding_width(&self) -> u32;

    /// Fixed instance dimension `m`; every instance produced by [`chi`](Self::chi) must have it.
    fn dimension(&self) -> usize;

    /// χ: other components' configurations to an instance of this component.
    fn chi(&self, context: &Context<'_>) -> Instance;

    /// Name of the first violated feasibility predicate, or `None` if feasible.
    fn violation(&self, instance: &Instance, solution: SolutionConfig) -> Option<&'static str>;

    /// Component objective `Z`. Only called on feasible pairs.
    fn objective(&self, instance: &Instance, solution: SolutionConfig, context: &Context<'_>) -> f64;
}

/// One configuration per component, ordered by component id.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct JointSolution {
    configs: Vec<SolutionConfig>,
}

impl JointSolution {
    pub fn new(configs: Vec<SolutionConfig>) -> Self {
        JointSolution { configs }
    }

    pub fn configs(&self) -> &[SolutionConfig] {
        &self.configs
    }

    pub fn get(&self, i: usize) -> SolutionConfig {
        self.configs[i]
    }

    pub fn with(&self, i: usize, config: SolutionConfig) -> Self {
        let mut configs = self.configs.clone();
        configs[i] = config;
        JointSolution { configs }
    }

    /// Everything except component `i`, in component order.
    pub fn context_of(&self, i: usize) -> Vec<SolutionConfig> {
        self.configs
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, c)| *c)
            .collect()
    }

    /// Parses the `|`-separated form produced by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        text.split('|')
            .map(SolutionConfig::parse)
            .collect::<Result<Vec<_>>>()
            .map(JointSolution::new)
    }
}

impl fmt::Display for JointSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.configs.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Verdict of the decision problem "is there a joint solution with `Z ≤ k`".
#[derive(Clone, Debug, PartialEq)]
pub enum Decision {
    Yes { witness: JointSolution, value: f64 },
    No,
    BudgetExceeded { required: u128, budget: u64 },
}

/// Ordered components plus weights `α`.
#[derive(Clone)]
pub struct CompositeProblem {
    components: Vec<Arc<dyn Component>>,
    weights: Vec<f64>,
}

impl fmt::Debug for CompositeProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CompositeProblem")
            .field("components", &self.names())
            .field("weights", &self.weights)
            .finish()
    }
}

impl CompositeProblem {
    pub fn new(components: Vec<Arc<dyn Component>>, weights: Vec<f64>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::invalid(format!(
                "a composite problem needs at least 2 components, got {}",
                components.len()
            )));
        }
        if weights.len() != components.len() {
            return Err(Error::invalid(format!(
                "{} weights for {} components",
                weights.len(),
                components.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::invalid(format!("weight {w} is not finite")));
        }
        if let Some(c) = components.iter().find(|c| c.encoding_width() > MAX_WIDTH) {
            return Err(Error::invalid(format!(
                "component `{}` has width {} > {MAX_WIDTH}",
                c.name(),
                c.encoding_width()
            )));
        }
        Ok(CompositeProblem { components, weights })
    }

    /// All `α_k = 1`.
    pub fn with_unit_weights(components: Vec<Arc<dyn Component>>) -> Result<Self> {
        let n = components.len();
        CompositeProblem::new(components, vec![1.0; n])
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &Arc<dyn Component> {
        &self.components[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn names(&self) -> Vec<String> {
        self.components.iter().map(|c| c.name().to_string()).collect()
    }

    pub fn width(&self, i: usize) -> u32 {
        self.components[i].encoding_width()
    }

    pub fn space_size(&self, i: usize) -> u64 {
        SolutionConfig::space_size(self.width(i))
    }

    /// `|S_1 × … × S_n|`, saturating.
    pub fn joint_space_size(&self) -> u128 {
        let total: u32 = self.components.iter().map(|c| c.encoding_width()).sum();
        if total >= 128 {
            u128::MAX
        } else {
            1u128 << total
        }
    }

    pub fn config(&self, i: usize, bits: u64) -> Result<SolutionConfig> {
        SolutionConfig::new(self.width(i), bits)
    }

    /// The all-zeros joint solution.
    pub fn zero_joint(&self) -> JointSolution {
        JointSolution::new(
            (0..self.n())
                .map(|i| SolutionConfig::zeros(self.width(i)))
                .collect(),
        )
    }

    pub fn check_joint(&self, joint: &JointSolution) -> Result<()> {
        if joint.configs().len() != self.n() {
            return Err(Error::invalid(format!(
                "joint solution has {} configs for {} components",
                joint.configs().len(),
                self.n()
            )));
        }
        for (i, c) in joint.configs().iter().enumerate() {
            if c.width() != self.width(i) {
                return Err(Error::invalid(format!(
                    "config for `{}` has width {}, expected {}",
                    self.components[i].name(),
                    c.width(),
                    self.width(i)
                )));
            }
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::invalid(format!(
                "component index {i} out of range 0..{}",
                self.n()
            )));
        }
        Ok(())
    }

    /// Expands an `n − 1` context for component `i` into a full joint slice.
    fn expand_context(&self, i: usize, context: &[SolutionConfig]) -> Result<Vec<SolutionConfig>> {
        self.check_index(i)?;
        if context.len() + 1 != self.n() {
            return Err(Error::invalid(format!(
                "context for component {i} needs {} entries, got {}",
                self.n() - 1,
                context.len()
            )));
        }
        let mut slots = Vec::with_capacity(self.n());
        let mut it = context.iter();
        for j in 0..self.n() {
            if j == i {
                slots.push(SolutionConfig::zeros(self.width(i)));
                continue;
            }
            let c = *it.next().expect("arity checked");
            if c.width() != self.width(j) {
                return Err(Error::invalid(format!(
                    "context entry for `{}` has width {}, expected {}",
                    self.components[j].name(),
                    c.width(),
                    self.width(j)
                )));
            }
            slots.push(c);
        }
        Ok(slots)
    }

    /// χ of component `i` for an `n − 1` context (other components in id order).
    pub fn map_instance(&self, i: usize, context: &[SolutionConfig]) -> Result<Instance> {
        let slots = self.expand_context(i, context)?;
        self.instance_at(i, &slots)
    }

    /// χ of component `i`, reading the context out of a full joint slice.
    pub fn instance_at(&self, i: usize, slots: &[SolutionConfig]) -> Result<Instance> {
        let component = &self.components[i];
        let instance = component
            .chi(&Context::new(slots, i))
            .with_component(i);
        if instance.dimension() != component.dimension() {
            return Err(Error::model(format!(
                "χ of `{}` produced dimension {}, declared {}",
                component.name(),
                instance.dimension(),
                component.dimension()
            )));
        }
        Ok(instance)
    }

    pub fn violation(&self, i: usize, instance: &Instance, s: SolutionConfig) -> Option<&'static str> {
        if s.width() != self.width(i) {
            return Some("encoding-width");
        }
        self.components[i].violation(instance, s)
    }

    pub fn is_feasible(&self, i: usize, instance: &Instance, s: SolutionConfig) -> bool {
        self.violation(i, instance, s).is_none()
    }

    /// `Z_i(x, s, context)` for an `n − 1` context.
    pub fn evaluate_component(
        &self,
        i: usize,
        instance: &Instance,
        s: SolutionConfig,
        context: &[SolutionConfig],
    ) -> Result<f64> {
        let mut slots = self.expand_context(i, context)?;
        if s.width() != self.width(i) {
            return Err(Error::invalid(format!(
                "config width {} for `{}`, expected {}",
                s.width(),
                self.components[i].name(),
                self.width(i)
            )));
        }
        slots[i] = s;
        self.component_value(i, instance, &slots)
    }

    fn component_value(&self, i: usize, instance: &Instance, slots: &[SolutionConfig]) -> Result<f64> {
        if instance.component() != i {
            return Err(Error::invalid(format!(
                "instance belongs to component {}, not {i}",
                instance.component()
            )));
        }
        if let Some(predicate) = self.violation(i, instance, slots[i]) {
            return Err(Error::Infeasible { component: i, predicate });
        }
        let z = self.components[i].objective(instance, slots[i], &Context::new(slots, i));
        if !z.is_finite() {
            return Err(Error::model(format!(
                "objective of `{}` returned {z}",
                self.components[i].name()
            )));
        }
        Ok(z)
    }

    /// Unweighted component values `Z_k` of a jointly feasible solution.
    pub fn component_values(&self, joint: &JointSolution) -> Result<Vec<f64>> {
        self.check_joint(joint)?;
        let slots = joint.configs();
        let instances = (0..self.n())
            .map(|k| self.instance_at(k, slots))
            .collect::<Result<Vec<_>>>()?;
        self.require_feasible(&instances, slots)?;
        instances
            .iter()
            .enumerate()
            .map(|(k, x)| self.component_value(k, x, slots))
            .collect()
    }

    fn require_feasible(&self, instances: &[Instance], slots: &[SolutionConfig]) -> Result<()> {
        let bad: Vec<usize> = (0..self.n())
            .filter(|&k| !self.is_feasible(k, &instances[k], slots[k]))
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InfeasibleJoint { components: bad })
        }
    }

    /// `Z = Σ α_k Z_k`. Infeasible joints are rejected, not penalised.
    pub fn evaluate_overall(&self, joint: &JointSolution) -> Result<f64> {
        self.check_joint(joint)?;
        let slots = joint.configs();
        let instances = (0..self.n())
            .map(|k| self.instance_at(k, slots))
            .collect::<Result<Vec<_>>>()?;
        self.require_feasible(&instances, slots)?;
        self.weighted_sum(&instances, slots)
    }

    fn weighted_sum(&self, instances: &[Instance], slots: &[SolutionConfig]) -> Result<f64> {
        let mut total = 0.0;
        for (k, alpha) in self.weights.iter().enumerate() {
            // zero-weight terms drop out entirely
            if *alpha != 0.0 {
                total += alpha * self.component_value(k, &instances[k], slots)?;
            }
        }
        Ok(total)
    }

    /// Copy with `α_i = 1` and every other weight zero.
    pub fn reduce_to_component(&self, i: usize) -> Result<Self> {
        self.check_index(i)?;
        let weights = (0..self.n()).map(|k| if k == i { 1.0 } else { 0.0 }).collect();
        self.with_weights(weights)
    }

    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        CompositeProblem::new(self.components.clone(), weights)
    }

    /// Reorders components: position `p` of the result holds old component `perm[p]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::invalid(format!("{perm:?} is not a permutation of 0..{n}")));
        }
        let components = perm
            .iter()
            .map(|&old| {
                Arc::new(Permuted {
                    inner: self.components[old].clone(),
                    to_old: perm.to_vec(),
                    old_owner: old,
                }) as Arc<dyn Component>
            })
            .collect();
        let weights = perm.iter().map(|&old| self.weights[old]).collect();
        CompositeProblem::new(components, weights)
    }

    /// Decision version: is there a feasible joint solution with `Z ≤ k`?
    ///
    /// A `Yes` carries the lexicographically first witness. `No` is only
    /// returned after exhausting the joint space.
    pub fn decide(&self, k: f64, budget: u64) -> Result<Decision> {
        if k.is_nan() {
            return Err(Error::invalid("threshold k is NaN"));
        }
        let required = self.joint_space_size();
        if required > budget as u128 {
            return Ok(Decision::BudgetExceeded { required, budget });
        }
        let scan = JointScan::new(self);
        let hit = par::find_map_first(scan.prefix_count(), |prefix| {
            let mut found = None;
            let outcome = scan.visit_prefix(prefix, |joint, value| {
                if value <= k {
                    found = Some((joint.clone(), value));
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            match outcome {
                Err(e) => Some(Err(e)),
                Ok(()) => found.map(Ok),
            }
        });
        match hit {
            None => Ok(Decision::No),
            Some(Err(e)) => Err(e),
            Some(Ok((witness, value))) => Ok(Decision::Yes { witness, value }),
        }
    }
}

/// Adapter that presents a component under a reordered problem.
struct Permuted {
    inner: Arc<dyn Component>,
    /// new index -> old index
    to_old: Vec<usize>,
    old_owner: usize,
}

impl Permuted {
    fn old_slots(&self, context: &Context<'_>) -> Vec<SolutionConfig> {
        let mut old = context.slots().to_vec();
        for (new, &o) in self.to_old.iter().enumerate() {
            old[o] = context.slots()[new];
        }
        old
    }
}

impl Component for Permuted {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn encoding_width(&self) -> u32 {
        self.inner.encoding_width()
    }

    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn chi(&self, context: &Context<'_>) -> Instance {
        let old = self.old_slots(context);
        self.inner.chi(&Context::new(&old, self.old_owner))
    }

    fn violation(&self, instance: &Instance, solution: SolutionConfig) -> Option<&'static str> {
        self.inner.violation(instance, solution)
    }

    fn objective(&self, instance: &Instance, solution: SolutionConfig, context: &Context<'_>) -> f64 {
        let old = self.old_slots(context);
        self.inner
            .objective(instance, solution, &Context::new(&old, self.old_owner))
    }
}

/// Exhaustive walk over the joint space, split into independent prefixes.
///
/// A prefix fixes components `0..n-1`; the last component's instance depends
/// only on the prefix, so it is mapped once and its configurations are
/// filtered against it before any other χ is evaluated.
pub(crate) struct JointScan<'p> {
    problem: &'p CompositeProblem,
    last: usize,
}

impl<'p> JointScan<'p> {
    pub(crate) fn new(problem: &'p CompositeProblem) -> Self {
        JointScan {
            problem,
            last: problem.n() - 1,
        }
    }

    pub(crate) fn prefix_count(&self) -> u64 {
        (0..self.last)
            .map(|i| self.problem.space_size(i))
            .product()
    }

    fn prefix_slots(&self, prefix: u64) -> Vec<SolutionConfig> {
        let p = self.problem;
        let mut slots = vec![SolutionConfig::zeros(0); p.n()];
        let mut rest = prefix;
        for i in (0..self.last).rev() {
            let w = p.width(i);
            slots[i] = SolutionConfig::zeros(w);
            slots[i].bits = rest & ((1u64 << w) - 1);
            rest >>= w;
        }
        slots[self.last] = SolutionConfig::zeros(p.width(self.last));
        slots
    }

    /// Calls `visit` for every feasible joint solution with this prefix, in
    /// lexicographic order.
    pub(crate) fn visit_prefix<F>(&self, prefix: u64, mut visit: F) -> Result<()>
    where
        F: FnMut(&JointSolution, f64) -> ControlFlow<()>,
    {
        let p = self.problem;
        let mut slots = self.prefix_slots(prefix);
        let last_instance = p.instance_at(self.last, &slots)?;
        let mut instances = Vec::with_capacity(p.n());
        for bits in 0..p.space_size(self.last) {
            slots[self.last].bits = bits;
            if !p.is_feasible(self.last, &last_instance, slots[self.last]) {
                continue;
            }
            instances.clear();
            let mut feasible = true;
            for k in 0..self.last {
                let x = p.instance_at(k, &slots)?;
                if !p.is_feasible(k, &x, slots[k]) {
                    feasible = false;
                    break;
                }
                instances.push(x);
            }
            if !feasible {
                continue;
            }
            instances.push(last_instance.clone());
            let value = p.weighted_sum(&instances, &slots)?;
            if visit(&JointSolution::new(slots.clone()), value).is_break() {
                break;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Fixed {
        name: &'static str,
        width: u32,
    }

    impl Component for Fixed {
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
            let other: Vec<u8> = context.others().flat_map(|(_, c)| c.bits().to_le_bytes()).collect();
            Instance::new(1, other, ())
        }
        fn violation(&self, _: &Instance, s: SolutionConfig) -> Option<&'static str> {
            (s.bits() == 3).then_some("not-three")
        }
        fn objective(&self, _: &Instance, s: SolutionConfig, _: &Context<'_>) -> f64 {
            s.bits() as f64
        }
    }

    fn pair() -> CompositeProblem {
        CompositeProblem::with_unit_weights(vec![
            Arc::new(Fixed { name: "A", width: 2 }),
            Arc::new(Fixed { name: "B", width: 2 }),
        ])
        .unwrap()
    }

    #[test]
    fn bits_for_counts() {
        assert_eq!(bits_for(0), 0);
        assert_eq!(bits_for(1), 0);
        assert_eq!(bits_for(2), 1);
        assert_eq!(bits_for(6), 3);
        assert_eq!(bits_for(8), 3);
        assert_eq!(bits_for(9), 4);
        assert_eq!(bits_for(120), 7);
    }

    #[test]
    fn config_display_and_parse() {
        let c = SolutionConfig::new(5, 0b00110).unwrap();
        assert_eq!(c.to_string(), "00110");
        assert_eq!(SolutionConfig::parse("00110").unwrap(), c);
        assert_eq!(SolutionConfig::zeros(0).to_string(), "-");
        assert_eq!(SolutionConfig::parse("-").unwrap(), SolutionConfig::zeros(0));
        assert!(SolutionConfig::new(2, 4).is_err());
        assert!(SolutionConfig::parse("012").is_err());
        let j = JointSolution::new(vec![c, SolutionConfig::zeros(0)]);
        assert_eq!(JointSolution::parse(&j.to_string()).unwrap(), j);
    }

    #[test]
    fn context_arity_and_width_are_checked() {
        let p = pair();
        assert!(matches!(p.map_instance(0, &[]), Err(Error::InvalidArgument(_))));
        let wrong = SolutionConfig::zeros(3);
        assert!(matches!(p.map_instance(0, &[wrong]), Err(Error::InvalidArgument(_))));
        assert!(p.map_instance(0, &[SolutionConfig::zeros(2)]).is_ok());
        assert!(matches!(p.map_instance(7, &[SolutionConfig::zeros(2)]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn infeasible_component_names_predicate() {
        let p = pair();
        let ctx = [SolutionConfig::zeros(2)];
        let x = p.map_instance(0, &ctx).unwrap();
        let err = p
            .evaluate_component(0, &x, SolutionConfig::new(2, 3).unwrap(), &ctx)
            .unwrap_err();
        assert_eq!(err, Error::Infeasible { component: 0, predicate: "not-three" });
    }

    #[test]
    fn infeasible_joint_lists_all_offenders() {
        let p = pair();
        let three = SolutionConfig::new(2, 3).unwrap();
        let err = p.evaluate_overall(&JointSolution::new(vec![three, three])).unwrap_err();
        assert_eq!(err, Error::InfeasibleJoint { components: vec![0, 1] });
    }

    #[test]
    fn too_few_components_rejected() {
        let err = CompositeProblem::with_unit_weights(vec![Arc::new(Fixed { name: "A", width: 1 })]);
        assert!(err.is_err());
        let nan = CompositeProblem::new(
            vec![Arc::new(Fixed { name: "A", width: 1 }), Arc::new(Fixed { name: "B", width: 1 })],
            vec![1.0, f64::NAN],
        );
        assert!(nan.is_err());
    }

    #[test]
    fn decide_finds_lexicographically_first_witness() {
        let p = pair();
        match p.decide(1.0, 1 << 10).unwrap() {
            Decision::Yes { witness, value } => {
                assert_eq!(witness.to_string(), "00|00");
                assert_eq!(value, 0.0);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(p.decide(-0.5, 1 << 10).unwrap(), Decision::No);
        assert!(matches!(p.decide(1.0, 8).unwrap(), Decision::BudgetExceeded { required: 16, .. }));
        assert!(p.decide(f64::NAN, 1 << 10).is_err());
    }

    #[test]
    fn permutation_rejects_non_permutations() {
        let p = pair();
        assert!(p.permuted(&[0, 0]).is_err());
        assert!(p.permuted(&[0]).is_err());
        assert_eq!(p.permuted(&[1, 0]).unwrap().names(), vec!["B", "A"]);
    }
}
