//! Weekly job-shop scheduling feeding container packing.
//!
//! Every window (a week) a schedule dispatches operations of pending items
//! onto machines. Items whose last operation completes inside the window are
//! finished and packed into rented containers; the rest carry over with
//! their completed operations. The episode objective is
//! `α_delay · delay + α_rent · rent · containers`, where `delay` is the index
//! of the last window that finished something, plus one.
//!
//! Two streams couple the components: JSSP → BPP within a window (finished
//! items become the packing instance) and JSSP → JSSP across windows
//! (carryover becomes next week's scheduling instance). Both change the
//! dimension of the downstream instance.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{bits_for, Component, CompositeProblem, Context, Instance, SolutionConfig};
use crate::time::{truncate_with_carryover, DataStream, Lag, TimePipeline, UpstreamChoice, HORIZON_CAP};

pub const JSSP: usize = 0;
pub const BPP: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Operation {
    pub machine: usize,
    pub hours: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    pub volume: u64,
    pub operations: Vec<Operation>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchedPackData {
    pub machines: usize,
    pub week_hours: u64,
    pub products: Vec<Product>,
    /// Item count per product.
    pub demand: Vec<u64>,
    pub capacity: u64,
    pub rent: f64,
    /// `[delay, rent]`; `None` means unit weights.
    pub alpha: Option<[f64; 2]>,
}

impl SchedPackData {
    pub fn validate(&self) -> Result<()> {
        if self.machines == 0 {
            return Err(Error::invalid("at least one machine is required"));
        }
        if self.week_hours == 0 {
            return Err(Error::invalid("week_hours must be positive"));
        }
        if self.demand.len() != self.products.len() {
            return Err(Error::invalid(format!(
                "demand lists {} products, {} declared",
                self.demand.len(),
                self.products.len()
            )));
        }
        for (p, product) in self.products.iter().enumerate() {
            if product.volume == 0 {
                return Err(Error::invalid(format!("product {p} volume must be positive")));
            }
            if product.operations.is_empty() {
                return Err(Error::invalid(format!("product {p} has no operations")));
            }
            for op in &product.operations {
                if op.machine >= self.machines {
                    return Err(Error::invalid(format!(
                        "product {p} uses machine {} but only {} machines exist",
                        op.machine, self.machines
                    )));
                }
                if op.hours == 0 {
                    return Err(Error::invalid(format!("product {p} has a zero-duration operation")));
                }
            }
        }
        let max_volume = self.products.iter().map(|p| p.volume).max().unwrap_or(0);
        if self.capacity < max_volume {
            return Err(Error::invalid(format!(
                "container capacity {} is below the largest product volume {max_volume}",
                self.capacity
            )));
        }
        if !(self.rent.is_finite() && self.rent >= 0.0) {
            return Err(Error::invalid("rent must be finite and ≥ 0"));
        }
        if let Some([a, b]) = self.alpha {
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::invalid("alpha weights must be finite"));
            }
        }
        Ok(())
    }

    /// Two machines, 8-hour weeks; product A (volume 3) runs 2h on machine 0
    /// then 1h on machine 1; product B (volume 5) runs 2h on machine 1 then
    /// 2h on machine 0. Demand 3 A + 2 B; containers hold 10 and rent for 7.
    pub fn fixture_t1() -> Self {
        let op = |machine, hours| Operation { machine, hours };
        SchedPackData {
            machines: 2,
            week_hours: 8,
            products: vec![
                Product { volume: 3, operations: vec![op(0, 2), op(1, 1)] },
                Product { volume: 5, operations: vec![op(1, 2), op(0, 2)] },
            ],
            demand: vec![3, 2],
            capacity: 10,
            rent: 7.0,
            alpha: None,
        }
    }

    /// Small random instance where every operation fits in one window.
    pub fn generate(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let machines = rng.gen_range(1..=3);
        let week_hours = rng.gen_range(4..=10);
        let products: Vec<Product> = (0..rng.gen_range(1..=3))
            .map(|_| Product {
                volume: rng.gen_range(1..=6),
                operations: (0..rng.gen_range(1..=3))
                    .map(|_| Operation {
                        machine: rng.gen_range(0..machines),
                        hours: rng.gen_range(1..=week_hours.min(4)),
                    })
                    .collect(),
            })
            .collect();
        let demand = products.iter().map(|_| rng.gen_range(0..=4)).collect();
        let capacity = rng.gen_range(6..=12);
        SchedPackData {
            machines,
            week_hours,
            products,
            demand,
            capacity,
            rent: rng.gen_range(1..=10) as f64,
            alpha: None,
        }
    }

    /// One pending item per demanded unit, product by product.
    pub fn initial_pending(&self) -> Vec<PendingItem> {
        let mut id = 0;
        let mut out = Vec::new();
        for (product, &count) in self.demand.iter().enumerate() {
            for _ in 0..count {
                out.push(PendingItem { id, product, next_op: 0 });
                id += 1;
            }
        }
        out
    }

    fn weights(&self) -> [f64; 2] {
        self.alpha.unwrap_or([1.0, 1.0])
    }

    /// Operations still to run for `pending`.
    pub fn remaining_ops(&self, pending: &[PendingItem]) -> usize {
        pending
            .iter()
            .map(|p| self.products[p.product].operations.len() - p.next_op)
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PendingItem {
    pub id: usize,
    pub product: usize,
    /// Index of the first operation not yet completed.
    pub next_op: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FinishedItem {
    pub id: usize,
    pub product: usize,
    pub volume: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpRef {
    pub item: usize,
    pub op: usize,
}

/// Dispatch list per machine for one window.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct WeekSchedule {
    pub machines: Vec<Vec<OpRef>>,
}

impl WeekSchedule {
    pub fn idle(machines: usize) -> Self {
        WeekSchedule { machines: vec![Vec::new(); machines] }
    }
}

impl fmt::Display for WeekSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, list) in self.machines.iter().enumerate() {
            if m > 0 {
                f.write_str(" ")?;
            }
            write!(f, "M{m}[")?;
            for (k, o) in list.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}.{}", o.item, o.op)?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

/// Container index per finished item, in finished order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PackingPlan {
    pub containers: Vec<usize>,
}

impl PackingPlan {
    pub fn opened(&self) -> usize {
        self.containers.iter().collect::<HashSet<_>>().len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeekResult {
    pub finished: Vec<FinishedItem>,
    pub carryover: Vec<PendingItem>,
    /// `(operation, start, end)` in dispatch order.
    pub timings: Vec<(OpRef, u64, u64)>,
}

fn schedule_error(predicate: &'static str) -> Error {
    Error::Infeasible { component: JSSP, predicate }
}

/// Runs one window. Operations start as soon as both their machine and
/// their item are free; every operation must end within `week_hours`.
pub fn simulate_week(data: &SchedPackData, pending: &[PendingItem], schedule: &WeekSchedule) -> Result<WeekResult> {
    if schedule.machines.len() != data.machines {
        return Err(schedule_error("machine-count"));
    }
    let index: HashMap<usize, usize> = pending.iter().enumerate().map(|(k, p)| (p.id, k)).collect();
    let mut scheduled: Vec<Vec<usize>> = vec![Vec::new(); pending.len()];
    let mut seen = HashSet::new();
    for (m, list) in schedule.machines.iter().enumerate() {
        for o in list {
            let Some(&k) = index.get(&o.item) else {
                return Err(schedule_error("unknown-operation"));
            };
            let ops = &data.products[pending[k].product].operations;
            if o.op >= ops.len() || o.op < pending[k].next_op {
                return Err(schedule_error("unknown-operation"));
            }
            if ops[o.op].machine != m {
                return Err(schedule_error("machine-mismatch"));
            }
            if !seen.insert(*o) {
                return Err(schedule_error("duplicate-operation"));
            }
            scheduled[k].push(o.op);
        }
    }
    for (k, ops) in scheduled.iter_mut().enumerate() {
        ops.sort_unstable();
        if ops.iter().enumerate().any(|(n, &op)| op != pending[k].next_op + n) {
            return Err(schedule_error("operation-order"));
        }
    }

    let mut progress: Vec<usize> = pending.iter().map(|p| p.next_op).collect();
    let mut ready = vec![0u64; pending.len()];
    let mut free = vec![0u64; data.machines];
    let mut head = vec![0usize; data.machines];
    let mut timings = Vec::new();
    loop {
        let mut advanced = false;
        let mut done = true;
        for m in 0..data.machines {
            while let Some(o) = schedule.machines[m].get(head[m]) {
                let k = index[&o.item];
                if progress[k] != o.op {
                    break;
                }
                let hours = data.products[pending[k].product].operations[o.op].hours;
                let start = free[m].max(ready[k]);
                let end = start + hours;
                if end > data.week_hours {
                    return Err(schedule_error("machine-capacity"));
                }
                free[m] = end;
                ready[k] = end;
                progress[k] += 1;
                head[m] += 1;
                timings.push((*o, start, end));
                advanced = true;
            }
            done &= head[m] == schedule.machines[m].len();
        }
        if done {
            break;
        }
        if !advanced {
            return Err(schedule_error("operation-order"));
        }
    }

    let mut finished = Vec::new();
    let mut carryover = Vec::new();
    for (k, p) in pending.iter().enumerate() {
        let product = &data.products[p.product];
        if progress[k] == product.operations.len() {
            finished.push(FinishedItem { id: p.id, product: p.product, volume: product.volume });
        } else {
            carryover.push(PendingItem { next_op: progress[k], ..*p });
        }
    }
    Ok(WeekResult { finished, carryover, timings })
}

/// Downstream BPP dimension: the number of finished items.
pub fn bpp_dimension(finished: &[FinishedItem]) -> usize {
    finished.len()
}

/// Checks a packing plan and returns the number of containers it opens.
pub fn check_packing(data: &SchedPackData, finished: &[FinishedItem], plan: &PackingPlan) -> Result<usize> {
    if plan.containers.len() != finished.len() {
        return Err(Error::Infeasible { component: BPP, predicate: "packing-coverage" });
    }
    let mut loads: HashMap<usize, u64> = HashMap::new();
    for (item, &c) in finished.iter().zip(&plan.containers) {
        *loads.entry(c).or_default() += item.volume;
    }
    if loads.values().any(|&l| l > data.capacity) {
        return Err(Error::Infeasible { component: BPP, predicate: "container-capacity" });
    }
    Ok(loads.len())
}

/// Minimum number of containers, with an assignment achieving it.
pub fn min_containers(volumes: &[u64], capacity: u64) -> (usize, Vec<usize>) {
    let mut order: Vec<usize> = (0..volumes.len()).collect();
    order.sort_by(|&a, &b| volumes[b].cmp(&volumes[a]).then(a.cmp(&b)));

    struct Search<'a> {
        volumes: &'a [u64],
        order: Vec<usize>,
        capacity: u64,
        loads: Vec<u64>,
        assign: Vec<usize>,
        best: usize,
        best_assign: Vec<usize>,
    }

    impl Search<'_> {
        fn run(&mut self, depth: usize) {
            if self.loads.len() >= self.best {
                return;
            }
            if depth == self.order.len() {
                self.best = self.loads.len();
                self.best_assign = self.assign.clone();
                return;
            }
            let item = self.order[depth];
            let v = self.volumes[item];
            for b in 0..self.loads.len() {
                if self.loads[b] + v <= self.capacity {
                    self.loads[b] += v;
                    self.assign[item] = b;
                    self.run(depth + 1);
                    self.loads[b] -= v;
                }
            }
            self.loads.push(v);
            self.assign[item] = self.loads.len() - 1;
            self.run(depth + 1);
            self.loads.pop();
        }
    }

    let mut s = Search {
        volumes,
        order,
        capacity,
        loads: Vec::new(),
        assign: vec![0; volumes.len()],
        best: volumes.len() + 1,
        best_assign: Vec::new(),
    };
    s.run(0);
    if volumes.is_empty() {
        return (0, Vec::new());
    }
    (s.best, s.best_assign)
}

/// First-fit in the given order.
pub fn first_fit(volumes: &[u64], capacity: u64) -> Vec<usize> {
    let mut loads: Vec<u64> = Vec::new();
    volumes
        .iter()
        .map(|&v| match loads.iter().position(|&l| l + v <= capacity) {
            Some(b) => {
                loads[b] += v;
                b
            }
            None => {
                loads.push(v);
                loads.len() - 1
            }
        })
        .collect()
}

/// A week outcome together with one schedule that realises it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeekOutcome {
    pub schedule: WeekSchedule,
    pub finished: Vec<FinishedItem>,
    pub carryover: Vec<PendingItem>,
}

/// Every distinct outcome reachable in one window from `pending`, up to
/// relabelling of interchangeable items, in depth-first discovery order.
/// The idle schedule comes first.
pub fn enumerate_week_outcomes(data: &SchedPackData, pending: &[PendingItem]) -> Vec<WeekOutcome> {
    #[derive(Clone)]
    struct State {
        free: Vec<u64>,
        progress: Vec<usize>,
        ready: Vec<u64>,
        lists: Vec<Vec<OpRef>>,
    }

    type Key = (Vec<u64>, Vec<(usize, usize, usize, u64)>);
    let key = |s: &State| -> Key {
        let mut items: Vec<_> = pending
            .iter()
            .enumerate()
            .map(|(k, p)| (p.product, p.next_op, s.progress[k], s.ready[k]))
            .collect();
        items.sort_unstable();
        (s.free.clone(), items)
    };

    let mut outcomes = Vec::new();
    let mut seen_outcomes = HashSet::new();
    let mut visited = HashSet::new();
    let root = State {
        free: vec![0; data.machines],
        progress: pending.iter().map(|p| p.next_op).collect(),
        ready: vec![0; pending.len()],
        lists: vec![Vec::new(); data.machines],
    };
    visited.insert(key(&root));
    let mut stack = vec![root];
    while let Some(s) = stack.pop() {
        let mut finished = Vec::new();
        let mut carryover = Vec::new();
        for (k, p) in pending.iter().enumerate() {
            let product = &data.products[p.product];
            if s.progress[k] == product.operations.len() {
                finished.push(FinishedItem { id: p.id, product: p.product, volume: product.volume });
            } else {
                carryover.push(PendingItem { next_op: s.progress[k], ..*p });
            }
        }
        if seen_outcomes.insert((finished.clone(), carryover.clone())) {
            outcomes.push(WeekOutcome {
                schedule: WeekSchedule { machines: s.lists.clone() },
                finished,
                carryover,
            });
        }
        // push children in reverse so the first child is explored first
        let mut children = Vec::new();
        for (k, p) in pending.iter().enumerate() {
            let ops = &data.products[p.product].operations;
            let Some(op) = ops.get(s.progress[k]) else { continue };
            let start = s.free[op.machine].max(s.ready[k]);
            let end = start + op.hours;
            if end > data.week_hours {
                continue;
            }
            let mut child = s.clone();
            child.free[op.machine] = end;
            child.ready[k] = end;
            child.lists[op.machine].push(OpRef { item: p.id, op: s.progress[k] });
            child.progress[k] += 1;
            if visited.insert(key(&child)) {
                children.push(child);
            }
        }
        stack.extend(children.into_iter().rev());
    }
    outcomes
}

/// Arrival-order policy: items are taken in pending order and dispatched
/// back to back; the first item that no longer fits in the window, and every
/// item after it, carries over untouched.
pub fn fifo_schedule(data: &SchedPackData, pending: &[PendingItem]) -> WeekSchedule {
    let mut free = vec![0u64; data.machines];
    let mut schedule = WeekSchedule::idle(data.machines);
    let (kept, _) = truncate_with_carryover(pending.to_vec(), |p| {
        let mut trial = free.clone();
        let mut ready = 0;
        for op in &data.products[p.product].operations[p.next_op..] {
            let end = trial[op.machine].max(ready) + op.hours;
            if end > data.week_hours {
                return false;
            }
            trial[op.machine] = end;
            ready = end;
        }
        free = trial;
        true
    });
    for p in kept {
        for (k, op) in data.products[p.product].operations.iter().enumerate().skip(p.next_op) {
            schedule.machines[op.machine].push(OpRef { item: p.id, op: k });
        }
    }
    schedule
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpisodeWindow {
    pub pending: Vec<PendingItem>,
    pub schedule: WeekSchedule,
    pub plan: PackingPlan,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Episode {
    pub windows: Vec<EpisodeWindow>,
}

impl Episode {
    /// Chains schedules from the initial demand, filling in each window's pending set.
    pub fn from_schedules(data: &SchedPackData, steps: Vec<(WeekSchedule, PackingPlan)>) -> Result<Self> {
        let mut pending = data.initial_pending();
        let mut windows = Vec::new();
        for (schedule, plan) in steps {
            let result = simulate_week(data, &pending, &schedule)?;
            windows.push(EpisodeWindow { pending, schedule, plan });
            pending = result.carryover;
        }
        Ok(Episode { windows })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpisodeValue {
    pub value: f64,
    pub delay: usize,
    pub containers: usize,
    /// `false` when demand remains after the last window.
    pub complete: bool,
}

/// Overall objective of an episode.
pub fn sp_overall(data: &SchedPackData, episode: &Episode) -> Result<EpisodeValue> {
    if episode.windows.len() > HORIZON_CAP {
        return Err(Error::invalid(format!(
            "episode uses {} windows, cap is {HORIZON_CAP}",
            episode.windows.len()
        )));
    }
    let mut pending = data.initial_pending();
    let mut containers = 0;
    let mut delay = 0;
    for (d, w) in episode.windows.iter().enumerate() {
        if w.pending != pending {
            return Err(Error::model(format!(
                "window {d} pending set does not match the previous window's carryover"
            )));
        }
        let result = simulate_week(data, &pending, &w.schedule)?;
        containers += check_packing(data, &result.finished, &w.plan)?;
        if !result.finished.is_empty() {
            delay = d + 1;
        }
        pending = result.carryover;
    }
    let [a_delay, a_rent] = data.weights();
    Ok(EpisodeValue {
        value: a_delay * delay as f64 + a_rent * data.rent * containers as f64,
        delay,
        containers,
        complete: pending.is_empty(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpisodeStatus {
    OptimalExhaustive,
    Heuristic,
    InfeasibleNoneFound,
}

#[derive(Clone, Debug)]
pub struct EpisodeSolution {
    pub episode: Episode,
    pub value: Option<EpisodeValue>,
    pub status: EpisodeStatus,
    pub evaluations: u64,
}

fn canonical(pending: &[PendingItem]) -> Vec<(usize, usize)> {
    let mut key: Vec<_> = pending.iter().map(|p| (p.product, p.next_op)).collect();
    key.sort_unstable();
    key
}

fn packing_plan(data: &SchedPackData, finished: &[FinishedItem]) -> (usize, PackingPlan) {
    let volumes: Vec<u64> = finished.iter().map(|f| f.volume).collect();
    let (count, containers) = min_containers(&volumes, data.capacity);
    (count, PackingPlan { containers })
}

/// Exact episode optimum by dynamic programming over (window, pending
/// multiset), with every week outcome enumerated.
pub fn solve_episode_exhaustive(data: &SchedPackData) -> Result<EpisodeSolution> {
    data.validate()?;
    let [a_delay, a_rent] = data.weights();

    type Key = Vec<(usize, usize)>;

    struct Dp<'a> {
        data: &'a SchedPackData,
        a_delay: f64,
        a_rent: f64,
        /// Per canonical pending set: (finished volumes, canonical carryover).
        transitions: HashMap<Key, Vec<(Vec<u64>, Key)>>,
        memo: HashMap<(usize, Key), f64>,
        bins: HashMap<Vec<u64>, usize>,
        evaluations: u64,
    }

    impl Dp<'_> {
        fn representative(key: &Key) -> Vec<PendingItem> {
            key.iter()
                .enumerate()
                .map(|(id, &(product, next_op))| PendingItem { id, product, next_op })
                .collect()
        }

        fn transitions(&mut self, key: &Key) -> Vec<(Vec<u64>, Key)> {
            if let Some(t) = self.transitions.get(key) {
                return t.clone();
            }
            let mut seen = HashSet::new();
            let t: Vec<_> = enumerate_week_outcomes(self.data, &Self::representative(key))
                .into_iter()
                .map(|o| {
                    let mut vols: Vec<u64> = o.finished.iter().map(|f| f.volume).collect();
                    vols.sort_unstable();
                    (vols, canonical(&o.carryover))
                })
                .filter(|t| seen.insert(t.clone()))
                .collect();
            self.transitions.insert(key.clone(), t.clone());
            t
        }

        fn containers(&mut self, volumes: &[u64]) -> usize {
            if let Some(&c) = self.bins.get(volumes) {
                return c;
            }
            let c = min_containers(volumes, self.data.capacity).0;
            self.bins.insert(volumes.to_vec(), c);
            c
        }

        /// Cost of the best completion from window `d`.
        fn value(&mut self, d: usize, key: &Key) -> f64 {
            if key.is_empty() {
                return 0.0;
            }
            if d >= HORIZON_CAP {
                return f64::INFINITY;
            }
            if let Some(&v) = self.memo.get(&(d, key.clone())) {
                return v;
            }
            let mut best = f64::INFINITY;
            for (vols, carry) in self.transitions(key) {
                self.evaluations += 1;
                best = best.min(self.step_cost(d, &vols, &carry));
            }
            self.memo.insert((d, key.clone()), best);
            best
        }

        fn step_cost(&mut self, d: usize, volumes: &[u64], carry: &Key) -> f64 {
            let rent = self.a_rent * self.data.rent * self.containers(volumes) as f64;
            if carry.is_empty() {
                rent + self.a_delay * (d + 1) as f64
            } else {
                rent + self.value(d + 1, carry)
            }
        }
    }

    let mut dp = Dp {
        data,
        a_delay,
        a_rent,
        transitions: HashMap::new(),
        memo: HashMap::new(),
        bins: HashMap::new(),
        evaluations: 0,
    };
    let initial = data.initial_pending();
    let best = dp.value(0, &canonical(&initial));
    if !best.is_finite() {
        return Ok(EpisodeSolution {
            episode: Episode::default(),
            value: None,
            status: EpisodeStatus::InfeasibleNoneFound,
            evaluations: dp.evaluations,
        });
    }

    // walk forward with concrete items, taking the first outcome that attains the optimum
    let mut windows = Vec::new();
    let mut pending = initial;
    let mut d = 0;
    while !pending.is_empty() {
        let target = dp.value(d, &canonical(&pending));
        let outcomes = enumerate_week_outcomes(data, &pending);
        let chosen = outcomes
            .into_iter()
            .find(|o| {
                let mut vols: Vec<u64> = o.finished.iter().map(|f| f.volume).collect();
                vols.sort_unstable();
                dp.step_cost(d, &vols, &canonical(&o.carryover)) == target
            })
            .expect("optimal outcome exists");
        let (_, plan) = packing_plan(data, &chosen.finished);
        windows.push(EpisodeWindow { pending: pending.clone(), schedule: chosen.schedule, plan });
        pending = chosen.carryover;
        d += 1;
    }
    let episode = Episode { windows };
    let value = sp_overall(data, &episode)?;
    Ok(EpisodeSolution {
        episode,
        value: Some(value),
        status: EpisodeStatus::OptimalExhaustive,
        evaluations: dp.evaluations,
    })
}

/// Component-wise greedy: each week the schedule finishing the most items
/// (first found on ties), then the fewest containers for what it finished.
pub fn solve_episode_isolated(data: &SchedPackData) -> Result<EpisodeSolution> {
    data.validate()?;
    let mut pending = data.initial_pending();
    let mut windows = Vec::new();
    let mut evaluations = 0;
    while !pending.is_empty() && windows.len() < HORIZON_CAP {
        let outcomes = enumerate_week_outcomes(data, &pending);
        evaluations += outcomes.len() as u64;
        let best = outcomes
            .iter()
            .max_by(|a, b| a.finished.len().cmp(&b.finished.len()).then(std::cmp::Ordering::Greater))
            .expect("idle outcome always exists")
            .clone();
        let (_, plan) = packing_plan(data, &best.finished);
        windows.push(EpisodeWindow { pending: pending.clone(), schedule: best.schedule, plan });
        pending = best.carryover;
    }
    let episode = Episode { windows };
    let value = sp_overall(data, &episode)?;
    let status = if value.complete {
        EpisodeStatus::Heuristic
    } else {
        EpisodeStatus::InfeasibleNoneFound
    };
    Ok(EpisodeSolution { episode, value: Some(value), status, evaluations })
}

/// FIFO truncation schedule each week with optimal packing.
pub fn fifo_episode(data: &SchedPackData) -> Result<Episode> {
    let mut pending = data.initial_pending();
    let mut windows = Vec::new();
    while !pending.is_empty() && windows.len() < HORIZON_CAP {
        let schedule = fifo_schedule(data, &pending);
        let result = simulate_week(data, &pending, &schedule)?;
        let (_, plan) = packing_plan(data, &result.finished);
        windows.push(EpisodeWindow { pending: pending.clone(), schedule, plan });
        pending = result.carryover;
    }
    Ok(Episode { windows })
}

/// Windows used until no carryover remains.
pub fn realized_horizon(data: &SchedPackData, episode: &Episode) -> Result<usize> {
    let mut pending = data.initial_pending();
    for (d, w) in episode.windows.iter().enumerate() {
        if pending.is_empty() {
            return Ok(d);
        }
        pending = simulate_week(data, &pending, &w.schedule)?.carryover;
    }
    Ok(episode.windows.len())
}

/// Random valid schedule: operations are appended one at a time at random,
/// stopping early with probability `stop` after each append.
pub fn random_schedule(data: &SchedPackData, pending: &[PendingItem], stop: f64, rng: &mut impl Rng) -> WeekSchedule {
    let mut free = vec![0u64; data.machines];
    let mut progress: Vec<usize> = pending.iter().map(|p| p.next_op).collect();
    let mut ready = vec![0u64; pending.len()];
    let mut schedule = WeekSchedule::idle(data.machines);
    loop {
        let candidates: Vec<usize> = (0..pending.len())
            .filter(|&k| {
                let ops = &data.products[pending[k].product].operations;
                ops.get(progress[k])
                    .is_some_and(|op| free[op.machine].max(ready[k]) + op.hours <= data.week_hours)
            })
            .collect();
        let Some(&k) = candidates.choose(rng) else { break };
        let op = data.products[pending[k].product].operations[progress[k]];
        let end = free[op.machine].max(ready[k]) + op.hours;
        free[op.machine] = end;
        ready[k] = end;
        schedule.machines[op.machine].push(OpRef { item: pending[k].id, op: progress[k] });
        progress[k] += 1;
        if rng.gen_bool(stop) {
            break;
        }
    }
    schedule
}

/// Random episode: random schedules, first-fit packing in shuffled order.
pub fn random_episode(data: &SchedPackData, rng: &mut impl Rng) -> Result<Episode> {
    let mut pending = data.initial_pending();
    let mut windows = Vec::new();
    while !pending.is_empty() && windows.len() < HORIZON_CAP {
        let schedule = random_schedule(data, &pending, 0.15, rng);
        let result = simulate_week(data, &pending, &schedule)?;
        let mut order: Vec<usize> = (0..result.finished.len()).collect();
        order.shuffle(rng);
        let shuffled: Vec<u64> = order.iter().map(|&k| result.finished[k].volume).collect();
        let bins = first_fit(&shuffled, data.capacity);
        let mut containers = vec![0; result.finished.len()];
        for (pos, &k) in order.iter().enumerate() {
            containers[k] = bins[pos];
        }
        windows.push(EpisodeWindow { pending: pending.clone(), schedule, plan: PackingPlan { containers } });
        pending = result.carryover;
    }
    Ok(Episode { windows })
}

/// Scheduling instance: the pending items. Dimension = remaining operations.
pub fn jssp_instance(data: &SchedPackData, pending: &[PendingItem]) -> Instance {
    let mut bytes = Vec::with_capacity(pending.len() * 12);
    for p in pending {
        bytes.extend((p.id as u32).to_le_bytes());
        bytes.extend((p.product as u32).to_le_bytes());
        bytes.extend((p.next_op as u32).to_le_bytes());
    }
    Instance::new(data.remaining_ops(pending), bytes, pending.to_vec()).with_component(JSSP)
}

/// Packing instance: the finished items. Dimension = item count.
pub fn bpp_instance(finished: &[FinishedItem]) -> Instance {
    let mut bytes = Vec::with_capacity(finished.len() * 12);
    for f in finished {
        bytes.extend((f.id as u32).to_le_bytes());
        bytes.extend(f.volume.to_le_bytes());
    }
    let volumes: Vec<u64> = finished.iter().map(|f| f.volume).collect();
    Instance::new(bpp_dimension(finished), bytes, volumes).with_component(BPP)
}

/// The scheduling/packing problem with its time pipeline.
#[derive(Clone)]
pub struct SchedPack {
    data: Arc<SchedPackData>,
    first_week: Arc<OnceLock<Vec<WeekOutcome>>>,
}

impl fmt::Debug for SchedPack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SchedPack").field("data", &self.data).finish()
    }
}

impl SchedPack {
    pub fn new(data: SchedPackData) -> Result<Self> {
        data.validate()?;
        Ok(SchedPack {
            data: Arc::new(data),
            first_week: Arc::new(OnceLock::new()),
        })
    }

    pub fn data(&self) -> &SchedPackData {
        &self.data
    }

    /// Outcomes of the first window from the initial demand.
    pub fn first_week_outcomes(&self) -> &[WeekOutcome] {
        self.first_week
            .get_or_init(|| enumerate_week_outcomes(&self.data, &self.data.initial_pending()))
    }

    /// Components `JSSP`, `BPP`; streams JSSP → BPP (same window) and
    /// JSSP → JSSP (next window).
    pub fn pipeline(&self) -> TimePipeline {
        let streams: Vec<Arc<dyn DataStream>> = vec![
            Arc::new(WeekStream { sp: self.clone(), to_packing: true }),
            Arc::new(WeekStream { sp: self.clone(), to_packing: false }),
        ];
        TimePipeline::new(vec!["JSSP".into(), "BPP".into()], streams, self.data.week_hours, HORIZON_CAP)
            .expect("fixed two-stream topology")
    }

    /// Upstream choice wrapping a concrete week outcome.
    pub fn choice(outcome: WeekOutcome) -> UpstreamChoice {
        UpstreamChoice {
            label: outcome.schedule.to_string(),
            data: Arc::new(outcome),
        }
    }
}

struct WeekStream {
    sp: SchedPack,
    to_packing: bool,
}

impl DataStream for WeekStream {
    fn source(&self) -> usize {
        JSSP
    }

    fn target(&self) -> usize {
        if self.to_packing {
            BPP
        } else {
            JSSP
        }
    }

    fn lag(&self) -> Lag {
        if self.to_packing {
            Lag::SameWindow
        } else {
            Lag::NextWindow
        }
    }

    fn upstream_choices(&self) -> Vec<UpstreamChoice> {
        self.sp
            .first_week_outcomes()
            .iter()
            .cloned()
            .map(SchedPack::choice)
            .collect()
    }

    fn payload(&self, upstream: &UpstreamChoice) -> Instance {
        let o = upstream
            .data
            .downcast_ref::<WeekOutcome>()
            .expect("week stream choices carry week outcomes");
        if self.to_packing {
            bpp_instance(&o.finished)
        } else {
            jssp_instance(&self.sp.data, &o.carryover)
        }
    }
}

/// χ of a packing component: finished items from the other components' configs.
pub type FinishedMap = Arc<dyn Fn(&Context<'_>) -> Vec<FinishedItem> + Send + Sync>;

/// Packing component with a fixed declared dimension; its χ is supplied by
/// the caller.
pub struct BppComponent {
    capacity: u64,
    rent: f64,
    dimension: usize,
    chi: FinishedMap,
}

impl BppComponent {
    pub fn new(
        capacity: u64,
        rent: f64,
        dimension: usize,
        chi: FinishedMap,
    ) -> Self {
        BppComponent { capacity, rent, dimension, chi }
    }

    fn digit_bits(&self) -> u32 {
        bits_for(self.dimension as u64)
    }

    /// Container index per item.
    pub fn decode(&self, s: SolutionConfig) -> Vec<usize> {
        let b = self.digit_bits();
        let mask = (1u64 << b) - 1;
        (0..self.dimension)
            .map(|k| ((s.bits() >> ((self.dimension - 1 - k) as u32 * b)) & mask) as usize)
            .collect()
    }

    pub fn encode(&self, containers: &[usize]) -> Result<SolutionConfig> {
        let b = self.digit_bits();
        if containers.len() != self.dimension {
            return Err(Error::invalid("one container index per item is required"));
        }
        let bits = containers.iter().fold(0u64, |acc, &c| (acc << b) | c as u64);
        SolutionConfig::new(self.encoding_width(), bits)
    }
}

impl Component for BppComponent {
    fn name(&self) -> &str {
        "BPP"
    }

    fn encoding_width(&self) -> u32 {
        self.dimension as u32 * self.digit_bits()
    }

    fn dimension(&self) -> usize {
        self.dimension
    }

    fn chi(&self, context: &Context<'_>) -> Instance {
        bpp_instance(&(self.chi)(context))
    }

    fn violation(&self, instance: &Instance, s: SolutionConfig) -> Option<&'static str> {
        let Some(volumes) = instance.data::<Vec<u64>>() else {
            return Some("instance-kind");
        };
        let containers = self.decode(s);
        if containers.iter().any(|&c| c >= self.dimension) {
            return Some("container-index-range");
        }
        let mut loads = vec![0u64; self.dimension];
        for (v, &c) in volumes.iter().zip(&containers) {
            loads[c] += v;
        }
        loads.iter().any(|&l| l > self.capacity).then_some("container-capacity")
    }

    fn objective(&self, _: &Instance, s: SolutionConfig, _: &Context<'_>) -> f64 {
        let opened: HashSet<usize> = self.decode(s).into_iter().collect();
        self.rent * opened.len() as f64
    }
}

/// Scheduling component choosing among candidate week schedules for a fixed
/// pending set. Objective: number of items carried over.
struct JsspChoice {
    data: Arc<SchedPackData>,
    pending: Vec<PendingItem>,
    candidates: Vec<WeekSchedule>,
}

impl Component for JsspChoice {
    fn name(&self) -> &str {
        "JSSP"
    }

    fn encoding_width(&self) -> u32 {
        bits_for(self.candidates.len() as u64)
    }

    fn dimension(&self) -> usize {
        self.data.remaining_ops(&self.pending)
    }

    fn chi(&self, _: &Context<'_>) -> Instance {
        jssp_instance(&self.data, &self.pending)
    }

    fn violation(&self, _: &Instance, s: SolutionConfig) -> Option<&'static str> {
        let Some(schedule) = self.candidates.get(s.bits() as usize) else {
            return Some("schedule-index-range");
        };
        match simulate_week(&self.data, &self.pending, schedule) {
            Ok(_) => None,
            Err(Error::Infeasible { predicate, .. }) => Some(predicate),
            Err(_) => Some("schedule"),
        }
    }

    fn objective(&self, _: &Instance, s: SolutionConfig, _: &Context<'_>) -> f64 {
        let schedule = &self.candidates[s.bits() as usize];
        simulate_week(&self.data, &self.pending, schedule)
            .map(|r| r.carryover.len() as f64)
            .unwrap_or(f64::NAN)
    }
}

/// One window as a static two-component problem: JSSP picks a candidate
/// schedule, BPP packs what it finishes into `bpp_dimension` slots.
///
/// The packing dimension is fixed here, so χ of BPP fails with a model
/// violation whenever the chosen schedule finishes a different number of
/// items; that coupling belongs in the time pipeline.
pub fn window_problem(
    data: &SchedPackData,
    pending: Vec<PendingItem>,
    candidates: Vec<WeekSchedule>,
    bpp_dimension: usize,
) -> Result<CompositeProblem> {
    data.validate()?;
    if candidates.is_empty() {
        return Err(Error::invalid("at least one candidate schedule is required"));
    }
    let data = Arc::new(data.clone());
    let jssp = JsspChoice {
        data: data.clone(),
        pending: pending.clone(),
        candidates: candidates.clone(),
    };
    let chi_data = data.clone();
    let chi = Arc::new(move |ctx: &Context<'_>| {
        candidates
            .get(ctx.get(JSSP).bits() as usize)
            .and_then(|s| simulate_week(&chi_data, &pending, s).ok())
            .map(|r| r.finished)
            .unwrap_or_default()
    });
    let bpp = BppComponent::new(data.capacity, data.rent, bpp_dimension, chi);
    CompositeProblem::with_unit_weights(vec![Arc::new(jssp), Arc::new(bpp)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t1() -> SchedPackData {
        SchedPackData::fixture_t1()
    }

    fn ops(list: &[(usize, usize)]) -> Vec<OpRef> {
        list.iter().map(|&(item, op)| OpRef { item, op }).collect()
    }

    #[test]
    fn empty_pending_is_trivial() {
        let r = simulate_week(&t1(), &[], &WeekSchedule::idle(2)).unwrap();
        assert!(r.finished.is_empty() && r.carryover.is_empty());
    }

    #[test]
    fn idle_week_changes_nothing() {
        let d = t1();
        let pending = d.initial_pending();
        let r = simulate_week(&d, &pending, &WeekSchedule::idle(2)).unwrap();
        assert!(r.finished.is_empty());
        assert_eq!(r.carryover, pending);
    }

    #[test]
    fn capacity_violation_is_infeasible() {
        let d = t1();
        let pending = d.initial_pending();
        // five operations of 2h on machine 0 = 10h > 8h
        let s = WeekSchedule { machines: vec![ops(&[(0, 0), (1, 0), (2, 0), (3, 1), (4, 1)]), ops(&[(3, 0), (4, 0)])] };
        let err = simulate_week(&d, &pending, &s).unwrap_err();
        assert_eq!(err, Error::Infeasible { component: JSSP, predicate: "machine-capacity" });
    }

    #[test]
    fn structural_schedule_errors() {
        let d = t1();
        let pending = d.initial_pending();
        let wrong_machine = WeekSchedule { machines: vec![ops(&[(3, 0)]), vec![]] };
        assert_eq!(
            simulate_week(&d, &pending, &wrong_machine).unwrap_err(),
            Error::Infeasible { component: JSSP, predicate: "machine-mismatch" }
        );
        let skipped = WeekSchedule { machines: vec![vec![], ops(&[(0, 1)])] };
        assert_eq!(
            simulate_week(&d, &pending, &skipped).unwrap_err(),
            Error::Infeasible { component: JSSP, predicate: "operation-order" }
        );
        let dup = WeekSchedule { machines: vec![ops(&[(0, 0), (0, 0)]), vec![]] };
        assert_eq!(
            simulate_week(&d, &pending, &dup).unwrap_err(),
            Error::Infeasible { component: JSSP, predicate: "duplicate-operation" }
        );
        let unknown = WeekSchedule { machines: vec![ops(&[(9, 0)]), vec![]] };
        assert_eq!(
            simulate_week(&d, &pending, &unknown).unwrap_err(),
            Error::Infeasible { component: JSSP, predicate: "unknown-operation" }
        );
    }

    #[test]
    fn deadlocked_dispatch_is_order_violation() {
        let d = t1();
        let pending = d.initial_pending();
        // machine 0 waits on B's second op before A's first; machine 1 waits on A's second op first
        let s = WeekSchedule { machines: vec![ops(&[(3, 1), (0, 0)]), ops(&[(0, 1), (3, 0)])] };
        assert_eq!(
            simulate_week(&d, &pending, &s).unwrap_err(),
            Error::Infeasible { component: JSSP, predicate: "operation-order" }
        );
    }

    #[test]
    fn min_containers_small_cases() {
        assert_eq!(min_containers(&[], 10).0, 0);
        assert_eq!(min_containers(&[3, 5], 10).0, 1);
        assert_eq!(min_containers(&[3, 3, 3, 5, 5], 10).0, 2);
        assert_eq!(min_containers(&[6, 6, 6], 10).0, 3);
        let (n, assign) = min_containers(&[4, 4, 3, 3, 3, 3], 10);
        assert_eq!(n, 2);
        let mut loads = [0u64; 2];
        for (v, b) in [4, 4, 3, 3, 3, 3].iter().zip(&assign) {
            loads[*b] += v;
        }
        assert!(loads.iter().all(|&l| l <= 10));
    }

    #[test]
    fn packing_checks() {
        let d = t1();
        let items = [
            FinishedItem { id: 0, product: 0, volume: 3 },
            FinishedItem { id: 3, product: 1, volume: 5 },
        ];
        assert_eq!(check_packing(&d, &items, &PackingPlan { containers: vec![0, 0] }).unwrap(), 1);
        assert_eq!(check_packing(&d, &items, &PackingPlan { containers: vec![4, 1] }).unwrap(), 2);
        assert!(check_packing(&d, &items, &PackingPlan { containers: vec![0] }).is_err());
        let big = [FinishedItem { id: 3, product: 1, volume: 5 }; 3];
        assert_eq!(
            check_packing(&d, &big, &PackingPlan { containers: vec![0, 0, 0] }).unwrap_err(),
            Error::Infeasible { component: BPP, predicate: "container-capacity" }
        );
    }

    #[test]
    fn fifo_truncates_at_first_misfit() {
        let d = t1();
        let s = fifo_schedule(&d, &d.initial_pending());
        let r = simulate_week(&d, &d.initial_pending(), &s).unwrap();
        assert_eq!(r.finished.iter().map(|f| f.id).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(r.carryover.iter().map(|p| p.id).collect::<Vec<_>>(), vec![3, 4]);
    }

    #[test]
    fn first_outcome_is_idle() {
        let d = t1();
        let outs = enumerate_week_outcomes(&d, &d.initial_pending());
        assert!(outs[0].finished.is_empty());
        assert_eq!(outs[0].schedule, WeekSchedule::idle(2));
    }

    #[test]
    fn invalid_data_rejected() {
        let mut d = t1();
        d.capacity = 4;
        assert!(d.validate().is_err());
        let mut d = t1();
        d.products[0].operations[0].machine = 2;
        assert!(d.validate().is_err());
    }
}
