//! Warehouse location + distribution routing.
//!
//! Two components share a set of candidate locations and clients:
//!
//! * **FLP** opens exactly `k` locations and assigns every client to one of
//!   them. Cost: client-to-facility distances plus, per open location,
//!   `base_cost + per_client_cost · |clients|`.
//! * **VRP** runs one closed tour per open location through its clients.
//!   Cost: total tour length.
//!
//! The FLP solution shapes the VRP instance (depots and client regions); the
//! VRP solution shapes the FLP instance (a client on route `r` must be
//! assigned to the `r`-th open location).
//!
//! Encodings, most significant bits first:
//!
//! * FLP: `[k-subset rank | slot digit per client]`
//! * VRP: `[visit-order permutation rank | slot digit per client]`
//!
//! A slot is an index into the sorted open set. Both encodings keep the slot
//! digits in the same low bits, so membership agreement is a mask compare.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{bits_for, Component, CompositeProblem, Context, Instance, JointSolution, SolutionConfig, MAX_WIDTH};

pub const FLP: usize = 0;
pub const VRP: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Location {
    pub x: f64,
    pub y: f64,
    pub base_cost: f64,
    pub per_client_cost: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Client {
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LrpData {
    pub locations: Vec<Location>,
    pub clients: Vec<Client>,
    pub k: usize,
    /// `None` means unit weights.
    pub alpha: Option<[f64; 2]>,
}

impl LrpData {
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 || self.k > self.locations.len() {
            return Err(Error::invalid(format!(
                "k ≤ |locations| violated: k = {}, |locations| = {}",
                self.k,
                self.locations.len()
            )));
        }
        for (id, l) in self.locations.iter().enumerate() {
            if !(l.x.is_finite() && l.y.is_finite()) {
                return Err(Error::invalid(format!("location {id} has non-finite coordinates")));
            }
            if !(l.base_cost >= 0.0 && l.base_cost.is_finite() && l.per_client_cost >= 0.0 && l.per_client_cost.is_finite()) {
                return Err(Error::invalid(format!("location {id} costs must be finite and ≥ 0")));
            }
        }
        if let Some(id) = self.clients.iter().position(|c| !(c.x.is_finite() && c.y.is_finite())) {
            return Err(Error::invalid(format!("client {id} has non-finite coordinates")));
        }
        if let Some([a, b]) = self.alpha {
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::invalid("alpha weights must be finite"));
            }
        }
        Ok(())
    }

    /// Soft issues that do not prevent solving.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.k >= self.clients.len() {
            out.push(format!(
                "k = {} is not lower than the number of clients ({})",
                self.k,
                self.clients.len()
            ));
        }
        out
    }

    /// Four corner locations, five clients, `k = 2`.
    pub fn fixture_t1() -> Self {
        let loc = |x, y| Location { x, y, base_cost: 10.0, per_client_cost: 2.0 };
        let cl = |x, y| Client { x, y };
        LrpData {
            locations: vec![loc(0.0, 0.0), loc(10.0, 0.0), loc(0.0, 10.0), loc(10.0, 10.0)],
            clients: vec![cl(1.0, 1.0), cl(9.0, 1.0), cl(1.0, 9.0), cl(9.0, 9.0), cl(5.0, 5.0)],
            k: 2,
            alpha: None,
        }
    }

    /// Random small instance: 3–4 locations, 4–5 clients, `k = 2`, integer data.
    pub fn generate(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(3..=4);
        let n = rng.gen_range(4..=5);
        let locations = (0..m)
            .map(|_| Location {
                x: rng.gen_range(0..=20) as f64,
                y: rng.gen_range(0..=20) as f64,
                base_cost: rng.gen_range(5..=20) as f64,
                per_client_cost: rng.gen_range(0..=4) as f64,
            })
            .collect();
        let clients = (0..n)
            .map(|_| Client {
                x: rng.gen_range(0..=20) as f64,
                y: rng.gen_range(0..=20) as f64,
            })
            .collect();
        LrpData { locations, clients, k: 2, alpha: None }
    }

    pub fn client_distance(&self, client: usize, location: usize) -> f64 {
        let c = self.clients[client];
        let l = self.locations[location];
        (c.x - l.x).hypot(c.y - l.y)
    }

    /// Closed tour `depot → route… → depot`.
    pub fn route_length(&self, depot: usize, route: &[usize]) -> f64 {
        let d = self.locations[depot];
        let mut prev = (d.x, d.y);
        let mut total = 0.0;
        for &c in route {
            let p = (self.clients[c].x, self.clients[c].y);
            total += (p.0 - prev.0).hypot(p.1 - prev.1);
            prev = p;
        }
        if !route.is_empty() {
            total += (d.x - prev.0).hypot(d.y - prev.1);
        }
        total
    }

    /// Nearest open location per client; ties go to the lower location id.
    pub fn nearest_assignment(&self, open: &[usize]) -> Vec<usize> {
        let mut sorted = open.to_vec();
        sorted.sort_unstable();
        (0..self.clients.len())
            .map(|c| {
                let mut best = sorted[0];
                for &l in &sorted[1..] {
                    if self.client_distance(c, l) < self.client_distance(c, best) {
                        best = l;
                    }
                }
                best
            })
            .collect()
    }
}

/// Open set plus client-to-location assignment (location ids).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlpConfig {
    pub open: Vec<usize>,
    pub assignment: Vec<usize>,
}

/// One ordered client sequence per open location, in sorted-location order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VrpConfig {
    pub routes: Vec<Vec<usize>>,
}

/// Payload of a VRP instance.
#[derive(Clone, Debug, PartialEq)]
pub struct VrpInstance {
    /// `None` when the FLP configuration does not decode to a valid open set.
    pub depots: Option<Vec<usize>>,
    pub regions: Vec<Vec<usize>>,
    slot_code: u64,
}

/// Payload of an FLP instance: the route slot each client sits on.
#[derive(Clone, Debug, PartialEq)]
pub struct FlpInstance {
    pub required_slots: Vec<u64>,
    slot_code: u64,
}

/// Bit layout shared by both components.
#[derive(Clone, Debug)]
pub struct LrpLayout {
    subsets: Vec<Vec<usize>>,
    subset_bits: u32,
    slot_bits: u32,
    clients: usize,
    k: usize,
    perm_count: u64,
    perm_bits: u32,
}

impl LrpLayout {
    fn new(data: &LrpData) -> Result<Self> {
        let subsets = k_subsets(data.locations.len(), data.k);
        let n = data.clients.len();
        let perm_count = (1..=n as u64).try_fold(1u64, |acc, v| acc.checked_mul(v));
        let perm_count = perm_count.ok_or_else(|| Error::invalid(format!("{n} clients is too many to encode")))?;
        let layout = LrpLayout {
            subset_bits: bits_for(subsets.len() as u64),
            slot_bits: bits_for(data.k as u64),
            clients: n,
            k: data.k,
            perm_bits: bits_for(perm_count),
            perm_count,
            subsets,
        };
        for (name, w) in [("FLP", layout.flp_width()), ("VRP", layout.vrp_width())] {
            if w > MAX_WIDTH {
                return Err(Error::invalid(format!("{name} encoding needs {w} bits (max {MAX_WIDTH})")));
            }
        }
        Ok(layout)
    }

    fn slot_field(&self) -> u32 {
        self.slot_bits * self.clients as u32
    }

    pub fn flp_width(&self) -> u32 {
        self.subset_bits + self.slot_field()
    }

    pub fn vrp_width(&self) -> u32 {
        self.perm_bits + self.slot_field()
    }

    fn slot_mask(&self) -> u64 {
        (1u64 << self.slot_field()) - 1
    }

    fn digits(&self, bits: u64) -> Vec<u64> {
        let mask = (1u64 << self.slot_bits) - 1;
        (0..self.clients)
            .map(|c| (bits >> ((self.clients - 1 - c) as u32 * self.slot_bits)) & mask)
            .collect()
    }

    fn slot_code(&self, digits: &[u64]) -> u64 {
        digits.iter().fold(0, |acc, d| (acc << self.slot_bits) | d)
    }

    fn digits_valid(&self, bits: u64) -> bool {
        self.digits(bits).iter().all(|&d| d < self.k as u64)
    }
}

/// The two-component location-routing problem over fixed data.
#[derive(Clone, Debug)]
pub struct LrpProblem {
    data: Arc<LrpData>,
    layout: Arc<LrpLayout>,
}

impl LrpProblem {
    pub fn new(data: LrpData) -> Result<Self> {
        data.validate()?;
        let layout = LrpLayout::new(&data)?;
        Ok(LrpProblem {
            data: Arc::new(data),
            layout: Arc::new(layout),
        })
    }

    pub fn data(&self) -> &LrpData {
        &self.data
    }

    pub fn layout(&self) -> &LrpLayout {
        &self.layout
    }

    /// FLP is component 0, VRP component 1.
    pub fn composite(&self) -> CompositeProblem {
        let weights = self.data.alpha.unwrap_or([1.0, 1.0]).to_vec();
        CompositeProblem::new(
            vec![
                Arc::new(FlpComponent { lrp: self.clone() }),
                Arc::new(VrpComponent { lrp: self.clone() }),
            ],
            weights,
        )
        .expect("two components with validated weights")
    }

    fn check_flp(&self, flp: &FlpConfig) -> Result<()> {
        let d = &self.data;
        let mut open = flp.open.clone();
        open.sort_unstable();
        open.dedup();
        if open.len() != flp.open.len() || open.len() != d.k {
            return Err(Error::model(format!("open set {:?} must hold exactly k = {} distinct locations", flp.open, d.k)));
        }
        if let Some(l) = open.iter().find(|&&l| l >= d.locations.len()) {
            return Err(Error::model(format!("unknown location {l}")));
        }
        if flp.assignment.len() != d.clients.len() {
            return Err(Error::model(format!(
                "assignment covers {} of {} clients",
                flp.assignment.len(),
                d.clients.len()
            )));
        }
        if let Some((c, l)) = flp.assignment.iter().enumerate().find(|(_, l)| !open.contains(l)) {
            return Err(Error::model(format!("client {c} assigned to closed location {l}")));
        }
        Ok(())
    }

    pub fn encode_flp(&self, flp: &FlpConfig) -> Result<SolutionConfig> {
        self.check_flp(flp)?;
        let mut open = flp.open.clone();
        open.sort_unstable();
        let rank = self.layout.subsets.iter().position(|s| *s == open).expect("valid k-subset") as u64;
        let digits: Vec<u64> = flp
            .assignment
            .iter()
            .map(|l| open.iter().position(|o| o == l).unwrap() as u64)
            .collect();
        let bits = (rank << self.layout.slot_field()) | self.layout.slot_code(&digits);
        SolutionConfig::new(self.layout.flp_width(), bits)
    }

    pub fn decode_flp(&self, s: SolutionConfig) -> Option<FlpConfig> {
        let rank = (s.bits() >> self.layout.slot_field()) as usize;
        let open = self.layout.subsets.get(rank)?.clone();
        let digits = self.layout.digits(s.bits());
        let assignment = digits
            .iter()
            .map(|&d| open.get(d as usize).copied())
            .collect::<Option<Vec<_>>>()?;
        Some(FlpConfig { open, assignment })
    }

    fn check_routes(&self, vrp: &VrpConfig) -> Result<()> {
        let n = self.data.clients.len();
        if vrp.routes.len() != self.data.k {
            return Err(Error::invalid(format!(
                "{} routes for k = {} open locations",
                vrp.routes.len(),
                self.data.k
            )));
        }
        let mut seen = vec![false; n];
        for &c in vrp.routes.iter().flatten() {
            if c >= n {
                return Err(Error::invalid(format!("route references unknown client {c}")));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::invalid(format!("client {c} appears on more than one route stop")));
            }
        }
        if let Some(c) = seen.iter().position(|s| !s) {
            return Err(Error::invalid(format!("client {c} is on no route")));
        }
        Ok(())
    }

    pub fn encode_vrp(&self, vrp: &VrpConfig) -> Result<SolutionConfig> {
        self.check_routes(vrp)?;
        let order: Vec<usize> = vrp.routes.iter().flatten().copied().collect();
        let mut digits = vec![0u64; self.data.clients.len()];
        for (slot, route) in vrp.routes.iter().enumerate() {
            for &c in route {
                digits[c] = slot as u64;
            }
        }
        let rank = permutation_rank(&order);
        let bits = (rank << self.layout.slot_field()) | self.layout.slot_code(&digits);
        SolutionConfig::new(self.layout.vrp_width(), bits)
    }

    pub fn decode_vrp(&self, s: SolutionConfig) -> Option<VrpConfig> {
        let rank = s.bits() >> self.layout.slot_field();
        if rank >= self.layout.perm_count || !self.layout.digits_valid(s.bits()) {
            return None;
        }
        let order = permutation_unrank(self.data.clients.len(), rank);
        let digits = self.layout.digits(s.bits());
        let mut routes = vec![Vec::new(); self.data.k];
        for c in order {
            routes[digits[c] as usize].push(c);
        }
        Some(VrpConfig { routes })
    }

    /// χ of VRP: open locations become depots, the assignment becomes regions.
    pub fn chi_vrp(&self, flp: &FlpConfig) -> Result<Instance> {
        self.check_flp(flp)?;
        Ok(self.vrp_instance(Some(flp)).with_component(VRP))
    }

    fn vrp_instance(&self, flp: Option<&FlpConfig>) -> Instance {
        let dim = self.data.k + self.data.clients.len();
        let Some(flp) = flp else {
            let payload = VrpInstance { depots: None, regions: Vec::new(), slot_code: u64::MAX };
            return Instance::new(dim, vec![0], payload);
        };
        let mut depots = flp.open.clone();
        depots.sort_unstable();
        let mut regions = vec![Vec::new(); depots.len()];
        let mut digits = Vec::with_capacity(flp.assignment.len());
        for (c, l) in flp.assignment.iter().enumerate() {
            let slot = depots.iter().position(|d| d == l).expect("assigned location is open");
            regions[slot].push(c);
            digits.push(slot as u64);
        }
        let mut bytes = vec![1u8];
        for (d, region) in depots.iter().zip(&regions) {
            bytes.extend((*d as u32).to_le_bytes());
            bytes.extend((region.len() as u32).to_le_bytes());
            for &c in region {
                bytes.extend((c as u32).to_le_bytes());
            }
        }
        let slot_code = self.layout.slot_code(&digits);
        Instance::new(dim, bytes, VrpInstance { depots: Some(depots), regions, slot_code })
    }

    /// χ of FLP: route membership fixes which slot each client must be assigned to.
    pub fn chi_flp(&self, vrp: &VrpConfig) -> Result<Instance> {
        self.check_routes(vrp)?;
        let mut digits = vec![0u64; self.data.clients.len()];
        for (slot, route) in vrp.routes.iter().enumerate() {
            for &c in route {
                digits[c] = slot as u64;
            }
        }
        Ok(self.flp_instance(digits).with_component(FLP))
    }

    fn flp_instance(&self, required_slots: Vec<u64>) -> Instance {
        let dim = self.data.locations.len() + self.data.clients.len();
        let bytes: Vec<u8> = required_slots.iter().map(|&d| d as u8).collect();
        let slot_code = self.layout.slot_code(&required_slots);
        Instance::new(dim, bytes, FlpInstance { required_slots, slot_code })
    }

    /// Struct-level FLP feasibility against an FLP instance.
    pub fn flp_violation(&self, instance: &Instance, flp: &FlpConfig) -> Option<&'static str> {
        let Some(x) = instance.data::<FlpInstance>() else {
            return Some("instance-kind");
        };
        if self.check_flp(flp).is_err() {
            return Some("open-set-cardinality");
        }
        let mut open = flp.open.clone();
        open.sort_unstable();
        let agrees = flp
            .assignment
            .iter()
            .zip(&x.required_slots)
            .all(|(l, &slot)| open.get(slot as usize) == Some(l));
        (!agrees).then_some("route-membership")
    }

    /// Struct-level VRP feasibility: each route visits exactly its depot's region.
    pub fn vrp_violation(&self, instance: &Instance, vrp: &VrpConfig) -> Option<&'static str> {
        let Some(x) = instance.data::<VrpInstance>() else {
            return Some("instance-kind");
        };
        if x.depots.is_none() {
            return Some("undefined-depots");
        }
        if vrp.routes.len() != x.regions.len() {
            return Some("route-count");
        }
        for (route, region) in vrp.routes.iter().zip(&x.regions) {
            let mut visited = route.clone();
            visited.sort_unstable();
            if visited != *region {
                return Some("client-coverage");
            }
        }
        None
    }

    /// Facility cost: assignment distances plus establishment costs.
    pub fn flp_cost(&self, flp: &FlpConfig) -> f64 {
        let d = &self.data;
        let distance: f64 = flp
            .assignment
            .iter()
            .enumerate()
            .map(|(c, &l)| d.client_distance(c, l))
            .sum();
        let mut open = flp.open.clone();
        open.sort_unstable();
        let establishment: f64 = open
            .iter()
            .map(|&l| {
                let served = flp.assignment.iter().filter(|&&a| a == l).count() as f64;
                d.locations[l].base_cost + d.locations[l].per_client_cost * served
            })
            .sum();
        distance + establishment
    }

    /// Total tour length; `depots[r]` serves `routes[r]`.
    pub fn vrp_cost(&self, depots: &[usize], vrp: &VrpConfig) -> f64 {
        depots
            .iter()
            .zip(&vrp.routes)
            .map(|(&d, r)| self.data.route_length(d, r))
            .sum()
    }

    pub fn joint(&self, flp: &FlpConfig, vrp: &VrpConfig) -> Result<JointSolution> {
        Ok(JointSolution::new(vec![self.encode_flp(flp)?, self.encode_vrp(vrp)?]))
    }

    /// Overall cost with unit weights.
    pub fn overall(&self, flp: &FlpConfig, vrp: &VrpConfig) -> Result<f64> {
        let unit = self.composite().with_weights(vec![1.0, 1.0])?;
        unit.evaluate_overall(&self.joint(flp, vrp)?)
    }
}

struct FlpComponent {
    lrp: LrpProblem,
}

impl Component for FlpComponent {
    fn name(&self) -> &str {
        "FLP"
    }

    fn encoding_width(&self) -> u32 {
        self.lrp.layout.flp_width()
    }

    fn dimension(&self) -> usize {
        self.lrp.data.locations.len() + self.lrp.data.clients.len()
    }

    fn chi(&self, context: &Context<'_>) -> Instance {
        let vrp = context.get(VRP).bits();
        self.lrp.flp_instance(self.lrp.layout.digits(vrp))
    }

    fn violation(&self, instance: &Instance, s: SolutionConfig) -> Option<&'static str> {
        let Some(x) = instance.data::<FlpInstance>() else {
            return Some("instance-kind");
        };
        let layout = &self.lrp.layout;
        if (s.bits() >> layout.slot_field()) as usize >= layout.subsets.len() {
            return Some("open-set-cardinality");
        }
        if !layout.digits_valid(s.bits()) {
            return Some("assignment-range");
        }
        if s.bits() & layout.slot_mask() != x.slot_code {
            return Some("route-membership");
        }
        None
    }

    fn objective(&self, _: &Instance, s: SolutionConfig, _: &Context<'_>) -> f64 {
        let flp = self.lrp.decode_flp(s).expect("feasible FLP config decodes");
        self.lrp.flp_cost(&flp)
    }
}

struct VrpComponent {
    lrp: LrpProblem,
}

impl Component for VrpComponent {
    fn name(&self) -> &str {
        "VRP"
    }

    fn encoding_width(&self) -> u32 {
        self.lrp.layout.vrp_width()
    }

    fn dimension(&self) -> usize {
        self.lrp.data.k + self.lrp.data.clients.len()
    }

    fn chi(&self, context: &Context<'_>) -> Instance {
        let flp = self.lrp.decode_flp(context.get(FLP));
        self.lrp.vrp_instance(flp.as_ref())
    }

    fn violation(&self, instance: &Instance, s: SolutionConfig) -> Option<&'static str> {
        let Some(x) = instance.data::<VrpInstance>() else {
            return Some("instance-kind");
        };
        let layout = &self.lrp.layout;
        if x.depots.is_none() {
            return Some("undefined-depots");
        }
        if !layout.digits_valid(s.bits()) {
            return Some("route-slot");
        }
        if s.bits() & layout.slot_mask() != x.slot_code {
            return Some("client-coverage");
        }
        if s.bits() >> layout.slot_field() >= layout.perm_count {
            return Some("permutation-rank");
        }
        None
    }

    fn objective(&self, instance: &Instance, s: SolutionConfig, _: &Context<'_>) -> f64 {
        let x = instance.data::<VrpInstance>().expect("VRP instance");
        let vrp = self.lrp.decode_vrp(s).expect("feasible VRP config decodes");
        self.lrp.vrp_cost(x.depots.as_deref().unwrap_or(&[]), &vrp)
    }
}

/// All `k`-subsets of `0..m` in lexicographic order.
fn k_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..m {
            cur.push(v);
            rec(v + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Lexicographic rank of a permutation of `0..n`.
fn permutation_rank(order: &[usize]) -> u64 {
    let n = order.len();
    let mut rank = 0u64;
    for i in 0..n {
        let smaller = order[i + 1..].iter().filter(|&&v| v < order[i]).count() as u64;
        rank = rank * (n - i) as u64 + smaller;
    }
    rank
}

fn permutation_unrank(n: usize, mut rank: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut fact: Vec<u64> = vec![1; n.max(1)];
    for i in 1..n {
        fact[i] = fact[i - 1] * i as u64;
    }
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let idx = (rank / fact[i]) as usize;
        rank %= fact[i];
        out.push(pool.remove(idx));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t1() -> LrpProblem {
        LrpProblem::new(LrpData::fixture_t1()).unwrap()
    }

    #[test]
    fn fixture_widths() {
        let p = t1();
        // C(4,2) = 6 -> 3 bits, 5 one-bit slot digits; 5! = 120 -> 7 bits
        assert_eq!(p.layout().flp_width(), 8);
        assert_eq!(p.layout().vrp_width(), 12);
    }

    #[test]
    fn permutation_ranking_round_trips() {
        for n in 0..6 {
            let total: u64 = (1..=n as u64).product();
            for r in 0..total {
                assert_eq!(permutation_rank(&permutation_unrank(n, r)), r);
            }
        }
        assert_eq!(permutation_unrank(3, 0), vec![0, 1, 2]);
        assert_eq!(permutation_unrank(3, 5), vec![2, 1, 0]);
    }

    #[test]
    fn k_subsets_are_lexicographic() {
        assert_eq!(
            k_subsets(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn nearest_assignment_breaks_ties_low() {
        let d = LrpData::fixture_t1();
        assert_eq!(d.nearest_assignment(&[0, 3]), vec![0, 0, 0, 3, 0]);
    }

    #[test]
    fn encode_decode_flp_and_vrp() {
        let p = t1();
        let flp = FlpConfig { open: vec![3, 1], assignment: vec![1, 1, 3, 3, 1] };
        let s = p.encode_flp(&flp).unwrap();
        let back = p.decode_flp(s).unwrap();
        assert_eq!(back.open, vec![1, 3]);
        assert_eq!(back.assignment, flp.assignment);

        let vrp = VrpConfig { routes: vec![vec![4, 0, 1], vec![3, 2]] };
        let s = p.encode_vrp(&vrp).unwrap();
        assert_eq!(p.decode_vrp(s).unwrap(), vrp);
    }

    #[test]
    fn bad_flp_configs_are_model_errors() {
        let p = t1();
        let three_open = FlpConfig { open: vec![0, 1, 2], assignment: vec![0; 5] };
        assert!(matches!(p.chi_vrp(&three_open), Err(Error::ModelViolation(_))));
        let closed = FlpConfig { open: vec![0, 1], assignment: vec![0, 0, 0, 0, 2] };
        assert!(matches!(p.chi_vrp(&closed), Err(Error::ModelViolation(_))));
    }

    #[test]
    fn unknown_client_on_route_is_invalid_argument() {
        let p = t1();
        let vrp = VrpConfig { routes: vec![vec![0, 1, 2, 3, 4, 9], vec![]] };
        assert!(matches!(p.chi_flp(&vrp), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn single_client_closed_form() {
        let data = LrpData {
            locations: vec![Location { x: 0.0, y: 0.0, base_cost: 10.0, per_client_cost: 2.0 }],
            clients: vec![Client { x: 3.0, y: 4.0 }],
            k: 1,
            alpha: None,
        };
        let p = LrpProblem::new(data).unwrap();
        let flp = FlpConfig { open: vec![0], assignment: vec![0] };
        let vrp = VrpConfig { routes: vec![vec![0]] };
        assert!((p.overall(&flp, &vrp).unwrap() - 27.0).abs() < 1e-9);
    }

    #[test]
    fn zero_clients_only_establishment() {
        let data = LrpData {
            locations: vec![Location { x: 0.0, y: 0.0, base_cost: 10.0, per_client_cost: 2.0 }],
            clients: vec![],
            k: 1,
            alpha: None,
        };
        let p = LrpProblem::new(data).unwrap();
        let flp = FlpConfig { open: vec![0], assignment: vec![] };
        let vrp = VrpConfig { routes: vec![vec![]] };
        assert_eq!(p.overall(&flp, &vrp).unwrap(), 10.0);
        assert_eq!(p.data().warnings().len(), 1);
    }

    #[test]
    fn k_larger_than_locations_rejected() {
        let mut d = LrpData::fixture_t1();
        d.k = 5;
        let err = LrpProblem::new(d).unwrap_err();
        assert!(err.to_string().contains("k ≤ |locations|"));
    }

    #[test]
    fn generated_instances_are_valid_and_reproducible() {
        for seed in 0..20 {
            let a = LrpData::generate(seed);
            assert_eq!(a, LrpData::generate(seed));
            let p = LrpProblem::new(a).unwrap();
            assert!(p.layout().flp_width() + p.layout().vrp_width() <= 20);
        }
    }
}
