//! LRP values checked against a direct enumeration that never touches the
//! bitstring encoding or the χ-mappings.

use mcdep_core::lrp::{LrpData, LrpProblem, FLP, VRP};
use mcdep_core::solvers::{brute_force_joint, solve_isolated, SolveStatus, DEFAULT_JOINT_BUDGET};
use mcdep_core::SolutionConfig;

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (k, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

fn best_tour(d: &LrpData, depot: usize, clients: &[usize]) -> f64 {
    let home = (d.locations[depot].x, d.locations[depot].y);
    permutations(clients)
        .iter()
        .map(|order| {
            let mut at = home;
            let mut total = 0.0;
            for &c in order {
                let p = (d.clients[c].x, d.clients[c].y);
                total += dist(at, p);
                at = p;
            }
            total + if order.is_empty() { 0.0 } else { dist(at, home) }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Minimum of establishment + assignment distance + best tours over every
/// open set of size k and every client-to-open-location assignment.
fn direct_optimum(d: &LrpData) -> f64 {
    let m = d.locations.len();
    let n = d.clients.len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != d.k {
            continue;
        }
        let open: Vec<usize> = (0..m).filter(|l| mask >> l & 1 == 1).collect();
        for code in 0..d.k.pow(n as u32) {
            let mut rest = code;
            let assign: Vec<usize> = (0..n)
                .map(|_| {
                    let l = open[rest % d.k];
                    rest /= d.k;
                    l
                })
                .collect();
            let mut cost = 0.0;
            for &l in &open {
                let served: Vec<usize> = (0..n).filter(|&c| assign[c] == l).collect();
                let loc = d.locations[l];
                cost += loc.base_cost + loc.per_client_cost * served.len() as f64;
                cost += served
                    .iter()
                    .map(|&c| dist((d.clients[c].x, d.clients[c].y), (loc.x, loc.y)))
                    .sum::<f64>();
                cost += best_tour(d, l, &served);
            }
            best = best.min(cost);
        }
    }
    best
}

const T1_OPTIMUM: f64 = 90.62199953712796;
const T1_ARGMIN: &str = "01000010|000001100010";

#[test]
fn t1_encoding_widths() {
    let p = LrpProblem::new(LrpData::fixture_t1()).unwrap().composite();
    assert_eq!(p.width(FLP), 8);
    assert_eq!(p.width(VRP), 12);
    assert_eq!(p.joint_space_size(), 1 << 20);
}

#[test]
fn t1_oracle_matches_direct_enumeration() {
    let data = LrpData::fixture_t1();
    let expected = direct_optimum(&data);
    let r = brute_force_joint(&LrpProblem::new(data).unwrap().composite(), DEFAULT_JOINT_BUDGET).unwrap();
    assert_eq!(r.status, SolveStatus::OptimalExhaustive);
    assert!((r.value.unwrap() - expected).abs() < 1e-9, "{:?} vs {expected}", r.value);
}

#[test]
fn t1_golden_pair() {
    let lrp = LrpProblem::new(LrpData::fixture_t1()).unwrap();
    let r = brute_force_joint(&lrp.composite(), DEFAULT_JOINT_BUDGET).unwrap();
    let joint = r.joint.unwrap();
    assert_eq!(joint.to_string(), T1_ARGMIN);
    assert!((r.value.unwrap() - T1_OPTIMUM).abs() < 1e-9);

    // the golden joint decodes to a consistent plan whose cost re-derives z*
    let flp = lrp.decode_flp(joint.get(FLP)).unwrap();
    let vrp = lrp.decode_vrp(joint.get(VRP)).unwrap();
    assert!((lrp.overall(&flp, &vrp).unwrap() - T1_OPTIMUM).abs() < 1e-9);
    for (slot, route) in vrp.routes.iter().enumerate() {
        for &c in route {
            assert_eq!(flp.assignment[c], flp.open[slot]);
        }
    }
}

#[test]
fn golden_joint_replays_bitwise() {
    let p = LrpProblem::new(LrpData::fixture_t1()).unwrap().composite();
    let joint = mcdep_core::JointSolution::parse(T1_ARGMIN).unwrap();
    assert!((p.evaluate_overall(&joint).unwrap() - T1_OPTIMUM).abs() < 1e-9);
    // flipping the last VRP bit moves a client between routes and breaks consistency
    let flipped = joint.with(VRP, SolutionConfig::new(12, joint.get(VRP).bits() ^ 1).unwrap());
    assert!(p.evaluate_overall(&flipped).is_err());
}

#[test]
fn generated_instances_match_direct_enumeration() {
    for seed in 0..4 {
        let data = LrpData::generate(seed);
        let expected = direct_optimum(&data);
        let r = brute_force_joint(&LrpProblem::new(data).unwrap().composite(), DEFAULT_JOINT_BUDGET).unwrap();
        assert!((r.value.unwrap() - expected).abs() < 1e-9, "seed {seed}");
    }
}

#[test]
fn isolated_never_beats_oracle() {
    for seed in 0..4 {
        let p = LrpProblem::new(LrpData::generate(seed)).unwrap().composite();
        let o = brute_force_joint(&p, DEFAULT_JOINT_BUDGET).unwrap().value.unwrap();
        if let Some(v) = solve_isolated(&p, DEFAULT_JOINT_BUDGET).unwrap().value {
            assert!(v >= o - 1e-9, "seed {seed}: {v} < {o}");
        }
    }
}
