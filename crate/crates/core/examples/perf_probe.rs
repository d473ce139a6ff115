use sitopt::*;
use sitopt::library::{leakage, mwrc::*, gic::*, interference::Objective};
use std::time::Instant;

fn main() {
    let (p, gamma0) = leakage::power_min_problem(leakage::CLASSIC_LEAKAGE_BUDGET);
    let cfg = SolverConfig { epsilon: 1e-5, eta: 1e-3, gamma0, ..Default::default() };
    let t = Instant::now();
    let out = solve(&p, &cfg).unwrap();
    println!("example1: {:?} value {:?} nodes {} subs {} time {:?}",
        out.status, out.objective_value, out.nodes_expanded, out.subproblems_solved, t.elapsed());

    // MWRC WSR at 10 dB, one channel, all 8 configs
    let ch = sitopt::bench::channels::generate_channel(1, 0, 10.0).mwrc_channel();
    let cfg = SolverConfig::default();
    let t = Instant::now();
    let sweep = solve_mwrc_snd(&ch, &Objective::WeightedSumRate(vec![1.0;3]), &cfg).unwrap();
    let total_nodes: u64 = sweep.outcomes.iter().map(|(_, o)| o.nodes_expanded).sum();
    println!("mwrc sweep: best {:?} total nodes {} time {:?}",
        sweep.best_outcome().objective_value, total_nodes, t.elapsed());

    // GEE trad-SND, CaseB separable
    let cfg = SolverConfig { identification: Identification::Separable, ..Default::default() };
    let p = build_mwrc_snd(&ch, ALL_SND, &Objective::GlobalEnergyEfficiency{phi: vec![4.0;3], circuit_power: 1.0}, Identification::Separable).unwrap();
    let t = Instant::now();
    let out = solve(&p, &cfg).unwrap();
    println!("gee sep: {:?} value {:?} nodes {} time {:?}", out.status, out.objective_value, out.nodes_expanded, t.elapsed());

    // GEE trad-SND CaseA tight
    let p = build_mwrc_snd(&ch, ALL_SND, &Objective::GlobalEnergyEfficiency{phi: vec![4.0;3], circuit_power: 1.0}, Identification::Tight).unwrap();
    let cfg = SolverConfig::default();
    let t = Instant::now();
    let out = solve(&p, &cfg).unwrap();
    println!("gee tight(caseA): {:?} value {:?} nodes {} time {:?}", out.status, out.objective_value, out.nodes_expanded, t.elapsed());

    // GIC K=7 kappa=2 at 20 dB
    for kappa in [2usize, 3] {
        let spec = GicSpec::random(42, 0, 7, kappa, 1.0, 0.01);
        let p = build_gic(&spec, Identification::Tight).unwrap();
        let t = Instant::now();
        let out = solve(&p, &SolverConfig::default()).unwrap();
        println!("gic K=7 k={}: value {:?} nodes {} time {:?}", kappa, out.objective_value, out.nodes_expanded, t.elapsed());
    }
    for k in [10usize, 20, 30] {
        let spec = GicSpec::random(42, 0, k, 2, 1.0, 0.01);
        let p = build_gic(&spec, Identification::Tight).unwrap();
        let t = Instant::now();
        let out = solve(&p, &SolverConfig::default()).unwrap();
        println!("gic K={} k=2: value {:?} nodes {} time {:?}", k, out.objective_value, out.nodes_expanded, t.elapsed());
    }

    // RS problem (CaseA, 4 globals)
    let coeffs = default_rs_coefficients(&ch);
    let p = build_mwrc_rs(&ch, &coeffs, &Objective::WeightedSumRate(vec![1.0;3])).unwrap();
    let t = Instant::now();
    let out = solve(&p, &SolverConfig::default()).unwrap();
    println!("mwrc-rs: {:?} value {:?} nodes {} time {:?}", out.status, out.objective_value, out.nodes_expanded, t.elapsed());
}
