use sitopt::*;
use sitopt::library::{mwrc::*, interference::Objective};
use std::time::Instant;

fn main() {
    let ch = sitopt::bench::channels::generate_channel(1, 0, 10.0).mwrc_channel();
    let p = build_mwrc_snd(&ch, ALL_SND, &Objective::GlobalEnergyEfficiency{phi: vec![4.0;3], circuit_power: 1.0}, Identification::Tight).unwrap();
    for budget in [500u64, 2000, 8000] {
        let cfg = SolverConfig { max_nodes: budget, ..SolverConfig::default() };
        let t = Instant::now();
        let out = solve(&p, &cfg).unwrap();
        println!("budget {budget}: status {:?} value {:?} gamma {:.4} nodes {} subs {} time {:?} ({:?}/node)",
            out.status, out.objective_value, out.gamma, out.nodes_expanded, out.subproblems_solved,
            t.elapsed(), t.elapsed() / out.nodes_expanded as u32);
    }
}
