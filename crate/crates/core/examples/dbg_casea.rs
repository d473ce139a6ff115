use sitopt::*;
use sitopt::library::{mwrc::*, interference::Objective};
use sitopt::subproblems::bound;

fn main() {
    let ch = sitopt::bench::channels::generate_channel(1, 0, 10.0).mwrc_channel();
    let p = build_mwrc_snd(&ch, ALL_SND, &Objective::GlobalEnergyEfficiency{phi: vec![4.0;3], circuit_power: 1.0}, Identification::Tight).unwrap();
    println!("validate: {}", p.validate());
    let cfg = SolverConfig::default();
    let root = initial_box(&p, &cfg).unwrap();
    println!("root: {:?}", root);
    // gamma = 0 bound at root
    let r = bound(&p, &root, 0.0, &cfg).unwrap();
    println!("bound(root, 0): beta {} failed {} wx {:?}", r.beta, r.failed, r.witness_x);
    // follow the engine: first incumbent comes from feasibility at witness
    let xi = check_feasibility(&p, &r.witness_x, &cfg);
    println!("feas: {:?}", xi.is_some());
    // bound children at gamma like after an update
    let y = common_maximizer(&p.gminus_signature, &root);
    let (l, rgt) = root.bisect(&r.witness_x, &y).unwrap();
    for (name, b) in [("left", &l), ("right", &rgt)] {
        for gamma in [0.0, 0.2, 0.37] {
            let rb = bound(&p, b, gamma, &cfg).unwrap();
            println!("{name} gamma {gamma}: beta {} failed {}", rb.beta, rb.failed);
        }
    }
}
