// A single peakon moves at its height without changing shape.

use wavelab::lagrangian::{lagrangian_initial, to_eulerian};
use wavelab::scenarios::AnalyticProfile;
use wavelab::semilinear::{evolve, EvolveControls};
use wavelab::{FluxModel, Result, UniformGrid};

pub fn run_example() -> Result<()> {
    let grid = UniformGrid::periodic(-32.0, 32.0, 2048)?;
    let c = 1.0;
    let state = lagrangian_initial(&AnalyticProfile::peakon(c, 0.0), &grid, 4096)?;
    let run = evolve(&state, &FluxModel::camassa_holm(0.0, 0.0), 2.0, EvolveControls { dt: 0.01, sample_every: 50 })?;
    for s in &run.snapshots {
        let u = to_eulerian(s, 0.0, &grid);
        let j = (0..grid.len()).max_by(|&a, &b| u.values()[a].total_cmp(&u.values()[b])).unwrap_or(0);
        println!("t={:.2}  crest x={:+.4} (c t = {:.4})  height {:.4}", s.t, grid.x(j), c * s.t, u.values()[j]);
    }
    println!("relative energy drift {:.2e}", run.report.energy_drift_rel);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
