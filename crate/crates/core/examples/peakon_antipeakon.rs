// Peakon and antipeakon collide, annihilate at one instant and re-emerge.
// The Lagrangian solver carries the energy through the collision.

use wavelab::lagrangian::{lagrangian_initial, to_eulerian};
use wavelab::scenarios::Scenario;
use wavelab::semilinear::{evolve, lagrangian_energy, EvolveControls};
use wavelab::{FluxModel, Result, UniformGrid};

pub fn run_example() -> Result<()> {
    let grid = UniformGrid::periodic(-32.0, 32.0, 2048)?;
    let scenario = Scenario::PeakonAntipeakon { c: 1.0, separation: 6.0 };
    let state = lagrangian_initial(scenario.initial_profile(grid)?.as_ref(), &grid, 4096)?;
    let run = evolve(&state, &FluxModel::camassa_holm(0.0, 0.0), 6.0, EvolveControls { dt: 0.01, sample_every: 50 })?;
    for s in &run.snapshots {
        let u = to_eulerian(s, 0.0, &grid);
        let breaking = s.breaking_nodes().len();
        println!("t={:.1}  max|u|={:.4}  E={:.8}  nodes at breaking: {breaking}", s.t, u.max_abs(), lagrangian_energy(s));
    }
    println!("relative energy drift {:.2e}, min q {:.2e}", run.report.energy_drift_rel, run.report.min_q);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
