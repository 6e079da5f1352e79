// Smooth data through both solvers: the pseudo-spectral solution and the
// reconstructed Lagrangian one agree before breaking, and both conserve
// the weighted energy.

use wavelab::eulerian::{eulerian_evolve, weighted_energy, BlowupMonitor, EulerianControls, EulerianState};
use wavelab::lagrangian::{lagrangian_initial, to_eulerian};
use wavelab::scenarios::Scenario;
use wavelab::semilinear::{evolve, EvolveControls};
use wavelab::{FluxModel, Result, UniformGrid};

pub fn run_example() -> Result<()> {
    let grid = UniformGrid::periodic(-32.0, 32.0, 1024)?;
    let model = FluxModel::camassa_holm(0.0, 0.3);
    let scenario = Scenario::Gaussian { amplitude: 0.5, sigma: 1.0 };
    let controls = (1.0, 0.01, 20);

    let u0 = scenario.sample(grid)?;
    let eul = eulerian_evolve(
        &EulerianState::new(u0.clone()),
        &model,
        controls.0,
        EulerianControls { dt: controls.1, sample_every: controls.2 },
        BlowupMonitor::for_data(&u0),
    );
    let state = lagrangian_initial(scenario.initial_profile(grid)?.as_ref(), &grid, 2048)?;
    let lag = evolve(&state, &model, controls.0, EvolveControls { dt: controls.1, sample_every: controls.2 })?;

    for (e, l) in eul.snapshots.iter().zip(&lag.snapshots) {
        let u = to_eulerian(l, model.lambda(), &grid);
        let l2 = (grid.dx() * u.values().iter().zip(e.u.values()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()).sqrt();
        println!("t={:.1}  L2 distance {l2:.2e}  weighted energy {:.10}", e.t, weighted_energy(e, model.lambda()));
    }
    println!("energy drift: eulerian {:.1e}, lagrangian {:.1e}", eul.energy_drift_rel(), lag.report.energy_drift_rel);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
