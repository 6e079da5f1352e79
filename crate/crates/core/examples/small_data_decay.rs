// With damping, small smooth data decays in H^s at the damping rate.

use wavelab::diagnostics::small_data_decay_check;
use wavelab::eulerian::{eulerian_evolve, BlowupMonitor, EulerianControls, EulerianState};
use wavelab::scenarios::Scenario;
use wavelab::{FluxModel, Result, UniformGrid};

pub fn run_example() -> Result<()> {
    let grid = UniformGrid::periodic(-32.0, 32.0, 1024)?;
    let model = FluxModel::camassa_holm(0.0, 1.0);
    let u0 = Scenario::SmallData { epsilon: 1e-3, s: 2.0 }.sample(grid)?;
    let run = eulerian_evolve(
        &EulerianState::new(u0),
        &model,
        2.0,
        EulerianControls { dt: 1e-2, sample_every: 25 },
        BlowupMonitor::with_threshold(-1e3)?,
    );
    let curve = small_data_decay_check(&run.snapshots, &model, 2.0)?;
    for i in 0..curve.times.len() {
        println!(
            "t={:.2}  |u|^2_H2 = {:.4e}  bound {:.4e}  ratio {:.6}",
            curve.times[i],
            curve.norm_sq[i],
            curve.bound[i],
            curve.norm_sq[i] / curve.bound[i]
        );
    }
    println!("decay inequality holds: {}", curve.pass);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
