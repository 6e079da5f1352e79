// A steep negative slope breaks in finite time. The Eulerian solver stops
// at the slope threshold; refining the grid makes the slope at that time
// more negative, which separates breaking from under-resolution.

use wavelab::eulerian::{eulerian_evolve, BlowupMonitor, EulerianControls, EulerianState};
use wavelab::function_space::spectral_derivative;
use wavelab::scenarios::Scenario;
use wavelab::{FluxModel, Result, UniformGrid};

pub fn run_example() -> Result<()> {
    let model = FluxModel::camassa_holm(0.0, 0.0);
    let scenario = Scenario::Breaking { slope: 3.0 };
    let threshold = scenario.blowup_threshold().unwrap_or(-10.0);
    let run = |n: usize, t: f64, threshold: f64| -> Result<_> {
        let grid = UniformGrid::periodic(-32.0, 32.0, n)?;
        let controls = EulerianControls { dt: 1e-3, sample_every: 500 };
        Ok(eulerian_evolve(
            &EulerianState::new(scenario.sample(grid)?),
            &model,
            t,
            controls,
            BlowupMonitor::with_threshold(threshold)?,
        ))
    };

    let fine = run(2048, 5.0, threshold)?;
    let t_star = fine.final_state().t;
    println!("stop: {} at t={t_star:.3}", fine.stop_reason.as_str());
    for n in [512, 1024, 2048] {
        let r = run(n, t_star, -1e9)?;
        println!("n={n:<5} min u_x at t*: {:.3}", spectral_derivative(&r.final_state().u, 1).min());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
