// Sign-changing data: momentum m = u - u_xx is carried along the
// characteristics, so its sign pattern survives and u_x stays bounded below.

use wavelab::diagnostics::{momentum_track, sign_pattern_check, ux_lower_bound_check};
use wavelab::eulerian::{eulerian_evolve, BlowupMonitor, EulerianControls, EulerianState};
use wavelab::scenarios::make_sign_changing_data;
use wavelab::{FluxModel, Result, UniformGrid};

pub fn run_example() -> Result<()> {
    let grid = UniformGrid::periodic(-32.0, 32.0, 2048)?;
    let model = FluxModel::camassa_holm(0.0, 0.2);
    let u0 = make_sign_changing_data(1.0, 4.0, grid)?;
    let run = eulerian_evolve(
        &EulerianState::new(u0.clone()),
        &model,
        2.0,
        EulerianControls { dt: 2e-3, sample_every: 100 },
        BlowupMonitor::for_data(&u0),
    );

    // seeds in the cores of the two bumps, where m is well away from zero
    let seeds: Vec<f64> = (-4..=4).map(|i| 0.2 * i as f64).flat_map(|d| [-2.0 + d, 2.0 + d]).collect::<Vec<_>>();
    let mut seeds = seeds;
    seeds.sort_by(f64::total_cmp);
    let track = momentum_track(&run.snapshots, &model, &seeds)?;
    println!("momentum along {} characteristics: max relative deviation {:.2e}", seeds.len(), track.max_relative_deviation());

    let signs = sign_pattern_check(&run.snapshots, &model, 0.0)?;
    println!("sign pattern kept at {}/{} samples", signs.iter().filter(|&&s| s).count(), signs.len());
    let b = ux_lower_bound_check(&run.snapshots)?;
    println!("min u_x {:.4} vs bound {:.4}", b.min_ux, b.bound);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
