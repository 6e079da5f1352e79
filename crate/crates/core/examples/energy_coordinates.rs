// The energy coordinate: ξ = x + ∫ ū_x², its inverse ȳ and the initial
// Lagrangian state, reconstructed back on the x grid.

use wavelab::lagrangian::{build_ybar, initial_state, to_eulerian, SampledData};
use wavelab::semilinear::lagrangian_energy;
use wavelab::{Result, SampledProfile, UniformGrid};

pub fn run_example() -> Result<()> {
    let grid = UniformGrid::periodic(-16.0, 16.0, 1024)?;
    let u = SampledProfile::from_fn(grid, |x| (2.0 * x).sin() * (-x * x / 2.0).exp())?;
    let (xi_grid, ybar) = build_ybar(&u, 8192)?;
    println!("xi in [{:.4}, {:.4}] with {} nodes", xi_grid.xi_min(), xi_grid.xi(xi_grid.len() - 1), xi_grid.len());

    let worst = ybar.windows(2).map(|w| (w[1] - w[0]) / xi_grid.dxi()).fold(f64::INFINITY, f64::min);
    println!("smallest slope of ybar {worst:.4} (steep data stretches xi)");

    let state = initial_state(&SampledData::new(&u), xi_grid, &ybar);
    let back = to_eulerian(&state, 0.0, &grid);
    let err = back.values().iter().zip(u.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    println!("energy {:.10}, round trip error {err:.2e}", lagrangian_energy(&state));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
