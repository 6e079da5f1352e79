// Perturbing the data by δ moves the solution by O(δ): halving δ halves the
// sup distance on a window.

use wavelab::diagnostics::{dependence_study, DependenceSetup};
use wavelab::scenarios::Scenario;
use wavelab::{FluxModel, Result, UniformGrid};

pub fn run_example() -> Result<()> {
    let grid = UniformGrid::periodic(-32.0, 32.0, 1024)?;
    let setup = DependenceSetup {
        model: FluxModel::camassa_holm(0.0, 0.0),
        x_grid: grid,
        n_xi: 2048,
        dt: 1e-2,
        sample_every: 10,
        window: 10.0,
    };
    let ubar = Scenario::Gaussian { amplitude: 0.5, sigma: 1.0 }.sample(grid)?;
    let study = dependence_study(&ubar, 1e-2, 3, 1.0, &setup)?;
    for c in &study.curves {
        println!("delta={:.2e}  sup distance {:.3e}", c.size, c.sup());
    }
    println!("ratios {:?}  pass {}", study.ratios, study.pass);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
