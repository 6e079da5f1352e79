// Helmholtz inversion, spectral derivatives and Sobolev norms on a periodic
// grid.

use wavelab::function_space::{helmholtz_convolve, helmholtz_convolve_dx, sobolev_norm, spectral_derivative};
use wavelab::{Result, SampledProfile, UniformGrid};

pub fn run_example() -> Result<()> {
    let grid = UniformGrid::periodic(-30.0, 30.0, 4096)?;

    // a narrow unit-mass Gaussian behaves like a delta: p * w ≈ ½e^{-|x|}
    let s: f64 = 0.05;
    let w = SampledProfile::from_fn(grid, |x| (-x * x / (2.0 * s * s)).exp() / (s * (2.0 * std::f64::consts::PI).sqrt()))?;
    let (p, px) = (helmholtz_convolve(&w), helmholtz_convolve_dx(&w));
    for x in [-3.0, -1.0, 1.0, 3.0] {
        let j = ((x - grid.x_min()) / grid.dx()).round() as usize;
        println!(
            "x={x:+.1}  p*w={:.6} (green {:.6})  d/dx={:+.6} (green {:+.6})",
            p.values()[j],
            0.5 * (-f64::abs(x)).exp(),
            px.values()[j],
            -0.5 * x.signum() * (-f64::abs(x)).exp()
        );
    }

    let u = SampledProfile::from_fn(grid, |x| (-x * x / 2.0).exp())?;
    let ux = spectral_derivative(&u, 1);
    let split = sobolev_norm(&u, 0.0).powi(2) + sobolev_norm(&ux, 0.0).powi(2);
    println!("|u|_H1^2 = {:.12}, |u|^2 + |u_x|^2 = {:.12}", sobolev_norm(&u, 1.0).powi(2), split);
    for s in [0.0, 1.0, 2.0, 3.0] {
        println!("H^{s} norm {:.6}", sobolev_norm(&u, s));
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
