// The O(n) exponential-kernel scan against a direct O(n²) sum.

use std::time::Instant;

use wavelab::semilinear::kernel_scan;
use wavelab::Result;

pub fn run_example() -> Result<()> {
    for n in [500, 1000, 2000] {
        let dxi = 20.0 / n as f64;
        let xi: Vec<f64> = (0..n).map(|i| -10.0 + i as f64 * dxi).collect();
        let w: Vec<f64> = xi.iter().map(|x| (-x * x).exp() * (3.0 * x).cos()).collect();
        let yxi: Vec<f64> = xi.iter().map(|x| 1.0 - 0.5 * (-x * x).exp()).collect();
        let mut y = vec![-10.0];
        for i in 1..n {
            y.push(y[i - 1] + 0.5 * dxi * (yxi[i - 1] + yxi[i]));
        }

        let t = Instant::now();
        let fast = kernel_scan(&y, &yxi, &w, dxi, &[])?;
        let t_fast = t.elapsed();

        // plain trapezoid; differs from the scan by its end corrections only
        let t = Instant::now();
        let slow: Vec<f64> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let h = if j == 0 || j == n - 1 { 0.5 * dxi } else { dxi };
                        0.5 * h * (-(y[i] - y[j]).abs()).exp() * w[j]
                    })
                    .sum()
            })
            .collect();
        let t_slow = t.elapsed();
        let diff = fast.p_tilde.iter().zip(&slow).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        println!("n={n:<5} scan {t_fast:>10.2?}  direct {t_slow:>10.2?}  max diff {diff:.2e}");
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
