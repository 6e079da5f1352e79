//! Randomized checks of the structural properties each module promises.

use num_complex::Complex64;
use proptest::prelude::*;
use wavelab::diagnostics::momentum;
use wavelab::function_space::{apply_multiplier, helmholtz_convolve, sobolev_norm, spectral_derivative};
use wavelab::lagrangian::{build_ybar, lagrangian_initial, SampledData};
use wavelab::report::Report;
use wavelab::run::parse_config;
use wavelab::semilinear::{evolve, kernel_scan, EvolveControls};
use wavelab::{FluxModel, SampledProfile, UniformGrid};

fn grid(n: usize) -> UniformGrid {
    UniformGrid::periodic(-32.0, 32.0, n).unwrap()
}

/// Up to three Gaussian bumps well inside the domain.
fn bumps() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -8.0..8.0f64, 0.7..2.5f64), 1..4)
}

fn profile(g: UniformGrid, b: &[(f64, f64, f64)]) -> SampledProfile {
    SampledProfile::from_fn(g, |x| b.iter().map(|(a, c, s)| a * (-((x - c) / s).powi(2)).exp()).sum()).unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// O(n²) trapezoid sum with the one-sided end corrections of the scan.
fn brute_force(y: &[f64], yxi: &[f64], w: &[f64], dxi: f64) -> (Vec<f64>, Vec<f64>) {
    let n = w.len();
    let wxi: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * dxi),
            i if i == n - 1 => (3.0 * w[i] - 4.0 * w[i - 1] + w[i - 2]) / (2.0 * dxi),
            i => (w[i + 1] - w[i - 1]) / (2.0 * dxi),
        })
        .collect();
    let c = dxi * dxi / 12.0;
    let (mut p, mut px) = (vec![0.0; n], vec![0.0; n]);
    for i in 0..n {
        let (mut sp, mut sx) = (0.0, 0.0);
        for j in 0..n {
            let weight = if j == 0 || j == n - 1 { 0.5 * dxi } else { dxi };
            let term = weight * (-(y[i] - y[j]).abs()).exp() * w[j];
            sp += term;
            sx += if j > i {
                term
            } else if j < i {
                -term
            } else {
                0.0
            };
        }
        if i > 0 {
            sp -= c * (yxi[i] * w[i] + wxi[i]);
            sx += c * (yxi[i] * w[i] + wxi[i]) - 0.5 * dxi * w[i];
        }
        if i + 1 < n {
            sp += c * (-yxi[i] * w[i] + wxi[i]);
            sx += c * (-yxi[i] * w[i] + wxi[i]) + 0.5 * dxi * w[i];
        }
        p[i] = 0.5 * sp;
        px[i] = 0.5 * sx;
    }
    (p, px)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn second_derivative_matches_differences(c in prop::collection::vec(-2.0..2.0f64, 5), u in -2.0..2.0f64) {
        prop_assume!(c[4].abs() > 0.1);
        let model = FluxModel::new(&c, &[0.0, 1.0], 0.0).unwrap();
        let fd = |h: f64| {
            let f = |x: f64| c.iter().rev().fold(0.0, |acc, a| acc * x + a);
            (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h)
        };
        let (e1, e2) = ((fd(1e-2) - model.f_second(u)).abs(), (fd(1e-3) - model.f_second(u)).abs());
        prop_assert!((70.0..130.0).contains(&(e1 / e2)), "{e1} {e2}");
    }

    #[test]
    fn helmholtz_round_trip(b in bumps()) {
        let w = profile(grid(1024), &b);
        let back = apply_multiplier(&helmholtz_convolve(&w), |_, k| Complex64::new(1.0 + k * k, 0.0));
        prop_assert!(max_diff(back.values(), w.values()) < 1e-10);
        let m = momentum(&helmholtz_convolve(&w));
        prop_assert!(max_diff(m.values(), w.values()) < 1e-8);
    }

    #[test]
    fn sobolev_norms_split(b in bumps()) {
        let u = profile(grid(1024), &b);
        let lhs = sobolev_norm(&u, 0.0).powi(2) + sobolev_norm(&spectral_derivative(&u, 1), 0.0).powi(2);
        prop_assert!((lhs - sobolev_norm(&u, 1.0).powi(2)).abs() < 1e-9 * lhs.max(1.0));
    }

    #[test]
    fn spectral_ops_are_pure(b in bumps()) {
        let u = profile(grid(512), &b);
        let (a, b) = (helmholtz_convolve(&u), helmholtz_convolve(&u));
        prop_assert_eq!(a.values(), b.values());
        prop_assert_eq!(sobolev_norm(&u, 1.5).to_bits(), sobolev_norm(&u, 1.5).to_bits());
    }

    #[test]
    fn ybar_is_monotone_and_lipschitz(b in bumps(), n_xi in 256usize..2048) {
        let (xg, ybar) = build_ybar(&profile(grid(1024), &b), n_xi).unwrap();
        for i in 0..ybar.len() {
            for j in (i + 1..ybar.len()).step_by(37) {
                let d = ybar[j] - ybar[i];
                prop_assert!(d >= 0.0 && d <= xg.xi(j) - xg.xi(i) + 1e-12);
            }
        }
    }

    #[test]
    fn scan_matches_brute_force(b in bumps(), dxi in 0.01..0.1f64, y0 in -5.0..5.0f64) {
        let n = 400;
        let field = |x: f64| b.iter().map(|(a, c, s)| a * (-((x - c) / s).powi(2)).exp()).sum::<f64>();
        let xi: Vec<f64> = (0..n).map(|i| (i as f64 - n as f64 / 2.0) * dxi).collect();
        let w: Vec<f64> = xi.iter().map(|&x| field(x)).collect();
        let yxi: Vec<f64> = xi.iter().map(|&x| 0.2 + field(0.5 * x).abs()).collect();
        let mut y = vec![y0];
        for i in 1..n {
            y.push(y[i - 1] + 0.5 * dxi * (yxi[i - 1] + yxi[i]));
        }
        let fast = kernel_scan(&y, &yxi, &w, dxi, &[]).unwrap();
        let (p, px) = brute_force(&y, &yxi, &w, dxi);
        prop_assert!(max_diff(&fast.p_tilde, &p) < 1e-10);
        prop_assert!(max_diff(&fast.p_tilde_x, &px) < 1e-10);
    }

    #[test]
    fn report_round_trip(entries in prop::collection::btree_map("[a-z_]{1,12}(\\.[a-z]{1,6})?", -1e6..1e6f64, 0..12)) {
        let mut r = Report::new();
        for (k, v) in &entries {
            r.set_f64(k.clone(), *v);
        }
        let back = Report::parse(&r.render()).unwrap();
        for (k, v) in &entries {
            prop_assert_eq!(back.get_f64(k).map(f64::to_bits), Some(v.to_bits()));
        }
        prop_assert_eq!(back.render(), r.render());
    }

    #[test]
    fn config_parse_is_deterministic(dt in 1e-4..1e-1f64, n in 4u32..13) {
        let text = format!("scenario = gaussian\ntime.dt = {dt}\ngrid.n_x = {}\n", 1usize << n);
        let (a, b) = (parse_config(&text).unwrap(), parse_config(&text).unwrap());
        prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
        prop_assert_eq!(a.dt, dt);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn evolution_keeps_bounds(b in bumps(), lambda in 0.0..1.0f64) {
        let g = grid(512);
        let st = lagrangian_initial(&SampledData::new(&profile(g, &b)), &g, 1024).unwrap();
        let run = evolve(&st, &FluxModel::camassa_holm(0.0, lambda), 0.5, EvolveControls { dt: 0.01, sample_every: 10 }).unwrap();
        let e0 = run.report.initial_energy;
        for s in &run.snapshots {
            prop_assert!(s.max_abs_k() <= e0.sqrt() * (1.0 + 1e-6));
            prop_assert!(s.q.iter().all(|&q| q > 0.0));
            prop_assert!(s.y.windows(2).all(|w| w[1] >= w[0]));
        }
    }
}
