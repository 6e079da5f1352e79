//! Pseudo-spectral solver of the nonlocal Eulerian form
//!
//! ```text
//! u_t = -f'(u) u_x - λ u - ∂x (1 - ∂²)^{-1} (g(u) + ½ f''(u) u_x²)
//! ```
//!
//! Fixed-step RK4 in time, Fourier collocation in space with 2/3-rule
//! truncation of the nonlinear terms. Three FFTs per right-hand side: `u` and
//! `u_x` come back packed as one complex inverse, and the two nonlinear terms
//! go forward packed as one complex transform.

use num_complex::Complex64;

use crate::error::{Result, WaveError};
use crate::flux::FluxModel;
use crate::function_space::{
    forward, inverse_real, sobolev_norm, spectral_derivative, top_third_energy_fraction, SampledProfile, UniformGrid,
};
use rustfft::FftPlanner;

#[derive(Debug, Clone, PartialEq)]
pub struct EulerianState {
    pub t: f64,
    pub u: SampledProfile,
}

impl EulerianState {
    pub fn new(u: SampledProfile) -> Self {
        Self { t: 0.0, u }
    }

    pub fn grid(&self) -> &UniformGrid {
        self.u.grid()
    }
}

fn dealias_cutoff(n: usize) -> usize {
    n / 3
}

#[inline]
fn folded(k: usize, n: usize) -> usize {
    if k <= n / 2 {
        k
    } else {
        n - k
    }
}

fn inverse_complex(mut spectrum: Vec<Complex64>) -> Vec<Complex64> {
    let n = spectrum.len();
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n));
    plan.process(&mut spectrum);
    let scale = 1.0 / n as f64;
    for c in &mut spectrum {
        *c *= scale;
    }
    spectrum
}

fn forward_complex(mut data: Vec<Complex64>) -> Vec<Complex64> {
    let n = data.len();
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n));
    plan.process(&mut data);
    data
}

thread_local! {
    static PLANNER: std::cell::RefCell<FftPlanner<f64>> = std::cell::RefCell::new(FftPlanner::new());
}

/// Right-hand side plus `min_x u_x` of the dealiased state.
fn rhs_with_slope(state: &EulerianState, model: &FluxModel) -> Result<(Vec<f64>, f64)> {
    let grid = *state.grid();
    let n = grid.len();
    let cutoff = dealias_cutoff(n);
    let u_hat = forward(state.u.values());

    // pack û + i·(iω û) so one inverse yields u + i u_x
    let mut packed = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        if folded(k, n) > cutoff {
            continue;
        }
        let w = grid.wavenumber(k);
        let ux_hat = if k == n / 2 { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, w) * u_hat[k] };
        packed[k] = u_hat[k] + Complex64::new(0.0, 1.0) * ux_hat;
    }
    let phys = inverse_complex(packed);

    let mut min_ux = f64::INFINITY;
    let mut nonlinear = Vec::with_capacity(n);
    for c in &phys {
        let (u, ux) = (c.re, c.im);
        min_ux = min_ux.min(ux);
        let transport = model.f_prime(u) * ux;
        let source = model.g(u) + 0.5 * model.f_second(u) * ux * ux;
        nonlinear.push(Complex64::new(transport, source));
    }
    let z = forward_complex(nonlinear);

    let lambda = model.lambda();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let mut val = -lambda * u_hat[k];
        if folded(k, n) <= cutoff && k != n / 2 {
            let zc = z[(n - k) % n].conj();
            let transport = 0.5 * (z[k] + zc);
            let source = Complex64::new(0.0, -0.5) * (z[k] - zc);
            let w = grid.wavenumber(k);
            val -= transport + Complex64::new(0.0, w / (1.0 + w * w)) * source;
        }
        out[k] = val;
    }
    let values = inverse_real(out);
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(WaveError::NonFinite { what: "eulerian rhs", index });
    }
    Ok((values, min_ux))
}

/// `u_t` for the current state.
pub fn eulerian_rhs(state: &EulerianState, model: &FluxModel) -> Result<SampledProfile> {
    let (values, _) = rhs_with_slope(state, model)?;
    SampledProfile::new(*state.grid(), values)
}

fn shifted(state: &EulerianState, d: &[f64], h: f64) -> EulerianState {
    let values = state.u.values().iter().zip(d).map(|(u, du)| u + h * du).collect();
    EulerianState { t: state.t + h, u: SampledProfile::new(*state.grid(), values).unwrap_or_else(|_| state.u.map(|_| f64::NAN)) }
}

fn step_with_slope(state: &EulerianState, model: &FluxModel, dt: f64) -> Result<(EulerianState, f64)> {
    let (k1, min_ux) = rhs_with_slope(state, model)?;
    let (k2, _) = rhs_with_slope(&shifted(state, &k1, 0.5 * dt), model)?;
    let (k3, _) = rhs_with_slope(&shifted(state, &k2, 0.5 * dt), model)?;
    let (k4, _) = rhs_with_slope(&shifted(state, &k3, dt), model)?;
    let values: Vec<f64> =
        (0..k1.len()).map(|i| state.u.values()[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect();
    let u = SampledProfile::new(*state.grid(), values)?;
    Ok((EulerianState { t: state.t + dt, u }, min_ux))
}

/// One RK4 step.
pub fn eulerian_step(state: &EulerianState, model: &FluxModel, dt: f64) -> Result<EulerianState> {
    if !dt.is_finite() || dt == 0.0 {
        return Err(WaveError::InvalidArgument(format!("dt must be finite and nonzero, got {dt}")));
    }
    step_with_slope(state, model, dt).map(|(s, _)| s)
}

/// `e^{2λt} ‖u‖²_{H¹}`.
pub fn weighted_energy(state: &EulerianState, lambda: f64) -> f64 {
    (2.0 * lambda * state.t).exp() * sobolev_norm(&state.u, 1.0).powi(2)
}

/// Discrete stand-in for `ū ∈ H^s, s > 3/2`: the spectrum has decayed below
/// `1e-10` of its peak before the dealiasing cutoff.
pub fn spectral_tail_ok(u: &SampledProfile) -> bool {
    let hat = forward(u.values());
    let n = hat.len();
    let peak = hat.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    if peak == 0.0 {
        return true;
    }
    let cutoff = dealias_cutoff(n);
    hat.iter().enumerate().filter(|(k, _)| folded(*k, n) >= cutoff).all(|(_, c)| c.norm() <= 1e-10 * peak)
}

/// Slope-threshold detector for wave breaking.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupMonitor {
    pub threshold: f64,
    /// `(t, inf_x u_x)` at every step; not assumed monotone.
    pub min_ux_history: Vec<(f64, f64)>,
}

impl BlowupMonitor {
    pub fn with_threshold(threshold: f64) -> Result<Self> {
        if !(threshold < 0.0) {
            return Err(WaveError::InvalidArgument(format!("blow-up threshold must be negative, got {threshold}")));
        }
        Ok(Self { threshold, min_ux_history: Vec::new() })
    }

    /// Default threshold `-50 (1 + ‖ū_x‖_∞)`.
    pub fn for_data(ubar: &SampledProfile) -> Self {
        let slope = spectral_derivative(ubar, 1).max_abs();
        Self { threshold: -50.0 * (1.0 + slope), min_ux_history: Vec::new() }
    }

    pub fn min_ux(&self) -> f64 {
        self.min_ux_history.iter().fold(f64::INFINITY, |m, (_, v)| m.min(*v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StopReason {
    Completed,
    BlowupDetected,
    NumericalFailure(String),
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::Completed => "completed",
            StopReason::BlowupDetected => "blowup_detected",
            StopReason::NumericalFailure(_) => "numerical_failure",
        }
    }
}

/// One sample of the run's time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub weighted_energy: f64,
    pub min_ux: f64,
    pub max_abs_u: f64,
}

#[derive(Debug, Clone)]
pub struct EulerianRun {
    pub snapshots: Vec<EulerianState>,
    pub series: Vec<SeriesRow>,
    pub stop_reason: StopReason,
    pub monitor: BlowupMonitor,
    /// Initial spectrum failed the tail test, or a sample carried more than
    /// `1e-10` of its energy in the top third of the spectrum.
    pub under_resolved: bool,
    pub max_top_third_fraction: f64,
}

impl EulerianRun {
    pub fn final_state(&self) -> &EulerianState {
        self.snapshots.last().expect("at least the initial snapshot")
    }

    /// Largest relative deviation of the weighted energy from its initial value.
    pub fn energy_drift_rel(&self) -> f64 {
        let e0 = self.series.first().map(|r| r.weighted_energy).unwrap_or(0.0);
        self.series.iter().fold(0.0, |m, r| {
            let d = if e0 > 0.0 { (r.weighted_energy - e0).abs() / e0 } else { r.weighted_energy.abs() };
            m.max(d)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerianControls {
    pub dt: f64,
    pub sample_every: usize,
}

fn series_row(state: &EulerianState, lambda: f64) -> SeriesRow {
    SeriesRow {
        t: state.t,
        weighted_energy: weighted_energy(state, lambda),
        min_ux: spectral_derivative(&state.u, 1).min(),
        max_abs_u: state.u.max_abs(),
    }
}

/// Integrates until `final_time` or until `inf u_x` drops below the monitor
/// threshold. Failures are reported through the stop reason, never as `Err`.
pub fn eulerian_evolve(
    state0: &EulerianState,
    model: &FluxModel,
    final_time: f64,
    controls: EulerianControls,
    mut monitor: BlowupMonitor,
) -> EulerianRun {
    let lambda = model.lambda();
    let mut under_resolved = !spectral_tail_ok(&state0.u);
    let mut max_top = top_third_energy_fraction(&state0.u);
    let mut snapshots = vec![state0.clone()];
    let mut series = vec![series_row(state0, lambda)];
    let steps = if final_time > 0.0 && controls.dt > 0.0 { (final_time / controls.dt).round().max(1.0) as usize } else { 0 };
    let dt = if steps > 0 { final_time / steps as f64 } else { 0.0 };
    let every = controls.sample_every.max(1);
    let mut state = state0.clone();
    let mut stop_reason = if steps == 0 {
        StopReason::NumericalFailure("final time and dt must be positive".into())
    } else {
        StopReason::Completed
    };

    for s in 1..=steps {
        match step_with_slope(&state, model, dt) {
            Ok((next, min_ux_before)) => {
                monitor.min_ux_history.push((state.t, min_ux_before));
                state = next;
            }
            Err(err) => {
                stop_reason = StopReason::NumericalFailure(err.to_string());
                break;
            }
        }
        let row = series_row(&state, lambda);
        let blown = row.min_ux < monitor.threshold;
        if s % every == 0 || s == steps || blown {
            let top = top_third_energy_fraction(&state.u);
            max_top = max_top.max(top);
            snapshots.push(state.clone());
            series.push(row);
        }
        if blown {
            monitor.min_ux_history.push((state.t, row.min_ux));
            stop_reason = StopReason::BlowupDetected;
            break;
        }
    }
    if max_top > 1e-10 {
        under_resolved = true;
    }
    EulerianRun { snapshots, series, stop_reason, monitor, under_resolved, max_top_third_fraction: max_top }
}

/// Characteristic paths `dy/dt = f'(u(t, y))` through a stored trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Characteristics {
    pub times: Vec<f64>,
    pub seeds: Vec<f64>,
    /// `paths[n][i]` is the position of seed `i` at `times[n]`.
    pub paths: Vec<Vec<f64>>,
    /// `∂y/∂x₀` by centered differences across adjacent seeds (one-sided at the ends).
    pub y_x: Vec<Vec<f64>>,
    /// Seeds whose path left the computational box.
    pub exited: Vec<bool>,
}

/// Traces characteristics with RK4 between consecutive snapshots. The
/// half-step profile comes from cubic Hermite interpolation in time using
/// `u_t` at the snapshots; space interpolation is cubic.
pub fn characteristics(trajectory: &[EulerianState], model: &FluxModel, seeds: &[f64]) -> Result<Characteristics> {
    if trajectory.is_empty() {
        return Err(WaveError::InvalidArgument("empty trajectory".into()));
    }
    if seeds.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(WaveError::InvalidArgument("seeds must be strictly increasing".into()));
    }
    let grid = *trajectory[0].grid();
    let (lo, hi) = (grid.x_min(), grid.x_last());
    let mut exited: Vec<bool> = seeds.iter().map(|&s| s < lo || s > hi).collect();
    let mut pos = seeds.to_vec();
    let mut times = vec![trajectory[0].t];
    let mut paths = vec![pos.clone()];
    let mut rates = vec![eulerian_rhs(&trajectory[0], model)?];

    for n in 1..trajectory.len() {
        let (a, b) = (&trajectory[n - 1], &trajectory[n]);
        rates.push(eulerian_rhs(b, model)?);
        let h = b.t - a.t;
        let (ua, ub) = (a.u.values(), b.u.values());
        let (ra, rb) = (rates[n - 1].values(), rates[n].values());
        let mid: Vec<f64> = (0..ua.len()).map(|i| 0.5 * (ua[i] + ub[i]) + h / 8.0 * (ra[i] - rb[i])).collect();
        let mid = SampledProfile::new(grid, mid)?;
        let speed = |p: &SampledProfile, y: f64| model.f_prime(p.interpolate(y));
        for (i, y) in pos.iter_mut().enumerate() {
            if exited[i] {
                continue;
            }
            let k1 = speed(&a.u, *y);
            let k2 = speed(&mid, *y + 0.5 * h * k1);
            let k3 = speed(&mid, *y + 0.5 * h * k2);
            let k4 = speed(&b.u, *y + h * k3);
            *y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if *y < lo || *y > hi {
                exited[i] = true;
            }
        }
        times.push(b.t);
        paths.push(pos.clone());
    }

    let y_x = paths
        .iter()
        .map(|p| {
            let m = p.len();
            (0..m)
                .map(|i| {
                    if m < 2 {
                        1.0
                    } else if i == 0 {
                        (p[1] - p[0]) / (seeds[1] - seeds[0])
                    } else if i == m - 1 {
                        (p[m - 1] - p[m - 2]) / (seeds[m - 1] - seeds[m - 2])
                    } else {
                        (p[i + 1] - p[i - 1]) / (seeds[i + 1] - seeds[i - 1])
                    }
                })
                .collect()
        })
        .collect();
    Ok(Characteristics { times, seeds: seeds.to_vec(), paths, y_x, exited })
}
