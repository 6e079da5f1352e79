//! Executable versions of the conservation laws and the global-existence
//! arguments: momentum transport along characteristics, the momentum sign
//! pattern, the slope lower bound, small-data decay, the energy identity for
//! Lagrangian runs and continuous dependence on the data.

use num_complex::Complex64;

use crate::error::{Result, WaveError};
use crate::eulerian::{characteristics, EulerianState};
use crate::flux::FluxModel;
use crate::function_space::{apply_multiplier, sobolev_norm, spectral_derivative, SampledProfile, UniformGrid};
use crate::lagrangian::{lagrangian_initial, to_eulerian, SampledData};
use crate::report::Report;
use crate::semilinear::{evolve, EvolveControls, LagrangianRun};

/// `m = u - u_xx`, spectrally.
pub fn momentum(u: &SampledProfile) -> SampledProfile {
    apply_multiplier(u, |_, w| Complex64::new(1.0 + w * w, 0.0))
}

/// Pass/fail/not-applicable outcome of one check, as written to reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
        }
    }
}

fn transport_gate(model: &FluxModel, trajectory: &[EulerianState]) -> Result<()> {
    let range = trajectory.iter().fold(1.0f64, |m, s| m.max(s.u.max_abs()));
    let cond = model.check_theorem_conditions(range);
    if cond.transport_holds() {
        Ok(())
    } else {
        Err(WaveError::NotApplicable(format!(
            "momentum transport needs f''' = 0 and g' = 2 f'' u (f''' = 0: {}, g' = 2 f'' u: {})",
            cond.f_triple_prime_zero, cond.g_prime_matches
        )))
    }
}

/// `m(t, y(t,x)) y_x(t,x)² e^{λt}` along the characteristics issued from
/// `seeds` (labelled by their initial positions, so `y_x(0) = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumTrack {
    pub seeds: Vec<f64>,
    pub times: Vec<f64>,
    /// `values[n][i]` belongs to `times[n]` and `seeds[i]`.
    pub values: Vec<Vec<f64>>,
}

impl MomentumTrack {
    /// Largest `|value / initial - 1|` over tracks whose initial value exceeds
    /// `1e-8` of the largest one; zero when every track is zero.
    pub fn max_relative_deviation(&self) -> f64 {
        let first = &self.values[0];
        let floor = 1e-8 * first.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut dev = 0.0f64;
        for row in &self.values {
            for (i, &v) in row.iter().enumerate() {
                if first[i].abs() > floor && floor > 0.0 {
                    dev = dev.max((v / first[i] - 1.0).abs());
                }
            }
        }
        dev
    }
}

pub fn momentum_track(trajectory: &[EulerianState], model: &FluxModel, seeds: &[f64]) -> Result<MomentumTrack> {
    transport_gate(model, trajectory)?;
    if trajectory.is_empty() {
        return Err(WaveError::InvalidArgument("empty trajectory".into()));
    }
    // each seed gets two close companions for y_x
    let delta = 0.25 * trajectory[0].grid().dx();
    let mut sorted = seeds.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    if sorted.windows(2).any(|w| w[1] - w[0] <= 2.0 * delta) {
        return Err(WaveError::InvalidArgument("seeds closer than half a grid spacing".into()));
    }
    let all: Vec<f64> = sorted.iter().flat_map(|&s| [s - delta, s, s + delta]).collect();
    let ch = characteristics(trajectory, model, &all)?;
    let lambda = model.lambda();
    let mut values = Vec::with_capacity(trajectory.len());
    for (n, state) in trajectory.iter().enumerate() {
        let m = momentum(&state.u);
        let grow = (lambda * state.t).exp();
        let row = (0..sorted.len())
            .map(|i| {
                let p = &ch.paths[n];
                let y_x = (p[3 * i + 2] - p[3 * i]) / (2.0 * delta);
                m.interpolate(p[3 * i + 1]) * y_x * y_x * grow
            })
            .collect();
        values.push(row);
    }
    Ok(MomentumTrack { seeds: sorted, times: ch.times, values })
}

/// Maximum relative deviation of the momentum tracks from their initial
/// values. Errors with "invariant not applicable" outside the transport case.
pub fn momentum_invariant_check(trajectory: &[EulerianState], model: &FluxModel, seeds: &[f64]) -> Result<f64> {
    Ok(momentum_track(trajectory, model, seeds)?.max_relative_deviation())
}

/// Whether `m ≤ 0` left of the characteristic through `x0` and `m ≥ 0` right
/// of it, up to `1e-6 max|m|`, at every stored time.
pub fn sign_pattern_check(trajectory: &[EulerianState], model: &FluxModel, x0: f64) -> Result<Vec<bool>> {
    transport_gate(model, trajectory)?;
    let ch = characteristics(trajectory, model, &[x0])?;
    Ok(trajectory
        .iter()
        .zip(&ch.paths)
        .map(|(state, path)| {
            let m = momentum(&state.u);
            let tol = 1e-6 * m.max_abs();
            let grid = m.grid();
            m.values().iter().enumerate().all(|(j, &v)| {
                let x = grid.x(j);
                (x > path[0] || v <= tol) && (x < path[0] || v >= -tol)
            })
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeBound {
    pub min_ux: f64,
    /// `-‖ū‖_{H¹}/√2`.
    pub bound: f64,
    pub pass: bool,
}

/// Smallest spectral `u_x` over the trajectory against `-‖ū‖_{H¹}/√2`.
pub fn ux_lower_bound_check(trajectory: &[EulerianState]) -> Result<SlopeBound> {
    let first = trajectory.first().ok_or_else(|| WaveError::InvalidArgument("empty trajectory".into()))?;
    let bound = -sobolev_norm(&first.u, 1.0) / std::f64::consts::SQRT_2;
    let min_ux = trajectory.iter().fold(0.0f64, |m, s| m.min(spectral_derivative(&s.u, 1).min()));
    Ok(SlopeBound { min_ux, bound, pass: min_ux >= bound - 1e-6 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurve {
    pub times: Vec<f64>,
    /// `‖u(t)‖²_{H^s}`.
    pub norm_sq: Vec<f64>,
    /// `‖ū‖²_{H^s} e^{-λt}`.
    pub bound: Vec<f64>,
    pub pass: bool,
}

/// `‖u(t)‖²_{H^s} ≤ ‖ū‖²_{H^s} e^{-λt} (1 + 1e-3)` at every stored time.
pub fn small_data_decay_check(trajectory: &[EulerianState], model: &FluxModel, s: f64) -> Result<DecayCurve> {
    let first = trajectory.first().ok_or_else(|| WaveError::InvalidArgument("empty trajectory".into()))?;
    let n0 = sobolev_norm(&first.u, s).powi(2);
    let lambda = model.lambda();
    let times: Vec<f64> = trajectory.iter().map(|st| st.t).collect();
    let norm_sq: Vec<f64> = trajectory.iter().map(|st| sobolev_norm(&st.u, s).powi(2)).collect();
    let bound: Vec<f64> = times.iter().map(|t| n0 * (-lambda * (t - first.t)).exp()).collect();
    let pass = norm_sq.iter().zip(&bound).all(|(n, b)| *n <= b * (1.0 + 1e-3));
    Ok(DecayCurve { times, norm_sq, bound, pass })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayIdentity {
    /// Largest `|e^{2λt} ‖u(t)‖²_{H¹} / E₀ - 1|` over the samples used.
    pub max_deviation: f64,
    /// Samples skipped because a node sat on the breaking locus.
    pub excluded: usize,
}

/// Compares the Eulerian `H¹` energy of the reconstructed solution, weighted by
/// `e^{2λt}`, with the Lagrangian `E₀`.
pub fn decay_identity_check(run: &LagrangianRun, model: &FluxModel, x_grid: &UniformGrid) -> DecayIdentity {
    let e0 = run.report.initial_energy;
    let lambda = model.lambda();
    let mut out = DecayIdentity { max_deviation: 0.0, excluded: 0 };
    for state in &run.snapshots {
        if !state.breaking_nodes().is_empty() {
            out.excluded += 1;
            continue;
        }
        let u = to_eulerian(state, lambda, x_grid);
        let e = (2.0 * lambda * state.t).exp() * sobolev_norm(&u, 1.0).powi(2);
        let dev = if e0 > 0.0 { (e / e0 - 1.0).abs() } else { e.abs() };
        out.max_deviation = out.max_deviation.max(dev);
    }
    out
}

/// Resolution and window for the continuous-dependence study.
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceSetup {
    pub model: FluxModel,
    pub x_grid: UniformGrid,
    pub n_xi: usize,
    pub dt: f64,
    pub sample_every: usize,
    /// Distances are measured for `|x| ≤ window`.
    pub window: f64,
}

/// Perturbation direction with unit `H¹` norm on `grid`.
pub fn perturbation_shape(grid: UniformGrid) -> Result<SampledProfile> {
    let raw = SampledProfile::from_fn(grid, |x| (-(x - 1.0) * (x - 1.0)).exp())?;
    let norm = sobolev_norm(&raw, 1.0);
    Ok(raw.map(|v| v / norm))
}

fn window_distance(a: &SampledProfile, b: &SampledProfile, window: f64) -> f64 {
    let grid = a.grid();
    (0..grid.len()).filter(|&j| grid.x(j).abs() <= window).fold(0.0, |m, j| m.max((a.values()[j] - b.values()[j]).abs()))
}

fn lagrangian_profiles(ubar: &SampledProfile, setup: &DependenceSetup, final_time: f64) -> Result<Vec<(f64, SampledProfile)>> {
    let state = lagrangian_initial(&SampledData::new(ubar), &setup.x_grid, setup.n_xi)?;
    let run = evolve(&state, &setup.model, final_time, EvolveControls { dt: setup.dt, sample_every: setup.sample_every })?;
    Ok(run.snapshots.iter().map(|s| (s.t, to_eulerian(s, setup.model.lambda(), &setup.x_grid))).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceCurve {
    pub size: f64,
    pub times: Vec<f64>,
    /// `sup_{|x| ≤ window} |u - u_δ|` at each time.
    pub distance: Vec<f64>,
}

impl DistanceCurve {
    pub fn sup(&self) -> f64 {
        self.distance.iter().fold(0.0, |m, d| m.max(*d))
    }
}

/// Runs the Lagrangian solver on `ū` and on `ū + size·φ` with
/// [`perturbation_shape`] `φ`, and records their distance on the window.
pub fn continuous_dependence_check(
    ubar: &SampledProfile,
    size: f64,
    final_time: f64,
    setup: &DependenceSetup,
) -> Result<DistanceCurve> {
    let base = lagrangian_profiles(ubar, setup, final_time)?;
    dependence_against(&base, ubar, size, final_time, setup)
}

fn dependence_against(
    base: &[(f64, SampledProfile)],
    ubar: &SampledProfile,
    size: f64,
    final_time: f64,
    setup: &DependenceSetup,
) -> Result<DistanceCurve> {
    let phi = perturbation_shape(*ubar.grid())?;
    let perturbed = ubar.zip_with(&phi, |u, p| u + size * p);
    let other = lagrangian_profiles(&perturbed, setup, final_time)?;
    let times = base.iter().map(|(t, _)| *t).collect();
    let distance = base.iter().zip(&other).map(|((_, a), (_, b))| window_distance(a, b, setup.window)).collect();
    Ok(DistanceCurve { size, times, distance })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DependenceStudy {
    pub curves: Vec<DistanceCurve>,
    /// `sup d(δ/2) / sup d(δ)` for consecutive sizes.
    pub ratios: Vec<f64>,
    pub pass: bool,
}

/// Halves the perturbation `levels - 1` times starting from `size`; passes
/// when each halving shrinks the sup distance by at least a quarter.
pub fn dependence_study(
    ubar: &SampledProfile,
    size: f64,
    levels: usize,
    final_time: f64,
    setup: &DependenceSetup,
) -> Result<DependenceStudy> {
    let base = lagrangian_profiles(ubar, setup, final_time)?;
    let curves = (0..levels)
        .map(|l| dependence_against(&base, ubar, size / 2f64.powi(l as i32), final_time, setup))
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = curves.windows(2).map(|c| c[1].sup() / c[0].sup()).collect();
    let pass = ratios.iter().all(|r| *r <= 0.75);
    Ok(DependenceStudy { curves, ratios, pass })
}

/// Writes `check_<name>` and any metrics into `report`.
pub fn record(report: &mut Report, name: &str, verdict: Verdict, metrics: &[(&str, f64)]) {
    report.set(format!("check_{name}"), verdict.as_str());
    for (k, v) in metrics {
        report.set_f64(format!("{name}.{k}"), *v);
    }
}
