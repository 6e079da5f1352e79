//! The semilinear `(k, v, q)` system in energy coordinates.
//!
//! ```text
//! k_t = -P̃_x
//! v_t = 2(e^{λt} g(e^{-λt}k) - P̃) cos²(v/2) - e^{-λt} f''(e^{-λt}k) sin²(v/2)
//! q_t = ½ sin v · q (e^{-λt} f''(e^{-λt}k) + 2 e^{λt} g(e^{-λt}k) - 2P̃)
//! y_t = f'(e^{-λt}k)
//! ```
//!
//! `P̃` and `P̃_x` are the Helmholtz kernel integrals written in ξ. Both are
//! evaluated in O(n) by a forward and a backward exponential scan that only
//! ever multiplies by per-interval decay factors `e^{-ΔY}` with `ΔY ≥ 0`.
//!
//! Kernel distances come from the evolved positions `y`. All ξ-integrals use
//! trapezoid weights. The kernel has a kink on the diagonal, so the sums carry
//! the Euler–Maclaurin jump terms `-(dξ²/12) Y_ξ w` (for `P̃`) and
//! `(dξ²/12) w_ξ` (for `P̃_x`), which makes them fourth order in `dξ` for
//! smooth states.
//!
//! Slope jumps of the data stay at fixed labels. The ξ-grid puts each one in
//! the middle of a cell (the state's `kink_cells`); that cell is split in two
//! halves with one-sided cubic limits at its midpoint, and differences never
//! reach across it. Peaked data then keeps the same order.

use crate::error::{Result, WaveError};
use crate::flux::FluxModel;
use crate::lagrangian::LagrangianState;
use crate::quadrature::{
    centered_difference, centered_difference_split, cumulative_corrected, midpoint_limits, split_trapezoid, split_weights,
};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq)]
pub struct NonlocalTerms {
    pub p_tilde: Vec<f64>,
    pub p_tilde_x: Vec<f64>,
}

impl NonlocalTerms {
    pub fn max_abs(&self) -> f64 {
        self.p_tilde.iter().chain(&self.p_tilde_x).fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControls {
    pub dt: f64,
}

/// Time derivatives of the four state components.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    pub dk: Vec<f64>,
    pub dv: Vec<f64>,
    pub dq: Vec<f64>,
    pub dy: Vec<f64>,
}

#[inline]
fn cos2_half(v: f64) -> f64 {
    0.5 * (1.0 + v.cos())
}

#[inline]
fn sin2_half(v: f64) -> f64 {
    0.5 * (1.0 - v.cos())
}

/// `Y(ξᵢ) = ∫_{ξ_min}^{ξᵢ} cos²(v/2) q dξ`.
pub fn cumulative_y(state: &LagrangianState) -> Vec<f64> {
    let density = y_density(state);
    let d = centered_difference(&density, state.xi_grid.dxi());
    let mut y = cumulative_corrected(&density, &d, state.xi_grid.dxi());
    // the endpoint correction must not make Y decrease across collapsed cells
    for i in 1..y.len() {
        if y[i] < y[i - 1] {
            y[i] = y[i - 1];
        }
    }
    y
}

fn y_density(state: &LagrangianState) -> Vec<f64> {
    state.v.iter().zip(&state.q).map(|(&v, &q)| cos2_half(v) * q).collect()
}

/// Kernel integrand `w = (e^{λt} g(e^{-λt}k) cos²(v/2) + ½ e^{-λt} f''(e^{-λt}k) sin²(v/2)) q`.
pub fn source_density(state: &LagrangianState, model: &FluxModel) -> Vec<f64> {
    let grow = (model.lambda() * state.t).exp();
    let decay = 1.0 / grow;
    state
        .k
        .iter()
        .zip(&state.v)
        .zip(&state.q)
        .map(|((&k, &v), &q)| {
            let u = decay * k;
            (grow * model.g(u) * cos2_half(v) + 0.5 * decay * model.f_second(u) * sin2_half(v)) * q
        })
        .collect()
}

/// A quadrature point of the kernel sums. `as_left` is its weight in the sum
/// of a node to its right, `as_right` in the sum of a node to its left; the
/// two differ by the Euler–Maclaurin end terms, whose kernel slope changes
/// sign with the side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub y: f64,
    pub as_left: f64,
    pub as_right: f64,
}

/// Quadrature points for the split rule of [`crate::quadrature::split_trapezoid`]
/// applied to `w(η) e^{-|Yᵢ - Y(η)|}`, plus each real node's own
/// contributions to `∫ e^{-|ΔY|} w` and `∫ sgn · e^{-|ΔY|} w`. Returns the
/// points in ξ order and the position of every real node among them.
pub fn scan_points(
    y: &[f64],
    y_xi: &[f64],
    w: &[f64],
    dxi: f64,
    cuts: &[usize],
) -> (Vec<ScanPoint>, Vec<usize>, Vec<(f64, f64)>) {
    let n = w.len();
    let e = dxi * dxi;
    let w_xi = centered_difference_split(w, dxi, cuts);
    let weights = split_weights(n, dxi, cuts);
    let is_a = |i: usize| cuts.contains(&i) && i + 1 < n;
    let is_b = |i: usize| i > 0 && cuts.contains(&(i - 1));
    let slope_l = |i: usize| y_xi[i] * w[i] + w_xi[i];
    let slope_r = |i: usize| -y_xi[i] * w[i] + w_xi[i];

    let mut points = Vec::with_capacity(n + cuts.len());
    let mut index = Vec::with_capacity(n);
    let mut own = Vec::with_capacity(n);
    for i in 0..n {
        let end = if is_a(i) { -e / 16.0 } else { 0.0 } + if is_b(i) { e / 16.0 } else { 0.0 };
        index.push(points.len());
        points.push(ScanPoint {
            y: y[i],
            as_left: weights[i] * w[i] + end * slope_l(i),
            as_right: weights[i] * w[i] + end * slope_r(i),
        });
        // kernel kink at the node itself: the pieces on either side close
        // with their own one-sided value and end term; the `sgn` integrand
        // takes opposite signs on the two sides
        let (mut p, mut x) = (weights[i] * w[i], 0.0);
        if i > 0 {
            let (h, c) = if is_b(i) { (0.25 * dxi, e / 48.0) } else { (0.5 * dxi, e / 12.0) };
            p -= c * slope_l(i);
            x += c * slope_l(i) - h * w[i];
        }
        if i + 1 < n {
            let (h, c) = if is_a(i) { (0.25 * dxi, e / 48.0) } else { (0.5 * dxi, e / 12.0) };
            p += c * slope_r(i);
            x += c * slope_r(i) + h * w[i];
        }
        own.push((p, x));

        if is_a(i) {
            let (yl, yr) = midpoint_limits(y, i, cuts);
            let (wl, wr) = midpoint_limits(w, i, cuts);
            let (sl, sr) = midpoint_limits(y_xi, i, cuts);
            let (dl, dr) = midpoint_limits(&w_xi, i, cuts);
            let (lo, hi) = (y[i].min(y[i + 1]), y[i].max(y[i + 1]));
            let mass = 0.25 * dxi * (wl + wr);
            points.push(ScanPoint {
                y: (0.5 * (yl + yr)).clamp(lo, hi),
                as_left: mass + e / 48.0 * ((sr * wr + dr) - (sl * wl + dl)),
                as_right: mass + e / 48.0 * ((-sr * wr + dr) - (-sl * wl + dl)),
            });
        }
    }
    (points, index, own)
}

/// Two-sided exponential scan for
///
/// ```text
/// P̃ᵢ   = ½ ∫ e^{-|Yᵢ-Y(η)|} w(η) dη
/// P̃_xᵢ = ½ ∫ sgn(η-ξᵢ) e^{-|Yᵢ-Y(η)|} w(η) dη
/// ```
///
/// with the quadrature of [`scan_points`]: trapezoid weights plus the
/// Euler–Maclaurin terms for the kernel kink at `ξᵢ`, `-(dξ²/12) Y_ξ w` and
/// `(dξ²/12) w_ξ` at smooth nodes, and the split rule across the cut cells.
/// Increments of `y` below zero are treated as zero.
pub fn kernel_scan(y: &[f64], y_xi: &[f64], w: &[f64], dxi: f64, cuts: &[usize]) -> Result<NonlocalTerms> {
    if let Some(i) = y.iter().chain(w).chain(y_xi).position(|v| !v.is_finite()) {
        return Err(WaveError::NonlocalFailed(format!("non-finite input at flat index {i}")));
    }
    let (points, index, own) = scan_points(y, y_xi, w, dxi, cuts);
    let m = points.len();
    let decay: Vec<f64> = points.windows(2).map(|p| (-(p[1].y - p[0].y).max(0.0)).exp()).collect();

    // left[p] = Σ_{r<p} e^{-(Y_p-Y_r)} as_left_r, right[p] = Σ_{r>p} e^{-(Y_r-Y_p)} as_right_r
    let mut left = vec![0.0; m];
    for p in 1..m {
        left[p] = decay[p - 1] * (left[p - 1] + points[p - 1].as_left);
    }
    let mut right = vec![0.0; m];
    for p in (0..m - 1).rev() {
        right[p] = decay[p] * (right[p + 1] + points[p + 1].as_right);
    }

    let mut p_tilde = Vec::with_capacity(w.len());
    let mut p_tilde_x = Vec::with_capacity(w.len());
    for (i, &p) in index.iter().enumerate() {
        p_tilde.push(0.5 * (left[p] + right[p] + own[i].0));
        p_tilde_x.push(0.5 * (right[p] - left[p] + own[i].1));
    }
    if p_tilde.iter().chain(&p_tilde_x).any(|v| !v.is_finite()) {
        return Err(WaveError::NonlocalFailed("non-finite kernel sum".into()));
    }
    Ok(NonlocalTerms { p_tilde, p_tilde_x })
}

pub fn nonlocal_terms(state: &LagrangianState, model: &FluxModel) -> Result<NonlocalTerms> {
    let y_xi = y_density(state);
    let w = source_density(state, model);
    kernel_scan(&state.y, &y_xi, &w, state.xi_grid.dxi(), &state.kink_cells)
}

/// Right-hand side of the semilinear system at the state's own time.
pub fn rhs(state: &LagrangianState, model: &FluxModel) -> Result<Derivative> {
    let nl = nonlocal_terms(state, model)?;
    let grow = (model.lambda() * state.t).exp();
    let decay = 1.0 / grow;
    let n = state.len();
    let mut d =
        Derivative { dk: Vec::with_capacity(n), dv: Vec::with_capacity(n), dq: Vec::with_capacity(n), dy: Vec::with_capacity(n) };
    for i in 0..n {
        let (k, v, q) = (state.k[i], state.v[i], state.q[i]);
        let u = decay * k;
        let g = grow * model.g(u);
        let f2 = decay * model.f_second(u);
        let p = nl.p_tilde[i];
        d.dk.push(-nl.p_tilde_x[i]);
        d.dv.push(2.0 * (g - p) * cos2_half(v) - f2 * sin2_half(v));
        d.dq.push(0.5 * v.sin() * q * (f2 + 2.0 * g - 2.0 * p));
        d.dy.push(model.f_prime(u));
    }
    Ok(d)
}

fn axpy(state: &LagrangianState, d: &Derivative, h: f64) -> LagrangianState {
    let add = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + h * y).collect();
    LagrangianState {
        xi_grid: state.xi_grid,
        t: state.t + h,
        k: add(&state.k, &d.dk),
        v: add(&state.v, &d.dv),
        q: add(&state.q, &d.dq),
        y: add(&state.y, &d.dy),
        kink_cells: state.kink_cells.clone(),
    }
}

/// One classical RK4 step of size `controls.dt` (negative steps integrate backwards).
pub fn step(state: &LagrangianState, model: &FluxModel, controls: StepControls) -> Result<LagrangianState> {
    let dt = controls.dt;
    if !dt.is_finite() || dt == 0.0 {
        return Err(WaveError::InvalidArgument(format!("dt must be finite and nonzero, got {dt}")));
    }
    let k1 = rhs(state, model)?;
    let k2 = rhs(&axpy(state, &k1, 0.5 * dt), model)?;
    let k3 = rhs(&axpy(state, &k2, 0.5 * dt), model)?;
    let k4 = rhs(&axpy(state, &k3, dt), model)?;
    let combine = |x: &[f64], a: &[f64], b: &[f64], c: &[f64], e: &[f64]| -> Vec<f64> {
        (0..x.len()).map(|i| x[i] + dt / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + e[i])).collect()
    };
    let next = LagrangianState {
        xi_grid: state.xi_grid,
        t: state.t + dt,
        k: combine(&state.k, &k1.dk, &k2.dk, &k3.dk, &k4.dk),
        v: combine(&state.v, &k1.dv, &k2.dv, &k3.dv, &k4.dv),
        q: combine(&state.q, &k1.dq, &k2.dq, &k3.dq, &k4.dq),
        y: combine(&state.y, &k1.dy, &k2.dy, &k3.dy, &k4.dy),
        kink_cells: state.kink_cells.clone(),
    };
    for (what, field) in [("k", &next.k), ("v", &next.v), ("q", &next.q), ("y", &next.y)] {
        if let Some(index) = field.iter().position(|x| !x.is_finite()) {
            return Err(WaveError::NonFinite { what, index });
        }
    }
    if let Some(index) = next.q.iter().position(|&q| q <= 0.0) {
        return Err(WaveError::NonPositiveQ { index, value: next.q[index] });
    }
    Ok(next)
}

/// `E = ∫ (k² cos²(v/2) + sin²(v/2)) q dξ`, which equals `e^{2λt}‖u‖²_{H¹}`.
pub fn lagrangian_energy(state: &LagrangianState) -> f64 {
    let density: Vec<f64> = (0..state.len())
        .map(|i| {
            let (k, v) = (state.k[i], state.v[i]);
            (k * k * cos2_half(v) + sin2_half(v)) * state.q[i]
        })
        .collect();
    let dxi = state.xi_grid.dxi();
    let d = centered_difference_split(&density, dxi, &state.kink_cells);
    split_trapezoid(&density, &d, dxi, &state.kink_cells)
}

/// Max of `|k_ξ − ½ q sin v|`, with `k_ξ` by centered differences that do
/// not cross kink cells.
pub fn kxi_residual(state: &LagrangianState) -> f64 {
    let kxi = centered_difference_split(&state.k, state.xi_grid.dxi(), &state.kink_cells);
    (0..state.len()).fold(0.0, |m, i| m.max((kxi[i] - 0.5 * state.q[i] * state.v[i].sin()).abs()))
}

/// Max of `|y_ξ − q cos²(v/2)|`, differenced like [`kxi_residual`].
pub fn yxi_residual(state: &LagrangianState) -> f64 {
    let yxi = centered_difference_split(&state.y, state.xi_grid.dxi(), &state.kink_cells);
    (0..state.len()).fold(0.0, |m, i| m.max((yxi[i] - state.q[i] * cos2_half(state.v[i])).abs()))
}

/// Per-run record of the conserved quantity and the structural identities.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    pub initial_energy: f64,
    pub energy_drift_rel: f64,
    pub max_kxi_residual: f64,
    pub max_yxi_residual: f64,
    pub min_q: f64,
    pub max_abs_k: f64,
    /// Recorded only; no bound is asserted on the growth of `v`.
    pub max_abs_v: f64,
    pub k_bound_violated: bool,
    /// `max(|P̃|, |P̃_x|) / (E₀^{1/2} + E₀)` at `t = 0`.
    pub nonlocal_constant: f64,
    pub nonlocal_bound_violated: bool,
    /// Snapshots containing at least one node on the breaking locus.
    pub breaking_samples: usize,
}

impl InvariantReport {
    fn new(state0: &LagrangianState, nonlocal0: &NonlocalTerms) -> Self {
        let e0 = lagrangian_energy(state0);
        let scale = e0.sqrt() + e0;
        Self {
            initial_energy: e0,
            energy_drift_rel: 0.0,
            max_kxi_residual: 0.0,
            max_yxi_residual: 0.0,
            min_q: f64::INFINITY,
            max_abs_k: 0.0,
            max_abs_v: 0.0,
            k_bound_violated: false,
            nonlocal_constant: if scale > 0.0 { nonlocal0.max_abs() / scale } else { 0.0 },
            nonlocal_bound_violated: false,
            breaking_samples: 0,
        }
    }

    fn observe(&mut self, state: &LagrangianState, nonlocal: &NonlocalTerms) {
        let e0 = self.initial_energy;
        let e = lagrangian_energy(state);
        let drift = if e0 > 0.0 { (e - e0).abs() / e0 } else { e.abs() };
        self.energy_drift_rel = self.energy_drift_rel.max(drift);
        self.max_kxi_residual = self.max_kxi_residual.max(kxi_residual(state));
        self.max_yxi_residual = self.max_yxi_residual.max(yxi_residual(state));
        self.min_q = self.min_q.min(state.min_q());
        let max_k = state.max_abs_k();
        self.max_abs_k = self.max_abs_k.max(max_k);
        self.max_abs_v = state.v.iter().fold(self.max_abs_v, |m, v| m.max(v.abs()));
        if max_k > e0.sqrt() * (1.0 + 1e-6) + 1e-14 {
            self.k_bound_violated = true;
        }
        let bound = 10.0 * self.nonlocal_constant * (e0.sqrt() + e0);
        if nonlocal.max_abs() > bound + 1e-14 {
            self.nonlocal_bound_violated = true;
        }
        if !state.breaking_nodes().is_empty() {
            self.breaking_samples += 1;
        }
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.set_f64("energy_drift_rel", self.energy_drift_rel);
        r.set_f64("max_kxi_residual", self.max_kxi_residual);
        r.set_f64("max_yxi_residual", self.max_yxi_residual);
        r.set_f64("min_q", self.min_q);
        r.set_f64("max_abs_k", self.max_abs_k);
        r.set_f64("max_abs_v", self.max_abs_v);
        r.set_f64("initial_energy", self.initial_energy);
        r.set("k_bound_violated", self.k_bound_violated);
        r.set("nonlocal_bound_violated", self.nonlocal_bound_violated);
        r.set("breaking_samples", self.breaking_samples);
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveControls {
    pub dt: f64,
    /// Store a snapshot every this many steps (the final state is always stored).
    pub sample_every: usize,
}

#[derive(Debug, Clone)]
pub struct LagrangianRun {
    pub snapshots: Vec<LagrangianState>,
    pub report: InvariantReport,
}

impl LagrangianRun {
    pub fn final_state(&self) -> &LagrangianState {
        self.snapshots.last().expect("at least the initial snapshot")
    }
}

/// Integrates to `t0 + final_time` with fixed RK4 steps. The run only stops early
/// on numerical failure; breaking is carried through.
pub fn evolve(state0: &LagrangianState, model: &FluxModel, final_time: f64, controls: EvolveControls) -> Result<LagrangianRun> {
    if !(final_time > 0.0) || !(controls.dt > 0.0) {
        return Err(WaveError::InvalidArgument("final time and dt must be positive".into()));
    }
    let steps = (final_time / controls.dt).round().max(1.0) as usize;
    let dt = final_time / steps as f64;
    let every = controls.sample_every.max(1);

    let nl0 = nonlocal_terms(state0, model)?;
    let mut report = InvariantReport::new(state0, &nl0);
    report.observe(state0, &nl0);
    let mut snapshots = vec![state0.clone()];
    let mut state = state0.clone();
    for s in 1..=steps {
        state = step(&state, model, StepControls { dt })?;
        if s % every == 0 || s == steps {
            let nl = nonlocal_terms(&state, model)?;
            report.observe(&state, &nl);
            snapshots.push(state.clone());
        }
    }
    Ok(LagrangianRun { snapshots, report })
}
