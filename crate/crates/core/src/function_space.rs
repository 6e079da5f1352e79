//! Uniform grids, sampled profiles and the spectral toolkit shared by both
//! solvers: Fourier derivatives, discrete Sobolev norms and the Helmholtz
//! convolution `p * w` with `p(x) = ½ e^{-|x|}`.
//!
//! The real line is approximated by a periodic box of length `L = n·dx`.
//! Data handed to these routines is expected to decay to round-off at the
//! box edges; [`SampledProfile::boundary_excess`] reports how far it does not.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, WaveError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    x_min: f64,
    dx: f64,
    n: usize,
}

impl UniformGrid {
    pub fn new(x_min: f64, dx: f64, n: usize) -> Result<Self> {
        if !(dx.is_finite() && dx > 0.0) || !x_min.is_finite() {
            return Err(WaveError::InvalidGrid(format!("dx must be positive and finite, got {dx}")));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(WaveError::InvalidGrid(format!("n must be a power of two >= 16, got {n}")));
        }
        Ok(Self { x_min, dx, n })
    }

    /// `n` nodes covering the periodic box `[x_min, x_max)`.
    pub fn periodic(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        Self::new(x_min, (x_max - x_min) / n as f64, n)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Periodic extent `L = n·dx`.
    pub fn extent(&self) -> f64 {
        self.n as f64 * self.dx
    }

    /// Last node (the box itself extends one `dx` further).
    pub fn x_last(&self) -> f64 {
        self.x(self.n - 1)
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Angular wavenumber of DFT bin `k` (negative frequencies in the upper half).
    #[inline]
    pub fn wavenumber(&self, k: usize) -> f64 {
        let kk = if k <= self.n / 2 { k as f64 } else { k as f64 - self.n as f64 };
        2.0 * PI * kk / self.extent()
    }
}

/// A real function sampled on a [`UniformGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl SampledProfile {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(WaveError::InvalidArgument(format!(
                "profile has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(WaveError::NonFinite { what: "profile", index });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().into_iter().map(f).collect())
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        Self { grid, values: vec![0.0; grid.len()] }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        Self { grid: self.grid, values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest |value| on the outer 5% of the box at each end. Compare against
    /// a decay threshold when the profile stands for an H¹(ℝ) function.
    pub fn boundary_excess(&self) -> f64 {
        let m = (self.values.len() / 20).max(1);
        let n = self.values.len();
        self.values[..m].iter().chain(&self.values[n - m..]).fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Four-point cubic Lagrange interpolation at an arbitrary point inside
    /// `[x_min, x_last]`; values outside are clamped to the end samples.
    pub fn interpolate(&self, x: f64) -> f64 {
        cubic_lagrange(&self.values, self.grid.x_min, self.grid.dx, x)
    }

    /// `x,value` CSV with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 48);
        out.push_str("x,value\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{:.16e},{:.16e}", self.grid.x(i), v);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (line_no, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| WaveError::InvalidArgument(format!("bad csv row {}", line_no + 1)))
            };
            xs.push(parse(parts.next())?);
            vs.push(parse(parts.next())?);
        }
        if xs.len() < 2 {
            return Err(WaveError::InvalidArgument("csv needs at least two rows".into()));
        }
        let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        Self::new(UniformGrid::new(xs[0], dx, xs.len())?, vs)
    }
}

/// Cubic Lagrange interpolation on uniform samples starting at `x0`.
pub(crate) fn cubic_lagrange(values: &[f64], x0: f64, dx: f64, x: f64) -> f64 {
    let n = values.len();
    let s = (x - x0) / dx;
    if s <= 0.0 {
        return values[0];
    }
    if s >= (n - 1) as f64 {
        return values[n - 1];
    }
    let nearest = s.round();
    if (s - nearest).abs() < 1e-12 {
        return values[nearest as usize];
    }
    let i = (s.floor() as usize).clamp(1, n.saturating_sub(3).max(1));
    let base = i - 1;
    let t = s - base as f64;
    let (p0, p1, p2, p3) = (values[base], values[base + 1], values[base + 2], values[base + 3]);
    // nodes at t = 0, 1, 2, 3
    let l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    let l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    let l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    let l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    p0 * l0 + p1 * l1 + p2 * l2 + p3 * l3
}

type PlanPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<usize, PlanPair>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plans(n: usize) -> PlanPair {
    PLANS.with(|cell| {
        let mut guard = cell.borrow_mut();
        let (planner, cache) = &mut *guard;
        if let Some(pair) = cache.get(&n) {
            return pair.clone();
        }
        let pair = (planner.plan_fft_forward(n), planner.plan_fft_inverse(n));
        cache.insert(n, pair.clone());
        pair
    })
}

/// Unnormalized forward DFT of real samples.
pub fn forward(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plans(values.len()).0.process(&mut buf);
    buf
}

/// Inverse DFT (including the `1/n` factor), keeping the real part.
pub fn inverse_real(mut spectrum: Vec<Complex64>) -> Vec<f64> {
    let n = spectrum.len();
    plans(n).1.process(&mut spectrum);
    let scale = 1.0 / n as f64;
    spectrum.into_iter().map(|c| c.re * scale).collect()
}

/// Apply a Fourier multiplier `m(k, ω)`; `k` is the DFT bin index.
pub fn apply_multiplier(p: &SampledProfile, m: impl Fn(usize, f64) -> Complex64) -> SampledProfile {
    let grid = p.grid;
    let mut hat = forward(&p.values);
    for (k, c) in hat.iter_mut().enumerate() {
        *c *= m(k, grid.wavenumber(k));
    }
    SampledProfile { grid, values: inverse_real(hat) }
}

/// Fourier derivative of the given order; the Nyquist bin is zeroed for odd orders.
pub fn spectral_derivative(p: &SampledProfile, order: u32) -> SampledProfile {
    let nyquist = p.grid.len() / 2;
    apply_multiplier(p, |k, w| {
        if order % 2 == 1 && k == nyquist {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, w).powu(order)
        }
    })
}

/// Discrete H^s norm with the Parseval normalization
/// `‖u‖²_{H^s} = (dx/n) Σ_k (1+ω_k²)^s |DFT_k|²`, which reduces to the
/// rectangle-rule L² norm at `s = 0`.
pub fn sobolev_norm(p: &SampledProfile, s: f64) -> f64 {
    let grid = p.grid;
    let hat = forward(&p.values);
    let scale = grid.dx() / grid.len() as f64;
    let sum: f64 = hat
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let w = grid.wavenumber(k);
            (1.0 + w * w).powf(s) * c.norm_sqr()
        })
        .sum();
    (scale * sum).sqrt()
}

/// `p * w`, i.e. `(1 - ∂²)^{-1} w`, via the multiplier `1/(1+ω²)`.
pub fn helmholtz_convolve(w: &SampledProfile) -> SampledProfile {
    apply_multiplier(w, |_, om| Complex64::new(1.0 / (1.0 + om * om), 0.0))
}

/// `∂x (p * w)` via the multiplier `iω/(1+ω²)` (Nyquist bin zeroed).
pub fn helmholtz_convolve_dx(w: &SampledProfile) -> SampledProfile {
    let nyquist = w.grid.len() / 2;
    apply_multiplier(w, |k, om| if k == nyquist { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, om / (1.0 + om * om)) })
}

/// Convolution with a unit-mass Gaussian of standard deviation `sigma`.
pub fn gaussian_mollify(p: &SampledProfile, sigma: f64) -> SampledProfile {
    apply_multiplier(p, |_, w| Complex64::new((-0.5 * sigma * sigma * w * w).exp(), 0.0))
}

/// Cubic interpolation onto `target`, which must lie inside the source's
/// node span. Identical grids return the input unchanged.
pub fn resample(p: &SampledProfile, target: UniformGrid) -> Result<SampledProfile> {
    if target == p.grid {
        return Ok(p.clone());
    }
    let (s_lo, s_hi) = (p.grid.x_min, p.grid.x_last());
    let (t_lo, t_hi) = (target.x_min, target.x_last());
    let slack = 1e-12 * (s_hi - s_lo).abs().max(1.0);
    if t_lo < s_lo - slack || t_hi > s_hi + slack {
        return Err(WaveError::Extrapolation { target_min: t_lo, target_max: t_hi, source_min: s_lo, source_max: s_hi });
    }
    let values = target.nodes().into_iter().map(|x| p.interpolate(x)).collect();
    SampledProfile::new(target, values)
}

/// Fraction of spectral energy carried by the top third of the wavenumbers,
/// the modes a 2/3-rule truncation discards.
pub fn top_third_energy_fraction(p: &SampledProfile) -> f64 {
    let hat = forward(&p.values);
    let n = hat.len();
    let cutoff = n / 3;
    let (mut top, mut total) = (0.0, 0.0);
    for (k, c) in hat.iter().enumerate() {
        let kk = if k <= n / 2 { k } else { n - k };
        let e = c.norm_sqr();
        total += e;
        if kk > cutoff {
            top += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        top / total
    }
}
