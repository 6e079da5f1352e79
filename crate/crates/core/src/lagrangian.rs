//! Energy-coordinate change of variables and the Lagrangian state.
//!
//! A label `ξ` is attached to each point by the cumulative energy measure
//!
//! ```text
//! ∫₀^{ȳ(ξ)} (1 + ū_x²) dx = ξ
//! ```
//!
//! and the solution is carried as `(k, v, q, y)` over a uniform ξ-grid, with
//! `k = e^{λt} u`, `v = 2 arctan k_x`, `q = (1 + k_x²) y_ξ` and `y` the
//! characteristic position. [`to_eulerian`] maps a state back to `u(t, x)`.

use std::fmt::Write as _;

use crate::error::{Result, WaveError};
use crate::function_space::{cubic_lagrange, spectral_derivative, SampledProfile, UniformGrid};

/// Threshold on `1 + cos v` below which a node counts as collapsed (breaking).
pub const BREAKING_THRESHOLD: f64 = 1e-8;

/// Initial data that can be evaluated off-grid, together with its slope.
pub trait InitialProfile {
    fn value(&self, x: f64) -> f64;
    fn slope(&self, x: f64) -> f64;

    /// Points where the slope jumps. The ξ-grid is laid out so that each one
    /// falls halfway between two nodes, which keeps the trapezoid sums
    /// second-order across the jump.
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// A sampled profile with its spectral derivative, both interpolated cubically.
#[derive(Debug, Clone)]
pub struct SampledData {
    profile: SampledProfile,
    slope: SampledProfile,
}

impl SampledData {
    pub fn new(profile: &SampledProfile) -> Self {
        Self { slope: spectral_derivative(profile, 1), profile: profile.clone() }
    }

    pub fn profile(&self) -> &SampledProfile {
        &self.profile
    }
}

impl InitialProfile for SampledData {
    fn value(&self, x: f64) -> f64 {
        self.profile.interpolate(x)
    }

    fn slope(&self, x: f64) -> f64 {
        self.slope.interpolate(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiGrid {
    xi_min: f64,
    dxi: f64,
    n: usize,
}

impl XiGrid {
    pub fn new(xi_min: f64, dxi: f64, n: usize) -> Result<Self> {
        if !(dxi.is_finite() && dxi > 0.0) || !xi_min.is_finite() || n < 4 {
            return Err(WaveError::InvalidGrid(format!("xi grid needs dxi > 0 and at least 4 nodes (dxi = {dxi}, n = {n})")));
        }
        Ok(Self { xi_min, dxi, n })
    }

    pub fn xi_min(&self) -> f64 {
        self.xi_min
    }

    pub fn dxi(&self) -> f64 {
        self.dxi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn xi_max(&self) -> f64 {
        self.xi(self.n - 1)
    }

    #[inline]
    pub fn xi(&self, i: usize) -> f64 {
        self.xi_min + i as f64 * self.dxi
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.xi(i)).collect()
    }
}

/// Cumulative energy map `F(x) = ∫₀^x (1 + ū_x²)` on a sampled grid and its
/// monotone cubic inverse `ȳ = F⁻¹`. Kinks of the data are extra breakpoints,
/// each carrying one-sided densities, so no piece straddles a slope jump.
#[derive(Debug, Clone)]
pub struct EnergyCoordinate {
    x: Vec<f64>,
    f: Vec<f64>,
    /// Density approached from the left and from the right.
    d_minus: Vec<f64>,
    d_plus: Vec<f64>,
}

// 4-point Gauss–Legendre on [-1, 1]
const GL_NODES: [f64; 4] = [-0.861_136_311_594_052_6, -0.339_981_043_584_856_3, 0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
const GL_WEIGHTS: [f64; 4] = [0.347_854_845_137_453_9, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_9];

impl EnergyCoordinate {
    pub fn new<P: InitialProfile + ?Sized>(data: &P, grid: &UniformGrid) -> Result<Self> {
        let density = |x: f64| {
            let s = data.slope(x);
            1.0 + s * s
        };
        let mut x = grid.nodes();
        let (lo, hi) = (x[0], x[x.len() - 1]);
        let tol = 1e-9 * grid.dx();
        let kinks: Vec<f64> = data.kinks().into_iter().filter(|&k| k > lo && k < hi).collect();
        for &k in &kinks {
            let j = x.partition_point(|&v| v < k);
            if (x[j] - k).abs() > tol && (j == 0 || (x[j - 1] - k).abs() > tol) {
                x.insert(j, k);
            }
        }
        let at_kink = |p: f64| kinks.iter().any(|&k| (p - k).abs() <= tol);
        let nudge = 1e-7 * grid.dx();
        let (mut d_minus, mut d_plus) = (Vec::with_capacity(x.len()), Vec::with_capacity(x.len()));
        for &p in &x {
            if at_kink(p) {
                d_minus.push(density(p - nudge));
                d_plus.push(density(p + nudge));
            } else {
                d_minus.push(density(p));
                d_plus.push(density(p));
            }
        }
        if let Some(index) = d_minus.iter().chain(&d_plus).position(|d| !d.is_finite()) {
            return Err(WaveError::NonFinite { what: "energy density", index: index % x.len() });
        }
        let mut f = vec![0.0; x.len()];
        for j in 1..x.len() {
            let (a, b) = (x[j - 1], x[j]);
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            let piece: f64 = GL_NODES.iter().zip(&GL_WEIGHTS).map(|(t, w)| w * density(mid + half * t)).sum();
            f[j] = f[j - 1] + half * piece;
        }
        let mut coord = Self { x, f, d_minus, d_plus };
        // anchor F(0) = 0
        let origin = coord.energy_coordinate(0.0);
        for v in &mut coord.f {
            *v -= origin;
        }
        if let Some(i) = coord.f.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(WaveError::NonMonotone(i));
        }
        Ok(coord)
    }

    pub fn f_min(&self) -> f64 {
        self.f[0]
    }

    pub fn f_max(&self) -> f64 {
        self.f[self.f.len() - 1]
    }

    /// `F(x)`; slope-one extension outside the sampled span.
    pub fn energy_coordinate(&self, x: f64) -> f64 {
        let n = self.x.len();
        if x <= self.x[0] {
            return self.f[0] + (x - self.x[0]);
        }
        if x >= self.x[n - 1] {
            return self.f[n - 1] + (x - self.x[n - 1]);
        }
        let j = self.x.partition_point(|&v| v <= x) - 1;
        let h = self.x[j + 1] - self.x[j];
        hermite(self.f[j], self.f[j + 1], self.d_plus[j], self.d_minus[j + 1], h, (x - self.x[j]) / h)
    }

    /// `ȳ(ξ) = F⁻¹(ξ)`; piecewise cubic Hermite in `ξ` with slopes `1/(1+ū_x²)`,
    /// limited so that every piece is increasing.
    pub fn position(&self, xi: f64) -> f64 {
        let n = self.f.len();
        if xi <= self.f[0] {
            return self.x[0] + (xi - self.f[0]);
        }
        if xi >= self.f[n - 1] {
            return self.x[n - 1] + (xi - self.f[n - 1]);
        }
        let j = self.f.partition_point(|&v| v <= xi) - 1;
        let (f0, f1) = (self.f[j], self.f[j + 1]);
        let h = f1 - f0;
        let secant = (self.x[j + 1] - self.x[j]) / h;
        let (mut d0, mut d1) = (1.0 / self.d_plus[j], 1.0 / self.d_minus[j + 1]);
        // Fritsch–Carlson limiter
        let (a, b) = (d0 / secant, d1 / secant);
        let r = a * a + b * b;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            d0 *= tau;
            d1 *= tau;
        }
        hermite(self.x[j], self.x[j + 1], d0, d1, h, (xi - f0) / h)
    }
}

#[inline]
fn hermite(p0: f64, p1: f64, m0: f64, m1: f64, h: f64, s: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * p0 + (s3 - 2.0 * s2 + s) * h * m0 + (-2.0 * s3 + 3.0 * s2) * p1 + (s3 - s2) * h * m1
}

/// Builds the ξ-grid covering `[F(x_min), F(x_max)]` (with `ξ = 0` on a node)
/// and the samples `ȳ(ξᵢ)`.
pub fn build_ybar(ubar: &SampledProfile, n_xi: usize) -> Result<(XiGrid, Vec<f64>)> {
    let data = SampledData::new(ubar);
    let coord = EnergyCoordinate::new(&data, ubar.grid())?;
    build_ybar_from(&coord, n_xi)
}

pub fn build_ybar_from(coord: &EnergyCoordinate, n_xi: usize) -> Result<(XiGrid, Vec<f64>)> {
    build_ybar_aligned(coord, n_xi, &[])
}

/// Like [`build_ybar_from`], but with the first and last of `kinks` (given
/// in x) placed at cell midpoints of the ξ-grid. The spacing is adjusted by
/// at most half a cell over the kink span; with more than two kinks only the
/// outer pair is aligned exactly. Without kinks `ξ = 0` is a node.
pub fn build_ybar_aligned(coord: &EnergyCoordinate, n_xi: usize, kinks: &[f64]) -> Result<(XiGrid, Vec<f64>)> {
    if n_xi < 4 {
        return Err(WaveError::InvalidGrid(format!("n_xi must be at least 4, got {n_xi}")));
    }
    let (lo, hi) = (coord.f_min(), coord.f_max());
    let mut dxi = (hi - lo) / (n_xi - 2) as f64;
    let mut labels: Vec<f64> = kinks.iter().map(|&x| coord.energy_coordinate(x)).collect();
    labels.sort_by(f64::total_cmp);
    let xi_min = match (labels.first(), labels.last()) {
        (Some(&first), Some(&last)) => {
            let span = last - first;
            if span > 0.0 {
                dxi = span / (span / dxi).round().max(1.0);
            }
            let cells = ((first - lo) / dxi - 0.5).ceil();
            first - (cells + 0.5) * dxi
        }
        _ => -(-lo / dxi).ceil() * dxi,
    };
    let grid = XiGrid::new(xi_min, dxi, n_xi)?;
    let ybar: Vec<f64> = grid.nodes().into_iter().map(|xi| coord.position(xi)).collect();
    if let Some(i) = ybar.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(WaveError::NonMonotone(i));
    }
    Ok((grid, ybar))
}

/// Energy coordinate on `x_grid`, kink-aligned ξ-grid and initial state in one go.
pub fn lagrangian_initial<P: InitialProfile + ?Sized>(data: &P, x_grid: &UniformGrid, n_xi: usize) -> Result<LagrangianState> {
    let coord = EnergyCoordinate::new(data, x_grid)?;
    let kinks = data.kinks();
    let (xi_grid, ybar) = build_ybar_aligned(&coord, n_xi, &kinks)?;
    let mut state = initial_state(data, xi_grid, &ybar);
    state.kink_cells = kinks
        .iter()
        .map(|&x| ((coord.energy_coordinate(x) - xi_grid.xi_min()) / xi_grid.dxi()).floor())
        .filter(|c| *c >= 0.0 && *c < (n_xi - 1) as f64)
        .map(|c| c as usize)
        .collect();
    state.kink_cells.sort_unstable();
    state.kink_cells.dedup();
    Ok(state)
}

/// Solution of the semilinear system at time `t` over a ξ-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianState {
    pub xi_grid: XiGrid,
    pub t: f64,
    /// `k = e^{λt} u` along the characteristic.
    pub k: Vec<f64>,
    /// `2 arctan k_x`, unwrapped (breaking is `v` crossing `-π`).
    pub v: Vec<f64>,
    pub q: Vec<f64>,
    /// Characteristic positions.
    pub y: Vec<f64>,
    /// Cells `(i, i+1)` straddling a slope jump of the initial data. Jumps
    /// stay at fixed labels, so the set never changes during a run.
    pub kink_cells: Vec<usize>,
}

impl LagrangianState {
    pub fn zeros(xi_grid: XiGrid) -> Self {
        let n = xi_grid.len();
        Self { xi_grid, t: 0.0, k: vec![0.0; n], v: vec![0.0; n], q: vec![1.0; n], y: xi_grid.nodes(), kink_cells: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn max_abs_k(&self) -> f64 {
        self.k.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_q(&self) -> f64 {
        self.q.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Indices of nodes sitting on the breaking locus `1 + cos v ≤ θ`.
    pub fn breaking_nodes(&self) -> Vec<usize> {
        self.v.iter().enumerate().filter(|(_, v)| 1.0 + v.cos() <= BREAKING_THRESHOLD).map(|(i, _)| i).collect()
    }

    /// `xi,k,v,q,y` CSV with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 120);
        out.push_str("xi,k,v,q,y\n");
        for i in 0..self.len() {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.xi_grid.xi(i),
                self.k[i],
                self.v[i],
                self.q[i],
                self.y[i]
            );
        }
        out
    }

    /// Parses the CSV written by [`LagrangianState::to_csv`]; `t` comes from
    /// the snapshot file name. Kink cells are not stored and come back empty.
    pub fn from_csv(text: &str, t: f64) -> Result<Self> {
        let mut cols: [Vec<f64>; 5] = Default::default();
        for (line_no, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(WaveError::InvalidArgument(format!("bad csv row {}", line_no + 1)));
            }
            for (col, field) in cols.iter_mut().zip(&fields) {
                col.push(
                    field
                        .trim()
                        .parse()
                        .map_err(|_| WaveError::InvalidArgument(format!("bad number on csv row {}", line_no + 1)))?,
                );
            }
        }
        let [xi, k, v, q, y] = cols;
        if xi.len() < 4 {
            return Err(WaveError::InvalidArgument("state csv needs at least 4 rows".into()));
        }
        let dxi = (xi[xi.len() - 1] - xi[0]) / (xi.len() - 1) as f64;
        Ok(Self { xi_grid: XiGrid::new(xi[0], dxi, xi.len())?, t, k, v, q, y, kink_cells: Vec::new() })
    }
}

/// Initial Lagrangian data: `k = ū(ȳ)`, `v = 2 arctan ū_x(ȳ)`, `q = 1`, `y = ȳ`.
pub fn initial_state<P: InitialProfile + ?Sized>(ubar: &P, xi_grid: XiGrid, ybar: &[f64]) -> LagrangianState {
    LagrangianState {
        xi_grid,
        t: 0.0,
        k: ybar.iter().map(|&y| ubar.value(y)).collect(),
        v: ybar.iter().map(|&y| 2.0 * ubar.slope(y).atan()).collect(),
        q: vec![1.0; ybar.len()],
        y: ybar.to_vec(),
        kink_cells: Vec::new(),
    }
}

/// `k_x = sin v / (1 + cos v)` at each node, `None` on the breaking locus.
pub fn slope_from_v(state: &LagrangianState) -> Vec<Option<f64>> {
    state
        .v
        .iter()
        .map(|&v| {
            let c = 1.0 + v.cos();
            (c > BREAKING_THRESHOLD).then(|| v.sin() / c)
        })
        .collect()
}

/// Reconstructs `u(t, x) = e^{-λt} k(t, x)` on `x_grid`. Inside the span of
/// `y`, `k` is interpolated in `y` by cubic Hermite pieces using the slopes
/// from `v`; pieces touching a breaking node or a collapsed interval fall back
/// to linear. Outside the span the boundary value is held.
pub fn to_eulerian(state: &LagrangianState, lambda: f64, x_grid: &UniformGrid) -> SampledProfile {
    let decay = (-lambda * state.t).exp();
    let slopes = slope_from_v(state);
    let (y, k) = (&state.y, &state.k);
    let n = y.len();
    let mut values = Vec::with_capacity(x_grid.len());
    let mut j = 0usize;
    for x in x_grid.nodes() {
        let kx = if x <= y[0] {
            k[0]
        } else if x >= y[n - 1] {
            k[n - 1]
        } else {
            // y is non-decreasing and x increases, so the bracket only moves right
            while j + 2 < n && y[j + 1] < x {
                j += 1;
            }
            while j > 0 && y[j] > x {
                j -= 1;
            }
            let h = y[j + 1] - y[j];
            if h <= 0.0 {
                k[j + 1]
            } else {
                let s = ((x - y[j]) / h).clamp(0.0, 1.0);
                match (slopes[j], slopes[j + 1]) {
                    // slope jump inside the cell: extend each side's tangent
                    // up to where the two lines meet
                    (Some(m0), Some(m1)) if state.kink_cells.binary_search(&j).is_ok() => {
                        let left = |x: f64| k[j] + m0 * (x - y[j]);
                        let right = |x: f64| k[j + 1] + m1 * (x - y[j + 1]);
                        let meet = if m0 != m1 {
                            ((k[j + 1] - k[j] - m1 * y[j + 1] + m0 * y[j]) / (m0 - m1)).clamp(y[j], y[j + 1])
                        } else {
                            0.5 * (y[j] + y[j + 1])
                        };
                        if x <= meet {
                            left(x)
                        } else {
                            right(x)
                        }
                    }
                    (Some(m0), Some(m1)) if h > 1e-14 => hermite(k[j], k[j + 1], m0, m1, h, s),
                    _ => k[j] + s * (k[j + 1] - k[j]),
                }
            }
        };
        values.push(kx * decay);
    }
    SampledProfile::new(*x_grid, values).expect("finite reconstruction")
}

/// Cubic interpolation of a node-valued ξ-field at an arbitrary label.
pub fn interpolate_in_xi(grid: &XiGrid, values: &[f64], xi: f64) -> f64 {
    cubic_lagrange(values, grid.xi_min(), grid.dxi(), xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> UniformGrid {
        UniformGrid::periodic(-20.0, 20.0, 1024).unwrap()
    }

    #[test]
    fn zero_data_gives_identity_map() {
        let g = grid();
        let (xg, ybar) = build_ybar(&SampledProfile::zeros(g), 513).unwrap();
        for (i, y) in ybar.iter().enumerate() {
            assert!((y - xg.xi(i)).abs() < 1e-12);
        }
        let st = initial_state(&SampledData::new(&SampledProfile::zeros(g)), xg, &ybar);
        assert!(st.k.iter().all(|&k| k == 0.0));
        assert!(st.v.iter().all(|&v| v == 0.0));
        assert!(st.q.iter().all(|&q| q == 1.0));
        let back = to_eulerian(&st, 0.3, &g);
        assert_eq!(back.max_abs(), 0.0);
    }

    #[test]
    fn origin_is_fixed_and_map_is_one_lipschitz() {
        let g = grid();
        let u = SampledProfile::from_fn(g, |x| 0.8 * (-(x - 0.7f64).powi(2)).exp() * (2.0 * x).sin()).unwrap();
        let (xg, ybar) = build_ybar(&u, 2000).unwrap();
        let zero = (-xg.xi_min() / xg.dxi()).round() as usize;
        assert!(xg.xi(zero).abs() < 1e-12);
        assert!(ybar[zero].abs() < 1e-12);
        assert!(xg.xi_min() <= -20.0 + 1e-9 && xg.xi_max() >= g.x_last());
        for w in ybar.windows(2) {
            assert!(w[1] > w[0]);
            assert!(w[1] - w[0] <= xg.dxi() + 1e-12);
        }
        let far = [(0, 500), (10, 1900), (300, 301)];
        for (a, b) in far {
            assert!(ybar[b] - ybar[a] <= xg.xi(b) - xg.xi(a) + 1e-12);
        }
    }

    #[test]
    fn slope_from_v_examples() {
        let xg = XiGrid::new(0.0, 1.0, 4).unwrap();
        let mut st = LagrangianState::zeros(xg);
        st.v = vec![0.0, PI / 2.0, PI - 1e-9, -PI];
        let s = slope_from_v(&st);
        assert_eq!(s[0], Some(0.0));
        assert!((s[1].unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(s[2], None);
        assert_eq!(s[3], None);
        assert_eq!(st.breaking_nodes(), vec![2, 3]);
    }

    #[test]
    fn unit_slope_gives_quarter_turn() {
        struct Ramp;
        impl InitialProfile for Ramp {
            fn value(&self, x: f64) -> f64 {
                x
            }
            fn slope(&self, _: f64) -> f64 {
                1.0
            }
        }
        let xg = XiGrid::new(-1.0, 0.5, 5).unwrap();
        let st = initial_state(&Ramp, xg, &xg.nodes());
        assert!(st.v.iter().all(|&v| (v - PI / 2.0).abs() < 1e-15));
    }

    #[test]
    fn decay_factor_on_flat_region() {
        let xg = XiGrid::new(-10.0, 0.1, 201).unwrap();
        let mut st = LagrangianState::zeros(xg);
        st.k = vec![3.0; 201];
        st.t = 2f64.ln();
        let g = UniformGrid::periodic(-5.0, 5.0, 64).unwrap();
        let u = to_eulerian(&st, 1.0, &g);
        assert!(u.values().iter().all(|&v| (v - 1.5).abs() < 1e-14));
    }

    #[test]
    fn collapsed_interval_takes_common_value() {
        let xg = XiGrid::new(0.0, 1.0, 6).unwrap();
        let st = LagrangianState {
            xi_grid: xg,
            t: 0.0,
            k: vec![0.0, 1.0, 2.0, 2.0, 2.0, 3.0],
            v: vec![0.0, 0.0, -PI, -PI, 0.0, 0.0],
            q: vec![1.0; 6],
            y: vec![0.0, 1.0, 2.0, 2.0, 2.0, 3.0],
            kink_cells: Vec::new(),
        };
        let g = UniformGrid::new(0.0, 0.25, 16).unwrap();
        let u = to_eulerian(&st, 0.0, &g);
        assert!((u.values()[8] - 2.0).abs() < 1e-15);
        assert!((u.values()[6] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip() {
        let xg = XiGrid::new(-1.0, 0.25, 9).unwrap();
        let mut st = LagrangianState::zeros(xg);
        st.k[3] = 0.123456789012345;
        st.v[4] = -3.0;
        st.t = 0.5;
        let back = LagrangianState::from_csv(&st.to_csv(), 0.5).unwrap();
        assert_eq!(back.k, st.k);
        assert_eq!(back.v, st.v);
        assert_eq!(back.y, st.y);
    }
}
