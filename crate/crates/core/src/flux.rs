//! Polynomial nonlinearities `f` and `g` of the wave family
//!
//! ```text
//! u_t + f'(u) u_x + λ u + ∂x p * (g(u) + ½ f''(u) u_x²) = 0,   p(x) = ½ e^{-|x|}
//! ```
//!
//! Both fluxes are stored as ascending-degree coefficient vectors so that the
//! structural conditions used by the global-existence results can be decided
//! by exact coefficient comparison.

use crate::error::{Result, WaveError};

/// Dense polynomial with ascending-degree coefficients and no trailing zeros.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Minimum over `[lo, hi]`, taken over the endpoints and the real critical
    /// points located by sign changes of the derivative on a fine mesh.
    pub fn min_on(&self, lo: f64, hi: f64) -> f64 {
        let mut best = self.eval(lo).min(self.eval(hi));
        let d = self.derivative();
        if d.degree().unwrap_or(0) == 0 {
            return best;
        }
        const MESH: usize = 4096;
        let h = (hi - lo) / MESH as f64;
        let mut a = lo;
        let mut da = d.eval(a);
        for i in 1..=MESH {
            let b = if i == MESH { hi } else { lo + i as f64 * h };
            let db = d.eval(b);
            if da == 0.0 {
                best = best.min(self.eval(a));
            } else if da.signum() != db.signum() && db != 0.0 {
                let (mut l, mut r) = (a, b);
                for _ in 0..80 {
                    let mid = 0.5 * (l + r);
                    if d.eval(mid).signum() == da.signum() {
                        l = mid;
                    } else {
                        r = mid;
                    }
                }
                best = best.min(self.eval(0.5 * (l + r)));
            }
            a = b;
            da = db;
        }
        best
    }
}

/// The six symbols the solvers evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxSymbol {
    F,
    DF,
    D2F,
    D3F,
    G,
    DG,
}

/// Validated flux pair `(f, g)` together with the dissipation rate `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxModel {
    f: Polynomial,
    df: Polynomial,
    d2f: Polynomial,
    d3f: Polynomial,
    g: Polynomial,
    dg: Polynomial,
    lambda: f64,
}

/// Outcome of the structural checks `f''' ≡ 0`, `f'' ≥ γ > 0`, `g'(u) = 2 f''(u) u`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub f_triple_prime_zero: bool,
    /// Exact constant when `f'''≡0`, otherwise the infimum of `f''` over the
    /// interval passed to [`FluxModel::check_theorem_conditions`].
    pub f_double_prime_lower_bound: f64,
    pub g_prime_matches: bool,
}

impl ConditionReport {
    /// All three conditions hold (with `γ > 0`).
    pub fn all_hold(&self) -> bool {
        self.f_triple_prime_zero && self.f_double_prime_lower_bound > 0.0 && self.g_prime_matches
    }

    /// Conditions under which momentum is transported along characteristics:
    /// `f''' ≡ 0` and `g' = 2 f'' u`.
    pub fn transport_holds(&self) -> bool {
        self.f_triple_prime_zero && self.g_prime_matches
    }
}

impl FluxModel {
    pub fn new(f_coeffs: &[f64], g_coeffs: &[f64], lambda: f64) -> Result<Self> {
        if let Some(c) = f_coeffs.iter().chain(g_coeffs).find(|c| !c.is_finite()) {
            return Err(WaveError::InvalidFlux(format!("non-finite coefficient {c}")));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(WaveError::InvalidFlux(format!("lambda must be >= 0, got {lambda}")));
        }
        if g_coeffs.first().copied().unwrap_or(0.0) != 0.0 {
            return Err(WaveError::InvalidFlux("g(0)≠0".into()));
        }
        let f = Polynomial::new(f_coeffs.to_vec());
        let df = f.derivative();
        let d2f = df.derivative();
        if d2f.is_zero() {
            return Err(WaveError::InvalidFlux("f''≡0".into()));
        }
        let d3f = d2f.derivative();
        let g = Polynomial::new(g_coeffs.to_vec());
        let dg = g.derivative();
        Ok(Self { f, df, d2f, d3f, g, dg, lambda })
    }

    /// Camassa–Holm with dispersion `κ`: `f = u²/2`, `g = 2κu + u²`.
    pub fn camassa_holm(kappa: f64, lambda: f64) -> Self {
        Self::new(&[0.0, 0.0, 0.5], &[0.0, 2.0 * kappa, 1.0], lambda).expect("valid CH flux")
    }

    /// Hyperelastic rod: `f = γu²/2`, `g = (3-γ)u²/2`.
    pub fn hyperelastic_rod(gamma: f64, lambda: f64) -> Result<Self> {
        Self::new(&[0.0, 0.0, 0.5 * gamma], &[0.0, 0.0, 0.5 * (3.0 - gamma)], lambda)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.f.coeffs(), self.g.coeffs(), lambda)
    }

    pub fn poly(&self, which: FluxSymbol) -> &Polynomial {
        match which {
            FluxSymbol::F => &self.f,
            FluxSymbol::DF => &self.df,
            FluxSymbol::D2F => &self.d2f,
            FluxSymbol::D3F => &self.d3f,
            FluxSymbol::G => &self.g,
            FluxSymbol::DG => &self.dg,
        }
    }

    pub fn eval(&self, which: FluxSymbol, u: f64) -> f64 {
        self.poly(which).eval(u)
    }

    #[inline]
    pub fn f_prime(&self, u: f64) -> f64 {
        self.df.eval(u)
    }

    #[inline]
    pub fn f_second(&self, u: f64) -> f64 {
        self.d2f.eval(u)
    }

    #[inline]
    pub fn g(&self, u: f64) -> f64 {
        self.g.eval(u)
    }

    /// `range` is the half-width `U` of `[-U, U]` on which the infimum of a
    /// non-constant `f''` is taken.
    pub fn check_theorem_conditions(&self, range: f64) -> ConditionReport {
        let f_triple_prime_zero = self.d3f.is_zero();
        let f_double_prime_lower_bound =
            if f_triple_prime_zero { self.d2f.eval(0.0) } else { self.d2f.min_on(-range.abs(), range.abs()) };
        let two_u = Polynomial::new(vec![0.0, 2.0]);
        let g_prime_matches = self.dg == self.d2f.mul(&two_u);
        ConditionReport { f_triple_prime_zero, f_double_prime_lower_bound, g_prime_matches }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_flux_valid_and_errors() {
        let ch = FluxModel::new(&[0.0, 0.0, 0.5], &[0.0, 0.0, 1.0], 0.1).unwrap();
        assert_eq!(ch.eval(FluxSymbol::DF, 3.0), 3.0);
        assert_eq!(ch.eval(FluxSymbol::D2F, -7.5), 1.0);
        assert_eq!(ch.eval(FluxSymbol::D3F, 2.0), 0.0);

        let err = FluxModel::new(&[0.0, 0.0, 0.5], &[0.3, 0.0, 1.0], 0.0).unwrap_err();
        assert!(err.to_string().contains("g(0)≠0"), "{err}");
        let err = FluxModel::new(&[0.0, 1.0], &[0.0, 0.0, 1.0], 1.0).unwrap_err();
        assert!(err.to_string().contains("f''≡0"), "{err}");
        assert!(FluxModel::new(&[0.0, 0.0, 0.5], &[0.0], -1.0).is_err());
        assert!(FluxModel::new(&[0.0, 0.0, f64::NAN], &[0.0], 0.0).is_err());
    }

    #[test]
    fn eval_examples() {
        let rod = FluxModel::new(&[0.0, 0.0, 1.0], &[0.0], 0.0).unwrap();
        for u in [-3.0, 0.0, 1.7, 1e6] {
            assert_eq!(rod.eval(FluxSymbol::D2F, u), 2.0);
        }
        let dch = FluxModel::camassa_holm(1.0, 0.0);
        assert_eq!(dch.eval(FluxSymbol::DG, -1.0), 0.0);
        assert_eq!(dch.eval(FluxSymbol::G, 2.0), 8.0);
    }

    #[test]
    fn theorem_conditions() {
        let ch = FluxModel::camassa_holm(0.0, 0.0).check_theorem_conditions(1.0);
        assert!(ch.f_triple_prime_zero);
        assert_eq!(ch.f_double_prime_lower_bound, 1.0);
        assert!(ch.g_prime_matches);
        assert!(ch.all_hold());

        // dispersive CH: g' = 2κ + 2u differs from 2u
        let dch = FluxModel::camassa_holm(0.5, 0.0).check_theorem_conditions(1.0);
        assert!(!dch.g_prime_matches);

        let cubic = FluxModel::new(&[0.0, 0.0, 0.0, 1.0], &[0.0, 0.0, 1.0], 0.0).unwrap();
        let rep = cubic.check_theorem_conditions(2.0);
        assert!(!rep.f_triple_prime_zero);
        // f'' = 6u has infimum -12 on [-2, 2]
        assert!((rep.f_double_prime_lower_bound + 12.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_min_finds_interior_critical_point() {
        // (u - 0.3)^2 + 1
        let p = Polynomial::new(vec![1.09, -0.6, 1.0]);
        assert!((p.min_on(-2.0, 2.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn second_derivative_matches_finite_differences() {
        let model = FluxModel::new(&[0.1, -0.4, 0.7, 0.25, -0.05], &[0.0, 1.0], 0.0).unwrap();
        let f = |u: f64| model.eval(FluxSymbol::F, u);
        for u in [-1.3, 0.2, 0.9] {
            let exact = model.eval(FluxSymbol::D2F, u);
            let err = |h: f64| ((f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h) - exact).abs();
            let (e1, e2) = (err(1e-2), err(1e-3));
            // O(h²): tenfold refinement gives a hundredfold reduction
            assert!(e1 / e2 > 80.0 && e1 / e2 < 120.0, "ratio {}", e1 / e2);
        }
    }
}
