//! Named initial data.
//!
//! Every scenario can be handed to the Lagrangian solver as an
//! [`InitialProfile`]; peakon-type data is then evaluated exactly, kinks
//! included. The Eulerian solver needs smooth samples, so
//! [`Scenario::sample`] mollifies peaked data and refuses the bare peakon.

use std::collections::BTreeMap;

use crate::error::{Result, WaveError};
use crate::function_space::{gaussian_mollify, helmholtz_convolve, sobolev_norm, SampledProfile, UniformGrid};
use crate::lagrangian::{InitialProfile, SampledData};

/// Profile given by closed-form value and slope.
pub struct AnalyticProfile {
    value: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    slope: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    kinks: Vec<f64>,
}

impl AnalyticProfile {
    pub fn new(value: impl Fn(f64) -> f64 + Send + Sync + 'static, slope: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { value: Box::new(value), slope: Box::new(slope), kinks: Vec::new() }
    }

    pub fn with_kinks(mut self, kinks: Vec<f64>) -> Self {
        self.kinks = kinks;
        self
    }

    /// `c e^{-|x - x0|}`. At the crest the slope is the left limit `c`, so the
    /// energy density `1 + slope²` stays continuous across the kink.
    pub fn peakon(c: f64, x0: f64) -> Self {
        Self::new(
            move |x| c * (-(x - x0).abs()).exp(),
            move |x| {
                let d = x - x0;
                if d <= 0.0 {
                    c * d.exp()
                } else {
                    -c * (-d).exp()
                }
            },
        )
        .with_kinks(vec![x0])
    }

    pub fn sample(&self, grid: UniformGrid) -> Result<SampledProfile> {
        SampledProfile::from_fn(grid, |x| (self.value)(x))
    }
}

impl InitialProfile for AnalyticProfile {
    fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    fn slope(&self, x: f64) -> f64 {
        (self.slope)(x)
    }

    fn kinks(&self) -> Vec<f64> {
        self.kinks.clone()
    }
}

impl std::fmt::Debug for AnalyticProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("AnalyticProfile")
    }
}

/// Slope threshold used by the scenarios that are expected to break. The
/// generic default `-50 (1 + ‖ū_x‖_∞)` lies beyond what an energy-conserving
/// spectral grid can represent, see [`crate::eulerian::BlowupMonitor`].
pub const BREAKING_SLOPE_THRESHOLD: f64 = -10.0;

/// Nonnegative `C⁷` bump `(1 - x²)⁸` on `[-1, 1]`.
pub fn bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - x * x).powi(8)
    }
}

/// `ū = p * m̄` with `m̄(x) = A(φ(x - a) - φ(x + a))`, `a = separation/2` and
/// `φ` the unit-width [`bump`]. The momentum is `≤ 0` left of 0 and `≥ 0`
/// right of it.
pub fn make_sign_changing_data(amplitude: f64, separation: f64, grid: UniformGrid) -> Result<SampledProfile> {
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(WaveError::InvalidArgument(format!("amplitude must be nonnegative, got {amplitude}")));
    }
    if !(separation > 0.0) {
        return Err(WaveError::InvalidArgument(format!("separation must be positive, got {separation}")));
    }
    if separation < 2.0 {
        return Err(WaveError::InvalidArgument(format!(
            "bumps of half-width 1 overlap at separation {separation} (need at least 2)"
        )));
    }
    let a = 0.5 * separation;
    let m = SampledProfile::from_fn(grid, |x| amplitude * (bump(x - a) - bump(x + a)))?;
    Ok(helmholtz_convolve(&m))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Zero,
    Gaussian {
        amplitude: f64,
        sigma: f64,
    },
    /// Exact peakon; Lagrangian solver only.
    Peakon {
        c: f64,
        x0: f64,
    },
    /// Peakon convolved with a Gaussian; `sigma = 0` means four grid spacings.
    MollifiedPeakon {
        c: f64,
        x0: f64,
        sigma: f64,
    },
    /// Peakon at `-separation/2` and antipeakon at `+separation/2`, moving
    /// toward each other.
    PeakonAntipeakon {
        c: f64,
        separation: f64,
    },
    SignChanging {
        amplitude: f64,
        separation: f64,
    },
    /// Gaussian rescaled so that `‖ū‖_{H^s} = epsilon` on the grid.
    SmallData {
        epsilon: f64,
        s: f64,
    },
    /// `ū(x) = -slope · x e^{-x²/2}`, so `ū_x(0) = -slope`.
    Breaking {
        slope: f64,
    },
}

/// Name, parameters with defaults, one-line description.
pub type ScenarioEntry = (&'static str, &'static [(&'static str, f64)], &'static str);

pub const SCENARIOS: &[ScenarioEntry] = &[
    ("zero", &[], "u = 0"),
    ("gaussian", &[("amplitude", 0.5), ("sigma", 1.0)], "a exp(-x^2 / (2 sigma^2))"),
    ("peakon", &[("c", 1.0), ("x0", 0.0)], "exact c exp(-|x - x0|), lagrangian solver only"),
    ("mollified_peakon", &[("c", 1.0), ("x0", 0.0), ("sigma", 0.0)], "peakon smoothed by a Gaussian (sigma = 0 selects 4 dx)"),
    (
        "peakon_antipeakon",
        &[("c", 1.0), ("separation", 6.0)],
        "colliding peakon and antipeakon (alias peakon_collision); mollified for the eulerian solver",
    ),
    ("sign_changing", &[("amplitude", 1.0), ("separation", 4.0)], "momentum <= 0 left of 0 and >= 0 right of 0"),
    ("small_data", &[("epsilon", 1e-3), ("s", 2.0)], "Gaussian with H^s norm epsilon"),
    ("breaking", &[("slope", 2.0)], "-slope x exp(-x^2/2), steep negative slope at 0"),
];

pub fn scenario_names() -> Vec<&'static str> {
    SCENARIOS.iter().map(|(n, _, _)| *n).collect()
}

impl Scenario {
    /// Builds a scenario from its name, filling unspecified parameters with
    /// their defaults.
    pub fn from_params(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let name = if name == "peakon_collision" { "peakon_antipeakon" } else { name };
        let Some((_, defaults, _)) = SCENARIOS.iter().find(|(n, _, _)| *n == name) else {
            return Err(WaveError::Config(format!(
                "unknown scenario \"{name}\"; valid scenarios: {}",
                scenario_names().join(", ")
            )));
        };
        for key in params.keys() {
            if !defaults.iter().any(|(k, _)| k == key) {
                let valid: Vec<&str> = defaults.iter().map(|(k, _)| *k).collect();
                return Err(WaveError::Config(format!(
                    "unknown parameter \"{key}\" for scenario {name} (valid: {})",
                    if valid.is_empty() { "none".to_string() } else { valid.join(", ") }
                )));
            }
        }
        let get = |k: &str| params.get(k).copied().unwrap_or_else(|| defaults.iter().find(|(d, _)| *d == k).unwrap().1);
        let scenario = match name {
            "zero" => Scenario::Zero,
            "gaussian" => Scenario::Gaussian { amplitude: get("amplitude"), sigma: get("sigma") },
            "peakon" => Scenario::Peakon { c: get("c"), x0: get("x0") },
            "mollified_peakon" => Scenario::MollifiedPeakon { c: get("c"), x0: get("x0"), sigma: get("sigma") },
            "peakon_antipeakon" => Scenario::PeakonAntipeakon { c: get("c"), separation: get("separation") },
            "sign_changing" => Scenario::SignChanging { amplitude: get("amplitude"), separation: get("separation") },
            "small_data" => Scenario::SmallData { epsilon: get("epsilon"), s: get("s") },
            "breaking" => Scenario::Breaking { slope: get("slope") },
            _ => unreachable!(),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(WaveError::Config(format!("scenario parameter {what} invalid: {v}")));
        match *self {
            Scenario::Gaussian { sigma, .. } if !(sigma > 0.0) => bad("sigma", sigma),
            Scenario::MollifiedPeakon { sigma, .. } if !(sigma >= 0.0) => bad("sigma", sigma),
            Scenario::PeakonAntipeakon { separation, .. } if !(separation > 0.0) => bad("separation", separation),
            Scenario::SmallData { epsilon, .. } if !(epsilon >= 0.0) => bad("epsilon", epsilon),
            Scenario::SmallData { s, .. } if !(s >= 0.0) => bad("s", s),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Zero => "zero",
            Scenario::Gaussian { .. } => "gaussian",
            Scenario::Peakon { .. } => "peakon",
            Scenario::MollifiedPeakon { .. } => "mollified_peakon",
            Scenario::PeakonAntipeakon { .. } => "peakon_antipeakon",
            Scenario::SignChanging { .. } => "sign_changing",
            Scenario::SmallData { .. } => "small_data",
            Scenario::Breaking { .. } => "breaking",
        }
    }

    pub fn lagrangian_only(&self) -> bool {
        matches!(self, Scenario::Peakon { .. })
    }

    /// Threshold override for the blow-up monitor, if the scenario has one.
    pub fn blowup_threshold(&self) -> Option<f64> {
        match self {
            Scenario::PeakonAntipeakon { .. } | Scenario::Breaking { .. } => Some(BREAKING_SLOPE_THRESHOLD),
            _ => None,
        }
    }

    fn analytic(&self) -> Option<AnalyticProfile> {
        match *self {
            Scenario::Peakon { c, x0 } => Some(AnalyticProfile::peakon(c, x0)),
            Scenario::PeakonAntipeakon { c, separation } => {
                let a = 0.5 * separation;
                let (left, right) = (AnalyticProfile::peakon(c, -a), AnalyticProfile::peakon(-c, a));
                let (l2, r2) = (AnalyticProfile::peakon(c, -a), AnalyticProfile::peakon(-c, a));
                Some(
                    AnalyticProfile::new(move |x| left.value(x) + right.value(x), move |x| l2.slope(x) + r2.slope(x))
                        .with_kinks(vec![-a, a]),
                )
            }
            _ => None,
        }
    }

    /// Samples for the Eulerian solver; peaked data is mollified.
    pub fn sample(&self, grid: UniformGrid) -> Result<SampledProfile> {
        let default_sigma = 4.0 * grid.dx();
        match *self {
            Scenario::Zero => Ok(SampledProfile::zeros(grid)),
            Scenario::Gaussian { amplitude, sigma } => {
                SampledProfile::from_fn(grid, |x| amplitude * (-x * x / (2.0 * sigma * sigma)).exp())
            }
            Scenario::Peakon { .. } => Err(WaveError::InvalidArgument(
                "the exact peakon is only H^1 and is restricted to the lagrangian solver; \
                 use scenario mollified_peakon for the eulerian solver"
                    .into(),
            )),
            Scenario::MollifiedPeakon { c, x0, sigma } => {
                let raw = AnalyticProfile::peakon(c, x0).sample(grid)?;
                let s = if sigma > 0.0 { sigma } else { default_sigma };
                Ok(gaussian_mollify(&raw, s))
            }
            Scenario::PeakonAntipeakon { .. } => {
                let raw = self.analytic().expect("analytic").sample(grid)?;
                Ok(gaussian_mollify(&raw, default_sigma))
            }
            Scenario::SignChanging { amplitude, separation } => make_sign_changing_data(amplitude, separation, grid),
            Scenario::SmallData { epsilon, s } => {
                let shape = SampledProfile::from_fn(grid, |x| (-x * x / 2.0).exp())?;
                let scale = epsilon / sobolev_norm(&shape, s);
                Ok(shape.map(|v| scale * v))
            }
            Scenario::Breaking { slope } => SampledProfile::from_fn(grid, |x| -slope * x * (-x * x / 2.0).exp()),
        }
    }

    /// Initial data for the Lagrangian solver: exact for peaked scenarios,
    /// spectral samples on `grid` otherwise.
    pub fn initial_profile(&self, grid: UniformGrid) -> Result<Box<dyn InitialProfile>> {
        match self.analytic() {
            Some(p) => Ok(Box::new(p)),
            None => Ok(Box::new(SampledData::new(&self.sample(grid)?))),
        }
    }

    /// Values of the initial data on `grid` without mollification.
    pub fn exact_samples(&self, grid: UniformGrid) -> Result<SampledProfile> {
        match self.analytic() {
            Some(p) => p.sample(grid),
            None => self.sample(grid),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_space::spectral_derivative;

    fn grid() -> UniformGrid {
        UniformGrid::periodic(-32.0, 32.0, 2048).unwrap()
    }

    fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn peakon_values() {
        let s = Scenario::from_params("peakon", &params(&[("c", 1.0), ("x0", 0.0)])).unwrap();
        let p = s.initial_profile(grid()).unwrap();
        assert_eq!(p.value(0.0), 1.0);
        assert!((p.value(1.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((p.value(-1.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((p.slope(1.0) + (-1.0f64).exp()).abs() < 1e-15);
        assert!((p.slope(-1.0) - (-1.0f64).exp()).abs() < 1e-15);
        let err = s.sample(grid()).unwrap_err().to_string();
        assert!(err.contains("mollified_peakon"), "{err}");
    }

    #[test]
    fn unknown_names_are_listed() {
        let err = Scenario::from_params("foo", &BTreeMap::new()).unwrap_err().to_string();
        for n in scenario_names() {
            assert!(err.contains(n), "{err}");
        }
        assert!(Scenario::from_params("gaussian", &params(&[("c", 1.0)])).is_err());
    }

    #[test]
    fn small_data_norm_matches_epsilon() {
        for eps in [1e-3, 0.1] {
            let s = Scenario::SmallData { epsilon: eps, s: 2.0 };
            let u = s.sample(grid()).unwrap();
            assert!((sobolev_norm(&u, 2.0) / eps - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn sign_changing_zero_amplitude_and_overlap() {
        let u = make_sign_changing_data(0.0, 4.0, grid()).unwrap();
        assert_eq!(u.max_abs(), 0.0);
        assert!(make_sign_changing_data(1.0, 1.5, grid()).is_err());
        assert!(make_sign_changing_data(1.0, -1.0, grid()).is_err());
    }

    #[test]
    fn breaking_slope_at_origin() {
        let u = Scenario::Breaking { slope: 2.0 }.sample(grid()).unwrap();
        let ux = spectral_derivative(&u, 1);
        assert!((ux.interpolate(0.0) + 2.0).abs() < 1e-8);
    }

    #[test]
    fn mollified_pair_is_smooth_and_close() {
        let s = Scenario::PeakonAntipeakon { c: 1.0, separation: 6.0 };
        let smooth = s.sample(grid()).unwrap();
        let exact = s.exact_samples(grid()).unwrap();
        assert!(crate::eulerian::spectral_tail_ok(&smooth));
        assert!(smooth.zip_with(&exact, |a, b| a - b).max_abs() < 0.1);
    }
}
