//! Numerical laboratory for the weakly dissipative generalized
//! hyperelastic-rod family
//!
//! ```text
//! u_t + f'(u) u_x + λ u + ∂x p * (g(u) + ½ f''(u) u_x²) = 0,   p(x) = ½ e^{-|x|}
//! ```
//!
//! Two solvers share one spectral substrate:
//!
//! - [`semilinear`] integrates the `(k, v, q, y)` system in energy
//!   coordinates built by [`lagrangian`]. It conserves the time-weighted energy
//!   `e^{2λt}‖u‖²_{H¹}` and keeps going through wave breaking.
//! - [`eulerian`] is a dealiased pseudo-spectral RK4 solver of the nonlocal
//!   form, used as a cross-check before breaking and as the blow-up detector.
//!
//! [`diagnostics`] turns the conservation laws and the global-existence
//! arguments into executable checks, and [`run`] wires scenarios, config
//! files and output files together for the `wave` binary.

// `!(a > b)` style guards are used on purpose: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod eulerian;
pub mod flux;
pub mod function_space;
pub mod lagrangian;
pub mod quadrature;
pub mod report;
pub mod run;
pub mod scenarios;
pub mod semilinear;

pub use error::{Result, WaveError};
pub use flux::{ConditionReport, FluxModel, FluxSymbol};
pub use function_space::{SampledProfile, UniformGrid};
pub use lagrangian::{LagrangianState, XiGrid};
