//! Config files, run orchestration and output files.
//!
//! A config is a flat list of `key = value` lines; `#` starts a comment.
//!
//! ```text
//! scenario = sign_changing
//! scenario.amplitude = 1
//! flux.model = ch            # ch | rod | polynomial
//! lambda = 0.3
//! grid.n_x = 4096
//! time.T = 1
//! solver = eulerian          # lagrangian | eulerian | both
//! checks = momentum, sign_pattern, ux_bound
//! ```
//!
//! A run directory holds `report.txt`, `series.csv` (plus
//! `series_eulerian.csv` when both solvers ran) and `snapshots/`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::diagnostics::{
    decay_identity_check, dependence_study, momentum_invariant_check, record, sign_pattern_check, small_data_decay_check,
    ux_lower_bound_check, DependenceSetup, Verdict,
};
use crate::error::{Result, WaveError};
use crate::eulerian::{eulerian_evolve, BlowupMonitor, EulerianControls, EulerianRun, EulerianState, SeriesRow, StopReason};
use crate::flux::FluxModel;
use crate::function_space::{sobolev_norm, SampledProfile, UniformGrid};
use crate::lagrangian::{lagrangian_initial, slope_from_v, to_eulerian};
use crate::report::Report;
use crate::scenarios::{scenario_names, Scenario};
use crate::semilinear::{evolve, lagrangian_energy, EvolveControls, LagrangianRun};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverChoice {
    Lagrangian,
    Eulerian,
    Both,
}

impl SolverChoice {
    fn lagrangian(self) -> bool {
        matches!(self, SolverChoice::Lagrangian | SolverChoice::Both)
    }

    fn eulerian(self) -> bool {
        matches!(self, SolverChoice::Eulerian | SolverChoice::Both)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SolverChoice::Lagrangian => "lagrangian",
            SolverChoice::Eulerian => "eulerian",
            SolverChoice::Both => "both",
        }
    }
}

/// Check names accepted in `checks`, with the solver each one reads.
pub const CHECKS: &[(&str, &str)] = &[
    ("energy", "any"),
    ("cross", "both"),
    ("structure", "lagrangian"),
    ("decay_identity", "lagrangian"),
    ("dependence", "lagrangian"),
    ("theorem_conditions", "any"),
    ("momentum", "eulerian"),
    ("sign_pattern", "eulerian"),
    ("ux_bound", "eulerian"),
    ("small_data_decay", "eulerian"),
    ("blowup", "eulerian"),
];

/// Tolerances and parameters of the checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckParams {
    pub energy_tol: f64,
    pub cross_tol: f64,
    pub structure_tol: f64,
    pub momentum_tol: f64,
    pub decay_identity_tol: f64,
    /// Momentum seeds; `None` picks the scenario's default.
    pub seeds: Option<Vec<f64>>,
    pub x0: f64,
    /// Sobolev index of the small-data check; `None` takes the scenario's.
    pub s: Option<f64>,
    pub perturbation: f64,
    pub window: f64,
}

impl Default for CheckParams {
    fn default() -> Self {
        Self {
            energy_tol: 1e-6,
            cross_tol: 1e-4,
            structure_tol: 1e-4,
            momentum_tol: 1e-3,
            decay_identity_tol: 1e-4,
            seeds: None,
            x0: 0.0,
            s: None,
            perturbation: 1e-2,
            window: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub scenario: Scenario,
    pub model: FluxModel,
    pub n_x: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub n_xi: usize,
    pub final_time: f64,
    pub dt: f64,
    pub sample_every: usize,
    pub solver: SolverChoice,
    pub checks: Vec<String>,
    pub params: CheckParams,
    pub output_dir: PathBuf,
}

const KEYS: &[&str] = &[
    "scenario",
    "flux.model",
    "flux.kappa",
    "flux.gamma",
    "flux.f",
    "flux.g",
    "lambda",
    "grid.n_x",
    "grid.x_min",
    "grid.x_max",
    "grid.n_xi",
    "time.T",
    "time.dt",
    "time.sample_every",
    "solver",
    "checks",
    "check.energy_tol",
    "check.cross_tol",
    "check.structure_tol",
    "check.momentum_tol",
    "check.decay_identity_tol",
    "check.seeds",
    "check.x0",
    "check.s",
    "check.perturbation",
    "check.window",
    "output_dir",
];

fn cfg_err(msg: impl Into<String>) -> WaveError {
    WaveError::Config(msg.into())
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| cfg_err(format!("{key} must be a finite number, got \"{v}\"")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|s| parse_f64(key, s.trim())).collect()
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse().map_err(|_| cfg_err(format!("{key} must be a nonnegative integer, got \"{v}\"")))
}

/// Parses and validates a config, filling defaults.
pub fn parse_config(text: &str) -> Result<RunSpec> {
    let mut kv: BTreeMap<String, String> = BTreeMap::new();
    let mut scenario_params: BTreeMap<String, f64> = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| cfg_err(format!("line {}: expected key = value", no + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if let Some(param) = k.strip_prefix("scenario.") {
            scenario_params.insert(param.to_string(), parse_f64(k, v)?);
        } else if KEYS.contains(&k) {
            if kv.insert(k.to_string(), v.to_string()).is_some() {
                return Err(cfg_err(format!("key {k} given twice")));
            }
        } else {
            return Err(cfg_err(format!("unknown key \"{k}\"")));
        }
    }
    let get = |k: &str| kv.get(k).map(String::as_str);
    let num = |k: &str, default: f64| get(k).map_or(Ok(default), |v| parse_f64(k, v));
    let int = |k: &str, default: usize| get(k).map_or(Ok(default), |v| parse_usize(k, v));

    let name = get("scenario")
        .ok_or_else(|| cfg_err(format!("missing key scenario; valid scenarios: {}", scenario_names().join(", "))))?;
    let scenario = Scenario::from_params(name, &scenario_params)?;

    let lambda = num("lambda", 0.0)?;
    if lambda < 0.0 {
        return Err(cfg_err("lambda must be nonnegative"));
    }
    let model = match get("flux.model").unwrap_or("ch") {
        "ch" => FluxModel::camassa_holm(num("flux.kappa", 0.0)?, lambda),
        "rod" => FluxModel::hyperelastic_rod(num("flux.gamma", 1.0)?, lambda)?,
        "polynomial" => {
            let f = get("flux.f").ok_or_else(|| cfg_err("flux.model = polynomial needs flux.f"))?;
            let g = get("flux.g").ok_or_else(|| cfg_err("flux.model = polynomial needs flux.g"))?;
            FluxModel::new(&parse_list("flux.f", f)?, &parse_list("flux.g", g)?, lambda)?
        }
        other => return Err(cfg_err(format!("flux.model must be ch, rod or polynomial, got \"{other}\""))),
    };

    let n_x = int("grid.n_x", 4096)?;
    let (x_min, x_max) = (num("grid.x_min", -32.0)?, num("grid.x_max", 32.0)?);
    let n_xi = int("grid.n_xi", 8192)?;
    if n_x < 16 || !n_x.is_power_of_two() {
        return Err(cfg_err(format!("grid.n_x must be a power of two >= 16, got {n_x}")));
    }
    if !(x_max > x_min) {
        return Err(cfg_err("grid.x_max must exceed grid.x_min"));
    }
    if n_xi < 16 {
        return Err(cfg_err(format!("grid.n_xi must be at least 16, got {n_xi}")));
    }

    let final_time = num("time.T", 1.0)?;
    let dt = num("time.dt", 1e-3)?;
    if !(dt > 0.0) {
        return Err(cfg_err("time.dt must be positive"));
    }
    if !(final_time > 0.0) {
        return Err(cfg_err("time.T must be positive"));
    }
    let sample_every = int("time.sample_every", ((0.1 / dt).round() as usize).max(1))?;
    if sample_every == 0 {
        return Err(cfg_err("time.sample_every must be positive"));
    }

    let solver = match get("solver").unwrap_or("lagrangian") {
        "lagrangian" => SolverChoice::Lagrangian,
        "eulerian" => SolverChoice::Eulerian,
        "both" => SolverChoice::Both,
        other => return Err(cfg_err(format!("solver must be lagrangian, eulerian or both, got \"{other}\""))),
    };
    if solver.eulerian() && scenario.lagrangian_only() {
        return Err(cfg_err(format!(
            "scenario {} is lagrangian-only; use scenario mollified_peakon for the eulerian solver",
            scenario.name()
        )));
    }

    let mut checks = Vec::new();
    for c in get("checks").unwrap_or("").split(',').map(str::trim).filter(|c| !c.is_empty()) {
        let Some((_, needs)) = CHECKS.iter().find(|(n, _)| *n == c) else {
            let valid: Vec<&str> = CHECKS.iter().map(|(n, _)| *n).collect();
            return Err(cfg_err(format!("unknown check \"{c}\"; valid checks: {}", valid.join(", "))));
        };
        let ok = match *needs {
            "eulerian" => solver.eulerian(),
            "lagrangian" => solver.lagrangian(),
            "both" => solver == SolverChoice::Both,
            _ => true,
        };
        if !ok {
            return Err(cfg_err(format!("check {c} needs solver = {needs}")));
        }
        if !checks.iter().any(|x| x == c) {
            checks.push(c.to_string());
        }
    }

    let d = CheckParams::default();
    let params = CheckParams {
        energy_tol: num("check.energy_tol", d.energy_tol)?,
        cross_tol: num("check.cross_tol", d.cross_tol)?,
        structure_tol: num("check.structure_tol", d.structure_tol)?,
        momentum_tol: num("check.momentum_tol", d.momentum_tol)?,
        decay_identity_tol: num("check.decay_identity_tol", d.decay_identity_tol)?,
        seeds: get("check.seeds").map(|v| parse_list("check.seeds", v)).transpose()?,
        x0: num("check.x0", d.x0)?,
        s: get("check.s").map(|v| parse_f64("check.s", v)).transpose()?,
        perturbation: num("check.perturbation", d.perturbation)?,
        window: num("check.window", d.window)?,
    };
    let output_dir = PathBuf::from(get("output_dir").map_or_else(|| format!("runs/{}", scenario.name()), String::from));

    Ok(RunSpec { scenario, model, n_x, x_min, x_max, n_xi, final_time, dt, sample_every, solver, checks, params, output_dir })
}

impl RunSpec {
    pub fn x_grid(&self) -> Result<UniformGrid> {
        UniformGrid::periodic(self.x_min, self.x_max, self.n_x)
    }

    /// `output_dir` resolved against `root` when it is relative.
    pub fn output_path(&self, root: Option<&Path>) -> PathBuf {
        match root {
            Some(r) if self.output_dir.is_relative() => r.join(&self.output_dir),
            _ => self.output_dir.clone(),
        }
    }

    fn seeds(&self) -> Vec<f64> {
        if let Some(s) = &self.params.seeds {
            return s.clone();
        }
        match self.scenario {
            // bump cores, where the momentum is well away from zero
            Scenario::SignChanging { separation, .. } => {
                let a = 0.5 * separation;
                let core: Vec<f64> = (0..=16).map(|i| -0.8 + 0.1 * i as f64).collect();
                core.iter().map(|c| c - a).chain(core.iter().map(|c| c + a)).collect()
            }
            _ => (0..=20).map(|i| -5.0 + 0.5 * i as f64).collect(),
        }
    }
}

/// Exit status and where the files went.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub report: Report,
    pub dir: PathBuf,
}

fn write_series(path: &Path, rows: &[SeriesRow]) -> Result<()> {
    let mut out = String::from("t,E_weighted,min_ux,max_abs_u\n");
    for r in rows {
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", r.t, r.weighted_energy, r.min_ux, r.max_abs_u);
    }
    fs::write(path, out).map_err(WaveError::from)
}

fn lagrangian_series(run: &LagrangianRun, lambda: f64) -> Vec<SeriesRow> {
    run.snapshots
        .iter()
        .map(|s| {
            let decay = (-lambda * s.t).exp();
            let min_ux = slope_from_v(s).iter().fold(f64::INFINITY, |m, k| m.min(k.map_or(f64::NEG_INFINITY, |k| decay * k)));
            SeriesRow { t: s.t, weighted_energy: lagrangian_energy(s), min_ux, max_abs_u: decay * s.max_abs_k() }
        })
        .collect()
}

fn l2_distance(a: &SampledProfile, b: &SampledProfile) -> f64 {
    let dx = a.grid().dx();
    (dx * a.values().iter().zip(b.values()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>()).sqrt()
}

struct Runs {
    lagrangian: Option<LagrangianRun>,
    eulerian: Option<EulerianRun>,
}

/// Executes the solvers and checks and writes the run directory. The exit
/// code is 0 when every requested check passes (or is not applicable), 1
/// when one fails and 2 when a solver fails; the report is written on every
/// path.
pub fn run(spec: &RunSpec, dir: &Path) -> Result<RunOutcome> {
    let snap_dir = dir.join("snapshots");
    fs::create_dir_all(&snap_dir)?;
    let mut report = Report::new();
    report.set("scenario", spec.scenario.name());
    report.set("solver", spec.solver.as_str());
    report.set_f64("lambda", spec.model.lambda());
    report.set("n_x", spec.n_x);
    report.set("n_xi", spec.n_xi);
    report.set_f64("dt", spec.dt);
    report.set_f64("T", spec.final_time);

    let x_grid = spec.x_grid()?;
    let mut runs = Runs { lagrangian: None, eulerian: None };
    let mut failure: Option<String> = None;

    if spec.solver.lagrangian() {
        let result = spec.scenario.initial_profile(x_grid).and_then(|p| {
            let state = lagrangian_initial(p.as_ref(), &x_grid, spec.n_xi)?;
            evolve(&state, &spec.model, spec.final_time, EvolveControls { dt: spec.dt, sample_every: spec.sample_every })
        });
        match result {
            Ok(r) => {
                for (i, s) in r.snapshots.iter().enumerate() {
                    fs::write(snap_dir.join(format!("lagrangian_{i:04}.csv")), s.to_csv())?;
                }
                report.merge(&r.report.to_report());
                runs.lagrangian = Some(r);
            }
            Err(e) => failure = Some(format!("lagrangian: {e}")),
        }
    }
    if spec.solver.eulerian() && failure.is_none() {
        match spec.scenario.sample(x_grid) {
            Ok(u0) => {
                let monitor = match spec.scenario.blowup_threshold() {
                    Some(t) => BlowupMonitor::with_threshold(t)?,
                    None => BlowupMonitor::for_data(&u0),
                };
                let r = eulerian_evolve(
                    &EulerianState::new(u0),
                    &spec.model,
                    spec.final_time,
                    EulerianControls { dt: spec.dt, sample_every: spec.sample_every },
                    monitor,
                );
                for (i, s) in r.snapshots.iter().enumerate() {
                    fs::write(snap_dir.join(format!("eulerian_{i:04}.csv")), s.u.to_csv())?;
                }
                report.set("stop_reason", r.stop_reason.as_str());
                report.set_f64("eulerian_energy_drift_rel", r.energy_drift_rel());
                report.set_f64("blowup_threshold", r.monitor.threshold);
                report.set_f64("eulerian_min_ux", r.monitor.min_ux());
                report.set("under_resolved", r.under_resolved);
                // the slope criterion only characterizes breaking when f'' >= γ > 0
                // on the solution's range, taken as [-2‖ū‖_{H¹}, 2‖ū‖_{H¹}]
                let range = 2.0 * sobolev_norm(&r.snapshots[0].u, 1.0);
                report.set("blowup_criterion_valid", spec.model.check_theorem_conditions(range).f_double_prime_lower_bound > 0.0);
                if let StopReason::NumericalFailure(msg) = &r.stop_reason {
                    failure = Some(format!("eulerian: {msg}"));
                }
                runs.eulerian = Some(r);
            }
            Err(e) => failure = Some(format!("eulerian: {e}")),
        }
    } else if runs.lagrangian.is_some() {
        report.set("stop_reason", StopReason::Completed.as_str());
    }

    match (&runs.lagrangian, &runs.eulerian) {
        (Some(l), e) => {
            write_series(&dir.join("series.csv"), &lagrangian_series(l, spec.model.lambda()))?;
            if let Some(e) = e {
                write_series(&dir.join("series_eulerian.csv"), &e.series)?;
            }
        }
        (None, Some(e)) => write_series(&dir.join("series.csv"), &e.series)?,
        (None, None) => write_series(&dir.join("series.csv"), &[])?,
    }

    if let Some(msg) = failure {
        if report.get("stop_reason").is_none() || runs.eulerian.is_none() {
            report.set("stop_reason", "numerical_failure");
        }
        report.set("error", msg.replace('\n', " "));
        report.set("status", "partial");
        for c in &spec.checks {
            report.set(format!("check_{c}"), "n/a");
        }
        report.write(&dir.join("report.txt"))?;
        return Ok(RunOutcome { exit_code: 2, report, dir: dir.to_path_buf() });
    }

    let mut failed = false;
    for c in &spec.checks {
        let verdict = run_check(c, spec, &runs, &x_grid, &mut report)?;
        failed |= verdict == Verdict::Fail;
    }
    report.set("status", "complete");
    report.write(&dir.join("report.txt"))?;
    Ok(RunOutcome { exit_code: i32::from(failed), report, dir: dir.to_path_buf() })
}

fn run_check(name: &str, spec: &RunSpec, runs: &Runs, x_grid: &UniformGrid, report: &mut Report) -> Result<Verdict> {
    let p = &spec.params;
    let model = &spec.model;
    let traj = runs.eulerian.as_ref().map(|r| r.snapshots.as_slice()).unwrap_or(&[]);
    let verdict = match name {
        "energy" => {
            let mut drift = 0.0f64;
            if let Some(l) = &runs.lagrangian {
                drift = drift.max(l.report.energy_drift_rel);
            }
            if let Some(e) = &runs.eulerian {
                drift = drift.max(e.energy_drift_rel());
            }
            let v = Verdict::from_bool(drift <= p.energy_tol);
            record(report, name, v, &[("drift", drift)]);
            v
        }
        "cross" => {
            let (l, e) = (runs.lagrangian.as_ref().unwrap(), runs.eulerian.as_ref().unwrap());
            let mut worst = 0.0f64;
            for es in &e.snapshots {
                if let Some(ls) = l.snapshots.iter().find(|s| (s.t - es.t).abs() < 1e-9) {
                    worst = worst.max(l2_distance(&to_eulerian(ls, model.lambda(), x_grid), &es.u));
                }
            }
            let v = Verdict::from_bool(worst <= p.cross_tol);
            record(report, name, v, &[("l2_max", worst)]);
            v
        }
        "structure" => {
            let r = &runs.lagrangian.as_ref().unwrap().report;
            let worst = r.max_kxi_residual.max(r.max_yxi_residual);
            let v = Verdict::from_bool(worst <= p.structure_tol);
            record(report, name, v, &[("kxi", r.max_kxi_residual), ("yxi", r.max_yxi_residual)]);
            v
        }
        "decay_identity" => {
            let d = decay_identity_check(runs.lagrangian.as_ref().unwrap(), model, x_grid);
            let v = Verdict::from_bool(d.max_deviation <= p.decay_identity_tol);
            record(report, name, v, &[("max_deviation", d.max_deviation), ("excluded", d.excluded as f64)]);
            v
        }
        "dependence" => {
            let ubar = spec.scenario.sample(*x_grid)?;
            let setup = DependenceSetup {
                model: model.clone(),
                x_grid: *x_grid,
                n_xi: spec.n_xi,
                dt: spec.dt,
                sample_every: spec.sample_every,
                window: p.window,
            };
            let study = dependence_study(&ubar, p.perturbation, 3, spec.final_time, &setup)?;
            let v = Verdict::from_bool(study.pass);
            let ratios: Vec<(String, f64)> = study.ratios.iter().enumerate().map(|(i, r)| (format!("ratio_{i}"), *r)).collect();
            let named: Vec<(&str, f64)> = ratios.iter().map(|(k, r)| (k.as_str(), *r)).collect();
            record(report, name, v, &named);
            v
        }
        "theorem_conditions" => {
            let range = 2.0 * sobolev_norm(&spec.scenario.sample(*x_grid)?, 1.0);
            let cond = model.check_theorem_conditions(range);
            let v = Verdict::from_bool(cond.all_hold());
            record(report, name, v, &[("f_double_prime_lower_bound", cond.f_double_prime_lower_bound)]);
            report.set("theorem_conditions.f_triple_prime_zero", cond.f_triple_prime_zero);
            report.set("theorem_conditions.g_prime_matches", cond.g_prime_matches);
            v
        }
        "momentum" => match momentum_invariant_check(traj, model, &spec.seeds()) {
            Ok(dev) => {
                let v = Verdict::from_bool(dev <= p.momentum_tol);
                record(report, name, v, &[("max_deviation", dev)]);
                v
            }
            Err(WaveError::NotApplicable(msg)) => not_applicable(report, name, &msg),
            Err(e) => return Err(e),
        },
        "sign_pattern" => match sign_pattern_check(traj, model, p.x0) {
            Ok(flags) => {
                let v = Verdict::from_bool(flags.iter().all(|&f| f));
                let bad = flags.iter().filter(|&&f| !f).count();
                record(report, name, v, &[("violations", bad as f64)]);
                v
            }
            Err(WaveError::NotApplicable(msg)) => not_applicable(report, name, &msg),
            Err(e) => return Err(e),
        },
        "ux_bound" => {
            let b = ux_lower_bound_check(traj)?;
            let v = Verdict::from_bool(b.pass);
            record(report, name, v, &[("min_ux", b.min_ux), ("bound", b.bound)]);
            v
        }
        "small_data_decay" => {
            let s = p.s.unwrap_or(match spec.scenario {
                Scenario::SmallData { s, .. } => s,
                _ => 2.0,
            });
            let d = small_data_decay_check(traj, model, s)?;
            let v = Verdict::from_bool(d.pass);
            let worst = d.norm_sq.iter().zip(&d.bound).fold(0.0f64, |m, (n, b)| if *b > 0.0 { m.max(n / b) } else { m });
            record(report, name, v, &[("max_ratio", worst)]);
            v
        }
        "blowup" => {
            let e = runs.eulerian.as_ref().unwrap();
            if report.get("blowup_criterion_valid") == Some("false") {
                return Ok(not_applicable(report, name, "f'' is not bounded below by a positive constant"));
            }
            let v = Verdict::from_bool(e.stop_reason == StopReason::BlowupDetected);
            record(report, name, v, &[("min_ux", e.monitor.min_ux())]);
            v
        }
        other => return Err(cfg_err(format!("unknown check \"{other}\""))),
    };
    Ok(verdict)
}

fn not_applicable(report: &mut Report, name: &str, msg: &str) -> Verdict {
    record(report, name, Verdict::NotApplicable, &[]);
    report.set(format!("{name}.reason"), msg);
    Verdict::NotApplicable
}

/// Summary of an existing run directory.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub exit_code: i32,
    /// `(check, verdict)` in report order.
    pub checks: Vec<(String, String)>,
    pub problems: Vec<String>,
}

/// Re-reads a run directory: 2 if it is incomplete or a solver failed, 1 if
/// a recorded check failed, 0 otherwise.
pub fn check_run_dir(dir: &Path) -> Result<CheckSummary> {
    let report = Report::read(&dir.join("report.txt"))?;
    let mut problems = Vec::new();
    if !dir.join("series.csv").is_file() {
        problems.push("series.csv missing".to_string());
    }
    if report.get("status") != Some("complete") {
        problems.push(format!("status {}", report.get("status").unwrap_or("missing")));
    }
    let checks: Vec<(String, String)> =
        report.entries().filter_map(|(k, v)| k.strip_prefix("check_").map(|c| (c.to_string(), v.to_string()))).collect();
    let exit_code = if !problems.is_empty() {
        2
    } else if checks.iter().any(|(_, v)| v == "fail") {
        1
    } else {
        0
    };
    Ok(CheckSummary { exit_code, checks, problems })
}

/// `wave scenarios` listing.
pub fn scenario_table() -> String {
    let mut out = String::new();
    for (name, params, what) in crate::scenarios::SCENARIOS {
        let ps: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "{name:<18} {:<28} {what}", ps.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let spec = parse_config("scenario = gaussian\nflux.model = ch\n").unwrap();
        assert_eq!((spec.n_x, spec.n_xi, spec.dt), (4096, 8192, 1e-3));
        assert_eq!(spec.solver, SolverChoice::Lagrangian);
        assert!(spec.checks.is_empty());
        assert_eq!(spec.output_dir, PathBuf::from("runs/gaussian"));
    }

    #[test]
    fn config_errors() {
        let err = parse_config("scenario = gaussian\ntime.dt = -1\n").unwrap_err().to_string();
        assert!(err.contains("time.dt must be positive"), "{err}");
        let err = parse_config("scenario = foo\n").unwrap_err().to_string();
        for n in scenario_names() {
            assert!(err.contains(n), "{err}");
        }
        let err = parse_config("scenario = zero\ngrid.nx = 5\n").unwrap_err().to_string();
        assert!(err.contains("grid.nx"), "{err}");
        let err = parse_config("scenario = peakon\nsolver = eulerian\n").unwrap_err().to_string();
        assert!(err.contains("mollified_peakon"), "{err}");
        assert!(parse_config("scenario = zero\nchecks = cross\n").is_err());
        assert!(parse_config("scenario = zero\nchecks = nope\n").is_err());
    }

    #[test]
    fn output_root_applies_to_relative_dirs() {
        let spec = parse_config("scenario = zero\n").unwrap();
        assert_eq!(spec.output_path(Some(Path::new("/tmp/w"))), PathBuf::from("/tmp/w/runs/zero"));
        let spec = parse_config("scenario = zero\noutput_dir = /abs/here\n").unwrap();
        assert_eq!(spec.output_path(Some(Path::new("/tmp/w"))), PathBuf::from("/abs/here"));
    }

    #[test]
    fn blowup_check_needs_convex_flux() {
        let dir = std::env::temp_dir().join(format!("wavelab-blowup-gate-{}", std::process::id()));
        let text = "scenario = gaussian\nflux.model = polynomial\nflux.f = 0, 0, 0.5, -0.5\nflux.g = 0, 0, 1\n\
                    solver = eulerian\ngrid.n_x = 256\ntime.T = 0.05\ntime.dt = 0.01\nchecks = blowup\n";
        let out = run(&parse_config(text).unwrap(), &dir).unwrap();
        assert_eq!(out.report.get("blowup_criterion_valid"), Some("false"));
        assert_eq!(out.report.get("check_blowup"), Some("n/a"));
        assert_eq!(out.exit_code, 0);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
