//! Oracle comparisons behind `xywave validate`.

use std::f64::consts::PI;

use nalgebra::Vector2;
use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::{dispersion, ModelParams, Quadrature};
use crate::dynamics::DynamicsKernels;
use crate::entanglement::{concurrence_wootters, concurrence_xstate_closed};
use crate::error::Error;
use crate::oracle::{single_excitation_evolution, OracleChain, PauliString};
use crate::thermal::ThermalCorrelators;
use crate::zero_temp::{
    apply_damping_channel, fidelity, measured_state, pair_concurrence, site_density, two_site_state, wave_profile,
    DEFAULT_MIN_MASS,
};

use super::config::{RunConfig, Suite};
use super::RunError;

/// Slack allowed when requiring finite-size errors not to grow with `n`.
pub const CONVERGENCE_SLACK: f64 = 1e-3;
const ANISOTROPIC_SITES: usize = 10;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FiniteSizeError {
    pub observable: &'static str,
    pub n: usize,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ValidationReport {
    pub suite: &'static str,
    pub n: usize,
    pub sizes: Vec<usize>,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub finite_size: Vec<FiniteSizeError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Default)]
struct Recorder {
    checks: Vec<Check>,
    finite_size: Vec<FiniteSizeError>,
}

impl Recorder {
    fn check(&mut self, suite: Suite, name: &'static str, error: f64, tolerance: f64) {
        self.checks.push(Check { suite: suite.name(), name, error, tolerance, passed: error <= tolerance });
    }

    /// Records per-size errors, the error at the largest size against
    /// `tolerance`, and the largest growth between consecutive sizes.
    fn sequence(
        &mut self,
        suite: Suite,
        name: &'static str,
        growth: &'static str,
        sizes: &[usize],
        errors: &[f64],
        tolerance: f64,
    ) {
        for (&n, &error) in sizes.iter().zip(errors) {
            self.finite_size.push(FiniteSizeError { observable: name, n, error });
        }
        self.check(suite, name, *errors.last().unwrap_or(&f64::NAN), tolerance);
        let worst_growth = errors.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        self.check(suite, growth, worst_growth, CONVERGENCE_SLACK);
    }
}

fn oracle_err(e: Error) -> RunError {
    RunError::Numeric { point: "oracle".into(), message: e.to_string() }
}

fn iso(lambda: f64, beta: f64) -> Result<ModelParams, RunError> {
    ModelParams::isotropic(lambda, beta).map_err(oracle_err)
}

fn z(site: usize) -> PauliString {
    PauliString::single(site, crate::oracle::Pauli::Z)
}

fn xx(i: usize, j: usize) -> Result<PauliString, RunError> {
    PauliString::pair(i, crate::oracle::Pauli::X, j, crate::oracle::Pauli::X).map_err(oracle_err)
}

/// Chain sizes compared in convergence checks.
pub fn sizes_for(n: usize) -> Vec<usize> {
    vec![n - 4, n - 2, n]
}

/// Peak memory of the largest chain the suite builds.
pub fn memory_needed(cfg: &RunConfig) -> usize {
    let mut bytes = OracleChain::memory_estimate(cfg.n, 0.0);
    if cfg.suite.includes(Suite::Thermal) {
        bytes = bytes.max(OracleChain::memory_estimate(ANISOTROPIC_SITES.min(cfg.n), 0.5));
    }
    bytes
}

pub fn run_validate(cfg: &RunConfig) -> Result<ValidationReport, RunError> {
    let budget = cfg.memory_budget_mib as usize * 1024 * 1024;
    let needed = memory_needed(cfg);
    if needed > budget {
        return Err(RunError::Budget { needed, budget });
    }
    let started = std::time::Instant::now();
    let q = Quadrature::default();
    let sizes = sizes_for(cfg.n);
    let mut rec = Recorder::default();
    if cfg.suite.includes(Suite::Thermal) {
        thermal_checks(&mut rec, cfg.n, &sizes, &q)?;
    }
    if cfg.suite.includes(Suite::Dynamics) {
        dynamics_checks(&mut rec, &sizes, &q)?;
    }
    if cfg.suite.includes(Suite::ZeroTemp) {
        zerotemp_checks(&mut rec)?;
    }
    Ok(ValidationReport {
        suite: cfg.suite.name(),
        n: cfg.n,
        sizes,
        passed: rec.checks.iter().all(|c| c.passed),
        checks: rec.checks,
        finite_size: rec.finite_size,
        elapsed_seconds: cfg.timestamp.then(|| started.elapsed().as_secs_f64()),
    })
}

fn thermal_checks(rec: &mut Recorder, n: usize, sizes: &[usize], q: &Quadrature) -> Result<(), RunError> {
    let s = Suite::Thermal;

    let mut worst = 0.0f64;
    for beta in [0.5, 2.0, 7.0] {
        let p = iso(0.0, beta)?;
        let analytic = ThermalCorrelators::compute(&p, q, [0]).and_then(|t| t.magnetization()).map_err(oracle_err)?;
        let chain = OracleChain::new(n, &p).map_err(oracle_err)?;
        let v = chain.thermal_expectations(beta, &[z(0)]).map_err(oracle_err)?;
        worst = worst.max((v[0] - analytic).abs());
    }
    rec.check(s, "decoupled_calibration", worst, 1e-12);

    let (lambda, beta) = (0.8, 4.0);
    let p = iso(lambda, beta)?;
    let table = ThermalCorrelators::nearest_neighbour(&p, q).map_err(oracle_err)?;
    let g0 = table.g(0).map_err(oracle_err)?;
    let g1 = table.pair_correlators(1).map_err(oracle_err)?.xx;
    let mut err_z = Vec::new();
    let mut err_xx = Vec::new();
    for &size in sizes {
        let chain = OracleChain::new(size, &p).map_err(oracle_err)?;
        let v = chain.thermal_expectations(beta, &[z(0), xx(0, 1)?]).map_err(oracle_err)?;
        err_z.push((v[0] - g0).abs());
        err_xx.push((v[1] - g1).abs());
    }
    rec.sequence(s, "magnetization_vs_chain", "magnetization_convergence", sizes, &err_z, 0.05);
    rec.sequence(s, "xx_vs_chain", "xx_convergence", sizes, &err_xx, 0.05);

    let p = iso(0.9, 8.0)?;
    let analytic =
        ThermalCorrelators::nearest_neighbour(&p, q).and_then(|t| t.two_site_density(1)).map_err(oracle_err)?;
    let chain = OracleChain::new(n, &p).map_err(oracle_err)?;
    let brute = chain.thermal_two_site(8.0, 0, 1).map_err(oracle_err)?;
    let diff = (analytic.matrix() - brute.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    rec.check(s, "two_site_density_vs_chain", diff, 0.05);

    let p = iso(0.7, 1.0)?;
    let chain = OracleChain::new(n, &p).map_err(oracle_err)?;
    let mut want: Vec<f64> = (0..n).map(|j| dispersion(2.0 * PI * j as f64 / n as f64, &p)).collect();
    want.sort_by(f64::total_cmp);
    let band = chain.one_excitation_band().map_err(oracle_err)?;
    let diff = band.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    rec.check(s, "one_excitation_band", diff, 1e-10);

    let p = ModelParams::new(0.9, 0.5, 3.0).map_err(oracle_err)?;
    let t = ThermalCorrelators::nearest_neighbour(&p, q).map_err(oracle_err)?;
    let c = t.pair_correlators(1).map_err(oracle_err)?;
    let chain = OracleChain::new(ANISOTROPIC_SITES.min(n), &p).map_err(oracle_err)?;
    let obs: Vec<PauliString> = ["Z0", "X0 X1", "Y0 Y1", "Z0 Z1"].iter().map(|o| o.parse().expect("valid")).collect();
    let v = chain.thermal_expectations(3.0, &obs).map_err(oracle_err)?;
    let want = [t.magnetization().map_err(oracle_err)?, c.xx, c.yy, c.zz];
    let diff = v.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    rec.check(s, "anisotropic_correlators_vs_chain", diff, 0.05);

    let mut worst = 0.0f64;
    for i in 0..60 {
        let lambda = 0.1 + 1.9 * i as f64 / 59.0;
        for j in 0..80 {
            let beta = 0.5 + 29.5 * j as f64 / 79.0;
            let t = ThermalCorrelators::nearest_neighbour(&iso(lambda, beta)?, q).map_err(oracle_err)?;
            let rho = t.two_site_density(1).map_err(oracle_err)?;
            let w = concurrence_wootters(&rho).map_err(oracle_err)?;
            let closed = concurrence_xstate_closed(t.g(0).map_err(oracle_err)?, t.g(1).map_err(oracle_err)?);
            worst = worst.max((w - closed).abs());
        }
    }
    rec.check(s, "closed_form_vs_wootters", worst, 1e-10);
    Ok(())
}

fn dynamics_checks(rec: &mut Recorder, sizes: &[usize], q: &Quadrature) -> Result<(), RunError> {
    let s = Suite::Dynamics;
    let mut worst = 0.0f64;
    for lambda in [0.0, 0.5, 0.8, 0.99] {
        for beta in [1.0, 5.0, 10.0, 20.0] {
            let k = DynamicsKernels::compute(0, 0.0, &iso(lambda, beta)?, q).map_err(oracle_err)?;
            worst = worst.max((k.selective().map_err(oracle_err)? - 0.5).abs());
        }
    }
    rec.check(s, "selective_pinned_at_time_zero", worst, 1e-9);

    let beta = 4.0;
    let p = iso(0.8, beta)?;
    let t = ThermalCorrelators::nearest_neighbour(&p, q).map_err(oracle_err)?;
    let mz = t.magnetization().map_err(oracle_err)?;
    let zz = t.pair_correlators(1).map_err(oracle_err)?.zz;
    let k = DynamicsKernels::compute(1, 0.0, &p, q).map_err(oracle_err)?;
    let identity = (mz + zz) / (2.0 * (1.0 + mz));
    rec.check(s, "neighbour_conditional_identity", (k.selective().map_err(oracle_err)? - identity).abs(), 1e-9);

    let times: Vec<f64> = (1..=20).map(|i| 0.25 * i as f64).collect();
    let mut analytic = Vec::new();
    for x in [1i64, 2] {
        for &t in &times {
            let k = DynamicsKernels::compute(x, t, &p, q).map_err(oracle_err)?;
            analytic.push((x as usize, t, k.selective().map_err(oracle_err)?, k.nonselective()));
        }
    }
    let mut err_sel = Vec::new();
    let mut err_ns = Vec::new();
    for &size in sizes {
        let chain = OracleChain::new(size, &p).map_err(oracle_err)?;
        let mut worst = [0.0f64; 2];
        for x in [1usize, 2] {
            let sel = chain.conditional_series(beta, 0, x, true).map_err(oracle_err)?;
            let ns = chain.conditional_series(beta, 0, x, false).map_err(oracle_err)?;
            for &(ax, t, a_sel, a_ns) in analytic.iter().filter(|a| a.0 == x) {
                debug_assert_eq!(ax, x);
                worst[0] = worst[0].max((sel.value(t) - a_sel).abs());
                worst[1] = worst[1].max((ns.value(t) - a_ns).abs());
            }
        }
        err_sel.push(worst[0]);
        err_ns.push(worst[1]);
    }
    rec.sequence(s, "selective_vs_chain", "selective_convergence", sizes, &err_sel, 0.06);
    rec.sequence(s, "nonselective_vs_chain", "nonselective_convergence", sizes, &err_ns, 0.06);
    Ok(())
}

/// Deterministic low-discrepancy points in `[0, 1)`.
fn sequence(count: usize, offset: f64) -> impl Iterator<Item = f64> {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    (0..count).map(move |i| (offset + golden * i as f64).fract())
}

fn zerotemp_checks(rec: &mut Recorder) -> Result<(), RunError> {
    let s = Suite::ZeroTemp;
    let (n, m, lambda, t) = (401usize, 200usize, 0.8, 25.0);
    let evolved = single_excitation_evolution(n, lambda, m, t).map_err(oracle_err)?;
    let profile = wave_profile(m as i64, t, lambda, DEFAULT_MIN_MASS).map_err(oracle_err)?;
    let diff = evolved
        .iter()
        .enumerate()
        .map(|(l, a)| (a.norm() - profile.amplitude(l as i64).abs()).abs())
        .fold(0.0, f64::max);
    rec.check(s, "wave_vs_single_excitation", diff, 1e-8);

    let mass: f64 = profile.iter().map(|(_, w)| w * w).sum();
    rec.check(s, "wave_normalization", (mass - 1.0).abs(), 1e-10);

    let psi = Vector2::new(Complex64::new(0.5f64.sqrt(), 0.0), Complex64::new(0.5f64.sqrt(), 0.0));
    let mut worst = 0.0f64;
    for u in sequence(1000, 0.0) {
        let w = 2.0 * u - 1.0;
        let out = apply_damping_channel(&measured_state(), w).map_err(oracle_err)?;
        let f = (psi.adjoint() * out * psi)[(0, 0)].re;
        worst = worst.max((out - site_density(w)).iter().map(|z| z.norm()).fold(0.0, f64::max));
        worst = worst.max((f - fidelity(w)).abs());
    }
    rec.check(s, "channel_identity", worst, 1e-12);

    let mut worst = 0.0f64;
    for (u, v) in sequence(1000, 0.1).zip(sequence(1000, 0.7).skip(3)) {
        let (r, theta) = (u.sqrt(), 2.0 * PI * v);
        let (wi, wj) = (r * theta.cos(), r * theta.sin());
        let rho = two_site_state(wi, wj).map_err(oracle_err)?;
        worst = worst.max((concurrence_wootters(&rho).map_err(oracle_err)? - pair_concurrence(wi, wj)).abs());
    }
    rec.check(s, "pair_concurrence_vs_wootters", worst, 1e-10);
    Ok(())
}
