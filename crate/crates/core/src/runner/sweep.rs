use rayon::prelude::*;

use crate::analytic::{ModelParams, Quadrature};
use crate::dynamics::DynamicsKernels;
use crate::entanglement::{concurrence_wootters, concurrence_xstate_closed};
use crate::error::Error;
use crate::thermal::ThermalCorrelators;
use crate::zero_temp::{fidelity, pair_concurrence, site_observables, wave_profile, DEFAULT_MIN_MASS};

use super::config::{Command, RunConfig};
use super::output::{SweepResult, Value};
use super::{classify, metadata, RunError};

/// Largest closed-form/Wootters disagreement tolerated in a phase diagram.
const CROSS_CHECK_TOL: f64 = 1e-9;

fn quadrature(cfg: &RunConfig) -> Result<Quadrature, RunError> {
    Quadrature::new(cfg.nodes, cfg.tolerance).map_err(|e| RunError::Usage(e.to_string()))
}

fn params(lambda: f64, gamma: f64, beta: f64) -> Result<ModelParams, RunError> {
    ModelParams::new(lambda, gamma, beta).map_err(|e| RunError::Usage(e.to_string()))
}

fn expect(cfg: &RunConfig, command: Command) {
    assert_eq!(cfg.command, command, "configuration is for another command");
}

/// Rows `(lambda, beta, g0, g1, concurrence)` over the λ × β grid.
pub fn run_phase_diagram(cfg: &RunConfig) -> Result<SweepResult, RunError> {
    expect(cfg, Command::PhaseDiagram);
    let q = quadrature(cfg)?;
    let lambdas = cfg.lambda.values();
    let betas = cfg.beta.values();
    for &l in &lambdas {
        for &b in [betas[0], betas[betas.len() - 1]].iter() {
            params(l, cfg.gamma, b)?;
        }
    }
    let grid: Vec<(f64, f64)> = lambdas.iter().flat_map(|&l| betas.iter().map(move |&b| (l, b))).collect();
    let isotropic = cfg.gamma == 0.0;
    let points: Vec<([f64; 5], f64)> = grid
        .par_iter()
        .map(|&(lambda, beta)| {
            let at = || format!("lambda={lambda}, beta={beta}");
            let p = params(lambda, cfg.gamma, beta)?;
            let table = ThermalCorrelators::compute(&p, &q, -1..=1).map_err(|e| classify(e, at()))?;
            let g0 = table.g(0).map_err(|e| classify(e, at()))?;
            let g1 = table.g(1).map_err(|e| classify(e, at()))?;
            let rho = table.two_site_density(1).map_err(|e| classify(e, at()))?;
            let wootters = concurrence_wootters(&rho).map_err(|e| classify(e, at()))?;
            let (c, deviation) = if isotropic {
                let closed = concurrence_xstate_closed(g0, g1);
                (closed, (closed - wootters).abs())
            } else {
                (wootters, 0.0)
            };
            if deviation > CROSS_CHECK_TOL {
                return Err(RunError::Numeric {
                    point: at(),
                    message: format!("closed-form concurrence differs from Wootters by {deviation:e}"),
                });
            }
            Ok(([lambda, beta, g0, g1, c], deviation))
        })
        .collect::<Result<_, RunError>>()?;
    let max_dev = points.iter().map(|p| p.1).fold(0.0, f64::max);
    let rows = points.into_iter().map(|(v, _)| v.iter().map(|&x| Value::Float(x)).collect()).collect();
    let mut info = vec![];
    if isotropic {
        info.push(("info.wootters_max_deviation".into(), format!("{max_dev:e}")));
    }
    Ok(SweepResult { metadata: metadata(cfg, info), columns: vec!["lambda", "beta", "g0", "g1", "concurrence"], rows })
}

/// Rows `(beta, x, g_x, g_minus_x, magnetization, xx, yy, zz, concurrence)`.
///
/// `concurrence` is `nan` where the correlators beyond nearest neighbours do
/// not assemble into a valid density matrix.
pub fn run_thermal(cfg: &RunConfig) -> Result<SweepResult, RunError> {
    expect(cfg, Command::Thermal);
    let q = quadrature(cfg)?;
    let lambda = cfg.lambda.min;
    let betas = cfg.beta.values();
    for &b in [betas[0], betas[betas.len() - 1]].iter() {
        params(lambda, cfg.gamma, b)?;
    }
    let offsets: Vec<i64> = cfg.x.values().collect();
    let needed: Vec<i64> = offsets.iter().flat_map(|&x| [0, x, -x]).collect();
    let blocks: Vec<Vec<Vec<Value>>> = betas
        .par_iter()
        .map(|&beta| {
            let at = |x: Option<i64>| match x {
                Some(x) => format!("beta={beta}, x={x}"),
                None => format!("beta={beta}"),
            };
            let p = params(lambda, cfg.gamma, beta)?;
            let table = ThermalCorrelators::with_sign(&p, &q, needed.iter().copied(), cfg.sign)
                .map_err(|e| classify(e, at(None)))?;
            let mz = table.magnetization().map_err(|e| classify(e, at(None)))?;
            offsets
                .iter()
                .map(|&x| {
                    let c = table.pair_correlators(x).map_err(|e| classify(e, at(Some(x))))?;
                    let concurrence = match table.two_site_density(x) {
                        Ok(rho) => concurrence_wootters(&rho).map_err(|e| classify(e, at(Some(x))))?,
                        Err(Error::NotPositiveSemidefinite(_)) => f64::NAN,
                        Err(e) => return Err(classify(e, at(Some(x)))),
                    };
                    let gx = table.g(x).map_err(|e| classify(e, at(Some(x))))?;
                    let gmx = table.g(-x).map_err(|e| classify(e, at(Some(x))))?;
                    let mut row = vec![Value::Float(beta), Value::Int(x)];
                    row.extend([gx, gmx, mz, c.xx, c.yy, c.zz, concurrence].map(Value::Float));
                    Ok(row)
                })
                .collect()
        })
        .collect::<Result<_, RunError>>()?;
    Ok(SweepResult {
        metadata: metadata(cfg, vec![]),
        columns: vec!["beta", "x", "g_x", "g_minus_x", "magnetization", "xx", "yy", "zz", "concurrence"],
        rows: blocks.into_iter().flatten().collect(),
    })
}

/// Rows `(x, t, beta, magnetization, equilibrium)`, with `equilibrium` the
/// unperturbed `G_0/2`.
pub fn run_wave(cfg: &RunConfig) -> Result<SweepResult, RunError> {
    expect(cfg, Command::Wave);
    let q = quadrature(cfg)?;
    let lambda = cfg.lambda.min;
    let betas = cfg.beta.values();
    for &b in [betas[0], betas[betas.len() - 1]].iter() {
        params(lambda, 0.0, b)?;
    }
    let times = cfg.t.values();
    let mut grid = Vec::with_capacity(cfg.x.len() * times.len() * betas.len());
    for x in cfg.x.values() {
        for &t in &times {
            for &b in &betas {
                grid.push((x, t, b));
            }
        }
    }
    let rows = grid
        .par_iter()
        .map(|&(x, t, beta)| {
            let at = || format!("x={x}, t={t}, beta={beta}");
            let p = params(lambda, 0.0, beta)?;
            let k = DynamicsKernels::compute(x, t, &p, &q).map_err(|e| classify(e, at()))?;
            let m = k.magnetization(cfg.mode).map_err(|e| classify(e, at()))?;
            Ok(vec![Value::Int(x), Value::Float(t), Value::Float(beta), Value::Float(m), Value::Float(k.g0 / 2.0)])
        })
        .collect::<Result<_, RunError>>()?;
    Ok(SweepResult {
        metadata: metadata(cfg, vec![]),
        columns: vec!["x", "t", "beta", "magnetization", "equilibrium"],
        rows,
    })
}

/// Rows `(x, t, w, magnetization, entropy, concurrence_with_m, fidelity)`
/// with `x` the offset from the measured site; `concurrence_with_m` is `nan`
/// at `x = 0`.
pub fn run_zerotemp(cfg: &RunConfig) -> Result<SweepResult, RunError> {
    expect(cfg, Command::ZeroTemp);
    let lambda = cfg.lambda.min;
    if !(0.0..1.0).contains(&lambda) {
        return Err(RunError::Usage(Error::CouplingOutOfRange(lambda).to_string()));
    }
    let times = cfg.t.values();
    let profiles = times
        .par_iter()
        .map(|&t| wave_profile(0, t, lambda, DEFAULT_MIN_MASS).map_err(|e| classify(e, format!("t={t}"))))
        .collect::<Result<Vec<_>, RunError>>()?;
    let mut rows = Vec::with_capacity(cfg.x.len() * times.len());
    for x in cfg.x.values() {
        for (profile, &t) in profiles.iter().zip(&times) {
            let w = profile.at_offset(x);
            let (mz, entropy) = site_observables(w).map_err(|e| classify(e, format!("x={x}, t={t}")))?;
            let c = if x == 0 { f64::NAN } else { pair_concurrence(w, profile.at_offset(0)) };
            rows.push(vec![
                Value::Int(x),
                Value::Float(t),
                Value::Float(w),
                Value::Float(mz),
                Value::Float(entropy),
                Value::Float(c),
                Value::Float(fidelity(w)),
            ]);
        }
    }
    Ok(SweepResult {
        metadata: metadata(cfg, vec![]),
        columns: vec!["x", "t", "w", "magnetization", "entropy", "concurrence_with_m", "fidelity"],
        rows,
    })
}
