//! Equilibrium correlations of the chain in the thermodynamic limit.
//!
//! Everything is built from the momentum integral
//!
//! ```text
//! G_x = (1/π) ∫_0^π [cos(kx)(1 + λ cos k) − λγ sin(kx) sin k] tanh(βΛ_k/2)/Λ_k dk
//! ```
//!
//! The magnetization is `⟨σ_z⟩ = s·G_0` where `s` is the [`SignConvention`];
//! with the default `+1` a fully polarized ground state has `⟨σ_z⟩ = +1`,
//! which is what exact diagonalization of the chain gives.

use std::collections::BTreeMap;
use std::str::FromStr;

use rayon::prelude::*;

use crate::analytic::{dispersion, thermal_weight, ModelParams, Quadrature};
use crate::entanglement::{two_site_density, TwoSiteDensity};
use crate::error::{Error, Result};

/// Environment variable consulted by the CLI for the magnetization sign.
pub const SIGN_CONVENTION_ENV: &str = "XYWAVE_SIGN_CONVENTION";

/// Relation between `⟨σ_z⟩` and `G_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignConvention {
    /// `⟨σ_z⟩ = +G_0`.
    #[default]
    Positive,
    /// `⟨σ_z⟩ = −G_0`, the literal transcription of the printed relation.
    Negative,
}

impl SignConvention {
    pub fn factor(self) -> f64 {
        match self {
            SignConvention::Positive => 1.0,
            SignConvention::Negative => -1.0,
        }
    }

    /// Reads [`SIGN_CONVENTION_ENV`]; unset means the default.
    pub fn from_env() -> Result<Self> {
        match std::env::var(SIGN_CONVENTION_ENV) {
            Ok(v) => v.parse(),
            Err(std::env::VarError::NotPresent) => Ok(Self::default()),
            Err(e) => Err(Error::InvalidParameter(format!("{SIGN_CONVENTION_ENV}: {e}"))),
        }
    }
}

impl FromStr for SignConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" | "+" | "positive" => Ok(Self::Positive),
            "-1" | "-" | "negative" => Ok(Self::Negative),
            other => Err(Error::InvalidParameter(format!("unknown sign convention {other:?} (expected +1 or -1)"))),
        }
    }
}

impl std::fmt::Display for SignConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SignConvention::Positive => "+1",
            SignConvention::Negative => "-1",
        })
    }
}

/// Diagonal spin correlators `(⟨σˣσˣ⟩, ⟨σʸσʸ⟩, ⟨σᶻσᶻ⟩)` between two sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCorrelators {
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
}

/// `G_x` for one offset.
pub fn g_thermal(x: i64, p: &ModelParams, q: &Quadrature) -> Result<f64> {
    let lambda = p.lambda();
    let lg = lambda * p.gamma();
    let beta = p.beta();
    let xf = x as f64;
    q.integrate_oscillatory(xf.abs(), &p.fermi_points(), |k| {
        let weight = thermal_weight(dispersion(k, p), beta);
        let even = (k * xf).cos() * (1.0 + lambda * k.cos());
        let odd = if lg == 0.0 { 0.0 } else { lg * (k * xf).sin() * k.sin() };
        (even - odd) * weight
    })
    .map(|v| v / std::f64::consts::PI)
}

/// `⟨σ_z⟩` with the default sign convention.
pub fn magnetization_z(p: &ModelParams, q: &Quadrature) -> Result<f64> {
    ThermalCorrelators::compute(p, q, [0])?.magnetization()
}

/// Correlators at offset `x ≠ 0`.
pub fn pair_correlators(x: i64, p: &ModelParams, q: &Quadrature) -> Result<PairCorrelators> {
    ThermalCorrelators::compute(p, q, [0, x, -x])?.pair_correlators(x)
}

/// Table of `G_x` values for one parameter set.
///
/// The table is filled once at construction; every derived quantity reads
/// from it, so magnetization, correlators and density matrices built from
/// one instance are mutually consistent.
#[derive(Debug, Clone)]
pub struct ThermalCorrelators {
    params: ModelParams,
    sign: SignConvention,
    values: BTreeMap<i64, f64>,
}

impl ThermalCorrelators {
    pub fn compute<I>(p: &ModelParams, q: &Quadrature, offsets: I) -> Result<Self>
    where
        I: IntoIterator<Item = i64>,
    {
        Self::with_sign(p, q, offsets, SignConvention::default())
    }

    pub fn with_sign<I>(p: &ModelParams, q: &Quadrature, offsets: I, sign: SignConvention) -> Result<Self>
    where
        I: IntoIterator<Item = i64>,
    {
        let mut wanted: Vec<i64> = offsets.into_iter().collect();
        wanted.sort_unstable();
        wanted.dedup();
        // G_x = G_{-x} when γ = 0
        let symmetric = p.gamma() == 0.0;
        let mut distinct: Vec<i64> = if symmetric { wanted.iter().map(|x| x.abs()).collect() } else { wanted.clone() };
        distinct.sort_unstable();
        distinct.dedup();

        let computed: Vec<(i64, f64)> = if distinct.len() > 8 {
            distinct.par_iter().map(|&x| g_thermal(x, p, q).map(|g| (x, g))).collect::<Result<_>>()?
        } else {
            distinct.iter().map(|&x| g_thermal(x, p, q).map(|g| (x, g))).collect::<Result<_>>()?
        };
        let lookup: BTreeMap<i64, f64> = computed.into_iter().collect();
        let values = wanted
            .iter()
            .map(|&x| {
                let key = if symmetric { x.abs() } else { x };
                (x, lookup[&key])
            })
            .collect();
        Ok(Self { params: *p, sign, values })
    }

    /// Offsets `-1, 0, 1`.
    pub fn nearest_neighbour(p: &ModelParams, q: &Quadrature) -> Result<Self> {
        Self::compute(p, q, -1..=1)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn sign_convention(&self) -> SignConvention {
        self.sign
    }

    pub fn offsets(&self) -> impl Iterator<Item = i64> + '_ {
        self.values.keys().copied()
    }

    pub fn g(&self, x: i64) -> Result<f64> {
        self.values.get(&x).copied().ok_or(Error::MissingOffset(x))
    }

    pub fn magnetization(&self) -> Result<f64> {
        Ok(self.sign.factor() * self.g(0)?)
    }

    /// `xx = G_{-x}`, `yy = G_x`, `zz = ⟨σ_z⟩² − G_x G_{-x}`.
    ///
    /// `zz` is exact at every distance. The `xx`/`yy` forms are the
    /// nearest-neighbour results; for `|x| > 1` they omit the Jordan-Wigner
    /// string contributions.
    pub fn pair_correlators(&self, x: i64) -> Result<PairCorrelators> {
        if x == 0 {
            return Err(Error::InvalidParameter("pair correlators need x != 0".into()));
        }
        let forward = self.g(x)?;
        let backward = self.g(-x)?;
        let mz = self.magnetization()?;
        Ok(PairCorrelators { xx: backward, yy: forward, zz: mz * mz - forward * backward })
    }

    /// Reduced density matrix of two sites `x` apart.
    pub fn two_site_density(&self, x: i64) -> Result<TwoSiteDensity> {
        let c = self.pair_correlators(x)?;
        two_site_density(self.magnetization()?, c.xx, c.yy, c.zz)
    }

    /// Checks the table against `|G_x| ≤ 1 + λ`, the `x ↔ −x` symmetry at
    /// `γ = 0`, and decay on the largest stored offset at finite β.
    pub fn check_invariants(&self) -> Result<()> {
        let bound = 1.0 + self.params.lambda() + 1e-12;
        for (&x, &g) in &self.values {
            if !g.is_finite() || g.abs() > bound {
                return Err(Error::InvalidParameter(format!("G_{x} = {g} exceeds 1 + lambda")));
            }
            if self.params.gamma() == 0.0 {
                if let Some(&mirror) = self.values.get(&-x) {
                    if (mirror - g).abs() > 1e-12 {
                        return Err(Error::InvalidParameter(format!("G_{x} != G_{}", -x)));
                    }
                }
            }
        }
        if !self.params.is_zero_temperature() {
            if let Some((&far, &g)) = self.values.iter().max_by_key(|(x, _)| x.unsigned_abs()) {
                let near = self.values.get(&0).copied().unwrap_or(1.0).abs().max(1.0);
                if far.unsigned_abs() >= 40 && g.abs() > 1e-3 * near {
                    return Err(Error::InvalidParameter(format!("G_{far} = {g} has not decayed")));
                }
            }
        }
        Ok(())
    }
}
