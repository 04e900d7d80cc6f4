//! Site magnetization after a projective `σ_z` measurement, isotropic chain.
//!
//! With `s_k = 1 + λ cos k`, thermal weight `τ_k = tanh(βΛ_k/2)/Λ_k` and
//! oscillatory weight `ω_k = sin(Λ_k t)/Λ_k`, every quantity is a `[0, π]`
//! integral of one of
//!
//! ```text
//! φ      cos(kx) cos(Λt)
//! k̂      cos(kx) s ω                     (γ = 0 part; see time_kernels)
//! α      s τ cos²(Λt)
//! α′    −s³ τ ω²
//! β_x    cos(kx) s τ cos(Λt)
//! β̂′_x   cos(kx) s² τ ω
//! ```
//!
//! all divided by `π`. `k̂` and `β̂′_x` are real: the corresponding printed
//! kernels are `i·k̂` and `i·β̂′_x`.

use std::f64::consts::PI;

use crate::analytic::{dispersion, oscillatory_weight, thermal_weight, ModelParams, Quadrature};
use crate::error::{Error, Result};

/// Selective keeps the up outcome; non-selective averages both outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MeasurementMode {
    #[default]
    Selective,
    NonSelective,
}

impl std::str::FromStr for MeasurementMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "selective" => Ok(Self::Selective),
            "nonselective" | "non-selective" => Ok(Self::NonSelective),
            other => Err(Error::InvalidParameter(format!("mode must be selective or nonselective, got {other:?}"))),
        }
    }
}

impl std::fmt::Display for MeasurementMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Selective => "selective",
            Self::NonSelective => "nonselective",
        })
    }
}

/// Kernels at one `(x, t, β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsKernels {
    pub x: i64,
    pub t: f64,
    pub beta: f64,
    pub phi: f64,
    pub k_hat: f64,
    pub alpha: f64,
    pub alpha_prime: f64,
    pub beta_x: f64,
    pub beta_hat_prime_x: f64,
    /// `G_0` from the same quadrature nodes.
    pub g0: f64,
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("time must be finite and >= 0, got {t}")))
    }
}

fn require_isotropic(p: &ModelParams) -> Result<()> {
    if p.gamma() == 0.0 {
        Ok(())
    } else {
        Err(Error::AnisotropyUnsupported(p.gamma()))
    }
}

fn oscillation_hint(x: i64, t: f64, p: &ModelParams) -> f64 {
    2.0 * p.lambda() * t + x.unsigned_abs() as f64
}

/// `(φ, k̂)` at offset `x` and time `t`; general `γ`.
pub fn time_kernels(x: i64, t: f64, p: &ModelParams, q: &Quadrature) -> Result<(f64, f64)> {
    check_time(t)?;
    let lambda = p.lambda();
    let lg = lambda * p.gamma();
    let xf = x as f64;
    let [phi, k_hat] = q.integrate_many(oscillation_hint(x, t, p), &p.fermi_points(), |k| {
        let energy = dispersion(k, p);
        let omega = oscillatory_weight(energy, t);
        let cx = (k * xf).cos();
        let odd = if lg == 0.0 { 0.0 } else { lg * (k * xf).sin() * k.sin() };
        [cx * (energy * t).cos(), (cx * p.band(k) - odd) * omega]
    })?;
    Ok((phi / PI, k_hat / PI))
}

impl DynamicsKernels {
    pub fn compute(x: i64, t: f64, p: &ModelParams, q: &Quadrature) -> Result<Self> {
        require_isotropic(p)?;
        check_time(t)?;
        let beta = p.beta();
        let xf = x as f64;
        let v = q.integrate_many(oscillation_hint(x, t, p), &p.fermi_points(), |k| {
            let energy = dispersion(k, p);
            let s = p.band(k);
            let tau = thermal_weight(energy, beta);
            let omega = oscillatory_weight(energy, t);
            let c = (energy * t).cos();
            let cx = (k * xf).cos();
            [
                cx * c,
                cx * s * omega,
                s * tau * c * c,
                -s * s * s * tau * omega * omega,
                cx * s * tau * c,
                cx * s * s * tau * omega,
                s * tau,
            ]
        })?;
        let [phi, k_hat, alpha, alpha_prime, beta_x, beta_hat_prime_x, g0] = v.map(|i| i / PI);
        Ok(Self { x, t, beta, phi, k_hat, alpha, alpha_prime, beta_x, beta_hat_prime_x, g0 })
    }

    /// `⟨σ_z^m(t)⟩/2` conditioned on the up outcome at the measured site.
    pub fn selective(&self) -> Result<f64> {
        let g0 = self.g0;
        let norm = 1.0 + g0;
        if !(norm > 1e-14) {
            return Err(Error::DegenerateConditioning(norm / 2.0));
        }
        let amp = self.phi * self.phi + self.k_hat * self.k_hat;
        let cross = self.k_hat * self.beta_hat_prime_x + self.phi * self.beta_x;
        let square = self.beta_hat_prime_x.powi(2) + self.beta_x.powi(2);
        let numer = g0 + (2.0 * g0 + 1.0) * (2.0 * amp + self.alpha - self.alpha_prime) - 4.0 * cross - 2.0 * square;
        Ok(numer / (4.0 * norm))
    }

    /// `⟨σ_z^m(t)⟩/2` after a measurement whose outcome is discarded.
    pub fn nonselective(&self) -> f64 {
        let amp = self.phi * self.phi + self.k_hat * self.k_hat;
        let cross = self.k_hat * self.beta_hat_prime_x + self.phi * self.beta_x;
        0.25 * (self.g0 + 4.0 * self.g0 * amp + self.alpha - self.alpha_prime - 4.0 * cross)
    }

    pub fn magnetization(&self, mode: MeasurementMode) -> Result<f64> {
        match mode {
            MeasurementMode::Selective => self.selective(),
            MeasurementMode::NonSelective => Ok(self.nonselective()),
        }
    }
}

/// `(α, β_x, α′, β̂′_x)`; requires `γ = 0`.
pub fn appendix_integrals(x: i64, t: f64, p: &ModelParams, q: &Quadrature) -> Result<(f64, f64, f64, f64)> {
    let k = DynamicsKernels::compute(x, t, p, q)?;
    Ok((k.alpha, k.beta_x, k.alpha_prime, k.beta_hat_prime_x))
}

pub fn magnetization_selective(x: i64, t: f64, p: &ModelParams, q: &Quadrature) -> Result<f64> {
    DynamicsKernels::compute(x, t, p, q)?.selective()
}

pub fn magnetization_nonselective(x: i64, t: f64, p: &ModelParams, q: &Quadrature) -> Result<f64> {
    Ok(DynamicsKernels::compute(x, t, p, q)?.nonselective())
}
