//! Model parameters, the quasiparticle dispersion, the two scalar weights that
//! appear in every momentum integral, Gauss-Legendre quadrature on `[0, π]`
//! and integer-order Bessel functions.

mod bessel;
mod quadrature;

pub use bessel::{bessel_j, bessel_j_orders};
pub use quadrature::{Quadrature, DEFAULT_TOLERANCE, PANEL_ORDER};

use crate::error::{Error, Result};

/// Below this value of `βΛ` the thermal weight is evaluated from its series.
pub const THERMAL_SERIES_SWITCH: f64 = 1e-4;
/// Below this value of `Λt` the oscillatory weight is evaluated from its series.
pub const OSCILLATORY_SERIES_SWITCH: f64 = 1e-4;

/// Physical parameters of the chain.
///
/// `beta` may be `f64::INFINITY`, which selects the ground state wherever a
/// thermal factor appears.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    lambda: f64,
    gamma: f64,
    beta: f64,
}

impl ModelParams {
    pub fn new(lambda: f64, gamma: f64, beta: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidParameter(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        if !gamma.is_finite() || !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!("gamma must lie in [0, 1], got {gamma}")));
        }
        if beta.is_nan() || beta <= 0.0 {
            return Err(Error::InvalidParameter(format!("beta must be > 0 (or +inf), got {beta}")));
        }
        Ok(Self { lambda, gamma, beta })
    }

    /// Isotropic (`gamma = 0`) parameters.
    pub fn isotropic(lambda: f64, beta: f64) -> Result<Self> {
        Self::new(lambda, 0.0, beta)
    }

    /// Zero-temperature parameters.
    pub fn ground_state(lambda: f64, gamma: f64) -> Result<Self> {
        Self::new(lambda, gamma, f64::INFINITY)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.beta.is_infinite()
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.lambda, self.gamma, beta)
    }

    /// `1 + λ cos k`, the field-plus-hopping part of the dispersion.
    pub fn band(&self, k: f64) -> f64 {
        1.0 + self.lambda * k.cos()
    }

    /// Interior points of `(0, π)` where the band changes sign; integrands
    /// built from the thermal weight have a steep step there at low
    /// temperature, so they are handed to the quadrature as panel breaks.
    pub fn fermi_points(&self) -> Vec<f64> {
        if self.lambda > 1.0 {
            vec![(-1.0 / self.lambda).acos()]
        } else {
            Vec::new()
        }
    }
}

/// Quasiparticle energy `Λ_k = sqrt((γλ sin k)² + (1 + λ cos k)²)`.
pub fn dispersion(k: f64, p: &ModelParams) -> f64 {
    let anis = p.gamma * p.lambda * k.sin();
    anis.hypot(p.band(k))
}

/// `tanh(βΛ/2) / Λ`, continuous through `Λ = 0` where it tends to `β/2`.
///
/// At `β = ∞` this is `1/Λ`.
pub fn thermal_weight(energy: f64, beta: f64) -> f64 {
    if beta.is_infinite() {
        return 1.0 / energy;
    }
    if beta * energy < THERMAL_SERIES_SWITCH {
        thermal_weight_series(energy, beta)
    } else {
        (0.5 * beta * energy).tanh() / energy
    }
}

fn thermal_weight_series(energy: f64, beta: f64) -> f64 {
    // tanh(y)/y = 1 - y²/3 + 2y⁴/15 - 17y⁶/315
    let y = 0.5 * beta * energy;
    let y2 = y * y;
    0.5 * beta * (1.0 - y2 / 3.0 + 2.0 * y2 * y2 / 15.0 - 17.0 * y2 * y2 * y2 / 315.0)
}

/// `sin(Λt) / Λ`, continuous through `Λ = 0` where it tends to `t`.
pub fn oscillatory_weight(energy: f64, t: f64) -> f64 {
    if (energy * t).abs() < OSCILLATORY_SERIES_SWITCH {
        oscillatory_weight_series(energy, t)
    } else {
        (energy * t).sin() / energy
    }
}

fn oscillatory_weight_series(energy: f64, t: f64) -> f64 {
    let u = energy * t;
    let u2 = u * u;
    t * (1.0 - u2 / 6.0 + u2 * u2 / 120.0 - u2 * u2 * u2 / 5040.0)
}
