//! Ground-state dynamics after an `x`-basis measurement at one site (`λ < 1`).
//!
//! The measured excitation spreads as `w_l(t) = J_{m−l}(λt)`. Everything at a
//! site, or a pair of sites, is a function of those amplitudes alone. Here `+`
//! labels the excited state, and `w = 0` is the unperturbed background with
//! `⟨σ_z⟩/2 = −½`.

use std::ops::RangeInclusive;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::analytic::bessel_j_orders;
use crate::entanglement::{binary_entropy, QubitDensity, TwoSiteDensity};
use crate::error::{Error, Result};

pub const DEFAULT_MIN_MASS: f64 = 1.0 - 1e-10;
const AMPLITUDE_SLACK: f64 = 1e-12;
const MAX_RADIUS: usize = 50_000_000;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_amplitude(w: f64) -> Result<()> {
    if w.is_finite() && w.abs() <= 1.0 + AMPLITUDE_SLACK {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("amplitude {w} outside [-1, 1]")))
    }
}

/// Amplitudes on a window of sites centred on the measured site.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveProfile {
    m: i64,
    t: f64,
    lambda: f64,
    radius: i64,
    /// `orders[n] = J_n(λt)` for `0 ≤ n ≤ radius`.
    orders: Vec<f64>,
    mass: f64,
}

/// Builds the profile, widening the window until `Σ w² ≥ min_mass`.
pub fn wave_profile(m: i64, t: f64, lambda: f64, min_mass: f64) -> Result<WaveProfile> {
    if !lambda.is_finite() || !(0.0..1.0).contains(&lambda) {
        return Err(Error::CouplingOutOfRange(lambda));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter(format!("time must be finite and >= 0, got {t}")));
    }
    if !(min_mass > 0.0 && min_mass <= 1.0) {
        return Err(Error::InvalidParameter(format!("min_mass must lie in (0, 1], got {min_mass}")));
    }
    let z = lambda * t;
    let mut radius = (z + 20.0 + 10.0 * z.cbrt()).ceil() as usize;
    loop {
        let orders = bessel_j_orders(radius, z);
        let mass = orders[0] * orders[0] + 2.0 * orders[1..].iter().map(|j| j * j).sum::<f64>();
        if mass >= min_mass || radius >= MAX_RADIUS {
            if mass < min_mass {
                return Err(Error::InvalidParameter(format!(
                    "window of radius {radius} captures only {mass} of the profile"
                )));
            }
            return Ok(WaveProfile { m, t, lambda, radius: radius as i64, orders, mass });
        }
        radius = radius * 3 / 2 + 1;
    }
}

impl WaveProfile {
    pub fn measured_site(&self) -> i64 {
        self.m
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn window(&self) -> RangeInclusive<i64> {
        self.m - self.radius..=self.m + self.radius
    }

    /// Captured `Σ w_l²` over the window.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `J_n(λt)` for any integer order; zero beyond the window.
    fn order(&self, n: i64) -> f64 {
        let a = n.unsigned_abs() as usize;
        match self.orders.get(a) {
            Some(&j) if n < 0 && a % 2 == 1 => -j,
            Some(&j) => j,
            None => 0.0,
        }
    }

    /// `w_l(t)`; zero for sites outside the window.
    pub fn amplitude(&self, site: i64) -> f64 {
        self.order(self.m - site)
    }

    /// Amplitude at offset `x = l − m`.
    pub fn at_offset(&self, x: i64) -> f64 {
        self.order(-x)
    }

    /// `(site, w)` pairs across the window, in site order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.window().map(move |l| (l, self.amplitude(l)))
    }

    /// Offset `x = i − m` maximizing the fidelity; ties go to the larger offset.
    pub fn fidelity_peak(&self) -> i64 {
        (-self.radius..=self.radius)
            .map(|x| (fidelity(self.at_offset(x)), x))
            .max_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(_, x)| x)
            .unwrap_or(0)
    }
}

/// Two-site state built from `w_i`, `w_j`.
pub fn two_site_state(wi: f64, wj: f64) -> Result<TwoSiteDensity> {
    check_amplitude(wi)?;
    check_amplitude(wj)?;
    if wi * wi + wj * wj > 1.0 + AMPLITUDE_SLACK {
        return Err(Error::InvalidParameter(format!("w_i^2 + w_j^2 = {} exceeds 1", wi * wi + wj * wj)));
    }
    let v = [0.0, wi, wj, 1.0];
    let mut m = Matrix4::from_fn(|r, s| c(0.5 * v[r] * v[s]));
    m[(3, 3)] = c(0.5 * (2.0 - wi * wi - wj * wj));
    TwoSiteDensity::new(m)
}

/// `ρ_i = ½[[w², w], [w, 2 − w²]]`.
pub fn site_density(wi: f64) -> QubitDensity {
    Matrix2::new(c(0.5 * wi * wi), c(0.5 * wi), c(0.5 * wi), c(1.0 - 0.5 * wi * wi))
}

/// `(⟨σ_z⟩/2, S(ρ_i))` with the entropy in bits.
pub fn site_observables(wi: f64) -> Result<(f64, f64)> {
    check_amplitude(wi)?;
    let w2 = (wi * wi).min(1.0);
    let root = (1.0 - w2 * (1.0 - w2)).max(0.0).sqrt();
    Ok(((w2 - 1.0) / 2.0, binary_entropy((1.0 - root) / 2.0)))
}

/// `|w_i w_j|`.
pub fn pair_concurrence(wi: f64, wj: f64) -> f64 {
    (wi * wj).abs()
}

/// `(1 + w_i)/2`.
pub fn fidelity(wi: f64) -> f64 {
    (1.0 + wi) / 2.0
}

/// `M_0 = diag(w, 1)` and `M_1` with `√(1−w²)` in the lower-left corner.
pub fn kraus_operators(wi: f64) -> Result<[Matrix2<Complex64>; 2]> {
    check_amplitude(wi)?;
    let jump = (1.0 - wi * wi).max(0.0).sqrt();
    Ok([Matrix2::new(c(wi), c(0.0), c(0.0), c(1.0)), Matrix2::new(c(0.0), c(0.0), c(jump), c(0.0))])
}

pub fn apply_damping_channel(rho: &QubitDensity, wi: f64) -> Result<QubitDensity> {
    let trace = rho.trace();
    if !((trace.re - 1.0).abs() <= 1e-12 && trace.im.abs() <= 1e-12) {
        return Err(Error::InvalidDensity(format!("trace {trace}")));
    }
    if !((rho - rho.adjoint()).norm() <= 1e-12) {
        return Err(Error::InvalidDensity("not Hermitian".into()));
    }
    let [m0, m1] = kraus_operators(wi)?;
    Ok(m0 * rho * m0.adjoint() + m1 * rho * m1.adjoint())
}

/// `|ψ_m⟩⟨ψ_m|` for `ψ_m = (|+⟩ + |−⟩)/√2`.
pub fn measured_state() -> QubitDensity {
    Matrix2::repeat(c(0.5))
}
