//! Two-qubit reduced density matrices and their entanglement.
//!
//! The two-qubit basis is `{|++⟩, |+−⟩, |−+⟩, |−−⟩}` with `+` the `σ_z = +1`
//! state and the first factor the first site.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues down to `-PSD_CLIP` are treated as rounding and read as zero.
pub const PSD_CLIP: f64 = 1e-10;
const IMAG_TOL: f64 = 1e-10;
/// Eigenvalues of a unit-trace state at or below this are rounding noise and
/// are read as exact zeros by both concurrence routes.
pub const RANK_TOL: f64 = 16.0 * f64::EPSILON;

pub type QubitDensity = Matrix2<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A validated two-qubit density matrix.
///
/// Entries are kept exactly as supplied; small negative eigenvalues are only
/// clipped in the spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSiteDensity {
    entries: Matrix4<Complex64>,
    spectrum: [f64; 4],
}

impl TwoSiteDensity {
    pub fn new(entries: Matrix4<Complex64>) -> Result<Self> {
        for i in 0..4 {
            for j in 0..4 {
                let d = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                if !(d <= HERMITIAN_TOL) {
                    return Err(Error::InvalidDensity(format!("not Hermitian at ({i},{j})")));
                }
            }
        }
        let trace = entries.trace();
        if !((trace.re - 1.0).abs() <= TRACE_TOL && trace.im.abs() <= TRACE_TOL) {
            return Err(Error::InvalidDensity(format!("trace {trace}")));
        }
        let eig = entries.symmetric_eigenvalues();
        let mut spectrum = [0.0; 4];
        for (s, &e) in spectrum.iter_mut().zip(eig.iter()) {
            if e < -PSD_CLIP {
                return Err(Error::NotPositiveSemidefinite(e));
            }
            *s = e.max(0.0);
        }
        spectrum.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { entries, spectrum })
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.entries
    }

    /// Clipped eigenvalues, descending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        self.spectrum
    }

    /// State of the first site (second traced out).
    pub fn reduce_first(&self) -> QubitDensity {
        let m = &self.entries;
        Matrix2::new(m[(0, 0)] + m[(1, 1)], m[(0, 2)] + m[(1, 3)], m[(2, 0)] + m[(3, 1)], m[(2, 2)] + m[(3, 3)])
    }

    /// State of the second site (first traced out).
    pub fn reduce_second(&self) -> QubitDensity {
        let m = &self.entries;
        Matrix2::new(m[(0, 0)] + m[(2, 2)], m[(0, 1)] + m[(2, 3)], m[(1, 0)] + m[(3, 2)], m[(1, 1)] + m[(3, 3)])
    }

    pub fn entropy(&self) -> f64 {
        entropy_of_spectrum(&self.spectrum)
    }

    pub fn concurrence(&self) -> Result<f64> {
        concurrence_wootters(self)
    }
}

/// Diagonal populations `(ρ₁₁, ρ₂₂, ρ₃₃, ρ₄₄)` of the correlator-built
/// state. Shared with [`concurrence_xstate_closed`] so both concurrence
/// routes see identical rounding in the small populations.
fn populations(mz: f64, zz: f64) -> [f64; 4] {
    let up = (1.0 + 2.0 * mz + zz) / 4.0;
    let mixed = (1.0 - zz) / 4.0;
    let down = (1.0 - 2.0 * mz + zz) / 4.0;
    [up, mixed, mixed, down]
}

/// `ρ = ¼(I⊗I + ⟨σ_z⟩(σ_z⊗I + I⊗σ_z) + Σ_a ⟨σᵃσᵃ⟩ σᵃ⊗σᵃ)`.
pub fn two_site_density(mz: f64, xx: f64, yy: f64, zz: f64) -> Result<TwoSiteDensity> {
    for (name, v) in [("mz", mz), ("xx", xx), ("yy", yy), ("zz", zz)] {
        if !(v.abs() <= 1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!("{name} = {v} outside [-1, 1]")));
        }
    }
    let [p1, p2, p3, p4] = populations(mz, zz);
    let flip = (xx + yy) / 4.0;
    let pair = (xx - yy) / 4.0;
    let mut m = Matrix4::zeros();
    m[(0, 0)] = c(p1);
    m[(1, 1)] = c(p2);
    m[(2, 2)] = c(p3);
    m[(3, 3)] = c(p4);
    m[(1, 2)] = c(flip);
    m[(2, 1)] = c(flip);
    m[(0, 3)] = c(pair);
    m[(3, 0)] = c(pair);
    TwoSiteDensity::new(m)
}

fn spin_flip() -> Matrix4<Complex64> {
    // σ_y ⊗ σ_y
    let mut s = Matrix4::zeros();
    s[(0, 3)] = c(-1.0);
    s[(3, 0)] = c(-1.0);
    s[(1, 2)] = c(1.0);
    s[(2, 1)] = c(1.0);
    s
}

/// Concurrence `max{0, λ₁ − λ₂ − λ₃ − λ₄}` with `λ_i` the square roots of the
/// eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`, in descending order.
///
/// The `λ_i` are taken as the singular values of `τ = Lᵀ(σ_y⊗σ_y)L` for any
/// factor `ρ = LL†`. This avoids square roots of near-zero eigenvalues, which
/// would turn rounding of order 1e-17 into errors of order 1e-9.
pub fn concurrence_wootters(rho: &TwoSiteDensity) -> Result<f64> {
    let eig = rho.entries.symmetric_eigen();
    let mut factor = eig.eigenvectors;
    for (j, &mu) in eig.eigenvalues.iter().enumerate() {
        if !mu.is_finite() {
            return Err(Error::Eigen("non-finite eigenvalue".into()));
        }
        let scale = if mu > RANK_TOL { mu.sqrt() } else { 0.0 };
        factor.column_mut(j).scale_mut(scale);
    }
    let tau = factor.transpose() * spin_flip() * factor;
    let mut roots: [f64; 4] = tau
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigen("SVD did not converge".into()))?
        .singular_values
        .into();
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(wootters_combination(roots))
}

/// Same quantity from the eigenvalues of the non-Hermitian spin-flip product
/// directly. Loses accuracy when `ρ` is close to singular.
pub fn concurrence_wootters_spectral(rho: &TwoSiteDensity) -> Result<f64> {
    let s = spin_flip();
    let conj = rho.entries.map(|z| z.conj());
    let product = rho.entries * s * conj * s;
    let schur = nalgebra::Schur::try_new(product, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigen("Schur iteration did not converge".into()))?;
    let eig = schur.eigenvalues().ok_or_else(|| Error::Eigen("spin-flip product has no triangular form".into()))?;
    let mut roots = [0.0; 4];
    for (r, e) in roots.iter_mut().zip(eig.iter()) {
        if e.im.abs() > IMAG_TOL {
            return Err(Error::Eigen(format!("complex eigenvalue {e} in spin-flip product")));
        }
        *r = e.re.max(0.0).sqrt();
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(wootters_combination(roots))
}

fn wootters_combination(sorted: [f64; 4]) -> f64 {
    clamp_concurrence(sorted[0] - sorted[1] - sorted[2] - sorted[3])
}

/// Clamps to `[0, 1]`, reading values at rounding level as exactly zero.
fn clamp_concurrence(c: f64) -> f64 {
    if c > RANK_TOL {
        c.min(1.0)
    } else {
        0.0
    }
}

/// Concurrence of the isotropic nearest-neighbour state from `G_0`, `G_1`:
/// `max{0, |G_1| − sqrt(¼(1 + G_0² − G_1²)² − G_0²)}`.
///
/// The radicand is evaluated as `4ρ₁₁ρ₄₄` from the state's populations, with
/// populations at rounding level read as zero exactly as in
/// [`concurrence_wootters`].
pub fn concurrence_xstate_closed(g0: f64, g1: f64) -> f64 {
    let zz = g0 * g0 - g1 * g1;
    let [up, _, _, down] = populations(g0, zz).map(|p| if p > RANK_TOL { p } else { 0.0 });
    let radicand = 4.0 * up * down;
    clamp_concurrence(g1.abs() - radicand.sqrt())
}

/// `−Σ p log₂ p` with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_of_spectrum(&[p, 1.0 - p])
}

fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.log2()).sum::<f64>().max(0.0)
}

/// Von Neumann entropy (base 2) of a density matrix of any size.
pub fn von_neumann_entropy(rho: &DMatrix<Complex64>) -> Result<f64> {
    if !rho.is_square() {
        return Err(Error::InvalidDensity("matrix is not square".into()));
    }
    let n = rho.nrows();
    for i in 0..n {
        for j in 0..n {
            if !((rho[(i, j)] - rho[(j, i)].conj()).norm() <= HERMITIAN_TOL) {
                return Err(Error::InvalidDensity(format!("not Hermitian at ({i},{j})")));
            }
        }
    }
    let trace = rho.trace();
    if !((trace.re - 1.0).abs() <= TRACE_TOL) {
        return Err(Error::InvalidDensity(format!("trace {trace}")));
    }
    let eig = rho.clone().symmetric_eigenvalues();
    let mut spectrum = Vec::with_capacity(n);
    for &e in eig.iter() {
        if !e.is_finite() {
            return Err(Error::Eigen("non-finite eigenvalue".into()));
        }
        if e < -PSD_CLIP {
            return Err(Error::NotPositiveSemidefinite(e));
        }
        spectrum.push(e.max(0.0));
    }
    Ok(entropy_of_spectrum(&spectrum))
}

/// Embeds a 2×2 or 4×4 fixed-size matrix into a dynamic one.
pub fn to_dynamic<const N: usize>(m: &nalgebra::SMatrix<Complex64, N, N>) -> DMatrix<Complex64> {
    DMatrix::from_column_slice(N, N, m.as_slice())
}
