//! Brute-force reference results for small periodic chains.
//!
//! The chain Hamiltonian is
//!
//! ```text
//! H = −Σ_i { (λ/4)[(1+γ) σˣ_i σˣ_{i+1} + (1−γ) σʸ_i σʸ_{i+1}] + ½ σᶻ_i }
//! ```
//!
//! with periodic boundaries; this scale makes its one-excitation band equal to
//! [`dispersion`](crate::analytic::dispersion). For `n = 2` the bond appears
//! twice, as the periodic sum prescribes. `H` is real in the `σ_z` basis and
//! block diagonal in magnetization (`γ = 0`) or parity (`γ ≠ 0`), so each
//! block is diagonalized densely on its own.

mod pauli;
mod single;

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

pub use pauli::{Pauli, PauliString};
pub use single::single_excitation_evolution;

use crate::analytic::ModelParams;
use crate::entanglement::TwoSiteDensity;
use crate::error::{Error, Result};

pub const MIN_SITES: usize = 2;
pub const MAX_SITES: usize = 14;
const DEGENERATE_WEIGHT: f64 = 1e-14;
/// Energies within this of the ground energy share the `β = ∞` weight.
const GROUND_WINDOW: f64 = 1e-10;

#[derive(Debug, Clone)]
struct Sector {
    states: Vec<u32>,
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
}

/// A periodic chain of `n` spins with a lazily computed eigensystem.
#[derive(Debug)]
pub struct OracleChain {
    n: usize,
    params: ModelParams,
    eigen: OnceLock<Vec<Sector>>,
}

fn sector_label(state: u32, conserve_number: bool) -> u32 {
    if conserve_number {
        state.count_ones()
    } else {
        state.count_ones() & 1
    }
}

fn sector_states(n: usize, conserve_number: bool) -> Vec<Vec<u32>> {
    let count = if conserve_number { n + 1 } else { 2 };
    let mut sectors = vec![Vec::new(); count];
    for s in 0..1u32 << n {
        sectors[sector_label(s, conserve_number) as usize].push(s);
    }
    sectors.retain(|s| !s.is_empty());
    sectors
}

/// Builds the chain; the eigensystem is computed on first use.
pub fn build_hamiltonian(n: usize, p: &ModelParams) -> Result<OracleChain> {
    OracleChain::new(n, p)
}

impl OracleChain {
    pub fn new(n: usize, p: &ModelParams) -> Result<Self> {
        if !(MIN_SITES..=MAX_SITES).contains(&n) {
            return Err(Error::ChainSize(n));
        }
        Ok(Self { n, params: *p, eigen: OnceLock::new() })
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    fn conserves_number(&self) -> bool {
        self.params.gamma() == 0.0
    }

    /// Approximate peak memory of the eigensystem in bytes.
    pub fn memory_estimate(n: usize, gamma: f64) -> usize {
        sector_states(n.min(MAX_SITES), gamma == 0.0)
            .iter()
            .map(|s| 3 * s.len() * s.len() * std::mem::size_of::<f64>())
            .sum()
    }

    /// Dense Hamiltonian block on the given basis states.
    fn block(&self, states: &[u32]) -> DMatrix<f64> {
        let n = self.n;
        let lambda = self.params.lambda();
        let gamma = self.params.gamma();
        let mut index = vec![usize::MAX; 1 << n];
        for (k, &s) in states.iter().enumerate() {
            index[s as usize] = k;
        }
        let mut h = DMatrix::zeros(states.len(), states.len());
        for (col, &s) in states.iter().enumerate() {
            let up = s.count_ones() as f64;
            h[(col, col)] -= 0.5 * (2.0 * up - n as f64);
            for i in 0..n {
                let j = (i + 1) % n;
                let aligned = (s >> i & 1) == (s >> j & 1);
                let amp = if aligned { lambda * gamma / 2.0 } else { lambda / 2.0 };
                if amp == 0.0 {
                    continue;
                }
                let t = s ^ (1 << i) ^ (1 << j);
                h[(index[t as usize], col)] -= amp;
            }
        }
        h
    }

    /// The full `2ⁿ × 2ⁿ` Hamiltonian in the `σ_z` basis.
    pub fn hamiltonian(&self) -> DMatrix<f64> {
        let dim = 1usize << self.n;
        let mut h = DMatrix::zeros(dim, dim);
        for states in sector_states(self.n, self.conserves_number()) {
            let b = self.block(&states);
            for (r, &sr) in states.iter().enumerate() {
                for (c, &sc) in states.iter().enumerate() {
                    h[(sr as usize, sc as usize)] = b[(r, c)];
                }
            }
        }
        h
    }

    fn sectors(&self) -> &[Sector] {
        self.eigen.get_or_init(|| {
            sector_states(self.n, self.conserves_number())
                .into_par_iter()
                .map(|states| {
                    let eig = SymmetricEigen::new(self.block(&states));
                    Sector { states, energies: eig.eigenvalues, vectors: eig.eigenvectors }
                })
                .collect()
        })
    }

    /// All eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.sectors().iter().flat_map(|s| s.energies.iter().copied()).collect();
        e.sort_by(f64::total_cmp);
        e
    }

    /// Eigenvalues of the sector with exactly one spin down, relative to the
    /// all-up state (`γ = 0` only).
    pub fn one_excitation_band(&self) -> Result<Vec<f64>> {
        if !self.conserves_number() {
            return Err(Error::AnisotropyUnsupported(self.params.gamma()));
        }
        let reference = -(self.n as f64) / 2.0;
        let sector = self
            .sectors()
            .iter()
            .find(|s| s.states[0].count_ones() as usize == self.n - 1)
            .expect("every magnetization sector is present");
        let mut e: Vec<f64> = sector.energies.iter().map(|e| e - reference).collect();
        e.sort_by(f64::total_cmp);
        Ok(e)
    }

    /// Unnormalized Boltzmann weights per sector, and their sum.
    fn boltzmann(&self, beta: f64) -> Result<(Vec<Vec<f64>>, f64)> {
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::InvalidParameter(format!("beta must be >= 0, got {beta}")));
        }
        let sectors = self.sectors();
        let ground = sectors.iter().flat_map(|s| s.energies.iter().copied()).fold(f64::INFINITY, f64::min);
        let weights: Vec<Vec<f64>> = sectors
            .iter()
            .map(|s| {
                s.energies
                    .iter()
                    .map(|&e| {
                        let gap = e - ground;
                        if beta.is_infinite() {
                            if gap < GROUND_WINDOW {
                                1.0
                            } else {
                                0.0
                            }
                        } else {
                            (-beta * gap).exp()
                        }
                    })
                    .collect()
            })
            .collect();
        let z = weights.iter().flatten().sum();
        Ok((weights, z))
    }

    /// `Tr(e^{−βH} A)/Z` for each observable; `β = ∞` gives the ground-state
    /// average (uniform over a degenerate ground level).
    pub fn thermal_expectations(&self, beta: f64, observables: &[PauliString]) -> Result<Vec<f64>> {
        for o in observables {
            if o.max_site().is_some_and(|s| s >= self.n) {
                return Err(Error::InvalidParameter(format!("{o} acts outside the {}-site chain", self.n)));
            }
        }
        let (weights, z) = self.boltzmann(beta)?;
        let sectors = self.sectors();
        let mut position = vec![(0usize, 0usize); 1 << self.n];
        for (k, s) in sectors.iter().enumerate() {
            for (r, &state) in s.states.iter().enumerate() {
                position[state as usize] = (k, r);
            }
        }
        observables
            .par_iter()
            .map(|o| {
                let mut total = Complex64::new(0.0, 0.0);
                for (k, s) in sectors.iter().enumerate() {
                    for (r, &state) in s.states.iter().enumerate() {
                        let (image, coeff) = o.apply(state);
                        let (k2, r2) = position[image as usize];
                        if k2 != k {
                            continue;
                        }
                        // ⟨state|ρ|image⟩ = Σ_a V[r,a] w_a V[r2,a]
                        let row = s.vectors.row(r);
                        let other = s.vectors.row(r2);
                        let mut elem = 0.0;
                        for (a, &w) in weights[k].iter().enumerate() {
                            elem += row[a] * w * other[a];
                        }
                        total += coeff * elem;
                    }
                }
                let value = total / z;
                if value.im.abs() > 1e-10 {
                    return Err(Error::Eigen(format!("{o} has complex expectation {value}")));
                }
                Ok(value.re)
            })
            .collect()
    }

    /// Thermal reduced density matrix of sites `i`, `j`, assembled from the
    /// sixteen two-site Pauli expectations.
    pub fn thermal_two_site(&self, beta: f64, i: usize, j: usize) -> Result<TwoSiteDensity> {
        if i == j || i >= self.n || j >= self.n {
            return Err(Error::InvalidParameter(format!("bad site pair ({i}, {j})")));
        }
        let ops: [Option<Pauli>; 4] = [None, Some(Pauli::X), Some(Pauli::Y), Some(Pauli::Z)];
        let mut strings = Vec::with_capacity(16);
        for a in ops {
            for b in ops {
                let factors = a.map(|p| (i, p)).into_iter().chain(b.map(|p| (j, p)));
                strings.push(PauliString::new(factors)?);
            }
        }
        let values = self.thermal_expectations(beta, &strings)?;
        let mut rho = Matrix4::zeros();
        for (k, v) in values.iter().enumerate() {
            rho += kron(&single_matrix(ops[k / 4]), &single_matrix(ops[k % 4])) * Complex64::new(v / 4.0, 0.0);
        }
        TwoSiteDensity::new(rho)
    }

    /// Eigenbasis data for `⟨σ_z^m(t)⟩/2` after measuring site `l`; see
    /// [`ConditionalSeries`].
    pub fn conditional_series(&self, beta: f64, l: usize, m: usize, selective: bool) -> Result<ConditionalSeries> {
        if l >= self.n || m >= self.n {
            return Err(Error::InvalidParameter(format!("sites ({l}, {m}) outside the chain")));
        }
        let (weights, z) = self.boltzmann(beta)?;
        let parts: Vec<(Vec<(f64, f64)>, f64)> = self
            .sectors()
            .par_iter()
            .zip(weights.par_iter())
            .map(|(s, w)| {
                let dim = s.states.len();
                let v = &s.vectors;
                let project = |up: bool| {
                    let mask = DVector::from_iterator(
                        dim,
                        s.states.iter().map(|&st| if (st >> l & 1 == 1) == up { 1.0 } else { 0.0 }),
                    );
                    v.transpose() * DMatrix::from_diagonal(&mask) * v
                };
                let weight = DMatrix::from_diagonal(&DVector::from_vec(w.iter().map(|x| x / z).collect()));
                let p = project(true);
                let mut conditioned = &p * &weight * &p;
                let norm = conditioned.trace();
                if !selective {
                    let q = project(false);
                    conditioned += &q * &weight * &q;
                }
                let spin =
                    DVector::from_iterator(dim, s.states.iter().map(|&st| if st >> m & 1 == 1 { 0.5 } else { -0.5 }));
                let observable = v.transpose() * DMatrix::from_diagonal(&spin) * v;
                let mut terms = Vec::with_capacity(dim * (dim + 1) / 2);
                for a in 0..dim {
                    terms.push((0.0, conditioned[(a, a)] * observable[(a, a)]));
                    for b in a + 1..dim {
                        let coeff = 2.0 * conditioned[(a, b)] * observable[(a, b)];
                        if coeff != 0.0 {
                            terms.push((s.energies[a] - s.energies[b], coeff));
                        }
                    }
                }
                (terms, norm)
            })
            .collect();
        let norm: f64 = parts.iter().map(|p| p.1).sum();
        let scale = if selective {
            if norm < DEGENERATE_WEIGHT {
                return Err(Error::DegenerateConditioning(norm));
            }
            1.0 / norm
        } else {
            1.0
        };
        let mut terms: Vec<(f64, f64)> = parts.into_iter().flat_map(|p| p.0).collect();
        for t in &mut terms {
            t.1 *= scale;
        }
        Ok(ConditionalSeries { terms })
    }

    /// `Tr(PρP A(t))/Tr(PρP)` (selective) or `Σ_± Tr(P_±ρP_± A(t))`
    /// (non-selective) with `A = σ_z^m/2` and `P_+` the up projector at `l`.
    pub fn conditional_dynamics(&self, beta: f64, l: usize, m: usize, t: f64, selective: bool) -> Result<f64> {
        Ok(self.conditional_series(beta, l, m, selective)?.value(t))
    }
}

/// `Σ c cos(ω t)` form of a conditional expectation.
#[derive(Debug, Clone)]
pub struct ConditionalSeries {
    terms: Vec<(f64, f64)>,
}

impl ConditionalSeries {
    pub fn value(&self, t: f64) -> f64 {
        self.terms.iter().map(|&(w, c)| c * (w * t).cos()).sum()
    }
}

fn single_matrix(p: Option<Pauli>) -> nalgebra::Matrix2<Complex64> {
    let (o, l, i) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::i());
    // basis (+, −) = (up, down)
    match p {
        None => nalgebra::Matrix2::new(l, o, o, l),
        Some(Pauli::X) => nalgebra::Matrix2::new(o, l, l, o),
        Some(Pauli::Y) => nalgebra::Matrix2::new(o, -i, i, o),
        Some(Pauli::Z) => nalgebra::Matrix2::new(l, o, o, -l),
    }
}

fn kron(a: &nalgebra::Matrix2<Complex64>, b: &nalgebra::Matrix2<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// Reduced state of sites `i`, `j` of an `n`-site pure state.
pub fn partial_trace_two_site(psi: &[Complex64], i: usize, j: usize) -> Result<TwoSiteDensity> {
    if !psi.len().is_power_of_two() || psi.len() < 4 {
        return Err(Error::InvalidParameter(format!("state length {} is not 2^n, n >= 2", psi.len())));
    }
    let n = psi.len().trailing_zeros() as usize;
    if n > MAX_SITES {
        return Err(Error::ChainSize(n));
    }
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidParameter(format!("bad site pair ({i}, {j})")));
    }
    let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
    let index = |s: usize| 2 * (1 - (s >> i & 1)) + (1 - (s >> j & 1));
    let pair_mask = (1 << i) | (1 << j);
    let mut rho = Matrix4::zeros();
    for s in 0..psi.len() {
        if psi[s] == Complex64::new(0.0, 0.0) {
            continue;
        }
        let rest = s & !pair_mask;
        for bits in 0..4usize {
            let t = rest | ((bits & 1) << i) | ((bits >> 1 & 1) << j);
            rho[(index(s), index(t))] += psi[s] * psi[t].conj();
        }
    }
    TwoSiteDensity::new(rho / Complex64::new(norm, 0.0))
}
