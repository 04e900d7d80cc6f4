use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest `‖H‖·dt` used per Taylor step.
const STEP_NORM: f64 = 0.5;
const TAYLOR_TERMS: usize = 40;

/// Evolves `|m⟩` under `e^{+iHt}` for the `n`-site circulant hopping matrix
/// with diagonal `1` and nearest-neighbour entries `λ/2`.
///
/// The propagator is applied by Taylor series on short steps, so the result
/// does not depend on Bessel-function code. Fails if the front (`~λt` sites
/// from `m`) could reach the far side of the ring.
pub fn single_excitation_evolution(n: usize, lambda: f64, m: usize, t: f64) -> Result<Vec<Complex64>> {
    if n < 3 {
        return Err(Error::ChainSize(n));
    }
    if m >= n {
        return Err(Error::InvalidParameter(format!("source site {m} outside the {n}-site ring")));
    }
    if !lambda.is_finite() || lambda < 0.0 || !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter(format!("need finite lambda, t >= 0 (got {lambda}, {t})")));
    }
    if lambda * t >= n as f64 / 2.0 - 10.0 {
        return Err(Error::WrapAround(lambda * t));
    }
    let half = lambda / 2.0;
    let apply = |v: &[Complex64], out: &mut [Complex64]| {
        for l in 0..n {
            let left = v[(l + n - 1) % n];
            let right = v[(l + 1) % n];
            out[l] = v[l] + (left + right) * half;
        }
    };

    let norm = 1.0 + lambda;
    let steps = ((t * norm / STEP_NORM).ceil() as usize).max(1);
    let dt = t / steps as f64;
    let mut state = vec![Complex64::new(0.0, 0.0); n];
    state[m] = Complex64::new(1.0, 0.0);
    let mut term = vec![Complex64::new(0.0, 0.0); n];
    let mut next = vec![Complex64::new(0.0, 0.0); n];
    for _ in 0..steps {
        term.copy_from_slice(&state);
        for k in 1..=TAYLOR_TERMS {
            apply(&term, &mut next);
            let factor = Complex64::new(0.0, dt / k as f64);
            let mut size = 0.0f64;
            for (tm, nx) in term.iter_mut().zip(&next) {
                *tm = nx * factor;
                size = size.max(tm.norm());
            }
            for (s, tm) in state.iter_mut().zip(&term) {
                *s += tm;
            }
            if size < 1e-18 {
                break;
            }
        }
    }
    Ok(state)
}
