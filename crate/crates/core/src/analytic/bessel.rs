//! Bessel functions of the first kind and integer order.
//!
//! Miller's downward recurrence normalised with `J_0² + 2 Σ_{k≥1} J_k² = 1`;
//! the overall sign comes from `J_0 + 2 Σ J_{2k} = 1`.

const RESCALE_ABOVE: f64 = 1e100;

/// `J_n(x)` for any integer order, with `J_{-n} = (-1)^n J_n` and
/// `J_n(-x) = (-1)^n J_n(x)`.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let order = n.unsigned_abs() as usize;
    let value = bessel_j_orders(order, x.abs())[order];
    let odd = order % 2 == 1;
    let flip = odd && ((n < 0) != (x < 0.0));
    if flip {
        -value
    } else {
        value
    }
}

/// `[J_0(x), J_1(x), ..., J_{max_order}(x)]` for `x ≥ 0`.
pub fn bessel_j_orders(max_order: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; max_order + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if !x.is_finite() || x < 0.0 {
        out.fill(f64::NAN);
        return out;
    }

    let reach = (max_order as f64).max(x);
    let mut start = (reach + 40.0 + 15.0 * reach.cbrt()).ceil() as usize;
    start += start % 2;

    let mut above = 0.0_f64; // J_{k+1}
    let mut here = 1e-30_f64; // J_k
    let mut sum_sq = 0.0_f64;
    let mut even_sum = 0.0_f64;
    for k in (0..=start).rev() {
        if k <= max_order {
            out[k] = here;
        }
        if k == 0 {
            sum_sq += here * here;
            even_sum += here;
        } else {
            sum_sq += 2.0 * here * here;
            if k % 2 == 0 {
                even_sum += 2.0 * here;
            }
            let below = 2.0 * k as f64 / x * here - above;
            above = here;
            here = below;
        }
        if here.abs() > RESCALE_ABOVE {
            let s = 1.0 / RESCALE_ABOVE;
            here *= s;
            above *= s;
            sum_sq *= s * s;
            even_sum *= s;
            for v in out.iter_mut().skip(k.saturating_sub(1)) {
                *v *= s;
            }
        }
    }
    let norm = even_sum.signum() / sum_sq.sqrt();
    for v in out.iter_mut() {
        *v *= norm;
    }
    out
}
