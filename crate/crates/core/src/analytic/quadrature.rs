//! Composite Gauss-Legendre quadrature over `[0, π]` with global panel
//! doubling.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes per Gauss-Legendre panel.
pub const PANEL_ORDER: usize = 20;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
const DEFAULT_NODE_COUNT: usize = 64;
const DEFAULT_MAX_DOUBLINGS: u32 = 14;

struct Rule {
    nodes: [f64; PANEL_ORDER],
    weights: [f64; PANEL_ORDER],
}

fn panel_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// Newton iteration on `P_n` from the Tricomi initial guesses.
fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = [0.0; PANEL_ORDER];
    let mut weights = [0.0; PANEL_ORDER];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            deriv = nf * (z * p1 - p2) / (z * z - 1.0);
            let step = p1 / deriv;
            z -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * deriv * deriv);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

/// Integration engine for smooth, possibly oscillatory integrands on `[0, π]`.
///
/// The initial node budget is `max(node_count, 64 + 8·ceil(hint))` where the
/// caller's oscillation hint is roughly `λt + |x|`. Panel counts are doubled
/// until two successive estimates agree to `tolerance·(1 + |I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    node_count: usize,
    tolerance: f64,
    max_doublings: u32,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { node_count: DEFAULT_NODE_COUNT, tolerance: DEFAULT_TOLERANCE, max_doublings: DEFAULT_MAX_DOUBLINGS }
    }
}

impl Quadrature {
    pub fn new(node_count: usize, tolerance: f64) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidParameter("node_count must be positive".into()));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tolerance}")));
        }
        Ok(Self { node_count, tolerance, max_doublings: DEFAULT_MAX_DOUBLINGS })
    }

    pub fn with_max_doublings(mut self, max_doublings: u32) -> Self {
        self.max_doublings = max_doublings;
        self
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Initial node count for an integrand with the given oscillation hint.
    pub fn budget(&self, hint: f64) -> usize {
        let extra = if hint.is_finite() && hint > 0.0 { 8 * hint.ceil() as usize } else { 0 };
        self.node_count.max(64 + extra)
    }

    /// Nodes and weights of the composite rule with (at least) `total` nodes
    /// spread over `[0, π]`.
    pub fn nodes_and_weights(total: usize) -> (Vec<f64>, Vec<f64>) {
        let segments = [(0.0, PI, total.div_ceil(PANEL_ORDER).max(1))];
        let mut xs = Vec::new();
        let mut ws = Vec::new();
        for_each_node(&segments, |x, w| {
            xs.push(x);
            ws.push(w);
        });
        (xs, ws)
    }

    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        self.integrate_oscillatory(0.0, &[], f)
    }

    pub fn integrate_oscillatory<F>(&self, hint: f64, breaks: &[f64], f: F) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        self.integrate_many(hint, breaks, |k| [f(k)]).map(|[v]| v)
    }

    /// Integrates `N` integrands that share their evaluation points. All
    /// components must converge.
    ///
    /// `breaks` are interior points where the integrand is not smooth; panels
    /// never straddle them.
    pub fn integrate_many<const N: usize, F>(&self, hint: f64, breaks: &[f64], f: F) -> Result<[f64; N]>
    where
        F: Fn(f64) -> [f64; N],
    {
        let mut cuts: Vec<f64> = breaks.iter().copied().filter(|b| *b > 0.0 && *b < PI).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut edges = Vec::with_capacity(cuts.len() + 2);
        edges.push(0.0);
        edges.extend(cuts);
        edges.push(PI);

        let panels_total = self.budget(hint).div_ceil(PANEL_ORDER).max(1);
        let mut segments: Vec<(f64, f64, usize)> = edges
            .windows(2)
            .map(|w| {
                let share = (w[1] - w[0]) / PI * panels_total as f64;
                (w[0], w[1], (share.ceil() as usize).max(1))
            })
            .collect();

        let mut previous = composite(&segments, &f);
        let mut change = f64::INFINITY;
        for _ in 0..self.max_doublings {
            for seg in segments.iter_mut() {
                seg.2 *= 2;
            }
            let current = composite(&segments, &f);
            let mut converged = true;
            change = 0.0;
            for (c, p) in current.iter().zip(previous.iter()) {
                if !c.is_finite() {
                    return Err(Error::QuadratureNotConverged { nodes: node_total(&segments), change: f64::NAN });
                }
                let delta = (c - p).abs();
                change = f64::max(change, delta);
                if delta > self.tolerance * (1.0 + c.abs()) {
                    converged = false;
                }
            }
            if converged {
                return Ok(current);
            }
            previous = current;
        }
        Err(Error::QuadratureNotConverged { nodes: node_total(&segments), change })
    }
}

fn node_total(segments: &[(f64, f64, usize)]) -> usize {
    segments.iter().map(|s| s.2 * PANEL_ORDER).sum()
}

fn for_each_node(segments: &[(f64, f64, usize)], mut visit: impl FnMut(f64, f64)) {
    let rule = panel_rule();
    for &(a, b, panels) in segments {
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + h * p as f64;
            let half = 0.5 * h;
            let mid = lo + half;
            for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
                visit(mid + half * x, half * w);
            }
        }
    }
}

fn composite<const N: usize, F>(segments: &[(f64, f64, usize)], f: &F) -> [f64; N]
where
    F: Fn(f64) -> [f64; N],
{
    let mut acc = [0.0; N];
    for_each_node(segments, |x, w| {
        let v = f(x);
        for (a, vi) in acc.iter_mut().zip(v.iter()) {
            *a += w * vi;
        }
    });
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrates_to_pi() {
        for total in [20, 64, 200, 1000] {
            let (xs, ws) = Quadrature::nodes_and_weights(total);
            assert!(xs.iter().all(|x| *x > 0.0 && *x < PI));
            let sum: f64 = ws.iter().sum();
            assert!((sum - PI).abs() < 1e-14, "{total}: {}", sum - PI);
        }
        let q = Quadrature::default();
        assert!((q.integrate(|_| 1.0).unwrap() - PI).abs() < 1e-14);
    }

    #[test]
    fn panel_rule_is_exact_for_high_degree_polynomials() {
        let rule = panel_rule();
        for deg in 0..(2 * PANEL_ORDER) {
            let s: f64 = rule.nodes.iter().zip(rule.weights.iter()).map(|(x, w)| w * x.powi(deg as i32)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((s - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn cosine_orthogonality() {
        let q = Quadrature::default();
        assert!(q.integrate(|k| (3.0 * k).cos()).unwrap().abs() < 1e-12);
        let v = q.integrate_oscillatory(40.0, &[], |k| (40.0 * k).cos() * (39.0 * k).cos()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn breakpoints_handle_steps() {
        let q = Quadrature::default();
        let step = 2.0;
        let v = q.integrate_oscillatory(0.0, &[step], |k| if k < step { 1.0 } else { -1.0 }).unwrap();
        assert!((v - (2.0 * step - PI)).abs() < 1e-13);
    }

    #[test]
    fn too_oscillatory_reports_failure() {
        let q = Quadrature::default().with_max_doublings(1);
        let err = q.integrate(|k| (5000.0 * k * k).cos()).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { .. }));
    }

    #[test]
    fn budget_follows_oscillation_hint() {
        let q = Quadrature::default();
        assert_eq!(q.budget(0.0), 64);
        assert_eq!(q.budget(10.2), 64 + 88);
        assert_eq!(Quadrature::new(500, 1e-10).unwrap().budget(1.0), 500);
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(Quadrature::new(0, 1e-10).is_err());
        assert!(Quadrature::new(10, 0.0).is_err());
        assert!(Quadrature::new(10, f64::NAN).is_err());
    }
}
