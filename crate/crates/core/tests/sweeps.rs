//! Qualitative features of the swept quantities.

use xywave_core::entanglement::concurrence_xstate_closed;
use xywave_core::runner::{run_phase_diagram, run_wave, run_zerotemp, Command, RunConfig, SweepResult};

fn config(command: Command, flags: &[(&str, &str)]) -> RunConfig {
    let mut pairs: Vec<(String, String)> = flags.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    pairs.push(("timestamp".into(), "false".into()));
    RunConfig::resolve(command, &[], &pairs).unwrap()
}

fn col(r: &SweepResult, name: &str) -> Vec<f64> {
    r.column(name).unwrap()
}

#[test]
fn thermal_entanglement_band() {
    let r =
        run_phase_diagram(&config(Command::PhaseDiagram, &[("lambda", "0.8:0.99:60"), ("beta", "0.5:40:80")])).unwrap();
    assert_eq!(r.rows.len(), 4800);
    let (lambda, beta, c) = (col(&r, "lambda"), col(&r, "beta"), col(&r, "concurrence"));
    for i in 0..60 {
        let row = |j: usize| c[i * 80 + j];
        assert_eq!(row(0), 0.0, "lambda {}", lambda[i * 80]);
        let band = (0..80).filter(|&j| (2.0..20.0).contains(&beta[i * 80 + j])).map(row).fold(0.0, f64::max);
        assert!(band > 0.0);
        // past the band the entanglement dies away again
        assert!(row(79) < band);
    }
}

#[test]
fn critical_coupling_column_uses_the_ground_state_correlators() {
    let r = run_phase_diagram(&config(Command::PhaseDiagram, &[("lambda", "2"), ("beta", "1e6")])).unwrap();
    let g1 = 3f64.sqrt() / std::f64::consts::PI;
    assert!((col(&r, "g1")[0] - g1).abs() < 1e-4);
    let want = concurrence_xstate_closed(1.0 / 3.0, g1);
    assert!((col(&r, "concurrence")[0] - want).abs() < 1e-4);
    assert!(want > 0.3);
}

fn peak_to_peak(values: &[f64]) -> f64 {
    values.iter().cloned().fold(f64::MIN, f64::max) - values.iter().cloned().fold(f64::MAX, f64::min)
}

#[test]
fn unread_measurement_oscillates_less() {
    let flags = [("lambda", "0.8"), ("beta", "2:20:4"), ("x", "1"), ("t", "0:12:49")];
    let sel = run_wave(&config(Command::Wave, &flags)).unwrap();
    let mut ns_flags = flags.to_vec();
    ns_flags.push(("mode", "nonselective"));
    let ns = run_wave(&config(Command::Wave, &ns_flags)).unwrap();
    let betas = col(&sel, "beta");
    for b in [2.0, 8.0, 14.0, 20.0] {
        let pick = |r: &SweepResult| -> Vec<f64> {
            col(r, "magnetization").into_iter().zip(&betas).filter(|(_, &bb)| bb == b).map(|(m, _)| m).collect()
        };
        assert!(peak_to_peak(&pick(&ns)) < peak_to_peak(&pick(&sel)), "beta {b}");
    }
}

#[test]
fn wave_front_moves_at_the_group_velocity() {
    let lambda = 2.0;
    let r = run_wave(&config(Command::Wave, &[("lambda", "2"), ("beta", "10"), ("x", "-20:20"), ("t", "0:10:21")]))
        .unwrap();
    let (x, t, m) = (col(&r, "x"), col(&r, "t"), col(&r, "magnetization"));
    let times: Vec<f64> = (0..21).map(|i| 0.5 * i as f64).collect();
    // rows are x-major with 21 times per offset
    let at = |xi: usize, ti: usize| m[xi * 21 + ti];
    let mut samples = Vec::new();
    for (ti, &tt) in times.iter().enumerate() {
        assert_eq!(t[ti], tt);
        let front =
            (0..41).filter(|&xi| (at(xi, ti) - at(xi, 0)).abs() > 1e-3).map(|xi| x[xi * 21].abs()).fold(0.0, f64::max);
        if (1.0..=8.0).contains(&tt) {
            samples.push((tt, front));
        }
    }
    let n = samples.len() as f64;
    let (st, sf) = samples.iter().fold((0.0, 0.0), |a, s| (a.0 + s.0, a.1 + s.1));
    let (mt, mf) = (st / n, sf / n);
    let cov: f64 = samples.iter().map(|s| (s.0 - mt) * (s.1 - mf)).sum();
    let var: f64 = samples.iter().map(|s| (s.0 - mt).powi(2)).sum();
    let slope = cov / var;
    assert!((slope - lambda).abs() <= 0.25 * lambda, "slope {slope}");
}

#[test]
fn zero_temperature_sweep() {
    let r = run_zerotemp(&config(Command::ZeroTemp, &[("t", "0:40:401"), ("x", "-40:40")])).unwrap();
    let (x, t, w) = (col(&r, "x"), col(&r, "t"), col(&r, "w"));
    let (mz, s, f) = (col(&r, "magnetization"), col(&r, "entropy"), col(&r, "fidelity"));
    let per_x = 401;
    for xi in 0..81 {
        let row = xi * per_x;
        assert_eq!(w[row], if x[row] == 0.0 { 1.0 } else { 0.0 });
    }
    assert_eq!(f[40 * per_x], 1.0);

    // fidelity ridge: the best site at each time sits near x = λt
    for ti in [150, 250, 350] {
        let best = (0..81).max_by(|&a, &b| f[a * per_x + ti].total_cmp(&f[b * per_x + ti]).then(a.cmp(&b))).unwrap();
        let lt = 0.8 * t[ti];
        assert!((x[best * per_x].abs() - lt).abs() <= 0.1 * lt + 2.0, "t {}: x {}", t[ti], x[best * per_x]);
    }

    // magnetization and entropy peak together in time while w² < 1/2
    let xi = 50; // x = 10
    for ti in 1..400 {
        let k = xi * per_x + ti;
        let peak = |v: &[f64]| v[k] > v[k - 1] && v[k] > v[k + 1];
        if w[k] * w[k] < 0.45 && peak(&mz) {
            assert!(peak(&s), "t {}", t[k]);
        }
    }
}
