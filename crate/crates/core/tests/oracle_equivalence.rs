//! Analytic thermodynamic-limit results against exact diagonalization.

use xywave_core::analytic::{ModelParams, Quadrature};
use xywave_core::dynamics::DynamicsKernels;
use xywave_core::entanglement::two_site_density;
use xywave_core::oracle::{single_excitation_evolution, OracleChain, PauliString};
use xywave_core::thermal::ThermalCorrelators;
use xywave_core::zero_temp::{wave_profile, DEFAULT_MIN_MASS};

fn obs(s: &str) -> PauliString {
    s.parse().unwrap()
}

fn non_increasing(errors: &[f64], slack: f64) -> bool {
    errors.windows(2).all(|w| w[1] <= w[0] + slack)
}

#[test]
fn thermal_correlators_converge_in_chain_length() {
    let p = ModelParams::isotropic(0.8, 4.0).unwrap();
    let table = ThermalCorrelators::nearest_neighbour(&p, &Quadrature::default()).unwrap();
    let g0 = table.g(0).unwrap();
    let xx = table.pair_correlators(1).unwrap().xx;
    let mut err_z = Vec::new();
    let mut err_xx = Vec::new();
    for n in [8, 10, 12] {
        let chain = OracleChain::new(n, &p).unwrap();
        let v = chain.thermal_expectations(4.0, &[obs("Z0"), obs("X0 X1")]).unwrap();
        err_z.push((v[0] - g0).abs());
        err_xx.push((v[1] - xx).abs());
    }
    assert!(err_z[2] <= 0.05 && err_xx[2] <= 0.05, "{err_z:?} {err_xx:?}");
    assert!(non_increasing(&err_z, 1e-3), "{err_z:?}");
    assert!(non_increasing(&err_xx, 1e-3), "{err_xx:?}");
}

#[test]
fn decoupled_chain_calibrates_the_energy_scale() {
    let q = Quadrature::default();
    for beta in [0.5, 1.0, 4.0, 9.0] {
        let p = ModelParams::isotropic(0.0, beta).unwrap();
        let g0 = ThermalCorrelators::compute(&p, &q, [0]).unwrap().magnetization().unwrap();
        let chain = OracleChain::new(12, &p).unwrap();
        let v = chain.thermal_expectations(beta, &[obs("Z4")]).unwrap();
        assert!((v[0] - g0).abs() < 1e-12);
    }
}

#[test]
fn anisotropic_correlators_track_the_chain() {
    let p = ModelParams::new(0.9, 0.5, 3.0).unwrap();
    let t = ThermalCorrelators::nearest_neighbour(&p, &Quadrature::default()).unwrap();
    let c = t.pair_correlators(1).unwrap();
    let chain = OracleChain::new(10, &p).unwrap();
    let v = chain.thermal_expectations(3.0, &[obs("Z0"), obs("X0 X1"), obs("Y0 Y1"), obs("Z0 Z1")]).unwrap();
    let want = [t.magnetization().unwrap(), c.xx, c.yy, c.zz];
    for (got, want) in v.iter().zip(want) {
        assert!((got - want).abs() < 0.02, "{got} vs {want}");
    }
}

#[test]
fn two_site_density_matches_partial_trace() {
    let p = ModelParams::isotropic(0.9, 8.0).unwrap();
    let t = ThermalCorrelators::nearest_neighbour(&p, &Quadrature::default()).unwrap();
    let analytic = t.two_site_density(1).unwrap();
    let chain = OracleChain::new(12, &p).unwrap();
    let brute = chain.thermal_two_site(8.0, 3, 4).unwrap();
    let diff = (analytic.matrix() - brute.matrix()).camax();
    assert!(diff < 0.02, "max entry difference {diff}");

    let c = t.pair_correlators(1).unwrap();
    let rebuilt = two_site_density(t.magnetization().unwrap(), c.xx, c.yy, c.zz).unwrap();
    assert_eq!(rebuilt, analytic);
}

#[test]
fn measurement_dynamics_match_the_chain() {
    let beta = 4.0;
    let p = ModelParams::isotropic(0.8, beta).unwrap();
    let q = Quadrature::default();
    let mut worst = [[0.0f64; 2]; 3];
    for (slot, n) in [8usize, 10, 12].into_iter().enumerate() {
        let chain = OracleChain::new(n, &p).unwrap();
        for x in [1usize, 2] {
            let sel = chain.conditional_series(beta, 0, x, true).unwrap();
            let ns = chain.conditional_series(beta, 0, x, false).unwrap();
            for i in 1..=20 {
                let t = 0.25 * i as f64;
                let k = DynamicsKernels::compute(x as i64, t, &p, &q).unwrap();
                worst[slot][0] = worst[slot][0].max((k.selective().unwrap() - sel.value(t)).abs());
                worst[slot][1] = worst[slot][1].max((k.nonselective() - ns.value(t)).abs());
            }
        }
    }
    for mode in 0..2 {
        let errors: Vec<f64> = worst.iter().map(|w| w[mode]).collect();
        assert!(errors[2] <= 0.06, "{errors:?}");
        assert!(non_increasing(&errors, 1e-3), "{errors:?}");
    }
}

#[test]
fn wave_profile_matches_single_excitation_sector() {
    let (n, m, lambda, t) = (401usize, 200usize, 0.8, 25.0);
    let evolved = single_excitation_evolution(n, lambda, m, t).unwrap();
    let profile = wave_profile(m as i64, t, lambda, DEFAULT_MIN_MASS).unwrap();
    let worst = evolved
        .iter()
        .enumerate()
        .map(|(l, z)| (z.norm() - profile.amplitude(l as i64).abs()).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst}");
}
