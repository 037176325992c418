use proptest::prelude::*;
use rao_fusion::fusion::psi_k0;
use rao_fusion::noise::{NoiseFamily, NoiseModel};
use rao_fusion::quantizer::{default_interval, delta, objective_curve, optimize_threshold, psi0, SCAN_POINTS};
use rao_fusion::scene::{Attenuation, Point, Region, Scene};

fn family_strategy() -> impl Strategy<Value = NoiseModel> {
    (0usize..4, 0.2f64..3.0, 0.3f64..=2.0).prop_map(|(f, scale, shape)| match f {
        0 => NoiseModel::gaussian(scale).unwrap(),
        1 => NoiseModel::laplace(scale).unwrap(),
        2 => NoiseModel::generalized_gaussian(scale, shape).unwrap(),
        _ => NoiseModel::cauchy(scale).unwrap(),
    })
}

#[test]
fn documented_values() {
    assert_eq!(delta(0.0).unwrap(), 0.0);
    assert!((delta(0.1).unwrap() - 0.140_625).abs() < 1e-15);
    assert!(delta(0.2).unwrap() > delta(0.1).unwrap());
    assert!(delta(0.5).is_err());

    let g = NoiseModel::gaussian(1.0).unwrap();
    assert!((psi0(0.0, &g, 0.0).unwrap() - std::f64::consts::FRAC_2_PI).abs() < 1e-15);
    let l = NoiseModel::unit_variance(NoiseFamily::Laplace, None).unwrap();
    assert!((psi0(0.0, &l, 0.0).unwrap() - 2.0).abs() < 1e-14);
}

#[test]
fn zero_threshold_is_optimal() {
    let cases = [
        NoiseModel::gaussian(1.0).unwrap(),
        NoiseModel::unit_variance(NoiseFamily::Laplace, None).unwrap(),
        NoiseModel::cauchy(1.0).unwrap(),
        NoiseModel::generalized_gaussian(1.0, 0.8).unwrap(),
        NoiseModel::generalized_gaussian(1.0, 1.6).unwrap(),
    ];
    for m in cases {
        for pe in [0.0, 0.1, 0.3, 0.45] {
            let d = optimize_threshold(&m, pe, default_interval(&m), 1e-8).unwrap();
            assert!(d.tau_star.abs() < 1e-6, "{m:?}, pe {pe}: {}", d.tau_star);
        }
    }
}

#[test]
fn objective_matches_fisher_weight() {
    // ψ_0 of the design problem is the per-sensor information weight at θ = 0.
    for m in [
        NoiseModel::gaussian(0.7).unwrap(),
        NoiseModel::laplace(1.3).unwrap(),
        NoiseModel::cauchy(0.5).unwrap(),
    ] {
        for pe in [0.0, 0.15] {
            for tau in [-1.0, 0.0, 0.6] {
                let scene = Scene::homogeneous(
                    vec![Point::xy(0.5, 0.5)],
                    m,
                    tau,
                    pe,
                    Attenuation::new(0.2, 4.0).unwrap(),
                    Region::unit(2),
                )
                .unwrap();
                let weight = psi_k0(0, &scene);
                let obj = psi0(tau, &m, pe).unwrap();
                assert!((weight - obj).abs() < 1e-12 * obj.max(1.0), "{weight} vs {obj}");
            }
        }
    }
}

proptest! {
    #[test]
    fn objective_symmetric_nonnegative(m in family_strategy(), tau in -20.0f64..20.0, pe in 0.0f64..0.49) {
        let a = psi0(tau, &m, pe).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert!((a - psi0(-tau, &m, pe).unwrap()).abs() <= 1e-14 * a.max(1.0));
    }

    #[test]
    fn information_decreases_with_channel_errors(m in family_strategy(), tau in -3.0f64..3.0, pe in 0.0f64..0.45, dpe in 0.001f64..0.04) {
        let weight = |pe: f64| psi0(tau, &m, pe).unwrap();
        prop_assert!(weight(pe + dpe) < weight(pe));
    }

    #[test]
    fn optimum_dominates_every_probe(m in family_strategy(), pe in 0.0f64..0.45) {
        let interval = default_interval(&m);
        let d = optimize_threshold(&m, pe, interval, 1e-8).unwrap();
        prop_assert!(d.tau_star >= interval.0 && d.tau_star <= interval.1);
        for (_, v) in objective_curve(&m, pe, interval, SCAN_POINTS).unwrap() {
            prop_assert!(d.objective_at_star >= v - 1e-8);
        }
    }
}

#[test]
fn objective_vanishes_far_out() {
    for m in [
        NoiseModel::gaussian(1.0).unwrap(),
        NoiseModel::laplace(1.0).unwrap(),
        NoiseModel::generalized_gaussian(1.0, 0.5).unwrap(),
        NoiseModel::cauchy(1.0).unwrap(),
    ] {
        for pe in [0.0, 0.2] {
            let near = psi0(0.0, &m, pe).unwrap();
            let far = psi0(1e4, &m, pe).unwrap();
            assert!(far < 1e-6 * near, "{m:?}: {far}");
        }
    }
}
