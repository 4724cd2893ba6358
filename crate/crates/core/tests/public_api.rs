use gravdec_core::composite::{d_min, pairwise_gradient_3d, Constituent, MassDistribution, SuperpositionAxis};
use gravdec_core::constants::HBAR;
use gravdec_core::ktm::{
    decoherence_coefficient, force_gradient, min_decoherence_rate, optimal_noise, PairChannelParams,
};
use gravdec_core::Error;
use proptest::prelude::*;

#[test]
fn two_points_on_axis_match_the_pair_channel() {
    let (m1, m2, d, dx) = (1e-3, 2.0, 0.3, 1e-6);
    let body = MassDistribution::PointSet(vec![Constituent::new(m1, [0.0; 3]).unwrap()]);
    let source = MassDistribution::PointSourceList(vec![Constituent::new(m2, [0.0, 0.0, d]).unwrap()]);
    let axis = SuperpositionAxis::along([0.0, 0.0, 1.0], dx).unwrap();
    let composite = d_min(&body, &source, &axis).unwrap();
    let pair = min_decoherence_rate(force_gradient(m1, m2, d).unwrap(), dx).unwrap();
    assert!((composite - pair.coefficient).abs() / pair.coefficient < 1e-12);
}

#[test]
fn invalid_inputs_are_errors() {
    assert!(matches!(force_gradient(1.0, 1.0, 0.0), Err(Error::Domain { .. })));
    assert!(PairChannelParams::new(1.0, 1.0, 1.0, -1.0).is_err());
    assert!(min_decoherence_rate(-1.0, 1.0).is_err());
}

proptest! {
    #[test]
    fn optimal_noise_minimises(k in 1e-12f64..1e3, f in 0.01f64..100.0) {
        let d = optimal_noise(k).unwrap();
        let best = decoherence_coefficient(k, d).unwrap();
        prop_assert!((best - k / (2.0 * HBAR)).abs() <= 1e-12 * best);
        prop_assert!(decoherence_coefficient(k, d * f).unwrap() >= best * (1.0 - 1e-12));
    }

    #[test]
    fn transverse_gradient_is_minus_half(m in 1e-3f64..1e3, d in 1e-3f64..10.0) {
        let par = pairwise_gradient_3d(m, m, d, 0.0).unwrap();
        let perp = pairwise_gradient_3d(m, m, 0.0, d).unwrap();
        prop_assert!((perp + 0.5 * par).abs() <= 1e-12 * par.abs());
    }

    #[test]
    fn rate_is_quadratic_in_dx(k in 1e-9f64..1.0, dx in 1e-9f64..1.0, s in 0.1f64..10.0) {
        let a = min_decoherence_rate(k, dx).unwrap().gamma;
        let b = min_decoherence_rate(k, dx * s).unwrap().gamma;
        prop_assert!((b - a * s * s).abs() <= 1e-12 * b);
    }
}
