use num_complex::Complex64;
use platoon_wave::lti::log_grid;
use platoon_wave::sim::chain_state_space;
use platoon_wave::wave::{
    g1_cf_approx, g1_exact, g1_fir, recurse_value, ExactWave, VehicleGains, WaveTransfer,
};
use platoon_wave::Error;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

fn gains() -> impl Strategy<Value = VehicleGains> {
    (0.5..10.0f64, 0.5..10.0f64, 0.5..10.0f64).prop_map(|(kp, ki, xi)| VehicleGains { kp, ki, xi })
}

fn axis_point() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64).prop_map(|e| Complex64::new(0.0, 10f64.powf(e)))
}

proptest! {
    #[test]
    fn quadratic_residual_and_reciprocity(g in gains(), s in axis_point()) {
        let alpha = g.alpha().unwrap();
        let a = alpha.eval(s).unwrap();
        let g1 = g1_exact(a);
        prop_assert!((g1 * g1 - a * g1 + 1.0).norm() < 1e-10);
        prop_assert!((g1 * (a - g1) - 1.0).norm() < 1e-10);
    }

    #[test]
    fn exact_wave_is_contractive(g in gains(), s in axis_point()) {
        let w = ExactWave::new(g.alpha().unwrap());
        prop_assert!(w.g1(s).unwrap().norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn approximant_is_first_follower_of_chain(g in gains(), l in 1usize..=4, s in axis_point()) {
        let alpha = g.alpha().unwrap();
        let chain = chain_state_space(&g, l, 1).unwrap().eval_at(s).unwrap();
        let cf = recurse_value(alpha.eval(s).unwrap(), l);
        let rational = g1_cf_approx(&alpha, l).unwrap().g1(s).unwrap();
        prop_assert!((chain - cf).norm() <= 1e-9 * chain.norm().max(1e-12));
        prop_assert!((rational - cf).norm() <= 1e-9 * cf.norm().max(1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn fir_taps_start_at_zero_and_are_summable(g in gains(), fs in 20.0..200.0f64) {
        let approx = g1_cf_approx(&g.alpha().unwrap(), 10).unwrap();
        let fir = match g1_fir(&approx, fs, 10.0) {
            Ok(f) => f,
            Err(Error::UnstablePoles { .. }) => return Err(TestCaseError::reject("unstable chain")),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let taps = fir.taps();
        prop_assert_eq!(taps.len(), (10.0 * fs + 1e-9).floor() as usize + 1);
        let l1: f64 = taps.iter().map(|t| t.abs()).sum();
        prop_assert!(l1.is_finite());
        let peak = taps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(k, _)| k)
            .unwrap();
        prop_assert!(peak > 0);
        prop_assert!(taps[0].abs() <= 1e-12);
    }
}

#[test]
fn approximant_error_shrinks_at_high_frequency() {
    // above the resonant band the continued fraction converges quickly
    let alpha = VehicleGains::default().alpha().unwrap();
    let exact = ExactWave::new(alpha.clone());
    let approx = g1_cf_approx(&alpha, 20).unwrap();
    for w in log_grid(2.0, 1e2, 30).unwrap() {
        let s = Complex64::new(0.0, w);
        assert!(
            (approx.g1(s).unwrap() - exact.g1(s).unwrap()).norm() < 1e-6,
            "omega {w}"
        );
    }
}
