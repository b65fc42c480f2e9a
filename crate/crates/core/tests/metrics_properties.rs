use platoon_wave::harness::{mse_velocity, settling_time};
use platoon_wave::sim::{PlatoonState, SimulationTrace};
use proptest::prelude::*;

fn trace_from(rows: &[Vec<f64>], v_ref: f64) -> SimulationTrace {
    let n = rows[0].len();
    let mut trace = SimulationTrace::new(n - 1);
    for (k, v) in rows.iter().enumerate() {
        let state = PlatoonState {
            x: vec![0.0; n],
            v: v.clone(),
            z: vec![0.0; n],
        };
        trace.push_sample(k as f64 * 0.1, &state, v_ref, 1.0, (0.0, 0.0));
    }
    trace
}

/// Velocity rows that relax towards `v_ref` with random perturbations.
fn velocity_rows() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..8, 2usize..60).prop_flat_map(|(n, len)| {
        prop::collection::vec(prop::collection::vec(-1.0..1.0f64, n), len).prop_map(|rows| {
            let len = rows.len() as f64;
            rows.into_iter()
                .enumerate()
                .map(|(k, r)| {
                    let decay = (-5.0 * k as f64 / len).exp();
                    r.into_iter().map(|e| 1.0 + decay * e).collect()
                })
                .collect()
        })
    })
}

proptest! {
    #[test]
    fn mse_is_invariant_under_vehicle_permutation(
        (rows, perm) in velocity_rows().prop_flat_map(|rows| {
            let n = rows[0].len();
            (Just(rows), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        })
    ) {
        let permuted: Vec<Vec<f64>> = rows.iter().map(|r| perm.iter().map(|&j| r[j]).collect()).collect();
        let a = mse_velocity(&trace_from(&rows, 1.0)).unwrap();
        let b = mse_velocity(&trace_from(&permuted, 1.0)).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
    }

    #[test]
    fn wider_band_never_settles_later(rows in velocity_rows(), band in 0.005..0.3f64) {
        let trace = trace_from(&rows, 1.0);
        let narrow = settling_time(&trace, 1.0, band).unwrap();
        let wide = settling_time(&trace, 1.0, 2.0 * band).unwrap();
        match (narrow, wide) {
            (Some(n), Some(w)) => prop_assert!(w <= n),
            (None, _) => {}
            (Some(_), None) => prop_assert!(false, "narrow band settled, wide did not"),
        }
    }
}

#[test]
fn one_vehicle_off_by_one_gives_half() {
    let rows = vec![vec![1.0, 0.0]; 10];
    assert_eq!(mse_velocity(&trace_from(&rows, 1.0)).unwrap(), 0.5);
}
