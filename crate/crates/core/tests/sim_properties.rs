use platoon_wave::sim::{
    build_platoon, EndCommands, EndInput, EndServo, Integrator, PlatoonConfig, PlatoonState,
    Segment,
};
use proptest::prelude::*;

fn perturbed(n: usize) -> impl Strategy<Value = PlatoonState> {
    (
        prop::collection::vec(-0.5..0.5f64, n + 1),
        prop::collection::vec(-0.5..0.5f64, n + 1),
    )
        .prop_map(move |(dx, dv)| {
            let cfg = PlatoonConfig {
                n,
                ..Default::default()
            };
            let mut s = build_platoon(&cfg).unwrap();
            for i in 0..=n {
                s.x[i] += dx[i];
                s.v[i] += dv[i];
            }
            s
        })
}

fn run(cfg: &PlatoonConfig, mut s: PlatoonState, offset: f64, leader: &[f64]) -> PlatoonState {
    let mut integ = Integrator::new(s.len());
    for (k, w) in leader.windows(2).enumerate() {
        let t = k as f64 * cfg.dt;
        let ends = EndCommands {
            leader: Segment {
                t0: t,
                span: cfg.dt,
                from: w[0] + offset,
                to: w[1] + offset,
            },
            rear: EndInput::Follow { d_ref: cfg.d_ref0 },
        };
        integ.step(&mut s, cfg, &ends, &[], t, cfg.dt).unwrap();
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn shifting_positions_shifts_the_trajectory(
        s in perturbed(5),
        offset in -1e3..1e3f64,
        pi_servo in any::<bool>(),
        wiggle in prop::collection::vec(-0.2..0.2f64, 201),
    ) {
        let cfg = PlatoonConfig {
            n: 5,
            servo: if pi_servo { EndServo::Pi } else { EndServo::Ideal },
            ..Default::default()
        };
        let leader: Vec<f64> = wiggle.iter().map(|w| 5.0 + w).collect();
        let mut shifted = s.clone();
        shifted.x.iter_mut().for_each(|x| *x += offset);
        let a = run(&cfg, s, 0.0, &leader);
        let b = run(&cfg, shifted, offset, &leader);
        let tol = 1e-10 * (1.0 + offset.abs());
        for i in 0..a.len() {
            prop_assert!((b.x[i] - a.x[i] - offset).abs() <= tol);
            prop_assert!((b.v[i] - a.v[i]).abs() <= tol);
        }
    }

    #[test]
    fn equilibrium_holds_at_any_speed(v in -5.0..5.0f64, d in 0.5..5.0f64, n in 1usize..8) {
        let cfg = PlatoonConfig { n, v_ref: v, d_ref0: d, ..Default::default() };
        let x0 = n as f64 * d;
        let leader: Vec<f64> = (0..=100).map(|k| v * k as f64 * cfg.dt).collect();
        let s = build_platoon(&cfg).unwrap();
        let end = run(&cfg, s, x0, &leader);
        let t = 100.0 * cfg.dt;
        for i in 0..=n {
            prop_assert!((end.x[i] - (x0 - i as f64 * d + v * t)).abs() < 1e-9);
            prop_assert!((end.v[i] - v).abs() < 1e-9);
        }
    }
}
