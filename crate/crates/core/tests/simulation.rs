use std::fs;

use platoon_wave::boundary::Variant;
use platoon_wave::harness::{
    acceleration_duration, noise_study, settling_time, sweep, Horizon, NoiseStudy, SweepOptions,
    SETTLING_BAND,
};
use platoon_wave::par::ExecMode;
use platoon_wave::sim::{run_scenario, Command, PlatoonConfig, ScenarioSpec};

fn cfg(n: usize) -> PlatoonConfig {
    PlatoonConfig {
        n,
        ..Default::default()
    }
}

fn write_trace(cfg: &PlatoonConfig, sc: &ScenarioSpec, path: &std::path::Path) {
    let trace = run_scenario(cfg, sc).unwrap();
    trace.write_csv(fs::File::create(path).unwrap()).unwrap();
}

#[test]
fn same_seed_gives_byte_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let sc = ScenarioSpec::acceleration(Variant::TwoSided, 1.0, 20.0).with_noise(1.0, 42);
    let (a, b, c) = (
        dir.path().join("a.csv"),
        dir.path().join("b.csv"),
        dir.path().join("c.csv"),
    );
    write_trace(&cfg(6), &sc, &a);
    write_trace(&cfg(6), &sc, &b);
    write_trace(&cfg(6), &sc.clone().with_noise(1.0, 43), &c);
    let (a, b, c) = (
        fs::read(a).unwrap(),
        fs::read(b).unwrap(),
        fs::read(c).unwrap(),
    );
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn halving_dt_barely_moves_final_positions() {
    for variant in Variant::ALL {
        let sc = ScenarioSpec::acceleration(variant, 1.0, 30.0);
        let coarse = run_scenario(&cfg(10), &sc).unwrap();
        let fine_cfg = PlatoonConfig {
            dt: 0.005,
            ..cfg(10)
        };
        let fine = run_scenario(&fine_cfg, &sc).unwrap();
        let (a, b) = (coarse.final_state.unwrap(), fine.final_state.unwrap());
        for (p, q) in a.x.iter().zip(&b.x) {
            assert!((p - q).abs() < 1e-4, "{variant}: {p} vs {q}");
        }
    }
}

#[test]
fn every_variant_reaches_the_reference_velocity() {
    for vehicles in [5, 10] {
        for variant in Variant::ALL {
            let duration = acceleration_duration(variant, vehicles);
            let sc = ScenarioSpec::acceleration(variant, 1.0, duration).with_record_interval(0.1);
            let trace = run_scenario(&cfg(vehicles - 1), &sc).unwrap();
            assert!(
                !trace.collided,
                "{variant} with {vehicles} vehicles collided"
            );
            let t = settling_time(&trace, 1.0, SETTLING_BAND).unwrap();
            assert!(
                t.is_some(),
                "{variant} with {vehicles} vehicles never settled"
            );
        }
    }
}

#[test]
fn spacing_change_reaches_new_reference() {
    for variant in Variant::ALL {
        let duration = if variant == Variant::None {
            400.0
        } else {
            150.0
        };
        let sc = ScenarioSpec::new(variant, duration).with_event(0.0, Command::SetDRef(2.0));
        let trace = run_scenario(&cfg(5), &sc).unwrap();
        let last = trace.len() - 1;
        for gap in 0..5 {
            let d = trace.distance(last, gap);
            assert!((d - 2.0).abs() < 2e-2, "{variant}: gap {gap} is {d}");
        }
        assert!(trace.velocities_at(last).iter().all(|v| v.abs() < 1e-2));
    }
}

#[test]
fn parallel_and_sequential_sweeps_agree() {
    let base = PlatoonConfig::default();
    let mut opts = SweepOptions {
        horizon: Horizon::Fixed(60.0),
        ..Default::default()
    };
    let par = sweep(&base, &[4, 6], &Variant::ALL, &opts).unwrap();
    opts.mode = ExecMode::Sequential;
    let seq = sweep(&base, &[4, 6], &Variant::ALL, &opts).unwrap();
    assert_eq!(par, seq);

    let study = NoiseStudy {
        vehicles: 5,
        duration: 20.0,
        sigma2: 1.0,
        seeds: vec![1, 2],
    };
    let a = noise_study(&base, &study, &Variant::ALL, ExecMode::Parallel).unwrap();
    let b = noise_study(&base, &study, &Variant::ALL, ExecMode::Sequential).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sweep_reports_one_row_per_cell() {
    let opts = SweepOptions {
        horizon: Horizon::Fixed(30.0),
        ..Default::default()
    };
    let r = sweep(
        &PlatoonConfig::default(),
        &[3, 5, 7],
        &[Variant::Front, Variant::None],
        &opts,
    )
    .unwrap();
    assert_eq!(r.rows.len(), 6);
    for size in [3, 5, 7] {
        for v in [Variant::Front, Variant::None] {
            assert!(r.row(size, v).is_some());
        }
    }
    assert_eq!(r.fits.len(), 2);
}
