use std::path::PathBuf;

use epdiff_core::integrate::{run, suggested_dt, InitialCondition, ModelKind, RunConfig};
use epdiff_core::Error;

fn sw_config(model: ModelKind) -> RunConfig {
    RunConfig {
        model,
        sizes: vec![64],
        lengths: vec![2.0 * std::f64::consts::PI],
        alpha: None,
        nu: None,
        g: 9.81,
        dt: 0.005,
        t_end: 5.0,
        output_every: 100,
        ic: InitialCondition::RandomSmooth { amplitude: 0.01 },
        seed: 3,
        dealias: true,
        output_dir: PathBuf::from("unused"),
    }
}

fn epdiff_config() -> RunConfig {
    RunConfig {
        model: ModelKind::EpdiffAdvective,
        sizes: vec![128],
        lengths: vec![2.0 * std::f64::consts::PI],
        alpha: Some(0.5),
        nu: Some(1.0),
        g: 9.81,
        dt: 0.005,
        t_end: 5.0,
        output_every: 100,
        ic: InitialCondition::RandomSmooth { amplitude: 0.1 },
        seed: 5,
        dealias: true,
        output_dir: PathBuf::from("unused"),
    }
}

#[test]
fn zero_duration_gives_one_record() {
    let mut c = sw_config(ModelKind::SwPrimitive);
    c.t_end = 0.0;
    let out = run(&c).unwrap();
    assert_eq!(out.records.len(), 1);
    assert_eq!(out.snapshots.len(), 1);
    assert_eq!(out.records[0].step, 0);
}

#[test]
fn output_cadence_includes_the_final_step() {
    let mut c = sw_config(ModelKind::SwMomentum);
    (c.t_end, c.dt, c.output_every) = (0.105, 0.01, 4);
    let out = run(&c).unwrap();
    let steps: Vec<usize> = out.records.iter().map(|r| r.step).collect();
    assert_eq!(steps, vec![0, 4, 8, 11]);
    assert_eq!(out.records.last().unwrap().t, 0.105);
    assert!(out.records.windows(2).all(|w| w[0].t < w[1].t));
}

#[test]
fn repeated_runs_are_identical() {
    let c = epdiff_config();
    let (a, b) = (run(&c).unwrap(), run(&c).unwrap());
    assert_eq!(a, b);
}

#[test]
fn shallow_water_conserves_mass_and_energy() {
    for model in [ModelKind::SwPrimitive, ModelKind::SwMomentum] {
        let c = sw_config(model);
        assert!(c.dt < suggested_dt(&c).unwrap());
        assert_eq!(c.step_count(), 1000);
        let out = run(&c).unwrap();
        let (first, last) = (&out.records[0], out.records.last().unwrap());
        let mass = ((last.mass.unwrap() - first.mass.unwrap()) / first.mass.unwrap()).abs();
        let energy = ((last.hamiltonian - first.hamiltonian) / first.hamiltonian).abs();
        assert!(mass < 1e-12, "{model}: mass drift {mass:e}");
        assert!(energy < 1e-8, "{model}: energy drift {energy:e}");
    }
}

#[test]
fn epdiff_conserves_momentum_and_energy() {
    let c = epdiff_config();
    let out = run(&c).unwrap();
    let (first, last) = (&out.records[0], out.records.last().unwrap());
    let momentum = (last.momentum[0] - first.momentum[0]).abs();
    let energy = ((last.hamiltonian - first.hamiltonian) / first.hamiltonian).abs();
    assert!(momentum < 1e-10, "momentum drift {momentum:e}");
    assert!(energy < 1e-8, "energy drift {energy:e}");
}

#[test]
fn epdiff_2d_forms_conserve_momentum() {
    for model in [ModelKind::EpdiffAdvective, ModelKind::EpdiffCurl] {
        let mut c = epdiff_config();
        c.model = model;
        (c.sizes, c.lengths) = (vec![32, 32], vec![2.0 * std::f64::consts::PI; 2]);
        (c.t_end, c.dt) = (1.0, 0.01);
        let out = run(&c).unwrap();
        let (first, last) = (&out.records[0], out.records.last().unwrap());
        for i in 0..2 {
            assert!((last.momentum[i] - first.momentum[i]).abs() < 1e-10);
        }
        assert!(((last.hamiltonian - first.hamiltonian) / first.hamiltonian).abs() < 1e-6);
    }
}

#[test]
fn halving_dt_gives_fourth_order_convergence() {
    let field = |dt: f64| {
        let mut c = sw_config(ModelKind::SwPrimitive);
        (c.dt, c.t_end, c.output_every) = (dt, 0.5, 1000);
        let out = run(&c).unwrap();
        out.snapshots.last().unwrap().fields[1].1.clone()
    };
    let reference = field(0.0025 / 4.0);
    let e1 = field(0.01).max_diff(&reference);
    let e2 = field(0.005).max_diff(&reference);
    let ratio = e1 / e2;
    assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn primitive_and_momentum_runs_agree() {
    let velocity = |model| {
        let mut c = sw_config(model);
        (c.t_end, c.dt) = (1.0, 0.005);
        let out = run(&c).unwrap();
        out.snapshots.last().unwrap().fields[0].1.clone()
    };
    let diff = velocity(ModelKind::SwPrimitive).max_diff(&velocity(ModelKind::SwMomentum));
    assert!(diff < 1e-6, "{diff:e}");
}

#[test]
fn unstable_step_aborts_with_the_step_index() {
    let mut c = sw_config(ModelKind::SwMomentum);
    c.dt = 100.0 * suggested_dt(&c).unwrap();
    c.t_end = 1000.0 * c.dt;
    match run(&c) {
        Err(Error::NonFiniteState { step }) | Err(Error::Aborted { step, .. }) => {
            assert!(step >= 1)
        }
        other => panic!("expected an abort, got {other:?}"),
    }
}

#[test]
fn peakon_travels_at_its_amplitude() {
    let c = RunConfig {
        model: ModelKind::EpdiffAdvective,
        sizes: vec![1024],
        lengths: vec![20.0],
        alpha: Some(0.2),
        nu: Some(1.0),
        g: 9.81,
        dt: 0.002,
        t_end: 2.0,
        output_every: 50,
        ic: InitialCondition::Peakon {
            amplitude: 1.0,
            width: 0.2,
            center: 5.0,
        },
        seed: 0,
        dealias: true,
        output_dir: PathBuf::from("unused"),
    };
    let out = run(&c).unwrap();
    let crest: Vec<(f64, f64)> = out
        .snapshots
        .iter()
        .map(|s| (s.t, crest_position(s.fields[1].1.values(), 20.0)))
        .collect();
    let speed = fit_slope(&crest);
    assert!((speed - 1.0).abs() < 0.02, "speed {speed}");
}

/// Parabolic interpolation around the discrete maximum.
fn crest_position(u: &[f64], length: f64) -> f64 {
    let n = u.len();
    let i = (0..n).max_by(|&a, &b| u[a].total_cmp(&u[b])).unwrap();
    let (l, c, r) = (u[(i + n - 1) % n], u[i], u[(i + 1) % n]);
    let offset = 0.5 * (l - r) / (l - 2.0 * c + r);
    (i as f64 + offset) * length / n as f64
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mt, mx) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (t, x)| (a + t / n, b + x / n));
    let num: f64 = points.iter().map(|(t, x)| (t - mt) * (x - mx)).sum();
    let den: f64 = points.iter().map(|(t, _)| (t - mt).powi(2)).sum();
    num / den
}
