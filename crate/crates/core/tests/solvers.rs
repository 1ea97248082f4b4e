use gsmm_core::problems::{DroParams, DroProblem, FeatureMatrix, NoiseModel, SyntheticProblem};
use gsmm_core::rng::select_iterate;
use gsmm_core::{run, Algorithm, EvalMode, HyperParams, MinimaxProblem, NullRecorder, RunConfig, RunRecord};

fn small_dro() -> DroProblem {
    let rows = 12;
    let data: Vec<f64> = (0..rows * 3).map(|k| ((k * 37 % 11) as f64 - 5.0) / 4.0).collect();
    let labels: Vec<f64> = (0..rows).map(|i| if i % 3 == 0 { -1.0 } else { 1.0 }).collect();
    DroProblem::new(
        FeatureMatrix::dense(rows, 3, data).unwrap(),
        labels,
        DroParams::default(),
    )
    .unwrap()
}

fn hyper(t_max: usize) -> HyperParams {
    HyperParams {
        eta_x: 0.05,
        eta_y: 0.05,
        beta: 0.9,
        bx: 2,
        by: 2,
        t_max,
    }
}

#[test]
fn single_sample_dro_at_origin_has_loss_log2_minus_penalty() {
    let p = DroProblem::new(
        FeatureMatrix::dense(1, 2, vec![0.3, -1.0]).unwrap(),
        vec![1.0],
        DroParams::default(),
    )
    .unwrap();
    assert!((p.loss(&[0.0, 0.0], &[1.0]).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
}

#[test]
fn every_algorithm_keeps_the_dual_iterate_feasible() {
    let p = small_dro();
    for algo in Algorithm::ALL {
        let mut rows: Vec<RunRecord> = Vec::new();
        let out = run(
            &p,
            algo,
            &RunConfig::new(hyper(300), 3),
            &[0.0; 3],
            &p.dual_domain().center(),
            &mut rows,
        )
        .unwrap();
        assert!(out.abort.is_none());
        let y = &out.final_state.y;
        assert!(y.iter().all(|v| *v >= 0.0));
        assert!((y.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(rows.len(), 300);
        assert!(rows
            .iter()
            .all(|r| r.tracking_error.is_finite() && r.grad_phi_norm.is_finite()));
    }
}

#[test]
fn runs_are_reproducible_and_record_every_subsamples() {
    let p = small_dro();
    let y0 = p.dual_domain().center();
    let mut cfg = RunConfig::new(hyper(100), 9);
    let mut a: Vec<RunRecord> = Vec::new();
    let mut b: Vec<RunRecord> = Vec::new();
    run(&p, Algorithm::NsgdaM, &cfg, &[0.1; 3], &y0, &mut a).unwrap();
    run(&p, Algorithm::NsgdaM, &cfg, &[0.1; 3], &y0, &mut b).unwrap();
    assert!(a.iter().zip(&b).all(|(r, s)| r.bit_eq(s)));
    cfg.record_every = 10;
    let mut c: Vec<RunRecord> = Vec::new();
    run(&p, Algorithm::NsgdaM, &cfg, &[0.1; 3], &y0, &mut c).unwrap();
    assert_eq!(c.len(), 10);
    for (k, r) in c.iter().enumerate() {
        assert_eq!(r.t, 10 * k);
        assert!(r.bit_eq(&a[10 * k]));
    }
}

#[test]
fn x_bar_is_the_seeded_uniform_iterate() {
    let p = small_dro();
    let cfg = RunConfig::new(hyper(50), 4);
    let out = run(
        &p,
        Algorithm::Nsgda,
        &cfg,
        &[0.0; 3],
        &p.dual_domain().center(),
        &mut NullRecorder,
    )
    .unwrap();
    assert_eq!(out.x_bar_index, select_iterate(4, 50));
    assert!((1..=50).contains(&out.x_bar_index));
    assert!(out.x_bar.is_some());
}

#[test]
fn noiseless_synthetic_descends() {
    let p = SyntheticProblem::identity(4, 1.0, 0.1).unwrap();
    let hp = HyperParams {
        eta_x: 0.01,
        eta_y: 0.5,
        beta: 0.5,
        bx: 1,
        by: 1,
        t_max: 2000,
    };
    let mut rows: Vec<RunRecord> = Vec::new();
    run(
        &p,
        Algorithm::NsgdaM,
        &RunConfig::new(hp, 0),
        &[1.0; 4],
        &[0.0; 4],
        &mut rows,
    )
    .unwrap();
    assert!(rows.last().unwrap().grad_phi_norm < 0.1 * rows[0].grad_phi_norm);
}

#[test]
fn approximate_evaluation_tracks_the_exact_one() {
    let p = SyntheticProblem::identity(3, 2.0, 0.1)
        .unwrap()
        .with_noise(
            NoiseModel::Bounded {
                radius_x: 0.5,
                radius_y: 0.5,
            },
            16,
            1,
        )
        .unwrap();
    let mut exact_cfg = RunConfig::new(hyper(200), 2);
    let mut approx_cfg = exact_cfg;
    approx_cfg.eval = EvalMode::Approx {
        tol: 1e-12,
        max_iters: 10_000,
        step: None,
    };
    exact_cfg.record_every = 20;
    approx_cfg.record_every = 20;
    let (mut e, mut a): (Vec<RunRecord>, Vec<RunRecord>) = (Vec::new(), Vec::new());
    run(&p, Algorithm::NsgdaM, &exact_cfg, &[1.0; 3], &[0.0; 3], &mut e).unwrap();
    run(&p, Algorithm::NsgdaM, &approx_cfg, &[1.0; 3], &[0.0; 3], &mut a).unwrap();
    for (r, s) in e.iter().zip(&a) {
        assert!((r.grad_phi_norm - s.grad_phi_norm).abs() <= 1e-8 * (1.0 + r.grad_phi_norm));
        assert!((r.tracking_error - s.tracking_error).abs() <= 1e-8 * (1.0 + r.tracking_error));
    }
}

#[test]
fn invalid_setups_are_rejected_before_running() {
    let p = small_dro();
    let y0 = p.dual_domain().center();
    let mut bad = hyper(10);
    bad.eta_x = -1.0;
    assert!(run(
        &p,
        Algorithm::Sgda,
        &RunConfig::new(bad, 0),
        &[0.0; 3],
        &y0,
        &mut NullRecorder
    )
    .is_err());
    assert!(run(
        &p,
        Algorithm::Sgda,
        &RunConfig::new(hyper(10), 0),
        &[0.0; 2],
        &y0,
        &mut NullRecorder
    )
    .is_err());
    assert!(run(
        &p,
        Algorithm::Sgda,
        &RunConfig::new(hyper(10), 0),
        &[0.0; 3],
        &[1.0; 12],
        &mut NullRecorder
    )
    .is_err());
}
