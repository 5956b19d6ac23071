//! Acceptance suite: every release-gating property of the sampler stack,
//! one test per criterion, each printing a PASS line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::sync::Arc;
use std::time::{Duration, Instant};

use flowsmooth::{run_experiment, ExperimentConfig};
use flowsmooth_core::config::{Algorithm, CurvatureThreshold, PeekMode, SamplerConfig};
use flowsmooth_core::diagnostics::{
    endpoint_error, ensemble_moments, oscillation_energy, verify_call_budget,
};
use flowsmooth_core::fields::{
    exact_endpoint, reference_endpoint, FieldKind, GaussianRfField, LinearMatrixField,
    StiffTrackingField,
};
use flowsmooth_core::rng::GaussianSource;
use flowsmooth_core::samplers::{
    curvature, ema_update, estimate_peek_velocity, euler_step, look_ahead_step, momentum_step,
    peek_blend, run_sampler, scheduler_step, SamplerState,
};
use flowsmooth_core::schedules::{log_snr, lookback_decay, SnrSchedule};
use flowsmooth_core::velocity::FieldEvaluator;
use flowsmooth_core::{Grid64, State64, Trajectory64, VelocityFieldSpec};

const RF: SnrSchedule<f64> = SnrSchedule::RectifiedFlow;
const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

fn sv(values: &[f64]) -> State64 {
    State64::new(values.to_vec()).unwrap()
}

fn plain_record(model_calls: u64) -> flowsmooth_core::StepRecord<f64> {
    flowsmooth_core::StepRecord {
        kappa: None,
        accepted_full_step: None,
        gamma_t: None,
        model_calls,
    }
}

fn rotation_field() -> VelocityFieldSpec<f64> {
    VelocityFieldSpec::new(FieldKind::LinearMatrix(LinearMatrixField::rotation2(
        FRAC_PI_2,
    )))
}

fn max_state_dist(a: &Trajectory64, b: &Trajectory64) -> f64 {
    assert_eq!(a.states().len(), b.states().len());
    a.states()
        .iter()
        .zip(b.states())
        .map(|(x, y)| x.dist(y))
        .fold(0.0, f64::max)
}

fn assert_runtime(started: Instant, budget: Duration, criterion: &str) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "{criterion} exceeded its runtime budget: {elapsed:?} >= {budget:?}"
    );
}

#[test]
fn criterion_1_exact_euler_reductions() {
    let started = Instant::now();
    let field = rotation_field();
    let grid = Grid64::uniform(25).unwrap();
    let z0 = sv(&[1.0, 0.0]);
    let euler = run_sampler(&SamplerConfig::new(Algorithm::Euler), &field, &RF, &grid, &z0)
        .unwrap();
    assert_eq!(euler.states().len(), 26);

    let mut with_infinite_gate = SamplerConfig::new(Algorithm::LookAhead);
    with_infinite_gate.tau_curv = CurvatureThreshold::Infinite;

    let mut with_unit_gamma = SamplerConfig::new(Algorithm::LookAhead);
    with_unit_gamma.tau_curv = CurvatureThreshold::Finite(1e-300);
    with_unit_gamma.gamma_interp = 1.0;

    let mut with_zero_blend = SamplerConfig::new(Algorithm::LookBack);
    with_zero_blend.lambda_blend = 0.0;
    with_zero_blend.gamma_max = 0.9;

    let mut with_zero_beta = SamplerConfig::new(Algorithm::Momentum);
    with_zero_beta.beta1 = 0.0;

    for (name, config) in [
        ("look_ahead tau=inf", with_infinite_gate),
        ("look_ahead gamma=1", with_unit_gamma),
        ("look_back lambda=0", with_zero_blend),
        ("momentum beta1=0", with_zero_beta),
    ] {
        let traj = run_sampler(&config, &field, &RF, &grid, &z0).unwrap();
        let dist = max_state_dist(&traj, &euler);
        assert!(dist <= 1e-12, "{name}: max state distance {dist}");
    }

    assert_runtime(started, Duration::from_secs(1), "criterion 1");
    println!("criterion 1 (exact euler reductions): PASS");
}

#[test]
fn criterion_2_call_budget() {
    let started = Instant::now();
    let field = rotation_field();
    let z0 = sv(&[1.0, 0.0]);

    for n_steps in [1usize, 25, 200] {
        let grid = Grid64::uniform(n_steps).unwrap();
        for alg in [
            Algorithm::Euler,
            Algorithm::LookAhead,
            Algorithm::LookBack,
            Algorithm::Momentum,
        ] {
            let config = SamplerConfig::new(alg);
            let traj = run_sampler(&config, &field, &RF, &grid, &z0).unwrap();
            assert!(
                verify_call_budget(&traj, 1),
                "{alg} at K={n_steps}: expected exactly 1 call/step"
            );
            assert_eq!(traj.total_model_calls(), n_steps as u64);
        }

        let mut two_call = SamplerConfig::new(Algorithm::LookAhead);
        two_call.peek_mode = PeekMode::ModelEval;
        let traj = run_sampler(&two_call, &field, &RF, &grid, &z0).unwrap();
        assert!(verify_call_budget(&traj, 2));
        assert_eq!(traj.total_model_calls(), 2 * n_steps as u64);
    }

    assert_runtime(started, Duration::from_secs(1), "criterion 2");
    println!("criterion 2 (model-call budget): PASS");
}

#[test]
fn criterion_3_euler_convergence_order() {
    let started = Instant::now();
    let field = rotation_field();
    let z0 = sv(&[1.0, 0.0]);
    let oracle = exact_endpoint(field.kind(), &z0).unwrap();
    // Quarter turn backward sends (1, 0) to (0, −1).
    assert!(oracle.dist(&sv(&[0.0, -1.0])) < 1e-14);

    let config = SamplerConfig::new(Algorithm::Euler);
    let mut errors = Vec::new();
    for n_steps in [200usize, 400] {
        let grid = Grid64::uniform(n_steps).unwrap();
        let traj = run_sampler(&config, &field, &RF, &grid, &z0).unwrap();
        errors.push(endpoint_error(&traj, &oracle).unwrap());
    }
    let ratio = errors[0] / errors[1];
    assert!(
        (1.8..=2.2).contains(&ratio),
        "halving ratio {ratio} outside [1.8, 2.2]"
    );

    assert_runtime(started, Duration::from_secs(1), "criterion 3");
    println!("criterion 3 (first-order convergence, ratio {ratio:.4}): PASS");
}

#[test]
fn criterion_4_gaussian_transport() {
    let started = Instant::now();
    let field = VelocityFieldSpec::new(FieldKind::GaussianRf(
        GaussianRfField::new(2.0, 4).unwrap(),
    ));
    let grid = Grid64::uniform(200).unwrap();
    let config = SamplerConfig::new(Algorithm::Euler);

    let seed = 42u64;
    let endpoints: Vec<State64> = (0..512)
        .map(|i| {
            let z0: State64 = GaussianSource::substream(seed, i).state_vector(4);
            run_sampler(&config, &field, &RF, &grid, &z0)
                .unwrap()
                .final_state()
                .clone()
        })
        .collect();

    let (mean, std) = ensemble_moments(&endpoints).unwrap();
    for j in 0..4 {
        assert!(
            (1.8..=2.2).contains(&std[j]),
            "coordinate {j}: std {} outside [1.8, 2.2]",
            std[j]
        );
        assert!(
            mean[j].abs() < 0.2,
            "coordinate {j}: |mean| {} >= 0.2",
            mean[j].abs()
        );
    }

    assert_runtime(started, Duration::from_secs(5), "criterion 4");
    println!(
        "criterion 4 (gaussian transport, std {:?}): PASS",
        std.values()
    );
}

#[test]
fn criterion_5_look_back_smoothing_on_stiff_field() {
    let started = Instant::now();
    let field = VelocityFieldSpec::new(FieldKind::StiffTracking(
        StiffTrackingField::new(50.0, 2).unwrap(),
    ));
    let grid = Grid64::uniform(25).unwrap();
    let z0 = sv(&[2.0, 2.0]);

    let euler = run_sampler(&SamplerConfig::new(Algorithm::Euler), &field, &RF, &grid, &z0)
        .unwrap();
    let mut config = SamplerConfig::new(Algorithm::LookBack);
    config.lambda_blend = 0.1;
    config.gamma_max = 0.9;
    config.beta_steepness = 1.0;
    config.xi_star = 0.0;
    let look_back = run_sampler(&config, &field, &RF, &grid, &z0).unwrap();

    let energy_euler = oscillation_energy(&euler).unwrap();
    let energy_look_back = oscillation_energy(&look_back).unwrap();
    assert!(
        energy_look_back < energy_euler,
        "look_back energy {energy_look_back:e} not below euler energy {energy_euler:e} \
         at lambda = 0.1"
    );

    let reference = reference_endpoint(field.kind(), &z0, 100_000).unwrap();
    for (name, traj) in [("euler", &euler), ("look_back", &look_back)] {
        let err = endpoint_error(traj, &reference).unwrap();
        assert!(err.is_finite(), "{name} endpoint error is not finite");
    }

    assert_runtime(started, Duration::from_secs(1), "criterion 5");
    println!(
        "criterion 5 (stiff-field smoothing, energies euler {energy_euler:.3e} vs \
         look_back {energy_look_back:.3e}): PASS"
    );
}

#[test]
fn criterion_6_curvature_gate_activation() {
    let started = Instant::now();
    let field = rotation_field();
    let grid = Grid64::sigma_shift(25, 3.0).unwrap();
    let mut config = SamplerConfig::new(Algorithm::LookAhead);
    config.tau_curv = CurvatureThreshold::Finite(1.0);
    config.gamma_interp = 0.9;

    let traj = run_sampler(&config, &field, &RF, &grid, &sv(&[1.0, 0.0])).unwrap();
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    for record in traj.records() {
        let kappa = record.kappa.expect("look_ahead records carry kappa");
        assert!(kappa >= 0.0 && kappa.is_finite());
        match record.accepted_full_step.expect("gate decision recorded") {
            true => accepted += 1,
            false => rejected += 1,
        }
    }
    assert!(accepted >= 1, "no step was accepted");
    assert!(rejected >= 1, "no step was interpolated");

    assert_runtime(started, Duration::from_secs(1), "criterion 6");
    println!(
        "criterion 6 (gate activation, {accepted} accepted / {rejected} interpolated): PASS"
    );
}

#[test]
fn criterion_7_decay_schedule_properties() {
    let started = Instant::now();
    let (gamma_max, beta, xi_star) = (0.9, 1.0, 0.0);

    // 1000-point sweep: range containment and monotonicity in t.
    let mut previous = -1.0f64;
    for i in 0..1000 {
        let t = (i as f64 + 1.0) / 1001.0;
        let g = lookback_decay(&RF, t, gamma_max, beta, xi_star).unwrap();
        assert!((0.0..=gamma_max).contains(&g), "gamma out of range at t={t}");
        assert!(
            g >= previous - 1e-12,
            "gamma decreased in t at t={t}: {g} < {previous}"
        );
        previous = g;
    }

    // Limits at the clamp boundary.
    let at_zero = lookback_decay(&RF, 1e-6, gamma_max, beta, xi_star).unwrap();
    assert!(at_zero.abs() < 1e-6, "gamma({:e}) = {at_zero}", 1e-6);
    let at_one = lookback_decay(&RF, 1.0 - 1e-6, gamma_max, beta, xi_star).unwrap();
    assert!((at_one - gamma_max).abs() < 1e-6);

    // Midpoint value with defaults.
    let mid = lookback_decay(&RF, 0.5, gamma_max, beta, xi_star).unwrap();
    assert!((mid - 0.45).abs() <= 1e-12);

    assert_runtime(started, Duration::from_secs(1), "criterion 7");
    println!("criterion 7 (decay-schedule limits and monotonicity): PASS");
}

#[test]
fn criterion_8_byte_identical_reruns() {
    let started = Instant::now();
    let json = r#"{
        "field": {"name": "gaussian_rf", "s0": 2.0, "dim": 3},
        "grid": {"n_steps": 25, "kind": "sigma_shift", "shift": 3.0},
        "samplers": [
            {"algorithm": "euler"},
            {"algorithm": "look_ahead", "tau_curv": 1.0},
            {"algorithm": "look_back", "xi_star": 0.25},
            {"algorithm": "momentum"}
        ],
        "ensemble_size": 8,
        "seed": 20260808
    }"#;
    let config = ExperimentConfig::from_json(json).unwrap();
    let dir = tempfile::tempdir().unwrap();

    let first = run_experiment(&config, Some(&dir.path().join("first")), None).unwrap();
    let second = run_experiment(&config, Some(&dir.path().join("second")), None).unwrap();
    let bytes_first = std::fs::read(dir.path().join("first/summary.csv")).unwrap();
    let bytes_second = std::fs::read(dir.path().join("second/summary.csv")).unwrap();
    assert_eq!(bytes_first, bytes_second, "summary.csv differs across reruns");
    assert_eq!(first.summary_csv, second.summary_csv);

    assert_runtime(started, Duration::from_secs(5), "criterion 8");
    println!("criterion 8 (byte-identical reruns): PASS");
}

/// Every worked example value: exact where the arithmetic is exact,
/// 1e-12 otherwise.
#[test]
fn criterion_9_unit_level_examples() {
    let started = Instant::now();

    // --- time grids ---
    let g = Grid64::uniform(2).unwrap();
    assert_eq!(g.times(), &[1.0, 0.5, 0.0]);
    assert_eq!(g.deltas(), &[0.5, 0.5]);
    assert_eq!(g.step_sizes(), &[0.5, 0.5]);
    let g = Grid64::uniform(1).unwrap();
    assert_eq!(g.times(), &[1.0, 0.0]);
    assert_eq!(g.deltas(), &[1.0]);
    assert_eq!(g.step_sizes(), &[1.0]);
    let g = Grid64::sigma_shift(2, 3.0).unwrap();
    assert!((g.step_size(0) - 0.25).abs() <= 1e-12);
    assert!((g.step_size(1) - 0.75).abs() <= 1e-12);
    assert_eq!(g.deltas(), &[0.5, 0.5]);

    // --- field evaluation ---
    let rotation = VelocityFieldSpec::new(FieldKind::LinearMatrix(
        LinearMatrixField::new(vec![vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap(),
    ));
    let mut eval = FieldEvaluator::new(&rotation);
    assert_eq!(eval.evaluate(&sv(&[1.0, 0.0]), 0.3).unwrap(), sv(&[0.0, 1.0]));
    assert_eq!(eval.calls(), 1);
    let gaussian = VelocityFieldSpec::new(FieldKind::GaussianRf(
        GaussianRfField::new(1.3, 2).unwrap(),
    ));
    let mut eval = FieldEvaluator::new(&gaussian);
    assert_eq!(
        eval.evaluate(&State64::zeros(2), 0.7).unwrap(),
        State64::zeros(2)
    );

    // --- log-SNR and decay ---
    assert_eq!(log_snr(&RF, 0.5).unwrap(), 0.0);
    assert!((log_snr(&RF, 0.1).unwrap() - 2.0 * 9.0f64.ln()).abs() <= 1e-12);
    assert!((log_snr(&RF, 0.9).unwrap() + 2.0 * 9.0f64.ln()).abs() <= 1e-12);
    assert!((lookback_decay(&RF, 0.5, 0.9, 1.0, 0.0).unwrap() - 0.45).abs() <= 1e-12);
    assert!(lookback_decay(&RF, 1e-6, 0.9, 1.0, 0.0).unwrap() < 1e-10);
    assert_eq!(lookback_decay(&RF, 0.37, 0.0, 1.0, 0.0).unwrap(), 0.0);

    // --- euler and scheduler steps ---
    let zero_field = VelocityFieldSpec::new(FieldKind::Custom {
        dim: 1,
        func: Arc::new(|_z, _t| State64::zeros(1)),
    });
    let mut eval = FieldEvaluator::new(&zero_field);
    assert_eq!(euler_step(&sv(&[0.4]), 1.0, 0.5, &mut eval).unwrap(), sv(&[0.4]));
    let mut eval = FieldEvaluator::new(&rotation);
    assert_eq!(
        euler_step(&sv(&[1.0, 0.0]), 0.7, 0.1, &mut eval).unwrap(),
        sv(&[1.0, -0.1])
    );
    let const_two = VelocityFieldSpec::new(FieldKind::Custom {
        dim: 1,
        func: Arc::new(|_z, _t| sv(&[2.0])),
    });
    let mut eval = FieldEvaluator::new(&const_two);
    assert_eq!(euler_step(&sv(&[0.0]), 1.0, 1.0, &mut eval).unwrap(), sv(&[-2.0]));

    let uniform2 = Grid64::uniform(2).unwrap();
    let (z_tilde, t_tilde) = scheduler_step(&sv(&[0.0]), &sv(&[1.0]), 0, &uniform2);
    assert_eq!((z_tilde, t_tilde), (sv(&[-0.5]), 0.5));
    let (z_tilde, t_tilde) = scheduler_step(&sv(&[0.7]), &State64::zeros(1), 0, &uniform2);
    assert_eq!((z_tilde, t_tilde), (sv(&[0.7]), 0.5));
    let shifted2 = Grid64::sigma_shift(2, 3.0).unwrap();
    let (z_tilde, t_tilde) = scheduler_step(&sv(&[0.0]), &sv(&[1.0]), 0, &shifted2);
    assert!(z_tilde.dist(&sv(&[-0.25])) <= 1e-12);
    assert_eq!(t_tilde, 0.5);

    // --- peek velocity and curvature ---
    assert_eq!(
        estimate_peek_velocity(&sv(&[2.0]), &sv(&[1.0]), 0.5).unwrap(),
        sv(&[2.0])
    );
    assert_eq!(
        estimate_peek_velocity(&sv(&[0.3, -0.1]), &sv(&[0.3, -0.1]), 0.2).unwrap(),
        State64::zeros(2)
    );
    assert_eq!(
        estimate_peek_velocity(&sv(&[0.0, 0.0]), &sv(&[-1.0, 2.0]), 1.0).unwrap(),
        sv(&[1.0, -2.0])
    );

    let v = sv(&[-1.0, 0.0]);
    assert_eq!(curvature(&v, &v, &sv(&[0.0, 0.0]), &sv(&[1.0, 0.0]), 1e-8), 0.0);
    let kappa = curvature(
        &sv(&[-1.0, 0.0]),
        &sv(&[-2.0, 0.0]),
        &sv(&[0.0, 0.0]),
        &sv(&[1.0, 0.0]),
        1e-8,
    );
    assert!((kappa - 1.0 / (1.0 + 1e-8)).abs() <= 1e-12);
    let z = sv(&[0.2]);
    let kappa = curvature(&sv(&[0.0]), &sv(&[0.5]), &z, &z, 1e-8);
    assert!((kappa - 5e7).abs() / 5e7 <= 1e-12);

    // --- look-ahead ---
    let flip_field = VelocityFieldSpec::new(FieldKind::Custom {
        dim: 1,
        func: Arc::new(|_z, t| if t > 0.5 { sv(&[-2.0]) } else { sv(&[5.0]) }),
    });
    let grid1 = Grid64::uniform(1).unwrap();
    let mut config = SamplerConfig::new(Algorithm::LookAhead);
    config.peek_mode = PeekMode::ModelEval;
    config.tau_curv = CurvatureThreshold::Finite(1.0);
    config.gamma_interp = 0.9;
    let mut eval = FieldEvaluator::new(&flip_field);
    let state = SamplerState::initial(&config, sv(&[0.0]));
    let (next, record) = look_ahead_step(state, 0, &grid1, &config, &mut eval).unwrap();
    assert_eq!(next.z, sv(&[1.8])); // z + 0.9 (z̃ − z) with z̃ = 2
    assert_eq!(record.accepted_full_step, Some(false));

    let defaults = SamplerConfig::<f64>::new(Algorithm::LookAhead);
    let shipped_pairs: [(f64, CurvatureThreshold<f64>); 3] = [
        (0.9, CurvatureThreshold::Finite(10.0)),
        (0.95, CurvatureThreshold::Finite(1.0)),
        (0.9, CurvatureThreshold::Finite(1.0)),
    ];
    assert!(shipped_pairs
        .iter()
        .any(|(g, t)| *g == defaults.gamma_interp && *t == defaults.tau_curv));

    // --- look-back ---
    assert_eq!(peek_blend(&sv(&[10.0]), &sv(&[0.0]), 1.0), sv(&[0.0]));
    assert_eq!(peek_blend(&sv(&[10.0]), &sv(&[0.0]), 0.1), sv(&[9.0]));
    assert_eq!(ema_update(&sv(&[1.0]), &sv(&[3.0]), 0.5), sv(&[2.0]));
    assert_eq!(defaults.lambda_blend, 0.1);
    assert!(defaults.xi_star == 0.0 || defaults.xi_star == 0.25);

    // --- momentum ---
    let const_minus_two = VelocityFieldSpec::new(FieldKind::Custom {
        dim: 1,
        func: Arc::new(|_z, _t| sv(&[-2.0])),
    });
    let mut momentum_config = SamplerConfig::new(Algorithm::Momentum);
    momentum_config.beta1 = 0.5;
    let mut eval = FieldEvaluator::new(&const_minus_two);
    let state = SamplerState::initial(&momentum_config, sv(&[0.0]));
    let (next, _) = momentum_step(state, 0, &grid1, &momentum_config, &mut eval).unwrap();
    assert_eq!(next.momentum.as_ref().unwrap(), &sv(&[1.0]));
    assert_eq!(next.z, sv(&[1.0]));
    assert_eq!(defaults.beta1, 0.8);

    // --- whole runs ---
    let const_one = VelocityFieldSpec::new(FieldKind::Custom {
        dim: 1,
        func: Arc::new(|_z, _t| sv(&[1.0])),
    });
    let traj = run_sampler(
        &SamplerConfig::new(Algorithm::Euler),
        &const_one,
        &RF,
        &grid1,
        &sv(&[0.0]),
    )
    .unwrap();
    assert_eq!(traj.states(), &[sv(&[0.0]), sv(&[-1.0])]);

    let field = rotation_field();
    let grid25 = Grid64::uniform(25).unwrap();
    let euler = run_sampler(&SamplerConfig::new(Algorithm::Euler), &field, &RF, &grid25, &sv(&[1.0, 0.0])).unwrap();
    let mut zero_blend = SamplerConfig::new(Algorithm::LookBack);
    zero_blend.lambda_blend = 0.0;
    let look_back = run_sampler(&zero_blend, &field, &RF, &grid25, &sv(&[1.0, 0.0])).unwrap();
    assert!(max_state_dist(&euler, &look_back) <= 1e-12);
    assert_eq!(euler.total_model_calls(), 25);

    // --- analytic fields and oracles ---
    let gaussian_unit = GaussianRfField::new(1.0, 1).unwrap();
    assert_eq!(gaussian_unit.coefficient(0.5), 0.0);
    assert!((gaussian_unit.coefficient(0.8) - 0.6 / 0.68f64).abs() <= 1e-12);
    let gaussian_kind = FieldKind::GaussianRf(GaussianRfField::new(2.0, 2).unwrap());
    assert!(exact_endpoint(&gaussian_kind, &sv(&[1.0, 1.0]))
        .unwrap()
        .dist(&sv(&[2.0, 2.0]))
        <= 1e-12);
    let rotation_kind = FieldKind::LinearMatrix(LinearMatrixField::rotation2(FRAC_PI_2));
    assert!(exact_endpoint(&rotation_kind, &sv(&[1.0, 0.0]))
        .unwrap()
        .dist(&sv(&[0.0, -1.0]))
        <= 1e-12);
    let zero_kind = FieldKind::LinearMatrix(
        LinearMatrixField::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap(),
    );
    assert_eq!(exact_endpoint(&zero_kind, &sv(&[0.4, -0.6])).unwrap(), sv(&[0.4, -0.6]));

    let stiff = StiffTrackingField::new(50.0, 1).unwrap();
    let t = 0.31;
    assert!(stiff.velocity(&stiff.target(t), t).norm() <= 1e-12);
    let off_target = stiff.target(t).add(&sv(&[0.1]));
    assert!((stiff.velocity(&off_target, t)[0] + 5.0).abs() <= 1e-12);
    let stiff_double = StiffTrackingField::new(100.0, 1).unwrap();
    assert!(
        (stiff_double.velocity(&off_target, t).norm()
            - 2.0 * stiff.velocity(&off_target, t).norm())
        .abs()
            <= 1e-12
    );

    // --- diagnostics ---
    let line = Trajectory64::new(
        vec![sv(&[0.0]), sv(&[1.0]), sv(&[2.0])],
        vec![1.0, 0.5, 0.0],
        vec![
            plain_record(1),
            plain_record(1),
        ],
    )
    .unwrap();
    assert_eq!(oscillation_energy(&line).unwrap(), 0.0);
    let vee = Trajectory64::new(
        vec![sv(&[0.0]), sv(&[1.0]), sv(&[0.0])],
        vec![1.0, 0.5, 0.0],
        vec![
            plain_record(1),
            plain_record(1),
        ],
    )
    .unwrap();
    assert_eq!(oscillation_energy(&vee).unwrap(), 4.0);
    assert_eq!(endpoint_error(&vee, &sv(&[0.0])).unwrap(), 0.0);
    let far = Trajectory64::new(
        vec![sv(&[1.0, 1.0]), sv(&[0.0, 0.0])],
        vec![1.0, 0.0],
        vec![plain_record(1)],
    )
    .unwrap();
    assert_eq!(endpoint_error(&far, &sv(&[3.0, 4.0])).unwrap(), 5.0);

    let (mean, std) = ensemble_moments(&[sv(&[0.0]), sv(&[2.0])]).unwrap();
    assert_eq!(mean, sv(&[1.0]));
    assert!((std[0] - 2.0f64.sqrt()).abs() <= 1e-12);
    let (_, std) = ensemble_moments(&[sv(&[0.3]), sv(&[0.3])]).unwrap();
    assert_eq!(std[0], 0.0);

    assert!(verify_call_budget(&line, 1));
    assert!(!verify_call_budget(&line, 2));

    assert_runtime(started, Duration::from_secs(1), "criterion 9");
    println!("criterion 9 (worked example values): PASS");
}
