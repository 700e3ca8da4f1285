//! End-to-end acceptance suite.
//!
//! Each test covers one headline claim of the library, prints a single
//! pass/fail line with the measured quantities, and holds them to fixed
//! tolerances. Everything is seeded; reruns reproduce the same numbers.
//!
//! Run with `cargo test -p ampgap --test acceptance -- --nocapture`.

use std::sync::Mutex;
use std::sync::MutexGuard;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ampgap::estimator::{estimate, EstimatorConfig};
use ampgap::experiments::{
    rmse_ratio, run_invariance, run_property_audit, run_sweep, schedule_seed, InvariancePlan,
    SweepPlan,
};
use ampgap::oracle::{AmplitudeOracle, Basis, Protocol};
use ampgap::verifier::{verify_eigenphases, verify_signals, ExactModel};

/// The criteria assert wall-clock budgets and several saturate the worker
/// pool, so they run one at a time regardless of the test harness threading.
static GATE: Mutex<()> = Mutex::new(());

fn exclusive() -> MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn report(name: &str, passed: bool, detail: &str) {
    println!(
        "acceptance {}: {} ({detail})",
        name,
        if passed { "PASS" } else { "FAIL" }
    );
}

/// Nontrivial eigenphases of the walk operator equal ±arccos(1-2a) on 50
/// seeded random models of dimension 2..=16, to 1e-9, in under 10 s.
#[test]
fn criterion_1_walk_operator_eigenphases() {
    let _gate = exclusive();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    while checked < 50 {
        let dim = 2 + (checked % 15);
        let model = ExactModel::random(dim, &mut rng).unwrap();
        let report = verify_eigenphases(&model);
        if report.notice.is_some() {
            continue; // degenerate draw; does not count toward the 50
        }
        worst = worst.max(report.max_error);
        checked += 1;
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = worst <= 1e-9 && elapsed < 10.0;
    report(
        "1 eigenphases",
        passed,
        &format!("50 models, max error {worst:.3e}, {elapsed:.2} s"),
    );
    assert!(passed, "max error {worst:.3e}, elapsed {elapsed:.2} s");
}

/// Dense expectations reproduce the cosine, echo and flag-qubit sine signals
/// for t ≤ 16 to 1e-9.
#[test]
fn criterion_2_signal_identities() {
    let _gate = exclusive();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0B);
    let mut worst: f64 = 0.0;
    for dim in [2usize, 4, 8, 12, 16] {
        let model = ExactModel::random(dim, &mut rng).unwrap();
        worst = worst.max(verify_signals(&model, 16).unwrap().max_error);
    }
    let mut flag_worst: f64 = 0.0;
    for register in [1usize, 2, 4, 8] {
        let lambda = rng.gen::<f64>() * std::f64::consts::FRAC_PI_2;
        let model = ExactModel::flag(register, lambda, &mut rng).unwrap();
        let report = verify_signals(&model, 16).unwrap();
        assert!(
            report.notice.is_none(),
            "flag model must run the sine check"
        );
        flag_worst = flag_worst.max(report.max_error);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = worst <= 1e-9 && flag_worst <= 1e-9;
    report(
        "2 signal identities",
        passed,
        &format!("cos/echo max {worst:.3e}, flag sine max {flag_worst:.3e}, {elapsed:.2} s"),
    );
    assert!(passed);
}

/// The periodic-transform property audit (convexity, smoothness, strong
/// concavity, truncation budgets) passes for T in {2/π, 1, 5, 20} in under
/// 30 s.
#[test]
fn criterion_3_filter_property_audit() {
    let _gate = exclusive();
    let start = Instant::now();
    let audit = run_property_audit().unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    for check in &audit.checks {
        println!("  {}", check.summary_line());
    }
    let passed = audit.all_passed() && elapsed < 30.0;
    report(
        "3 property audit",
        passed,
        &format!("{} checks, {elapsed:.2} s", audit.checks.len()),
    );
    assert!(passed);
}

/// Heisenberg regime: at β = 0 the least-squares estimator succeeds in at
/// least 90% of trials at every grid point and its median depth scales as
/// ε^(-1.0 ± 0.15), within 5 minutes.
#[test]
fn criterion_4_heisenberg_scaling() {
    let _gate = exclusive();
    let start = Instant::now();
    let plan = SweepPlan {
        protocols: vec![Protocol::Glsae],
        a_values: vec![0.1, 0.3, 0.5, 0.7],
        epsilons: SweepPlan::log_spaced_epsilons(10f64.powf(-1.5), 1e-3, 5),
        beta: 0.0,
        trials: 100,
        seed_base: 0xCAFE,
        allow_large: false,
        output: None,
    };
    let dataset = run_sweep(&plan).unwrap();

    let mut min_success = 1.0f64;
    for point in &dataset.points {
        min_success = min_success.min(point.success_rate);
    }
    let mut slopes = Vec::new();
    for &a in &plan.a_values {
        slopes.push(dataset.depth_slope(Protocol::Glsae, a).unwrap());
    }
    let slope_ok = slopes.iter().all(|s| (s - (-1.0)).abs() <= 0.15);
    let elapsed = start.elapsed().as_secs_f64();
    let passed = min_success >= 0.9 && slope_ok && elapsed < 300.0;
    report(
        "4 heisenberg scaling",
        passed,
        &format!(
            "min success {min_success:.2}, depth slopes {:?}, {elapsed:.1} s",
            slopes
                .iter()
                .map(|s| (s * 1000.0).round() / 1000.0)
                .collect::<Vec<_>>()
        ),
    );
    assert!(
        passed,
        "success {min_success}, slopes {slopes:?}, {elapsed:.1} s"
    );
}

/// Depth–query invariance: splitting a fixed budget D·N = 1e6 across three
/// depths changes the RMSE by at most 2x, within 3 minutes.
#[test]
fn criterion_5_depth_query_invariance() {
    let _gate = exclusive();
    let start = Instant::now();
    let splits: Vec<(f64, f64)> = [50.0f64, 100.0, 200.0]
        .iter()
        .map(|&d| (d, 1e6 / d))
        .collect();
    let mut plan = InvariancePlan::new(1e6, splits, 0.25);
    plan.trials = 100;
    plan.seed_base = 0xD00D;
    let points = run_invariance(&plan).unwrap();
    let ratio = rmse_ratio(&points);
    let elapsed = start.elapsed().as_secs_f64();
    for p in &points {
        println!(
            "  split depth {} queries {}: T = {}, N = {}, rmse {:.5}",
            p.split_depth, p.split_queries, p.t, p.n_samples, p.rmse
        );
    }
    let passed = ratio <= 2.0 && points.len() >= 3 && elapsed < 180.0;
    report(
        "5 depth-query invariance",
        passed,
        &format!("max/min rmse ratio {ratio:.3}, {elapsed:.1} s"),
    );
    assert!(passed, "ratio {ratio}, elapsed {elapsed:.1} s");
}

/// Full-range claim at low depth (M ≈ 20, ε = 0.01): the dual-measurement
/// estimator succeeds ≥ 90% at a ∈ {1e-3, 0.5, 1-1e-3}, while the
/// least-squares estimator at the same budget fails (< 50% success) at the
/// two extreme amplitudes.
///
/// The second half does not hold empirically: near a ∈ {0, 1} the map
/// θ ↦ sin²θ compresses phase wander quadratically and the least-squares
/// landscape keeps its minimum within ~0.005 of λ even below ζ, so GLSAE
/// keeps succeeding at every sample count. The assertion is kept as the
/// comparison was designed and the measured rates are printed.
#[test]
fn criterion_6_low_depth_full_range() {
    let _gate = exclusive();
    let start = Instant::now();
    let t = 5.0; // M = ⌊4T⌋ = 20
    let epsilon = 0.01;
    let n = 4000;
    let trials = 100u32;
    let amplitudes = [1e-3, 0.5, 1.0 - 1e-3];

    let success_rate = |protocol: Protocol, a: f64| -> f64 {
        let mut hits = 0u32;
        for trial in 0..trials {
            let mut config = EstimatorConfig::new(protocol, epsilon);
            config.t_override = Some(t);
            config.n_override = Some(n);
            config.seed = schedule_seed(0xFEED, protocol, a, epsilon, trial);
            let mut oracle = AmplitudeOracle::new(a).unwrap();
            let result = estimate(&config, &mut oracle).unwrap();
            assert!(result.max_depth <= 20);
            if (result.a_hat - a).abs() <= epsilon {
                hits += 1;
            }
        }
        hits as f64 / trials as f64
    };

    let gdmae: Vec<f64> = amplitudes
        .iter()
        .map(|&a| success_rate(Protocol::Gdmae, a))
        .collect();
    let glsae_low = success_rate(Protocol::Glsae, amplitudes[0]);
    let glsae_high = success_rate(Protocol::Glsae, amplitudes[2]);
    let elapsed = start.elapsed().as_secs_f64();

    let gdmae_ok = gdmae.iter().all(|&s| s >= 0.9);
    let glsae_fails_at_extremes = glsae_low < 0.5 && glsae_high < 0.5;
    let passed = gdmae_ok && glsae_fails_at_extremes;
    report(
        "6 low-depth full range",
        passed,
        &format!(
            "gdmae success {gdmae:?}, glsae success at extremes [{glsae_low:.2}, {glsae_high:.2}], {elapsed:.1} s"
        ),
    );
    assert!(
        passed,
        "gdmae {gdmae:?} (need all >= 0.9); glsae at extremes {glsae_low:.2}/{glsae_high:.2} (designed expectation < 0.5 \
         does not materialize: the estimator degrades gracefully in amplitude space at this depth)"
    );
}

/// Cosine-only magnitude maximization needs deep circuits: at T = 2 and
/// a = 0.15 its RMSE is at least twice the least-squares RMSE.
#[test]
fn criterion_7_cos_only_magnitude_degrades_when_shallow() {
    let _gate = exclusive();
    let start = Instant::now();
    let a = 0.15;
    let trials = 100u32;
    let rmse = |protocol: Protocol| -> f64 {
        let mut sum = 0.0;
        for trial in 0..trials {
            let mut config = EstimatorConfig::new(protocol, 0.01);
            config.t_override = Some(2.0);
            config.n_override = Some(30_000);
            config.seed = schedule_seed(0xBEEF, protocol, a, 0.01, trial);
            let mut oracle = AmplitudeOracle::new(a).unwrap();
            let result = estimate(&config, &mut oracle).unwrap();
            sum += (result.a_hat - a).powi(2);
        }
        (sum / trials as f64).sqrt()
    };
    let gmmae = rmse(Protocol::Gmmae);
    let glsae = rmse(Protocol::Glsae);
    let ratio = gmmae / glsae;
    let elapsed = start.elapsed().as_secs_f64();
    let passed = ratio >= 2.0;
    report(
        "7 shallow magnitude degradation",
        passed,
        &format!("gmmae rmse {gmmae:.5}, glsae rmse {glsae:.5}, ratio {ratio:.2}, {elapsed:.1} s"),
    );
    assert!(passed, "ratio {ratio}");
}

/// Oracle shot statistics: empirical means over 1e5 shots sit inside 4σ
/// binomial bands around the analytic signals for 20 fixed (λ, m, basis)
/// triples, in under 20 s.
#[test]
fn criterion_8_oracle_shot_statistics() {
    let _gate = exclusive();
    let start = Instant::now();
    let shots = 100_000u32;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut worst_sigmas: f64 = 0.0;
    let mut count = 0;
    let lambdas: [f64; 5] = [0.05, 0.3, 0.7, 1.1, 1.5];
    for (i, &lambda) in lambdas.iter().enumerate() {
        let a = lambda.sin().powi(2);
        for (j, &m) in [1i64, 4, 9, 25].iter().enumerate() {
            let sine_basis = (i + j) % 2 == 0 && m % 2 == 1;
            let mut oracle = AmplitudeOracle::new(a).unwrap();
            let mut sum = 0i64;
            for _ in 0..shots {
                let record = if sine_basis {
                    oracle.measure_sin(m, &mut rng).unwrap()
                } else {
                    oracle.measure_cos(m, &mut rng)
                };
                debug_assert!(matches!(record.basis, Basis::CosZ | Basis::SinX));
                sum += record.outcome as i64;
            }
            let mean = sum as f64 / shots as f64;
            let target = if sine_basis {
                (2.0 * lambda * m as f64).sin()
            } else {
                (2.0 * lambda * m as f64).cos()
            };
            let sigma = ((1.0 - target * target).max(1e-12) / shots as f64).sqrt();
            let deviation = (mean - target).abs() / sigma;
            worst_sigmas = worst_sigmas.max(deviation);
            count += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = worst_sigmas <= 4.0 && count == 20 && elapsed < 20.0;
    report(
        "8 oracle statistics",
        passed,
        &format!("{count} triples, worst deviation {worst_sigmas:.2}σ, {elapsed:.2} s"),
    );
    assert!(passed, "worst {worst_sigmas:.2}σ over {count} triples");
}
