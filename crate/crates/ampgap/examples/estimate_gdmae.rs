//! Low-depth estimation over the full amplitude range with dual
//! measurements.
//!
//! With circuits capped at depth 20 (Gaussian width T = 5), the
//! dual-measurement estimator resolves amplitudes all the way out to the
//! edges of [0, 1]: the extra sine signal from the flag qubit breaks the
//! ±λ degeneracy that limits cosine-only estimation at shallow depth. The
//! cosine-only magnitude variant is printed alongside as a contrast.
//!
//! Run with: cargo run --release -p ampgap --example estimate_gdmae

use ampgap::{estimate, AmplitudeOracle, EstimatorConfig, Protocol};

fn run(protocol: Protocol, a_true: f64, seed: u64) -> f64 {
    let mut config = EstimatorConfig::new(protocol, 1e-2);
    config.t_override = Some(5.0); // depth cap M = 20
    config.n_override = Some(4000);
    config.seed = seed;
    let mut oracle = AmplitudeOracle::new(a_true).unwrap();
    estimate(&config, &mut oracle).unwrap().a_hat
}

fn main() {
    println!("depth cap 20, 4000 sampled circuits, target precision 1e-2\n");
    println!("a_true     gdmae |err|   gmmae |err|");
    for &a_true in &[1e-3, 0.05, 0.25, 0.5, 0.75, 0.95, 1.0 - 1e-3] {
        let gdmae = run(Protocol::Gdmae, a_true, 7);
        let gmmae = run(Protocol::Gmmae, a_true, 7);
        println!(
            "{a_true:<9.4}  {:<11.2e}  {:<11.2e}",
            (gdmae - a_true).abs(),
            (gmmae - a_true).abs()
        );
        assert!((gdmae - a_true).abs() <= 1e-2);
    }
    println!("\nthe dual-measurement estimator stays within 1e-2 everywhere,");
    println!("including amplitudes the shallow cosine-only signals smear out.");
}
