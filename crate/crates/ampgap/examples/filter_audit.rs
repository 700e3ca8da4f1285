//! Properties of the Gaussian filter functions.
//!
//! Prints the periodic transforms of the sampling distributions at a few
//! points, then runs the full numerical audit of the analytic properties
//! (convexity region, smoothness and strong-concavity constants, truncation
//! budgets) that back the estimators' grid-search guarantees.
//!
//! Run with: cargo run --release -p ampgap --example filter_audit

use ampgap::experiments::run_property_audit;
use ampgap::{PeriodicGaussian, TruncatedGaussianSampler};
use std::f64::consts::PI;

fn main() {
    let t = 2.0;
    let sampler = TruncatedGaussianSampler::all_integers(t).unwrap();
    let phi = PeriodicGaussian::phi(t).unwrap();
    let psi = PeriodicGaussian::psi(t).unwrap();

    println!(
        "T = {t}: depth cutoff M = {}, Z~ = {:.6}",
        sampler.max_index(),
        sampler.z_tilde()
    );
    println!(
        "tabulated variance {:.3} vs T^2 = {:.3}\n",
        sampler.variance(),
        t * t
    );

    println!("x/pi     Phi(x)      Psi(x)");
    for k in 0..=8 {
        let x = PI * k as f64 / 4.0;
        println!(
            "{:<7.3}  {:<10.6}  {:+.6}",
            x / PI,
            phi.value(x),
            psi.value(x)
        );
    }
    println!("\nPhi peaks at multiples of 2pi; Psi alternates sign every pi.\n");

    let report = run_property_audit().unwrap();
    for check in &report.checks {
        println!("{}", check.summary_line());
    }
    assert!(report.all_passed());
    println!("\nall {} property checks passed.", report.checks.len());
}
