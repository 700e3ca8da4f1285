//! Depth–query tradeoff at fixed precision budget.
//!
//! Splitting a fixed product of maximum circuit depth and total
//! state-preparation queries across different depths leaves the achieved
//! error roughly constant — as long as every split keeps enough circuit
//! samples for the statistics to concentrate. The last split below
//! deliberately leaves only a handful of samples to show where the plateau
//! ends.
//!
//! Run with: cargo run --release -p ampgap --example depth_query_tradeoff

use ampgap::experiments::{rmse_ratio, run_invariance, InvariancePlan};

fn main() {
    let budget = 1e6;

    let splits: Vec<(f64, f64)> = [50.0f64, 100.0, 200.0]
        .iter()
        .map(|&d| (d, budget / d))
        .collect();
    let mut plan = InvariancePlan::new(budget, splits, 0.25);
    plan.trials = 100;
    plan.seed_base = 42;
    let points = run_invariance(&plan).unwrap();

    println!("budget depth*queries = {budget:.0}, a = 0.25, 100 trials per split\n");
    println!("depth   queries   T       samples  rmse");
    for p in &points {
        println!(
            "{:<7} {:<9} {:<7} {:<8} {:.5}",
            p.split_depth, p.split_queries, p.t, p.n_samples, p.rmse
        );
    }
    println!(
        "max/min rmse ratio: {:.2}  (flat plateau)",
        rmse_ratio(&points)
    );

    // Push the depth so high that almost no samples remain.
    let mut extreme = InvariancePlan::new(budget, vec![(1000.0, budget / 1000.0)], 0.25);
    extreme.trials = 100;
    extreme.seed_base = 42;
    let broken = run_invariance(&extreme).unwrap();
    println!(
        "\nsplit (1000, 1000) leaves N = {} samples: rmse {:.3} — off the plateau;",
        broken[0].n_samples, broken[0].rmse
    );
    println!("with so few shots the loss landscape grows spurious minima.");
}
