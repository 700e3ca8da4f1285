//! Error-vs-resources scaling sweep with plot-data output.
//!
//! Runs the least-squares estimator over a log-spaced precision grid in two
//! regimes — Heisenberg-limited (beta = 0) and shallow-circuit (beta = 1/3,
//! where depth and samples both scale like ε^{-2/3}) — then fits the
//! log-log slope of median depth against precision and writes `x y` series
//! files for external plotting.
//!
//! Run with: cargo run --release -p ampgap --example error_scaling_sweep

use ampgap::experiments::{run_sweep, write_xy_series, SweepPlan};
use ampgap::Protocol;
use std::path::Path;

fn main() {
    let out_dir = Path::new("target/scaling-sweep");
    for (label, beta, expected) in [
        ("heisenberg", 0.0, -1.0),
        ("low-depth", 1.0 / 3.0, -2.0 / 3.0),
    ] {
        let plan = SweepPlan {
            protocols: vec![Protocol::Glsae],
            a_values: vec![0.3],
            epsilons: SweepPlan::log_spaced_epsilons(10f64.powf(-1.5), 1e-3, 5),
            beta,
            trials: 40,
            seed_base: 11,
            allow_large: false,
            output: Some(out_dir.join(format!("{label}.csv"))),
        };
        let dataset = run_sweep(&plan).unwrap();
        let slope = dataset.depth_slope(Protocol::Glsae, 0.3).unwrap();
        println!("{label}: beta = {beta:.3}");
        println!("  epsilon     median depth   success");
        for point in &dataset.points {
            println!(
                "  {:<10.4e}  {:<13}  {:.2}",
                point.epsilon, point.median_depth, point.success_rate
            );
        }
        println!("  fitted depth slope {slope:.3} (ideal {expected:.3})\n");

        let series = dataset.depth_series(Protocol::Glsae, 0.3);
        let path = out_dir.join(format!("{label}-depth.xy"));
        write_xy_series(&path, &series).unwrap();
        println!("  wrote {} and the CSV next to it", path.display());
    }
}
