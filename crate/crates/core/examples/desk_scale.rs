//! Compares all algorithms on the 20-UE / 10-node / 600 s synthetic
//! scenario for seeds 1–10 and prints normalized costs and migrations.
//!
//! `cargo run --release -p fogsim --example desk_scale [width_m height_m]`

use fogsim::engine::MetricsLedger;
use fogsim::experiment::{run_algorithms, Algorithm};
use fogsim::report::summary_rows;
use fogsim::traceio::{FieldConfig, Scenario, ScenarioConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (w, h) = match args[..] {
        [w, h] => (w, h),
        _ => (2000.0, 2000.0),
    };
    let scenario = Scenario::synthetic(ScenarioConfig {
        n_ues: 20,
        n_fog: 10,
        horizon_s: Some(600),
        field: Some(FieldConfig { width_m: w, height_m: h }),
        ..ScenarioConfig::default()
    })?;
    println!("seed  {:>28}", Algorithm::ALL.map(|a| format!("{:>12}", a.key())).join(""));
    for seed in 1..=10 {
        let ledgers = run_algorithms(&scenario, &Algorithm::ALL, seed)?;
        let refs: Vec<&MetricsLedger> = ledgers.iter().collect();
        let rows = summary_rows(&refs);
        let cells: Vec<String> = rows
            .iter()
            .map(|r| format!("{:>7.4}/{:<4}", r.normalized_cost, r.migration_count))
            .collect();
        let time: f64 = rows.iter().map(|r| r.wall_time_s).sum();
        println!("{seed:>4}  {}  ({} tasks, {time:.2}s)", cells.join(""), ledgers[0].records.len());
    }
    Ok(())
}
