//! Recomputes every fog task's migration flag offline by stepping the raw
//! trace through the task's execution window, and compares with the
//! engine's ledger.

use std::collections::HashMap;

use fogsim::engine::{streams, Instance};
use fogsim::experiment::{run_algorithms, Algorithm};
use fogsim::model::{DecisionKind, FogNode};
use fogsim::policy::rng_stream;
use fogsim::traceio::{synthetic_trace, Scenario, ScenarioConfig, TraceSample};

const DT: f64 = 0.01;

/// Linear interpolation between samples, held at both ends.
fn position(samples: &[TraceSample], t: f64) -> (f64, f64) {
    let i = samples.partition_point(|s| s.time_s <= t);
    if i == 0 {
        return (samples[0].x_m, samples[0].y_m);
    }
    if i == samples.len() {
        let s = &samples[i - 1];
        return (s.x_m, s.y_m);
    }
    let (a, b) = (&samples[i - 1], &samples[i]);
    let w = (t - a.time_s) / (b.time_s - a.time_s);
    (a.x_m + w * (b.x_m - a.x_m), a.y_m + w * (b.y_m - a.y_m))
}

/// First stepped instant in `(from, to]` at which the UE is outside `fog`.
fn stepped_exit(samples: &[TraceSample], fog: &FogNode, from: f64, to: f64) -> Option<f64> {
    let steps = ((to - from) / DT).ceil() as u64;
    (1..=steps).map(|k| (from + k as f64 * DT).min(to)).find(|&t| {
        let (x, y) = position(samples, t);
        (x - fog.x_m).powi(2) + (y - fog.y_m).powi(2) > fog.radius_m * fog.radius_m
    })
}

#[test]
fn ledger_migration_flags_match_stepped_trace() {
    let config = ScenarioConfig {
        n_ues: 20,
        n_fog: 10,
        horizon_s: Some(600),
        ..ScenarioConfig::default()
    };
    let scenario = Scenario::synthetic(config).unwrap();
    let mut fog_tasks = 0;
    let mut migrated = 0;
    for seed in 1..=3 {
        let instance = Instance::build(&scenario, seed).unwrap();
        let trace = synthetic_trace(20, scenario.field(), 600, &mut rng_stream(seed, streams::TRACE));
        let mut by_ue: HashMap<&str, Vec<TraceSample>> = HashMap::new();
        for s in &trace {
            by_ue.entry(&s.ue_id).or_default().push(s.clone());
        }
        let ledgers = run_algorithms(&scenario, &[Algorithm::Mofco, Algorithm::Gcga, Algorithm::Ra], seed).unwrap();
        for ledger in &ledgers {
            for r in &ledger.records {
                let DecisionKind::Fog(j) = r.decision else {
                    assert!(!r.migrated && r.migration_penalty == 0.0);
                    continue;
                };
                fog_tasks += 1;
                let fog = &instance.fogs[j];
                let samples = &by_ue[r.ue_name.as_str()];
                let exit = stepped_exit(samples, fog, r.decided_t, r.completed_t);
                if let Some(t) = exit {
                    if (t - r.completed_t).abs() <= 2.0 * DT {
                        continue; // too close to call at this step size
                    }
                }
                assert_eq!(r.migrated, exit.is_some(), "{} task {}: exit {exit:?}, record {r:?}", ledger.algo, r.task_id);
                if r.migrated {
                    migrated += 1;
                    let engine_exit = r.exit_t.expect("migrated task records its exit");
                    assert!((engine_exit - exit.unwrap()).abs() <= DT + 1e-9, "{engine_exit} vs {exit:?}");
                    let expected = instance.params.migration_coeff * instance.tasks[r.task_id as usize].data_size_bits;
                    assert!((r.migration_penalty - expected).abs() <= 1e-9 * expected);
                }
            }
        }
    }
    assert!(fog_tasks > 1000 && migrated > 100, "{fog_tasks} fog tasks, {migrated} migrations");
}
