//! CSV output: per-task results, per-run summaries and sweep tables.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::engine::{normalized_cost, MetricsLedger};
use crate::error::{Error, Result};

/// One `results.csv` row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub task_id: u64,
    pub ue_id: String,
    pub release_t: f64,
    pub decision: String,
    pub fog_id: Option<usize>,
    pub alloc_hz: f64,
    pub latency_s: f64,
    pub energy_j: f64,
    pub migrated: u8,
    pub cost: f64,
}

/// One `summary.csv` row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub algo: String,
    pub n_ues: usize,
    pub n_fog: usize,
    pub total_cost: f64,
    pub normalized_cost: f64,
    pub migration_count: usize,
    pub wall_time_s: f64,
    pub seed: u64,
}

/// One `sweep.csv` row: a summary tagged with the swept parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    pub algo: String,
    pub n_ues: usize,
    pub n_fog: usize,
    pub total_cost: f64,
    pub normalized_cost: f64,
    pub migration_count: usize,
    pub wall_time_s: f64,
    pub seed: u64,
}

pub fn result_rows(ledger: &MetricsLedger) -> Vec<ResultRow> {
    ledger
        .records
        .iter()
        .map(|r| ResultRow {
            task_id: r.task_id,
            ue_id: r.ue_name.clone(),
            release_t: r.release_t,
            decision: r.decision.label().to_string(),
            fog_id: r.decision.fog(),
            alloc_hz: r.alloc_hz,
            latency_s: r.latency_s,
            energy_j: r.energy_j,
            migrated: u8::from(r.migrated),
            cost: r.cost,
        })
        .collect()
}

/// Summaries of ledgers compared with each other: normalization uses the
/// largest task cost among all of them.
pub fn summary_rows(ledgers: &[&MetricsLedger]) -> Vec<SummaryRow> {
    let normalized = normalized_cost(ledgers);
    ledgers
        .iter()
        .zip(normalized)
        .map(|(l, normalized_cost)| SummaryRow {
            algo: l.algo.clone(),
            n_ues: l.n_ues,
            n_fog: l.n_fog,
            total_cost: l.total_cost(),
            normalized_cost,
            migration_count: l.migration_count(),
            wall_time_s: l.wall_time_s,
            seed: l.seed,
        })
        .collect()
}

/// Summary figures recomputed from `results.csv` rows alone.
pub fn aggregate_results(rows: &[ResultRow]) -> (f64, usize) {
    (rows.iter().map(|r| r.cost).sum(), rows.iter().filter(|r| r.migrated == 1).count())
}

pub fn write_rows<T: Serialize>(rows: &[T], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<T: for<'de> Deserialize<'de>>(input: impl Read) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| row.map_err(csv_error)).collect()
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::parse("<csv>", line, format!("{other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{run_algorithms, Algorithm};
    use crate::traceio::{FieldConfig, Scenario, ScenarioConfig};

    #[test]
    fn results_round_trip_and_match_summary() {
        let scenario = Scenario::synthetic(ScenarioConfig {
            n_ues: 4,
            n_fog: 4,
            horizon_s: Some(120),
            field: Some(FieldConfig {
                width_m: 800.0,
                height_m: 800.0,
            }),
            ..ScenarioConfig::default()
        })
        .unwrap();
        let ledgers = run_algorithms(&scenario, &[Algorithm::Ra, Algorithm::OnlyCloud], 2).unwrap();
        let refs: Vec<&MetricsLedger> = ledgers.iter().collect();
        let summary = summary_rows(&refs);
        for (ledger, s) in ledgers.iter().zip(&summary) {
            let mut buf = Vec::new();
            write_rows(&result_rows(ledger), &mut buf).unwrap();
            let text = String::from_utf8(buf.clone()).unwrap();
            assert!(text.starts_with("task_id,ue_id,release_t,decision,fog_id,alloc_hz,latency_s,energy_j,migrated,cost\n"));
            assert!(!text.contains('\r'));
            let back: Vec<ResultRow> = read_rows(buf.as_slice()).unwrap();
            assert_eq!(back, result_rows(ledger));
            let (total, migrations) = aggregate_results(&back);
            assert_eq!(total, s.total_cost);
            assert_eq!(migrations, s.migration_count);
        }
        let mut buf = Vec::new();
        write_rows(&summary, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with(
            "algo,n_ues,n_fog,total_cost,normalized_cost,migration_count,wall_time_s,seed\n"
        ));
    }
}
