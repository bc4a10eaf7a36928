use crate::model::DecisionKind;

/// Terminal record of one task.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskRecord {
    pub task_id: u64,
    pub ue: usize,
    pub ue_name: String,
    pub release_t: f64,
    /// Tick at which the task's batch was decided.
    pub decided_t: f64,
    pub completed_t: f64,
    pub decision: DecisionKind,
    /// Zero unless the task ran on a fog node.
    pub alloc_hz: f64,
    pub latency_s: f64,
    pub energy_j: f64,
    pub migration_penalty: f64,
    pub migrated: bool,
    /// When the UE actually left the serving fog node, if it did.
    pub exit_t: Option<f64>,
    pub cost: f64,
}

/// Outcome of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsLedger {
    pub algo: String,
    pub seed: u64,
    pub n_ues: usize,
    pub n_fog: usize,
    /// Sorted by task id.
    pub records: Vec<TaskRecord>,
    pub released: usize,
    pub decisions_checked: usize,
    /// Ticks at which an active UE had no fresh trace sample.
    pub gap_warnings: usize,
    /// Coverage exits observed while a fog task was still running.
    pub migration_events: usize,
    pub wall_time_s: f64,
}

impl MetricsLedger {
    pub fn completed(&self) -> usize {
        self.records.len()
    }

    pub fn total_cost(&self) -> f64 {
        self.records.iter().map(|r| r.cost).sum()
    }

    pub fn migration_count(&self) -> usize {
        self.records.iter().filter(|r| r.migrated).count()
    }

    pub fn mean_cost(&self) -> f64 {
        if self.records.is_empty() {
            0.0
        } else {
            self.total_cost() / self.records.len() as f64
        }
    }

    pub fn max_cost(&self) -> f64 {
        self.records.iter().map(|r| r.cost).fold(0.0, f64::max)
    }
}

/// Mean per-task cost of each ledger divided by the largest single-task
/// cost found in any of them.
pub fn normalized_cost(ledgers: &[&MetricsLedger]) -> Vec<f64> {
    let max = ledgers.iter().map(|l| l.max_cost()).fold(0.0, f64::max);
    ledgers
        .iter()
        .map(|l| if max > 0.0 { l.mean_cost() / max } else { 0.0 })
        .collect()
}
