//! MOFCO: fog-node elimination with closed-form allocation, followed by a
//! clustered evolutionary game over the tasks that still have fog options.

mod allocation;
mod elimination;
mod fitness;
mod kmeans;
mod mofco;
mod population;

pub use allocation::{allocation_dependent_cost, optimal_allocation};
pub use elimination::{eliminate_fog_nodes, split_by_elimination, Eligibility};
pub use fitness::{fitness_from_parts, fnef, BatchContext};
pub use kmeans::cluster_population;
pub use mofco::{mofco_assign, mofco_assign_detailed, Mofco, MofcoOutcome};
pub use population::{
    acceptance_probability, best_index, metropolis_refine, modify_strategies, pull_towards,
    update_positions, Individual,
};

use serde::{Deserialize, Serialize};

/// Hyperparameters of the evolutionary game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub population: usize,
    pub generations: usize,
    pub clusters: usize,
    /// Weight of the workload forecast in the fitness.
    pub fnef_coeff: f64,
    /// Latency separating low- from high-latency tasks, seconds.
    pub latency_thresh_s: f64,
    /// Position step as a fraction of the destination's capacity.
    pub step_scale: f64,
    /// Chance that a non-best member competes with its cluster best.
    pub selection_prob: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            population: 40,
            generations: 20,
            clusters: 5,
            fnef_coeff: 0.3,
            latency_thresh_s: 4.0,
            step_scale: 0.1,
            selection_prob: 0.5,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut problems = Vec::new();
        if self.clusters < 1 {
            problems.push("solver.clusters must be at least 1".to_string());
        }
        if self.generations < 1 {
            problems.push("solver.generations must be at least 1".to_string());
        }
        if self.population < self.clusters {
            problems.push("solver.population must be at least solver.clusters".to_string());
        }
        if !(0.0..=1.0).contains(&self.selection_prob) {
            problems.push("solver.selection_prob must lie in [0, 1]".to_string());
        }
        if !(self.step_scale > 0.0) {
            problems.push("solver.step_scale must be positive".to_string());
        }
        if !(self.fnef_coeff >= 0.0) {
            problems.push("solver.fnef_coeff must be non-negative".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems)
        }
    }
}
