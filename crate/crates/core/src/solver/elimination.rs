use crate::model::{cloud_cost_with_uplink, fog_cost_with_uplink, local_cost, OffloadDecision, Task};
use crate::policy::WorldView;

use super::optimal_allocation;

/// Outcome of fog-node elimination for one task.
#[derive(Debug, Clone, PartialEq)]
pub struct Eligibility {
    pub task_id: u64,
    /// Fog nodes whose best-case cost is no worse than local or cloud.
    pub eligible: Vec<usize>,
    /// Decision taken right away when no fog node survives.
    pub immediate: Option<OffloadDecision>,
    pub local_cost: f64,
    /// `None` when no fog node can relay to the cloud.
    pub cloud_cost: Option<f64>,
    /// `(fog id, best-case cost, allocation)` for every candidate examined.
    pub best_case: Vec<(usize, f64, f64)>,
}

/// Keeps the candidates whose best-case cost is at most `min(local,
/// cloud)`. With nothing left, runs on the cloud if that is cheaper than
/// local execution, else locally.
pub fn split_by_elimination(
    task_id: u64,
    best_case: &[(usize, f64)],
    local: f64,
    cloud: Option<f64>,
) -> (Vec<usize>, Option<OffloadDecision>) {
    let bound = local.min(cloud.unwrap_or(f64::INFINITY));
    let eligible: Vec<usize> = best_case
        .iter()
        .filter(|(_, cost)| *cost <= bound)
        .map(|(j, _)| *j)
        .collect();
    if !eligible.is_empty() {
        return (eligible, None);
    }
    let decision = match cloud {
        Some(c) if local > c => OffloadDecision::cloud(task_id),
        _ => OffloadDecision::local(task_id),
    };
    (eligible, Some(decision))
}

/// Step 1 for a single task. `candidates` are the fog nodes covering the
/// UE at release time. Best-case fog costs use the closed-form allocation
/// and the node's current queue wait, and ignore migration.
pub fn eliminate_fog_nodes(task: &Task, candidates: &[usize], world: &WorldView<'_>) -> Eligibility {
    let ue = &world.ues[task.ue];
    let link = world.uplink(task.ue);
    let local = local_cost(task, ue, world.local_wait(task.ue), world.params).total;
    let cloud = world
        .relay(task.ue)
        .map(|_| cloud_cost_with_uplink(task, ue, &link, world.params).total);
    let arrival = world.now_s + link.transmission_time(task);
    let best_case: Vec<(usize, f64, f64)> = candidates
        .iter()
        .map(|&j| {
            let alloc = optimal_allocation(task, world.params, world.fogs[j].capacity_hz);
            let wait = world.fog_wait(j, arrival, alloc);
            let cost = fog_cost_with_uplink(task, ue, &link, alloc, wait, world.params).total;
            (j, cost, alloc)
        })
        .collect();
    let pairs: Vec<(usize, f64)> = best_case.iter().map(|&(j, c, _)| (j, c)).collect();
    let (eligible, immediate) = split_by_elimination(task.id, &pairs, local, cloud);
    Eligibility {
        task_id: task.id,
        eligible,
        immediate,
        local_cost: local,
        cloud_cost: cloud,
        best_case,
    }
}
