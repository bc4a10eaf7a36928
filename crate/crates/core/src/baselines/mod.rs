//! Comparison policies: cloud-only, local-only, random assignment and an
//! approximation of the Gini-coefficient + genetic-algorithm scheme.

mod gcga;

pub use gcga::{gcga_assign, gcga_assign_detailed, gini, refine_allocations, Gcga, GcgaConfig, GcgaOutcome};

use rand::Rng;

use crate::model::{OffloadDecision, Task, ALLOC_MIN_HZ};
use crate::policy::{Policy, SimRng, WorldView};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    OnlyCloud,
    OnlyLocal,
    RandomAssign,
    Gcga,
}

/// Every task to the cloud through its nearest relay; local when no fog
/// node covers the UE.
pub fn only_cloud(tasks: &[Task], world: &WorldView<'_>) -> Vec<OffloadDecision> {
    tasks
        .iter()
        .map(|t| match world.relay(t.ue) {
            Some(_) => OffloadDecision::cloud(t.id),
            None => OffloadDecision::local(t.id),
        })
        .collect()
}

pub fn only_local(tasks: &[Task]) -> Vec<OffloadDecision> {
    tasks.iter().map(|t| OffloadDecision::local(t.id)).collect()
}

/// Fair coin per task; on heads a uniformly chosen covering fog node with a
/// uniform allocation.
pub fn random_assign(tasks: &[Task], world: &WorldView<'_>, rng: &mut impl Rng) -> Vec<OffloadDecision> {
    tasks
        .iter()
        .map(|t| {
            let offload = rng.random_bool(0.5);
            let candidates = world.candidates(t.ue);
            if !offload || candidates.is_empty() {
                return OffloadDecision::local(t.id);
            }
            let fog = candidates[rng.random_range(0..candidates.len())];
            let cap = world.fogs[fog].capacity_hz;
            let alloc = if cap > ALLOC_MIN_HZ {
                rng.random_range(ALLOC_MIN_HZ..=cap)
            } else {
                cap
            };
            OffloadDecision::fog(t.id, fog, alloc)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OnlyCloud;

#[derive(Debug, Clone, Copy, Default)]
pub struct OnlyLocal;

#[derive(Debug, Clone, Copy, Default)]
pub struct RandomAssign;

impl Policy for OnlyCloud {
    fn name(&self) -> &str {
        "OnlyCloud"
    }

    fn decide(&mut self, tasks: &[Task], world: &WorldView<'_>, _rng: &mut SimRng) -> Vec<OffloadDecision> {
        only_cloud(tasks, world)
    }
}

impl Policy for OnlyLocal {
    fn name(&self) -> &str {
        "OnlyLocal"
    }

    fn decide(&mut self, tasks: &[Task], _world: &WorldView<'_>, _rng: &mut SimRng) -> Vec<OffloadDecision> {
        only_local(tasks)
    }
}

impl Policy for RandomAssign {
    fn name(&self) -> &str {
        "RA"
    }

    fn decide(&mut self, tasks: &[Task], world: &WorldView<'_>, rng: &mut SimRng) -> Vec<OffloadDecision> {
        random_assign(tasks, world, rng)
    }
}
