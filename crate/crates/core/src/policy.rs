//! The interface between the event loop and the offloading algorithms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::mobility::{total_sojourn, MobilityState};
use crate::model::{uplink, FogNode, FogPool, OffloadDecision, SystemParams, Task, Uplink, UserEquipment};

/// RNG used everywhere in the simulator.
pub type SimRng = ChaCha8Rng;

/// Independent deterministic stream `stream` of the run seeded by `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Rectangular movement area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Field {
    pub width_m: f64,
    pub height_m: f64,
}

/// Read-only snapshot of the world at a decision instant.
#[derive(Debug, Clone, Copy)]
pub struct WorldView<'a> {
    pub now_s: f64,
    pub params: &'a SystemParams,
    pub ues: &'a [UserEquipment],
    pub ue_states: &'a [MobilityState],
    /// Whether each UE is currently part of the trace.
    pub ue_active: &'a [bool],
    pub fogs: &'a [FogNode],
    pub pools: &'a [FogPool],
    /// Time at which each UE's local FIFO server becomes idle.
    pub local_busy_until: &'a [f64],
    pub field: Field,
    /// Stand-in for the unbounded sojourn of a stationary UE.
    pub sojourn_cap_s: f64,
}

impl WorldView<'_> {
    /// Fog nodes whose coverage contains the UE, in id order.
    pub fn candidates(&self, ue: usize) -> Vec<usize> {
        let s = &self.ue_states[ue];
        self.fogs
            .iter()
            .filter(|f| f.covers(s.x_m, s.y_m))
            .map(|f| f.id)
            .collect()
    }

    /// Nearest covering fog node, used to relay a task to the cloud.
    pub fn relay(&self, ue: usize) -> Option<usize> {
        let s = &self.ue_states[ue];
        self.fogs
            .iter()
            .filter(|f| f.covers(s.x_m, s.y_m))
            .min_by(|a, b| {
                a.distance_sq(s.x_m, s.y_m)
                    .total_cmp(&b.distance_sq(s.x_m, s.y_m))
                    .then(a.id.cmp(&b.id))
            })
            .map(|f| f.id)
    }

    pub fn local_wait(&self, ue: usize) -> f64 {
        (self.local_busy_until[ue] - self.now_s).max(0.0)
    }

    pub fn uplink(&self, ue: usize) -> Uplink {
        uplink(&self.ues[ue], self.params)
    }

    /// States of the active UEs currently inside `fog`'s coverage.
    pub fn covered_states(&self, fog: usize) -> Vec<MobilityState> {
        let f = &self.fogs[fog];
        self.ue_states
            .iter()
            .zip(self.ue_active)
            .filter(|(s, &active)| active && f.covers(s.x_m, s.y_m))
            .map(|(s, _)| *s)
            .collect()
    }

    /// Total predicted sojourn of the UEs covered by `fog`.
    pub fn total_sojourn(&self, fog: usize) -> f64 {
        total_sojourn(&self.fogs[fog], &self.covered_states(fog), self.sojourn_cap_s)
    }

    /// Queue wait a task of `alloc_hz` arriving at `arrival_s` would see
    /// on `fog`, given the snapshot of its pool.
    pub fn fog_wait(&self, fog: usize, arrival_s: f64, alloc_hz: f64) -> f64 {
        self.pools[fog]
            .estimate_wait(arrival_s, alloc_hz)
            .unwrap_or(f64::INFINITY)
    }
}

/// An offloading algorithm invoked once per timestep batch.
pub trait Policy {
    /// Label used in reports.
    fn name(&self) -> &str;

    /// One decision per task, in the same order as `tasks`.
    fn decide(&mut self, tasks: &[Task], world: &WorldView<'_>, rng: &mut SimRng) -> Vec<OffloadDecision>;
}
