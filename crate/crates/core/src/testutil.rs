//! Small hand-built worlds shared by unit tests.

use crate::mobility::MobilityState;
use crate::model::{FogNode, FogPool, SystemParams, Task, UserEquipment};
use crate::policy::{Field, WorldView};

pub struct Fixture {
    pub params: SystemParams,
    pub ues: Vec<UserEquipment>,
    pub states: Vec<MobilityState>,
    pub fogs: Vec<FogNode>,
    pub pools: Vec<FogPool>,
    pub busy: Vec<f64>,
    pub active: Vec<bool>,
    pub field: Field,
}

impl Fixture {
    /// Three 5 GHz nodes of radius 300 m in a 700 m square, and `n` UEs
    /// spread around the middle, all moving.
    pub fn new(n: usize) -> Self {
        let fogs: Vec<FogNode> = [(200.0, 200.0), (500.0, 200.0), (350.0, 450.0)]
            .iter()
            .enumerate()
            .map(|(id, &(x_m, y_m))| FogNode {
                id,
                x_m,
                y_m,
                radius_m: 300.0,
                capacity_hz: 5e9,
            })
            .collect();
        let ues = (0..n)
            .map(|id| UserEquipment {
                id,
                name: format!("u{id}"),
                local_frequency_hz: 2.5e9,
                tx_power_w: 0.1,
            })
            .collect();
        let states = (0..n)
            .map(|i| {
                let a = i as f64 * 1.3;
                MobilityState::new(0.0, 350.0 + 60.0 * a.cos(), 300.0 + 60.0 * a.sin(), 10.0, a)
            })
            .collect();
        Self {
            params: SystemParams::default(),
            ues,
            states,
            pools: fogs.iter().map(|f| FogPool::new(f.capacity_hz)).collect(),
            fogs,
            busy: vec![0.0; n],
            active: vec![true; n],
            field: Field {
                width_m: 700.0,
                height_m: 700.0,
            },
        }
    }

    pub fn view(&self) -> WorldView<'_> {
        WorldView {
            now_s: 0.0,
            params: &self.params,
            ues: &self.ues,
            ue_states: &self.states,
            ue_active: &self.active,
            fogs: &self.fogs,
            pools: &self.pools,
            local_busy_until: &self.busy,
            field: self.field,
            sojourn_cap_s: 600.0,
        }
    }
}

pub fn task(id: u64, ue: usize, cycles_per_bit: f64, latency_weight: f64) -> Task {
    Task {
        id,
        ue,
        release_time: 0.0,
        data_size_bits: 1.5e8,
        cycles_per_bit,
        latency_weight,
    }
}
