//! System-wide domain types and the three-layer cost model.
//!
//! Units are fixed throughout the crate: seconds, bits, Hz (cycles/s),
//! watts, joules and meters. Power levels given in dBm are converted to
//! milliwatts before they enter the SINR expression.

mod cost;
mod decision;
mod pool;

pub use cost::{
    cloud_cost, cloud_cost_with_uplink, fog_cost, fog_cost_with_uplink, local_cost,
    migration_indicator, total_cost, uplink, with_migration, CostBreakdown, CostContext, Uplink,
};
pub use decision::{validate_decision, DecisionKind, OffloadDecision};
pub use pool::{FogPool, Reservation};

/// Floor applied to every fog allocation; keeps `f / c` finite when the
/// closed-form optimum collapses towards zero.
pub const ALLOC_MIN_HZ: f64 = 1e6;

/// One offloadable unit of work released by a UE.
#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub id: u64,
    /// Index of the owning UE in the scenario's UE list.
    pub ue: usize,
    pub release_time: f64,
    pub data_size_bits: f64,
    pub cycles_per_bit: f64,
    /// Latency sensitivity in `[0, 1]`; `1 - latency_weight` weights energy.
    pub latency_weight: f64,
}

impl Task {
    /// CPU cycles needed to execute the task.
    pub fn required_cycles(&self) -> f64 {
        self.data_size_bits * self.cycles_per_bit
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.data_size_bits > 0.0) {
            return Err(format!("task {}: data size must be positive", self.id));
        }
        if !(self.cycles_per_bit > 0.0) {
            return Err(format!("task {}: cycles per bit must be positive", self.id));
        }
        if !(0.0..=1.0).contains(&self.latency_weight) {
            return Err(format!("task {}: latency weight outside [0, 1]", self.id));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserEquipment {
    pub id: usize,
    /// Identifier carried by the mobility trace (e.g. a SUMO vehicle id).
    pub name: String,
    pub local_frequency_hz: f64,
    pub tx_power_w: f64,
}

impl UserEquipment {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.local_frequency_hz > 0.0) {
            return Err(format!("UE {}: local frequency must be positive", self.name));
        }
        if !(self.tx_power_w > 0.0) {
            return Err(format!("UE {}: transmit power must be positive", self.name));
        }
        Ok(())
    }
}

/// A stationary fog server with a circular coverage disk.
#[derive(Debug, Clone, PartialEq)]
pub struct FogNode {
    pub id: usize,
    pub x_m: f64,
    pub y_m: f64,
    pub radius_m: f64,
    pub capacity_hz: f64,
}

impl FogNode {
    /// Closed-disk coverage test.
    pub fn covers(&self, x: f64, y: f64) -> bool {
        self.distance_sq(x, y) <= self.radius_m * self.radius_m
    }

    pub fn distance_sq(&self, x: f64, y: f64) -> f64 {
        let dx = x - self.x_m;
        let dy = y - self.y_m;
        dx * dx + dy * dy
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.radius_m > 0.0) {
            return Err(format!("fog {}: radius must be positive", self.id));
        }
        if !(self.capacity_hz > 0.0) {
            return Err(format!("fog {}: capacity must be positive", self.id));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Effective switched capacitance, J·s²/cycle³.
    pub kappa: f64,
    pub noise_dbm: f64,
    pub interference_dbm: f64,
    pub bandwidth_hz: f64,
    /// Fog-to-cloud wired link rate.
    pub wired_rate_bps: f64,
    /// Migration cost per bit of task data.
    pub migration_coeff: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            kappa: 1e-27,
            noise_dbm: -174.0,
            interference_dbm: -75.0,
            bandwidth_hz: 1e7,
            wired_rate_bps: 15e6,
            migration_coeff: 1e-7,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut problems = Vec::new();
        let checks = [
            ("kappa", self.kappa),
            ("noise power", dbm_to_mw(self.noise_dbm)),
            ("interference power", dbm_to_mw(self.interference_dbm)),
            ("bandwidth", self.bandwidth_hz),
            ("wired rate", self.wired_rate_bps),
        ];
        for (name, value) in checks {
            if !(value > 0.0) || !value.is_finite() {
                problems.push(format!("{name} must be strictly positive"));
            }
        }
        if !(self.migration_coeff >= 0.0) {
            problems.push("migration coefficient must be non-negative".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems)
        }
    }
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}
