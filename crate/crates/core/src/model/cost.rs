use crate::error::{Error, Result};

use super::{dbm_to_mw, FogNode, OffloadDecision, SystemParams, Task, UserEquipment};
use super::decision::{validate_decision, DecisionKind};

/// Latency, energy and migration components of one task's cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    pub latency_s: f64,
    pub energy_j: f64,
    pub migration_penalty: f64,
    /// `λ·latency + (1−λ)·energy + migration_penalty`.
    pub total: f64,
}

impl CostBreakdown {
    pub fn weighted(latency_weight: f64, latency_s: f64, energy_j: f64) -> Self {
        Self {
            latency_s,
            energy_j,
            migration_penalty: 0.0,
            total: latency_weight * latency_s + (1.0 - latency_weight) * energy_j,
        }
    }
}

/// Uplink quality between a UE and any fog node (interference is constant
/// across pairs, so the rate does not depend on the node).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uplink {
    pub rate_bps: f64,
    pub sinr: f64,
}

impl Uplink {
    pub fn transmission_time(&self, task: &Task) -> f64 {
        task.data_size_bits / self.rate_bps
    }
}

pub fn uplink(ue: &UserEquipment, params: &SystemParams) -> Uplink {
    let power_mw = ue.tx_power_w * 1e3;
    let sinr = power_mw / (dbm_to_mw(params.noise_dbm) + dbm_to_mw(params.interference_dbm));
    Uplink {
        rate_bps: params.bandwidth_hz * (1.0 + sinr).log2(),
        sinr,
    }
}

pub fn local_cost(
    task: &Task,
    ue: &UserEquipment,
    wait_s: f64,
    params: &SystemParams,
) -> CostBreakdown {
    let cycles = task.required_cycles();
    let latency = cycles / ue.local_frequency_hz + wait_s;
    let energy = params.kappa * ue.local_frequency_hz.powi(2) * cycles;
    CostBreakdown::weighted(task.latency_weight, latency, energy)
}

pub fn fog_cost(
    task: &Task,
    ue: &UserEquipment,
    fog: &FogNode,
    alloc_hz: f64,
    wait_s: f64,
    params: &SystemParams,
) -> Result<CostBreakdown> {
    if !(alloc_hz > 0.0 && alloc_hz <= fog.capacity_hz) {
        return Err(Error::ConstraintViolation {
            constraint: crate::error::Constraint::C5,
            task_id: task.id,
            detail: format!(
                "allocation {alloc_hz} Hz outside (0, {}] on fog {}",
                fog.capacity_hz, fog.id
            ),
        });
    }
    Ok(fog_cost_with_uplink(
        task,
        ue,
        &uplink(ue, params),
        alloc_hz,
        wait_s,
        params,
    ))
}

/// Fog cost for a precomputed uplink. Does not check the allocation bound.
pub fn fog_cost_with_uplink(
    task: &Task,
    ue: &UserEquipment,
    link: &Uplink,
    alloc_hz: f64,
    wait_s: f64,
    params: &SystemParams,
) -> CostBreakdown {
    let cycles = task.required_cycles();
    let t_trans = link.transmission_time(task);
    let e_trans = ue.tx_power_w * t_trans;
    let t_exec = cycles / alloc_hz;
    let e_exec = params.kappa * alloc_hz * alloc_hz * cycles;
    CostBreakdown::weighted(task.latency_weight, t_exec + t_trans + wait_s, e_trans + e_exec)
}

/// Cost of relaying through `_relay` to the cloud. Cloud execution time is
/// zero: a task completes once it reaches the cloud.
pub fn cloud_cost(
    task: &Task,
    ue: &UserEquipment,
    _relay: &FogNode,
    params: &SystemParams,
) -> CostBreakdown {
    cloud_cost_with_uplink(task, ue, &uplink(ue, params), params)
}

pub fn cloud_cost_with_uplink(
    task: &Task,
    ue: &UserEquipment,
    link: &Uplink,
    params: &SystemParams,
) -> CostBreakdown {
    let t_trans = link.transmission_time(task);
    let latency = t_trans + task.data_size_bits / params.wired_rate_bps;
    CostBreakdown::weighted(task.latency_weight, latency, ue.tx_power_w * t_trans)
}

/// Migration happens iff the UE leaves coverage before the task ends.
pub fn migration_indicator(sojourn_s: f64, start_s: f64, end_s: f64) -> bool {
    sojourn_s < end_s - start_s
}

pub fn with_migration(
    cost: CostBreakdown,
    task: &Task,
    migrated: bool,
    params: &SystemParams,
) -> CostBreakdown {
    if !migrated {
        return cost;
    }
    let penalty = params.migration_coeff * task.data_size_bits;
    CostBreakdown {
        migration_penalty: cost.migration_penalty + penalty,
        total: cost.total + penalty,
        ..cost
    }
}

/// Everything `total_cost` needs besides the decision itself.
#[derive(Debug, Clone, Copy)]
pub struct CostContext<'a> {
    pub task: &'a Task,
    pub ue: &'a UserEquipment,
    pub fogs: &'a [FogNode],
    pub params: &'a SystemParams,
    pub local_wait_s: f64,
    pub fog_wait_s: f64,
    pub migrated: bool,
    /// Nearest fog node covering the UE, if any.
    pub relay: Option<usize>,
}

pub fn total_cost(decision: &OffloadDecision, ctx: &CostContext<'_>) -> Result<CostBreakdown> {
    validate_decision(decision, ctx.fogs)?;
    match decision.kind() {
        DecisionKind::Local => Ok(local_cost(ctx.task, ctx.ue, ctx.local_wait_s, ctx.params)),
        DecisionKind::Fog(j) => {
            let cost = fog_cost(
                ctx.task,
                ctx.ue,
                &ctx.fogs[j],
                decision.alloc_hz,
                ctx.fog_wait_s,
                ctx.params,
            )?;
            Ok(with_migration(cost, ctx.task, ctx.migrated, ctx.params))
        }
        DecisionKind::Cloud => {
            let relay = ctx
                .relay
                .ok_or(Error::NoRelayAvailable { ue: ctx.ue.id })?;
            Ok(cloud_cost(ctx.task, ctx.ue, &ctx.fogs[relay], ctx.params))
        }
    }
}
