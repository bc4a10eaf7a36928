//! Discrete-event simulation of a scenario under one offloading policy.
//!
//! Mobility advances in 1 s ticks. Tasks released since the previous tick
//! form one batch, which the policy decides at the tick. Local tasks queue
//! FIFO on their UE; fog tasks are admitted to the node's capacity pool
//! when their upload finishes; cloud tasks finish after upload plus the
//! wired hop. Whether a fog task migrated is judged against the UE's
//! replayed trajectory, not the policy's prediction.

mod events;
mod generator;
mod ledger;
mod track;

pub use events::{Event, EventKind, EventQueue};
pub use generator::{generate_tasks, TaskGeneratorSpec};
pub use ledger::{normalized_cost, MetricsLedger, TaskRecord};
pub use track::Track;

use std::collections::BTreeMap;
use std::time::Instant;

use log::{debug, warn};

use crate::error::{Error, Result};
use crate::mobility::MobilityState;
use crate::model::{
    cloud_cost_with_uplink, fog_cost_with_uplink, local_cost, migration_indicator, uplink, validate_decision,
    with_migration, DecisionKind, FogNode, FogPool, OffloadDecision, SystemParams, Task, UserEquipment,
};
use crate::policy::{rng_stream, Field, Policy, WorldView};
use crate::traceio::{grid_layout, synthetic_trace, Scenario, TraceSample};

/// RNG stream ids derived from the run seed.
pub mod streams {
    pub const UES: u64 = 0;
    pub const TASKS: u64 = 1;
    pub const TRACE: u64 = 2;
    pub const POLICY: u64 = 3;
    pub const FOGS: u64 = 4;
    pub const SYSTEM: u64 = 5;
}

/// A scenario with every random draw fixed for one seed. All policies run
/// against the same instance see identical UEs, nodes and tasks.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub params: SystemParams,
    pub ues: Vec<UserEquipment>,
    pub tracks: Vec<Track>,
    pub fogs: Vec<FogNode>,
    pub tasks: Vec<Task>,
    pub horizon_s: u32,
    pub field: Field,
}

impl Instance {
    pub fn build(scenario: &Scenario, seed: u64) -> Result<Self> {
        scenario.validate()?;
        let config = &scenario.config;
        let horizon_s = scenario.horizon_s();
        let field = scenario.field();

        let mut system_rng = rng_stream(seed, streams::SYSTEM);
        let params = SystemParams {
            kappa: config.kappa,
            noise_dbm: config.noise_dbm,
            interference_dbm: config.interference_dbm,
            bandwidth_hz: config.bandwidth_hz.sample(&mut system_rng),
            wired_rate_bps: config.wired_rate_bps,
            migration_coeff: config.migration_coeff,
        };

        let synthetic;
        let trace: &[TraceSample] = match &scenario.trace {
            Some(t) => t,
            None => {
                synthetic = synthetic_trace(config.n_ues, field, horizon_s, &mut rng_stream(seed, streams::TRACE));
                &synthetic
            }
        };
        let mut by_ue: BTreeMap<&str, Vec<TraceSample>> = BTreeMap::new();
        for s in trace {
            by_ue.entry(&s.ue_id).or_default().push(s.clone());
        }
        if by_ue.len() < config.n_ues {
            warn!("trace holds {} UEs, fewer than the {} requested", by_ue.len(), config.n_ues);
        }

        let mut ue_rng = rng_stream(seed, streams::UES);
        let mut ues = Vec::new();
        let mut tracks = Vec::new();
        for (id, (name, samples)) in by_ue.into_iter().take(config.n_ues).enumerate() {
            ues.push(UserEquipment {
                id,
                name: name.to_string(),
                local_frequency_hz: config.ue_frequency_hz.sample(&mut ue_rng),
                tx_power_w: config.tx_power_mw.sample(&mut ue_rng) / 1000.0,
            });
            tracks.push(Track::new(&samples));
        }

        let fogs = match &scenario.layout {
            Some(layout) => layout.clone(),
            None => grid_layout(config.n_fog, field, config.fog_capacity_hz, &mut rng_stream(seed, streams::FOGS)),
        };

        let windows: Vec<(f64, f64)> = tracks.iter().map(|t| (t.first_time(), t.last_time())).collect();
        let spec = TaskGeneratorSpec::from_config(config, f64::from(horizon_s));
        let tasks = generate_tasks(&windows, &spec, &mut rng_stream(seed, streams::TASKS));

        let instance = Self {
            params,
            ues,
            tracks,
            fogs,
            tasks,
            horizon_s,
            field,
        };
        instance.validate()?;
        Ok(instance)
    }

    pub fn validate(&self) -> Result<()> {
        let mut p = Vec::new();
        if let Err(e) = self.params.validate() {
            p.extend(e);
        }
        if self.fogs.is_empty() {
            p.push("no fog nodes".to_string());
        }
        if self.ues.len() != self.tracks.len() {
            p.push("every UE needs a track".to_string());
        }
        for (i, f) in self.fogs.iter().enumerate() {
            if f.id != i {
                p.push(format!("fog at position {i} has id {}", f.id));
            }
            if let Err(e) = f.validate() {
                p.push(e);
            }
        }
        for ue in &self.ues {
            if let Err(e) = ue.validate() {
                p.push(e);
            }
        }
        for (i, t) in self.tasks.iter().enumerate() {
            if let Err(e) = t.validate() {
                p.push(e);
            }
            if t.id != i as u64 || t.ue >= self.ues.len() {
                p.push(format!("task {} is mis-indexed", t.id));
            }
        }
        if p.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(p))
        }
    }
}

#[derive(Debug, Clone)]
struct InFlight {
    decision: OffloadDecision,
    decided_t: f64,
    wait_s: f64,
    exit_t: Option<f64>,
    done: bool,
}

struct Sim<'a> {
    inst: &'a Instance,
    queue: EventQueue,
    states: Vec<MobilityState>,
    active: Vec<bool>,
    pools: Vec<FogPool>,
    busy: Vec<f64>,
    pending: Vec<usize>,
    flights: Vec<Option<InFlight>>,
    records: Vec<TaskRecord>,
    released: usize,
    decisions_checked: usize,
    gap_warnings: usize,
    migration_events: usize,
}

/// Runs `policy` over `instance`. The policy draws from its own stream of
/// `seed`, so its randomness never disturbs the scenario draws.
pub fn run(instance: &Instance, policy: &mut dyn Policy, seed: u64) -> Result<MetricsLedger> {
    instance.validate()?;
    let started = Instant::now();
    let n = instance.ues.len();
    let mut sim = Sim {
        inst: instance,
        queue: EventQueue::new(),
        states: instance.tracks.iter().map(|t| t.latest(f64::INFINITY).copied().expect("non-empty")).collect(),
        active: vec![false; n],
        pools: instance.fogs.iter().map(|f| FogPool::new(f.capacity_hz)).collect(),
        busy: vec![0.0; n],
        pending: Vec::new(),
        flights: vec![None; instance.tasks.len()],
        records: Vec::with_capacity(instance.tasks.len()),
        released: 0,
        decisions_checked: 0,
        gap_warnings: 0,
        migration_events: 0,
    };
    // Releases go in first so that a release and a tick at the same
    // instant land in that tick's batch.
    for (i, t) in instance.tasks.iter().enumerate() {
        sim.queue.push(t.release_time, EventKind::TaskRelease { task: i })?;
    }
    for tick in 0..=instance.horizon_s {
        sim.queue.push(f64::from(tick), EventKind::MobilityTick { tick })?;
    }

    let mut rng = rng_stream(seed, streams::POLICY);
    while let Some(ev) = sim.queue.pop() {
        match ev.kind {
            EventKind::TaskRelease { task } => {
                sim.pending.push(task);
                sim.released += 1;
            }
            EventKind::MobilityTick { tick } => {
                sim.advance_mobility(f64::from(tick));
                if !sim.pending.is_empty() {
                    let batch = std::mem::take(&mut sim.pending);
                    sim.dispatch(f64::from(tick), &batch, policy, &mut rng)?;
                }
            }
            EventKind::TransmissionDone { task } => sim.transmission_done(ev.time_s, task)?,
            EventKind::ExecStart { task } => debug!("t={:.3} task {task} starts", ev.time_s),
            EventKind::ExecDone { task } => sim.exec_done(ev.time_s, task)?,
            EventKind::MigrationOccurred { task } => {
                if sim.flights[task].as_ref().is_some_and(|f| !f.done) {
                    sim.migration_events += 1;
                    debug!("t={:.3} task {task}: UE left its fog node", ev.time_s);
                }
            }
        }
    }

    if !sim.pending.is_empty() {
        return Err(Error::Simulation(format!("{} tasks were never dispatched", sim.pending.len())));
    }
    sim.records.sort_by_key(|r| r.task_id);
    Ok(MetricsLedger {
        algo: policy.name().to_string(),
        seed,
        n_ues: n,
        n_fog: instance.fogs.len(),
        records: sim.records,
        released: sim.released,
        decisions_checked: sim.decisions_checked,
        gap_warnings: sim.gap_warnings,
        migration_events: sim.migration_events,
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}

impl Sim<'_> {
    fn advance_mobility(&mut self, t: f64) {
        for (u, track) in self.inst.tracks.iter().enumerate() {
            let live = t >= track.first_time() && t <= track.last_time();
            self.active[u] = live;
            if let Some(s) = track.latest(t) {
                if live && t - s.t >= 1.0 {
                    self.gap_warnings += 1;
                    warn!("UE {} has no sample at t={t}; holding its last state", self.inst.ues[u].name);
                }
                self.states[u] = *s;
            } else {
                self.states[u] = *track.latest(f64::INFINITY).expect("non-empty");
            }
        }
    }

    fn dispatch(&mut self, t: f64, batch: &[usize], policy: &mut dyn Policy, rng: &mut crate::policy::SimRng) -> Result<()> {
        let inst = self.inst;
        let tasks: Vec<Task> = batch.iter().map(|&i| inst.tasks[i].clone()).collect();
        let world = WorldView {
            now_s: t,
            params: &inst.params,
            ues: &inst.ues,
            ue_states: &self.states,
            ue_active: &self.active,
            fogs: &inst.fogs,
            pools: &self.pools,
            local_busy_until: &self.busy,
            field: inst.field,
            sojourn_cap_s: f64::from(inst.horizon_s),
        };
        let decisions = policy.decide(&tasks, &world, rng);
        if decisions.len() != tasks.len() {
            return Err(Error::Simulation(format!(
                "{} returned {} decisions for {} tasks",
                policy.name(),
                decisions.len(),
                tasks.len()
            )));
        }
        // Checked against the pre-dispatch world, as the policy saw it.
        for (d, task) in decisions.iter().zip(&tasks) {
            if d.task_id != task.id {
                return Err(Error::Simulation(format!("decision for task {} out of order (expected {})", d.task_id, task.id)));
            }
            validate_decision(d, &inst.fogs)?;
            match d.kind() {
                DecisionKind::Fog(j) => {
                    let s = &self.states[task.ue];
                    if !inst.fogs[j].covers(s.x_m, s.y_m) {
                        return Err(Error::NotInCoverage {
                            fog: j,
                            ue: task.ue,
                            time_s: t,
                        });
                    }
                }
                DecisionKind::Cloud if world.relay(task.ue).is_none() => {
                    return Err(Error::NoRelayAvailable { ue: task.ue });
                }
                _ => {}
            }
        }
        self.decisions_checked += decisions.len();

        for (&i, d) in batch.iter().zip(decisions) {
            let task = &inst.tasks[i];
            let ue = &inst.ues[task.ue];
            let mut flight = InFlight {
                decision: d,
                decided_t: t,
                wait_s: 0.0,
                exit_t: None,
                done: false,
            };
            match d.kind() {
                DecisionKind::Local => {
                    let start = t.max(self.busy[task.ue]);
                    let end = start + task.required_cycles() / ue.local_frequency_hz;
                    self.busy[task.ue] = end;
                    flight.wait_s = start - t;
                    self.queue.push(start, EventKind::ExecStart { task: i })?;
                    self.queue.push(end, EventKind::ExecDone { task: i })?;
                }
                DecisionKind::Fog(j) => {
                    let link = uplink(ue, &inst.params);
                    self.queue.push(t + link.transmission_time(task), EventKind::TransmissionDone { task: i })?;
                    flight.exit_t = inst.tracks[task.ue].exit_time(&inst.fogs[j], t);
                    if let Some(exit) = flight.exit_t {
                        self.queue.push(exit, EventKind::MigrationOccurred { task: i })?;
                    }
                }
                DecisionKind::Cloud => {
                    let link = uplink(ue, &inst.params);
                    self.queue.push(t + link.transmission_time(task), EventKind::TransmissionDone { task: i })?;
                }
            }
            self.flights[i] = Some(flight);
        }
        Ok(())
    }

    fn transmission_done(&mut self, now: f64, i: usize) -> Result<()> {
        let task = &self.inst.tasks[i];
        let flight = self.flights[i].as_mut().expect("dispatched");
        match flight.decision.kind() {
            DecisionKind::Fog(j) => {
                let alloc = flight.decision.alloc_hz;
                let duration = task.required_cycles() / alloc;
                let wait = self.pools[j].admit_or_queue(now, alloc, duration)?;
                if !self.pools[j].audit() {
                    return Err(Error::Simulation(format!("fog {j} over capacity at t={now}")));
                }
                flight.wait_s = wait;
                self.queue.push(now + wait, EventKind::ExecStart { task: i })?;
                self.queue.push(now + wait + duration, EventKind::ExecDone { task: i })?;
            }
            DecisionKind::Cloud => {
                self.queue
                    .push(now + task.data_size_bits / self.inst.params.wired_rate_bps, EventKind::ExecDone { task: i })?;
            }
            DecisionKind::Local => unreachable!("local tasks do not transmit"),
        }
        Ok(())
    }

    fn exec_done(&mut self, now: f64, i: usize) -> Result<()> {
        let inst = self.inst;
        let task = &inst.tasks[i];
        let ue = &inst.ues[task.ue];
        let flight = self.flights[i].as_mut().expect("dispatched");
        flight.done = true;
        let d = flight.decision;
        let (cost, migrated) = match d.kind() {
            DecisionKind::Local => (local_cost(task, ue, flight.wait_s, &inst.params), false),
            DecisionKind::Cloud => (cloud_cost_with_uplink(task, ue, &uplink(ue, &inst.params), &inst.params), false),
            DecisionKind::Fog(j) => {
                let link = uplink(ue, &inst.params);
                let base = fog_cost_with_uplink(task, ue, &link, d.alloc_hz, flight.wait_s, &inst.params);
                let migrated = flight
                    .exit_t
                    .is_some_and(|exit| migration_indicator(exit - flight.decided_t, flight.decided_t, now));
                self.pools[j].release_finished(now);
                if !self.pools[j].audit() {
                    return Err(Error::Simulation(format!("fog {j} over capacity at t={now}")));
                }
                (with_migration(base, task, migrated, &inst.params), migrated)
            }
        };
        self.records.push(TaskRecord {
            task_id: task.id,
            ue: task.ue,
            ue_name: ue.name.clone(),
            release_t: task.release_time,
            decided_t: flight.decided_t,
            completed_t: now,
            decision: d.kind(),
            alloc_hz: if d.fog.is_some() { d.alloc_hz } else { 0.0 },
            latency_s: cost.latency_s,
            energy_j: cost.energy_j,
            migration_penalty: cost.migration_penalty,
            migrated,
            exit_t: if d.fog.is_some() { flight.exit_t } else { None },
            cost: cost.total,
        });
        Ok(())
    }
}
