//! "GCGA-approx": a greedy, migration-aware offloading choice biased
//! towards an even fog load (Gini coefficient of utilization), followed by
//! a generational GA over the fog allocations.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::mobility::sojourn_time;
use crate::model::{
    cloud_cost_with_uplink, fog_cost_with_uplink, local_cost, migration_indicator, OffloadDecision, Task,
    ALLOC_MIN_HZ,
};
use crate::policy::{Policy, SimRng, WorldView};
use crate::solver::{optimal_allocation, BatchContext};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GcgaConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    /// Per-gene mutation chance.
    pub mutation_prob: f64,
    /// Mutation standard deviation as a fraction of node capacity.
    pub mutation_scale: f64,
}

impl Default for GcgaConfig {
    fn default() -> Self {
        Self {
            population: 40,
            generations: 20,
            crossover_prob: 0.9,
            mutation_prob: 0.2,
            mutation_scale: 0.1,
        }
    }
}

impl GcgaConfig {
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut problems = Vec::new();
        if self.population < 1 {
            problems.push("gcga.population must be at least 1".to_string());
        }
        for (name, p) in [("crossover_prob", self.crossover_prob), ("mutation_prob", self.mutation_prob)] {
            if !(0.0..=1.0).contains(&p) {
                problems.push(format!("gcga.{name} must lie in [0, 1]"));
            }
        }
        if !(self.mutation_scale >= 0.0) {
            problems.push("gcga.mutation_scale must be non-negative".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems)
        }
    }
}

/// Gini coefficient of non-negative values; 0 for an all-zero vector.
pub fn gini(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let sum: f64 = values.iter().sum();
    if values.is_empty() || sum <= 0.0 {
        return 0.0;
    }
    let mut diff = 0.0;
    for a in values {
        for b in values {
            diff += (a - b).abs();
        }
    }
    diff / (2.0 * n * sum)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GcgaOutcome {
    pub decisions: Vec<OffloadDecision>,
    /// Positions (in the input) of the tasks sent to fog nodes.
    pub fog_tasks: Vec<usize>,
    /// Best GA fitness after seeding and after each generation.
    pub best_per_generation: Vec<f64>,
}

pub fn gcga_assign(tasks: &[Task], world: &WorldView<'_>, config: &GcgaConfig, rng: &mut SimRng) -> Vec<OffloadDecision> {
    gcga_assign_detailed(tasks, world, config, rng).decisions
}

pub fn gcga_assign_detailed(
    tasks: &[Task],
    world: &WorldView<'_>,
    config: &GcgaConfig,
    rng: &mut SimRng,
) -> GcgaOutcome {
    let mut decisions = greedy(tasks, world);
    let fog_tasks: Vec<usize> = (0..tasks.len()).filter(|&i| decisions[i].fog.is_some()).collect();
    let mut history = Vec::new();
    if !fog_tasks.is_empty() {
        let destinations: Vec<usize> = fog_tasks.iter().map(|&i| decisions[i].fog.expect("fog task")).collect();
        let seed: Vec<f64> = fog_tasks.iter().map(|&i| decisions[i].alloc_hz).collect();
        let batch: Vec<Task> = fog_tasks.iter().map(|&i| tasks[i].clone()).collect();
        let eligible = destinations.iter().map(|&j| vec![j]).collect();
        let ctx = BatchContext::new(world, batch, eligible, 0.0, 0.0);

        let mut initial = vec![seed];
        while initial.len() < config.population.max(1) {
            initial.push(
                destinations
                    .iter()
                    .map(|&j| random_alloc(ctx.capacity(j), rng))
                    .collect(),
            );
        }
        let (best, hist) = refine_allocations(&ctx, &destinations, initial, config, rng);
        for (k, &i) in fog_tasks.iter().enumerate() {
            decisions[i].alloc_hz = best[k];
        }
        history = hist;
    }
    GcgaOutcome {
        decisions,
        fog_tasks,
        best_per_generation: history,
    }
}

fn random_alloc(cap: f64, rng: &mut impl Rng) -> f64 {
    if cap > ALLOC_MIN_HZ {
        rng.random_range(ALLOC_MIN_HZ..=cap)
    } else {
        cap
    }
}

/// Greedy pass in batch order. Fog options are scored by their
/// migration-aware cost inflated by `1 + Gini` of the utilization that
/// would result; the winning node then competes with local and cloud on
/// its plain cost. Earlier choices in the batch are reserved tentatively.
fn greedy(tasks: &[Task], world: &WorldView<'_>) -> Vec<OffloadDecision> {
    let now = world.now_s;
    let params = world.params;
    let mut pools = world.pools.to_vec();
    let mut busy = world.local_busy_until.to_vec();
    let mut load: Vec<f64> = pools
        .iter()
        .map(|p| {
            p.reservations()
                .iter()
                .filter(|r| r.end_s > now)
                .map(|r| r.alloc_hz)
                .sum::<f64>()
                / p.capacity_hz()
        })
        .collect();

    let mut out = Vec::with_capacity(tasks.len());
    for task in tasks {
        let ue = &world.ues[task.ue];
        let link = world.uplink(task.ue);
        let local = local_cost(task, ue, (busy[task.ue] - now).max(0.0), params).total;
        let cloud = world
            .relay(task.ue)
            .map(|_| cloud_cost_with_uplink(task, ue, &link, params).total);
        let arrival = now + link.transmission_time(task);

        // (score, ψ, fog, alloc)
        let mut best_fog: Option<(f64, f64, usize, f64)> = None;
        for j in world.candidates(task.ue) {
            let alloc = optimal_allocation(task, params, world.fogs[j].capacity_hz);
            let Ok(wait) = pools[j].estimate_wait(arrival, alloc) else {
                continue;
            };
            let cost = fog_cost_with_uplink(task, ue, &link, alloc, wait, params);
            let migrates = match sojourn_time(&world.ue_states[task.ue], &world.fogs[j]).seconds() {
                Some(s) => migration_indicator(s, 0.0, cost.latency_s),
                None => true,
            };
            let psi = cost.total + if migrates { params.migration_coeff * task.data_size_bits } else { 0.0 };
            let mut after = load.clone();
            after[j] += alloc / world.fogs[j].capacity_hz;
            let score = psi * (1.0 + gini(&after));
            if best_fog.is_none_or(|(s, ..)| score < s) {
                best_fog = Some((score, psi, j, alloc));
            }
        }

        let cloud_total = cloud.unwrap_or(f64::INFINITY);
        let decision = match best_fog {
            Some((_, psi, j, alloc)) if psi <= local && psi <= cloud_total => {
                let duration = task.required_cycles() / alloc;
                pools[j]
                    .admit_or_queue(arrival, alloc, duration)
                    .expect("allocation within capacity");
                load[j] += alloc / world.fogs[j].capacity_hz;
                OffloadDecision::fog(task.id, j, alloc)
            }
            _ if local <= cloud_total => {
                busy[task.ue] = busy[task.ue].max(now) + task.required_cycles() / ue.local_frequency_hz;
                OffloadDecision::local(task.id)
            }
            _ => OffloadDecision::cloud(task.id),
        };
        out.push(decision);
    }
    out
}

fn tournament<'a>(pop: &'a [(Vec<f64>, f64)], rng: &mut impl Rng) -> &'a Vec<f64> {
    let a = &pop[rng.random_range(0..pop.len())];
    let b = &pop[rng.random_range(0..pop.len())];
    if b.1 > a.1 {
        &b.0
    } else {
        &a.0
    }
}

/// Generational GA over allocation vectors for fixed destinations: binary
/// tournament selection, one-point crossover, Gaussian mutation and
/// single-elite carry-over. Fitness is the batch fitness without the
/// workload term. Returns the best genome and the best fitness after
/// seeding and after every generation.
pub fn refine_allocations(
    ctx: &BatchContext<'_>,
    destinations: &[usize],
    initial: Vec<Vec<f64>>,
    config: &GcgaConfig,
    rng: &mut impl Rng,
) -> (Vec<f64>, Vec<f64>) {
    assert!(!initial.is_empty());
    let size = initial.len();
    let n = destinations.len();
    let caps: Vec<f64> = destinations.iter().map(|&j| ctx.capacity(j)).collect();
    let score = |g: &Vec<f64>| ctx.evaluate(destinations, g);

    let mut pop: Vec<(Vec<f64>, f64)> = initial
        .into_iter()
        .map(|g| {
            let f = score(&g);
            (g, f)
        })
        .collect();
    let best_of = |pop: &[(Vec<f64>, f64)]| {
        let mut b = 0;
        for i in 1..pop.len() {
            if pop[i].1 > pop[b].1 {
                b = i;
            }
        }
        b
    };

    let mut history = vec![pop[best_of(&pop)].1];
    for _ in 0..config.generations {
        let elite = pop[best_of(&pop)].clone();
        let mut next = vec![elite];
        while next.len() < size {
            let a = tournament(&pop, rng);
            let b = tournament(&pop, rng);
            let mut child = if n > 1 && rng.random_bool(config.crossover_prob) {
                let cut = rng.random_range(1..n);
                a[..cut].iter().chain(&b[cut..]).copied().collect()
            } else {
                a.clone()
            };
            for (gene, &cap) in child.iter_mut().zip(&caps) {
                if config.mutation_prob > 0.0 && rng.random_bool(config.mutation_prob) {
                    let z: f64 = rng.sample(StandardNormal);
                    *gene = (*gene + config.mutation_scale * cap * z).clamp(ALLOC_MIN_HZ.min(cap), cap);
                }
            }
            let f = score(&child);
            next.push((child, f));
        }
        pop = next;
        history.push(pop[best_of(&pop)].1);
    }
    let b = best_of(&pop);
    (pop.swap_remove(b).0, history)
}

#[derive(Debug, Clone, Default)]
pub struct Gcga {
    pub config: GcgaConfig,
}

impl Gcga {
    pub fn new(config: GcgaConfig) -> Self {
        Self { config }
    }
}

impl Policy for Gcga {
    fn name(&self) -> &str {
        "GCGA-approx"
    }

    fn decide(&mut self, tasks: &[Task], world: &WorldView<'_>, rng: &mut SimRng) -> Vec<OffloadDecision> {
        gcga_assign(tasks, world, &self.config, rng)
    }
}
