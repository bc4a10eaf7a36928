use crate::mobility::{migration_probability, sojourn_time};
use crate::model::{fog_cost_with_uplink, FogPool, Task, Uplink};
use crate::policy::WorldView;

/// Fog Node Evaluation Factor: rewards busy nodes for low-latency tasks and
/// idle nodes for the others. `total_sojourn` is the node's summed UE
/// sojourn time.
pub fn fnef(total_sojourn: f64, fnef_coeff: f64, latency_thresh_s: f64, expected_latency_s: f64) -> f64 {
    if fnef_coeff == 0.0 {
        return 0.0;
    }
    if expected_latency_s < latency_thresh_s {
        -total_sojourn * fnef_coeff
    } else {
        total_sojourn * fnef_coeff
    }
}

/// `−(φ + FNEF + P(migration)·δ·D)`.
pub fn fitness_from_parts(
    fog_cost: f64,
    fnef: f64,
    migration_prob: f64,
    migration_coeff: f64,
    data_size_bits: f64,
) -> f64 {
    -(fog_cost + fnef + migration_prob * migration_coeff * data_size_bits)
}

/// Per-batch precomputation shared by every fitness evaluation of the
/// evolutionary game: the tasks, their eligible fog sets, uplinks and the
/// per-node total sojourn.
pub struct BatchContext<'w> {
    pub world: &'w WorldView<'w>,
    pub tasks: Vec<Task>,
    pub eligible: Vec<Vec<usize>>,
    pub fnef_coeff: f64,
    pub latency_thresh_s: f64,
    links: Vec<Uplink>,
    sojourn_totals: Vec<f64>,
}

impl<'w> BatchContext<'w> {
    pub fn new(
        world: &'w WorldView<'w>,
        tasks: Vec<Task>,
        eligible: Vec<Vec<usize>>,
        fnef_coeff: f64,
        latency_thresh_s: f64,
    ) -> Self {
        assert_eq!(tasks.len(), eligible.len());
        let links = tasks.iter().map(|t| world.uplink(t.ue)).collect();
        let mut sojourn_totals = vec![0.0; world.fogs.len()];
        let mut needed = vec![false; world.fogs.len()];
        if fnef_coeff != 0.0 {
            for &j in eligible.iter().flatten() {
                needed[j] = true;
            }
        }
        for (j, total) in sojourn_totals.iter_mut().enumerate() {
            if needed[j] {
                *total = world.total_sojourn(j);
            }
        }
        Self {
            world,
            tasks,
            eligible,
            fnef_coeff,
            latency_thresh_s,
            links,
            sojourn_totals,
        }
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn capacity(&self, fog: usize) -> f64 {
        self.world.fogs[fog].capacity_hz
    }

    pub fn transmission_time(&self, i: usize) -> f64 {
        self.links[i].transmission_time(&self.tasks[i])
    }

    /// Fitness of task `i` on `fog` with allocation `alloc_hz` after a queue
    /// wait of `wait_s`. Expected latency covers execution, transmission and
    /// wait; migration is judged over that latency from the decision instant.
    pub fn task_fitness(&self, i: usize, fog: usize, alloc_hz: f64, wait_s: f64) -> f64 {
        let task = &self.tasks[i];
        let world = self.world;
        let ue = &world.ues[task.ue];
        let cost = fog_cost_with_uplink(task, ue, &self.links[i], alloc_hz, wait_s, world.params);
        let latency = cost.latency_s;
        let factor = fnef(
            self.sojourn_totals[fog],
            self.fnef_coeff,
            self.latency_thresh_s,
            latency,
        );
        let sojourn = sojourn_time(&world.ue_states[task.ue], &world.fogs[fog]);
        let p = migration_probability(sojourn, latency);
        fitness_from_parts(
            cost.total,
            factor,
            p,
            world.params.migration_coeff,
            task.data_size_bits,
        )
    }

    /// Fitness of a whole assignment. Tasks reserve capacity in copies of
    /// the snapshot pools in batch order, so later tasks see the queue built
    /// by earlier ones on the same node.
    pub fn evaluate(&self, destinations: &[usize], positions: &[f64]) -> f64 {
        let mut pools: Vec<(usize, FogPool)> = Vec::new();
        let mut total = 0.0;
        for (i, (&fog, &alloc)) in destinations.iter().zip(positions).enumerate() {
            let slot = match pools.iter().position(|(j, _)| *j == fog) {
                Some(k) => k,
                None => {
                    pools.push((fog, self.world.pools[fog].clone()));
                    pools.len() - 1
                }
            };
            let arrival = self.world.now_s + self.transmission_time(i);
            let duration = self.tasks[i].required_cycles() / alloc;
            let Ok(wait) = pools[slot].1.admit_or_queue(arrival, alloc, duration) else {
                return f64::NEG_INFINITY;
            };
            total += self.task_fitness(i, fog, alloc, wait);
        }
        total
    }
}
