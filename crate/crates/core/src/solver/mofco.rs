use rand::{Rng, SeedableRng};

use crate::model::{OffloadDecision, Task};
use crate::policy::{Policy, SimRng, WorldView};

use super::population::best_index;
use super::{
    eliminate_fog_nodes, metropolis_refine, modify_strategies, update_positions, cluster_population,
    BatchContext, Individual, SolverConfig,
};

/// Everything [`mofco_assign_detailed`] learned about a batch.
#[derive(Debug, Clone, PartialEq)]
pub struct MofcoOutcome {
    /// One decision per input task, in input order.
    pub decisions: Vec<OffloadDecision>,
    /// Positions (in the input) of the tasks that went through the game.
    pub step2_tasks: Vec<usize>,
    /// Best fitness of each cluster, recorded after clustering and after
    /// every generation. Empty when the game was skipped.
    pub cluster_best: Vec<Vec<f64>>,
    pub best_fitness: Option<f64>,
}

pub fn mofco_assign(
    tasks: &[Task],
    world: &WorldView<'_>,
    config: &SolverConfig,
    rng: &mut SimRng,
) -> Vec<OffloadDecision> {
    mofco_assign_detailed(tasks, world, config, rng).decisions
}

/// Fog-node elimination followed, for the tasks that keep at least one
/// node, by the clustered evolutionary game. `config.generations` may be
/// zero, in which case the best seeded individual is returned.
pub fn mofco_assign_detailed(
    tasks: &[Task],
    world: &WorldView<'_>,
    config: &SolverConfig,
    rng: &mut SimRng,
) -> MofcoOutcome {
    let mut decisions: Vec<Option<OffloadDecision>> = vec![None; tasks.len()];
    let mut step2 = Vec::new();
    let mut eligible = Vec::new();
    for (i, task) in tasks.iter().enumerate() {
        let report = eliminate_fog_nodes(task, &world.candidates(task.ue), world);
        match report.immediate {
            Some(d) => decisions[i] = Some(d),
            None => {
                step2.push(i);
                eligible.push(report.eligible);
            }
        }
    }

    let mut outcome = MofcoOutcome {
        decisions: Vec::new(),
        step2_tasks: step2.clone(),
        cluster_best: Vec::new(),
        best_fitness: None,
    };

    if !step2.is_empty() {
        let batch: Vec<Task> = step2.iter().map(|&i| tasks[i].clone()).collect();
        let ctx = BatchContext::new(world, batch, eligible, config.fnef_coeff, config.latency_thresh_s);
        let (best, history) = evolve(&ctx, config, rng);
        for (k, &i) in step2.iter().enumerate() {
            decisions[i] = Some(OffloadDecision::fog(
                tasks[i].id,
                best.destinations[k],
                best.positions[k],
            ));
        }
        outcome.best_fitness = Some(best.fitness);
        outcome.cluster_best = history;
    }

    outcome.decisions = decisions.into_iter().map(|d| d.expect("every task decided")).collect();
    outcome
}

fn features(ind: &Individual, ctx: &BatchContext<'_>) -> Vec<f64> {
    let field = ctx.world.field;
    let mut out = Vec::with_capacity(3 * ind.destinations.len());
    for (&fog, &pos) in ind.destinations.iter().zip(&ind.positions) {
        let node = &ctx.world.fogs[fog];
        out.push(node.x_m / field.width_m);
        out.push(node.y_m / field.height_m);
        out.push(pos / node.capacity_hz);
    }
    out
}

fn evolve(ctx: &BatchContext<'_>, config: &SolverConfig, rng: &mut SimRng) -> (Individual, Vec<Vec<f64>>) {
    let p = config.population.max(1);
    // Per-individual streams keep each member's draws independent of how
    // the others are scheduled.
    let mut streams: Vec<SimRng> = (0..p).map(|_| SimRng::seed_from_u64(rng.random())).collect();
    let mut population: Vec<Individual> = streams
        .iter_mut()
        .map(|s| {
            let mut ind = Individual::random(ctx, s);
            metropolis_refine(&mut ind, ctx, s);
            ind
        })
        .collect();

    let k = config.clusters.clamp(1, p);
    let feats: Vec<Vec<f64>> = population.iter().map(|ind| features(ind, ctx)).collect();
    let groups = cluster_population(&feats, k, rng);

    // Regroup members (and their streams) contiguously per cluster.
    let mut slots: Vec<Option<(Individual, SimRng)>> =
        population.drain(..).zip(streams).map(Some).collect();
    let mut clusters: Vec<Vec<Individual>> = Vec::with_capacity(k);
    let mut cluster_streams: Vec<Vec<SimRng>> = Vec::with_capacity(k);
    for group in &groups {
        let (members, rngs) = group.iter().map(|&i| slots[i].take().expect("partition")).unzip();
        clusters.push(members);
        cluster_streams.push(rngs);
    }

    let capacity_of = |fog: usize| ctx.capacity(fog);
    let mut history = vec![clusters.iter().map(|c| c[best_index(c)].fitness).collect::<Vec<_>>()];
    for _ in 0..config.generations {
        for (cluster, rngs) in clusters.iter_mut().zip(cluster_streams.iter_mut()) {
            let b = best_index(cluster);
            for (i, (ind, s)) in cluster.iter_mut().zip(rngs.iter_mut()).enumerate() {
                if i == b {
                    continue;
                }
                let caps: Vec<f64> = ind.destinations.iter().map(|&j| capacity_of(j)).collect();
                update_positions(ind, &caps, config.step_scale, s);
                ind.refresh(ctx);
            }
            for i in modify_strategies(cluster, config.selection_prob, capacity_of, rng) {
                cluster[i].refresh(ctx);
            }
        }
        history.push(clusters.iter().map(|c| c[best_index(c)].fitness).collect());
    }

    let best = clusters
        .into_iter()
        .map(|mut c| {
            let b = best_index(&c);
            c.swap_remove(b)
        })
        .reduce(|a, b| if b.fitness > a.fitness { b } else { a })
        .expect("at least one cluster");
    (best, history)
}

/// The MOFCO offloading policy.
#[derive(Debug, Clone, Default)]
pub struct Mofco {
    pub config: SolverConfig,
}

impl Mofco {
    pub fn new(config: SolverConfig) -> Self {
        Self { config }
    }
}

impl Policy for Mofco {
    fn name(&self) -> &str {
        "MOFCO"
    }

    fn decide(&mut self, tasks: &[Task], world: &WorldView<'_>, rng: &mut SimRng) -> Vec<OffloadDecision> {
        mofco_assign(tasks, world, &self.config, rng)
    }
}
