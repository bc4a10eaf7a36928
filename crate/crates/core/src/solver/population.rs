use rand::Rng;
use rand_distr::StandardNormal;

use crate::model::ALLOC_MIN_HZ;

use super::BatchContext;

/// One candidate joint assignment of the batch's Step-2 tasks.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    /// Fog node per task, drawn from that task's eligible set.
    pub destinations: Vec<usize>,
    /// Allocation per task, Hz.
    pub positions: Vec<f64>,
    /// Per-task step-size multiplier in `[0, 1]`.
    pub strategy: Vec<f64>,
    pub fitness: f64,
}

impl Individual {
    /// Random eligible destinations, uniform allocations, uniform strategy.
    pub fn random(ctx: &BatchContext<'_>, rng: &mut impl Rng) -> Self {
        let n = ctx.len();
        let mut destinations = Vec::with_capacity(n);
        let mut positions = Vec::with_capacity(n);
        for options in &ctx.eligible {
            let fog = options[rng.random_range(0..options.len())];
            let cap = ctx.capacity(fog);
            destinations.push(fog);
            positions.push(if cap > ALLOC_MIN_HZ {
                rng.random_range(ALLOC_MIN_HZ..=cap)
            } else {
                cap
            });
        }
        let strategy = (0..n).map(|_| rng.random::<f64>()).collect();
        let mut ind = Self {
            destinations,
            positions,
            strategy,
            fitness: f64::NEG_INFINITY,
        };
        ind.refresh(ctx);
        ind
    }

    pub fn refresh(&mut self, ctx: &BatchContext<'_>) {
        self.fitness = ctx.evaluate(&self.destinations, &self.positions);
    }
}

/// Chance of moving from cost `current` to cost `proposed`.
///
/// Costs are the negated fitness. With both costs positive this is the
/// usual `min(1, current / proposed)`. Once a cost is zero or negative the
/// ratio loses its meaning, so only non-worsening moves are taken.
pub fn acceptance_probability(current: f64, proposed: f64) -> f64 {
    if proposed <= current {
        1.0
    } else if current > 0.0 {
        current / proposed
    } else {
        0.0
    }
}

/// Metropolis–Hastings pass over the destinations: per task, propose a
/// uniformly random eligible node and keep it with
/// [`acceptance_probability`]. The allocation is clamped into the new
/// node's capacity.
pub fn metropolis_refine(ind: &mut Individual, ctx: &BatchContext<'_>, rng: &mut impl Rng) {
    for i in 0..ind.destinations.len() {
        let options = &ctx.eligible[i];
        if options.len() < 2 {
            continue;
        }
        let proposal = options[rng.random_range(0..options.len())];
        if proposal == ind.destinations[i] {
            continue;
        }
        let old = (ind.destinations[i], ind.positions[i]);
        ind.destinations[i] = proposal;
        ind.positions[i] = ind.positions[i].clamp(ALLOC_MIN_HZ, ctx.capacity(proposal));
        let fitness = ctx.evaluate(&ind.destinations, &ind.positions);
        let p = acceptance_probability(-ind.fitness, -fitness);
        if rng.random::<f64>() < p {
            ind.fitness = fitness;
        } else {
            (ind.destinations[i], ind.positions[i]) = old;
        }
    }
}

/// Gaussian step on every allocation: `pos += R·cap·N(0, σ_i)`, clamped to
/// the destination's `[ALLOC_MIN_HZ, cap]`. `capacities[i]` is the capacity
/// of task `i`'s destination. Fitness is left stale.
pub fn update_positions(ind: &mut Individual, capacities: &[f64], step_scale: f64, rng: &mut impl Rng) {
    for ((pos, &sigma), &cap) in ind.positions.iter_mut().zip(&ind.strategy).zip(capacities) {
        let z: f64 = rng.sample(StandardNormal);
        if sigma == 0.0 {
            continue;
        }
        *pos = (*pos + step_scale * cap * sigma * z).clamp(ALLOC_MIN_HZ.min(cap), cap);
    }
}

pub fn pull_towards(pos: f64, best: f64, r: f64) -> f64 {
    pos + r * (best - pos)
}

/// Index of the fittest member; ties go to the earliest.
pub fn best_index(cluster: &[Individual]) -> usize {
    let mut best = 0;
    for (i, ind) in cluster.iter().enumerate().skip(1) {
        if ind.fitness > cluster[best].fitness {
            best = i;
        }
    }
    best
}

/// Competition step inside a cluster. Each non-best member, independently
/// with `selection_prob`, copies the best's strategy and moves each
/// allocation a random fraction `r ∈ [0.5, 1]` of the way to the best's,
/// clamped to its own destination's capacity (`capacity_of(fog)`). The best
/// itself is untouched. Returns the indices that changed; their fitness is
/// left stale.
pub fn modify_strategies(
    cluster: &mut [Individual],
    selection_prob: f64,
    capacity_of: impl Fn(usize) -> f64,
    rng: &mut impl Rng,
) -> Vec<usize> {
    if cluster.is_empty() {
        return Vec::new();
    }
    let b = best_index(cluster);
    let best = cluster[b].clone();
    let mut changed = Vec::new();
    for (i, member) in cluster.iter_mut().enumerate() {
        if i == b || !rng.random_bool(selection_prob) {
            continue;
        }
        member.strategy.clone_from(&best.strategy);
        for ((pos, &target), &fog) in member.positions.iter_mut().zip(&best.positions).zip(&member.destinations) {
            let r = rng.random_range(0.5..=1.0);
            let cap = capacity_of(fog);
            *pos = pull_towards(*pos, target, r).clamp(ALLOC_MIN_HZ.min(cap), cap);
        }
        changed.push(i);
    }
    changed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::rng_stream;

    fn ind(positions: Vec<f64>, strategy: Vec<f64>, fitness: f64) -> Individual {
        Individual {
            destinations: vec![0; positions.len()],
            positions,
            strategy,
            fitness,
        }
    }

    #[test]
    fn acceptance_examples() {
        assert_eq!(acceptance_probability(10.0, 5.0), 1.0);
        assert_eq!(acceptance_probability(5.0, 10.0), 0.5);
        assert_eq!(acceptance_probability(-3.0, -4.0), 1.0);
        assert_eq!(acceptance_probability(-3.0, 2.0), 0.0);
    }

    #[test]
    fn acceptance_rate_matches_ratio() {
        let mut rng = rng_stream(7, 0);
        let p = acceptance_probability(5.0, 10.0);
        let trials = 100_000;
        let hits = (0..trials).filter(|_| rng.random::<f64>() < p).count();
        let rate = hits as f64 / trials as f64;
        assert!((rate - 0.5).abs() < 0.01, "rate {rate}");
    }

    #[test]
    fn pull_examples() {
        assert_eq!(pull_towards(2e9, 4e9, 0.5), 3e9);
        assert_eq!(pull_towards(2e9, 4e9, 1.0), 4e9);
    }

    #[test]
    fn zero_strategy_keeps_position() {
        let mut rng = rng_stream(1, 0);
        let mut a = ind(vec![2e9, 3e9], vec![0.0, 0.0], 0.0);
        update_positions(&mut a, &[5e9, 5e9], 0.1, &mut rng);
        assert_eq!(a.positions, vec![2e9, 3e9]);
    }

    #[test]
    fn clamped_steps_stay_within_capacity() {
        let mut rng = rng_stream(2, 0);
        let cap = 4e9;
        let mut a = ind(vec![3.9e9], vec![1.0], 0.0);
        for _ in 0..10_000 {
            update_positions(&mut a, &[cap], 0.5, &mut rng);
            assert!(a.positions[0] <= cap && a.positions[0] >= ALLOC_MIN_HZ);
        }
    }

    #[test]
    fn step_variance_matches_strategy() {
        let mut rng = rng_stream(3, 0);
        let (cap, r, sigma) = (5e9, 0.1, 0.4);
        let n = 100_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            // Centered so the clamp never binds.
            let mut a = ind(vec![2.5e9], vec![sigma], 0.0);
            update_positions(&mut a, &[cap], r, &mut rng);
            let d = a.positions[0] - 2.5e9;
            sum += d;
            sum_sq += d * d;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        let expected = (r * cap * sigma).powi(2);
        assert!((var / expected - 1.0).abs() < 0.05, "{var} vs {expected}");
    }

    #[test]
    fn no_selection_leaves_cluster_alone() {
        let mut rng = rng_stream(4, 0);
        let mut cluster = vec![
            ind(vec![1e9], vec![0.2], -5.0),
            ind(vec![2e9], vec![0.7], -3.0),
            ind(vec![3e9], vec![0.9], -8.0),
        ];
        let before = cluster.clone();
        assert!(modify_strategies(&mut cluster, 0.0, |_| 5e9, &mut rng).is_empty());
        assert_eq!(cluster, before);
    }

    #[test]
    fn full_selection_pulls_everyone_but_the_best() {
        let mut rng = rng_stream(5, 0);
        let mut cluster = vec![
            ind(vec![1e9], vec![0.2], -5.0),
            ind(vec![4e9], vec![0.7], -3.0),
            ind(vec![3e9], vec![0.9], -8.0),
        ];
        let changed = modify_strategies(&mut cluster, 1.0, |_| 5e9, &mut rng);
        assert_eq!(changed, vec![0, 2]);
        assert_eq!(cluster[1], ind(vec![4e9], vec![0.7], -3.0));
        for i in [0, 2] {
            assert_eq!(cluster[i].strategy, vec![0.7]);
        }
        // r ∈ [0.5, 1] → at least half way to 4e9.
        assert_eq!(cluster[0].destinations, vec![0]);
        assert!(cluster[0].positions[0] >= 2.5e9 && cluster[0].positions[0] <= 4e9);
        assert!(cluster[2].positions[0] >= 3.5e9 && cluster[2].positions[0] <= 4e9);
    }
}
