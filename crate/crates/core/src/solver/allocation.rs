use crate::model::{SystemParams, Task, ALLOC_MIN_HZ};

/// Allocation minimising the fog cost of `task` when migration is ignored,
/// clamped to `[ALLOC_MIN_HZ, capacity_hz]`.
///
/// Only `λ·f/c + (1−λ)·κ·c²·f` depends on `c`; its stationary point is
/// `c³ = λ / (2(1−λ)κ)`.
pub fn optimal_allocation(task: &Task, params: &SystemParams, capacity_hz: f64) -> f64 {
    let lambda = task.latency_weight;
    if lambda >= 1.0 {
        return capacity_hz;
    }
    if lambda <= 0.0 {
        return ALLOC_MIN_HZ.min(capacity_hz);
    }
    let c = (lambda / (2.0 * (1.0 - lambda) * params.kappa)).cbrt();
    c.clamp(ALLOC_MIN_HZ.min(capacity_hz), capacity_hz)
}

/// The allocation-dependent part of the fog cost.
pub fn allocation_dependent_cost(task: &Task, params: &SystemParams, alloc_hz: f64) -> f64 {
    let cycles = task.required_cycles();
    let lambda = task.latency_weight;
    lambda * cycles / alloc_hz + (1.0 - lambda) * params.kappa * alloc_hz * alloc_hz * cycles
}

#[cfg(test)]
mod tests {
    use super::*;

    fn task(lambda: f64) -> Task {
        Task {
            id: 0,
            ue: 0,
            release_time: 0.0,
            data_size_bits: 1.5e8,
            cycles_per_bit: 50.0,
            latency_weight: lambda,
        }
    }

    /// Minimiser of the allocation-dependent cost over an even grid.
    fn grid_argmin(t: &Task, p: &SystemParams, lo: f64, hi: f64, n: usize) -> f64 {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .min_by(|a, b| {
                allocation_dependent_cost(t, p, *a).total_cmp(&allocation_dependent_cost(t, p, *b))
            })
            .unwrap()
    }

    #[test]
    fn balanced_weight_matches_grid_search() {
        let p = SystemParams::default();
        let t = task(0.5);
        let c = optimal_allocation(&t, &p, 5e9);
        assert!((c - 7.937_005_259_840_997e8).abs() / c < 1e-12);
        // grid spacing over [1e6, 5e9] with 1e5 points is ~5e4 Hz
        let g = grid_argmin(&t, &p, 1e6, 5e9, 100_000);
        assert!((g - c).abs() <= 5.1e4, "grid {g} vs closed form {c}");
    }

    #[test]
    fn weight_extremes() {
        let p = SystemParams::default();
        assert_eq!(optimal_allocation(&task(1.0), &p, 5e9), 5e9);
        assert_eq!(optimal_allocation(&task(0.0), &p, 5e9), ALLOC_MIN_HZ);
    }

    #[test]
    fn clamps_to_capacity() {
        let p = SystemParams::default();
        // λ=0.99 gives ~3.7 GHz unclamped
        assert_eq!(optimal_allocation(&task(0.99), &p, 2e9), 2e9);
    }
}
