use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::model::Task;
use crate::range::ValueRange;
use crate::traceio::ScenarioConfig;

/// Task-generation parameters; ranged values are drawn per UE (periods,
/// rates) or per task (size, cycles, latency weight).
#[derive(Debug, Clone, PartialEq)]
pub struct TaskGeneratorSpec {
    pub period_s: ValueRange,
    pub aperiodic_rate: ValueRange,
    pub data_size_bits: ValueRange,
    pub cycles_per_bit: ValueRange,
    pub latency_weight: ValueRange,
    pub horizon_s: f64,
}

impl TaskGeneratorSpec {
    pub fn from_config(config: &ScenarioConfig, horizon_s: f64) -> Self {
        Self {
            period_s: config.periodic_period_s,
            aperiodic_rate: config.aperiodic_rate,
            data_size_bits: config.data_size_bits,
            cycles_per_bit: config.cycles_per_bit,
            latency_weight: config.latency_weight,
            horizon_s,
        }
    }
}

/// Periodic plus Poisson task releases for each UE inside its active
/// window `[start, end)`, clipped to the horizon. Periodic releases sit at
/// `start + phase + n·T` with a uniform phase in `[0, T)`. Ids follow
/// `(release time, UE)` order.
pub fn generate_tasks(windows: &[(f64, f64)], spec: &TaskGeneratorSpec, rng: &mut impl Rng) -> Vec<Task> {
    let mut tasks = Vec::new();
    for (ue, &(start, end)) in windows.iter().enumerate() {
        let end = end.min(spec.horizon_s);
        let period = spec.period_s.sample(rng);
        let phase = rng.random_range(0.0..period);
        let rate = spec.aperiodic_rate.sample(rng);

        let mut releases = Vec::new();
        let mut t = start + phase;
        while t < end {
            releases.push(t);
            t += period;
        }
        if rate > 0.0 {
            let exp = Exp::new(rate).expect("positive rate");
            let mut t = start + exp.sample(rng);
            while t < end {
                releases.push(t);
                t += exp.sample(rng);
            }
        }
        for release_time in releases {
            tasks.push(Task {
                id: 0,
                ue,
                release_time,
                data_size_bits: spec.data_size_bits.sample(rng),
                cycles_per_bit: spec.cycles_per_bit.sample(rng),
                latency_weight: spec.latency_weight.sample(rng),
            });
        }
    }
    tasks.sort_by(|a, b| a.release_time.total_cmp(&b.release_time).then(a.ue.cmp(&b.ue)));
    for (i, t) in tasks.iter_mut().enumerate() {
        t.id = i as u64;
    }
    tasks
}
