//! Named algorithms and helpers for running several of them on the same
//! scenario instance.

use std::fmt;
use std::str::FromStr;

use crate::baselines::{Gcga, OnlyCloud, OnlyLocal, RandomAssign};
use crate::engine::{run, Instance, MetricsLedger};
use crate::error::Result;
use crate::policy::Policy;
use crate::solver::Mofco;
use crate::traceio::{Scenario, ScenarioConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Mofco,
    Gcga,
    Ra,
    OnlyCloud,
    OnlyLocal,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Mofco,
        Algorithm::Gcga,
        Algorithm::Ra,
        Algorithm::OnlyCloud,
        Algorithm::OnlyLocal,
    ];

    /// Name used on the command line.
    pub fn key(self) -> &'static str {
        match self {
            Algorithm::Mofco => "mofco",
            Algorithm::Gcga => "gcga",
            Algorithm::Ra => "ra",
            Algorithm::OnlyCloud => "onlycloud",
            Algorithm::OnlyLocal => "onlylocal",
        }
    }

    pub fn policy(self, config: &ScenarioConfig) -> Box<dyn Policy> {
        match self {
            Algorithm::Mofco => Box::new(Mofco::new(config.solver.clone())),
            Algorithm::Gcga => Box::new(Gcga::new(config.gcga.clone())),
            Algorithm::Ra => Box::new(RandomAssign),
            Algorithm::OnlyCloud => Box::new(OnlyCloud),
            Algorithm::OnlyLocal => Box::new(OnlyLocal),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.key().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected mofco, gcga, ra, onlycloud or onlylocal)"))
    }
}

/// Builds the instance for `seed` once and runs every algorithm on it.
pub fn run_algorithms(scenario: &Scenario, algos: &[Algorithm], seed: u64) -> Result<Vec<MetricsLedger>> {
    let instance = Instance::build(scenario, seed)?;
    algos
        .iter()
        .map(|a| run(&instance, a.policy(&scenario.config).as_mut(), seed))
        .collect()
}
