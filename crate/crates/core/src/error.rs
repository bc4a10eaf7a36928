use std::fmt;

use thiserror::Error;

/// The five feasibility constraints an offloading decision must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// Offload flag is binary.
    C1,
    /// Fog selection is binary (refers to a known fog node).
    C2,
    /// Cloud selection is binary.
    C3,
    /// At most one destination; no destination means local execution.
    C4,
    /// Fog allocation is positive and within the node's capacity.
    C5,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Constraint::C1 => "C1",
            Constraint::C2 => "C2",
            Constraint::C3 => "C3",
            Constraint::C4 => "C4",
            Constraint::C5 => "C5",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("constraint {constraint} violated for task {task_id}: {detail}")]
    ConstraintViolation {
        constraint: Constraint,
        task_id: u64,
        detail: String,
    },

    #[error("no fog node covers UE {ue} for a cloud relay")]
    NoRelayAvailable { ue: usize },

    #[error("fog node {fog} does not cover UE {ue} at t={time_s}")]
    NotInCoverage { fog: usize, ue: usize, time_s: f64 },

    #[error("allocation {alloc_hz} Hz exceeds fog capacity {capacity_hz} Hz")]
    OverCapacity { alloc_hz: f64, capacity_hz: f64 },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error("invalid scenario: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("simulation error: {0}")]
    Simulation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(path: &str, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            message: message.into(),
        }
    }

    /// Whether the error originates from the filesystem rather than from bad input.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
