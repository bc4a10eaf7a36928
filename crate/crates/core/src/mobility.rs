//! Kinematic prediction: straight-line extrapolation, coverage sojourn
//! time, migration probability and fog workload forecasting.

use std::f64::consts::TAU;

use crate::model::FogNode;

/// Timestamped UE kinematics. Heading follows the mathematical convention
/// (0 = +x, counterclockwise), in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityState {
    pub t: f64,
    pub x_m: f64,
    pub y_m: f64,
    pub speed_mps: f64,
    pub heading_rad: f64,
}

impl MobilityState {
    pub fn new(t: f64, x_m: f64, y_m: f64, speed_mps: f64, heading_rad: f64) -> Self {
        Self {
            t,
            x_m,
            y_m,
            speed_mps,
            heading_rad: normalize_heading(heading_rad),
        }
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn normalize_heading(rad: f64) -> f64 {
    let h = rad.rem_euclid(TAU);
    if h >= TAU {
        0.0
    } else {
        h
    }
}

/// Remaining time a UE stays inside a fog node's coverage disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sojourn {
    /// Leaves coverage after this many seconds.
    Finite(f64),
    /// Inside coverage and not moving.
    Forever,
    /// Currently outside coverage.
    NotCovered,
}

impl Sojourn {
    /// Seconds of remaining coverage; `∞` for [`Sojourn::Forever`] and
    /// `None` when not covered.
    pub fn seconds(self) -> Option<f64> {
        match self {
            Sojourn::Finite(s) => Some(s),
            Sojourn::Forever => Some(f64::INFINITY),
            Sojourn::NotCovered => None,
        }
    }
}

pub fn predict_position(state: &MobilityState, dt_s: f64) -> (f64, f64) {
    let (sin, cos) = state.heading_rad.sin_cos();
    (
        state.x_m + state.speed_mps * cos * dt_s,
        state.y_m + state.speed_mps * sin * dt_s,
    )
}

/// Non-negative root of `A·ς² + B·ς + C = 0` for a UE inside the disk.
pub fn sojourn_time(state: &MobilityState, fog: &FogNode) -> Sojourn {
    let dx = state.x_m - fog.x_m;
    let dy = state.y_m - fog.y_m;
    let c = dx * dx + dy * dy - fog.radius_m * fog.radius_m;
    if c > 0.0 {
        return Sojourn::NotCovered;
    }
    let v = state.speed_mps;
    if v <= 0.0 {
        return Sojourn::Forever;
    }
    let (sin, cos) = state.heading_rad.sin_cos();
    let a = v * v;
    let b = 2.0 * v * (dx * cos + dy * sin);
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Sojourn::NotCovered;
    }
    let sqrt = disc.sqrt();
    // Same root as (−B + √disc) / 2A, arranged to avoid cancellation.
    let root = if b <= 0.0 {
        (-b + sqrt) / (2.0 * a)
    } else {
        (2.0 * c) / (-b - sqrt)
    };
    Sojourn::Finite(root.max(0.0))
}

/// Probability that the UE leaves coverage within `task_duration_s`.
pub fn migration_probability(sojourn: Sojourn, task_duration_s: f64) -> f64 {
    match sojourn {
        Sojourn::Forever => 0.0,
        Sojourn::NotCovered => 1.0,
        Sojourn::Finite(s) if s <= 0.0 => 1.0,
        Sojourn::Finite(s) => 1.0 - (-task_duration_s / s).exp(),
    }
}

/// Total sojourn time of the UEs currently covered by `fog`. A stationary
/// UE contributes `sojourn_cap_s` instead of an unbounded value.
pub fn total_sojourn(fog: &FogNode, covered: &[MobilityState], sojourn_cap_s: f64) -> f64 {
    covered
        .iter()
        .filter_map(|ue| sojourn_time(ue, fog).seconds())
        .map(|s| s.min(sojourn_cap_s))
        .sum()
}

/// Workload forecast: `min(Θ, horizon · |covered|)`.
pub fn predicted_workload(fog: &FogNode, covered: &[MobilityState], horizon_s: f64) -> f64 {
    if covered.is_empty() {
        return 0.0;
    }
    let theta: f64 = covered
        .iter()
        .filter_map(|ue| sojourn_time(ue, fog).seconds())
        .sum();
    theta.min(horizon_s * covered.len() as f64)
}
