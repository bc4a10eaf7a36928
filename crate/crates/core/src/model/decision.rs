use crate::error::{Constraint, Error, Result};

use super::FogNode;

/// Solver output for one task.
///
/// The flags are kept as raw integers rather than `bool` so that the
/// binary-domain constraints can be checked on externally produced data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffloadDecision {
    pub task_id: u64,
    /// Offload flag `s`.
    pub s: u8,
    /// Selected fog node, if any.
    pub fog: Option<usize>,
    /// Cloud selection flag.
    pub cloud: u8,
    /// Allocated fog frequency; ignored unless `fog` is set.
    pub alloc_hz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionKind {
    Local,
    Fog(usize),
    Cloud,
}

impl DecisionKind {
    pub fn label(&self) -> &'static str {
        match self {
            DecisionKind::Local => "local",
            DecisionKind::Fog(_) => "fog",
            DecisionKind::Cloud => "cloud",
        }
    }

    pub fn fog(&self) -> Option<usize> {
        match self {
            DecisionKind::Fog(j) => Some(*j),
            _ => None,
        }
    }
}

impl OffloadDecision {
    pub fn local(task_id: u64) -> Self {
        Self {
            task_id,
            s: 0,
            fog: None,
            cloud: 0,
            alloc_hz: 0.0,
        }
    }

    pub fn fog(task_id: u64, fog: usize, alloc_hz: f64) -> Self {
        Self {
            task_id,
            s: 1,
            fog: Some(fog),
            cloud: 0,
            alloc_hz,
        }
    }

    pub fn cloud(task_id: u64) -> Self {
        Self {
            task_id,
            s: 1,
            fog: None,
            cloud: 1,
            alloc_hz: 0.0,
        }
    }

    /// Case of the cost dispatch. Only meaningful for validated decisions.
    pub fn kind(&self) -> DecisionKind {
        match (self.s, self.fog, self.cloud) {
            (1, Some(j), _) => DecisionKind::Fog(j),
            (1, None, 1) => DecisionKind::Cloud,
            _ => DecisionKind::Local,
        }
    }
}

/// Checks C1–C5 and names the first violated constraint.
pub fn validate_decision(decision: &OffloadDecision, fogs: &[FogNode]) -> Result<()> {
    let fail = |constraint, detail: String| {
        Err(Error::ConstraintViolation {
            constraint,
            task_id: decision.task_id,
            detail,
        })
    };
    if decision.s > 1 {
        return fail(Constraint::C1, format!("offload flag is {}", decision.s));
    }
    if let Some(j) = decision.fog {
        if j >= fogs.len() {
            return fail(Constraint::C2, format!("unknown fog node {j}"));
        }
    }
    if decision.cloud > 1 {
        return fail(Constraint::C3, format!("cloud flag is {}", decision.cloud));
    }
    let destinations = usize::from(decision.fog.is_some()) + usize::from(decision.cloud);
    if destinations > 1 {
        return fail(Constraint::C4, "both fog and cloud selected".into());
    }
    if decision.s == 1 && destinations == 0 {
        return fail(Constraint::C4, "offloaded without a destination".into());
    }
    if decision.s == 0 && destinations == 1 {
        return fail(Constraint::C4, "destination set on a local task".into());
    }
    if let Some(j) = decision.fog {
        let cap = fogs[j].capacity_hz;
        if !(decision.alloc_hz > 0.0 && decision.alloc_hz <= cap) {
            return fail(
                Constraint::C5,
                format!("allocation {} Hz outside (0, {cap}]", decision.alloc_hz),
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fogs() -> Vec<FogNode> {
        (0..3)
            .map(|id| FogNode {
                id,
                x_m: 0.0,
                y_m: 0.0,
                radius_m: 10.0,
                capacity_hz: 4e9 + id as f64 * 1e9,
            })
            .collect()
    }

    /// Feasibility written directly from the problem statement: binary
    /// s, a_j and a_c; Σ_j a_j + a_c ≤ 1; s = Σ_j a_j + a_c; c ≤ c_j on the
    /// chosen node.
    fn feasible_by_formulation(d: &OffloadDecision, fogs: &[FogNode]) -> bool {
        let a_fog: Vec<u8> = (0..fogs.len())
            .map(|j| u8::from(d.fog == Some(j)))
            .collect();
        let known_fog = d.fog.is_none_or(|j| j < fogs.len());
        let binary = d.s <= 1 && d.cloud <= 1 && known_fog;
        let dest_sum: u32 = a_fog.iter().map(|&a| u32::from(a)).sum::<u32>() + u32::from(d.cloud);
        let exclusive = dest_sum <= 1 && u32::from(d.s) == dest_sum;
        let capacity = a_fog
            .iter()
            .zip(fogs)
            .all(|(&a, f)| a == 0 || (d.alloc_hz > 0.0 && d.alloc_hz <= f.capacity_hz));
        binary && exclusive && capacity
    }

    #[test]
    fn constructors_are_valid() {
        let f = fogs();
        assert!(validate_decision(&OffloadDecision::local(1), &f).is_ok());
        assert!(validate_decision(&OffloadDecision::cloud(1), &f).is_ok());
        assert!(validate_decision(&OffloadDecision::fog(1, 2, 6e9), &f).is_ok());
    }

    #[test]
    fn names_violated_constraint() {
        let f = fogs();
        let check = |d: OffloadDecision, want: Constraint| match validate_decision(&d, &f) {
            Err(Error::ConstraintViolation { constraint, .. }) => assert_eq!(constraint, want),
            other => panic!("expected {want}, got {other:?}"),
        };
        check(OffloadDecision { s: 2, ..OffloadDecision::local(1) }, Constraint::C1);
        check(OffloadDecision::fog(1, 7, 1e9), Constraint::C2);
        check(OffloadDecision { cloud: 3, ..OffloadDecision::cloud(1) }, Constraint::C3);
        check(OffloadDecision { cloud: 1, ..OffloadDecision::fog(1, 0, 1e9) }, Constraint::C4);
        check(OffloadDecision { s: 1, ..OffloadDecision::local(1) }, Constraint::C4);
        check(OffloadDecision { s: 0, ..OffloadDecision::cloud(1) }, Constraint::C4);
        check(OffloadDecision::fog(1, 0, 4.5e9), Constraint::C5);
        check(OffloadDecision::fog(1, 0, 0.0), Constraint::C5);
    }

    #[test]
    fn fuzz_against_formulation_predicate() {
        let f = fogs();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut accepted = 0;
        for i in 0..10_000u64 {
            let d = OffloadDecision {
                task_id: i,
                s: rng.random_range(0..3),
                fog: if rng.random_bool(0.5) {
                    Some(rng.random_range(0..4))
                } else {
                    None
                },
                cloud: rng.random_range(0..3),
                alloc_hz: rng.random_range(-1e9..7e9),
            };
            let expected = feasible_by_formulation(&d, &f);
            assert_eq!(validate_decision(&d, &f).is_ok(), expected, "{d:?}");
            accepted += usize::from(expected);
        }
        assert!(accepted > 500, "fuzz should exercise the feasible set");
    }
}
