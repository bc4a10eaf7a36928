use crate::mobility::MobilityState;
use crate::model::FogNode;
use crate::traceio::TraceSample;

/// One UE's recorded trajectory, replayed by linear interpolation between
/// samples and held at the last sample afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    samples: Vec<MobilityState>,
}

impl Track {
    /// `samples` must belong to one UE and be strictly increasing in time.
    pub fn new(samples: &[TraceSample]) -> Self {
        assert!(!samples.is_empty(), "a track needs at least one sample");
        debug_assert!(samples.windows(2).all(|w| w[0].time_s < w[1].time_s));
        Self {
            samples: samples
                .iter()
                .map(|s| MobilityState::new(s.time_s, s.x_m, s.y_m, s.speed_mps, s.heading_rad))
                .collect(),
        }
    }

    pub fn first_time(&self) -> f64 {
        self.samples[0].t
    }

    pub fn last_time(&self) -> f64 {
        self.samples[self.samples.len() - 1].t
    }

    /// Index of the latest sample at or before `t`.
    fn index_at(&self, t: f64) -> Option<usize> {
        self.samples.partition_point(|s| s.t <= t).checked_sub(1)
    }

    /// Latest recorded state at or before `t`.
    pub fn latest(&self, t: f64) -> Option<&MobilityState> {
        self.index_at(t).map(|i| &self.samples[i])
    }

    /// Interpolated position; clamped to the first / last sample outside
    /// the recorded span.
    pub fn position_at(&self, t: f64) -> (f64, f64) {
        let Some(i) = self.index_at(t) else {
            return (self.samples[0].x_m, self.samples[0].y_m);
        };
        let a = &self.samples[i];
        match self.samples.get(i + 1) {
            None => (a.x_m, a.y_m),
            Some(b) => {
                let s = (t - a.t) / (b.t - a.t);
                (a.x_m + s * (b.x_m - a.x_m), a.y_m + s * (b.y_m - a.y_m))
            }
        }
    }

    /// First instant `≥ from_s` at which the replayed UE is outside `fog`'s
    /// closed coverage disk, or `None` if it never leaves.
    pub fn exit_time(&self, fog: &FogNode, from_s: f64) -> Option<f64> {
        let (mut x, mut y) = self.position_at(from_s);
        if !fog.covers(x, y) {
            return Some(from_s);
        }
        let mut t = from_s;
        let start = self.index_at(from_s).map_or(0, |i| i + 1);
        for b in &self.samples[start..] {
            if !fog.covers(b.x_m, b.y_m) {
                // Both ends of a chord inside a disk keep it inside, so
                // the exit lies on this segment: larger root of
                // |p + s·d − c|² = ρ².
                let (dx, dy) = (b.x_m - x, b.y_m - y);
                let (px, py) = (x - fog.x_m, y - fog.y_m);
                let qa = dx * dx + dy * dy;
                let qb = 2.0 * (dx * px + dy * py);
                let qc = px * px + py * py - fog.radius_m * fog.radius_m;
                let s = (-qb + (qb * qb - 4.0 * qa * qc).max(0.0).sqrt()) / (2.0 * qa);
                return Some(t + s.clamp(0.0, 1.0) * (b.t - t));
            }
            (x, y, t) = (b.x_m, b.y_m, b.t);
        }
        None
    }
}
