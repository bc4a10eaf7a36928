use rand::Rng;

use crate::mobility::normalize_heading;
use crate::policy::Field;

use super::{sort_samples, TraceSample};

const SPEED_RANGE: std::ops::RangeInclusive<f64> = 5.0..=15.0;

/// Random-waypoint trace sampled every second over `[0, horizon_s]`. Each
/// UE heads for a uniform waypoint at a uniform speed in 5–15 m/s and
/// picks a new waypoint and speed on arrival. A sample's speed and heading
/// describe the motion over the following second.
pub fn synthetic_trace(n_ues: usize, field: Field, horizon_s: u32, rng: &mut impl Rng) -> Vec<TraceSample> {
    let mut out = Vec::with_capacity(n_ues * (horizon_s as usize + 1));
    let point = |rng: &mut dyn rand::RngCore| {
        (
            rng.random_range(0.0..=field.width_m),
            rng.random_range(0.0..=field.height_m),
        )
    };
    let width = n_ues.saturating_sub(1).to_string().len().max(2);
    for u in 0..n_ues {
        let name = format!("ue{u:0width$}");
        let (mut x, mut y) = point(rng);
        let mut target = point(rng);
        let mut speed = rng.random_range(SPEED_RANGE);
        for t in 0..=horizon_s {
            let (dx, dy) = (target.0 - x, target.1 - y);
            out.push(TraceSample {
                time_s: t as f64,
                ue_id: name.clone(),
                x_m: x,
                y_m: y,
                speed_mps: speed,
                heading_rad: normalize_heading(dy.atan2(dx)),
            });
            let dist = dx.hypot(dy);
            if dist <= speed {
                // Stop on the waypoint for the rest of this second.
                (x, y) = target;
                target = point(rng);
                speed = rng.random_range(SPEED_RANGE);
            } else {
                x += speed * dx / dist;
                y += speed * dy / dist;
            }
        }
    }
    sort_samples(&mut out);
    out
}
