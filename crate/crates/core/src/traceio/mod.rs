//! Mobility traces, fog layouts and scenario configuration files.
//!
//! The canonical trace format is a CSV with the header
//! `time_s,ue_id,x_m,y_m,speed_mps,heading_rad`; SUMO floating-car-data
//! XML is accepted as an alternative input and converted on the fly.

mod csv_trace;
mod fcd;
mod layout;
mod scenario;
mod synthetic;

pub use csv_trace::{parse_trace_csv, read_trace_csv, write_trace_csv, TRACE_HEADER};
pub use fcd::{parse_sumo_fcd, read_sumo_fcd, sumo_angle_to_heading};
pub use layout::{grid_layout, parse_fog_layout, read_fog_layout, write_fog_layout, LAYOUT_HEADER};
pub use scenario::{load_config, load_scenario, read_trace, FieldConfig, Scenario, ScenarioConfig};
pub use synthetic::synthetic_trace;

use serde::{Deserialize, Serialize};

/// One row of a mobility trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub time_s: f64,
    pub ue_id: String,
    pub x_m: f64,
    pub y_m: f64,
    pub speed_mps: f64,
    pub heading_rad: f64,
}

/// Orders samples by time, then UE id.
pub(crate) fn sort_samples(samples: &mut [TraceSample]) {
    samples.sort_by(|a, b| a.time_s.total_cmp(&b.time_s).then_with(|| a.ue_id.cmp(&b.ue_id)));
}
