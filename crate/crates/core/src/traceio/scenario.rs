use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::baselines::GcgaConfig;
use crate::error::{Error, Result};
use crate::model::FogNode;
use crate::policy::Field;
use crate::range::ValueRange;
use crate::solver::SolverConfig;

use super::{read_fog_layout, read_sumo_fcd, read_trace_csv, TraceSample};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub width_m: f64,
    pub height_m: f64,
}

/// Everything a run needs besides the trace and the fog layout. Ranged
/// values are drawn per UE / per fog node / per scenario from the run
/// seed. Every key is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub n_ues: usize,
    pub n_fog: usize,
    /// Simulated seconds; defaults to the trace length, or 600 s when the
    /// trace is synthesized.
    pub horizon_s: Option<u32>,
    /// Movement area; defaults to the trace's bounding box from the origin,
    /// or 2000 m × 2000 m for synthetic traces.
    pub field: Option<FieldConfig>,
    pub ue_frequency_hz: ValueRange,
    pub tx_power_mw: ValueRange,
    pub fog_capacity_hz: ValueRange,
    pub noise_dbm: f64,
    pub interference_dbm: f64,
    /// Drawn once per scenario and shared by all UEs.
    pub bandwidth_hz: ValueRange,
    pub wired_rate_bps: f64,
    pub kappa: f64,
    pub migration_coeff: f64,
    pub data_size_bits: ValueRange,
    pub cycles_per_bit: ValueRange,
    pub latency_weight: ValueRange,
    pub periodic_period_s: ValueRange,
    pub aperiodic_rate: ValueRange,
    pub solver: SolverConfig,
    pub gcga: GcgaConfig,
}

pub const DEFAULT_SYNTHETIC_HORIZON_S: u32 = 600;
pub const DEFAULT_FIELD: Field = Field {
    width_m: 2000.0,
    height_m: 2000.0,
};

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n_ues: 70,
            n_fog: 35,
            horizon_s: None,
            field: None,
            ue_frequency_hz: ValueRange::new(2e9, 3e9),
            tx_power_mw: ValueRange::new(80.0, 100.0),
            fog_capacity_hz: ValueRange::new(4e9, 6e9),
            noise_dbm: -174.0,
            interference_dbm: -75.0,
            bandwidth_hz: ValueRange::new(10e6, 20e6),
            wired_rate_bps: 15e6,
            kappa: 1e-27,
            migration_coeff: 1e-7,
            data_size_bits: ValueRange::new(125e6, 175e6),
            cycles_per_bit: ValueRange::new(30.0, 120.0),
            latency_weight: ValueRange::new(0.0, 1.0),
            periodic_period_s: ValueRange::new(30.0, 40.0),
            aperiodic_rate: ValueRange::new(0.05, 0.2),
            solver: SolverConfig::default(),
            gcga: GcgaConfig::default(),
        }
    }
}

impl ScenarioConfig {
    /// All problems at once, not just the first.
    pub fn problems(&self) -> Vec<String> {
        let mut p = Vec::new();
        if self.n_ues < 1 {
            p.push("n_ues must be at least 1".to_string());
        }
        if self.n_fog < 1 {
            p.push("n_fog must be at least 1".to_string());
        }
        if self.horizon_s == Some(0) {
            p.push("horizon_s must be positive".to_string());
        }
        if let Some(f) = self.field {
            if !(f.width_m > 0.0 && f.height_m > 0.0 && f.width_m.is_finite() && f.height_m.is_finite()) {
                p.push("field dimensions must be positive".to_string());
            }
        }
        let positive = [
            ("ue_frequency_hz", self.ue_frequency_hz),
            ("tx_power_mw", self.tx_power_mw),
            ("fog_capacity_hz", self.fog_capacity_hz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("data_size_bits", self.data_size_bits),
            ("cycles_per_bit", self.cycles_per_bit),
            ("periodic_period_s", self.periodic_period_s),
        ];
        for (name, r) in positive {
            if !r.is_valid() || !r.all(|v| v > 0.0) {
                p.push(format!("{name} must be positive with lo <= hi"));
            }
        }
        if !self.latency_weight.is_valid() || !self.latency_weight.all(|v| (0.0..=1.0).contains(&v)) {
            p.push("latency_weight must lie in [0, 1] with lo <= hi".to_string());
        }
        if !self.aperiodic_rate.is_valid() || !self.aperiodic_rate.all(|v| v >= 0.0) {
            p.push("aperiodic_rate must be non-negative with lo <= hi".to_string());
        }
        for (name, v) in [("wired_rate_bps", self.wired_rate_bps), ("kappa", self.kappa)] {
            if !(v > 0.0 && v.is_finite()) {
                p.push(format!("{name} must be positive"));
            }
        }
        for (name, v) in [("noise_dbm", self.noise_dbm), ("interference_dbm", self.interference_dbm)] {
            if !v.is_finite() {
                p.push(format!("{name} must be finite"));
            }
        }
        if !(self.migration_coeff >= 0.0 && self.migration_coeff.is_finite()) {
            p.push("migration_coeff must be non-negative".to_string());
        }
        if let Err(e) = self.solver.validate() {
            p.extend(e);
        }
        if let Err(e) = self.gcga.validate() {
            p.extend(e);
        }
        p
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.problems();
        if p.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(p))
        }
    }

    /// Parses JSON text. Unknown keys and invalid values are reported
    /// together in one validation error.
    pub fn from_json(text: &str, label: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::parse(label, e.line() as u64, e.to_string()))?;
        let defaults = serde_json::to_value(Self::default()).expect("serializable");
        let mut problems = Vec::new();
        unknown_keys(&value, &defaults, "", &mut problems);
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        let config: Self = serde_json::from_value(value).map_err(|e| Error::parse(label, 0, e.to_string()))?;
        config.validate()?;
        Ok(config)
    }
}

fn unknown_keys(value: &Value, reference: &Value, prefix: &str, out: &mut Vec<String>) {
    let Value::Object(map) = value else {
        if prefix.is_empty() {
            out.push("config must be a JSON object".to_string());
        }
        return;
    };
    let Value::Object(known) = reference else {
        return;
    };
    for (k, v) in map {
        let path = format!("{prefix}{k}");
        match known.get(k) {
            None => out.push(format!("unknown key `{path}`")),
            Some(r @ Value::Object(_)) if k != "field" => unknown_keys(v, r, &format!("{path}."), out),
            Some(_) => {}
        }
    }
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    ScenarioConfig::from_json(&text, &path.display().to_string())
}

/// Reads a trace, choosing the FCD reader for `.xml` files and the CSV
/// reader otherwise.
pub fn read_trace(path: &Path) -> Result<Vec<TraceSample>> {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("xml") => read_sumo_fcd(path),
        _ => read_trace_csv(path),
    }
}

/// A configuration plus optional external trace and fog layout. Missing
/// pieces are synthesized when the scenario is instantiated for a seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub trace: Option<Vec<TraceSample>>,
    pub layout: Option<Vec<FogNode>>,
}

impl Scenario {
    pub fn new(config: ScenarioConfig, trace: Option<Vec<TraceSample>>, layout: Option<Vec<FogNode>>) -> Result<Self> {
        let s = Self { config, trace, layout };
        s.validate()?;
        Ok(s)
    }

    pub fn synthetic(config: ScenarioConfig) -> Result<Self> {
        Self::new(config, None, None)
    }

    pub fn horizon_s(&self) -> u32 {
        match (self.config.horizon_s, &self.trace) {
            (Some(h), _) => h,
            (None, Some(t)) => trace_end(t).floor() as u32,
            (None, None) => DEFAULT_SYNTHETIC_HORIZON_S,
        }
    }

    pub fn field(&self) -> Field {
        match (self.config.field, &self.trace) {
            (Some(f), _) => Field {
                width_m: f.width_m,
                height_m: f.height_m,
            },
            (None, Some(t)) if !t.is_empty() => Field {
                width_m: t.iter().map(|s| s.x_m).fold(1.0, f64::max),
                height_m: t.iter().map(|s| s.y_m).fold(1.0, f64::max),
            },
            _ => DEFAULT_FIELD,
        }
    }

    pub fn n_fog(&self) -> usize {
        self.layout.as_ref().map_or(self.config.n_fog, Vec::len)
    }

    pub fn validate(&self) -> Result<()> {
        let mut p = self.config.problems();
        if let Some(trace) = &self.trace {
            if trace.is_empty() {
                p.push("trace has no samples".to_string());
            } else if f64::from(self.horizon_s()) > trace_end(trace) {
                p.push(format!(
                    "horizon {} s exceeds the trace, which ends at {} s",
                    self.horizon_s(),
                    trace_end(trace)
                ));
            }
            if self.horizon_s() == 0 {
                p.push("trace is shorter than one second".to_string());
            }
        }
        if let Some(layout) = &self.layout {
            if layout.is_empty() {
                p.push("fog layout is empty".to_string());
            }
            let field = self.field();
            for f in layout {
                if !(0.0..=field.width_m).contains(&f.x_m) || !(0.0..=field.height_m).contains(&f.y_m) {
                    p.push(format!("fog {} lies outside the field", f.id));
                }
            }
        }
        if p.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(p))
        }
    }
}

fn trace_end(trace: &[TraceSample]) -> f64 {
    trace.iter().map(|s| s.time_s).fold(0.0, f64::max)
}

/// Loads a scenario from optional files; `None` stands for defaults or
/// synthesized content.
pub fn load_scenario(config: Option<&Path>, trace: Option<&Path>, layout: Option<&Path>) -> Result<Scenario> {
    let config = config.map(load_config).transpose()?.unwrap_or_default();
    let trace = trace.map(read_trace).transpose()?;
    let layout = layout.map(read_fog_layout).transpose()?;
    Scenario::new(config, trace, layout)
}
