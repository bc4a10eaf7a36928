use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mobility::normalize_heading;

use super::{sort_samples, TraceSample};

/// SUMO angles are degrees clockwise from north; headings are radians
/// counter-clockwise from +x.
pub fn sumo_angle_to_heading(angle_deg: f64) -> f64 {
    normalize_heading((90.0 - angle_deg).to_radians())
}

/// Reads `<timestep time=…><vehicle id x y speed angle/></timestep>`
/// records from a SUMO FCD export. Other elements and attributes are
/// ignored.
pub fn parse_sumo_fcd(data: &[u8]) -> Result<Vec<TraceSample>> {
    parse_labeled(data, "<fcd>")
}

pub fn read_sumo_fcd(path: &Path) -> Result<Vec<TraceSample>> {
    let data = std::fs::read(path)?;
    parse_labeled(&data, &path.display().to_string())
}

fn parse_labeled(data: &[u8], label: &str) -> Result<Vec<TraceSample>> {
    let text = std::str::from_utf8(data).map_err(|e| Error::parse(label, 0, e.to_string()))?;
    let doc = roxmltree::Document::parse(text).map_err(|e| Error::parse(label, e.pos().row as u64, e.to_string()))?;

    let line_of = |node: roxmltree::Node| doc.text_pos_at(node.range().start).row as u64;
    let attr = |node: roxmltree::Node, name: &str| -> Result<f64> {
        let raw = node
            .attribute(name)
            .ok_or_else(|| Error::parse(label, line_of(node), format!("missing attribute `{name}`")))?;
        raw.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::parse(label, line_of(node), format!("attribute `{name}`: `{raw}` is not a number")))
    };

    let mut samples = Vec::new();
    let mut last_time: HashMap<String, f64> = HashMap::new();
    for step in doc.root_element().children().filter(|n| n.has_tag_name("timestep")) {
        let time_s = attr(step, "time")?;
        for v in step.children().filter(|n| n.has_tag_name("vehicle")) {
            let ue_id = v
                .attribute("id")
                .ok_or_else(|| Error::parse(label, line_of(v), "missing attribute `id`"))?
                .to_string();
            if let Some(&prev) = last_time.get(&ue_id) {
                if time_s <= prev {
                    return Err(Error::parse(label, line_of(v), format!("time {time_s} for {ue_id} does not follow {prev}")));
                }
            }
            last_time.insert(ue_id.clone(), time_s);
            samples.push(TraceSample {
                time_s,
                x_m: attr(v, "x")?,
                y_m: attr(v, "y")?,
                speed_mps: attr(v, "speed")?,
                heading_rad: sumo_angle_to_heading(attr(v, "angle")?),
                ue_id,
            });
        }
    }
    sort_samples(&mut samples);
    Ok(samples)
}
