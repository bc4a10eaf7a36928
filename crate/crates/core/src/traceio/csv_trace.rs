use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

use super::{sort_samples, TraceSample};

pub const TRACE_HEADER: [&str; 6] = ["time_s", "ue_id", "x_m", "y_m", "speed_mps", "heading_rad"];

/// Parses a canonical CSV trace. Rows must be strictly increasing in time
/// per UE; the result is sorted by `(time, ue)`.
pub fn parse_trace_csv(data: &[u8]) -> Result<Vec<TraceSample>> {
    parse_labeled(data, "<trace>")
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<TraceSample>> {
    let data = std::fs::read(path)?;
    parse_labeled(&data, &path.display().to_string())
}

fn parse_labeled(data: &[u8], label: &str) -> Result<Vec<TraceSample>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(data);
    let header = reader
        .headers()
        .map_err(|e| Error::parse(label, 1, e.to_string()))?
        .clone();
    if header.iter().map(str::trim).ne(TRACE_HEADER) {
        return Err(Error::parse(
            label,
            1,
            format!("expected header `{}`", TRACE_HEADER.join(",")),
        ));
    }

    let mut samples = Vec::new();
    let mut last_time: HashMap<String, f64> = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(label, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let num = |i: usize| -> Result<f64> {
            let raw = record[i].trim();
            let v: f64 = raw
                .parse()
                .map_err(|_| Error::parse(label, line, format!("{}: `{raw}` is not a number", TRACE_HEADER[i])))?;
            if !v.is_finite() {
                return Err(Error::parse(label, line, format!("{}: must be finite", TRACE_HEADER[i])));
            }
            Ok(v)
        };
        let sample = TraceSample {
            time_s: num(0)?,
            ue_id: record[1].trim().to_string(),
            x_m: num(2)?,
            y_m: num(3)?,
            speed_mps: num(4)?,
            heading_rad: num(5)?,
        };
        if sample.ue_id.is_empty() {
            return Err(Error::parse(label, line, "ue_id is empty"));
        }
        if sample.time_s < 0.0 {
            return Err(Error::parse(label, line, "time_s is negative"));
        }
        if sample.speed_mps < 0.0 {
            return Err(Error::parse(label, line, "speed_mps is negative"));
        }
        if let Some(&prev) = last_time.get(&sample.ue_id) {
            if sample.time_s <= prev {
                return Err(Error::parse(
                    label,
                    line,
                    format!("time {} for {} does not follow {prev}", sample.time_s, sample.ue_id),
                ));
            }
        }
        last_time.insert(sample.ue_id.clone(), sample.time_s);
        samples.push(sample);
    }
    sort_samples(&mut samples);
    Ok(samples)
}

/// Writes samples in the canonical format. Numbers use the shortest
/// representation that parses back to the same value.
pub fn write_trace_csv(samples: &[TraceSample], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER).map_err(csv_io)?;
    for s in samples {
        w.write_record([
            s.time_s.to_string(),
            s.ue_id.clone(),
            s.x_m.to_string(),
            s.y_m.to_string(),
            s.speed_mps.to_string(),
            s.heading_rad.to_string(),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_io(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Simulation(format!("{other:?}")),
    }
}
