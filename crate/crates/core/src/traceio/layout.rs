use std::io::Write;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::FogNode;
use crate::policy::Field;
use crate::range::ValueRange;

use super::csv_trace::csv_io;

pub const LAYOUT_HEADER: [&str; 5] = ["fog_id", "x_m", "y_m", "radius_m", "capacity_hz"];

/// Parses a fog layout CSV. Ids must be `0..n` in any order; the result is
/// sorted by id.
pub fn parse_fog_layout(data: &[u8]) -> Result<Vec<FogNode>> {
    parse_labeled(data, "<layout>")
}

pub fn read_fog_layout(path: &Path) -> Result<Vec<FogNode>> {
    let data = std::fs::read(path)?;
    parse_labeled(&data, &path.display().to_string())
}

fn parse_labeled(data: &[u8], label: &str) -> Result<Vec<FogNode>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(data);
    let header = reader
        .headers()
        .map_err(|e| Error::parse(label, 1, e.to_string()))?
        .clone();
    if header.iter().map(str::trim).ne(LAYOUT_HEADER) {
        return Err(Error::parse(label, 1, format!("expected header `{}`", LAYOUT_HEADER.join(","))));
    }
    let mut fogs = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::parse(label, e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let num = |i: usize| -> Result<f64> {
            let raw = record[i].trim();
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(label, line, format!("{}: `{raw}` is not a number", LAYOUT_HEADER[i])))
        };
        let raw_id = record[0].trim();
        let id: usize = raw_id
            .parse()
            .map_err(|_| Error::parse(label, line, format!("fog_id: `{raw_id}` is not a non-negative integer")))?;
        let fog = FogNode {
            id,
            x_m: num(1)?,
            y_m: num(2)?,
            radius_m: num(3)?,
            capacity_hz: num(4)?,
        };
        fog.validate().map_err(|m| Error::parse(label, line, m))?;
        fogs.push(fog);
    }
    fogs.sort_by_key(|f| f.id);
    if fogs.iter().enumerate().any(|(i, f)| f.id != i) {
        return Err(Error::Validation(vec![format!(
            "{label}: fog ids must be 0..{} without gaps or repeats",
            fogs.len()
        )]));
    }
    Ok(fogs)
}

pub fn write_fog_layout(fogs: &[FogNode], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(LAYOUT_HEADER).map_err(csv_io)?;
    for f in fogs {
        w.write_record([
            f.id.to_string(),
            f.x_m.to_string(),
            f.y_m.to_string(),
            f.radius_m.to_string(),
            f.capacity_hz.to_string(),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

/// Places `n` nodes at the centers of a near-square grid of cells filled
/// row by row. The radius is 0.75× the larger cell side, so neighbouring
/// disks overlap and full rows cover their cells completely.
pub fn grid_layout(n: usize, field: Field, capacity: ValueRange, rng: &mut impl Rng) -> Vec<FogNode> {
    if n == 0 {
        return Vec::new();
    }
    let cols = ((n as f64 * field.width_m / field.height_m).sqrt().ceil() as usize).clamp(1, n);
    let rows = n.div_ceil(cols);
    let dx = field.width_m / cols as f64;
    let dy = field.height_m / rows as f64;
    let radius_m = 0.75 * dx.max(dy);
    (0..n)
        .map(|id| FogNode {
            id,
            x_m: (id % cols) as f64 * dx + dx / 2.0,
            y_m: (id / cols) as f64 * dy + dy / 2.0,
            radius_m,
            capacity_hz: capacity.sample(rng),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::rng_stream;

    #[test]
    fn grid_covers_the_field() {
        let field = Field {
            width_m: 2000.0,
            height_m: 2000.0,
        };
        for n in [1, 4, 9, 10, 12, 16, 35] {
            let fogs = grid_layout(n, field, ValueRange::new(4e9, 6e9), &mut rng_stream(1, 4));
            assert_eq!(fogs.len(), n);
            let cols = ((n as f64).sqrt().ceil()) as usize;
            let full_rows = n / cols;
            let rows = n.div_ceil(cols);
            let covered_height = field.height_m * full_rows as f64 / rows as f64;
            for i in 0..=40 {
                for k in 0..=40 {
                    let (x, y) = (field.width_m * i as f64 / 40.0, covered_height * k as f64 / 40.0);
                    assert!(fogs.iter().any(|f| f.covers(x, y)), "n={n} ({x},{y})");
                }
            }
            assert!(fogs.iter().all(|f| (4e9..=6e9).contains(&f.capacity_hz)));
        }
    }

    #[test]
    fn layout_round_trip_and_id_checks() {
        let fogs = grid_layout(5, Field { width_m: 900.0, height_m: 300.0 }, ValueRange::fixed(5e9), &mut rng_stream(0, 4));
        let mut buf = Vec::new();
        write_fog_layout(&fogs, &mut buf).unwrap();
        assert_eq!(parse_fog_layout(&buf).unwrap(), fogs);

        let gap = b"fog_id,x_m,y_m,radius_m,capacity_hz\n0,1,1,10,5e9\n2,1,1,10,5e9\n";
        assert!(matches!(parse_fog_layout(gap), Err(Error::Validation(_))));
        let bad = b"fog_id,x_m,y_m,radius_m,capacity_hz\n0,1,1,-10,5e9\n";
        assert!(matches!(parse_fog_layout(bad), Err(Error::Parse { line: 2, .. })));
    }
}
