//! Plain-text artifacts: point-set, component and spectrum CSVs with JSON sidecars.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::curve::CurveComponent;
use crate::error::{Error, Result};
use crate::rootfind::WeightedPointSet;
use crate::spectrum::{SpectrumEntry, SpectrumSource, SpectrumTable};
use crate::torus::CompactificationMap;

pub const POINTS_HEADER: &str = "lambda,multiplicity";
pub const COMPONENT_HEADER: &str = "theta1,theta2";
pub const SPECTRUM_HEADER: &str = "k1,k2,y,re,im,R,err";

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

fn data_lines<'a>(text: &'a str, header: &str) -> Result<impl Iterator<Item = (usize, Vec<String>)> + 'a> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == header => {}
        other => {
            return Err(Error::Parse(format!(
                "expected header `{header}`, found `{}`",
                other.map_or("", |(_, l)| l)
            )))
        }
    }
    Ok(lines.map(|(i, l)| (i + 1, l.split(',').map(|f| f.trim().to_string()).collect())))
}

fn field<T: std::str::FromStr>(row: &[String], i: usize, line: usize) -> Result<T> {
    row.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("line {line}: bad or missing field {}", i + 1)))
}

/// Sidecar of a point-set CSV; only the window is required on input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointsSidecar {
    pub window_radius: f64,
    pub lo: f64,
    pub hi: f64,
    #[serde(default)]
    pub count: usize,
    #[serde(default)]
    pub total_multiplicity: u64,
    #[serde(default)]
    pub min_gap: Option<f64>,
    #[serde(default)]
    pub meta: serde_json::Value,
}

pub fn points_csv(pts: &WeightedPointSet) -> String {
    let mut s = String::from(POINTS_HEADER);
    s.push('\n');
    for (x, c) in pts.points() {
        let _ = writeln!(s, "{x:?},{c}");
    }
    s
}

pub fn points_sidecar(pts: &WeightedPointSet, meta: serde_json::Value) -> PointsSidecar {
    PointsSidecar {
        window_radius: pts.radius(),
        lo: pts.lo(),
        hi: pts.hi(),
        count: pts.len(),
        total_multiplicity: pts.total_multiplicity(),
        min_gap: pts.min_gap(),
        meta,
    }
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir`.
pub fn write_points(dir: &Path, stem: &str, pts: &WeightedPointSet, meta: serde_json::Value) -> Result<()> {
    fs::write(dir.join(format!("{stem}.csv")), points_csv(pts))?;
    write_json(&dir.join(format!("{stem}.json")), &points_sidecar(pts, meta))
}

pub fn parse_points(csv: &str, sidecar: &PointsSidecar) -> Result<WeightedPointSet> {
    let mut pts = Vec::new();
    for (line, row) in data_lines(csv, POINTS_HEADER)? {
        pts.push((field::<f64>(&row, 0, line)?, field::<u32>(&row, 1, line)?));
    }
    WeightedPointSet::new(pts, sidecar.lo, sidecar.hi)
}

/// Reads `<stem>.csv` with its `<stem>.json` sidecar.
pub fn read_points(dir: &Path, stem: &str) -> Result<WeightedPointSet> {
    let sidecar: PointsSidecar = read_json(&dir.join(format!("{stem}.json")))?;
    let csv = fs::read_to_string(dir.join(format!("{stem}.csv")))?;
    parse_points(&csv, &sidecar)
}

pub fn component_csv(comp: &CurveComponent) -> String {
    let mut s = String::from(COMPONENT_HEADER);
    s.push('\n');
    for p in comp.samples() {
        let _ = writeln!(s, "{:?},{:?}", p[0], p[1]);
    }
    s
}

/// Sidecar of a component CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSidecar {
    pub winding: [i64; 2],
    pub lift_displacement: [f64; 2],
    pub index: u64,
    #[serde(rename = "E")]
    pub annihilator: Vec<Vec<i64>>,
    pub density_contribution: f64,
    pub transversality_margin: f64,
    pub samples: usize,
    pub orientation: i8,
}

pub fn spectrum_csv(table: &SpectrumTable) -> Result<String> {
    let mut s = String::from(SPECTRUM_HEADER);
    s.push('\n');
    for e in &table.entries {
        if e.k.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: e.k.len() });
        }
        let _ = writeln!(s, "{},{},{:?},{:?},{:?},{:?},{:?}", e.k[0], e.k[1], e.y, e.value.re, e.value.im, e.window, e.error_estimate);
    }
    Ok(s)
}

pub fn parse_spectrum(csv: &str, map: CompactificationMap, source: SpectrumSource, error_constant: f64) -> Result<SpectrumTable> {
    let mut entries = Vec::new();
    for (line, row) in data_lines(csv, SPECTRUM_HEADER)? {
        entries.push(SpectrumEntry {
            k: vec![field(&row, 0, line)?, field(&row, 1, line)?],
            y: field(&row, 2, line)?,
            value: Complex64::new(field(&row, 3, line)?, field(&row, 4, line)?),
            window: field(&row, 5, line)?,
            error_estimate: field(&row, 6, line)?,
        });
    }
    Ok(SpectrumTable::new(map, source, error_constant, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::Slope;

    #[test]
    fn points_roundtrip() {
        let pts = WeightedPointSet::symmetric(vec![(-0.1, 1), (std::f64::consts::PI / 10.0, 2)], 1.5).unwrap();
        let side = points_sidecar(&pts, serde_json::Value::Null);
        let back = parse_points(&points_csv(&pts), &side).unwrap();
        assert_eq!(back, pts);
        assert!(parse_points("x,y\n1,1\n", &side).is_err());
        assert!(parse_points("lambda,multiplicity\n0.1\n", &side).is_err());
    }

    #[test]
    fn spectrum_roundtrip() {
        let map = CompactificationMap::planar(Slope::sqrt2());
        let e = SpectrumEntry { k: vec![1, -2], y: map.frequency1(&[1, -2]), value: Complex64::new(0.25, -1e-17), window: f64::INFINITY, error_estimate: 1e-13 };
        let t = SpectrumTable::new(map.clone(), SpectrumSource::LineIntegral, 0.0, vec![e]);
        let csv = spectrum_csv(&t).unwrap();
        assert!(csv.starts_with(SPECTRUM_HEADER));
        assert_eq!(parse_spectrum(&csv, map, SpectrumSource::LineIntegral, 0.0).unwrap(), t);
    }
}
