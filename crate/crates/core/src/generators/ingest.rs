//! Point files.
//!
//! Two line-oriented formats, chosen by file extension:
//!
//! * CSV (`.csv`, `.txt`): one point per line, coordinates as comma-separated
//!   decimals, e.g. `3,4`.
//! * JSON lines (`.jsonl`, `.ndjson`, `.json`): one JSON array per line, e.g. `[3,4]`.
//!
//! Blank lines and lines starting with `#` are ignored, so metadata blocks can
//! precede the points. Writers emit the shortest decimal that round-trips.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Metric, PointSet};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointFormat {
    Csv,
    JsonLines,
}

impl PointFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("jsonl" | "ndjson" | "json") => PointFormat::JsonLines,
            _ => PointFormat::Csv,
        }
    }
}

/// Result of reading a point file.
#[derive(Clone, Debug)]
pub struct Ingested<S> {
    pub set: PointSet<S>,
    pub duplicates: usize,
}

fn parse_line<S: Scalar>(line: &str, format: PointFormat, lineno: usize) -> Result<Vec<S>> {
    let bad = |message: String| Error::Parse { line: lineno, message };
    let values: Vec<f64> = match format {
        PointFormat::Csv => line
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(format!("`{}` is not a number", tok.trim())))
            })
            .collect::<Result<_>>()?,
        PointFormat::JsonLines => serde_json::from_str(line).map_err(|e| bad(e.to_string()))?,
    };
    if values.is_empty() {
        return Err(bad("empty point".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad("non-finite coordinate".into()));
    }
    Ok(values.into_iter().map(S::of).collect())
}

/// Reads points from any buffered reader.
pub fn read_points<S: Scalar, R: BufRead>(
    reader: R,
    format: PointFormat,
    dim: Option<usize>,
) -> Result<Ingested<S>> {
    let mut flat = Vec::new();
    let mut dim = dim;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let coords: Vec<S> = parse_line(trimmed, format, i + 1)?;
        match dim {
            None => dim = Some(coords.len()),
            Some(d) if d != coords.len() => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected {d} coordinates, found {}", coords.len()),
                })
            }
            _ => {}
        }
        flat.extend(coords);
    }
    let (set, duplicates) = PointSet::from_flat(dim.unwrap_or(1), flat, Metric::Euclidean)?;
    if duplicates > 0 {
        log::warn!("dropped {duplicates} duplicate points");
    }
    Ok(Ingested { set, duplicates })
}

/// Reads a point file, detecting the format from its extension. The sample
/// radius is the largest norm.
pub fn ingest_points<S: Scalar>(path: &Path, dim: Option<usize>) -> Result<Ingested<S>> {
    let file = fs::File::open(path)?;
    read_points(BufReader::new(file), PointFormat::from_path(path), dim)
}

/// Formats one point in the given format.
pub fn format_point<S: Scalar>(p: &[S], format: PointFormat) -> String {
    let mut s = String::new();
    if format == PointFormat::JsonLines {
        s.push('[');
    }
    for (i, c) in p.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        write!(s, "{}", c.as_f64()).expect("writing to a String");
    }
    if format == PointFormat::JsonLines {
        s.push(']');
    }
    s
}

/// Writes points, one per line.
pub fn write_points<'a, S: Scalar, W: Write>(
    mut out: W,
    points: impl IntoIterator<Item = &'a [S]>,
    format: PointFormat,
) -> Result<()> {
    for p in points {
        writeln!(out, "{}", format_point(p, format))?;
    }
    Ok(())
}

/// Writes a whole set to `path` in the format implied by its extension.
pub fn export_points<S: Scalar>(path: &Path, set: &PointSet<S>) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_points(&mut w, set.iter(), PointFormat::from_path(path))?;
    w.flush()?;
    Ok(())
}
