//! Witness files: a `# key=value` parameter block followed by the points of `Q`.
//!
//! ```text
//! # k=3
//! # epsilon=0.01
//! # delta=2
//! # t=3
//! # e1=1
//! 3
//! 5
//! 7
//! ```
//!
//! Vectors are comma-separated. The point list uses the CSV or JSON-lines
//! point format.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::patch::ArithmeticPatch;
use super::search::Witness;
use crate::error::{Error, Result};
use crate::generators::{format_point, read_points, PointFormat};
use crate::geometry::{lex_cmp, Point};
use crate::scalar::Scalar;

fn join<S: Scalar>(v: &[S]) -> String {
    v.iter().map(|c| c.as_f64().to_string()).collect::<Vec<_>>().join(",")
}

pub fn write_witness<S: Scalar, W: Write>(mut out: W, w: &Witness<S>, format: PointFormat) -> Result<()> {
    writeln!(out, "# k={}", w.patch.k)?;
    writeln!(out, "# m={}", w.patch.m())?;
    writeln!(out, "# epsilon={}", w.epsilon)?;
    writeln!(out, "# delta={}", w.patch.delta.as_f64())?;
    writeln!(out, "# t={}", join(w.patch.t.coords()))?;
    for (i, e) in w.patch.orientation.iter().enumerate() {
        writeln!(out, "# e{}={}", i + 1, join(e))?;
    }
    for p in &w.q {
        writeln!(out, "{}", format_point(p, format))?;
    }
    Ok(())
}

fn parse_vec<S: Scalar>(key: &str, v: &str) -> Result<Vec<S>> {
    v.split(',')
        .map(|x| {
            x.trim().parse::<f64>().map(S::of).map_err(|_| Error::Parse { line: 0, message: format!("bad value in `{key}`") })
        })
        .collect()
}

/// Reads a witness file. The padding count is not stored and reads back as 0.
pub fn read_witness<S: Scalar, R: BufRead>(reader: R, format: PointFormat) -> Result<Witness<S>> {
    let text = std::io::read_to_string(reader)?;
    let mut header = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let Some(rest) = line.trim().strip_prefix('#') else { continue };
        if let Some((key, value)) = rest.split_once('=') {
            header.insert(key.trim().to_string(), (i + 1, value.trim().to_string()));
        }
    }
    let get = |key: &str| {
        header
            .get(key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::Parse { line: 0, message: format!("missing `{key}` in witness header") })
    };
    let num = |key: &str| -> Result<f64> {
        let v = get(key)?;
        v.parse().map_err(|_| Error::Parse { line: header[key].0, message: format!("bad `{key}`") })
    };
    let k = num("k")? as usize;
    let epsilon = num("epsilon")?;
    let delta = S::of(num("delta")?);
    let t: Vec<S> = parse_vec("t", get("t")?)?;
    let mut orientation = Vec::new();
    let mut i = 1;
    while let Ok(v) = get(&format!("e{i}")) {
        orientation.push(parse_vec(&format!("e{i}"), v)?);
        i += 1;
    }
    let patch = ArithmeticPatch::new(Point::new(t)?, delta, orientation, k)?;
    let q_set = read_points::<S, _>(text.as_bytes(), format, Some(patch.dim()))?;
    let mut q: Vec<Vec<S>> = q_set.set.iter().map(<[S]>::to_vec).collect();
    q.sort_by(|a, b| lex_cmp(a, b));
    Ok(Witness { patch, epsilon, q, padded: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_primes;
    use crate::patches::{find_patch, PatchQuery};

    #[test]
    fn round_trip() {
        let p = gen_primes::<f64>(200).unwrap();
        let w = find_patch(&p, &PatchQuery::standard(4, 0.1, 1, 1)).unwrap().witness.unwrap();
        for format in [PointFormat::Csv, PointFormat::JsonLines] {
            let mut buf = Vec::new();
            write_witness(&mut buf, &w, format).unwrap();
            let back: Witness<f64> = read_witness(buf.as_slice(), format).unwrap();
            assert_eq!(back.patch, w.patch);
            assert_eq!(back.q, w.q);
            assert!(back.verify());
        }
    }

    #[test]
    fn missing_header() {
        assert!(read_witness::<f64, _>("# k=3\n1\n".as_bytes(), PointFormat::Csv).is_err());
    }
}
