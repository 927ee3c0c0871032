//! Canonical JSON and CSV emission.
//!
//! Canonical JSON has sorted object keys, two-space indentation and every
//! non-integer number written with 17 significant digits (`{:.16e}`), so the
//! same value always produces the same bytes.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::point::Point;

/// Serializes `value` as canonical JSON.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::input(format!("serialization: {e}")))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

/// Formats a float the way canonical JSON does.
pub fn canonical_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, v: &Value, level: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                out.push_str(&canonical_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                indent(out, level + 1);
                write_value(out, item, level + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                indent(out, level + 1);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &map[*k], level + 1);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push('}');
        }
    }
}

/// Reads one point per CSV row. A first row that does not parse as numbers
/// is taken as a header.
pub fn read_points_csv<R: Read>(reader: R) -> Result<Vec<Point>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut points = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(coords) => points.push(
                Point::new(coords).map_err(|e| Error::input(format!("row {}: {e}", row + 1)))?,
            ),
            Err(_) if row == 0 => continue,
            Err(e) => return Err(Error::input(format!("row {}: {e}", row + 1))),
        }
    }
    if let Some(first) = points.first() {
        let dim = first.dim();
        if let Some(bad) = points.iter().position(|p| p.dim() != dim) {
            return Err(Error::input(format!(
                "row {} has {} coordinates, expected {dim}",
                bad + 1,
                points[bad].dim()
            )));
        }
    }
    Ok(points)
}

/// Writes points with a `x0,x1,…` header, coordinates at 17 significant digits.
pub fn write_points_csv<W: Write>(writer: W, points: &[Point]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if let Some(first) = points.first() {
        w.write_record((0..first.dim()).map(|i| format!("x{i}")))?;
    }
    for p in points {
        w.write_record(p.coords().iter().map(|c| canonical_float(*c)))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn keys_sorted_and_floats_fixed() {
        let mut m = HashMap::new();
        m.insert("zeta", vec![0.1, 2.0]);
        m.insert("alpha", vec![]);
        let s = to_canonical_json(&m).unwrap();
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
        assert!(s.contains("1.0000000000000001e-1"));
        assert!(s.contains("2.0000000000000000e0"));
        let back: HashMap<String, Vec<f64>> = serde_json::from_str(&s).unwrap();
        assert_eq!(back["zeta"], vec![0.1, 2.0]);
    }

    #[test]
    fn integers_stay_integers() {
        let s = to_canonical_json(&serde_json::json!({"n": 3, "neg": -2, "f": 1.5})).unwrap();
        assert!(s.contains("\"n\": 3"));
        assert!(s.contains("\"neg\": -2"));
        assert!(s.contains("1.5000000000000000e0"));
    }

    #[test]
    fn csv_round_trip_with_header() {
        let pts = vec![
            Point::new(vec![0.1, -2.0]).unwrap(),
            Point::new(vec![1.0 / 3.0, 5.0]).unwrap(),
        ];
        let mut buf = Vec::new();
        write_points_csv(&mut buf, &pts).unwrap();
        let back = read_points_csv(buf.as_slice()).unwrap();
        assert_eq!(back, pts);
    }

    #[test]
    fn csv_rejects_ragged_and_non_numeric() {
        assert!(read_points_csv("1,2\n3\n".as_bytes()).is_err());
        assert!(read_points_csv("1,2\n3,abc\n".as_bytes()).is_err());
        assert!(read_points_csv("1,nan\n".as_bytes()).is_err());
        assert_eq!(read_points_csv("x\n1\n2\n".as_bytes()).unwrap().len(), 2);
    }
}
