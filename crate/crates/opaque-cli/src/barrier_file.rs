//! Barrier JSON I/O. The document is
//! `{"segments": [[[x1,y1],[x2,y2]], ...], "name": optional}` where each
//! coordinate is a JSON number, an exact-rational string "a/b", or a decimal
//! string; exact strings are parsed exactly and rounded once to f64.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::Value;

use opaque_core::geometry::{Barrier, Point, Segment};
use opaque_core::lp_bound::rat_from_decimal;

#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ParseError {}

fn number(v: &Value, path: &str) -> Result<f64, ParseError> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| ParseError(format!("{path}: number out of range"))),
        Value::String(s) => {
            if let Some((num, den)) = s.split_once('/') {
                let p: num_bigint::BigInt = num
                    .trim()
                    .parse()
                    .map_err(|_| ParseError(format!("{path}: bad rational numerator {num:?}")))?;
                let q: num_bigint::BigInt = den
                    .trim()
                    .parse()
                    .map_err(|_| ParseError(format!("{path}: bad rational denominator {den:?}")))?;
                if q == 0.into() {
                    return Err(ParseError(format!("{path}: zero denominator")));
                }
                BigRational::new(p, q)
                    .to_f64()
                    .ok_or_else(|| ParseError(format!("{path}: rational out of range")))
            } else {
                rat_from_decimal(s)
                    .and_then(|r| r.to_f64())
                    .ok_or_else(|| ParseError(format!("{path}: bad numeric string {s:?}")))
            }
        }
        other => Err(ParseError(format!(
            "{path}: expected a number or numeric string, got {other}"
        ))),
    }
}

fn point(v: &Value, path: &str) -> Result<Point, ParseError> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| ParseError(format!("{path}: expected [x, y]")))?;
    Ok(Point::new(
        number(&arr[0], &format!("{path}[0]"))?,
        number(&arr[1], &format!("{path}[1]"))?,
    ))
}

pub fn parse_barrier(bytes: &[u8]) -> Result<(Barrier, Option<String>), ParseError> {
    let doc: Value = serde_json::from_slice(bytes).map_err(|e| {
        ParseError(format!(
            "invalid JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    let name = doc
        .get("name")
        .and_then(Value::as_str)
        .map(str::to_string);
    let segs = doc
        .get("segments")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError("missing \"segments\" array".into()))?;
    if segs.is_empty() {
        return Err(ParseError("\"segments\" must be non-empty".into()));
    }
    let mut out = Vec::with_capacity(segs.len());
    for (i, sv) in segs.iter().enumerate() {
        let path = format!("segments[{i}]");
        let pair = sv
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| ParseError(format!("{path}: expected [[x,y],[x,y]]")))?;
        let a = point(&pair[0], &format!("{path}[0]"))?;
        let b = point(&pair[1], &format!("{path}[1]"))?;
        let seg = Segment::new(a, b)
            .map_err(|e| ParseError(format!("{path}: {e}")))?;
        out.push(seg);
    }
    let barrier = Barrier::new(out).map_err(|e| ParseError(e.to_string()))?;
    Ok((barrier, name))
}

pub fn serialize_barrier(barrier: &Barrier, name: Option<&str>) -> String {
    let segments: Vec<Value> = barrier
        .segments()
        .iter()
        .map(|s| {
            serde_json::json!([[s.a.x, s.a.y], [s.b.x, s.b.y]])
        })
        .collect();
    let mut doc = serde_json::Map::new();
    if let Some(n) = name {
        doc.insert("name".into(), Value::String(n.to_string()));
    }
    doc.insert("segments".into(), Value::Array(segments));
    serde_json::to_string_pretty(&Value::Object(doc)).expect("barrier serializes")
}

/// A body document for measure commands: `{"polygon": [[x,y],...]}` or
/// `{"segment": [[x,y],[x,y]]}`.
pub fn parse_body(v: &Value, path: &str) -> Result<opaque_core::line_measure::Body, ParseError> {
    use opaque_core::geometry::ConvexPolygon;
    use opaque_core::line_measure::Body;
    if let Some(poly) = v.get("polygon") {
        let arr = poly
            .as_array()
            .ok_or_else(|| ParseError(format!("{path}.polygon: expected an array")))?;
        let mut pts = Vec::with_capacity(arr.len());
        for (i, pv) in arr.iter().enumerate() {
            pts.push(point(pv, &format!("{path}.polygon[{i}]"))?);
        }
        let p = ConvexPolygon::new(pts).map_err(|e| ParseError(format!("{path}.polygon: {e}")))?;
        Ok(Body::Polygon(p))
    } else if let Some(seg) = v.get("segment") {
        let pair = seg
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| ParseError(format!("{path}.segment: expected [[x,y],[x,y]]")))?;
        let a = point(&pair[0], &format!("{path}.segment[0]"))?;
        let b = point(&pair[1], &format!("{path}.segment[1]"))?;
        let s = Segment::new(a, b).map_err(|e| ParseError(format!("{path}.segment: {e}")))?;
        Ok(Body::Segment(s))
    } else {
        Err(ParseError(format!(
            "{path}: expected an object with \"polygon\" or \"segment\""
        )))
    }
}
