//! JSON file formats.
//!
//! * polytope: `{"dim": n, "points": [[1, "1/2"], ...]}`
//! * collection: `{"dim": n, "polytopes": [<polytope>, ...]}`, where a member may also be a
//!   bare point list
//! * system: `{"n": n, "points": [[...]], "C": [["p/q", ...], ...]}`, optional `"variables"`
//!
//! Coordinates and coefficients are JSON integers or exact `"p/q"` strings.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::polytope::Polytope;
use crate::rational::{fmt_rat, parse_rat, Int, Point, Rat};
use crate::system::{parse_system, SparseSystem};

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(k) => Ok(Rat::from_integer(Int::from(k))),
            None => Err(fmt_err(format!("{n} is not an integer; write fractions as \"p/q\""))),
        },
        Value::String(s) => parse_rat(s),
        other => Err(fmt_err(format!("expected a number or \"p/q\", found {other}"))),
    }
}

/// Integers stay JSON numbers when they fit, everything else becomes `"p/q"`.
pub fn rat_to_json(r: &Rat) -> Value {
    if r.is_integer() {
        if let Ok(k) = i64::try_from(r.to_integer()) {
            return json!(k);
        }
    }
    json!(fmt_rat(r))
}

fn point_from_json(v: &Value, dim: usize) -> Result<Point> {
    let arr = v.as_array().ok_or_else(|| fmt_err("a point must be an array"))?;
    if arr.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: arr.len(),
        });
    }
    arr.iter().map(rat_from_json).collect()
}

fn points_from_json(v: &Value, dim: usize) -> Result<Vec<Point>> {
    let arr = v.as_array().ok_or_else(|| fmt_err("\"points\" must be an array"))?;
    if arr.is_empty() {
        return Err(Error::EmptyInput);
    }
    arr.iter().map(|p| point_from_json(p, dim)).collect()
}

fn dim_field(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|d| d as usize)
        .ok_or_else(|| fmt_err(format!("missing or invalid \"{key}\"")))
}

pub fn polytope_from_json(v: &Value) -> Result<Polytope> {
    let dim = dim_field(v, "dim")?;
    let pts = v.get("points").ok_or_else(|| fmt_err("missing \"points\""))?;
    Polytope::from_points(points_from_json(pts, dim)?)
}

/// Vertices only, in sorted order.
pub fn polytope_to_json(p: &Polytope) -> Value {
    json!({
        "dim": p.ambient_dim(),
        "points": p.sorted_vertices().iter().map(|x| x.iter().map(rat_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn collection_from_json(v: &Value) -> Result<Vec<Polytope>> {
    let dim = dim_field(v, "dim")?;
    let arr = v
        .get("polytopes")
        .and_then(Value::as_array)
        .ok_or_else(|| fmt_err("missing \"polytopes\" array"))?;
    if arr.is_empty() {
        return Err(Error::EmptyInput);
    }
    arr.iter()
        .map(|m| {
            if m.is_array() {
                Polytope::from_points(points_from_json(m, dim)?)
            } else {
                let p = polytope_from_json(m)?;
                if p.ambient_dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: p.ambient_dim(),
                    });
                }
                Ok(p)
            }
        })
        .collect()
}

pub fn collection_to_json(ps: &[Polytope]) -> Value {
    json!({
        "dim": ps.first().map_or(0, Polytope::ambient_dim),
        "polytopes": ps.iter().map(polytope_to_json).collect::<Vec<_>>(),
    })
}

/// A file holding either a collection or a single polytope (read as a collection of one).
pub fn read_polytopes(text: &str) -> Result<Vec<Polytope>> {
    let v = parse_json(text)?;
    if v.get("polytopes").is_some() {
        collection_from_json(&v)
    } else {
        Ok(vec![polytope_from_json(&v)?])
    }
}

pub fn system_from_json(v: &Value) -> Result<SparseSystem> {
    let n = dim_field(v, "n")?;
    let pts = v.get("points").and_then(Value::as_array).ok_or_else(|| fmt_err("missing \"points\" array"))?;
    let points = pts
        .iter()
        .map(|p| {
            let arr = p.as_array().ok_or_else(|| fmt_err("a point must be an array"))?;
            if arr.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: arr.len(),
                });
            }
            arr.iter()
                .map(|x| x.as_i64().ok_or_else(|| fmt_err("exponents must be integers")))
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = v.get("C").and_then(Value::as_array).ok_or_else(|| fmt_err("missing \"C\" matrix"))?;
    let c = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| fmt_err("rows of C must be arrays"))?
                .iter()
                .map(rat_from_json)
                .collect::<Result<Vec<Rat>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if c.iter().any(|r| r.len() != points.len()) {
        return Err(fmt_err(format!("every row of C needs {} entries", points.len())));
    }
    let c = RatMatrix::from_rows(c)?;
    match v.get("variables") {
        Some(names) => {
            let names: Vec<String> = serde_json::from_value(names.clone()).map_err(|e| fmt_err(e.to_string()))?;
            if names.len() != n {
                return Err(fmt_err("\"variables\" must list n names"));
            }
            SparseSystem::new(names, points, c)
        }
        None if c.rows() != n => Err(Error::EquationCount {
            equations: c.rows(),
            variables: n,
        }),
        None => SparseSystem::from_matrix(points, c),
    }
}

/// Matrix JSON when the text starts with `{`, otherwise the polynomial grammar.
pub fn read_system(text: &str) -> Result<SparseSystem> {
    if text.trim_start().starts_with('{') {
        system_from_json(&parse_json(text)?)
    } else {
        parse_system(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polytope_round_trip() {
        let text = r#"{"dim": 2, "points": [[0,0],[1,0],[0,1],[1,1],["1/2","1/2"]]}"#;
        let p = polytope_from_json(&parse_json(text).unwrap()).unwrap();
        assert_eq!(p.vertices().len(), 4);
        let q = polytope_from_json(&polytope_to_json(&p)).unwrap();
        assert_eq!(p.sorted_vertices(), q.sorted_vertices());
        let r = polytope_from_json(&json!({"dim": 1, "points": [["1/3"], [2]]})).unwrap();
        assert_eq!(polytope_to_json(&r)["points"], json!([["1/3"], [2]]));
    }

    #[test]
    fn collection_accepts_bare_lists() {
        let v = json!({"dim": 2, "polytopes": [[[0,0],[1,0]], {"dim": 2, "points": [[0,0],[0,1]]}]});
        let ps = collection_from_json(&v).unwrap();
        assert_eq!(ps.len(), 2);
        assert!(matches!(
            collection_from_json(&json!({"dim": 2, "polytopes": [[[0,0,1]]]})),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(read_polytopes("{\"dim\": 2,"), Err(Error::Parse { .. })));
    }

    #[test]
    fn system_round_trip() {
        let s = parse_system("x*y - 1 = 0; x - y = 0").unwrap();
        let t = system_from_json(&s.to_json()).unwrap();
        assert_eq!(s, t);
        assert_eq!(read_system(&s.to_json().to_string()).unwrap(), s);
        let bad = json!({"n": 1, "points": [[0], [1]], "C": [[1, 0]]});
        assert!(matches!(system_from_json(&bad), Err(Error::ZeroColumn(2))));
    }
}
