//! JSON rendering of exact results. Rationals are written as `"p/q"` strings
//! next to a rounded decimal that is for reading only.

use serde_json::{json, Map, Value};

use super::config::SCHEMA_VERSION;
use crate::error::{Error, Result};
use crate::geometry::scalar::{format_decimal, format_exact, parse_scalar};
use crate::geometry::{Extended, HPoly, Polyhedron, Scalar, Vector, VPoly};

pub fn exact(q: &Scalar) -> Value {
    Value::String(format_exact(q))
}

pub fn exact_vec(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(exact).collect())
}

pub fn decimal(q: &Scalar, digits: usize) -> Value {
    Value::String(format_decimal(q, digits))
}

pub fn decimal_vec(v: &[Scalar], digits: usize) -> Value {
    Value::Array(v.iter().map(|q| decimal(q, digits)).collect())
}

pub fn number(q: &Scalar, digits: usize) -> Value {
    json!({ "exact": exact(q), "decimal": decimal(q, digits) })
}

pub fn extended(e: &Extended) -> Value {
    match e {
        Extended::Finite(q) => exact(q),
        Extended::PosInf => Value::String("+inf".into()),
        Extended::NegInf => Value::String("-inf".into()),
    }
}

/// Both representations in canonical order, with rounded vertices for reading.
pub fn polyhedron(p: &Polyhedron, digits: usize) -> Value {
    let h = p.hrep();
    let inequalities: Vec<Value> = h.iter().map(|(a, b)| json!({ "a": exact_vec(a), "b": exact(b) })).collect();
    json!({
        "dim": p.dim(),
        "empty": p.is_empty(),
        "vertices": p.vertices().iter().map(|v| exact_vec(v)).collect::<Vec<_>>(),
        "rays": p.rays().iter().map(|v| exact_vec(v)).collect::<Vec<_>>(),
        "lines": p.lines().iter().map(|v| exact_vec(v)).collect::<Vec<_>>(),
        "inequalities": inequalities,
        "vertices_decimal": p.vertices().iter().map(|v| decimal_vec(v, digits)).collect::<Vec<_>>(),
    })
}

fn parse_vec(v: &Value) -> Result<Vector> {
    let bad = || Error::InvalidProblem(format!("report: expected a vector of rationals, found {v}"));
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|x| x.as_str().and_then(|s| parse_scalar(s).ok()).ok_or_else(bad))
        .collect()
}

fn parse_list(v: &Value, key: &str) -> Result<Vec<Vector>> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidProblem(format!("report: missing {key}")))?
        .iter()
        .map(parse_vec)
        .collect()
}

/// Reads back the output of [`polyhedron`] from both representations and
/// checks that they describe the same set.
pub fn parse_polyhedron(v: &Value) -> Result<Polyhedron> {
    let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| Error::InvalidProblem("report: missing dim".into()))?
        as usize;
    let from_v =
        Polyhedron::from_vrep(VPoly::new(dim, parse_list(v, "vertices")?, parse_list(v, "rays")?, parse_list(v, "lines")?));
    let mut h = HPoly::universe(dim);
    for row in v.get("inequalities").and_then(Value::as_array).into_iter().flatten() {
        let a = parse_vec(&row["a"])?;
        let b = row["b"].as_str().and_then(|s| parse_scalar(s).ok());
        let b = b.ok_or_else(|| Error::InvalidProblem("report: bad inequality".into()))?;
        h.push(a, b);
    }
    let from_h = Polyhedron::from_hrep(h);
    if from_h != from_v {
        return Err(Error::InvalidProblem("report: the two representations disagree".into()));
    }
    Ok(from_v)
}

/// Wraps a command body with the schema version and command name.
pub fn envelope(command: &str, body: Map<String, Value>) -> Value {
    let mut out = Map::new();
    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
    out.insert("command".into(), json!(command));
    out.extend(body);
    Value::Object(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::{int, ratio};

    #[test]
    fn polyhedron_round_trip() {
        let p = Polyhedron::from_generators(2, vec![vec![ratio(1, 3), int(0)], vec![int(0), int(2)]], vec![vec![int(1), int(1)]]);
        let v = polyhedron(&p, 3);
        assert_eq!(parse_polyhedron(&v).unwrap(), p);
        let text = serde_json::to_string(&v).unwrap();
        let again: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(polyhedron(&parse_polyhedron(&again).unwrap(), 3), v);
    }

    #[test]
    fn numbers_render_exactly() {
        assert_eq!(number(&ratio(-7, 2), 3), json!({"exact": "-7/2", "decimal": "-3.500"}));
        assert_eq!(extended(&Extended::PosInf), json!("+inf"));
    }
}
