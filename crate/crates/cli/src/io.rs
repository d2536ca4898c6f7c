//! JSON encodings of tables, censuses and reports.

use serde_json::{json, Map, Value};

use bincum::algebra::{format_rational, parse_rational, rationalize};
use bincum::classify::Census;
use bincum::cumulant_space::{Membership, OptimizerReport, RATIONALIZE_DEN};
use bincum::{BinaryTable, Coords, Error, Rational, Result, SubsetMask};

/// Largest n accepted by the table schema (single-digit subset keys).
pub const MAX_SCHEMA_N: usize = 6;

fn schema(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn entry_value(key: &str, v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(x) => {
            if let Some(i) = x.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                rationalize(x.as_f64().unwrap_or(f64::NAN), RATIONALIZE_DEN)
            }
        }
        _ => Err(schema(format!("entry `{key}` must be a rational string or a number"))),
    }
}

/// Reads `{"n": int, "coords": "...", "entries": {"": "1/4", "1": ...}}`.
pub fn table_from_json(v: &Value) -> Result<BinaryTable> {
    let obj = v.as_object().ok_or_else(|| schema("a table must be a JSON object"))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema("field `n` must be a nonnegative integer"))? as usize;
    if n > MAX_SCHEMA_N {
        return Err(Error::Unsupported(format!("tables with n = {n} > {MAX_SCHEMA_N}")));
    }
    let coords: Coords = obj
        .get("coords")
        .and_then(Value::as_str)
        .ok_or_else(|| schema("field `coords` must be a string"))?
        .parse()?;
    let entries = obj
        .get("entries")
        .and_then(Value::as_object)
        .ok_or_else(|| schema("field `entries` must be an object"))?;
    if let Some(k) = obj.keys().find(|k| !["n", "coords", "entries"].contains(&k.as_str())) {
        return Err(schema(format!("unknown field `{k}`")));
    }
    let mut values: Vec<Option<Rational>> = vec![None; 1 << n];
    for (key, v) in entries {
        let s = SubsetMask::parse_key(key, n)?;
        values[s.index()] = Some(entry_value(key, v)?);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| schema(format!("missing entry `{}`", SubsetMask(i as u32).key()))))
        .collect::<Result<Vec<_>>>()?;
    BinaryTable::new(n, coords, values)
}

pub fn table_to_json(t: &BinaryTable) -> Value {
    let entries: Map<String, Value> = SubsetMask::full(t.n())
        .subsets()
        .map(|s| (s.key(), Value::String(format_rational(t.get(s)))))
        .collect();
    json!({ "n": t.n(), "coords": t.coords().to_string(), "entries": entries })
}

fn float_table(n: usize, values: &[f64]) -> Value {
    let entries: Map<String, Value> = SubsetMask::full(n)
        .subsets()
        .map(|s| (s.key(), json!(values[s.index()])))
        .collect();
    json!({ "n": n, "coords": "prob", "entries": entries })
}

pub fn census_to_json(c: &Census) -> Value {
    let orbits: Vec<Value> = c
        .orbits
        .iter()
        .map(|o| {
            let mut v = json!({
                "m": o.m(),
                "representative": o.representative.subsets().iter().map(|s| s.label()).collect::<Vec<_>>(),
                "orbit_size": o.orbit_size,
            });
            if let Some(codim) = o.codimension {
                v["codimension"] = json!(codim);
            }
            v
        })
        .collect();
    json!({
        "n": c.n,
        "filter": c.filter.to_string(),
        "m_range": [c.m_range.start(), c.m_range.end()],
        "collections": c.collections,
        "total": c.total(),
        "counts_by_m": c.counts_by_m(),
        "orbits": orbits,
    })
}

pub fn optimizer_to_json(r: &OptimizerReport) -> Value {
    json!({
        "n": r.n,
        "best_value": r.best_value,
        "best_start": r.best_start,
        "argmax": float_table(r.n, &r.argmax),
        "argmax_exact": table_to_json(&r.argmax_exact),
        "certified": r.certified,
        "certified_value": format_rational(&r.certified_value),
        "gradient_check": r.gradient_check,
        "starts": r.starts,
        "seed": r.seed,
        "tolerance": r.tolerance,
    })
}

pub fn membership_to_json(m: &Membership) -> Value {
    json!({
        "member": m.member,
        "witness": m.witness.map(|s| s.key()),
        "violations": m.violations.iter().map(|s| s.key()).collect::<Vec<_>>(),
        "probabilities": table_to_json(&m.probabilities),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_round_trip() {
        let v = json!({"n": 2, "coords": "prob", "entries": {"": "1/4", "1": "1/4", "2": "1/4", "12": 0.25}});
        let t = table_from_json(&v).unwrap();
        let back = table_to_json(&t);
        assert_eq!(back["entries"]["12"], json!("1/4"));
        assert_eq!(table_from_json(&back).unwrap(), t);
    }

    #[test]
    fn schema_errors() {
        let bad_key = json!({"n": 2, "coords": "prob", "entries": {"": "1/4", "1": "1/4", "2": "1/4", "13": "1/4"}});
        assert!(matches!(table_from_json(&bad_key), Err(Error::Parse(_))));
        let missing = json!({"n": 1, "coords": "prob", "entries": {"": "1"}});
        assert!(table_from_json(&missing).is_err());
        let big = json!({"n": 7, "coords": "prob", "entries": {}});
        assert!(matches!(table_from_json(&big), Err(Error::Unsupported(_))));
        let extra = json!({"n": 1, "coords": "prob", "entries": {"": "1", "1": "0"}, "x": 1});
        assert!(table_from_json(&extra).is_err());
    }
}
