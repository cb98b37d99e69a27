use std::collections::HashMap;

use num_rational::BigRational;
use serde_json::{json, Value};

use super::{Edge, Formula, Gate};
use crate::algebra::{parse_rational, rational_string};
use crate::error::{Error, Result};

pub fn formula_to_json(f: &Formula) -> Value {
    let nodes: Vec<Value> = f
        .gates()
        .iter()
        .enumerate()
        .map(|(id, g)| {
            let children = |es: &[Edge]| {
                es.iter()
                    .map(|e| json!({ "id": e.child, "coeff": rational_string(&e.coeff) }))
                    .collect::<Vec<_>>()
            };
            match g {
                Gate::Input(v) => json!({ "id": id, "op": "in", "var": v }),
                Gate::Add(es) => json!({ "id": id, "op": "add", "children": children(es) }),
                Gate::Mul(es) => json!({ "id": id, "op": "mul", "children": children(es) }),
            }
        })
        .collect();
    json!({ "nvars": f.nvars(), "root": f.root(), "nodes": nodes })
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidFormula(msg.into())
}

fn get_u64(v: &Value, key: &str) -> Result<u64> {
    v.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| bad(format!("missing or non-integer field {key:?}")))
}

fn coeff(v: &Value) -> Result<BigRational> {
    match v.get("coeff") {
        None => Ok(BigRational::from_integer(1.into())),
        Some(Value::String(s)) => parse_rational(s),
        Some(Value::Number(n)) => parse_rational(&n.to_string()),
        Some(other) => Err(bad(format!("bad coefficient {other}"))),
    }
}

/// Reads the formula JSON format; node ids may be any distinct non-negative integers.
pub fn formula_from_json(v: &Value) -> Result<Formula> {
    let nvars = u32::try_from(get_u64(v, "nvars")?).map_err(|_| bad("nvars too large"))?;
    let root = get_u64(v, "root")?;
    let nodes = v
        .get("nodes")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing nodes array"))?;
    let mut index = HashMap::new();
    for (i, n) in nodes.iter().enumerate() {
        if index.insert(get_u64(n, "id")?, i).is_some() {
            return Err(bad("duplicate node id"));
        }
    }
    let lookup = |id: u64| {
        index
            .get(&id)
            .copied()
            .ok_or_else(|| bad(format!("unknown node id {id}")))
    };
    let mut gates = Vec::with_capacity(nodes.len());
    for n in nodes {
        let op = n
            .get("op")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing op"))?;
        let gate = match op {
            "in" => Gate::Input(
                u32::try_from(get_u64(n, "var")?).map_err(|_| bad("variable index too large"))?,
            ),
            "add" | "mul" => {
                let kids = n
                    .get("children")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("missing children"))?;
                let mut es = Vec::with_capacity(kids.len());
                for c in kids {
                    es.push(Edge {
                        child: lookup(get_u64(c, "id")?)?,
                        coeff: coeff(c)?,
                    });
                }
                if op == "add" {
                    Gate::Add(es)
                } else {
                    Gate::Mul(es)
                }
            }
            other => return Err(bad(format!("unknown op {other:?}"))),
        };
        gates.push(gate);
    }
    Formula::new(nvars, gates, lookup(root)?)
}
