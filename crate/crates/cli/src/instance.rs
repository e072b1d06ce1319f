//! JSON instance files.
//!
//! ```json
//! { "field": "complex",
//!   "vectors": [[[1, 0], [0, 1]], [[0, 0], [2, 0]]],
//!   "x": [[1, 1], [0, 0]],
//!   "gammas": [[0, 0], [0, 0]], "Gammas": [[2, 0], [2, 0]] }
//! ```
//!
//! Real scalars are plain numbers; complex scalars are `[re, im]` pairs (a
//! plain number is accepted as a complex value with zero imaginary part).
//! Numbers are written in shortest round-trip form, so a save followed by a
//! load reproduces every value exactly.

use std::fs;
use std::path::Path;

use gramdist::{Field, IntervalData, Scalar, ToleranceConfig, Vector, VectorSystem};
use serde_json::{json, Value};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub system: VectorSystem,
    pub x: Vector,
    pub intervals: Option<IntervalData>,
}

struct Ctx<'a> {
    file: &'a str,
}

impl Ctx<'_> {
    fn invalid(&self, field: impl Into<String>, message: impl Into<String>) -> HarnessError {
        HarnessError::Invalid {
            file: self.file.to_string(),
            field: field.into(),
            message: message.into(),
        }
    }

    fn scalar(&self, v: &Value, field: Field, path: &str) -> Result<Scalar> {
        let num = |v: &Value, p: &str| -> Result<f64> {
            v.as_f64()
                .ok_or_else(|| self.invalid(p, format!("expected a number, found {v}")))
        };
        match v {
            Value::Number(_) => Ok(Scalar::new(num(v, path)?, 0.0)),
            Value::Array(pair) if field == Field::Complex => {
                if pair.len() != 2 {
                    return Err(self.invalid(
                        path,
                        format!("complex value needs [re, im], found {} entries", pair.len()),
                    ));
                }
                Ok(Scalar::new(
                    num(&pair[0], &format!("{path}[0]"))?,
                    num(&pair[1], &format!("{path}[1]"))?,
                ))
            }
            Value::Array(_) => Err(self.invalid(path, "[re, im] pair in a real instance")),
            other => Err(self.invalid(path, format!("expected a scalar, found {other}"))),
        }
    }

    fn scalars(&self, v: &Value, field: Field, path: &str, len: Option<usize>) -> Result<Vec<Scalar>> {
        let items = v
            .as_array()
            .ok_or_else(|| self.invalid(path, format!("expected an array, found {v}")))?;
        if let Some(len) = len {
            if items.len() != len {
                return Err(self.invalid(path, format!("expected {len} entries, found {}", items.len())));
            }
        }
        items
            .iter()
            .enumerate()
            .map(|(i, s)| self.scalar(s, field, &format!("{path}[{i}]")))
            .collect()
    }

    fn vector(&self, coords: Vec<Scalar>, field: Field, path: &str) -> Result<Vector> {
        Vector::new(field, coords).map_err(|e| self.invalid(path, e.to_string()))
    }
}

/// Parses an instance from JSON text. `name` is used in error messages.
pub fn parse_instance(text: &str, name: &str, tol: ToleranceConfig) -> Result<Instance> {
    let root: Value = serde_json::from_str(text).map_err(|e| HarnessError::Syntax {
        file: name.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let cx = Ctx { file: name };
    let obj = root
        .as_object()
        .ok_or_else(|| cx.invalid("$", "top level must be an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "field" | "vectors" | "x" | "gammas" | "Gammas") {
            return Err(cx.invalid(key.as_str(), "unknown key"));
        }
    }

    let field = match obj.get("field").and_then(Value::as_str) {
        Some("real") => Field::Real,
        Some("complex") => Field::Complex,
        Some(other) => return Err(cx.invalid("field", format!("expected \"real\" or \"complex\", found \"{other}\""))),
        None => return Err(cx.invalid("field", "missing or not a string")),
    };

    let rows = obj
        .get("vectors")
        .ok_or_else(|| cx.invalid("vectors", "missing"))?
        .as_array()
        .ok_or_else(|| cx.invalid("vectors", "expected an array of vectors"))?;
    if rows.is_empty() {
        return Err(cx.invalid("vectors", "at least one vector is required"));
    }
    let mut dim = None;
    let mut vectors = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let path = format!("vectors[{i}]");
        let coords = cx.scalars(row, field, &path, dim)?;
        dim.get_or_insert(coords.len());
        vectors.push(cx.vector(coords, field, &path)?);
    }
    let n = vectors.len();

    let x_value = obj.get("x").ok_or_else(|| cx.invalid("x", "missing"))?;
    let x = cx.vector(cx.scalars(x_value, field, "x", dim)?, field, "x")?;

    let intervals = match (obj.get("gammas"), obj.get("Gammas")) {
        (None, None) => None,
        (Some(lo), Some(hi)) => {
            let lower = cx.scalars(lo, field, "gammas", Some(n))?;
            let upper = cx.scalars(hi, field, "Gammas", Some(n))?;
            Some(IntervalData::new(lower, upper)?)
        }
        (Some(_), None) => return Err(cx.invalid("Gammas", "missing while gammas is present")),
        (None, Some(_)) => return Err(cx.invalid("gammas", "missing while Gammas is present")),
    };

    let system = VectorSystem::with_tolerance(vectors, tol).map_err(|e| match e {
        e if e.is_precondition() => HarnessError::Core(e),
        e => cx.invalid("vectors", e.to_string()),
    })?;
    Ok(Instance { system, x, intervals })
}

pub fn load_instance(path: &Path, tol: ToleranceConfig) -> Result<Instance> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance(&text, &path.display().to_string(), tol)
}

fn scalar_json(field: Field, s: Scalar) -> Value {
    match field {
        Field::Real => json!(s.re),
        Field::Complex => json!([s.re, s.im]),
    }
}

fn scalars_json(field: Field, s: &[Scalar]) -> Value {
    Value::Array(s.iter().map(|&c| scalar_json(field, c)).collect())
}

pub fn instance_to_json(instance: &Instance) -> Value {
    let field = instance.system.field();
    let mut obj = serde_json::Map::new();
    obj.insert("field".into(), json!(field.name()));
    obj.insert(
        "vectors".into(),
        Value::Array(
            instance
                .system
                .vectors()
                .iter()
                .map(|v| scalars_json(field, v.coords()))
                .collect(),
        ),
    );
    obj.insert("x".into(), scalars_json(field, instance.x.coords()));
    if let Some(iv) = &instance.intervals {
        obj.insert("gammas".into(), scalars_json(field, &iv.lower));
        obj.insert("Gammas".into(), scalars_json(field, &iv.upper));
    }
    Value::Object(obj)
}

pub fn save_instance(instance: &Instance, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&instance_to_json(instance)).expect("finite instance values");
    text.push('\n');
    fs::write(path, text).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}
