//! JSON input formats.
//!
//! A distribution file lists the events and one probability per subset key:
//!
//! ```json
//! { "events": ["x","y"], "p": { "": 0.4, "x": 0.2, "y": 0.3, "x,y": 0.1 } }
//! ```
//!
//! Subset keys join labels with commas; `""` is the empty set. Intensity
//! files use a `"lambda"` object instead of `"p"` and must not list `""`.
//! In strict mode every subset key must be present.

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::events::{EventSet, EventologicalDistribution, PoissonIntensities};
use crate::real::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Missing subset keys default to zero.
    pub lenient: bool,
    /// Divide by the total instead of requiring `Σ p(X) = 1`.
    pub renormalize: bool,
}

pub fn parse_distribution<T: Real>(
    text: &str,
    options: ParseOptions,
) -> Result<EventologicalDistribution<T>> {
    let root = parse_root(text)?;
    let events = parse_events(&root)?;
    let table = object_field(&root, "p")?;
    let p = parse_subset_values::<T>(&events, table, "p", true, options.lenient)?;
    if options.renormalize {
        EventologicalDistribution::renormalized(events, p)
    } else {
        EventologicalDistribution::new(events, p)
    }
}

pub fn parse_intensities(text: &str, options: ParseOptions) -> Result<PoissonIntensities> {
    let root = parse_root(text)?;
    let events = parse_events(&root)?;
    let table = object_field(&root, "lambda")?;
    let dense = parse_subset_values::<f64>(&events, table, "lambda", false, options.lenient)?;
    PoissonIntensities::from_dense(events, dense)
}

fn parse_root(text: &str) -> Result<Map<String, Value>> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        Error::Json(format!(
            "malformed JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    match value {
        Value::Object(map) => Ok(map),
        _ => Err(invalid("$", "expected a JSON object")),
    }
}

fn parse_events(root: &Map<String, Value>) -> Result<EventSet> {
    let list = match root.get("events") {
        Some(Value::Array(list)) => list,
        Some(_) => return Err(invalid("$.events", "expected an array of labels")),
        None => return Err(invalid("$.events", "missing field")),
    };
    let labels = list
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            Value::String(s) => Ok(s.clone()),
            _ => Err(invalid(&format!("$.events[{i}]"), "expected a string")),
        })
        .collect::<Result<Vec<_>>>()?;
    EventSet::new(labels).map_err(|e| invalid("$.events", &e.to_string()))
}

fn object_field<'a>(root: &'a Map<String, Value>, name: &str) -> Result<&'a Map<String, Value>> {
    match root.get(name) {
        Some(Value::Object(map)) => Ok(map),
        Some(_) => Err(invalid(&format!("$.{name}"), "expected an object")),
        None => Err(invalid(&format!("$.{name}"), "missing field")),
    }
}

fn parse_subset_values<T: Real>(
    events: &EventSet,
    table: &Map<String, Value>,
    field: &str,
    with_empty: bool,
    lenient: bool,
) -> Result<Vec<T>> {
    let mut values: Vec<Option<T>> = vec![None; events.subset_count()];
    for (key, value) in table {
        let path = format!("$.{field}[{key:?}]");
        let mask = events
            .parse_subset_key(key)
            .map_err(|e| invalid(&path, &e.to_string()))?;
        if mask == 0 && !with_empty {
            return Err(invalid(&path, "the empty set carries no intensity"));
        }
        if values[mask].is_some() {
            return Err(invalid(&path, "subset listed twice"));
        }
        let number = match value {
            Value::Number(n) => n.to_string(),
            _ => return Err(invalid(&path, "expected a number")),
        };
        let parsed = T::parse_decimal(&number)
            .ok_or_else(|| invalid(&path, &format!("cannot read {number} as a number")))?;
        if parsed.is_negative() {
            return Err(invalid(&path, "value must be nonnegative"));
        }
        values[mask] = Some(parsed);
    }
    let start = if with_empty { 0 } else { 1 };
    let mut out = Vec::with_capacity(values.len());
    for (mask, v) in values.into_iter().enumerate() {
        match v {
            Some(v) => out.push(v),
            None if mask < start || lenient => out.push(T::zero()),
            None => {
                return Err(invalid(
                    &format!("$.{field}[{:?}]", events.subset_key(mask)),
                    "missing subset key (use lenient mode to default to 0)",
                ))
            }
        }
    }
    Ok(out)
}

fn invalid(path: &str, reason: &str) -> Error {
    Error::InvalidValue {
        path: path.to_string(),
        reason: reason.to_string(),
    }
}
