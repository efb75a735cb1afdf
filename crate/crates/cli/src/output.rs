//! Report rendering. JSON is authoritative; CSV flattens one table out of it.

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn render(value: &Value, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(format!("{}\n", serde_json::to_string(value)?)),
        Format::Csv => to_csv(value),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn rows_of_objects(items: &[Value]) -> Option<(Vec<String>, Vec<Vec<String>>)> {
    let objs: Vec<&Map<String, Value>> = items.iter().map(|v| v.as_object()).collect::<Option<_>>()?;
    let mut header: Vec<String> = Vec::new();
    for o in &objs {
        for k in o.keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let rows = objs.iter().map(|o| header.iter().map(|k| o.get(k).map(cell).unwrap_or_default()).collect()).collect();
    Some((header, rows))
}

/// The first array field of an object becomes the table (one row per element);
/// otherwise the object's fields form a single row.
fn table(value: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    match value {
        Value::Array(items) => rows_of_objects(items)
            .unwrap_or_else(|| (vec!["value".into()], items.iter().map(|v| vec![cell(v)]).collect())),
        Value::Object(map) => {
            for (k, v) in map {
                if let Value::Array(items) = v {
                    if items.is_empty() {
                        continue;
                    }
                    return rows_of_objects(items)
                        .unwrap_or_else(|| (vec![k.clone()], items.iter().map(|v| vec![cell(v)]).collect()));
                }
            }
            (map.keys().cloned().collect(), vec![map.values().map(cell).collect()])
        }
        other => (vec!["value".into()], vec![vec![cell(other)]]),
    }
}

fn to_csv(value: &Value) -> Result<String> {
    let (header, rows) = table(value);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_projection() {
        let v = json!({"p": 19, "table": [{"z": 1, "alpha": 18}, {"z": 4, "alpha": 20}]});
        assert_eq!(render(&v, Format::Csv).unwrap(), "z,alpha\n1,18\n4,20\n");
        let v = json!({"n": "64", "indices": [10, 6, 2]});
        assert_eq!(render(&v, Format::Csv).unwrap(), "indices\n10\n6\n2\n");
        let v = json!({"planes": 11011, "orbits": 31});
        assert_eq!(render(&v, Format::Csv).unwrap(), "planes,orbits\n11011,31\n");
        assert_eq!(render(&v, Format::Json).unwrap(), "{\"planes\":11011,\"orbits\":31}\n");
    }
}
