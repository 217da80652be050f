//! JSON or flattened `key  value` table output.

use serde_json::Value;

pub fn emit(body: &Value, table: bool) {
    if table {
        let mut rows = Vec::new();
        flatten("", body, &mut rows);
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            println!("{k:width$}  {v}");
        }
    } else {
        println!("{}", serde_json::to_string_pretty(body).unwrap_or_default());
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        // scalars written as {"float", "digits"} read better on one line
        Value::Object(m) if m.contains_key("float") && m.contains_key("digits") => {
            out.push((prefix.to_string(), m["float"].as_str().unwrap_or_default().to_string()));
        }
        Value::Object(m) => {
            for (k, v) in m {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            let cells: Vec<String> = items.iter().map(cell).collect();
            out.push((prefix.to_string(), cells.join("  ")));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        other => out.push((prefix.to_string(), cell(other))),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattens_nested_values() {
        let mut rows = Vec::new();
        flatten("", &json!({"a": {"b": ["1/2", "3"]}, "c": {"float": "1.5", "digits": 50}}), &mut rows);
        assert_eq!(rows, vec![("a.b".to_string(), "1/2  3".to_string()), ("c".to_string(), "1.5".to_string())]);
    }
}
