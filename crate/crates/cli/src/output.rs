use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// Renders a report. JSON is pretty-printed with sorted keys; text prints one
/// `key: value` line per top-level field with nested values as compact JSON.
pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("values always serialize"),
        Format::Text => match report {
            Value::Object(map) => map
                .iter()
                .map(|(k, v)| format!("{k}: {}", scalar(v)))
                .collect::<Vec<_>>()
                .join("\n"),
            other => scalar(other),
        },
    }
}

fn scalar(v: &Value) -> String {
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
    fn text_lines() {
        let v = json!({"b": [1, 2], "a": "x", "c": 3});
        assert_eq!(render(&v, Format::Text), "a: x\nb: [1,2]\nc: 3");
        assert!(render(&v, Format::Json).starts_with("{\n  \"a\""));
    }
}
