use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// The envelope every command prints.
pub struct Report {
    command: String,
    argv: Vec<String>,
    pub fan: Value,
    pub result: Value,
    warnings: Vec<String>,
    error: Option<String>,
    pub exit_code: u8,
}

impl Report {
    pub fn new(command: &str, argv: Vec<String>) -> Self {
        Report {
            command: command.to_string(),
            argv,
            fan: Value::Null,
            result: Value::Null,
            warnings: Vec::new(),
            error: None,
            exit_code: 0,
        }
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn fail(&mut self, message: &str) {
        self.error = Some(message.to_string());
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "argv": self.argv,
            "status": if self.error.is_none() { "ok" } else { "error" },
            "exit_code": self.exit_code,
            "error": self.error,
            "warnings": self.warnings,
            "fan": self.fan,
            "result": self.result,
        })
    }

    pub fn render(&self, format: Format) -> String {
        let value = self.to_json();
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Table => render_table(&value),
        }
    }
}

/// Every leaf of the JSON report as aligned `key  value` rows; arrays of flat
/// objects become column tables.
pub fn render_table(value: &Value) -> String {
    let mut out = String::new();
    let mut rows = Vec::new();
    walk(value, "", &mut rows, &mut out);
    flush(&mut rows, &mut out);
    out
}

fn walk(value: &Value, path: &str, rows: &mut Vec<(String, String)>, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                walk(v, &join(path, k), rows, out);
            }
        }
        Value::Array(items) if !items.is_empty() && items.iter().all(is_flat_object) => {
            flush(rows, out);
            table(path, items, out);
        }
        Value::Array(items) if items.iter().all(is_scalarish) => {
            rows.push((path.to_string(), scalar(value)));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                walk(v, &format!("{path}[{i}]"), rows, out);
            }
        }
        _ => rows.push((path.to_string(), scalar(value))),
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn is_scalarish(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(is_scalarish),
        Value::Object(_) => false,
        _ => true,
    }
}

fn is_flat_object(v: &Value) -> bool {
    matches!(v, Value::Object(m) if m.values().all(is_scalarish))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "null".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn flush(rows: &mut Vec<(String, String)>, out: &mut String) {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    for (k, v) in rows.drain(..) {
        let pad = width - k.chars().count();
        out.push_str(&format!("{k}{}  {v}\n", " ".repeat(pad)));
    }
}

fn table(title: &str, items: &[Value], out: &mut String) {
    let mut columns: Vec<String> = Vec::new();
    for item in items {
        let map: &Map<String, Value> = item.as_object().expect("flat object");
        for k in map.keys() {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> = items
        .iter()
        .map(|item| {
            columns
                .iter()
                .map(|c| item.get(c).map_or_else(String::new, scalar))
                .collect()
        })
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            cells
                .iter()
                .map(|row| row[i].chars().count())
                .chain([c.chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |values: &[String]| -> String {
        let padded: Vec<String> = values
            .iter()
            .zip(&widths)
            .map(|(v, w)| format!("{v}{}", " ".repeat(w - v.chars().count())))
            .collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    out.push_str(&format!("{title} ({} rows)\n", items.len()));
    out.push_str(&line(&columns));
    for row in &cells {
        out.push_str(&line(row));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_keeps_every_leaf() {
        let v = json!({
            "a": 1,
            "b": {"c": [1, 2], "d": null},
            "rows": [{"x": 1, "y": "s"}, {"x": 22, "y": "t"}],
        });
        let t = render_table(&v);
        assert!(t.contains("a    1\n"));
        assert!(t.contains("b.c  [1, 2]\n"));
        assert!(t.contains("b.d  null\n"));
        assert!(t.contains("rows (2 rows)\n  x   y\n  1   s\n  22  t\n"));
    }
}
