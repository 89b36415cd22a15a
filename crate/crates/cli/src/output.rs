//! Result rows printed either as a table or as one JSON object per line.

use std::io::{self, Write};

use serde_json::Value;

/// One result object with its fields in display order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row(pub Vec<(String, Value)>);

impl Row {
    pub fn new() -> Self {
        Row(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    fn to_json_line(&self) -> String {
        let fields: Vec<String> = self.0.iter().map(|(k, v)| format!("{}:{}", Value::String(k.clone()), v)).collect();
        format!("{{{}}}", fields.join(","))
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.is_empty() => "-".into(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

/// Prints `rows`. A single one-field row prints its bare value.
pub fn emit(rows: &[Row], json: bool) -> io::Result<()> {
    let mut out = io::stdout().lock();
    if json {
        for row in rows {
            writeln!(out, "{}", row.to_json_line())?;
        }
        return Ok(());
    }
    if let [row] = rows {
        if let [(_, v)] = row.0.as_slice() {
            return writeln!(out, "{}", cell(v));
        }
    }
    let mut header: Vec<&str> = Vec::new();
    for row in rows {
        for (k, _) in &row.0 {
            if !header.contains(&k.as_str()) {
                header.push(k);
            }
        }
    }
    if header.is_empty() {
        return Ok(());
    }
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            header
                .iter()
                .map(|h| row.0.iter().find(|(k, _)| k == h).map_or("-".to_string(), |(_, v)| cell(v)))
                .collect()
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|i| table.iter().map(|r| r[i].chars().count()).chain([header[i].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}", w = *w)).collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(out, "{}", line(header.clone()))?;
    for r in &table {
        writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keeps_field_order() {
        let row = Row::new().with("zeta", 1).with("alpha", "a\"b");
        assert_eq!(row.to_json_line(), r#"{"zeta":1,"alpha":"a\"b"}"#);
    }

    #[test]
    fn cells_flatten_arrays() {
        assert_eq!(cell(&serde_json::json!(["@a", "@b"])), "@a,@b");
        assert_eq!(cell(&Value::Null), "-");
        assert_eq!(cell(&serde_json::json!([])), "-");
    }
}
