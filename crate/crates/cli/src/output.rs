//! Rendering of command results as JSON, CSV or an aligned text table.

use serde_json::Value;
use tensornorm::format::{format_g17, to_json_string};

use crate::args::Format;

/// Rows of strings under a header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// One row whose columns are the flattened leaf paths of `value`.
    pub fn flatten(value: &Value) -> Self {
        let mut leaves = Vec::new();
        flatten_into(value, String::new(), &mut leaves);
        let (header, row) = leaves.into_iter().unzip();
        Table { header, rows: vec![row] }
    }

    /// One row per array element, with columns from the flattened elements.
    pub fn records(items: &[Value]) -> Self {
        let mut header: Vec<String> = Vec::new();
        let flat: Vec<Vec<(String, String)>> = items
            .iter()
            .map(|item| {
                let mut leaves = Vec::new();
                flatten_into(item, String::new(), &mut leaves);
                leaves
            })
            .collect();
        for leaves in &flat {
            for (k, _) in leaves {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
        }
        let rows = flat
            .into_iter()
            .map(|leaves| {
                header
                    .iter()
                    .map(|h| leaves.iter().find(|(k, _)| k == h).map(|(_, v)| v.clone()).unwrap_or_default())
                    .collect()
            })
            .collect();
        Table { header, rows }
    }
}

pub fn scalar_text(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => n.as_f64().map(format_g17).unwrap_or_default(),
        other => other.to_string(),
    }
}

fn flatten_into(value: &Value, prefix: String, out: &mut Vec<(String, String)>) {
    let join = |key: &str| if prefix.is_empty() { key.to_string() } else { format!("{prefix}.{key}") };
    match value {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for k in keys {
                flatten_into(&map[k], join(k), out);
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten_into(item, join(&i.to_string()), out);
            }
        }
        leaf => out.push((prefix, scalar_text(leaf))),
    }
}

pub fn render(value: &Value, table: &Table, format: Format) -> Result<String, String> {
    match format {
        Format::Json => {
            let mut s = to_json_string(value);
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header).map_err(|e| e.to_string())?;
            for row in &table.rows {
                w.write_record(row).map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            String::from_utf8(bytes).map_err(|e| e.to_string())
        }
        Format::Table => Ok(aligned(table)),
    }
}

fn aligned(table: &Table) -> String {
    if table.rows.len() == 1 {
        let width = table.header.iter().map(|h| h.chars().count()).max().unwrap_or(0);
        return table
            .header
            .iter()
            .zip(&table.rows[0])
            .map(|(h, v)| format!("{h:<width$}  {v}\n"))
            .collect();
    }
    let mut widths: Vec<usize> = table.header.iter().map(|h| h.chars().count()).collect();
    for row in &table.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| -> String {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(&table.header);
    for row in &table.rows {
        out.push_str(&line(row));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flatten_uses_dotted_sorted_paths() {
        let t = Table::flatten(&json!({"b": [1, 2.5], "a": {"y": null, "x": "s"}}));
        assert_eq!(t.header, ["a.x", "a.y", "b.0", "b.1"]);
        assert_eq!(t.rows, vec![vec!["s", "", "1", "2.5"]]);
    }

    #[test]
    fn records_share_a_header() {
        let t = Table::records(&[json!({"u": 1, "v": 0.1}), json!({"u": 2, "w": true})]);
        assert_eq!(t.header, ["u", "v", "w"]);
        assert_eq!(t.rows[1], vec!["2", "", "true"]);
        assert_eq!(t.rows[0][1], "0.10000000000000001");
    }

    #[test]
    fn csv_and_table_rendering() {
        let v = json!({"psi": 32.0, "n": 3});
        let t = Table::flatten(&v);
        assert_eq!(render(&v, &t, Format::Csv).unwrap(), "n,psi\n3,32\n");
        assert_eq!(render(&v, &t, Format::Table).unwrap(), "n    3\npsi  32\n");
        assert_eq!(render(&v, &t, Format::Json).unwrap(), "{\"n\":3,\"psi\":32}\n");
    }
}
