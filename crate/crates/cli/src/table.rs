//! Plain-text rendering of a report: nested fields are flattened into dotted
//! columns, numbers keep their decimal strings.

use std::collections::BTreeMap;

use arthur_coeff::Report;
use serde_json::Value;

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                // precision is repeated on every number; the header carries it
                if k == "precision_bits" {
                    continue;
                }
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), format!("[{}]", parts.join(","))));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(",")),
        other => other.to_string(),
    }
}

pub fn render(report: &Report) -> String {
    let mut s = String::new();
    let c = &report.config;
    s.push_str(&format!(
        "# precision {} bits, guard {}, seed {}, field {}, tolerance 2^-{}\n",
        c.precision_bits, c.jet_guard_order, c.seed, c.field, c.tolerance_exponent
    ));
    for (k, v) in &report.query {
        s.push_str(&format!("# {k}: {}\n", scalar(v)));
    }
    for (i, row) in report.results.iter().enumerate() {
        let mut cells = Vec::new();
        flatten("", row, &mut cells);
        s.push_str(&format!("[{i}]\n"));
        let width = cells.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in cells {
            s.push_str(&format!("  {k:<width$}  {v}\n"));
        }
    }
    let diag: BTreeMap<_, _> = report.diagnostics.iter().collect();
    if !diag.is_empty() {
        s.push_str("diagnostics\n");
        for (k, v) in diag {
            let mut cells = Vec::new();
            flatten(k, v, &mut cells);
            for (k, v) in cells {
                s.push_str(&format!("  {k}  {v}\n"));
            }
        }
    }
    s
}
