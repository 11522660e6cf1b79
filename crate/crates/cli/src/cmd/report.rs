use std::fs;
use std::path::PathBuf;

use clap::Args;
use serde_json::Value;

use crate::args::{fail, write_or_print, Outcome};

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// A JSON report written by another command.
    pub file: PathBuf,
    /// Print the verdicts as CSV (path,pass) instead of text.
    #[arg(long)]
    pub csv: bool,
}

/// Every `pass` field in the document, keyed by its JSON path.
fn verdicts(v: &Value, path: &str, out: &mut Vec<(String, bool)>) {
    match v {
        Value::Object(map) => {
            if let Some(Value::Bool(p)) = map.get("pass") {
                let label = map
                    .get("test")
                    .or_else(|| map.get("law"))
                    .and_then(Value::as_str)
                    .map_or_else(|| path.to_string(), |t| format!("{path} ({t})"));
                out.push((label, *p));
            }
            for (k, child) in map {
                verdicts(child, &format!("{path}/{k}"), out);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                verdicts(child, &format!("{path}/{i}"), out);
            }
        }
        _ => {}
    }
}

pub fn run(args: &ReportArgs) -> Outcome {
    let text = fs::read_to_string(&args.file).map_err(|e| fail(format!("cannot read {}: {e}", args.file.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| fail(format!("{} is not JSON: {e}", args.file.display())))?;
    let pass = doc
        .get("pass")
        .and_then(Value::as_bool)
        .ok_or_else(|| fail(format!("{} has no top-level pass field", args.file.display())))?;
    let mut rows = Vec::new();
    verdicts(&doc, "", &mut rows);
    let mut out = String::new();
    if args.csv {
        out.push_str("path,pass\n");
        for (p, ok) in &rows {
            out.push_str(&format!("\"{}\",{ok}\n", p.replace('"', "\"\"")));
        }
    } else {
        for (p, ok) in &rows {
            let p = if p.is_empty() { "/" } else { p };
            out.push_str(&format!("{} {p}\n", if *ok { "PASS" } else { "FAIL" }));
        }
        let failed = rows.iter().filter(|r| !r.1).count();
        out.push_str(&format!("{} verdicts, {failed} failing\n", rows.len()));
    }
    write_or_print(&out, None)?;
    Ok(pass)
}
