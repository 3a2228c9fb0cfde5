//! Output files: a self-describing header followed by a table (CSV) or a
//! single JSON document.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_VAR: &str = "MULTICRIT_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Header block echoed at the top of every output.
pub fn header(command: &str, config: &impl Serialize, scaling: Option<&str>) -> Value {
    json!({
        "tool": "multicrit",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "conventions": {
            "half_integer_encoding": "site m stands for k = m + 1/2",
            "partition_format": "comma-separated parts, empty string for the empty partition",
            "scaling": scaling,
        },
    })
}

/// A result: either rows under named columns or a free-form document.
pub enum Payload {
    Table {
        columns: Vec<&'static str>,
        rows: Vec<Vec<Value>>,
    },
    Document(Value),
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn render(header: &Value, payload: &Payload, format: Format) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    match (format, payload) {
        (Format::Csv, Payload::Table { columns, rows }) => {
            writeln!(out, "# {header}").map_err(CliError::io)?;
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(columns).map_err(CliError::csv)?;
            for r in rows {
                w.write_record(r.iter().map(cell)).map_err(CliError::csv)?;
            }
            w.flush().map_err(CliError::io)?;
        }
        (Format::Csv, Payload::Document(doc)) => {
            // documents have no tabular form; keep the header convention
            writeln!(out, "# {header}").map_err(CliError::io)?;
            writeln!(out, "{}", serde_json::to_string(doc).map_err(CliError::json)?).map_err(CliError::io)?;
        }
        (Format::Json, Payload::Table { columns, rows }) => {
            let doc = json!({"header": header, "columns": columns, "rows": rows});
            serde_json::to_writer_pretty(&mut out, &doc).map_err(CliError::json)?;
            out.push(b'\n');
        }
        (Format::Json, Payload::Document(doc)) => {
            let doc = json!({"header": header, "result": doc});
            serde_json::to_writer_pretty(&mut out, &doc).map_err(CliError::json)?;
            out.push(b'\n');
        }
    }
    Ok(out)
}

/// Destination: `--out`, else `$MULTICRIT_OUT_DIR/<command>.<ext>`, else
/// standard output.
fn destination(out: Option<PathBuf>, command: &str, format: Format) -> Option<PathBuf> {
    out.or_else(|| {
        std::env::var_os(OUT_DIR_VAR).map(|dir| {
            let ext = match format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            PathBuf::from(dir).join(format!("{command}.{ext}"))
        })
    })
}

pub fn emit(
    header: &Value,
    payload: &Payload,
    format: Format,
    out: Option<PathBuf>,
    command: &str,
) -> Result<(), CliError> {
    let bytes = render(header, payload, format)?;
    match destination(out, command, format) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(CliError::io)?;
            }
            fs::write(&path, bytes).map_err(CliError::io)
        }
        None => io::stdout().lock().write_all(&bytes).map_err(CliError::io),
    }
}
