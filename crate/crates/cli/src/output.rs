use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

pub type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_unix: Option<u64>,
    report: &'a T,
}

/// Wraps `report` with the schema version and writes it as JSON to `path`
/// or stdout.
pub fn emit<T: Serialize>(command: &str, report: &T, path: Option<&Path>, timestamp: bool) -> CliResult<()> {
    let generated_unix = timestamp.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        generated_unix,
        report,
    };
    let mut text = serde_json::to_string_pretty(&env)?;
    text.push('\n');
    write_text(path, &text)
}

pub fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn write_csv<R: Serialize>(path: &Path, rows: impl IntoIterator<Item = R>) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
