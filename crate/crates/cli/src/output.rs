use std::io::Write;
use std::path::Path;

use crate::{Failure, Run};

/// Writes to `out` via a temp file in the same directory and a rename, or
/// to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Run<()> {
    let io = |e: std::io::Error| Failure::Usage(format!("cannot write output: {e}"));
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(io)?;
            stdout.flush().map_err(io)
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
            tmp.write_all(text.as_bytes()).map_err(io)?;
            tmp.as_file().sync_all().map_err(io)?;
            tmp.persist(path).map_err(|e| io(e.error))?;
            Ok(())
        }
    }
}

pub fn error_record(name: &str, message: &str) -> String {
    serde_json::json!({ "error": name, "message": message }).to_string()
}

pub fn json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

/// Tab-separated rows with a trailing newline.
pub fn tsv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join("\t");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join("\t"));
        s.push('\n');
    }
    s
}
