//! Byte-stable CSV and JSON emission.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::CliError;

/// Shortest round-trip decimal; `inf`, `-inf` and `NaN` for the specials.
pub fn num(v: f64) -> String {
    format!("{v}")
}

/// Accumulates CSV rows with `\n` line endings.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Self { buf }
    }

    pub fn row(&mut self, fields: &[String]) {
        let _ = writeln!(self.buf, "{}", fields.join(","));
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}

pub fn json_string<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

/// Writes to `path` if given, otherwise to `stdout`.
pub fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(format!("stdout: {e}"))),
    }
}
