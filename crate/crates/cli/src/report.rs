//! Output plumbing: exit codes, provenance, CSV and JSON writers.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use locsym::io::{format_float, to_json_string};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug)]
pub enum CliError {
    /// Malformed potential file or argument.
    Parse(String),
    /// Well-formed input the physics rejects.
    Physics(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Physics(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Physics(m) => write!(f, "invalid input: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<locsym::Error> for CliError {
    fn from(e: locsym::Error) -> Self {
        match e {
            locsym::Error::Parse { .. } => CliError::Parse(e.to_string()),
            other => CliError::Physics(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Potential file contents together with their hash.
pub struct Loaded {
    pub spec: locsym::PotentialSpecF64,
    pub sha256: String,
    pub path: PathBuf,
}

pub fn load_potential(path: &Path) -> CliResult<Loaded> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Parse(format!("{}: not valid UTF-8", path.display())))?;
    let spec = locsym::io::parse_potential(&text).map_err(|e| match e {
        locsym::Error::Parse { .. } => CliError::Parse(format!("{}: {e}", path.display())),
        other => CliError::Physics(format!("{}: {other}", path.display())),
    })?;
    Ok(Loaded {
        spec,
        sha256: hex::encode(Sha256::digest(&bytes)),
        path: path.to_path_buf(),
    })
}

#[derive(Serialize)]
struct Provenance<'a> {
    potential: String,
    potential_sha256: &'a str,
    args: Vec<String>,
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    provenance: Provenance<'a>,
    report: &'a R,
}

/// JSON report wrapped with the potential hash and the full argument list.
pub fn json_report<R: Serialize>(loaded: &Loaded, report: &R) -> String {
    to_json_string(&Envelope {
        provenance: Provenance {
            potential: loaded.path.display().to_string(),
            potential_sha256: &loaded.sha256,
            args: std::env::args().collect(),
        },
        report,
    })
}

/// CSV text with a header row and `\n` line endings.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io_err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(row).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

pub fn floats(values: &[f64]) -> Vec<String> {
    values.iter().map(|&x| format_float(x)).collect()
}

pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_unix_newlines() {
        let text = csv_table(&["a", "b"], &[floats(&[1.0, -0.5])]).unwrap();
        assert_eq!(text, "a,b\n1.0000000000000000e0,-5.0000000000000000e-1\n");
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(locsym::Error::NonPositiveEnergy(0.0)).exit_code(), 3);
        let parse = locsym::Error::Parse { line: 1, column: 2, message: "x".into() };
        assert_eq!(CliError::from(parse).exit_code(), 2);
        assert_eq!(CliError::Io("x".into()).exit_code(), 4);
    }
}
