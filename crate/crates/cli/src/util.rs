//! Input parsing and output emission shared by the subcommands.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Anything a subcommand can fail with, already sorted by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid numeric input or configuration (exit 3).
    Domain(String),
    /// A size/resource cap was exceeded (exit 4).
    Resource(String),
    /// File system trouble (exit 5).
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(m) => write!(f, "{m}"),
            CliError::Resource(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 3,
            CliError::Resource(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl From<intersub::Error> for CliError {
    fn from(e: intersub::Error) -> Self {
        if e.is_resource() {
            CliError::Resource(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// 17 significant digits: enough to reparse the exact same double.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write to the given path, or stdout when no path is given.
pub fn write_output(out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Render one CSV with a single header row and '.' decimal separators.
pub fn render_csv(header: &[&str], rows: &[Vec<f64>]) -> CliResult<String> {
    if rows.is_empty() {
        return Err(CliError::Domain("no records to emit".into()));
    }
    let mut s = String::new();
    s.push_str(&header.join(","));
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt_float(v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    Ok(s)
}

pub fn to_json_pretty<T: serde::Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Domain(format!("serialization failed: {e}")))
}

/// Parse a comma-separated list of reals.
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| format!("not a number: '{tok}'"))
        })
        .collect()
}

/// Parse a comma-separated list of positive integers.
pub fn parse_u32_list(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u32>()
                .map_err(|_| format!("not a positive integer: '{tok}'"))
        })
        .collect()
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| format!("not a non-negative integer: '{tok}'"))
        })
        .collect()
}

/// One real per line; blank lines and `#` comments ignored.
pub fn read_energy_file(path: &PathBuf) -> CliResult<Vec<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let v: f64 = trimmed.parse().map_err(|_| {
            CliError::Domain(format!(
                "{}:{}: not a number: '{trimmed}'",
                path.display(),
                lineno + 1
            ))
        })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(CliError::Domain(format!(
            "{}: no energies found",
            path.display()
        )));
    }
    Ok(out)
}

/// Two-column CSV of (x, y); an optional single header row is skipped.
pub fn read_xy_csv(path: &PathBuf) -> CliResult<Vec<(f64, f64)>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let cells: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if cells.len() != 2 {
            return Err(CliError::Domain(format!(
                "{}:{}: expected two columns, found {}",
                path.display(),
                lineno + 1,
                cells.len()
            )));
        }
        match (cells[0].parse::<f64>(), cells[1].parse::<f64>()) {
            (Ok(x), Ok(y)) => out.push((x, y)),
            _ if lineno == 0 => continue, // header row
            _ => {
                return Err(CliError::Domain(format!(
                    "{}:{}: not numeric: '{trimmed}'",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Domain(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    Ok(out)
}
