use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use readonce::rof::{Oracle, Rof};
use readonce::{Error, MPoly};

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Yes = 0,
    No = 1,
    Config = 2,
    Precondition = 3,
    Indeterminate = 4,
}

#[derive(Debug)]
pub enum CliError {
    /// Unreadable input, malformed file, bad flag values.
    Config(String),
    /// Input is well formed but violates the command's requirements.
    Precondition(String),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Config(_) => Exit::Config,
            CliError::Precondition(_) => Exit::Precondition,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "error: {m}"),
            CliError::Precondition(m) => write!(f, "precondition failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::InvalidParams(_)
            | Error::NotPrime(_)
            | Error::OutOfRange(_) => CliError::Config(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// A parsed input file.
pub enum Input {
    Poly(MPoly),
    Rof(Rof),
}

impl Input {
    pub fn arity(&self) -> usize {
        match self {
            Input::Poly(p) => p.arity(),
            Input::Rof(r) => r.arity(),
        }
    }

    pub fn modulus(&self) -> u64 {
        match self {
            Input::Poly(p) => p.ctx().modulus(),
            Input::Rof(r) => r.ctx().modulus(),
        }
    }

    pub fn into_oracle(self) -> Oracle {
        match self {
            Input::Poly(p) => Oracle::from_poly(p),
            Input::Rof(r) => Oracle::from_rof(r),
        }
    }
}

/// Whether the body (first line after the header) opens an s-expression.
fn looks_like_rof(src: &str) -> bool {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .nth(1)
        .is_some_and(|l| l.starts_with('('))
}

fn read_source(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Loads a polynomial or read-once formula file. With `field` set, the
/// header's modulus must match it.
pub fn load(path: &Path, field: Option<u64>) -> CliResult<Input> {
    let src = read_source(path)?;
    let input = if looks_like_rof(&src) {
        Input::Rof(Rof::parse(&src)?)
    } else {
        Input::Poly(MPoly::parse(&src)?)
    };
    if let Some(p) = field {
        if p != input.modulus() {
            return Err(CliError::Config(format!(
                "--p {p} disagrees with the file header p={}",
                input.modulus()
            )));
        }
    }
    Ok(input)
}

/// Loads a file that must hold a polynomial; formulas are expanded.
pub fn load_poly(path: &Path, field: Option<u64>) -> CliResult<MPoly> {
    Ok(match load(path, field)? {
        Input::Poly(p) => p,
        Input::Rof(r) => r.expand(),
    })
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn warn(msg: impl fmt::Display) {
    eprintln!("warning: {msg}");
}
