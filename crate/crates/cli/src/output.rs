use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};
use igt_core::io::{encode_grid, GridArray};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputEntry {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Collects command outputs. Files go to `--out` when given; CSV reports are
/// echoed to stdout otherwise.
pub struct Outputs {
    dir: Option<PathBuf>,
    pub entries: Vec<OutputEntry>,
}

impl Outputs {
    pub fn new(dir: Option<PathBuf>) -> CliResult<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).map_err(|e| CliError::io(format!("cannot create {}: {e}", d.display())))?;
        }
        Ok(Self { dir, entries: Vec::new() })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn require_dir(&self, name: &str) -> CliResult<&Path> {
        self.dir
            .as_deref()
            .ok_or_else(|| CliError::precondition(format!("this command writes {name}; pass --out <dir>")).with_key("--out"))
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> CliResult<()> {
        let path = self.require_dir(name)?.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
        self.entries.push(OutputEntry { path: name.to_string(), bytes: bytes.len(), sha256: sha256_hex(bytes) });
        Ok(())
    }

    pub fn grid(&mut self, name: &str, a: &GridArray) -> CliResult<()> {
        self.write_bytes(name, &encode_grid(a))
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::io(e.to_string()))?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    pub fn csv(&mut self, name: &str, table: &Csv) -> CliResult<()> {
        if self.dir.is_none() {
            print!("{}", table.text);
            return Ok(());
        }
        self.write_bytes(name, table.text.as_bytes())
    }
}

/// Plain CSV with a fixed header. Floats use Rust's shortest round-trip
/// scientific form, which never depends on the locale.
pub struct Csv {
    text: String,
    columns: usize,
}

pub enum Cell {
    F(f64),
    I(usize),
    S(String),
    B(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::I(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}

impl From<Option<usize>> for Cell {
    fn from(v: Option<usize>) -> Self {
        v.map_or(Cell::Empty, Cell::I)
    }
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { text: format!("{}\n", header.join(",")), columns: header.len() }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.columns, "csv row width");
        let mut line = String::new();
        for (i, c) in cells.into_iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            match c {
                Cell::F(v) => write!(line, "{v:e}").unwrap(),
                Cell::I(v) => write!(line, "{v}").unwrap(),
                Cell::B(v) => write!(line, "{v}").unwrap(),
                Cell::S(s) if s.contains([',', '"', '\n']) => write!(line, "\"{}\"", s.replace('"', "\"\"")).unwrap(),
                Cell::S(s) => line.push_str(&s),
                Cell::Empty => {}
            }
        }
        self.text.push_str(&line);
        self.text.push('\n');
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}
