//! Number formatting and output destinations.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// 17 significant digits in scientific notation; round-trips every `f64`.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// A float serialized with [`sig17`] instead of the shortest representation.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("non-finite value {}", self.0)));
        }
        RawValue::from_string(sig17(self.0)).map_err(S::Error::custom)?.serialize(s)
    }
}

/// A table with a header row; rendered as CSV or JSON.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Num>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|n| sig17(n.0)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Where a command's output goes: an explicit file, a default file name
/// inside the output directory, or stdout.
pub struct Destination {
    path: Option<PathBuf>,
}

impl Destination {
    pub fn resolve(output: Option<PathBuf>, out_dir: Option<&Path>, default_name: &str) -> Self {
        let path = match (output, out_dir) {
            (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
            (Some(p), _) => Some(p),
            (None, Some(dir)) => Some(dir.join(default_name)),
            (None, None) => None,
        };
        Self { path }
    }

    pub fn write(&self, content: &str) -> std::io::Result<()> {
        match &self.path {
            Some(p) => {
                if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(parent)?;
                }
                std::fs::write(p, content)?;
                eprintln!("wrote {}", p.display());
                Ok(())
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(content.as_bytes())?;
                stdout.flush()
            }
        }
    }
}
