//! Artifact schemas and writers.

use std::path::{Path, PathBuf};

use locuslab::locus::Residuals;
use locuslab::{Complex64, EigenLocus};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexOut {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexOut {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// One element of `locus_m*.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub coords: Vec<ComplexOut>,
    pub multiplicity: usize,
    pub residuals: Residuals,
}

/// Points of `locus`, ordered by their coordinates (real part first).
pub fn point_records(locus: &EigenLocus) -> Vec<PointRecord> {
    let mut out: Vec<PointRecord> = locus
        .points
        .iter()
        .map(|p| PointRecord {
            coords: p.coords.iter().map(|&z| z.into()).collect(),
            multiplicity: p.multiplicity,
            residuals: p.residuals.clone(),
        })
        .collect();
    out.sort_by(|a, b| {
        let key = |p: &PointRecord| p.coords.iter().flat_map(|z| [z.re, z.im]).collect::<Vec<f64>>();
        key(a)
            .iter()
            .zip(&key(b))
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}

/// 17 significant digits, which round-trips every `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn coord_header(n: usize) -> String {
    (0..=n).map(|j| format!("x{j}_re,x{j}_im")).collect::<Vec<_>>().join(",")
}

pub fn coord_fields(coords: &[ComplexOut]) -> String {
    coords.iter().map(|z| format!("{},{}", num(z.re), num(z.im))).collect::<Vec<_>>().join(",")
}

/// Writes files into one directory and remembers what it wrote.
pub struct Sink {
    dir: PathBuf,
    pub written: Vec<PathBuf>,
}

impl Sink {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("artifact types serialize");
        text.push('\n');
        self.write(name, &text)
    }
}
