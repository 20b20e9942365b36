//! Line-based `key = value` run configuration.
//!
//! ```text
//! # Chebyshev, n = 1
//! k = 1
//! h = 2
//! n = 1
//! c[-1] = 1
//! c[2] = 1+0i
//! m = 4, 8
//! tol.cluster = 1e-7
//! grid = -4, 4, -4, 4, 201, 201
//! ```
//!
//! Unspecified coefficients are zero. `#` starts a comment.

use std::collections::HashMap;
use std::path::Path;

use locuslab::asymptotics::{Metric, Sampler};
use locuslab::band_symbol::{ScanGrid, Slice};
use locuslab::config::Elimination;
use locuslab::{BandSymbol, Complex64, Config};

use crate::error::CliError;

/// Everything a command needs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub symbol: BandSymbol,
    pub cfg: Config,
    pub ms: Vec<usize>,
    pub grid: Option<ScanGrid>,
    pub slice: Option<Slice>,
    pub d: Option<usize>,
    pub samples: usize,
    pub sampler: Option<SamplerSpec>,
    pub metric: Metric,
}

/// Reference sampler as written in the config. `Locus(m)` uses the full
/// locus at a larger `m` as the reference cloud.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplerSpec {
    ChebyshevTorus(usize),
    RootPairs(usize),
    ConjugateSlice(usize),
    Locus(usize),
}

impl SamplerSpec {
    /// The library sampler, or `None` for `Locus`.
    pub fn resolve(self, n: usize, seed: u64) -> Option<Sampler> {
        match self {
            Self::ChebyshevTorus(per_axis) => Some(Sampler::ChebyshevTorus { n, per_axis }),
            Self::RootPairs(angles) => Some(Sampler::RootPairs { angles }),
            Self::ConjugateSlice(draws) => Some(Sampler::ConjugateSlice { draws, seed }),
            Self::Locus(_) => None,
        }
    }
}

pub fn parse_config_file(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("line {line_no}: expected `key = value`")))?;
        let key = canonical_key(key.trim(), line_no)?;
        if let Some(first) = seen.insert(key.clone(), line_no) {
            return Err(CliError::Input(format!(
                "line {line_no}: duplicate key `{key}` (first set on line {first})"
            )));
        }
        entries.push((line_no, key, value.trim().to_string()));
    }

    let get = |key: &str| entries.iter().find(|e| e.1 == key);
    let k = required_usize(get("k"), "k")?;
    let h = required_usize(get("h"), "h")?;
    let n = required_usize(get("n"), "n")?;

    let mut cfg = Config::default();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); k + h + 1];
    let mut ms = Vec::new();
    let mut grid = None;
    let mut slice = None;
    let mut d = None;
    let mut samples = locuslab::cheb_family::CURVE_SAMPLES;
    let mut sampler = None;
    let mut metric = Metric::Full;

    for (line, key, value) in &entries {
        let line = *line;
        if let Some(j) = key.strip_prefix("c[").and_then(|s| s.strip_suffix(']')) {
            let j: i64 = j.parse().expect("canonical index");
            if j < -(k as i64) || j > h as i64 {
                return Err(CliError::Input(format!("line {line}: c[{j}] lies outside the band -{k}..{h}")));
            }
            coeffs[(j + k as i64) as usize] = parse_complex(value).map_err(|e| at(line, e))?;
            continue;
        }
        if let Some(name) = key.strip_prefix("tol.") {
            let v = parse_f64(value).map_err(|e| at(line, e))?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(at(line, format!("tolerance `{key}` must be positive")));
            }
            match name {
                "cluster" => cfg.cluster = v,
                "group" => cfg.group = v,
                "c_membership" => cfg.c_membership = v,
                "disc" => cfg.disc = v,
                "rank" => cfg.rank = v,
                "eval" => cfg.eval = v,
                "window_residual" => cfg.window_residual = v,
                "root" => cfg.root_tol = v,
                "widom_separation" => cfg.widom_separation = v,
                _ => return Err(at(line, format!("unknown tolerance `{key}`"))),
            }
            continue;
        }
        match key.as_str() {
            "k" | "h" | "n" => {}
            "m" => ms = parse_list(value).map_err(|e| at(line, e))?,
            "seed" => cfg.seed = parse_usize(value).map_err(|e| at(line, e))? as u64,
            "max_m" => cfg.max_m = parse_usize(value).map_err(|e| at(line, e))?,
            "symbolic_max" => cfg.symbolic_max = parse_usize(value).map_err(|e| at(line, e))?,
            "resultant_max_m" => cfg.resultant_max_m = parse_usize(value).map_err(|e| at(line, e))?,
            "root_max_iter" => cfg.root_max_iter = parse_usize(value).map_err(|e| at(line, e))?,
            "newton_max_iter" => cfg.newton_max_iter = parse_usize(value).map_err(|e| at(line, e))?,
            "elimination" => {
                cfg.elimination = match value.as_str() {
                    "auto" => Elimination::Auto,
                    "resultant" => Elimination::Resultant,
                    "operator-determinant" => Elimination::OperatorDeterminant,
                    other => return Err(at(line, format!("unknown elimination `{other}`"))),
                }
            }
            "grid" => grid = Some(parse_grid(value).map_err(|e| at(line, e))?),
            "slice" => slice = Some(parse_slice(value).map_err(|e| at(line, e))?),
            "d" => d = Some(parse_usize(value).map_err(|e| at(line, e))?),
            "samples" => samples = parse_usize(value).map_err(|e| at(line, e))?,
            "sampler" => sampler = Some(parse_sampler(value).map_err(|e| at(line, e))?),
            "metric" => {
                metric = match value.as_str() {
                    "full" => Metric::Full,
                    "x0" => Metric::X0Plane,
                    other => return Err(at(line, format!("unknown metric `{other}`"))),
                }
            }
            _ => return Err(at(line, format!("unknown key `{key}`"))),
        }
    }

    for (j, name) in [(-(k as i64), "c_{-k}"), (h as i64, "c_h")] {
        let key = format!("c[{j}]");
        match get(&key) {
            None => return Err(CliError::Input(format!("missing `{key}` ({name} must be nonzero)"))),
            Some((line, ..)) if coeffs[(j + k as i64) as usize].norm() == 0.0 => {
                return Err(CliError::Input(format!("line {line}: `{key}` is zero ({name} must be nonzero)")))
            }
            _ => {}
        }
    }
    let symbol = BandSymbol::new(k, h, n, coeffs).map_err(|e| CliError::Input(e.to_string()))?;
    if ms.is_empty() {
        ms.push(4);
    }
    Ok(RunConfig {
        symbol,
        cfg,
        ms,
        grid,
        slice,
        d,
        samples,
        sampler,
        metric,
    })
}

fn at(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("line {line}: {msg}"))
}

/// `c[ 02 ]` and `c[2]` are the same key.
fn canonical_key(key: &str, line: usize) -> Result<String, CliError> {
    if let Some(inner) = key.strip_prefix("c[").and_then(|s| s.strip_suffix(']')) {
        let j: i64 = inner
            .trim()
            .parse()
            .map_err(|_| at(line, format!("bad coefficient index in `{key}`")))?;
        return Ok(format!("c[{j}]"));
    }
    if key.is_empty() {
        return Err(at(line, "empty key"));
    }
    Ok(key.to_string())
}

fn required_usize(entry: Option<&(usize, String, String)>, key: &str) -> Result<usize, CliError> {
    let (line, _, value) = entry.ok_or_else(|| CliError::Input(format!("missing `{key}`")))?;
    parse_usize(value).map_err(|e| at(*line, e))
}

fn parse_usize(s: &str) -> Result<usize, String> {
    s.parse().map_err(|_| format!("expected a non-negative integer, got `{s}`"))
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse().map_err(|_| format!("expected a number, got `{s}`"))
}

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    let v: Vec<usize> = s.split(',').map(|p| parse_usize(p.trim())).collect::<Result<_, _>>()?;
    if v.contains(&0) {
        return Err("m values must be at least 1".into());
    }
    Ok(v)
}

/// `a`, `a+bi`, `a-bi`, with `a`, `b` any float literals (`1e-3+2.5i`).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("malformed complex literal `{s}`");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the sign of an exponent or the leading sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im_text = &body[split..];
    let im: f64 = match im_text {
        "+" => 1.0,
        "-" => -1.0,
        _ => im_text.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_grid(s: &str) -> Result<ScanGrid, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err("grid needs `re_min, re_max, im_min, im_max, nx, ny`".into());
    }
    let f: Vec<f64> = parts[..4].iter().map(|p| parse_f64(p)).collect::<Result<_, _>>()?;
    let (nx, ny) = (parse_usize(parts[4])?, parse_usize(parts[5])?);
    if f[0] >= f[1] || f[2] >= f[3] || nx < 2 || ny < 2 {
        return Err("grid rectangle is empty or has fewer than 2 samples per side".into());
    }
    Ok(ScanGrid {
        re_min: f[0],
        re_max: f[1],
        im_min: f[2],
        im_max: f[3],
        nx,
        ny,
    })
}

fn parse_slice(s: &str) -> Result<Slice, String> {
    match s {
        "none" => Ok(Slice::None),
        "conjugate" => Ok(Slice::Conjugate),
        _ => match s.strip_prefix("fixed") {
            Some(v) => Ok(Slice::Fixed(parse_complex(v.trim())?)),
            None => Err(format!("unknown slice `{s}` (none, conjugate, fixed <x_1>)")),
        },
    }
}

fn parse_sampler(s: &str) -> Result<SamplerSpec, String> {
    let mut it = s.split_whitespace();
    let kind = it.next().unwrap_or("");
    let arg = it.next().map(parse_usize).transpose()?;
    if it.next().is_some() {
        return Err(format!("trailing input in sampler `{s}`"));
    }
    let need = |what: &str| arg.ok_or_else(|| format!("sampler `{kind}` needs {what}"));
    Ok(match kind {
        "chebyshev-torus" => SamplerSpec::ChebyshevTorus(need("an angle count")?),
        "root-pairs" => SamplerSpec::RootPairs(need("an angle count")?),
        "conjugate-slice" => SamplerSpec::ConjugateSlice(need("a draw count")?),
        "locus" => SamplerSpec::Locus(need("a matrix size")?),
        _ => return Err(format!("unknown sampler `{kind}`")),
    })
}
