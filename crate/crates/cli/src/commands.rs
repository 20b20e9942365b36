use std::fmt::Write;
use std::path::Path;

use clap::ValueEnum;
use locuslab::asymptotics::{conjecture_report, measure_of, Sampler};
use locuslab::band_symbol::{c_region_scan, c_residual, is_multihermitian, ScanGrid, Slice};
use locuslab::cheb_family::{cheb_lattice_candidates, cusp_count, sample_curve, star_boundary};
use locuslab::locus::{rank_filter, solve_n0, solve_n1, Residuals};
use locuslab::minor_basis::{build_basis, triangularity_report, MatrixSource};
use locuslab::svg::Figure;
use locuslab::{BandSymbol, Complex64, Config, EigenLocus, LocusKind, LocusPoint};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{RunConfig, SamplerSpec};
use crate::error::CliError;
use crate::output::{coord_fields, coord_header, num, point_records, ComplexOut, Sink};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Full eigenvalue locus per m: JSON, CSV and an x_0-plane SVG.
    Locus,
    /// Residual grid of the limit-set membership test and its boundary.
    Cregion,
    /// Symbolic maximal minors and the triangularity report.
    Basis,
    /// Convergence and symmetry report over the m list.
    Verify,
    /// Boundary curve of the x_0 slice for the star symbol of order d.
    Hypocycloid,
    /// Atoms of the root-counting measure per m.
    Measure,
}

/// A problem found while computing; any of these makes the exit status 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectEntry {
    pub m: Option<usize>,
    pub stage: String,
    pub defect: Value,
}

impl DefectEntry {
    fn new(m: Option<usize>, stage: &str, defect: Value) -> Self {
        Self {
            m,
            stage: stage.to_string(),
            defect,
        }
    }

    fn error(m: Option<usize>, stage: &str, e: &dyn std::fmt::Display) -> Self {
        Self::new(m, stage, json!({ "type": "error", "message": e.to_string() }))
    }
}

pub struct Outcome {
    pub defects: Vec<DefectEntry>,
    pub written: Vec<std::path::PathBuf>,
}

/// Run `command` and write its artifacts plus `defects.json` into `out`.
pub fn run(command: Command, rc: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    let mut sink = Sink::new(out)?;
    let mut defects = Vec::new();
    match command {
        Command::Locus => locus(rc, &mut sink, &mut defects)?,
        Command::Cregion => cregion(rc, &mut sink, &mut defects)?,
        Command::Basis => basis(rc, &mut sink, &mut defects)?,
        Command::Verify => verify(rc, &mut sink, &mut defects)?,
        Command::Hypocycloid => hypocycloid(rc, &mut sink)?,
        Command::Measure => measure(rc, &mut sink, &mut defects)?,
    }
    sink.json("defects.json", &defects)?;
    Ok(Outcome {
        defects,
        written: sink.written,
    })
}

/// `E^(m)` for `n = 0, 1`, and from the torus lattice for Chebyshev
/// symbols of any `n ≤ 4`. Defects of both stages are returned.
pub fn full_locus(sym: &BandSymbol, m: usize, cfg: &Config) -> Result<(EigenLocus, Vec<DefectEntry>), CliError> {
    let mut defects = Vec::new();
    let locus = match sym.n() {
        0 => solve_n0(sym, m, cfg)?,
        1 => {
            let tilde = solve_n1(sym, m, cfg)?;
            for d in &tilde.defects {
                defects.push(DefectEntry::new(Some(m), "tilde", serde_json::to_value(d).expect("defect")));
            }
            rank_filter(sym, m, &tilde, cfg)?
        }
        n if *sym == BandSymbol::chebyshev(n) => {
            let report = cheb_lattice_candidates(n, m, cfg)?;
            let points = report
                .lattice()?
                .points
                .iter()
                .map(|p| LocusPoint {
                    coords: p.clone(),
                    multiplicity: 1,
                    residuals: Residuals::default(),
                })
                .collect();
            let mut l = EigenLocus::new(m, n, LocusKind::Full, points, "torus lattice");
            l.check_count();
            l
        }
        n => {
            return Err(CliError::Library(locuslab::Error::UnsupportedDimension {
                n,
                operation: "locus (only Chebyshev symbols beyond n = 1)",
            }))
        }
    };
    for d in &locus.defects {
        defects.push(DefectEntry::new(Some(m), "full", serde_json::to_value(d).expect("defect")));
    }
    Ok((locus, defects))
}

/// Solve every `m` in parallel; results come back in the order of `rc.ms`.
/// A failed solve becomes a defect and the other sizes still run, unless
/// the failure is an input error.
fn solve_all(rc: &RunConfig, defects: &mut Vec<DefectEntry>) -> Result<Vec<(usize, EigenLocus)>, CliError> {
    let results: Vec<_> = rc.ms.par_iter().map(|&m| (m, full_locus(&rc.symbol, m, &rc.cfg))).collect();
    let mut out = Vec::new();
    for (m, r) in results {
        match r {
            Ok((locus, found)) => {
                defects.extend(found);
                out.push((m, locus));
            }
            Err(e) if e.exit_code() == 2 => return Err(e),
            Err(e) => defects.push(DefectEntry::error(Some(m), "solve", &e)),
        }
    }
    Ok(out)
}

fn x0_figure(points: &[Complex64], title: &str) -> Figure {
    Figure::new(600).title(title).scatter(points, 4.0, "#c0392b")
}

fn locus(rc: &RunConfig, sink: &mut Sink, defects: &mut Vec<DefectEntry>) -> Result<(), CliError> {
    let n = rc.symbol.n();
    for (m, locus) in solve_all(rc, defects)? {
        let records = point_records(&locus);
        sink.json(&format!("locus_m{m}.json"), &records)?;
        let mut csv = format!("{},multiplicity,c_residual\n", coord_header(n));
        for r in &records {
            let x: Vec<Complex64> = r.coords.iter().map(|z| Complex64::new(z.re, z.im)).collect();
            let res = c_residual(&rc.symbol, &x, &rc.cfg).map(num).unwrap_or_else(|_| "nan".into());
            let _ = writeln!(csv, "{},{},{res}", coord_fields(&r.coords), r.multiplicity);
        }
        sink.write(&format!("locus_m{m}.csv"), &csv)?;
        let x0: Vec<Complex64> = locus.points.iter().map(|p| p.coords[0]).collect();
        let svg = x0_figure(&x0, &format!("eigenvalue locus, m={m}, x_0 plane")).render();
        sink.write(&format!("locus_m{m}.svg"), &svg)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct RegionSummary {
    grid: ScanGrid,
    slice: Slice,
    inside: usize,
    failures: usize,
    cauchy_bound: f64,
    rect_covers_box: bool,
    compact_ok: bool,
    boundary_polylines: usize,
}

fn default_slice(sym: &BandSymbol) -> Result<Slice, CliError> {
    match sym.n() {
        0 => Ok(Slice::None),
        1 if is_multihermitian(sym) => Ok(Slice::Conjugate),
        1 => Err(CliError::Input(
            "`slice` is required for n = 1 symbols that are not multihermitian".into(),
        )),
        n => Err(CliError::Input(format!("cregion scans n ≤ 1 only (n = {n})"))),
    }
}

fn cregion(rc: &RunConfig, sink: &mut Sink, defects: &mut Vec<DefectEntry>) -> Result<(), CliError> {
    let slice = match rc.slice {
        Some(s) => s,
        None => default_slice(&rc.symbol)?,
    };
    let grid = rc
        .grid
        .unwrap_or_else(|| ScanGrid::square(1.1 * rc.symbol.cauchy_bound(), 201));
    let scan = c_region_scan(&rc.symbol, grid, slice, &rc.cfg)?;
    let mut csv = String::from("re,im,residual\n");
    for (row, values) in scan.residuals.iter().enumerate() {
        for (col, r) in values.iter().enumerate() {
            let z = grid.point(col, row);
            let _ = writeln!(csv, "{},{},{}", num(z.re), num(z.im), num(*r));
        }
    }
    sink.write("cregion.csv", &csv)?;
    let mut fig = Figure::new(600).title("limit-set region boundary, x_0 plane");
    for line in &scan.boundary {
        let pts: Vec<Complex64> = line.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        fig = fig.polyline(&pts, false, "#1f4e8c");
    }
    sink.write("cregion.svg", &fig.render())?;
    sink.json(
        "cregion.json",
        &RegionSummary {
            grid,
            slice,
            inside: scan.inside,
            failures: scan.failures,
            cauchy_bound: scan.cauchy_bound,
            rect_covers_box: scan.rect_covers_box,
            compact_ok: scan.compact_ok,
            boundary_polylines: scan.boundary.len(),
        },
    )?;
    if scan.failures > 0 {
        defects.push(DefectEntry::new(None, "cregion", json!({ "type": "root_failures", "count": scan.failures })));
    }
    if !scan.compact_ok {
        defects.push(DefectEntry::new(None, "cregion", json!({ "type": "not_compact" })));
    }
    Ok(())
}

fn basis(rc: &RunConfig, sink: &mut Sink, defects: &mut Vec<DefectEntry>) -> Result<(), CliError> {
    let src = MatrixSource::Toeplitz(rc.symbol.clone());
    for &m in &rc.ms {
        let basis = build_basis(&src, m, &rc.cfg)?;
        let mut text = String::new();
        for (set, p) in &basis.entries {
            let _ = writeln!(text, "P{:?} = {p}", set.indices());
        }
        sink.write(&format!("basis_m{m}.txt"), &text)?;
        let report = triangularity_report(&basis);
        let matrix: Vec<Vec<ComplexOut>> = report
            .matrix
            .iter()
            .map(|row| row.iter().map(|&z| z.into()).collect())
            .collect();
        sink.json(
            &format!("triangularity_m{m}.json"),
            &json!({
                "m": m,
                "n": basis.n,
                "rows": report.rows.iter().map(|s| s.indices().to_vec()).collect::<Vec<_>>(),
                "monomials": report.monomials,
                "matrix": matrix,
                "unit_diagonal": report.unit_diagonal,
                "lower_triangular": report.lower_triangular,
                "diagonal_matches_leading_monomial": report.diagonal_matches_leading_monomial,
                "pass": report.pass,
            }),
        )?;
        if !report.pass {
            defects.push(DefectEntry::new(Some(m), "basis", json!({ "type": "not_triangular" })));
        }
    }
    Ok(())
}

fn default_sampler(rc: &RunConfig) -> SamplerSpec {
    let sym = &rc.symbol;
    if *sym == BandSymbol::chebyshev(sym.n()) {
        SamplerSpec::ChebyshevTorus(64)
    } else if sym.n() == 0 {
        SamplerSpec::RootPairs(512)
    } else if is_multihermitian(sym) {
        SamplerSpec::ConjugateSlice(20_000)
    } else {
        SamplerSpec::Locus(2 * rc.ms.iter().max().copied().unwrap_or(4))
    }
}

fn verify(rc: &RunConfig, sink: &mut Sink, defects: &mut Vec<DefectEntry>) -> Result<(), CliError> {
    let spec = rc.sampler.unwrap_or_else(|| default_sampler(rc));
    let sampler = match spec.resolve(rc.symbol.n(), rc.cfg.seed) {
        Some(s) => s,
        None => {
            let SamplerSpec::Locus(big) = spec else { unreachable!() };
            let (fine, _) = full_locus(&rc.symbol, big, &rc.cfg)?;
            Sampler::Cloud { points: fine.coords() }
        }
    };
    let report = conjecture_report(&rc.symbol, &rc.ms, &sampler, rc.metric, &rc.cfg)?;
    sink.json("report.json", &report)?;
    for f in &report.failures {
        defects.push(DefectEntry::error(Some(f.m), "verify", &f.error));
    }
    for r in report.records.iter().filter(|r| r.defects > 0 || r.total_multiplicity != r.expected) {
        defects.push(DefectEntry::new(
            Some(r.m),
            "verify",
            json!({ "type": "locus_defects", "count": r.defects, "total_multiplicity": r.total_multiplicity, "expected": r.expected }),
        ));
    }
    Ok(())
}

fn star_order(rc: &RunConfig) -> Result<usize, CliError> {
    if let Some(d) = rc.d {
        if d == 0 {
            return Err(CliError::Input("d must be at least 1".into()));
        }
        return Ok(d);
    }
    let k = rc.symbol.k();
    if rc.symbol == BandSymbol::star(k) {
        Ok(k)
    } else {
        Err(CliError::Input("`d` is required unless the symbol is a star symbol".into()))
    }
}

fn hypocycloid(rc: &RunConfig, sink: &mut Sink) -> Result<(), CliError> {
    let d = star_order(rc)?;
    if rc.samples < 8 {
        return Err(CliError::Input("samples must be at least 8".into()));
    }
    let curve = sample_curve(|t| star_boundary(d, t), rc.samples);
    let mut csv = String::from("theta,re,im\n");
    for (i, z) in curve.iter().enumerate() {
        let theta = std::f64::consts::TAU * i as f64 / rc.samples as f64;
        let _ = writeln!(csv, "{},{},{}", num(theta), num(z.re), num(z.im));
    }
    sink.write(&format!("hypocycloid_d{d}.csv"), &csv)?;
    let title = format!("star boundary d={d}, {} cusps", cusp_count(&curve));
    let svg = Figure::new(600).title(&title).polyline(&curve, true, "#1f4e8c").render();
    sink.write(&format!("hypocycloid_d{d}.svg"), &svg)?;
    Ok(())
}

fn measure(rc: &RunConfig, sink: &mut Sink, defects: &mut Vec<DefectEntry>) -> Result<(), CliError> {
    let n = rc.symbol.n();
    for (m, locus) in solve_all(rc, defects)? {
        let mu = match measure_of(&locus) {
            Ok(mu) => mu,
            Err(e) => {
                defects.push(DefectEntry::error(Some(m), "measure", &e));
                continue;
            }
        };
        let mut atoms = mu.atoms.clone();
        atoms.sort_by(|a, b| {
            let key = |p: &LocusPoint| p.coords.iter().flat_map(|z| [z.re, z.im]).collect::<Vec<f64>>();
            key(&a.0).partial_cmp(&key(&b.0)).unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut csv = format!("{},multiplicity,mass\n", coord_header(n));
        for (p, mass) in &atoms {
            let coords: Vec<ComplexOut> = p.coords.iter().map(|&z| z.into()).collect();
            let _ = writeln!(csv, "{},{},{}", coord_fields(&coords), p.multiplicity, num(*mass));
        }
        sink.write(&format!("measure_m{m}.csv"), &csv)?;
    }
    Ok(())
}
