use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{c_residual, is_multihermitian, BandSymbol};
use crate::config::Config;
use crate::error::{Error, Result};

/// Rectangle `[re_min, re_max] × [im_min, im_max]` of the `x_0`-plane sampled
/// at `nx × ny` points (corners included).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl ScanGrid {
    pub fn square(half_width: f64, resolution: usize) -> Self {
        Self {
            re_min: -half_width,
            re_max: half_width,
            im_min: -half_width,
            im_max: half_width,
            nx: resolution,
            ny: resolution,
        }
    }

    pub fn point(&self, col: usize, row: usize) -> Complex64 {
        let fx = if self.nx > 1 { col as f64 / (self.nx - 1) as f64 } else { 0.5 };
        let fy = if self.ny > 1 { row as f64 / (self.ny - 1) as f64 } else { 0.5 };
        Complex64::new(
            self.re_min + fx * (self.re_max - self.re_min),
            self.im_min + fy * (self.im_max - self.im_min),
        )
    }
}

/// How `x_1` is tied to the scanned `x_0` when `n = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Slice {
    /// `n = 0`: nothing to tie.
    None,
    /// `x_1 = conj(x_0)`; requires a multihermitian symbol.
    Conjugate,
    /// `x_1` held fixed.
    Fixed(Complex64),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanResult {
    pub grid: ScanGrid,
    /// `residuals[row][col]`; `+∞` where the root finder failed.
    pub residuals: Vec<Vec<f64>>,
    pub inside: usize,
    pub failures: usize,
    /// Level set `c_residual = tol_C`, as polylines in the `x_0`-plane.
    pub boundary: Vec<Vec<(f64, f64)>>,
    pub cauchy_bound: f64,
    /// The scanned rectangle contains the Cauchy box.
    pub rect_covers_box: bool,
    /// Every in-region sample lies in the Cauchy box, and when the rectangle
    /// covers the box no in-region sample touches the rectangle's edge.
    pub compact_ok: bool,
}

pub(crate) fn slice_point(sym: &BandSymbol, x0: Complex64, slice: Slice) -> Vec<Complex64> {
    match (sym.n(), slice) {
        (0, _) => vec![x0],
        (_, Slice::Conjugate) => vec![x0, x0.conj()],
        (_, Slice::Fixed(x1)) => vec![x0, x1],
        (_, Slice::None) => vec![x0, Complex64::new(0.0, 0.0)],
    }
}

/// Sample `c_residual` over a grid of `x_0` values. Rows are evaluated in
/// parallel and collected in order, so the output is deterministic.
pub fn c_region_scan(sym: &BandSymbol, grid: ScanGrid, slice: Slice, cfg: &Config) -> Result<ScanResult> {
    match (sym.n(), slice) {
        (0, Slice::None) => {}
        (0, _) => return Err(Error::Invalid("n = 0 symbols take no slice".into())),
        (1, Slice::None) => return Err(Error::Invalid("n = 1 scans need a slice for x_1".into())),
        (1, Slice::Conjugate) if !is_multihermitian(sym) => {
            return Err(Error::Invalid("the conjugate slice needs a multihermitian symbol".into()))
        }
        (1, _) => {}
        (n, _) => {
            return Err(Error::UnsupportedDimension {
                n,
                operation: "c_region_scan",
            })
        }
    }
    if grid.nx < 2 || grid.ny < 2 {
        return Err(Error::Invalid("scan grid needs at least 2 × 2 samples".into()));
    }
    let residuals: Vec<Vec<f64>> = (0..grid.ny)
        .into_par_iter()
        .map(|row| {
            (0..grid.nx)
                .map(|col| {
                    let x = slice_point(sym, grid.point(col, row), slice);
                    c_residual(sym, &x, cfg).unwrap_or(f64::INFINITY)
                })
                .collect()
        })
        .collect();
    let tol = cfg.c_membership;
    let bound = sym.cauchy_bound();
    let mut inside = 0;
    let mut failures = 0;
    let mut in_box = true;
    let mut on_edge = false;
    for (row, line) in residuals.iter().enumerate() {
        for (col, &v) in line.iter().enumerate() {
            if v.is_infinite() {
                failures += 1;
            }
            if v <= tol {
                inside += 1;
                let x = slice_point(sym, grid.point(col, row), slice);
                if x.iter().any(|z| z.norm() > bound) {
                    in_box = false;
                }
                if row == 0 || col == 0 || row + 1 == grid.ny || col + 1 == grid.nx {
                    on_edge = true;
                }
            }
        }
    }
    if inside == 0 {
        return Err(Error::EmptyRegion);
    }
    let rect_covers_box =
        grid.re_min <= -bound && grid.re_max >= bound && grid.im_min <= -bound && grid.im_max >= bound;
    let boundary = marching_squares(&grid, &residuals, tol);
    Ok(ScanResult {
        grid,
        residuals,
        inside,
        failures,
        boundary,
        cauchy_bound: bound,
        rect_covers_box,
        compact_ok: in_box && !(rect_covers_box && on_edge),
    })
}

/// Edge of the sample lattice: horizontal from `(row, col)` to
/// `(row, col + 1)`, or vertical from `(row, col)` to `(row + 1, col)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

fn marching_squares(grid: &ScanGrid, field: &[Vec<f64>], level: f64) -> Vec<Vec<(f64, f64)>> {
    let f = |row: usize, col: usize| {
        let v = field[row][col];
        if v.is_finite() {
            v - level
        } else {
            1.0
        }
    };
    let crossing = |e: Edge| -> (f64, f64) {
        let (a, b, pa, pb) = match e {
            Edge::H(r, c) => (f(r, c), f(r, c + 1), grid.point(c, r), grid.point(c + 1, r)),
            Edge::V(r, c) => (f(r, c), f(r + 1, c), grid.point(c, r), grid.point(c, r + 1)),
        };
        let t = if a == b { 0.5 } else { (a / (a - b)).clamp(0.0, 1.0) };
        let p = pa + (pb - pa) * t;
        (p.re, p.im)
    };
    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for r in 0..grid.ny - 1 {
        for c in 0..grid.nx - 1 {
            // corners counter-clockwise from bottom-left
            let v = [f(r, c), f(r, c + 1), f(r + 1, c + 1), f(r + 1, c)];
            let e = [Edge::H(r, c), Edge::V(r, c + 1), Edge::H(r + 1, c), Edge::V(r, c)];
            let case = v
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &x)| if x <= 0.0 { acc | (1 << i) } else { acc });
            // edge i joins corner i and corner i + 1
            let cut: Vec<usize> = (0..4)
                .filter(|&i| ((case >> i) & 1) != ((case >> ((i + 1) % 4)) & 1))
                .collect();
            match cut.len() {
                2 => segments.push((e[cut[0]], e[cut[1]])),
                4 => {
                    let centre = v.iter().sum::<f64>() / 4.0;
                    let inside_centre = centre <= 0.0;
                    let corner0_inside = case & 1 == 1;
                    if inside_centre == corner0_inside {
                        segments.push((e[0], e[1]));
                        segments.push((e[2], e[3]));
                    } else {
                        segments.push((e[3], e[0]));
                        segments.push((e[1], e[2]));
                    }
                }
                _ => {}
            }
        }
    }
    let mut adjacency: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (i, (a, b)) in segments.iter().enumerate() {
        adjacency.entry(*a).or_default().push(i);
        adjacency.entry(*b).or_default().push(i);
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let mut chain = vec![a, b];
        // extend forward from b, then backward from a
        for dir in 0..2 {
            loop {
                let end = if dir == 0 { *chain.last().unwrap() } else { chain[0] };
                let next = adjacency[&end].iter().copied().find(|&s| !used[s]);
                let Some(s) = next else { break };
                used[s] = true;
                let (p, q) = segments[s];
                let other = if p == end { q } else { p };
                if dir == 0 {
                    chain.push(other);
                } else {
                    chain.insert(0, other);
                }
            }
        }
        lines.push(chain.into_iter().map(crossing).collect());
    }
    lines
}
