//! PageRank sensitivity of selected nodes to single links of a reduced matrix.
//!
//! The link `b → c` (element `G(c, b)`) is scaled by `1 + δ`, column `b` is
//! renormalized to unit sum, and the stationary vector is recomputed. The
//! sensitivity is the logarithmic derivative `D = d ln P(c) / dδ`, estimated
//! by finite differences.

use std::fmt;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::dense::{dense_pagerank, dense_pagerank_from};
use crate::error::{Error, Result};

pub const DEFAULT_DELTA: f64 = 1e-3;
pub const MAX_DELTA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Method {
    #[serde(rename = "one-sided")]
    OneSided,
    #[default]
    #[serde(rename = "central")]
    Central,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::OneSided => "one-sided",
            Method::Central => "central",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "one-sided" | "onesided" | "forward" => Some(Method::OneSided),
            "central" => Some(Method::Central),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SensitivityOptions {
    pub delta: f64,
    pub method: Method,
    /// L1 tolerance of every stationary-vector computation.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SensitivityOptions {
    fn default() -> Self {
        SensitivityOptions {
            delta: DEFAULT_DELTA,
            method: Method::Central,
            tol: 1e-14,
            max_iter: 100_000,
        }
    }
}

/// Outcome attached to each computed sensitivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CellFlag {
    #[serde(rename = "ok")]
    Ok,
    /// The perturbed element is exactly zero; `D` is reported as 0.
    #[serde(rename = "zero-element")]
    ZeroElement,
    /// Source and target coincide; no diagonal sensitivity exists.
    #[serde(rename = "self")]
    SelfPair,
    /// A stationary vector failed to converge; `D` is NaN.
    #[serde(rename = "not-converged")]
    NotConverged,
}

impl CellFlag {
    pub fn name(self) -> &'static str {
        match self {
            CellFlag::Ok => "ok",
            CellFlag::ZeroElement => "zero-element",
            CellFlag::SelfPair => "self",
            CellFlag::NotConverged => "not-converged",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub d: f64,
    pub flag: CellFlag,
}

/// Copy of `m` with `m(c, b)` scaled by `1 + delta` and column `b`
/// renormalized. A zero `delta` returns the matrix unchanged.
pub fn perturb(m: &DMatrix<f64>, b: usize, c: usize, delta: f64) -> DMatrix<f64> {
    let mut out = m.clone();
    if delta == 0.0 {
        return out;
    }
    out[(c, b)] *= 1.0 + delta;
    let sum: f64 = out.column(b).iter().sum();
    out.column_mut(b).iter_mut().for_each(|v| *v /= sum);
    out
}

/// Sensitivity analysis over one matrix, holding its unperturbed stationary
/// vector. Every perturbed computation starts from that vector.
#[derive(Debug, Clone)]
pub struct Sensitivity<'m> {
    matrix: &'m DMatrix<f64>,
    base: Vec<f64>,
    opts: SensitivityOptions,
}

impl<'m> Sensitivity<'m> {
    pub fn new(matrix: &'m DMatrix<f64>, opts: SensitivityOptions) -> Result<Self> {
        if !(opts.delta > 0.0 && opts.delta <= MAX_DELTA) {
            return Err(Error::Parameter(format!(
                "delta {} is outside (0, {MAX_DELTA}]",
                opts.delta
            )));
        }
        let base = dense_pagerank(matrix, opts.tol, opts.max_iter)?;
        Ok(Sensitivity { matrix, base, opts })
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn options(&self) -> &SensitivityOptions {
        &self.opts
    }

    /// Stationary vector after scaling `b → c` by `1 + delta`.
    pub fn perturbed_pagerank(&self, b: usize, c: usize, delta: f64) -> Result<Vec<f64>> {
        if delta == 0.0 {
            return Ok(self.base.clone());
        }
        let m = perturb(self.matrix, b, c, delta);
        dense_pagerank_from(&m, self.base.clone(), self.opts.tol, self.opts.max_iter)
    }

    fn check_pair(&self, b: usize, c: usize) -> Result<()> {
        let n = self.matrix.nrows();
        if b >= n || c >= n {
            return Err(Error::Dimension {
                expected: n,
                actual: b.max(c) + 1,
            });
        }
        if b == c {
            return Err(Error::Parameter("source and target must differ".into()));
        }
        Ok(())
    }

    /// `D(b → c, c)`.
    pub fn diagonal(&self, b: usize, c: usize) -> Result<Cell> {
        self.observed(b, c, c)
    }

    /// `D(b → c, a) = d ln P(a) / dδ`. Non-diagonal sensitivities are
    /// experimental.
    pub fn observed(&self, b: usize, c: usize, a: usize) -> Result<Cell> {
        self.check_pair(b, c)?;
        if a >= self.matrix.nrows() {
            return Err(Error::Dimension {
                expected: self.matrix.nrows(),
                actual: a + 1,
            });
        }
        if self.matrix[(c, b)] == 0.0 {
            return Ok(Cell {
                d: 0.0,
                flag: CellFlag::ZeroElement,
            });
        }
        let delta = self.opts.delta;
        let d = match self.opts.method {
            Method::OneSided => {
                let p = self.perturbed_pagerank(b, c, delta)?;
                (p[a].ln() - self.base[a].ln()) / delta
            }
            Method::Central => {
                let plus = self.perturbed_pagerank(b, c, delta)?;
                let minus = self.perturbed_pagerank(b, c, -delta)?;
                (plus[a].ln() - minus[a].ln()) / (2.0 * delta)
            }
        };
        Ok(Cell { d, flag: CellFlag::Ok })
    }
}

/// One row of a sensitivity sweep; `source` and `target` are matrix indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub source: usize,
    pub target: usize,
    pub d: f64,
    pub flag: CellFlag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityTable {
    pub rows: Vec<SensitivityRow>,
    pub delta: f64,
    pub method: Method,
}

/// Per-source extrema over rows flagged `ok`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub source: usize,
    pub d_min: f64,
    pub d_max: f64,
}

impl SensitivityTable {
    pub fn extrema(&self) -> Vec<Extrema> {
        let mut out: Vec<Extrema> = Vec::new();
        for row in &self.rows {
            if out.last().map(|e| e.source) != Some(row.source) {
                out.push(Extrema {
                    source: row.source,
                    d_min: f64::INFINITY,
                    d_max: f64::NEG_INFINITY,
                });
            }
            if row.flag == CellFlag::Ok {
                let e = out.last_mut().expect("pushed above");
                e.d_min = e.d_min.min(row.d);
                e.d_max = e.d_max.max(row.d);
            }
        }
        out
    }
}

/// Diagonal sensitivity for every `sources × targets` pair. Rows are grouped
/// by source (in the given order) and sorted by descending `D` within a
/// source, ties by target index. Failing cells are flagged, not fatal.
pub fn sensitivity_matrix(
    matrix: &DMatrix<f64>,
    sources: &[usize],
    targets: &[usize],
    opts: SensitivityOptions,
) -> Result<SensitivityTable> {
    let n = matrix.nrows();
    if let Some(&bad) = sources.iter().chain(targets).find(|&&v| v >= n) {
        return Err(Error::Dimension {
            expected: n,
            actual: bad + 1,
        });
    }
    let sens = Sensitivity::new(matrix, opts)?;
    let pairs: Vec<(usize, usize)> = sources
        .iter()
        .flat_map(|&b| targets.iter().map(move |&c| (b, c)))
        .collect();
    let cells: Vec<SensitivityRow> = pairs
        .par_iter()
        .map(|&(b, c)| {
            let cell = if b == c {
                Ok(Cell {
                    d: f64::NAN,
                    flag: CellFlag::SelfPair,
                })
            } else {
                sens.diagonal(b, c)
            };
            let cell = cell.unwrap_or(Cell {
                d: f64::NAN,
                flag: CellFlag::NotConverged,
            });
            SensitivityRow {
                source: b,
                target: c,
                d: cell.d,
                flag: cell.flag,
            }
        })
        .collect();

    let mut rows = Vec::with_capacity(cells.len());
    for chunk in cells.chunks(targets.len().max(1)) {
        let mut chunk = chunk.to_vec();
        chunk.sort_by(|x, y| y.d.total_cmp(&x.d).then(x.target.cmp(&y.target)));
        rows.extend(chunk);
    }
    Ok(SensitivityTable {
        rows,
        delta: opts.delta,
        method: opts.method,
    })
}
