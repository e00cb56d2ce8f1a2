//! Reduced Google matrix of a node selection.
//!
//! For a selection `r` and its complement `s`, the reduced matrix is
//!
//! ```text
//! G_R = G_rr + G_rs (1 - G_ss)^{-1} G_sr = G_rr + G_pr + G_qr
//! ```
//!
//! with the projector `P_c = ψ_R ψ_Lᵀ` onto the leading eigenvector of the
//! scattering block `G_ss` (eigenvalue `λ_c`) and `Q_c = 1 - P_c`:
//!
//! ```text
//! G_pr = G_rs P_c G_sr / (1 - λ_c)
//! G_qr = G_rs (Σ_l Ḡ_ss^l) Q_c G_sr,    Ḡ_ss = Q_c G_ss Q_c
//! ```
//!
//! None of the complement blocks is ever stored densely. They are the link
//! structure masked to the complement plus the dangling and teleport
//! broadcasts, as in [`GoogleOperator`]. The series is summed column by column
//! in batches; within a column every reduction runs in a fixed order, so the
//! result is independent of the batch size and of the thread count.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::google::{GoogleOperator, ROW_CHUNK};
use crate::graph::DirectedGraph;
use crate::rank::{l1_distance, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::selection::NodeSelection;

pub const DEFAULT_SERIES_TOL: f64 = 1e-13;
pub const DEFAULT_BATCH_SIZE: usize = 16;
/// Consecutive non-decreasing increments tolerated before the series is
/// declared divergent.
pub const STAGNATION_WINDOW: usize = 100;

#[derive(Debug, Clone, Copy)]
pub struct ReduceOptions {
    /// L1 tolerance of the two eigenvector iterations.
    pub eig_tol: f64,
    pub max_iter: usize,
    /// Per-column L1 increment below which the series stops.
    pub series_tol: f64,
    pub batch_size: usize,
    /// Hard cap on series terms per column.
    pub max_terms: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            eig_tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            series_tol: DEFAULT_SERIES_TOL,
            batch_size: DEFAULT_BATCH_SIZE,
            max_terms: 100_000,
        }
    }
}

/// Leading eigenpair of the scattering block.
#[derive(Debug, Clone)]
pub struct ScatteringEigs {
    pub lambda_c: f64,
    /// Right eigenvector, `Σ ψ_R = 1`.
    pub psi_r: Vec<f64>,
    /// Left eigenvector, `ψ_L · ψ_R = 1`.
    pub psi_l: Vec<f64>,
    pub iterations: (usize, usize),
}

/// Compressed rows of compact column indices.
#[derive(Debug, Default)]
struct CompactCsr {
    offsets: Vec<usize>,
    cols: Vec<u32>,
}

impl CompactCsr {
    fn build(rows: usize, mut row: impl FnMut(usize, &mut Vec<u32>)) -> Self {
        let mut offsets = Vec::with_capacity(rows + 1);
        let mut cols = Vec::new();
        offsets.push(0);
        for r in 0..rows {
            row(r, &mut cols);
            offsets.push(cols.len());
        }
        CompactCsr { offsets, cols }
    }

    #[inline]
    fn row(&self, r: usize) -> &[u32] {
        &self.cols[self.offsets[r]..self.offsets[r + 1]]
    }
}

const NOT_IN_COMPLEMENT: u32 = u32::MAX;

/// The selection/complement partition of an operator with the masked link
/// structure needed by `G_ss`, `G_ssᵀ`, `G_rs` and `G_sr`.
struct Blocks<'a, 'g> {
    op: &'a GoogleOperator<'g>,
    selected: Vec<usize>,
    /// Compact complement index to graph node.
    comp: Vec<u32>,
    /// Graph node to compact complement index.
    comp_index: Vec<u32>,
    /// `α / k_out` per complement column.
    weight: Vec<f64>,
    /// Column floor per complement column: `1/N` if dangling, `(1-α)/N` else.
    floor: Vec<f64>,
    comp_dangling: Vec<u32>,
    ss_in: CompactCsr,
    ss_out: CompactCsr,
    rs_in: CompactCsr,
}

impl<'a, 'g> Blocks<'a, 'g> {
    fn new(op: &'a GoogleOperator<'g>, selected: Vec<usize>) -> Self {
        let n = op.node_count();
        let mut comp_index = vec![0u32; n];
        for &r in &selected {
            comp_index[r] = NOT_IN_COMPLEMENT;
        }
        let mut comp = Vec::with_capacity(n - selected.len());
        for (v, slot) in comp_index.iter_mut().enumerate() {
            if *slot != NOT_IN_COMPLEMENT {
                *slot = comp.len() as u32;
                comp.push(v as u32);
            }
        }
        let weight = comp.iter().map(|&v| op.link_weight(v as usize)).collect();
        let floor = comp.iter().map(|&v| op.floor(v as usize)).collect();
        let comp_dangling = comp
            .iter()
            .enumerate()
            .filter(|(_, &v)| op.is_dangling(v as usize))
            .map(|(j, _)| j as u32)
            .collect();
        let masked = |links: &[u32], out: &mut Vec<u32>| {
            out.extend(
                links
                    .iter()
                    .map(|&u| comp_index[u as usize])
                    .filter(|&c| c != NOT_IN_COMPLEMENT),
            );
        };
        let ss_in = CompactCsr::build(comp.len(), |i, out| masked(op.in_links(comp[i] as usize), out));
        let ss_out = CompactCsr::build(comp.len(), |j, out| masked(op.out_links(comp[j] as usize), out));
        let rs_in = CompactCsr::build(selected.len(), |r, out| masked(op.in_links(selected[r]), out));
        Blocks {
            op,
            selected,
            comp,
            comp_index,
            weight,
            floor,
            comp_dangling,
            ss_in,
            ss_out,
            rs_in,
        }
    }

    fn ns(&self) -> usize {
        self.comp.len()
    }

    fn nr(&self) -> usize {
        self.selected.len()
    }

    /// Broadcast coefficient per column of a row-major `ns × b` block:
    /// `(α Σ_dangling x + (1 - α) Σ x) / N`.
    fn broadcast(&self, x: &[f64], b: usize) -> Vec<f64> {
        let totals = column_reduce(x, b, |_, v| v);
        self.broadcast_with_totals(x, &totals, b)
    }

    fn broadcast_with_totals(&self, x: &[f64], totals: &[f64], b: usize) -> Vec<f64> {
        let alpha = self.op.alpha();
        let n = self.op.node_count() as f64;
        (0..b)
            .map(|k| {
                let dangling: f64 = self.comp_dangling.iter().map(|&j| x[j as usize * b + k]).sum();
                (alpha * dangling + (1.0 - alpha) * totals[k]) / n
            })
            .collect()
    }

    /// `y = M x` for a row-major block `x` (`ns × b`), where `M` is the link
    /// part given by `rows` plus the broadcast `c`.
    fn sweep(&self, rows: &CompactCsr, x: &[f64], c: &[f64], y: &mut [f64], b: usize) {
        y.par_chunks_mut(b)
            .with_min_len(ROW_CHUNK / b.max(1) + 1)
            .enumerate()
            .for_each(|(i, yi)| {
                yi.iter_mut().for_each(|v| *v = 0.0);
                for &j in rows.row(i) {
                    let j = j as usize;
                    let w = self.weight[j];
                    let xj = &x[j * b..(j + 1) * b];
                    for (acc, &v) in yi.iter_mut().zip(xj) {
                        *acc += v * w;
                    }
                }
                for (acc, &ck) in yi.iter_mut().zip(c) {
                    *acc += ck;
                }
            });
    }

    /// `y = G_ss x`.
    fn apply_ss(&self, x: &[f64], y: &mut [f64], b: usize) {
        let c = self.broadcast(x, b);
        self.sweep(&self.ss_in, x, &c, y, b);
    }

    /// `y = G_ss x` with the broadcast of `x` already known.
    fn apply_ss_with(&self, x: &[f64], c: &[f64], y: &mut [f64], b: usize) {
        self.sweep(&self.ss_in, x, c, y, b);
    }

    fn apply_rs(&self, x: &[f64], c: &[f64], b: usize) -> Vec<f64> {
        let mut y = vec![0.0; self.nr() * b];
        self.sweep(&self.rs_in, x, c, &mut y, b);
        y
    }

    /// `y = G_ssᵀ x` for a single vector.
    fn apply_ss_transpose(&self, x: &[f64], y: &mut [f64]) {
        let total = column_reduce(x, 1, |_, v| v)[0];
        y.par_iter_mut()
            .with_min_len(ROW_CHUNK)
            .enumerate()
            .for_each(|(j, yj)| {
                let mut acc = 0.0;
                for &i in self.ss_out.row(j) {
                    acc += x[i as usize];
                }
                *yj = acc * self.weight[j] + self.floor[j] * total;
            });
    }

    /// Column `G_sr(·, r)` of selected node at position `r`, as a dense
    /// complement vector.
    fn sr_column(&self, r: usize, out: &mut [f64], b: usize, k: usize) {
        let node = self.selected[r];
        let floor = self.op.floor(node);
        for i in 0..self.ns() {
            out[i * b + k] = floor;
        }
        let w = self.op.link_weight(node);
        for &t in self.op.out_links(node) {
            let c = self.comp_index[t as usize];
            if c != NOT_IN_COMPLEMENT {
                out[c as usize * b + k] += w;
            }
        }
    }

    /// Dense `G_rr`.
    fn rr(&self) -> DMatrix<f64> {
        let nr = self.nr();
        DMatrix::from_fn(nr, nr, |i, k| self.op.element(self.selected[i], self.selected[k]))
    }
}

/// Per-column reduction of a row-major `rows × b` block, `Σ_i f(i, x[i, k])`.
/// Rows are summed in fixed chunks combined in order, so the value does not
/// depend on `b` or on the thread count.
fn column_reduce(x: &[f64], b: usize, f: impl Fn(usize, f64) -> f64 + Sync) -> Vec<f64> {
    let partials: Vec<Vec<f64>> = x
        .par_chunks(ROW_CHUNK * b)
        .enumerate()
        .map(|(chunk, block)| {
            let base = chunk * ROW_CHUNK;
            let mut acc = vec![0.0; b];
            for (i, row) in block.chunks(b).enumerate() {
                for (a, &v) in acc.iter_mut().zip(row) {
                    *a += f(base + i, v);
                }
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; b];
    for p in partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total
}

/// Per-column sums and L1 norms in one pass, with the chunking of
/// [`column_reduce`].
fn column_totals_and_norms(x: &[f64], b: usize) -> (Vec<f64>, Vec<f64>) {
    let partials: Vec<(Vec<f64>, Vec<f64>)> = x
        .par_chunks(ROW_CHUNK * b)
        .map(|block| {
            let mut sum = vec![0.0; b];
            let mut norm = vec![0.0; b];
            for row in block.chunks_exact(b) {
                for k in 0..b {
                    sum[k] += row[k];
                    norm[k] += row[k].abs();
                }
            }
            (sum, norm)
        })
        .collect();
    let mut totals = vec![0.0; b];
    let mut norms = vec![0.0; b];
    for (s, n) in partials {
        for k in 0..b {
            totals[k] += s[k];
            norms[k] += n[k];
        }
    }
    (totals, norms)
}

fn validate_selection(op: &GoogleOperator<'_>, selection: &NodeSelection) -> Result<()> {
    if selection.is_empty() {
        return Err(Error::DegenerateSelection("selection is empty".into()));
    }
    if let Some(bad) = selection.entries().iter().find(|e| e.node >= op.node_count()) {
        return Err(Error::Selection(format!(
            "node {} is outside the graph of {} nodes",
            bad.node,
            op.node_count()
        )));
    }
    Ok(())
}

fn eigs_of(blocks: &Blocks<'_, '_>, tol: f64, max_iter: usize) -> Result<ScatteringEigs> {
    let ns = blocks.ns();
    if ns == 0 {
        return Err(Error::DegenerateSelection(
            "the selection covers every node, so the scattering block is empty".into(),
        ));
    }
    if tol.is_nan() || tol <= 0.0 || max_iter == 0 {
        return Err(Error::Parameter(
            "eigen iteration needs tol > 0 and max_iter >= 1".into(),
        ));
    }

    let normalize = |v: &mut [f64]| {
        let s = column_reduce(v, 1, |_, x| x)[0];
        v.iter_mut().for_each(|x| *x /= s);
    };

    let mut x = vec![1.0 / ns as f64; ns];
    let mut y = vec![0.0; ns];
    let mut right_iters = 0;
    let mut residual = f64::INFINITY;
    while residual >= tol {
        if right_iters == max_iter {
            return Err(Error::NotConverged {
                what: "scattering right eigenvector",
                iterations: max_iter,
                residual,
            });
        }
        blocks.apply_ss(&x, &mut y, 1);
        normalize(&mut y);
        residual = l1_distance(&x, &y);
        std::mem::swap(&mut x, &mut y);
        right_iters += 1;
    }
    let psi_r = x;

    let mut x = vec![1.0 / ns as f64; ns];
    let mut left_iters = 0;
    residual = f64::INFINITY;
    while residual >= tol {
        if left_iters == max_iter {
            return Err(Error::NotConverged {
                what: "scattering left eigenvector",
                iterations: max_iter,
                residual,
            });
        }
        blocks.apply_ss_transpose(&x, &mut y);
        normalize(&mut y);
        residual = l1_distance(&x, &y);
        std::mem::swap(&mut x, &mut y);
        left_iters += 1;
    }
    let mut psi_l = x;
    let overlap = column_reduce(&psi_r, 1, |i, v| v * psi_l[i])[0];
    psi_l.iter_mut().for_each(|v| *v /= overlap);

    blocks.apply_ss(&psi_r, &mut y, 1);
    let lambda_c = column_reduce(&y, 1, |i, v| v * psi_l[i])[0];

    Ok(ScatteringEigs {
        lambda_c,
        psi_r,
        psi_l,
        iterations: (right_iters, left_iters),
    })
}

/// Leading eigenvalue and right/left eigenvectors of `G_ss` by power
/// iteration on the implicit block.
pub fn scattering_eigs(
    op: &GoogleOperator<'_>,
    selection: &NodeSelection,
    tol: f64,
    max_iter: usize,
) -> Result<ScatteringEigs> {
    validate_selection(op, selection)?;
    let blocks = Blocks::new(op, selection.nodes());
    eigs_of(&blocks, tol, max_iter)
}

/// `G_R` and its three components over a selection.
#[derive(Debug, Clone)]
pub struct ReducedMatrix {
    /// Graph nodes in row/column order.
    pub nodes: Vec<usize>,
    pub gr: DMatrix<f64>,
    pub grr: DMatrix<f64>,
    pub gpr: DMatrix<f64>,
    pub gqr: DMatrix<f64>,
    /// Zero when the selection covers the whole graph.
    pub lambda_c: f64,
    pub psi_r: Vec<f64>,
    pub psi_l: Vec<f64>,
}

/// Projects each column of a row-major `ns × b` block off `ψ_R`:
/// `x ← x - ψ_R (ψ_L · x)`.
fn project(x: &mut [f64], b: usize, eigs: &ScatteringEigs) {
    let dots = column_reduce(x, b, |i, v| eigs.psi_l[i] * v);
    x.par_chunks_mut(b)
        .with_min_len(ROW_CHUNK / b.max(1) + 1)
        .enumerate()
        .for_each(|(i, row)| {
            let pr = eigs.psi_r[i];
            for (v, d) in row.iter_mut().zip(&dots) {
                *v -= pr * d;
            }
        });
}

/// `G_pr` and `G_qr` columns for selection positions `cols`, returned
/// column-major (`nr` values per column).
fn batch_columns(
    blocks: &Blocks<'_, '_>,
    eigs: &ScatteringEigs,
    pr_direction: &[f64],
    cols: std::ops::Range<usize>,
    opts: &ReduceOptions,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (ns, nr, b) = (blocks.ns(), blocks.nr(), cols.len());
    let mut w = vec![0.0; ns * b];
    for (k, r) in cols.clone().enumerate() {
        blocks.sr_column(r, &mut w, b, k);
    }

    let coupling = column_reduce(&w, b, |i, v| eigs.psi_l[i] * v);
    let mut gpr = vec![0.0; nr * b];
    for k in 0..b {
        let coef = coupling[k] / (1.0 - eigs.lambda_c);
        for i in 0..nr {
            gpr[k * nr + i] = pr_direction[i] * coef;
        }
    }

    project(&mut w, b, eigs);
    let mut c = blocks.broadcast(&w, b);
    let first = blocks.apply_rs(&w, &c, b);
    let mut gqr = vec![0.0; nr * b];
    for k in 0..b {
        for i in 0..nr {
            gqr[k * nr + i] = first[i * b + k];
        }
    }

    let mut next = vec![0.0; ns * b];
    let mut active = vec![true; b];
    let mut best = vec![f64::INFINITY; b];
    let mut stalled = vec![0usize; b];
    let mut term = 0;
    while active.iter().any(|&a| a) {
        term += 1;
        if term > opts.max_terms {
            let worst = (0..b).filter(|&k| active[k]).map(|k| best[k]).fold(0.0, f64::max);
            return Err(Error::NotConverged {
                what: "scattering series",
                iterations: opts.max_terms,
                residual: worst,
            });
        }
        blocks.apply_ss_with(&w, &c, &mut next, b);
        // G_ss commutes with the projector; projecting again removes the
        // leading component reintroduced by rounding.
        project(&mut next, b, eigs);
        let (totals, increments) = column_totals_and_norms(&next, b);
        c = blocks.broadcast_with_totals(&next, &totals, b);
        let contribution = blocks.apply_rs(&next, &c, b);
        for k in 0..b {
            if !active[k] {
                continue;
            }
            for i in 0..nr {
                gqr[k * nr + i] += contribution[i * b + k];
            }
            let inc = increments[k];
            if inc < opts.series_tol {
                active[k] = false;
                continue;
            }
            if inc < best[k] {
                best[k] = inc;
                stalled[k] = 0;
            } else {
                stalled[k] += 1;
                if stalled[k] >= STAGNATION_WINDOW {
                    return Err(Error::Divergence {
                        column: cols.start + k,
                        term,
                        increment: inc,
                        lambda_c: eigs.lambda_c,
                    });
                }
            }
        }
        std::mem::swap(&mut w, &mut next);
    }
    Ok((gpr, gqr))
}

/// Computes `G_R = G_rr + G_pr + G_qr` for the selection.
///
/// A selection covering the whole graph yields `G_R = G` (in selection
/// order) with empty `G_pr` and `G_qr` contributions.
pub fn compute_reduced(
    op: &GoogleOperator<'_>,
    selection: &NodeSelection,
    opts: &ReduceOptions,
) -> Result<ReducedMatrix> {
    validate_selection(op, selection)?;
    if opts.batch_size == 0 {
        return Err(Error::Parameter("batch size must be at least 1".into()));
    }
    if opts.series_tol.is_nan() || opts.series_tol <= 0.0 {
        return Err(Error::Parameter("series tolerance must be positive".into()));
    }
    let blocks = Blocks::new(op, selection.nodes());
    let nr = blocks.nr();
    let grr = blocks.rr();
    if blocks.ns() == 0 {
        return Ok(ReducedMatrix {
            nodes: blocks.selected.clone(),
            gr: grr.clone(),
            grr,
            gpr: DMatrix::zeros(nr, nr),
            gqr: DMatrix::zeros(nr, nr),
            lambda_c: 0.0,
            psi_r: Vec::new(),
            psi_l: Vec::new(),
        });
    }

    let eigs = eigs_of(&blocks, opts.eig_tol, opts.max_iter)?;
    let c = blocks.broadcast(&eigs.psi_r, 1);
    let pr_direction = blocks.apply_rs(&eigs.psi_r, &c, 1);

    let batches: Vec<std::ops::Range<usize>> = (0..nr)
        .step_by(opts.batch_size)
        .map(|start| start..(start + opts.batch_size).min(nr))
        .collect();
    let results: Vec<(Vec<f64>, Vec<f64>)> = batches
        .par_iter()
        .map(|cols| batch_columns(&blocks, &eigs, &pr_direction, cols.clone(), opts))
        .collect::<Result<_>>()?;

    let mut gpr_data = Vec::with_capacity(nr * nr);
    let mut gqr_data = Vec::with_capacity(nr * nr);
    for (pr, qr) in results {
        gpr_data.extend(pr);
        gqr_data.extend(qr);
    }
    let gpr = DMatrix::from_vec(nr, nr, gpr_data);
    let gqr = DMatrix::from_vec(nr, nr, gqr_data);
    let gr = &grr + &gpr + &gqr;
    Ok(ReducedMatrix {
        nodes: blocks.selected.clone(),
        gr,
        grr,
        gpr,
        gqr,
        lambda_c: eigs.lambda_c,
        psi_r: eigs.psi_r,
        psi_l: eigs.psi_l,
    })
}

/// Convenience wrapper building the forward operator.
pub fn reduce(
    graph: &DirectedGraph,
    alpha: f64,
    selection: &NodeSelection,
    opts: &ReduceOptions,
) -> Result<ReducedMatrix> {
    let op = GoogleOperator::new(graph, alpha)?;
    compute_reduced(&op, selection, opts)
}

/// Matrices derivable from a [`ReducedMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Component {
    #[serde(rename = "GR")]
    Gr,
    #[serde(rename = "Grr")]
    Grr,
    #[serde(rename = "Gpr")]
    Gpr,
    #[serde(rename = "Gqr")]
    Gqr,
    #[serde(rename = "Gqrnd")]
    Gqrnd,
    #[serde(rename = "Grr+Gqr")]
    GrrPlusGqr,
}

impl Component {
    pub fn name(self) -> &'static str {
        match self {
            Component::Gr => "GR",
            Component::Grr => "Grr",
            Component::Gpr => "Gpr",
            Component::Gqr => "Gqr",
            Component::Gqrnd => "Gqrnd",
            Component::GrrPlusGqr => "Grr+Gqr",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Component::Gr,
            Component::Grr,
            Component::Gpr,
            Component::Gqr,
            Component::Gqrnd,
            Component::GrrPlusGqr,
        ]
        .into_iter()
        .find(|c| c.name().eq_ignore_ascii_case(s))
    }
}

impl std::fmt::Display for Component {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightMode {
    /// Sum signed elements.
    #[default]
    Signed,
    /// Sum absolute values.
    Absolute,
}

/// Component weights: element sum divided by `N_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Weights {
    pub gr: f64,
    pub grr: f64,
    pub gpr: f64,
    pub gqr: f64,
    pub gqrnd: f64,
}

impl Weights {
    pub fn rows(&self) -> [(Component, f64); 5] {
        [
            (Component::Gr, self.gr),
            (Component::Grr, self.grr),
            (Component::Gpr, self.gpr),
            (Component::Gqr, self.gqr),
            (Component::Gqrnd, self.gqrnd),
        ]
    }
}

impl ReducedMatrix {
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn gqrnd(&self) -> DMatrix<f64> {
        let mut m = self.gqr.clone();
        m.fill_diagonal(0.0);
        m
    }

    pub fn matrix(&self, component: Component) -> DMatrix<f64> {
        match component {
            Component::Gr => self.gr.clone(),
            Component::Grr => self.grr.clone(),
            Component::Gpr => self.gpr.clone(),
            Component::Gqr => self.gqr.clone(),
            Component::Gqrnd => self.gqrnd(),
            Component::GrrPlusGqr => &self.grr + &self.gqr,
        }
    }

    pub fn weights(&self, mode: WeightMode) -> Weights {
        let all: Vec<usize> = (0..self.size()).collect();
        self.sector_weights(&all, &all, mode)
    }

    /// Weights of the `rows × cols` sub-block (selection positions), still
    /// divided by the full `N_r`.
    pub fn sector_weights(&self, rows: &[usize], cols: &[usize], mode: WeightMode) -> Weights {
        let nr = self.size() as f64;
        let value = |x: f64| match mode {
            WeightMode::Signed => x,
            WeightMode::Absolute => x.abs(),
        };
        let sum = |m: &DMatrix<f64>, skip_diagonal: bool| -> f64 {
            let mut s = 0.0;
            for &j in cols {
                for &i in rows {
                    if skip_diagonal && i == j {
                        continue;
                    }
                    s += value(m[(i, j)]);
                }
            }
            s / nr
        };
        Weights {
            gr: sum(&self.gr, false),
            grr: sum(&self.grr, false),
            gpr: sum(&self.gpr, false),
            gqr: sum(&self.gqr, false),
            gqrnd: sum(&self.gqr, true),
        }
    }

    /// Sub-block of a component at the given selection positions.
    pub fn sector(&self, component: Component, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
        let m = self.matrix(component);
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
    }
}
