//! Dense reference computations for small graphs.
//!
//! These build `G` element by element from the adjacency and invert the
//! scattering block with a dense LU solve. They share no code path with the
//! implicit operator or the series summation and exist to validate them.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::selection::NodeSelection;

/// Largest graph the dense routines accept.
pub const DENSE_GUARD: usize = 2000;

fn guard(graph: &DirectedGraph) -> Result<()> {
    if graph.node_count() > DENSE_GUARD {
        return Err(Error::TooLarge {
            n: graph.node_count(),
            max: DENSE_GUARD,
        });
    }
    Ok(())
}

/// `G_ij = α S_ij + (1 - α)/N` with `S_ij = A_ij / k_out(j)`, or `1/N` when
/// `j` is dangling.
pub fn dense_google(graph: &DirectedGraph, alpha: f64) -> Result<DMatrix<f64>> {
    guard(graph)?;
    let n = graph.node_count();
    let nf = n as f64;
    let mut g = DMatrix::zeros(n, n);
    for j in 0..n {
        let k_out = (0..n).filter(|&i| graph.has_edge(j, i)).count();
        for i in 0..n {
            let s = if k_out == 0 {
                1.0 / nf
            } else if graph.has_edge(j, i) {
                1.0 / k_out as f64
            } else {
                0.0
            };
            g[(i, j)] = alpha * s + (1.0 - alpha) / nf;
        }
    }
    Ok(g)
}

/// The four blocks `(rr, rs, sr, ss)` of a dense matrix for a selection. The
/// complement is taken in ascending node order.
pub fn partition(g: &DMatrix<f64>, selected: &[usize]) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let n = g.nrows();
    let mut is_selected = vec![false; n];
    for &r in selected {
        is_selected[r] = true;
    }
    let comp: Vec<usize> = (0..n).filter(|&v| !is_selected[v]).collect();
    let block = |rows: &[usize], cols: &[usize]| DMatrix::from_fn(rows.len(), cols.len(), |i, j| g[(rows[i], cols[j])]);
    (
        block(selected, selected),
        block(selected, &comp),
        block(&comp, selected),
        block(&comp, &comp),
    )
}

/// `G_rr + G_rs (1 - G_ss)^{-1} G_sr` by dense LU. A selection covering every
/// node returns `G` itself in selection order.
pub fn reduce_oracle(graph: &DirectedGraph, alpha: f64, selection: &NodeSelection) -> Result<DMatrix<f64>> {
    let g = dense_google(graph, alpha)?;
    let selected = selection.nodes();
    let (rr, rs, sr, ss) = partition(&g, &selected);
    if ss.nrows() == 0 {
        return Ok(rr);
    }
    let ns = ss.nrows();
    let lhs = DMatrix::identity(ns, ns) - ss;
    let x = lhs
        .lu()
        .solve(&sr)
        .ok_or_else(|| Error::Parameter("1 - G_ss is singular".into()))?;
    Ok(rr + rs * x)
}
