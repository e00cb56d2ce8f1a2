//! CSV writers and readers for the pipeline artifacts.
//!
//! Floats are written in Rust's shortest round-trip form, so every value
//! parses back to the identical `f64`.

use std::io::{Read, Write};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::rank::{RankJoinRow, RankVector};
use crate::reduced::Weights;
use crate::selection::NodeSelection;
use crate::sensitivity::SensitivityTable;

/// Round-trip representation of `x`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Dense matrix with a header row and a first column of labels.
pub fn write_matrix_csv<W: Write>(w: W, m: &DMatrix<f64>, labels: &[String]) -> Result<()> {
    if labels.len() != m.nrows() || m.nrows() != m.ncols() {
        return Err(Error::Dimension {
            expected: m.nrows(),
            actual: labels.len(),
        });
    }
    write_block_csv(w, m, labels, labels)
}

/// Rectangular block with row and column labels.
pub fn write_block_csv<W: Write>(w: W, m: &DMatrix<f64>, row_labels: &[String], col_labels: &[String]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec![String::new()];
    header.extend(col_labels.iter().cloned());
    out.write_record(&header)?;
    for (i, label) in row_labels.iter().enumerate() {
        let mut rec = Vec::with_capacity(m.ncols() + 1);
        rec.push(label.clone());
        rec.extend((0..m.ncols()).map(|j| fmt_f64(m[(i, j)])));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// Inverse of [`write_matrix_csv`].
pub fn read_matrix_csv<R: Read>(r: R) -> Result<(Vec<String>, DMatrix<f64>)> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let labels: Vec<String> = rdr.headers()?.iter().skip(1).map(str::to_owned).collect();
    let n = labels.len();
    let mut m = DMatrix::zeros(n, n);
    let mut rows = 0;
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if i >= n || rec.len() != n + 1 {
            return Err(Error::Parse {
                line,
                message: format!("expected a {n}x{n} matrix"),
            });
        }
        if rec[0] != labels[i] {
            return Err(Error::Parse {
                line,
                message: format!("row label {:?} does not match column label {:?}", &rec[0], labels[i]),
            });
        }
        for j in 0..n {
            m[(i, j)] = rec[j + 1].trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad number {:?}", &rec[j + 1]),
            })?;
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::Parse {
            line: rows + 1,
            message: format!("expected {n} rows, found {rows}"),
        });
    }
    Ok((labels, m))
}

pub fn write_weights<W: Write>(w: W, weights: &Weights) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["component", "W"])?;
    for (c, v) in weights.rows() {
        out.write_record([c.name().to_string(), fmt_f64(v)])?;
    }
    out.flush()?;
    Ok(())
}

/// One row per `(row category, column category)` sub-block.
pub fn write_sector_weights<W: Write>(w: W, sectors: &[(String, String, Weights)]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["rows", "cols", "GR", "Grr", "Gpr", "Gqr", "Gqrnd"])?;
    for (r, c, wt) in sectors {
        let mut rec = vec![r.clone(), c.clone()];
        rec.extend(wt.rows().iter().map(|&(_, v)| fmt_f64(v)));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// PageRank and CheiRank of every node.
pub fn write_ranks<W: Write>(w: W, graph: &DirectedGraph, p: &RankVector, pstar: &RankVector) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["node", "label", "P", "K", "Pstar", "Kstar"])?;
    for v in 0..graph.node_count() {
        out.write_record([
            v.to_string(),
            graph.label(v).into_owned(),
            fmt_f64(p.probability(v)),
            p.rank_of(v).to_string(),
            fmt_f64(pstar.probability(v)),
            pstar.rank_of(v).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Local ranks of every category, categories in selection order.
pub fn write_rankjoin<W: Write>(w: W, selection: &NodeSelection, joins: &[(String, Vec<RankJoinRow>)]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["node", "label", "category", "group", "K_local", "K_external"])?;
    for (category, rows) in joins {
        for r in rows {
            out.write_record([
                r.node.to_string(),
                selection.get(r.position).label.clone(),
                category.clone(),
                r.group.to_string(),
                r.k_local.to_string(),
                opt(r.k_external),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Coordinates of the two rank planes: `(K_b, K_a)` and `(K_b, K*_b)`.
pub fn write_rankplane<W: Write>(
    w: W,
    selection: &NodeSelection,
    by_pagerank: &[RankJoinRow],
    by_cheirank: &[RankJoinRow],
) -> Result<()> {
    let mut kstar = vec![None; selection.len()];
    for r in by_cheirank {
        kstar[r.position] = Some(r.k_local);
    }
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["label", "group", "K_b", "K_a", "Kstar_b"])?;
    for r in by_pagerank {
        out.write_record([
            selection.get(r.position).label.clone(),
            r.group.to_string(),
            r.k_local.to_string(),
            opt(r.k_external),
            opt(kstar[r.position]),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_sensitivity<W: Write>(w: W, selection: &NodeSelection, table: &SensitivityTable) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["source_label", "target_label", "alpha2", "D", "delta", "method", "flag"])?;
    for r in &table.rows {
        let target = selection.get(r.target);
        out.write_record([
            selection.get(r.source).label.clone(),
            target.label.clone(),
            target.code.clone().unwrap_or_default(),
            fmt_f64(r.d),
            fmt_f64(table.delta),
            table.method.name().to_string(),
            r.flag.name().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_sensitivity_extrema<W: Write>(w: W, selection: &NodeSelection, table: &SensitivityTable) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["source_label", "D_min", "D_max"])?;
    for e in table.extrema() {
        out.write_record([
            selection.get(e.source).label.clone(),
            fmt_f64(e.d_min),
            fmt_f64(e.d_max),
        ])?;
    }
    out.flush()?;
    Ok(())
}
