//! The Google matrix as an implicit linear operator.
//!
//! `G = α S + (1 - α)/N · 1 1ᵀ`, where column `j` of `S` is `A_{·j}/k_out(j)`
//! for a node with out-links and the uniform vector `1/N` for a dangling node.
//! Only the link structure is stored; the dangling and teleport terms are
//! applied as scalar broadcasts.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// Standard damping factor.
pub const DEFAULT_ALPHA: f64 = 0.85;

/// Rows per rayon task in the in-link sweep.
pub(crate) const ROW_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `G`, built on the links as given.
    Forward,
    /// `G*`, built on the links with their direction reversed.
    Inverted,
}

#[derive(Debug, Clone)]
pub struct GoogleOperator<'g> {
    graph: &'g DirectedGraph,
    alpha: f64,
    direction: Direction,
    /// `α / k_out(j)`, zero for dangling nodes.
    link_weight: Vec<f64>,
    dangling: Vec<u32>,
}

impl<'g> GoogleOperator<'g> {
    pub fn new(graph: &'g DirectedGraph, alpha: f64) -> Result<Self> {
        Self::with_direction(graph, alpha, Direction::Forward)
    }

    pub fn with_direction(graph: &'g DirectedGraph, alpha: f64, direction: Direction) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Parameter(format!("damping factor {alpha} is outside (0, 1)")));
        }
        if graph.node_count() == 0 {
            return Err(Error::Parameter("graph has no nodes".into()));
        }
        let n = graph.node_count();
        let mut link_weight = vec![0.0; n];
        let mut dangling = Vec::new();
        for (j, w) in link_weight.iter_mut().enumerate() {
            let k = match direction {
                Direction::Forward => graph.out_degree(j),
                Direction::Inverted => graph.in_degree(j),
            };
            if k == 0 {
                dangling.push(j as u32);
            } else {
                *w = alpha / k as f64;
            }
        }
        Ok(GoogleOperator {
            graph,
            alpha,
            direction,
            link_weight,
            dangling,
        })
    }

    pub fn graph(&self) -> &'g DirectedGraph {
        self.graph
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// Nodes `i` with `S_ij > 0` from links, i.e. targets of `j`.
    #[inline]
    pub fn out_links(&self, j: usize) -> &'g [u32] {
        match self.direction {
            Direction::Forward => self.graph.successors(j),
            Direction::Inverted => self.graph.predecessors(j),
        }
    }

    /// Nodes `j` linking into `i`.
    #[inline]
    pub fn in_links(&self, i: usize) -> &'g [u32] {
        match self.direction {
            Direction::Forward => self.graph.predecessors(i),
            Direction::Inverted => self.graph.successors(i),
        }
    }

    /// `α / k_out(j)`, or zero when `j` is dangling.
    #[inline]
    pub fn link_weight(&self, j: usize) -> f64 {
        self.link_weight[j]
    }

    #[inline]
    pub fn is_dangling(&self, j: usize) -> bool {
        self.link_weight[j] == 0.0
    }

    pub fn dangling(&self) -> &[u32] {
        &self.dangling
    }

    /// Value shared by every row of column `j` beyond its links: `1/N` for a
    /// dangling column, `(1 - α)/N` otherwise.
    #[inline]
    pub fn floor(&self, j: usize) -> f64 {
        let n = self.node_count() as f64;
        if self.is_dangling(j) {
            1.0 / n
        } else {
            (1.0 - self.alpha) / n
        }
    }

    /// A single matrix element `G_ij`.
    pub fn element(&self, i: usize, j: usize) -> f64 {
        let linked = !self.is_dangling(j) && self.out_links(j).binary_search(&(i as u32)).is_ok();
        if linked {
            self.link_weight[j] + self.floor(j)
        } else {
            self.floor(j)
        }
    }

    /// Broadcast term for `v`: `(α Σ_dangling v_j + (1 - α) Σ v_j) / N`.
    fn broadcast(&self, v: &[f64]) -> f64 {
        let dangling: f64 = self.dangling.iter().map(|&j| v[j as usize]).sum();
        let total: f64 = v.iter().sum();
        (self.alpha * dangling + (1.0 - self.alpha) * total) / self.node_count() as f64
    }

    /// `y = G v`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.node_count()];
        self.apply_into(v, &mut y)?;
        Ok(y)
    }

    /// `y = G v` without allocating. Each row is summed over its in-links in
    /// ascending order, so the result does not depend on the thread count.
    pub fn apply_into(&self, v: &[f64], y: &mut [f64]) -> Result<()> {
        let n = self.node_count();
        if v.len() != n {
            return Err(Error::Dimension {
                expected: n,
                actual: v.len(),
            });
        }
        if y.len() != n {
            return Err(Error::Dimension {
                expected: n,
                actual: y.len(),
            });
        }
        let c = self.broadcast(v);
        y.par_iter_mut()
            .with_min_len(ROW_CHUNK)
            .enumerate()
            .for_each(|(i, yi)| {
                let mut acc = 0.0;
                for &j in self.in_links(i) {
                    acc += v[j as usize] * self.link_weight[j as usize];
                }
                *yi = acc + c;
            });
        Ok(())
    }
}
