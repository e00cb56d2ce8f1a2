//! PageRank and CheiRank by power iteration, plus rank-index bookkeeping.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::google::{Direction, GoogleOperator};
use crate::graph::DirectedGraph;
use crate::selection::NodeSelection;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 1000;

/// A stationary probability vector with its descending-order index.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    probabilities: Vec<f64>,
    /// `order[k]` is the node holding rank `k + 1`.
    order: Vec<u32>,
    /// `rank[v]` is the 1-based rank index of `v`.
    rank: Vec<u32>,
    pub residual: f64,
    pub iterations: usize,
}

impl RankVector {
    /// Orders `probabilities` descending, ties to the smaller node id.
    pub fn from_probabilities(probabilities: Vec<f64>, residual: f64, iterations: usize) -> Self {
        let order = descending_order(&probabilities);
        let mut rank = vec![0u32; probabilities.len()];
        for (k, &v) in order.iter().enumerate() {
            rank[v as usize] = k as u32 + 1;
        }
        RankVector {
            probabilities,
            order,
            rank,
            residual,
            iterations,
        }
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, node: usize) -> f64 {
        self.probabilities[node]
    }

    /// Nodes from rank 1 downward.
    pub fn order(&self) -> &[u32] {
        &self.order
    }

    /// 1-based rank index `K` of `node`.
    pub fn rank_of(&self, node: usize) -> usize {
        self.rank[node] as usize
    }
}

pub(crate) fn descending_order(p: &[f64]) -> Vec<u32> {
    let mut order: Vec<u32> = (0..p.len() as u32).collect();
    order.sort_by(|&a, &b| by_descending(p, a as usize, b as usize));
    order
}

fn by_descending(p: &[f64], a: usize, b: usize) -> Ordering {
    p[b].total_cmp(&p[a]).then(a.cmp(&b))
}

pub(crate) fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Power iteration `P ← G P` from the uniform vector until the L1 change
/// drops below `tol`.
pub fn pagerank(op: &GoogleOperator<'_>, tol: f64, max_iter: usize) -> Result<RankVector> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Parameter(format!("tolerance {tol} must be positive")));
    }
    if max_iter == 0 {
        return Err(Error::Parameter("max_iter must be at least 1".into()));
    }
    let n = op.node_count();
    let mut p = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iter in 1..=max_iter {
        op.apply_into(&p, &mut next)?;
        let sum: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= sum);
        residual = l1_distance(&next, &p);
        std::mem::swap(&mut p, &mut next);
        if residual < tol {
            return Ok(RankVector::from_probabilities(p, residual, iter));
        }
    }
    Err(Error::NotConverged {
        what: "pagerank",
        iterations: max_iter,
        residual,
    })
}

/// PageRank of the network with every link reversed.
pub fn cheirank(graph: &DirectedGraph, alpha: f64, tol: f64, max_iter: usize) -> Result<RankVector> {
    let op = GoogleOperator::with_direction(graph, alpha, Direction::Inverted)?;
    pagerank(&op, tol, max_iter)
}

/// Rank among `members` only: members sorted by descending probability get
/// `K_local = 1, 2, ...`. Returns `(node, K_local)` in rank order.
pub fn local_rank(rank: &RankVector, members: &[usize]) -> Result<Vec<(usize, usize)>> {
    if let Some(&bad) = members.iter().find(|&&m| m >= rank.len()) {
        return Err(Error::Dimension {
            expected: rank.len(),
            actual: bad + 1,
        });
    }
    let mut sorted = members.to_vec();
    sorted.sort_by(|&a, &b| by_descending(rank.probabilities(), a, b));
    sorted.dedup();
    Ok(sorted.into_iter().enumerate().map(|(k, v)| (v, k + 1)).collect())
}

/// A category member with its local and externally supplied ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankJoinRow {
    /// Position in the selection.
    pub position: usize,
    pub node: usize,
    pub group: i64,
    pub k_local: usize,
    pub k_external: Option<u64>,
}

/// Local ranks of the selection members of `category`, in `K_local` order.
pub fn rank_join(rank: &RankVector, selection: &NodeSelection, category: &str) -> Result<Vec<RankJoinRow>> {
    let positions = selection.positions_in(category);
    let members: Vec<usize> = positions.iter().map(|&p| selection.get(p).node).collect();
    local_rank(rank, &members)?
        .into_iter()
        .map(|(node, k_local)| {
            let position = selection
                .position_of(node)
                .ok_or_else(|| Error::Selection(format!("node {node} left the selection")))?;
            let e = selection.get(position);
            Ok(RankJoinRow {
                position,
                node,
                group: e.group,
                k_local,
                k_external: e.external_rank,
            })
        })
        .collect()
}
