//! Cuthill–McKee relabeling and bandwidth measurement.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// A bijective relabeling of `0..N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    /// `order[new] = old`.
    order: Vec<u32>,
    /// `new_of_old[old] = new`.
    new_of_old: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        let order: Vec<u32> = (0..n as u32).collect();
        Permutation {
            new_of_old: order.clone(),
            order,
        }
    }

    /// Builds from the visiting order, `order[new] = old`.
    pub fn from_order(order: Vec<u32>) -> Result<Self> {
        let n = order.len();
        let mut new_of_old = vec![u32::MAX; n];
        for (new, &old) in order.iter().enumerate() {
            let slot = new_of_old
                .get_mut(old as usize)
                .ok_or_else(|| Error::Parameter(format!("permutation entry {old} out of range")))?;
            if *slot != u32::MAX {
                return Err(Error::Parameter(format!("node {old} appears twice in permutation")));
            }
            *slot = new as u32;
        }
        Ok(Permutation { order, new_of_old })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    #[inline]
    pub fn new_id(&self, old: usize) -> usize {
        self.new_of_old[old] as usize
    }

    #[inline]
    pub fn old_id(&self, new: usize) -> usize {
        self.order[new] as usize
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }
}

/// Symmetrized neighbor lists without self-loops, each sorted.
fn symmetric_neighbors(graph: &DirectedGraph, node: usize, buf: &mut Vec<u32>) {
    buf.clear();
    let (a, b) = (graph.successors(node), graph.predecessors(node));
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (_, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        if next as usize != node {
            buf.push(next);
        }
    }
}

/// Cuthill–McKee ordering of the symmetrized adjacency.
///
/// Each component is entered at its minimum-degree node, components are taken
/// in increasing order of that degree, and neighbors are queued by increasing
/// degree. All ties go to the smaller node id.
pub fn cuthill_mckee(graph: &DirectedGraph) -> Permutation {
    let n = graph.node_count();
    let mut buf = Vec::new();
    let mut adj_offsets = Vec::with_capacity(n + 1);
    let mut adj = Vec::new();
    adj_offsets.push(0usize);
    for v in 0..n {
        symmetric_neighbors(graph, v, &mut buf);
        adj.extend_from_slice(&buf);
        adj_offsets.push(adj.len());
    }
    let degree = |v: usize| adj_offsets[v + 1] - adj_offsets[v];

    let mut starts: Vec<u32> = (0..n as u32).collect();
    starts.sort_by_key(|&v| (degree(v as usize), v));

    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    let mut fresh = Vec::new();
    for &start in &starts {
        if visited[start as usize] {
            continue;
        }
        visited[start as usize] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let v = v as usize;
            fresh.clear();
            fresh.extend(
                adj[adj_offsets[v]..adj_offsets[v + 1]]
                    .iter()
                    .copied()
                    .filter(|&u| !visited[u as usize]),
            );
            fresh.sort_by_key(|&u| (degree(u as usize), u));
            for &u in &fresh {
                visited[u as usize] = true;
                queue.push_back(u);
            }
        }
    }
    Permutation::from_order(order).expect("traversal visits every node once")
}

/// Cuthill–McKee ordering if it does not widen the band, else the identity.
pub fn bandwidth_order(graph: &DirectedGraph) -> Permutation {
    let cmk = cuthill_mckee(graph);
    if bandwidth(graph, Some(&cmk)) <= bandwidth(graph, None) {
        cmk
    } else {
        Permutation::identity(graph.node_count())
    }
}

/// Symmetric bandwidth `max |pos(i) - pos(j)|` over all links, under the
/// given relabeling (or the identity).
pub fn bandwidth(graph: &DirectedGraph, perm: Option<&Permutation>) -> usize {
    let pos = |v: usize| perm.map_or(v, |p| p.new_id(v));
    graph
        .edges()
        .map(|(s, t)| pos(s as usize).abs_diff(pos(t as usize)))
        .max()
        .unwrap_or(0)
}
