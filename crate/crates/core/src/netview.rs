//! Leveled friend and follower networks extracted from a reduced matrix.
//!
//! Node `j` has friend `i` when `j` points to `i`, i.e. `i` is among the
//! largest elements of column `j`. Followers of `j` are the largest elements
//! of row `j`. Starting from seed nodes at level 0, every expandable node
//! of level `l` contributes up to `n_primary` nodes of the primary category
//! and `n_secondary` nodes of the secondary category; unseen ones enter at
//! level `l + 1`. Secondary nodes are never expanded.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rank::descending_order;
use crate::selection::NodeSelection;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Friends,
    Followers,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Friends => "friends",
            Mode::Followers => "followers",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "friends" => Some(Mode::Friends),
            "followers" => Some(Mode::Followers),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NetworkParams {
    pub n_primary: usize,
    pub n_secondary: usize,
    pub max_level: usize,
    pub mode: Mode,
    pub primary: String,
    pub secondary: String,
}

impl Default for NetworkParams {
    fn default() -> Self {
        NetworkParams {
            n_primary: 4,
            n_secondary: 2,
            max_level: 2,
            mode: Mode::Friends,
            primary: "bank".into(),
            secondary: "country".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetNode {
    /// Position in the selection (row/column of the reduced matrix).
    pub position: usize,
    pub label: String,
    pub category: String,
    pub group: i64,
    pub level: usize,
    /// Node of the previous level this one is drawn next to; `None` for seeds.
    pub attached_to: Option<usize>,
}

/// `anchor` is the expanded node, `partner` the selected friend or follower.
/// Friends edges point anchor → partner, follower edges partner → anchor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetEdge {
    pub anchor: usize,
    pub partner: usize,
    pub level: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfluenceNetwork {
    pub schema_version: u32,
    pub mode: Mode,
    pub nodes: Vec<NetNode>,
    pub edges: Vec<NetEdge>,
}

impl NetEdge {
    /// `(from, to)` in the direction of the underlying link.
    pub fn endpoints(&self, mode: Mode) -> (usize, usize) {
        match mode {
            Mode::Friends => (self.anchor, self.partner),
            Mode::Followers => (self.partner, self.anchor),
        }
    }
}

impl InfluenceNetwork {
    pub fn node(&self, position: usize) -> Option<&NetNode> {
        self.nodes.iter().find(|n| n.position == position)
    }

    pub fn nodes_at(&self, level: usize) -> impl Iterator<Item = &NetNode> {
        self.nodes.iter().filter(move |n| n.level == level)
    }

    /// Same nodes and edges, ignoring the mode tag.
    pub fn same_structure(&self, other: &InfluenceNetwork) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Descending order over `values` restricted to `candidates`, ties to the
/// earlier selection position.
fn top_k(values: impl Fn(usize) -> f64, candidates: &[usize], exclude: usize, k: usize) -> Vec<(usize, f64)> {
    let mut scored: Vec<(usize, f64)> = candidates
        .iter()
        .copied()
        .filter(|&p| p != exclude)
        .map(|p| (p, values(p)))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.truncate(k);
    scored
}

/// Builds the network. `priority` holds one score per selection position
/// (typically the PageRank of the reduced matrix); it orders candidates for
/// the attachment attribute. Seeds are selection positions.
pub fn build_network(
    matrix: &DMatrix<f64>,
    selection: &NodeSelection,
    seeds: &[usize],
    params: &NetworkParams,
    priority: &[f64],
) -> Result<InfluenceNetwork> {
    let n = selection.len();
    if matrix.shape() != (n, n) {
        return Err(Error::Dimension {
            expected: n,
            actual: matrix.nrows(),
        });
    }
    if priority.len() != n {
        return Err(Error::Dimension {
            expected: n,
            actual: priority.len(),
        });
    }
    if params.primary == params.secondary {
        return Err(Error::Parameter("primary and secondary categories must differ".into()));
    }
    if let Some(&bad) = seeds.iter().find(|&&s| s >= n) {
        return Err(Error::Selection(format!("seed {bad} is not in the selection")));
    }

    let primary = selection.positions_in(&params.primary);
    let secondary = selection.positions_in(&params.secondary);
    let mut rank_of = vec![0usize; n];
    for (k, &p) in descending_order(priority).iter().enumerate() {
        rank_of[p as usize] = k;
    }

    let make_node = |position: usize, level: usize| {
        let e = selection.get(position);
        NetNode {
            position,
            label: e.label.clone(),
            category: e.category.clone(),
            group: e.group,
            level,
            attached_to: None,
        }
    };
    let mut nodes: Vec<NetNode> = Vec::new();
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut frontier = Vec::new();
    for &s in seeds {
        if let Entry::Vacant(slot) = index.entry(s) {
            slot.insert(nodes.len());
            nodes.push(make_node(s, 0));
            frontier.push(s);
        }
    }

    let mut edges = Vec::new();
    for level in 0..params.max_level {
        let mut next = Vec::new();
        let first_edge = edges.len();
        for &anchor in &frontier {
            if selection.get(anchor).category != params.primary {
                continue;
            }
            let value = |p: usize| match params.mode {
                Mode::Friends => matrix[(p, anchor)],
                Mode::Followers => matrix[(anchor, p)],
            };
            for (pool, k) in [(&primary, params.n_primary), (&secondary, params.n_secondary)] {
                for (partner, weight) in top_k(value, pool, anchor, k) {
                    edges.push(NetEdge {
                        anchor,
                        partner,
                        level,
                        weight,
                    });
                    if let Entry::Vacant(slot) = index.entry(partner) {
                        slot.insert(nodes.len());
                        nodes.push(make_node(partner, level + 1));
                        next.push(partner);
                    }
                }
            }
        }
        for &p in &next {
            let group = selection.get(p).group;
            let mut anchors: Vec<usize> = edges[first_edge..]
                .iter()
                .filter(|e| e.partner == p)
                .map(|e| e.anchor)
                .collect();
            anchors.sort_by_key(|&a| rank_of[a]);
            let same_group = anchors.iter().copied().find(|&a| selection.get(a).group == group);
            nodes[index[&p]].attached_to = same_group.or(anchors.first().copied());
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    Ok(InfluenceNetwork {
        schema_version: SCHEMA_VERSION,
        mode: params.mode,
        nodes,
        edges,
    })
}

/// Highest-priority member of `category` within each group, in ascending
/// group order.
pub fn top_per_group(selection: &NodeSelection, category: &str, priority: &[f64]) -> Vec<usize> {
    let mut best: Vec<(i64, usize)> = Vec::new();
    for p in selection.positions_in(category) {
        let g = selection.get(p).group;
        match best.iter_mut().find(|(bg, _)| *bg == g) {
            Some(slot) => {
                let cur = slot.1;
                if priority[p] > priority[cur] || (priority[p] == priority[cur] && p < cur) {
                    slot.1 = p;
                }
            }
            None => best.push((g, p)),
        }
    }
    best.sort_by_key(|&(g, _)| g);
    best.into_iter().map(|(_, p)| p).collect()
}

fn group_color(group: i64) -> &'static str {
    match group {
        1 => "red",
        2 => "olive",
        3 => "green",
        4 => "cyan",
        5 => "blue",
        _ => "gray50",
    }
}

const SECONDARY_COLOR: &str = "indigo";
const LEVEL_WIDTH: [f64; 3] = [1.2, 0.9, 0.6];

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Graphviz rendering. `secondary` names the terminal category, drawn in a
/// single color. Output depends only on the network.
pub fn export_dot(net: &InfluenceNetwork, secondary: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", net.mode.name()).unwrap();
    writeln!(out, "  node [shape=circle, style=filled, fontsize=10];").unwrap();
    for n in &net.nodes {
        let color = if n.category == secondary {
            SECONDARY_COLOR
        } else {
            group_color(n.group)
        };
        let width = LEVEL_WIDTH[n.level.min(LEVEL_WIDTH.len() - 1)];
        write!(
            out,
            "  n{} [label={}, fillcolor={}, width={}, level={}",
            n.position,
            quote(&n.label),
            color,
            width,
            n.level
        )
        .unwrap();
        if let Some(a) = n.attached_to {
            write!(out, ", attached_to=n{a}").unwrap();
        }
        writeln!(out, "];").unwrap();
    }
    for e in &net.edges {
        let (from, to) = e.endpoints(net.mode);
        let style = if e.level == 0 {
            "color=black, penwidth=2.5"
        } else {
            "color=red, penwidth=0.8"
        };
        writeln!(out, "  n{from} -> n{to} [{style}, weight_gr=\"{:?}\"];", e.weight).unwrap();
    }
    out.push_str("}\n");
    out
}
