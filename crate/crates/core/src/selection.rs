//! The ordered set of nodes a reduced matrix is computed for.

use std::collections::{HashMap, HashSet};
use std::io::Read;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// One selected node with its metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectedNode {
    pub node: usize,
    pub label: String,
    pub category: String,
    pub group: i64,
    pub external_rank: Option<u64>,
    /// Short code used by downstream consumers, e.g. an ISO country code.
    pub code: Option<String>,
}

/// Ordered, duplicate-free node selection. The order is the row and column
/// order of every reduced matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSelection {
    entries: Vec<SelectedNode>,
    position: HashMap<usize, usize>,
}

#[derive(Debug, Deserialize)]
struct SelectionRecord {
    node_label: String,
    #[serde(default)]
    category: String,
    #[serde(default)]
    group: Option<i64>,
    #[serde(default)]
    external_rank: Option<u64>,
    #[serde(default)]
    code: Option<String>,
}

impl NodeSelection {
    pub fn new(entries: Vec<SelectedNode>, node_count: usize) -> Result<Self> {
        let mut position = HashMap::with_capacity(entries.len());
        for (pos, e) in entries.iter().enumerate() {
            if e.node >= node_count {
                return Err(Error::Selection(format!(
                    "node {} is outside the graph of {node_count} nodes",
                    e.node
                )));
            }
            if position.insert(e.node, pos).is_some() {
                return Err(Error::Selection(format!(
                    "node {} ({}) selected twice",
                    e.node, e.label
                )));
            }
        }
        Ok(NodeSelection { entries, position })
    }

    /// Plain selection of node ids, all in one unnamed category.
    pub fn from_nodes(nodes: &[usize], node_count: usize) -> Result<Self> {
        let entries = nodes
            .iter()
            .map(|&node| SelectedNode {
                node,
                label: node.to_string(),
                category: String::new(),
                group: 0,
                external_rank: None,
                code: None,
            })
            .collect();
        Self::new(entries, node_count)
    }

    /// Reads `node_label,category,group,external_rank[,code]` rows. Labels are
    /// resolved against the graph's label table, falling back to numeric ids.
    pub fn read_csv<R: Read>(reader: R, graph: &DirectedGraph) -> Result<Self> {
        let mut by_label: HashMap<String, usize> = HashMap::new();
        if graph.has_labels() {
            for v in 0..graph.node_count() {
                by_label.entry(graph.label(v).into_owned()).or_insert(v);
            }
        }
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .flexible(true)
            .from_reader(reader);
        let mut entries = Vec::new();
        for (idx, rec) in rdr.deserialize::<SelectionRecord>().enumerate() {
            let rec = rec?;
            let node = match by_label.get(&rec.node_label) {
                Some(&v) => v,
                None => rec.node_label.parse::<usize>().map_err(|_| {
                    Error::Selection(format!(
                        "row {}: label {:?} not found in the graph",
                        idx + 1,
                        rec.node_label
                    ))
                })?,
            };
            entries.push(SelectedNode {
                node,
                label: rec.node_label,
                category: rec.category,
                group: rec.group.unwrap_or(0),
                external_rank: rec.external_rank,
                code: rec.code.filter(|c| !c.is_empty()),
            });
        }
        Self::new(entries, graph.node_count())
    }

    /// The same selection on a relabeled graph: node `v` becomes `map(v)`.
    pub fn remap(&self, map: impl Fn(usize) -> usize, node_count: usize) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| SelectedNode {
                node: map(e.node),
                ..e.clone()
            })
            .collect();
        Self::new(entries, node_count)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[SelectedNode] {
        &self.entries
    }

    pub fn get(&self, pos: usize) -> &SelectedNode {
        &self.entries[pos]
    }

    pub fn nodes(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.node).collect()
    }

    /// Position of a graph node within the selection.
    pub fn position_of(&self, node: usize) -> Option<usize> {
        self.position.get(&node).copied()
    }

    /// Position of the entry carrying `label`.
    pub fn position_by_label(&self, label: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.label == label)
    }

    /// Positions of every entry in `category`, in selection order.
    pub fn positions_in(&self, category: &str) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.category == category)
            .map(|(i, _)| i)
            .collect()
    }

    /// Distinct categories in order of first appearance.
    pub fn categories(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        self.entries
            .iter()
            .filter(|e| seen.insert(e.category.as_str()))
            .map(|e| e.category.clone())
            .collect()
    }
}
