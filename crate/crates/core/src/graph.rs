//! Compressed directed graphs.
//!
//! A [`DirectedGraph`] keeps both the out-link and the in-link adjacency in
//! compressed sparse form. The out-link side defines the graph; the in-link
//! side is what the Google operator sweeps over, since `y = G v` is computed
//! row by row as a sum over the predecessors of each node.

use std::borrow::Cow;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::reorder::Permutation;

/// Largest node count we can address with `u32` ids.
pub const MAX_NODES: u64 = u32::MAX as u64;

/// Compressed sparse adjacency: `offsets[v]..offsets[v + 1]` indexes `items`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    items: Vec<u32>,
}

impl Csr {
    /// Builds from edges sorted by (key, value) and free of duplicates.
    fn from_sorted(n: usize, pairs: impl Iterator<Item = (u32, u32)>) -> Self {
        let mut offsets = vec![0usize; n + 1];
        let mut items = Vec::new();
        for (k, v) in pairs {
            offsets[k as usize + 1] += 1;
            items.push(v);
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Csr { offsets, items }
    }

    /// Transposes while keeping each row sorted.
    fn transpose(&self, n: usize) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &v in &self.items {
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut items = vec![0u32; self.items.len()];
        // Sources are visited in increasing order, so every transposed row
        // comes out sorted.
        for k in 0..n {
            for &v in self.row(k) {
                let slot = &mut cursor[v as usize];
                items[*slot] = k as u32;
                *slot += 1;
            }
        }
        Csr { offsets, items }
    }

    #[inline]
    fn row(&self, k: usize) -> &[u32] {
        &self.items[self.offsets[k]..self.offsets[k + 1]]
    }
}

/// Options controlling how an edge list is turned into a graph.
#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    pub n_hint: Option<usize>,
    pub drop_self_loops: bool,
}

/// An immutable directed graph on the dense node ids `0..N`.
///
/// Duplicate edges are collapsed and self-loops are kept unless the caller
/// asks otherwise. Nodes without out-links are dangling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    out: Csr,
    inc: Csr,
    labels: Option<Vec<String>>,
}

impl DirectedGraph {
    /// Builds a graph from an arbitrary edge sequence. The result does not
    /// depend on the order of the edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut edges: Vec<(u32, u32)> = edges.into_iter().collect();
        for &(s, t) in &edges {
            let m = s.max(t) as usize;
            if m >= n {
                return Err(Error::Dimension {
                    expected: n,
                    actual: m + 1,
                });
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let out = Csr::from_sorted(n, edges.into_iter());
        let inc = out.transpose(n);
        Ok(DirectedGraph {
            n,
            out,
            inc,
            labels: None,
        })
    }

    /// Reads a `src dst` edge list. Blank lines and lines starting with `#`
    /// are skipped.
    pub fn load_edge_list<R: BufRead>(reader: R, options: LoadOptions) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max_id: Option<u32> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let mut fields = text.split_whitespace();
            let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected two node ids, found {text:?}"),
                });
            };
            let src = parse_id(a, lineno)?;
            let dst = parse_id(b, lineno)?;
            max_id = Some(max_id.map_or(src.max(dst), |m| m.max(src).max(dst)));
            if options.drop_self_loops && src == dst {
                continue;
            }
            edges.push((src, dst));
        }
        let from_ids = max_id.map_or(0, |m| m as usize + 1);
        let n = from_ids.max(options.n_hint.unwrap_or(0));
        Self::from_edges(n, edges)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.out.items.len()
    }

    /// Sorted targets of `node`.
    #[inline]
    pub fn successors(&self, node: usize) -> &[u32] {
        self.out.row(node)
    }

    /// Sorted sources pointing at `node`.
    #[inline]
    pub fn predecessors(&self, node: usize) -> &[u32] {
        self.inc.row(node)
    }

    #[inline]
    pub fn out_degree(&self, node: usize) -> usize {
        self.out.offsets[node + 1] - self.out.offsets[node]
    }

    #[inline]
    pub fn in_degree(&self, node: usize) -> usize {
        self.inc.offsets[node + 1] - self.inc.offsets[node]
    }

    #[inline]
    pub fn is_dangling(&self, node: usize) -> bool {
        self.out_degree(node) == 0
    }

    pub fn dangling_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&v| self.is_dangling(v))
    }

    pub fn has_edge(&self, src: usize, dst: usize) -> bool {
        self.successors(src).binary_search(&(dst as u32)).is_ok()
    }

    /// All edges in (source, target) lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n).flat_map(move |s| self.successors(s).iter().map(move |&t| (s as u32, t)))
    }

    /// The same nodes with every link reversed.
    pub fn invert(&self) -> DirectedGraph {
        DirectedGraph {
            n: self.n,
            out: self.inc.clone(),
            inc: self.out.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Relabels node `v` as `perm.new_id(v)`; labels travel with their nodes.
    pub fn permuted(&self, perm: &Permutation) -> Result<DirectedGraph> {
        if perm.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                actual: perm.len(),
            });
        }
        let edges = self
            .edges()
            .map(|(s, t)| (perm.new_id(s as usize) as u32, perm.new_id(t as usize) as u32));
        let mut g = DirectedGraph::from_edges(self.n, edges)?;
        if let Some(labels) = &self.labels {
            let mut relabeled = vec![String::new(); self.n];
            for (old, label) in labels.iter().enumerate() {
                relabeled[perm.new_id(old)] = label.clone();
            }
            g.labels = Some(relabeled);
        }
        Ok(g)
    }

    /// Attaches node labels. Nodes without an entry fall back to their id.
    pub fn set_labels(&mut self, table: LabelTable) -> Result<()> {
        let mut labels: Vec<String> = (0..self.n).map(|v| v.to_string()).collect();
        for (id, label) in table.entries {
            if id >= self.n {
                return Err(Error::Dimension {
                    expected: self.n,
                    actual: id + 1,
                });
            }
            labels[id] = label;
        }
        self.labels = Some(labels);
        Ok(())
    }

    pub fn has_labels(&self) -> bool {
        self.labels.is_some()
    }

    pub fn label(&self, node: usize) -> Cow<'_, str> {
        match &self.labels {
            Some(labels) => Cow::Borrowed(labels[node].as_str()),
            None => Cow::Owned(node.to_string()),
        }
    }
}

fn parse_id(token: &str, line: usize) -> Result<u32> {
    let id: u64 = token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid node id {token:?}"),
    })?;
    if id >= MAX_NODES {
        return Err(Error::Capacity { id, max: MAX_NODES });
    }
    Ok(id as u32)
}

/// Sidecar table of node labels, read from `id<TAB>label` lines.
#[derive(Debug, Clone, Default)]
pub struct LabelTable {
    entries: Vec<(usize, String)>,
}

impl LabelTable {
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let text = line.trim_end_matches(['\r', '\n']);
            if text.trim().is_empty() || text.starts_with('#') {
                continue;
            }
            let Some((id, label)) = text.split_once('\t') else {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "expected id<TAB>label".into(),
                });
            };
            let id = parse_id(id.trim(), idx + 1)? as usize;
            entries.push((id, label.to_string()));
        }
        Ok(LabelTable { entries })
    }

    pub fn from_entries(entries: Vec<(usize, String)>) -> Self {
        LabelTable { entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, n_hint: Option<usize>) -> Result<DirectedGraph> {
        DirectedGraph::load_edge_list(
            text.as_bytes(),
            LoadOptions {
                n_hint,
                ..Default::default()
            },
        )
    }

    #[test]
    fn minimal_graph() {
        let g = load("0 1\n", None).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.successors(0), &[1]);
        assert!(g.is_dangling(1));
        assert!(!g.is_dangling(0));
    }

    #[test]
    fn duplicates_collapse() {
        let g = load("0 1\n0 1\n1 0\n", None).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.dangling_nodes().count(), 0);
    }

    #[test]
    fn edgeless_with_hint() {
        let g = load("", Some(3)).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.dangling_nodes().count(), 3);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = load("# header\n\n2 0\n  # indented\n", None).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn line_order_does_not_matter() {
        let a = load("3 1\n0 2\n2 3\n0 1\n", None).unwrap();
        let b = load("0 1\n2 3\n0 2\n3 1\n", None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_line_reports_number() {
        match load("0 1\n1 x\n", None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load("0 1 2\n", None), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load("7\n", None), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn id_overflow_is_capacity_error() {
        assert!(matches!(load("0 4294967295\n", None), Err(Error::Capacity { .. })));
        assert!(matches!(
            load("0 99999999999999999999999\n", None),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn self_loops_kept_unless_dropped() {
        let g = load("0 0\n0 1\n", None).unwrap();
        assert!(g.has_edge(0, 0));
        assert_eq!(g.out_degree(0), 2);
        let g = DirectedGraph::load_edge_list(
            "0 0\n0 1\n".as_bytes(),
            LoadOptions {
                drop_self_loops: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!g.has_edge(0, 0));
        assert_eq!(g.node_count(), 2);
    }

    #[test]
    fn invert_single_edge_and_cycle() {
        let g = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        let inv = g.invert();
        assert_eq!(inv.edges().collect::<Vec<_>>(), vec![(1, 0)]);

        let cycle = DirectedGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let rev = cycle.invert();
        assert_eq!(rev.edges().collect::<Vec<_>>(), vec![(0, 2), (1, 0), (2, 1)]);
        assert_eq!(rev, DirectedGraph::from_edges(3, [(0, 2), (2, 1), (1, 0)]).unwrap());
    }

    #[test]
    fn predecessors_are_sorted() {
        let g = DirectedGraph::from_edges(4, [(3, 0), (1, 0), (2, 0), (0, 0)]).unwrap();
        assert_eq!(g.predecessors(0), &[0, 1, 2, 3]);
        assert_eq!(g.in_degree(0), 4);
    }

    #[test]
    fn labels_fall_back_to_ids() {
        let mut g = DirectedGraph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(g.label(2), "2");
        let table = LabelTable::read("0\tAlpha\n2\tGamma Delta\n".as_bytes()).unwrap();
        g.set_labels(table).unwrap();
        assert_eq!(g.label(0), "Alpha");
        assert_eq!(g.label(1), "1");
        assert_eq!(g.label(2), "Gamma Delta");
        assert!(LabelTable::read("0 Alpha\n".as_bytes()).is_err());
    }
}
