//! Writes the bundled demo network: `make_fixture <out-dir> [nodes] [seed]`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use regomax::fixtures::toy_network;

fn main() -> std::io::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "data/toy".into()));
    let n: usize = args.next().map_or(2000, |s| s.parse().expect("node count"));
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed"));
    fs::create_dir_all(&dir)?;

    let toy = toy_network(n, seed);
    let mut edges = BufWriter::new(File::create(dir.join("edges.txt"))?);
    writeln!(edges, "# demo network: {n} nodes, seed {seed}")?;
    for (s, t) in toy.graph.edges() {
        writeln!(edges, "{s} {t}")?;
    }
    edges.flush()?;

    let mut labels = BufWriter::new(File::create(dir.join("labels.tsv"))?);
    for (id, label) in &toy.labels {
        writeln!(labels, "{id}\t{label}")?;
    }
    labels.flush()?;

    let mut sel = BufWriter::new(File::create(dir.join("selection.csv"))?);
    writeln!(sel, "node_label,category,group,external_rank,code")?;
    for e in toy.selection.entries() {
        let rank = e.external_rank.map(|r| r.to_string()).unwrap_or_default();
        let code = e.code.clone().unwrap_or_default();
        writeln!(sel, "{},{},{},{rank},{code}", e.label, e.category, e.group)?;
    }
    sel.flush()
}
