use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::DMatrix;
use regomax::dense::dense_pagerank;
use regomax::fixtures::{community_graph, random_selection};
use regomax::io::{self as rio, fmt_f64};
use regomax::{
    bandwidth, bandwidth_order, build_network, cheirank, compute_reduced, export_dot, pagerank, rank_join,
    sensitivity_matrix, top_per_group, Component, DirectedGraph, GoogleOperator, LabelTable, LoadOptions, Method, Mode,
    NetworkParams, NodeSelection, Permutation, ReduceOptions, ReducedMatrix, SensitivityOptions, WeightMode,
};

use crate::args::{
    BenchArgs, GraphArgs, MatrixInput, MethodArg, ModeArg, NetworkArgs, RankArgs, ReduceCmdArgs, Reorder,
    SensitivityArgs, SeriesArgs,
};
use crate::error::{CliError, CliResult};

pub struct Context {
    pub alpha: f64,
    pub out_dir: PathBuf,
}

impl Context {
    fn create(&self, name: &str) -> CliResult<BufWriter<File>> {
        fs::create_dir_all(&self.out_dir).map_err(|e| CliError::io(&self.out_dir, e))?;
        let path = self.out_dir.join(name);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        Ok(BufWriter::new(file))
    }

    fn write_with(&self, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> regomax::Result<()>) -> CliResult<()> {
        let mut w = self.create(name)?;
        f(&mut w)?;
        w.flush().map_err(|e| CliError::io(&self.out_dir.join(name), e))
    }
}

fn existing<'a>(path: &'a Option<PathBuf>, flag: &str) -> CliResult<&'a Path> {
    let path = path
        .as_deref()
        .ok_or_else(|| CliError::Config(format!("--{flag} is required")))?;
    if !path.is_file() {
        return Err(CliError::Config(format!("--{flag}: {} does not exist", path.display())));
    }
    Ok(path)
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::io(path, e))
}

fn load_graph(args: &GraphArgs) -> CliResult<DirectedGraph> {
    let edges = existing(&args.edges, "edges")?;
    let labels = match &args.labels {
        Some(_) => Some(existing(&args.labels, "labels")?),
        None => None,
    };
    let options = LoadOptions {
        n_hint: args.nodes,
        drop_self_loops: args.drop_self_loops,
    };
    let mut graph = DirectedGraph::load_edge_list(open(edges)?, options)?;
    if let Some(path) = labels {
        graph.set_labels(LabelTable::read(open(path)?)?)?;
    }
    Ok(graph)
}

fn load_selection(path: &Option<PathBuf>, graph: &DirectedGraph) -> CliResult<NodeSelection> {
    let path = existing(path, "selection")?;
    let selection = NodeSelection::read_csv(open(path)?, graph)?;
    if selection.is_empty() {
        return Err(CliError::Config(format!("{} selects no nodes", path.display())));
    }
    Ok(selection)
}

fn reduce_options(series: &SeriesArgs, graph: &GraphArgs) -> ReduceOptions {
    ReduceOptions {
        eig_tol: graph.tol,
        max_iter: graph.max_iter,
        series_tol: series.series_tol,
        batch_size: series.batch_size,
        max_terms: series.max_terms,
    }
}

/// Reduced matrix in selection order, optionally computed on the
/// Cuthill-McKee relabeling of the graph.
fn reduce_graph(
    graph: &DirectedGraph,
    selection: &NodeSelection,
    alpha: f64,
    reorder: Reorder,
    opts: &ReduceOptions,
) -> CliResult<ReducedMatrix> {
    let reduced = match reorder {
        Reorder::None => {
            let op = GoogleOperator::new(graph, alpha)?;
            compute_reduced(&op, selection, opts)?
        }
        Reorder::Cmk => {
            let perm = bandwidth_order(graph);
            let g = graph.permuted(&perm)?;
            let sel = selection.remap(|v| perm.new_id(v), g.node_count())?;
            let op = GoogleOperator::new(&g, alpha)?;
            let mut r = compute_reduced(&op, &sel, opts)?;
            r.nodes = selection.nodes();
            r
        }
    };
    Ok(reduced)
}

/// Selection plus `G_R`, either read from a `reduce` output or computed.
fn obtain(input: &MatrixInput, ctx: &Context) -> CliResult<(NodeSelection, Option<ReducedMatrix>, DMatrix<f64>)> {
    if input.reduced.is_some() {
        let path = existing(&input.reduced, "reduced")?;
        let (labels, m) = rio::read_matrix_csv(open(path)?)?;
        let mut stub = DirectedGraph::from_edges(labels.len(), [])?;
        stub.set_labels(LabelTable::from_entries(labels.into_iter().enumerate().collect()))?;
        let selection = load_selection(&input.selection, &stub)?;
        if selection.len() != m.nrows() {
            return Err(CliError::Config(format!(
                "selection has {} nodes but the reduced matrix has {}",
                selection.len(),
                m.nrows()
            )));
        }
        let idx = selection.nodes();
        let gr = DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])]);
        return Ok((selection, None, gr));
    }
    let graph = load_graph(&input.graph)?;
    let selection = load_selection(&input.selection, &graph)?;
    let opts = reduce_options(&input.series, &input.graph);
    let reduced = reduce_graph(&graph, &selection, ctx.alpha, input.series.reorder, &opts)?;
    let gr = reduced.gr.clone();
    Ok((selection, Some(reduced), gr))
}

fn labels_of(selection: &NodeSelection) -> Vec<String> {
    selection.entries().iter().map(|e| e.label.clone()).collect()
}

pub fn rank(args: &RankArgs, ctx: &Context) -> CliResult<()> {
    let graph = load_graph(&args.graph)?;
    let selection = match &args.selection {
        Some(_) => Some(load_selection(&args.selection, &graph)?),
        None => None,
    };
    let op = GoogleOperator::new(&graph, ctx.alpha)?;
    let p = pagerank(&op, args.graph.tol, args.graph.max_iter)?;
    let pstar = cheirank(&graph, ctx.alpha, args.graph.tol, args.graph.max_iter)?;
    ctx.write_with("ranks.csv", |w| rio::write_ranks(w, &graph, &p, &pstar))?;

    let Some(selection) = selection else {
        return Ok(());
    };
    let categories = selection.categories();
    let mut joins = Vec::new();
    for c in &categories {
        joins.push((c.clone(), rank_join(&p, &selection, c)?));
    }
    ctx.write_with("rankjoin.csv", |w| rio::write_rankjoin(w, &selection, &joins))?;

    let category = args.category.clone().unwrap_or_else(|| categories[0].clone());
    let by_p = rank_join(&p, &selection, &category)?;
    let by_pstar = rank_join(&pstar, &selection, &category)?;
    ctx.write_with("rankplane.csv", |w| {
        rio::write_rankplane(w, &selection, &by_p, &by_pstar)
    })
}

fn parse_sector(spec: &str, selection: &NodeSelection) -> CliResult<(String, String, Vec<usize>, Vec<usize>)> {
    let Some((r, c)) = spec.split_once(',') else {
        return Err(CliError::Config(format!("--sector expects ROWS,COLS, got {spec:?}")));
    };
    let (r, c) = (r.trim(), c.trim());
    let rows = selection.positions_in(r);
    let cols = selection.positions_in(c);
    if rows.is_empty() || cols.is_empty() {
        return Err(CliError::Config(format!(
            "--sector {spec}: category not in the selection"
        )));
    }
    Ok((r.to_string(), c.to_string(), rows, cols))
}

pub fn reduce(args: &ReduceCmdArgs, ctx: &Context) -> CliResult<()> {
    let graph = load_graph(&args.graph)?;
    let selection = load_selection(&args.selection, &graph)?;
    let sectors = args
        .sector
        .iter()
        .map(|s| parse_sector(s, &selection))
        .collect::<CliResult<Vec<_>>>()?;
    let opts = reduce_options(&args.series, &args.graph);
    let r = reduce_graph(&graph, &selection, ctx.alpha, args.series.reorder, &opts)?;
    let labels = labels_of(&selection);
    for component in [Component::Gr, Component::Grr, Component::Gpr, Component::Gqr] {
        let m = r.matrix(component);
        ctx.write_with(&format!("reduced_{}.csv", component.name()), |w| {
            rio::write_matrix_csv(w, &m, &labels)
        })?;
    }

    let mode = if args.weights_abs {
        WeightMode::Absolute
    } else {
        WeightMode::Signed
    };
    ctx.write_with("weights.csv", |w| rio::write_weights(w, &r.weights(mode)))?;

    let categories = selection.categories();
    let mut table = Vec::new();
    for rc in &categories {
        for cc in &categories {
            let rows = selection.positions_in(rc);
            let cols = selection.positions_in(cc);
            table.push((rc.clone(), cc.clone(), r.sector_weights(&rows, &cols, mode)));
        }
    }
    ctx.write_with("sector_weights.csv", |w| rio::write_sector_weights(w, &table))?;

    for (rc, cc, rows, cols) in &sectors {
        let row_labels: Vec<String> = rows.iter().map(|&p| labels[p].clone()).collect();
        let col_labels: Vec<String> = cols.iter().map(|&p| labels[p].clone()).collect();
        for component in [Component::Gr, Component::Grr, Component::Gpr, Component::Gqr] {
            let block = r.sector(component, rows, cols);
            ctx.write_with(&format!("sector_{rc}_{cc}_{}.csv", component.name()), |w| {
                rio::write_block_csv(w, &block, &row_labels, &col_labels)
            })?;
        }
    }

    ctx.write_with("scattering.csv", |w| {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["key", "value"])?;
        out.write_record(["nodes", &graph.node_count().to_string()])?;
        out.write_record(["selected", &selection.len().to_string()])?;
        out.write_record(["alpha", &fmt_f64(ctx.alpha)])?;
        out.write_record(["lambda_c", &fmt_f64(r.lambda_c)])?;
        out.flush()?;
        Ok(())
    })
}

pub fn sensitivity(args: &SensitivityArgs, ctx: &Context) -> CliResult<()> {
    let (selection, _, gr) = obtain(&args.input, ctx)?;
    let sources = selection.positions_in(&args.sources);
    let targets = selection.positions_in(&args.targets);
    if sources.is_empty() || targets.is_empty() {
        return Err(CliError::Config(format!(
            "categories {:?} and {:?} must both be present in the selection",
            args.sources, args.targets
        )));
    }
    let opts = SensitivityOptions {
        delta: args.delta,
        method: match args.method {
            MethodArg::Central => Method::Central,
            MethodArg::OneSided => Method::OneSided,
        },
        tol: args.sensitivity_tol,
        ..Default::default()
    };
    let table = sensitivity_matrix(&gr, &sources, &targets, opts)?;
    ctx.write_with("sensitivity.csv", |w| rio::write_sensitivity(w, &selection, &table))?;
    ctx.write_with("sensitivity_extrema.csv", |w| {
        rio::write_sensitivity_extrema(w, &selection, &table)
    })
}

pub fn network(args: &NetworkArgs, ctx: &Context) -> CliResult<()> {
    let component = Component::parse(&args.component)
        .filter(|c| matches!(c, Component::Gr | Component::GrrPlusGqr | Component::Gqr))
        .ok_or_else(|| {
            CliError::Config(format!(
                "--component must be GR, Grr+Gqr or Gqr, got {:?}",
                args.component
            ))
        })?;
    let (selection, reduced, gr) = obtain(&args.input, ctx)?;
    let basis = match (&reduced, component) {
        (_, Component::Gr) => gr.clone(),
        (Some(r), c) => r.matrix(c),
        (None, c) => {
            return Err(CliError::Config(format!(
                "--component {c} needs the graph; a --reduced file provides GR only"
            )))
        }
    };
    let priority = dense_pagerank(&gr, 1e-14, 100_000)?;
    let seeds = match &args.seeds {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|label| {
                selection
                    .position_by_label(label)
                    .ok_or_else(|| CliError::Config(format!("seed {label:?} is not in the selection")))
            })
            .collect::<CliResult<Vec<_>>>()?,
        None => top_per_group(&selection, &args.primary, &priority),
    };
    let params = NetworkParams {
        n_primary: args.n_primary,
        n_secondary: args.n_secondary,
        max_level: args.max_level,
        mode: match args.mode {
            ModeArg::Friends => Mode::Friends,
            ModeArg::Followers => Mode::Followers,
        },
        primary: args.primary.clone(),
        secondary: args.secondary.clone(),
    };
    let net = build_network(&basis, &selection, &seeds, &params, &priority)?;
    let dot = export_dot(&net, &args.secondary);
    let json = net.to_json()?;
    ctx.write_with("network.dot", |w| Ok(w.write_all(dot.as_bytes())?))?;
    ctx.write_with("network.json", |w| Ok(writeln!(w, "{json}")?))
}

const BENCH_BATCHES: [usize; 4] = [1, 8, 16, 20];

pub fn bench(args: &BenchArgs, ctx: &Context) -> CliResult<()> {
    let (graph, selection) = if args.graph.edges.is_some() {
        let graph = load_graph(&args.graph)?;
        let selection = match &args.selection {
            Some(_) => load_selection(&args.selection, &graph)?,
            None => {
                let nodes = random_selection(graph.node_count(), args.selection_size, args.seed);
                NodeSelection::from_nodes(&nodes, graph.node_count())?
            }
        };
        (graph, selection)
    } else {
        if args.synthetic_nodes < 2 || args.selection_size == 0 || args.selection_size >= args.synthetic_nodes {
            return Err(CliError::Config(
                "synthetic bench needs 0 < selection-size < synthetic-nodes".into(),
            ));
        }
        let n = args.synthetic_nodes;
        let graph = community_graph(n, (n / 400).max(2), args.synthetic_degree, 0.9, args.seed);
        let nodes = random_selection(n, args.selection_size, args.seed);
        let selection = NodeSelection::from_nodes(&nodes, n)?;
        (graph, selection)
    };

    let mut out = csv::Writer::from_writer(ctx.create("bench.csv")?);
    out.write_record([
        "ordering",
        "batch_size",
        "nodes",
        "edges",
        "selected",
        "bandwidth",
        "pagerank_s",
        "reduce_s",
        "speedup",
        "max_dev",
    ])
    .map_err(regomax::Error::from)?;

    let mut baseline: Option<(f64, DMatrix<f64>)> = None;
    for reorder in [Reorder::None, Reorder::Cmk] {
        let perm = match reorder {
            Reorder::None => Permutation::identity(graph.node_count()),
            Reorder::Cmk => bandwidth_order(&graph),
        };
        let g = graph.permuted(&perm)?;
        let sel = selection.remap(|v| perm.new_id(v), g.node_count())?;
        let bw = bandwidth(&g, None);
        for batch in BENCH_BATCHES {
            let op = GoogleOperator::new(&g, ctx.alpha)?;
            let t0 = Instant::now();
            pagerank(&op, args.graph.tol, args.graph.max_iter)?;
            let t_rank = t0.elapsed().as_secs_f64();
            let opts = ReduceOptions {
                eig_tol: args.graph.tol,
                max_iter: args.graph.max_iter,
                series_tol: args.series_tol,
                batch_size: batch,
                ..Default::default()
            };
            let t1 = Instant::now();
            let r = compute_reduced(&op, &sel, &opts)?;
            let t_reduce = t1.elapsed().as_secs_f64();
            let (t_base, m_base) = baseline.get_or_insert_with(|| (t_reduce, r.gr.clone()));
            let dev = (&r.gr - &*m_base).abs().max();
            out.write_record([
                match reorder {
                    Reorder::None => "identity",
                    Reorder::Cmk => "cmk",
                }
                .to_string(),
                batch.to_string(),
                g.node_count().to_string(),
                g.edge_count().to_string(),
                sel.len().to_string(),
                bw.to_string(),
                format!("{t_rank:.6}"),
                format!("{t_reduce:.6}"),
                format!("{:.3}", *t_base / t_reduce),
                format!("{dev:.3e}"),
            ])
            .map_err(regomax::Error::from)?;
        }
    }
    out.flush().map_err(|e| CliError::io(&ctx.out_dir.join("bench.csv"), e))
}
