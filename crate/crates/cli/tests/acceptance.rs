//! Acceptance gate. Runs each criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any failed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use common::*;
use nalgebra::DMatrix;
use regomax::dense::{column_sums, dense_pagerank};
use regomax::fixtures::{bandwidth_suite, random_graph, random_selection, toy_network};
use regomax::oracle::{dense_google, reduce_oracle};
use regomax::sensitivity::CellFlag;
use regomax::{
    bandwidth, bandwidth_order, build_network, compute_reduced, cuthill_mckee, pagerank, reduce, sensitivity_matrix,
    top_per_group, Component, DirectedGraph, GoogleOperator, Method, Mode, NetworkParams, NodeSelection, ReduceOptions,
    SelectedNode, SensitivityOptions,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Fixture {
    graph: DirectedGraph,
    selection: NodeSelection,
}

/// 25 graphs over N ∈ {30, 100, 500}, mean degree 5, N_r ∈ {3, 10, 25}.
fn fixtures() -> Vec<Fixture> {
    (0..25u64)
        .map(|k| {
            let n = [30, 100, 500][k as usize % 3];
            let nr = [3, 10, 25][(k as usize / 3) % 3];
            let graph = random_graph(n, 5.0, 1000 + k);
            let selection = NodeSelection::from_nodes(&random_selection(n, nr, 2000 + k), n).unwrap();
            Fixture { graph, selection }
        })
        .collect()
}

fn closure() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (k, f) in fixtures().iter().enumerate() {
        let r = reduce(&f.graph, 0.85, &f.selection, &ReduceOptions::default()).map_err(|e| e.to_string())?;
        let oracle = reduce_oracle(&f.graph, 0.85, &f.selection).map_err(|e| e.to_string())?;
        let err = (&r.grr + &r.gpr + &r.gqr - oracle).abs().max();
        ensure(err < 1e-10, || format!("fixture {k}: {err:e}"))?;
        worst = worst.max(err);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "max error {worst:.2e} over 25 fixtures in {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn rank_restriction() -> Outcome {
    let mut worst = 0.0f64;
    for (k, f) in fixtures().iter().enumerate() {
        let r = reduce(&f.graph, 0.85, &f.selection, &ReduceOptions::default()).map_err(|e| e.to_string())?;
        let local = dense_pagerank(&r.gr, 1e-15, 100_000).map_err(|e| e.to_string())?;
        let op = GoogleOperator::new(&f.graph, 0.85).map_err(|e| e.to_string())?;
        let global = pagerank(&op, 1e-14, 10_000).map_err(|e| e.to_string())?;
        let restricted: Vec<f64> = f.selection.nodes().iter().map(|&v| global.probability(v)).collect();
        let total: f64 = restricted.iter().sum();
        for (a, b) in local.iter().zip(&restricted) {
            let dev = (a - b / total).abs() / (b / total);
            ensure(dev < 1e-8, || format!("fixture {k}: relative deviation {dev:e}"))?;
            worst = worst.max(dev);
        }
    }
    Ok(format!("max relative deviation {worst:.2e}"))
}

fn stochasticity() -> Outcome {
    let mut cases: Vec<Fixture> = fixtures();
    cases.push(Fixture {
        graph: DirectedGraph::from_edges(10, []).unwrap(),
        selection: NodeSelection::from_nodes(&[2, 5, 7], 10).unwrap(),
    });
    cases.push(Fixture {
        graph: DirectedGraph::from_edges(1, []).unwrap(),
        selection: NodeSelection::from_nodes(&[0], 1).unwrap(),
    });
    let mut worst = 0.0f64;
    for (k, f) in cases.iter().enumerate() {
        let op = GoogleOperator::new(&f.graph, 0.85).map_err(|e| e.to_string())?;
        let n = f.graph.node_count();
        let mut sums = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            sums.push(op.apply(&e).map_err(|e| e.to_string())?.iter().sum::<f64>());
        }
        let r = reduce(&f.graph, 0.85, &f.selection, &ReduceOptions::default()).map_err(|e| e.to_string())?;
        sums.extend(column_sums(&r.gr));
        sums.extend(column_sums(&dense_google(&f.graph, 0.85).map_err(|e| e.to_string())?));
        for s in sums {
            let dev = (s - 1.0).abs();
            ensure(dev <= 1e-10, || format!("case {k}: column sum {s}"))?;
            worst = worst.max(dev);
        }
    }
    Ok(format!(
        "{} cases incl. all-dangling and single-node, max |sum-1| {worst:.2e}",
        cases.len()
    ))
}

fn damping_floor() -> Outcome {
    let toy = toy_network(800, 2);
    let r = reduce(&toy.graph, 0.85, &toy.selection, &ReduceOptions::default()).map_err(|e| e.to_string())?;
    let floor = (1.0 - 0.85) / 800.0;
    let nodes = toy.selection.nodes();
    let mut checked = 0;
    for (j, &vj) in nodes.iter().enumerate() {
        if toy.graph.is_dangling(vj) {
            continue;
        }
        for (i, &vi) in nodes.iter().enumerate() {
            if !toy.graph.has_edge(vj, vi) {
                let x = r.grr[(i, j)];
                ensure((x - floor).abs() <= 1e-15 * floor, || {
                    format!("G_rr({i},{j}) = {x:e}, floor {floor:e}")
                })?;
                checked += 1;
            }
        }
    }
    ensure(checked > 0, || "no unlinked pair".into())?;
    Ok(format!("{checked} unlinked pairs at (1-alpha)/N = {floor:e}"))
}

fn sensitivity() -> Outcome {
    let mut matrices: Vec<DMatrix<f64>> = Vec::new();
    let toy = toy_network(1000, 5);
    matrices.push(
        reduce(&toy.graph, 0.85, &toy.selection, &ReduceOptions::default())
            .map_err(|e| e.to_string())?
            .gr,
    );
    for seed in 0..3 {
        let g = random_graph(300, 5.0, seed);
        let sel = NodeSelection::from_nodes(&random_selection(300, 12, seed), 300).unwrap();
        matrices.push(
            reduce(&g, 0.85, &sel, &ReduceOptions::default())
                .map_err(|e| e.to_string())?
                .gr,
        );
    }
    let (mut cells, mut worst) = (0, 0.0f64);
    for (k, m) in matrices.iter().enumerate() {
        let n = m.nrows();
        let all: Vec<usize> = (0..n).collect();
        let run = |delta: f64| {
            let opts = SensitivityOptions {
                delta,
                method: Method::Central,
                ..Default::default()
            };
            sensitivity_matrix(m, &all, &all, opts).map_err(|e| e.to_string())
        };
        let (a, b) = (run(1e-3)?, run(5e-4)?);
        let nonnegative = m.min() >= 0.0;
        for x in a.rows.iter().filter(|r| r.flag == CellFlag::Ok) {
            let y = b
                .rows
                .iter()
                .find(|y| (y.source, y.target) == (x.source, x.target))
                .unwrap();
            let diff = (x.d - y.d).abs();
            ensure(diff <= 1e-3 * x.d.abs() + 1e-9, || {
                format!("matrix {k}: {} vs {}", x.d, y.d)
            })?;
            if nonnegative {
                ensure(x.d >= -1e-9, || format!("matrix {k}: D = {}", x.d))?;
            }
            worst = worst.max(diff / (1e-3 * x.d.abs() + 1e-9));
            cells += 1;
        }
    }
    Ok(format!(
        "{cells} cells, worst difference {worst:.2e} of the allowed bound"
    ))
}

fn batch_thread_invariance() -> Outcome {
    let g = regomax::fixtures::community_graph(3000, 10, 5.0, 0.8, 5);
    let sel = NodeSelection::from_nodes(&random_selection(3000, 23, 6), 3000).unwrap();
    let op = GoogleOperator::new(&g, 0.85).map_err(|e| e.to_string())?;
    let run = |batch: usize, threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let opts = ReduceOptions {
            batch_size: batch,
            ..Default::default()
        };
        pool.install(|| compute_reduced(&op, &sel, &opts))
            .map_err(|e| e.to_string())
    };
    let base = run(1, 1)?;
    let mut worst = 0.0f64;
    for batch in [1, 8, 20] {
        for threads in [1, 4] {
            let other = run(batch, threads)?;
            for c in [Component::Grr, Component::Gpr, Component::Gqr, Component::Gr] {
                let d = (base.matrix(c) - other.matrix(c)).abs().max();
                ensure(d <= 1e-12, || format!("batch {batch}, threads {threads}, {c}: {d:e}"))?;
                worst = worst.max(d);
            }
        }
    }
    Ok(format!("6 configurations, max deviation {worst:.2e}"))
}

fn duality() -> Outcome {
    for seed in 0..10u64 {
        let n = 300;
        let g = random_graph(n, 5.0, 500 + seed);
        let nodes = random_selection(n, 15 + seed as usize, 600 + seed);
        let entries = nodes
            .iter()
            .enumerate()
            .map(|(i, &v)| SelectedNode {
                node: v,
                label: format!("v{v}"),
                category: if i % 3 == 0 { "country" } else { "bank" }.into(),
                group: if i % 3 == 0 { 0 } else { 1 + (i % 5) as i64 },
                external_rank: None,
                code: None,
            })
            .collect();
        let sel = NodeSelection::new(entries, n).map_err(|e| e.to_string())?;
        let r = reduce(&g, 0.85, &sel, &ReduceOptions::default()).map_err(|e| e.to_string())?;
        let priority = dense_pagerank(&r.gr, 1e-14, 100_000).map_err(|e| e.to_string())?;
        let seeds = top_per_group(&sel, "bank", &priority);
        let params = |mode| NetworkParams {
            mode,
            ..Default::default()
        };
        let f = build_network(&r.gr, &sel, &seeds, &params(Mode::Friends), &priority).map_err(|e| e.to_string())?;
        let t = build_network(&r.gr.transpose(), &sel, &seeds, &params(Mode::Followers), &priority)
            .map_err(|e| e.to_string())?;
        ensure(f.same_structure(&t), || format!("matrix {seed} differs"))?;
        ensure(!f.edges.is_empty(), || format!("matrix {seed} has no edges"))?;
    }
    Ok("10 reduced matrices, identical nodes and edges".into())
}

fn cmk() -> Outcome {
    let mut path: Vec<u32> = (0..500).rev().collect();
    path.rotate_left(137);
    let g = DirectedGraph::from_edges(500, path.windows(2).map(|w| (w[0], w[1]))).unwrap();
    let bw = bandwidth(&g, Some(&cuthill_mckee(&g)));
    ensure(bw == 1, || format!("path bandwidth {bw}"))?;
    let suite = bandwidth_suite();
    let mut report = Vec::new();
    for (k, g) in suite.iter().enumerate() {
        let before = bandwidth(g, None);
        let plain = bandwidth(g, Some(&cuthill_mckee(g)));
        let guarded = bandwidth(g, Some(&bandwidth_order(g)));
        ensure(plain <= before && guarded <= before, || {
            format!("graph {k}: {before} -> {plain}")
        })?;
        report.push(before as f64 / plain.max(1) as f64);
    }
    let mean = report.iter().sum::<f64>() / report.len() as f64;
    Ok(format!(
        "path bandwidth 1, {} graphs never widened, mean shrink {mean:.1}x",
        suite.len()
    ))
}

fn full_scale_artifacts() -> Outcome {
    let path = data("banks_countries.csv");
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(&path)
        .map_err(|e| e.to_string())?;
    let rows: Vec<csv::StringRecord> = rdr.records().collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let banks: Vec<&csv::StringRecord> = rows.iter().filter(|r| &r[1] == "bank").collect();
    let countries = rows.iter().filter(|r| &r[1] == "country").count();
    ensure(banks.len() == 60 && countries == 195, || {
        format!("{} banks, {countries} countries", banks.len())
    })?;
    ensure(&banks[0][0] == "Goldman Sachs" && &banks[0][2] == "1", || {
        "first bank is not Goldman Sachs".into()
    })?;
    let mut assets: Vec<usize> = banks.iter().map(|r| r[3].parse().unwrap()).collect();
    assets.sort_unstable();
    ensure(assets == (1..=60).collect::<Vec<_>>(), || {
        "asset ranks are not 1..60".into()
    })?;
    let makefile = std::fs::read_to_string(data("../Makefile")).map_err(|e| e.to_string())?;
    ensure(makefile.lines().any(|l| l.starts_with("paper-run:")), || {
        "no paper-run target".into()
    })?;

    let Ok(dir) = std::env::var("REGOMAX_DUMP_DIR") else {
        return Ok("selection file (60 banks, 195 countries) and make paper-run present; full-dump run skipped, REGOMAX_DUMP_DIR unset".into());
    };
    full_run(Path::new(&dir))
}

/// Checks against the published figures when the article network is supplied.
fn full_run(dir: &Path) -> Outcome {
    let out = tempfile::tempdir().map_err(|e| e.to_string())?;
    let sel = data("banks_countries.csv").display().to_string();
    let edges = dir.join("edges.txt").display().to_string();
    let labels = dir.join("labels.tsv").display().to_string();
    let base = ["--edges", &edges, "--labels", &labels, "--selection", &sel];
    run_ok(out.path(), &[&["rank"][..], &base, &["--category", "bank"]].concat());
    let plane = csv_rows(&out.path().join("rankplane.csv"));
    let top = plane.iter().find(|r| r[2] == "1").ok_or("no K_b = 1 row")?;
    ensure(top[0] == "Goldman Sachs", || format!("K_b = 1 is {}", top[0]))?;

    run_ok(
        out.path(),
        &[&["reduce"][..], &base, &["--sector", "bank,bank"]].concat(),
    );
    let weights = csv_rows(&out.path().join("sector_weights.csv"));
    let pick = |r: &str, c: &str| weights.iter().find(|w| w[0] == r && w[1] == c).cloned();
    let total = csv_rows(&out.path().join("weights.csv"));
    let w = |name: &str| -> f64 { total.iter().find(|r| r[0] == name).unwrap()[1].parse().unwrap() };
    for (name, expected) in [("Gpr", 0.8912), ("Grr", 0.0402), ("Gqr", 0.06859), ("Gqrnd", 0.04417)] {
        ensure((w(name) - expected).abs() < 5e-4, || {
            format!("W_{name} = {} vs {expected}", w(name))
        })?;
    }
    let bb = pick("bank", "bank").ok_or("no bank,bank sector")?;
    let gr: f64 = bb[2].parse().unwrap();
    ensure((gr - 0.0800).abs() < 5e-4, || format!("bank sector W_R = {gr}"))?;
    Ok("full-dump run matches K_b = 1 and component weights".into())
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let files = pipeline(a.path());
    pipeline(b.path());
    for f in &files {
        ensure(comparable(a.path(), f) == comparable(b.path(), f), || {
            format!("{f} differs")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} files identical over two runs of 5 subcommands in {:.1} s",
        files.len(),
        elapsed.as_secs_f64()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("decomposition closure", closure),
        ("rank restriction", rank_restriction),
        ("column stochasticity", stochasticity),
        ("damping floor", damping_floor),
        ("sensitivity consistency", sensitivity),
        ("batch/thread invariance", batch_thread_invariance),
        ("friend/follower duality", duality),
        ("Cuthill-McKee bandwidth", cmk),
        ("full-scale artifacts", full_scale_artifacts),
        ("end-to-end determinism", determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1)
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
