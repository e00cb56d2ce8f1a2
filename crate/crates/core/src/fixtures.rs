//! Seeded synthetic networks for tests, benchmarks and the bundled demo data.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{DirectedGraph, LabelTable};
use crate::selection::{NodeSelection, SelectedNode};

/// Random directed graph with roughly `mean_degree` out-links per node.
/// About one node in ten is dangling; targets are uniform, self-loops allowed.
pub fn random_graph(n: usize, mean_degree: f64, seed: u64) -> DirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_degree = ((2.0 * mean_degree / 0.9).round() as usize).max(1);
    let mut edges = Vec::new();
    for src in 0..n {
        if rng.gen_bool(0.1) {
            continue;
        }
        let k = rng.gen_range(1..=max_degree);
        for _ in 0..k {
            edges.push((src as u32, rng.gen_range(0..n) as u32));
        }
    }
    DirectedGraph::from_edges(n, edges).expect("ids are in range")
}

/// Random directed graph with a heavy-tailed in-degree distribution: link
/// targets are drawn with density decaying like a power of the popularity
/// rank, and popularity ranks are shuffled over node ids.
pub fn scale_free_graph(n: usize, mean_degree: f64, seed: u64) -> DirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut popularity: Vec<u32> = (0..n as u32).collect();
    popularity.shuffle(&mut rng);
    let max_degree = ((2.0 * mean_degree / 0.9).round() as usize).max(1);
    let mut edges = Vec::new();
    for src in 0..n {
        if rng.gen_bool(0.1) {
            continue;
        }
        for _ in 0..rng.gen_range(1..=max_degree) {
            let u: f64 = rng.gen();
            let k = ((n as f64 * u.powi(3)) as usize).min(n - 1);
            edges.push((src as u32, popularity[k]));
        }
    }
    DirectedGraph::from_edges(n, edges).expect("ids are in range")
}

/// `count` distinct nodes of `0..n`, in random order.
pub fn random_selection(n: usize, count: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes: Vec<usize> = (0..n).collect();
    nodes.shuffle(&mut rng);
    nodes.truncate(count);
    nodes
}

/// Directed graph whose nodes are split round-robin into `communities`
/// blocks; each link stays inside its source's block with probability `p_in`.
pub fn community_graph(n: usize, communities: usize, mean_degree: f64, p_in: f64, seed: u64) -> DirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let communities = communities.max(1);
    let max_degree = ((2.0 * mean_degree / 0.9).round() as usize).max(1);
    let mut edges = Vec::new();
    for src in 0..n {
        if rng.gen_bool(0.1) {
            continue;
        }
        for _ in 0..rng.gen_range(1..=max_degree) {
            let dst = if rng.gen_bool(p_in) {
                let block = src % communities;
                let size = (n - block).div_ceil(communities);
                block + communities * rng.gen_range(0..size)
            } else {
                rng.gen_range(0..n)
            };
            edges.push((src as u32, dst as u32));
        }
    }
    DirectedGraph::from_edges(n, edges).expect("ids are in range")
}

/// `w × h` lattice with links to the right and downward neighbors, node ids
/// shuffled.
pub fn shuffled_grid(w: usize, h: usize, seed: u64) -> DirectedGraph {
    let mut ids: Vec<u32> = (0..(w * h) as u32).collect();
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = ids[y * w + x];
            if x + 1 < w {
                edges.push((v, ids[y * w + x + 1]));
            }
            if y + 1 < h {
                edges.push((v, ids[(y + 1) * w + x]));
            }
        }
    }
    DirectedGraph::from_edges(w * h, edges).expect("ids are in range")
}

/// Twenty seeded graphs of mixed structure for ordering checks.
pub fn bandwidth_suite() -> Vec<DirectedGraph> {
    let mut out = Vec::new();
    for s in 0..5 {
        out.push(random_graph(200 + 100 * s as usize, 3.0, 40 + s));
        out.push(community_graph(1000, 5 + s as usize, 4.0, 0.95, 50 + s));
        out.push(scale_free_graph(500, 4.0, 60 + s));
    }
    for s in 0..3 {
        out.push(shuffled_grid(10 + 5 * s as usize, 12, 70 + s));
    }
    let mut path: Vec<u32> = (0..300).collect();
    path.shuffle(&mut ChaCha8Rng::seed_from_u64(80));
    out.push(DirectedGraph::from_edges(300, path.windows(2).map(|w| (w[0], w[1]))).expect("ids are in range"));
    out.push(DirectedGraph::from_edges(300, (0..299).map(|v| (v, v + 1))).expect("ids are in range"));
    out
}

/// A small article network with banks and countries embedded in it.
pub struct ToyNetwork {
    pub graph: DirectedGraph,
    pub labels: Vec<(usize, String)>,
    pub selection: NodeSelection,
}

pub const TOY_BANKS: usize = 12;
pub const TOY_COUNTRIES: usize = 20;
const TOY_REGIONS: usize = 3;

/// Bank `k` is cited with weight `1 / (k + 1)`, so prominence falls off with
/// the bank index as it does for real institutions.
fn zipf_bank(rng: &mut ChaCha8Rng) -> usize {
    let total: f64 = (1..=TOY_BANKS).map(|k| 1.0 / k as f64).sum();
    let mut u = rng.gen::<f64>() * total;
    for k in 0..TOY_BANKS {
        u -= 1.0 / (k + 1) as f64;
        if u <= 0.0 {
            return k;
        }
    }
    TOY_BANKS - 1
}

/// Builds the demo network of `n` nodes. The first [`TOY_BANKS`] nodes are
/// banks in three groups, the next [`TOY_COUNTRIES`] are countries, the rest
/// are generic articles. Every node belongs to one of three regions and most
/// links stay inside the region; banks cite their home country and a few
/// regional peers, and articles cite countries more often than other pages.
pub fn toy_network(n: usize, seed: u64) -> ToyNetwork {
    assert!(n >= TOY_BANKS + TOY_COUNTRIES + 10 * TOY_REGIONS);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first_article = TOY_BANKS + TOY_COUNTRIES;
    let region = |v: usize| -> usize {
        if v < TOY_BANKS {
            v % TOY_REGIONS
        } else if v < first_article {
            (v - TOY_BANKS) % TOY_REGIONS
        } else {
            (v - first_article) % TOY_REGIONS
        }
    };
    let members: Vec<Vec<usize>> = (0..TOY_REGIONS)
        .map(|r| (0..n).filter(|&v| region(v) == r).collect())
        .collect();
    let of_kind = |r: usize, lo: usize, hi: usize| -> Vec<usize> {
        members[r].iter().copied().filter(|&v| (lo..hi).contains(&v)).collect()
    };
    let banks_in: Vec<Vec<usize>> = (0..TOY_REGIONS).map(|r| of_kind(r, 0, TOY_BANKS)).collect();
    let countries_in: Vec<Vec<usize>> = (0..TOY_REGIONS).map(|r| of_kind(r, TOY_BANKS, first_article)).collect();
    let articles_in: Vec<Vec<usize>> = (0..TOY_REGIONS).map(|r| of_kind(r, first_article, n)).collect();

    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut link = |s: usize, t: usize| edges.push((s as u32, t as u32));
    for v in 0..n {
        let r = region(v);
        let pick_region = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.85) {
                r
            } else {
                rng.gen_range(0..TOY_REGIONS)
            }
        };
        if v < TOY_BANKS {
            link(v, countries_in[r][v / TOY_REGIONS % countries_in[r].len()]);
            for _ in 0..2 {
                let rr = pick_region(&mut rng);
                link(v, *banks_in[rr].choose(&mut rng).unwrap());
            }
            for _ in 0..6 {
                let rr = pick_region(&mut rng);
                link(v, *articles_in[rr].choose(&mut rng).unwrap());
            }
        } else if v < first_article {
            for _ in 0..2 {
                link(v, *countries_in[pick_region(&mut rng)].choose(&mut rng).unwrap());
            }
            for _ in 0..8 {
                link(v, *articles_in[pick_region(&mut rng)].choose(&mut rng).unwrap());
            }
        } else {
            if rng.gen_bool(0.1) {
                continue;
            }
            for _ in 0..rng.gen_range(1..=8) {
                let rr = pick_region(&mut rng);
                let t = match rng.gen_range(0..20) {
                    0 => *countries_in[rr].choose(&mut rng).unwrap(),
                    1 => zipf_bank(&mut rng),
                    _ => *articles_in[rr].choose(&mut rng).unwrap(),
                };
                link(v, t);
            }
        }
    }
    let mut graph = DirectedGraph::from_edges(n, edges).expect("ids are in range");

    let mut labels = Vec::with_capacity(n);
    let mut entries = Vec::new();
    let mut asset_rank: Vec<u64> = (1..=TOY_BANKS as u64).collect();
    asset_rank.shuffle(&mut rng);
    for (b, &rank) in asset_rank.iter().enumerate() {
        let label = format!("Bank {:02}", b + 1);
        labels.push((b, label.clone()));
        entries.push(SelectedNode {
            node: b,
            label,
            category: "bank".into(),
            group: region(b) as i64 + 1,
            external_rank: Some(rank),
            code: None,
        });
    }
    for (k, c) in (TOY_BANKS..first_article).enumerate() {
        let label = format!("Country {:02}", k + 1);
        let code: String = [b'A' + (k / 26) as u8, b'A' + (k % 26) as u8]
            .iter()
            .map(|&ch| ch as char)
            .collect();
        labels.push((c, label.clone()));
        entries.push(SelectedNode {
            node: c,
            label,
            category: "country".into(),
            group: 0,
            external_rank: None,
            code: Some(code),
        });
    }
    for a in first_article..n {
        labels.push((a, format!("Article {a}")));
    }
    graph
        .set_labels(LabelTable::from_entries(labels.clone()))
        .expect("labels are in range");
    let selection = NodeSelection::new(entries, n).expect("selection is valid");
    ToyNetwork {
        graph,
        labels,
        selection,
    }
}
