use std::collections::{HashMap, HashSet};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regomax::dense::dense_pagerank;
use regomax::fixtures::toy_network;
use regomax::netview::NetEdge;
use regomax::{
    build_network, export_dot, reduce, top_per_group, Mode, NetworkParams, NodeSelection, ReduceOptions, SelectedNode,
};

/// Random column-stochastic matrix over a selection of banks and countries.
fn random_case(seed: u64) -> (DMatrix<f64>, NodeSelection) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(8..40);
    let mut m = DMatrix::from_fn(n, n, |_, _| rng.gen::<f64>().powi(4));
    for j in 0..n {
        let s = m.column(j).sum();
        m.column_mut(j).iter_mut().for_each(|x| *x /= s);
    }
    let entries = (0..n)
        .map(|i| {
            let bank = rng.gen_bool(0.4);
            SelectedNode {
                node: i,
                label: format!("n{i}"),
                category: if bank { "bank" } else { "country" }.into(),
                group: if bank { rng.gen_range(1..=5) } else { 0 },
                external_rank: None,
                code: None,
            }
        })
        .collect();
    (m, NodeSelection::new(entries, n).unwrap())
}

fn params(mode: Mode) -> NetworkParams {
    NetworkParams {
        mode,
        ..Default::default()
    }
}

#[test]
fn friends_of_r_are_followers_of_its_transpose() {
    for seed in 0..10 {
        let (m, sel) = random_case(seed);
        let priority = dense_pagerank(&m, 1e-14, 100_000).unwrap();
        let seeds = top_per_group(&sel, "bank", &priority);
        let friends = build_network(&m, &sel, &seeds, &params(Mode::Friends), &priority).unwrap();
        let followers = build_network(&m.transpose(), &sel, &seeds, &params(Mode::Followers), &priority).unwrap();
        assert!(friends.same_structure(&followers), "seed {seed}");
        assert!(!friends.edges.is_empty());
    }
}

/// Brute-force top-k of one matrix line.
fn brute_top(m: &DMatrix<f64>, sel: &NodeSelection, anchor: usize, cat: &str, k: usize) -> Vec<usize> {
    let mut c: Vec<usize> = sel.positions_in(cat).into_iter().filter(|&p| p != anchor).collect();
    c.sort_by(|&a, &b| m[(b, anchor)].partial_cmp(&m[(a, anchor)]).unwrap().then(a.cmp(&b)));
    c.truncate(k);
    c
}

#[test]
fn level_one_friends_match_a_brute_force_scan() {
    for seed in 10..20 {
        let (m, sel) = random_case(seed);
        let banks = sel.positions_in("bank");
        let Some(&seed_node) = banks.first() else { continue };
        let p = NetworkParams {
            max_level: 1,
            ..Default::default()
        };
        let net = build_network(&m, &sel, &[seed_node], &p, &vec![1.0; sel.len()]).unwrap();
        let mut expected = brute_top(&m, &sel, seed_node, "bank", 4);
        expected.extend(brute_top(&m, &sel, seed_node, "country", 2));
        let got: Vec<usize> = net.nodes_at(1).map(|n| n.position).collect();
        assert_eq!(got, expected);
        for e in &net.edges {
            assert_eq!(e.weight, m[(e.partner, e.anchor)]);
        }
    }
}

#[test]
fn structural_invariants() {
    for seed in 20..40 {
        let (m, sel) = random_case(seed);
        let priority = dense_pagerank(&m, 1e-14, 100_000).unwrap();
        let seeds = top_per_group(&sel, "bank", &priority);
        for mode in [Mode::Friends, Mode::Followers] {
            let net = build_network(&m, &sel, &seeds, &params(mode), &priority).unwrap();
            let level: HashMap<usize, usize> = net.nodes.iter().map(|n| (n.position, n.level)).collect();
            assert_eq!(level.len(), net.nodes.len(), "duplicate node");
            let level0: HashSet<usize> = net.nodes_at(0).map(|n| n.position).collect();
            assert_eq!(level0, seeds.iter().copied().collect());

            let mut added: HashMap<usize, usize> = HashMap::new();
            for n in &net.nodes {
                if n.level > 0 {
                    let parent = net
                        .edges
                        .iter()
                        .find(|e| e.partner == n.position && e.level + 1 == n.level)
                        .expect("every new node has an edge from the previous level");
                    *added.entry(parent.anchor).or_default() += 1;
                    assert!(n.attached_to.is_some());
                }
            }
            for count in added.values() {
                assert!(*count <= 6);
            }
            for e in &net.edges {
                assert_eq!(sel.get(e.anchor).category, "bank", "countries are never expanded");
                assert_eq!(level[&e.anchor], e.level);
                assert!(level[&e.partner] <= e.level + 1);
            }
        }
    }
}

#[test]
fn rediscovered_nodes_only_gain_edges() {
    let (m, sel) = random_case(3);
    let priority = dense_pagerank(&m, 1e-14, 100_000).unwrap();
    let seeds = top_per_group(&sel, "bank", &priority);
    let deep = NetworkParams {
        max_level: 6,
        ..Default::default()
    };
    let net = build_network(&m, &sel, &seeds, &deep, &priority).unwrap();
    let shallow = build_network(&m, &sel, &seeds, &params(Mode::Friends), &priority).unwrap();
    for n in &shallow.nodes {
        assert_eq!(net.node(n.position).unwrap().level, n.level);
    }
    let mut seen = HashSet::new();
    for e in &net.edges {
        assert!(seen.insert((e.anchor, e.partner)), "edge {e:?} recorded twice");
    }
}

#[test]
fn demo_network_seeds_are_group_leaders() {
    let toy = toy_network(1200, 6);
    let r = reduce(&toy.graph, 0.85, &toy.selection, &ReduceOptions::default()).unwrap();
    let priority = dense_pagerank(&r.gr, 1e-14, 100_000).unwrap();
    let seeds = top_per_group(&toy.selection, "bank", &priority);
    assert_eq!(seeds.len(), 3);
    for &s in &seeds {
        let g = toy.selection.get(s).group;
        for p in toy.selection.positions_in("bank") {
            if toy.selection.get(p).group == g {
                assert!(priority[p] <= priority[s]);
            }
        }
    }
}

type Parsed = (Vec<String>, Vec<(String, String)>);

/// Minimal DOT reader: returns node ids and edge pairs, rejecting anything
/// outside the subset `export_dot` is meant to emit.
fn parse_dot(text: &str) -> Result<Parsed, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty")?;
    let name = header
        .strip_prefix("digraph ")
        .and_then(|s| s.strip_suffix(" {"))
        .ok_or("bad header")?;
    if !is_id(name) {
        return Err(format!("bad graph id {name}"));
    }
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut closed = false;
    for line in lines {
        if closed {
            return Err("content after closing brace".into());
        }
        if line == "}" {
            closed = true;
            continue;
        }
        let stmt = line
            .trim()
            .strip_suffix(';')
            .ok_or(format!("missing semicolon: {line}"))?;
        let (head, attrs) = match stmt.split_once(" [") {
            Some((h, a)) => (h, Some(a.strip_suffix(']').ok_or("unclosed attribute list")?)),
            None => (stmt, None),
        };
        if let Some(attrs) = attrs {
            check_attrs(attrs)?;
        }
        if let Some((a, b)) = head.split_once(" -> ") {
            if !is_id(a) || !is_id(b) {
                return Err(format!("bad edge {head}"));
            }
            edges.push((a.to_string(), b.to_string()));
        } else if head == "node" || head == "edge" || head == "graph" {
            continue;
        } else if is_id(head) {
            nodes.push(head.to_string());
        } else {
            return Err(format!("bad statement {stmt}"));
        }
    }
    if !closed {
        return Err("missing closing brace".into());
    }
    for (a, b) in &edges {
        if !nodes.contains(a) || !nodes.contains(b) {
            return Err(format!("edge {a} -> {b} references an undeclared node"));
        }
    }
    Ok((nodes, edges))
}

fn is_id(s: &str) -> bool {
    let alpha = !s.is_empty()
        && !s.starts_with(|c: char| c.is_ascii_digit())
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    let numeral = s.parse::<f64>().is_ok() && s.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '-');
    let quoted = s.len() >= 2 && s.starts_with('"') && s.ends_with('"') && {
        let inner = &s[1..s.len() - 1];
        let mut escaped = false;
        inner.chars().all(|c| {
            let ok = escaped || c != '"';
            escaped = !escaped && c == '\\';
            ok
        }) && !escaped
    };
    alpha || numeral || quoted
}

fn check_attrs(attrs: &str) -> Result<(), String> {
    let mut rest = attrs;
    while !rest.is_empty() {
        let (key, after) = rest.split_once('=').ok_or(format!("attribute without value: {rest}"))?;
        if !is_id(key.trim()) {
            return Err(format!("bad attribute name {key}"));
        }
        let after = after.trim_start();
        let end = if let Some(stripped) = after.strip_prefix('"') {
            let mut escaped = false;
            let close = stripped
                .char_indices()
                .find(|&(_, c)| {
                    let hit = !escaped && c == '"';
                    escaped = !escaped && c == '\\';
                    hit
                })
                .ok_or("unterminated string")?
                .0;
            close + 2
        } else {
            after.find(',').unwrap_or(after.len())
        };
        if !is_id(after[..end].trim()) {
            return Err(format!("bad attribute value {}", &after[..end]));
        }
        rest = after[end..].trim_start().trim_start_matches(',').trim_start();
    }
    Ok(())
}

#[test]
fn dot_output_is_well_formed_and_deterministic() {
    let (m, sel) = random_case(7);
    let priority = dense_pagerank(&m, 1e-14, 100_000).unwrap();
    let seeds = top_per_group(&sel, "bank", &priority);
    for mode in [Mode::Friends, Mode::Followers] {
        let net = build_network(&m, &sel, &seeds, &params(mode), &priority).unwrap();
        let dot = export_dot(&net, "country");
        let (nodes, edges) = parse_dot(&dot).unwrap();
        assert_eq!(nodes.len(), net.nodes.len());
        assert_eq!(edges.len(), net.edges.len());
        let again = build_network(&m, &sel, &seeds, &params(mode), &priority).unwrap();
        assert_eq!(export_dot(&again, "country"), dot);
        let json: serde_json::Value = serde_json::from_str(&net.to_json().unwrap()).unwrap();
        assert_eq!(json["schema_version"], 1);
        assert_eq!(json["nodes"].as_array().unwrap().len(), net.nodes.len());
    }
}

#[test]
fn dot_special_cases() {
    let empty = regomax::InfluenceNetwork {
        schema_version: 1,
        mode: Mode::Friends,
        nodes: vec![],
        edges: vec![],
    };
    assert_eq!(parse_dot(&export_dot(&empty, "country")).unwrap(), (vec![], vec![]));

    let entries = vec![
        SelectedNode {
            node: 0,
            label: "Bank \"A\"".into(),
            category: "bank".into(),
            group: 1,
            external_rank: None,
            code: None,
        },
        SelectedNode {
            node: 1,
            label: "Country\\B".into(),
            category: "country".into(),
            group: 0,
            external_rank: None,
            code: None,
        },
    ];
    let sel = NodeSelection::new(entries, 2).unwrap();
    let m = DMatrix::from_row_slice(2, 2, &[0.25, 0.5, 0.75, 0.5]);
    let p = NetworkParams {
        max_level: 1,
        ..Default::default()
    };
    let net = build_network(&m, &sel, &[0], &p, &[0.5, 0.5]).unwrap();
    assert_eq!(
        net.edges,
        vec![NetEdge {
            anchor: 0,
            partner: 1,
            level: 0,
            weight: 0.75
        }]
    );
    let (nodes, edges) = parse_dot(&export_dot(&net, "country")).unwrap();
    assert_eq!((nodes.len(), edges.len()), (2, 1));
    assert!(parse_dot("digraph x {\n  a -> b;\n}\n").is_err());
    assert!(parse_dot("digraph x {\n  a [label=\"open];\n}\n").is_err());
}
