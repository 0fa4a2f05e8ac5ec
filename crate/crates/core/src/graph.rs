//! Multiplex network data model, file ingestion, splits, negative sampling
//! and a synthetic two-layer generator for desk-scale experiments.
//!
//! File formats:
//! - edge list: one undirected edge per line, two whitespace-separated
//!   non-negative integers; lines starting with '#' are ignored
//! - anchor file: same shape, column 1 = source id, column 2 = target id
//! - feature file: first line "N d", then N rows of d reals

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::Mat;
use crate::{Error, Result};

/// One layer of the multiplex: an undirected simple graph with optional
/// node features. Node ids are dense in [0, N).
#[derive(Debug, Clone)]
pub struct Layer {
    name: String,
    node_count: usize,
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<u32>>,
    features: Option<Mat>,
}

/// Counts of rejected lines reported by [`load_edge_list`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub self_loops: usize,
    pub duplicates: usize,
}

impl Layer {
    /// Builds a layer from raw edges; canonicalizes (min, max), sorts,
    /// rejects self-loops and out-of-range ids, deduplicates.
    pub fn from_edges(name: &str, node_count: usize, raw: &[(u32, u32)]) -> Result<Layer> {
        let mut set = BTreeSet::new();
        for &(a, b) in raw {
            if a == b {
                return Err(Error::Input(format!("self-loop on node {a}")));
            }
            if a as usize >= node_count || b as usize >= node_count {
                return Err(Error::Input(format!(
                    "edge ({a}, {b}) out of range for {node_count} nodes"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let edges: Vec<(u32, u32)> = set.into_iter().collect();
        let adj = build_adj(node_count, &edges);
        Ok(Layer { name: name.to_string(), node_count, edges, adj, features: None })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonicalized (min, max) edges in sorted order.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, u: u32) -> &[u32] {
        &self.adj[u as usize]
    }

    pub fn degree(&self, u: u32) -> usize {
        self.adj[u as usize].len()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn features(&self) -> Option<&Mat> {
        self.features.as_ref()
    }

    pub fn set_features(&mut self, feats: Mat) -> Result<()> {
        if feats.rows() != self.node_count {
            return Err(Error::Input(format!(
                "feature matrix has {} rows for {} nodes",
                feats.rows(),
                self.node_count
            )));
        }
        self.features = Some(feats);
        Ok(())
    }

    /// Node features, falling back to seeded random unit-norm vectors of
    /// dimension `dim` when the layer carries none.
    pub fn features_or_random(&self, dim: usize, seed: u64) -> Mat {
        if let Some(f) = &self.features {
            return f.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Mat::zeros(self.node_count, dim);
        for r in 0..self.node_count {
            let mut row: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let n = crate::linalg::norm(&row);
            if n > 0.0 {
                for v in row.iter_mut() {
                    *v /= n;
                }
            } else {
                row[r % dim] = 1.0;
            }
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, *v);
            }
        }
        m
    }

    /// Hop distances from `start` via breadth-first search; `None` marks
    /// unreachable nodes.
    pub fn bfs_distances(&self, start: u32) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.node_count];
        dist[start as usize] = Some(0);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize].unwrap();
            for &v in self.neighbors(u) {
                if dist[v as usize].is_none() {
                    dist[v as usize] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Connected components as sorted node lists, largest first (ties by
    /// smallest contained id).
    pub fn components(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.node_count];
        let mut comps = Vec::new();
        for s in 0..self.node_count as u32 {
            if seen[s as usize] {
                continue;
            }
            let mut comp = vec![s];
            seen[s as usize] = true;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        comps
    }

    /// Restriction to a node subset with densified ids (order-preserving).
    pub fn induced_subgraph(&self, nodes: &[u32]) -> Layer {
        let mut index = vec![u32::MAX; self.node_count];
        for (i, &n) in nodes.iter().enumerate() {
            index[n as usize] = i as u32;
        }
        let edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .filter(|(a, b)| index[*a as usize] != u32::MAX && index[*b as usize] != u32::MAX)
            .map(|(a, b)| (index[*a as usize], index[*b as usize]))
            .collect();
        Layer::from_edges(&self.name, nodes.len(), &edges).expect("subgraph edges are valid")
    }
}

fn build_adj(node_count: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); node_count];
    for &(a, b) in edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }
    adj
}

/// Reads an edge list; raw node ids are densified (sorted ascending).
pub fn load_edge_list(path: &Path) -> Result<(Layer, LoadReport)> {
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut raw_edges: Vec<(u64, u64)> = Vec::new();
    let mut report = LoadReport::default();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<u64> {
            tok.ok_or_else(|| Error::Parse {
                line: lineno + 1,
                msg: "expected two node ids".into(),
            })?
            .parse::<u64>()
            .map_err(|e| Error::Parse { line: lineno + 1, msg: format!("bad node id: {e}") })
        };
        let a = parse(it.next())?;
        let b = parse(it.next())?;
        if it.next().is_some() {
            return Err(Error::Parse { line: lineno + 1, msg: "trailing tokens".into() });
        }
        if a == b {
            report.self_loops += 1;
            continue;
        }
        raw_edges.push((a.min(b), a.max(b)));
    }
    // Densify ids.
    let mut ids: Vec<u64> = raw_edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    ids.sort_unstable();
    ids.dedup();
    let dense = |id: u64| ids.binary_search(&id).unwrap() as u32;
    let mut edges: Vec<(u32, u32)> = raw_edges.iter().map(|&(a, b)| (dense(a), dense(b))).collect();
    let before = edges.len();
    edges.sort_unstable();
    edges.dedup();
    report.duplicates = before - edges.len();
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let layer = Layer::from_edges(&name, ids.len(), &edges)?;
    Ok((layer, report))
}

pub fn save_edge_list(layer: &Layer, path: &Path) -> Result<()> {
    let mut out = String::new();
    for &(a, b) in layer.edges() {
        writeln!(out, "{a} {b}").expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn save_edges(edges: &[(u32, u32)], path: &Path) -> Result<()> {
    let mut out = String::new();
    for &(a, b) in edges {
        writeln!(out, "{a} {b}").expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn load_pairs(path: &Path) -> Result<Vec<(u32, u32)>> {
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut pairs = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<u32> {
            tok.ok_or_else(|| Error::Parse {
                line: lineno + 1,
                msg: "expected two node ids".into(),
            })?
            .parse::<u32>()
            .map_err(|e| Error::Parse { line: lineno + 1, msg: format!("bad node id: {e}") })
        };
        let a = parse(it.next())?;
        let b = parse(it.next())?;
        pairs.push((a, b));
    }
    Ok(pairs)
}

/// Writes a feature matrix ("N d" header then rows of reals).
pub fn save_features(feats: &Mat, path: &Path) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "{} {}", feats.rows(), feats.cols()).expect("string write");
    for r in 0..feats.rows() {
        let row: Vec<String> = (0..feats.cols()).map(|c| format!("{:?}", feats.get(r, c))).collect();
        writeln!(out, "{}", row.join(" ")).expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn load_features(path: &Path) -> Result<Mat> {
    let file = std::fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, msg: "empty feature file".into() })??;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse { line: 1, msg: "bad N in header".into() })?;
    let d: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse { line: 1, msg: "bad d in header".into() })?;
    let mut m = Mat::zeros(n, d);
    let mut row = 0usize;
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if row >= n {
            return Err(Error::Parse { line: lineno + 2, msg: "more rows than header N".into() });
        }
        let vals: Vec<f64> = trimmed
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| Error::Parse { line: lineno + 2, msg: format!("bad real: {e}") })
            })
            .collect::<Result<_>>()?;
        if vals.len() != d {
            return Err(Error::Parse {
                line: lineno + 2,
                msg: format!("expected {d} values, got {}", vals.len()),
            });
        }
        for (c, v) in vals.iter().enumerate() {
            m.set(row, c, *v);
        }
        row += 1;
    }
    if row != n {
        return Err(Error::Parse { line: row + 1, msg: format!("expected {n} rows, got {row}") });
    }
    Ok(m)
}

/// Two layers plus the sparse anchor-pair set aligning them.
#[derive(Debug, Clone)]
pub struct Multiplex {
    pub source: Layer,
    pub target: Layer,
    pub anchors: Vec<(u32, u32)>,
}

impl Multiplex {
    pub fn new(source: Layer, target: Layer, anchors: Vec<(u32, u32)>) -> Result<Multiplex> {
        validate_anchors(&anchors, &source, &target)?;
        Ok(Multiplex { source, target, anchors })
    }
}

fn validate_anchors(anchors: &[(u32, u32)], source: &Layer, target: &Layer) -> Result<()> {
    let mut src_seen = BTreeSet::new();
    let mut tgt_seen = BTreeSet::new();
    for &(s, t) in anchors {
        if s as usize >= source.node_count() {
            return Err(Error::Input(format!("anchor source id {s} out of range")));
        }
        if t as usize >= target.node_count() {
            return Err(Error::Input(format!("anchor target id {t} out of range")));
        }
        if !src_seen.insert(s) {
            return Err(Error::Input(format!("source node {s} appears in multiple anchors")));
        }
        if !tgt_seen.insert(t) {
            return Err(Error::Input(format!("target node {t} appears in multiple anchors")));
        }
    }
    Ok(())
}

/// Reads and validates an anchor-pair file against the two layers.
pub fn load_anchors(path: &Path, source: &Layer, target: &Layer) -> Result<Vec<(u32, u32)>> {
    let pairs = load_pairs(path)?;
    validate_anchors(&pairs, source, target)?;
    Ok(pairs)
}

/// Network overlap η = 2·|anchors| / (N_s + N_t).
pub fn overlap_ratio(mx: &Multiplex) -> f64 {
    let total = mx.source.node_count() + mx.target.node_count();
    if total == 0 {
        return 0.0;
    }
    2.0 * mx.anchors.len() as f64 / total as f64
}

/// Train/val/test fractions for edges and anchors; each triple sums to 1.
#[derive(Debug, Clone, Copy)]
pub struct SplitSpec {
    pub edge_fracs: (f64, f64, f64),
    pub anchor_fracs: (f64, f64, f64),
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(edge_fracs: (f64, f64, f64), anchor_fracs: (f64, f64, f64), seed: u64) -> Result<Self> {
        for (name, f) in [("edge", edge_fracs), ("anchor", anchor_fracs)] {
            if f.0 < 0.0 || f.1 < 0.0 || f.2 < 0.0 {
                return Err(Error::Config(format!("{name} fractions must be non-negative")));
            }
            if ((f.0 + f.1 + f.2) - 1.0).abs() > 1e-9 {
                return Err(Error::Config(format!(
                    "{name} fractions must sum to 1, got {}",
                    f.0 + f.1 + f.2
                )));
            }
        }
        Ok(SplitSpec { edge_fracs, anchor_fracs, seed })
    }
}

impl Default for SplitSpec {
    /// Edge split 80/5/15, anchor split 65/10/25.
    fn default() -> Self {
        SplitSpec { edge_fracs: (0.80, 0.05, 0.15), anchor_fracs: (0.65, 0.10, 0.25), seed: 0 }
    }
}

/// Disjoint edge partition, with one uniformly sampled non-edge per
/// held-out edge.
#[derive(Debug, Clone)]
pub struct EdgeSplit {
    pub train: Vec<(u32, u32)>,
    pub val: Vec<(u32, u32)>,
    pub test: Vec<(u32, u32)>,
    pub val_neg: Vec<(u32, u32)>,
    pub test_neg: Vec<(u32, u32)>,
    pub warning: Option<String>,
}

fn split_counts(n: usize, fracs: (f64, f64, f64)) -> (usize, usize, usize) {
    let n_val = (fracs.1 * n as f64).round() as usize;
    let n_test = (fracs.2 * n as f64).round() as usize;
    let held = (n_val + n_test).min(n);
    let n_train = n - held;
    (n_train, n_val.min(held), held - n_val.min(held))
}

/// Seeded disjoint partition of a layer's edges plus matched non-edges for
/// the held-out sets.
pub fn split_edges(layer: &Layer, spec: &SplitSpec) -> Result<EdgeSplit> {
    let m = layer.edge_count();
    if m < 10 {
        return Err(Error::Input(format!("need at least 10 edges to split, got {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ edge_salt());
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng);
    let (n_train, n_val, _n_test) = split_counts(m, spec.edge_fracs);
    let pick = |range: std::ops::Range<usize>| -> Vec<(u32, u32)> {
        let mut v: Vec<(u32, u32)> = range.map(|i| layer.edges()[order[i]]).collect();
        v.sort_unstable();
        v
    };
    let train = pick(0..n_train);
    let val = pick(n_train..n_train + n_val);
    let test = pick(n_train + n_val..m);

    let mut taken: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut sample_negs = |count: usize, rng: &mut ChaCha8Rng| -> Result<Vec<(u32, u32)>> {
        let n = layer.node_count() as u32;
        let possible = (n as u64 * (n as u64 - 1)) / 2 - layer.edge_count() as u64;
        if (count as u64) > possible {
            return Err(Error::Input(format!(
                "cannot sample {count} non-edges, only {possible} exist"
            )));
        }
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a == b {
                continue;
            }
            let e = (a.min(b), a.max(b));
            if layer.has_edge(e.0, e.1) || taken.contains(&e) {
                continue;
            }
            taken.insert(e);
            out.push(e);
        }
        out.sort_unstable();
        Ok(out)
    };
    let val_neg = sample_negs(val.len(), &mut rng)?;
    let test_neg = sample_negs(test.len(), &mut rng)?;

    let train_layer = Layer::from_edges(layer.name(), layer.node_count(), &train)?;
    let comps = train_layer.components().len();
    let warning = (comps > layer.node_count() / 2).then(|| {
        format!("train graph fragmented into {comps} components (> N/2 = {})", layer.node_count() / 2)
    });

    Ok(EdgeSplit { train, val, test, val_neg, test_neg, warning })
}

// Distinct salts keep edge and anchor streams independent under one seed.
fn edge_salt() -> u64 {
    0x4544_4745 // "EDGE"
}
fn anchor_salt() -> u64 {
    0x414e_4348 // "ANCH"
}

#[derive(Debug, Clone)]
pub struct AnchorSplit {
    pub train: Vec<(u32, u32)>,
    pub val: Vec<(u32, u32)>,
    pub test: Vec<(u32, u32)>,
}

/// Seeded disjoint partition of the anchor set.
pub fn split_anchors(mx: &Multiplex, spec: &SplitSpec) -> Result<AnchorSplit> {
    let n = mx.anchors.len();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ anchor_salt());
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let (n_train, n_val, _n_test) = split_counts(n, spec.anchor_fracs);
    let pick = |range: std::ops::Range<usize>| -> Vec<(u32, u32)> {
        let mut v: Vec<(u32, u32)> = range.map(|i| mx.anchors[order[i]]).collect();
        v.sort_unstable();
        v
    };
    Ok(AnchorSplit {
        train: pick(0..n_train),
        val: pick(n_train..n_train + n_val),
        test: pick(n_train + n_val..n),
    })
}

/// Parameters of the synthetic two-layer generator.
#[derive(Debug, Clone, Copy)]
pub struct SynthConfig {
    /// Number of planted blocks per layer.
    pub blocks: usize,
    /// Nodes per layer.
    pub nodes: usize,
    /// Intra-block edge probability.
    pub p: f64,
    /// Inter-block edge probability.
    pub q: f64,
    /// Overlap ratio; `round(eta * nodes)` anchors are kept.
    pub eta: f64,
    /// Per-edge perturbation probability applied to the copied layer.
    pub rho: f64,
    pub seed: u64,
}

/// Synthetic multiplex plus the planted ground truth.
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub multiplex: Multiplex,
    /// Planted block of every source node.
    pub source_blocks: Vec<u32>,
    /// Planted block of every target node.
    pub target_blocks: Vec<u32>,
    /// Full ground-truth alignment: target id of every source node.
    pub alignment: Vec<u32>,
}

/// Generates a stochastic-block-model layer, copies it under edge
/// perturbation `rho` into a second layer with shuffled node ids, and keeps
/// `round(eta * nodes)` of the identity pairs as anchors.
pub fn synth_multiplex(cfg: &SynthConfig) -> Result<SynthOutput> {
    if cfg.blocks == 0 || cfg.nodes < cfg.blocks {
        return Err(Error::Config(format!(
            "need at least one node per block: blocks={}, nodes={}",
            cfg.blocks, cfg.nodes
        )));
    }
    if !(cfg.p > cfg.q) {
        return Err(Error::Config(format!("require p > q, got p={}, q={}", cfg.p, cfg.q)));
    }
    if !(0.0..=1.0).contains(&cfg.p) || !(0.0..=1.0).contains(&cfg.q) {
        return Err(Error::Config("p and q must lie in [0, 1]".into()));
    }
    if !(0.0..=1.0).contains(&cfg.eta) {
        return Err(Error::Config(format!("eta must lie in [0, 1], got {}", cfg.eta)));
    }
    if !(0.0..=1.0).contains(&cfg.rho) {
        return Err(Error::Config(format!("rho must lie in [0, 1], got {}", cfg.rho)));
    }
    let n = cfg.nodes;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x53_594e_5448); // "SYNTH"

    let block_of = |i: usize| -> u32 { (i * cfg.blocks / n) as u32 };
    let source_blocks: Vec<u32> = (0..n).map(block_of).collect();

    let mut edges: Vec<(u32, u32)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let prob = if source_blocks[i] == source_blocks[j] { cfg.p } else { cfg.q };
            if rng.random::<f64>() < prob {
                edges.push((i as u32, j as u32));
            }
        }
    }
    let source = Layer::from_edges("source", n, &edges)?;

    // Perturb the copy: drop each edge with probability rho, then add the
    // same number of fresh non-edges to keep the density.
    let mut kept: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
    let mut dropped = 0usize;
    for &e in &edges {
        if cfg.rho > 0.0 && rng.random::<f64>() < cfg.rho {
            dropped += 1;
        } else {
            kept.push(e);
        }
    }
    let mut kept_set: BTreeSet<(u32, u32)> = kept.iter().copied().collect();
    let max_edges = n as u64 * (n as u64 - 1) / 2;
    if kept_set.len() as u64 + dropped as u64 > max_edges {
        return Err(Error::Config("perturbation cannot place replacement edges".into()));
    }
    let mut added = 0usize;
    while added < dropped {
        let a = rng.random_range(0..n as u32);
        let b = rng.random_range(0..n as u32);
        if a == b {
            continue;
        }
        let e = (a.min(b), a.max(b));
        if kept_set.insert(e) {
            added += 1;
        }
    }

    // Shuffle target node ids.
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.shuffle(&mut rng);
    let target_edges: Vec<(u32, u32)> =
        kept_set.iter().map(|&(a, b)| (perm[a as usize], perm[b as usize])).collect();
    let target = Layer::from_edges("target", n, &target_edges)?;
    let mut target_blocks = vec![0u32; n];
    for i in 0..n {
        target_blocks[perm[i] as usize] = source_blocks[i];
    }

    // Keep round(eta * n) identity pairs as known anchors.
    let n_anchor = (cfg.eta * n as f64).round() as usize;
    let mut anchor_sources = rand::seq::index::sample(&mut rng, n, n_anchor).into_vec();
    anchor_sources.sort_unstable();
    let anchors: Vec<(u32, u32)> =
        anchor_sources.iter().map(|&i| (i as u32, perm[i])).collect();

    let multiplex = Multiplex::new(source, target, anchors)?;
    Ok(SynthOutput { multiplex, source_blocks, target_blocks, alignment: perm })
}

#[cfg(test)]
mod tests {
    use super::*;


    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn load_edge_list_basic() {
        let f = write_tmp("0 1\n1 2\n");
        let (layer, report) = load_edge_list(f.path()).unwrap();
        assert_eq!(layer.node_count(), 3);
        assert_eq!(layer.edge_count(), 2);
        assert_eq!(report, LoadReport::default());
    }

    #[test]
    fn load_edge_list_duplicates_and_self_loops() {
        let f = write_tmp("0 1\n0 1\n1 0\n");
        let (layer, report) = load_edge_list(f.path()).unwrap();
        assert_eq!(layer.edge_count(), 1);
        assert_eq!(report.duplicates, 2);

        let f = write_tmp("0 0\n0 1\n");
        let (layer, report) = load_edge_list(f.path()).unwrap();
        assert_eq!(report.self_loops, 1);
        assert_eq!(layer.edge_count(), 1);
    }

    #[test]
    fn load_edge_list_densifies_and_rejects_garbage() {
        let f = write_tmp("# comment\n10 20\n20 30\n");
        let (layer, _) = load_edge_list(f.path()).unwrap();
        assert_eq!(layer.node_count(), 3);
        assert!(layer.has_edge(0, 1) && layer.has_edge(1, 2));

        let f = write_tmp("0 x\n");
        match load_edge_list(f.path()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn anchors_validation() {
        let a = Layer::from_edges("a", 5, &[(0, 1), (1, 2)]).unwrap();
        let b = Layer::from_edges("b", 10, &[(3, 7), (7, 9)]).unwrap();

        let f = write_tmp("3 7\n");
        assert_eq!(load_anchors(f.path(), &a, &b).unwrap(), vec![(3, 7)]);

        let f = write_tmp("3 7\n3 9\n");
        assert!(load_anchors(f.path(), &a, &b).is_err());

        let f = write_tmp("");
        assert!(load_anchors(f.path(), &a, &b).unwrap().is_empty());
    }

    #[test]
    fn overlap_examples() {
        let a = Layer::from_edges("a", 4, &[(0, 1)]).unwrap();
        let b = Layer::from_edges("b", 4, &[(0, 1)]).unwrap();
        let mx = Multiplex::new(a.clone(), b.clone(), vec![]).unwrap();
        assert_eq!(overlap_ratio(&mx), 0.0);

        let mx =
            Multiplex::new(a, b, vec![(0, 0), (1, 1), (2, 2), (3, 3)]).unwrap();
        assert_eq!(overlap_ratio(&mx), 1.0);

        // Arithmetic on a realistic row: 2*2858/(5240+5167).
        let eta: f64 = 2.0 * 2858.0 / (5240.0 + 5167.0);
        assert!((eta - 0.549).abs() < 1e-3);
    }

    fn grid_layer(n: usize) -> Layer {
        // Path graph, enough edges to split.
        let edges: Vec<(u32, u32)> = (0..n - 1).map(|i| (i as u32, i as u32 + 1)).collect();
        Layer::from_edges("path", n, &edges).unwrap()
    }

    #[test]
    fn split_edges_partitions() {
        let layer = grid_layer(41);
        let spec = SplitSpec::new((0.8, 0.05, 0.15), (0.65, 0.1, 0.25), 7).unwrap();
        let s = split_edges(&layer, &spec).unwrap();
        assert_eq!(s.train.len() + s.val.len() + s.test.len(), layer.edge_count());
        assert_eq!(s.val_neg.len(), s.val.len());
        assert_eq!(s.test_neg.len(), s.test.len());
        let all: BTreeSet<_> = s.train.iter().chain(&s.val).chain(&s.test).collect();
        assert_eq!(all.len(), layer.edge_count(), "splits must be disjoint");
        for e in s.val_neg.iter().chain(&s.test_neg) {
            assert!(!layer.has_edge(e.0, e.1));
        }
        // Determinism.
        let s2 = split_edges(&layer, &spec).unwrap();
        assert_eq!(s.train, s2.train);
        assert_eq!(s.test_neg, s2.test_neg);

        // All-train split.
        let spec = SplitSpec::new((1.0, 0.0, 0.0), (0.65, 0.1, 0.25), 7).unwrap();
        let s = split_edges(&layer, &spec).unwrap();
        assert_eq!(s.train.len(), layer.edge_count());
        assert!(s.val.is_empty() && s.test.is_empty());
    }

    #[test]
    fn split_anchor_counts_match_paper_ratios() {
        let n = 120u32;
        let edges: Vec<(u32, u32)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let layer = Layer::from_edges("l", n as usize, &edges).unwrap();
        let anchors: Vec<(u32, u32)> = (0..100).map(|i| (i, i)).collect();
        let mx = Multiplex::new(layer.clone(), layer, anchors).unwrap();

        let spec = SplitSpec::new((0.8, 0.05, 0.15), (0.65, 0.10, 0.25), 3).unwrap();
        let s = split_anchors(&mx, &spec).unwrap();
        assert_eq!((s.train.len(), s.val.len(), s.test.len()), (65, 10, 25));

        // Scarce regime.
        let spec = SplitSpec::new((0.8, 0.05, 0.15), (0.05, 0.10, 0.85), 3).unwrap();
        let s = split_anchors(&mx, &spec).unwrap();
        assert_eq!((s.train.len(), s.val.len(), s.test.len()), (5, 10, 85));
    }

    #[test]
    fn synth_rho_zero_is_isomorphic() {
        let cfg = SynthConfig {
            blocks: 2,
            nodes: 30,
            p: 0.4,
            q: 0.05,
            eta: 0.5,
            rho: 0.0,
            seed: 11,
        };
        let out = synth_multiplex(&cfg).unwrap();
        let mx = &out.multiplex;
        assert_eq!(mx.source.edge_count(), mx.target.edge_count());
        for &(a, b) in mx.source.edges() {
            let (ta, tb) = (out.alignment[a as usize], out.alignment[b as usize]);
            assert!(mx.target.has_edge(ta, tb));
        }
        assert_eq!(mx.anchors.len(), 15);
        for &(s, t) in &mx.anchors {
            assert_eq!(out.alignment[s as usize], t);
        }
    }

    #[test]
    fn synth_eta_zero_and_determinism() {
        let cfg = SynthConfig {
            blocks: 3,
            nodes: 24,
            p: 0.5,
            q: 0.02,
            eta: 0.0,
            rho: 0.2,
            seed: 5,
        };
        let a = synth_multiplex(&cfg).unwrap();
        assert!(a.multiplex.anchors.is_empty());
        let b = synth_multiplex(&cfg).unwrap();
        assert_eq!(a.multiplex.source.edges(), b.multiplex.source.edges());
        assert_eq!(a.multiplex.target.edges(), b.multiplex.target.edges());
        assert_eq!(a.alignment, b.alignment);

        assert!(synth_multiplex(&SynthConfig { p: 0.1, q: 0.3, ..cfg }).is_err());
    }

    #[test]
    fn save_load_round_trip() {
        let layer = grid_layer(12);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("layer.edges");
        save_edge_list(&layer, &path).unwrap();
        let (back, _) = load_edge_list(&path).unwrap();
        assert_eq!(back.edges(), layer.edges());

        let feats = layer.features_or_random(5, 99);
        let fpath = dir.path().join("layer.feats");
        save_features(&feats, &fpath).unwrap();
        let fback = load_features(&fpath).unwrap();
        assert_eq!(fback, feats);
    }

    #[test]
    fn components_and_bfs() {
        let layer = Layer::from_edges("c", 6, &[(0, 1), (1, 2), (4, 5)]).unwrap();
        let comps = layer.components();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[0], vec![0, 1, 2]);
        let d = layer.bfs_distances(0);
        assert_eq!(d[2], Some(2));
        assert_eq!(d[4], None);
    }
}
