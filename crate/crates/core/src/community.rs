//! I-Louvain community detection maximizing Q = Q_NG + Q_iner, where the
//! inertia term is built from manifold distances, plus supernode-view
//! construction for graph augmentation.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Layer;
use crate::manifold::{self, ManifoldPoint};
use crate::{Error, Result};

/// Accepted-move deltas below this are treated as numeric dust.
const MOVE_EPS: f64 = 1e-12;

/// A node-to-community assignment with dense community ids in [0, K').
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<u32>,
    count: usize,
}

impl Partition {
    /// Relabels raw ids densely by first appearance in node order.
    pub fn from_assignment(raw: &[u32]) -> Partition {
        let mut remap: BTreeMap<u32, u32> = BTreeMap::new();
        let mut next = 0u32;
        let assignment = raw
            .iter()
            .map(|&c| {
                *remap.entry(c).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                })
            })
            .collect();
        Partition { assignment, count: next as usize }
    }

    pub fn singletons(n: usize) -> Partition {
        Partition { assignment: (0..n as u32).collect(), count: n }
    }

    pub fn community(&self, node: u32) -> u32 {
        self.assignment[node as usize]
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    /// Member lists per community id.
    pub fn members(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.count];
        for (node, &c) in self.assignment.iter().enumerate() {
            out[c as usize].push(node as u32);
        }
        out
    }
}

/// Newman-Girvan modularity
/// Q_NG = (1/2m) Σ_{ij} (A_ij − d_i d_j / 2m) δ(v_i, v_j),
/// with the double sum running over all ordered pairs including i = j.
pub fn modularity_ng(layer: &Layer, part: &Partition) -> Result<f64> {
    let m = layer.edge_count();
    if m == 0 {
        return Err(Error::Input("modularity undefined on an edgeless graph".into()));
    }
    if part.node_count() != layer.node_count() {
        return Err(Error::Input("partition size does not match layer".into()));
    }
    let m = m as f64;
    let mut intra = vec![0.0f64; part.count()];
    let mut deg_sum = vec![0.0f64; part.count()];
    for &(a, b) in layer.edges() {
        if part.community(a) == part.community(b) {
            intra[part.community(a) as usize] += 1.0;
        }
    }
    for u in 0..layer.node_count() as u32 {
        deg_sum[part.community(u) as usize] += layer.degree(u) as f64;
    }
    let q = intra
        .iter()
        .zip(&deg_sum)
        .map(|(&e_c, &d_c)| e_c / m - (d_c / (2.0 * m)).powi(2))
        .sum();
    Ok(q)
}

/// Precomputed geometry shared by the inertia modularity and the move loop.
struct InertiaTables {
    /// Pairwise squared manifold distances.
    d2: Vec<Vec<f64>>,
    /// iner(X, x_i) = Σ_j d(x_i, x_j)².
    iner_through: Vec<f64>,
    /// iner(X) = Σ_i d(x_i, μ)² around the global gyromidpoint μ.
    iner_total: f64,
}

fn inertia_tables(embeddings: &[ManifoldPoint]) -> Result<InertiaTables> {
    let n = embeddings.len();
    let mut d2 = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = manifold::distance(&embeddings[i], &embeddings[j])?;
            d2[i][j] = d * d;
            d2[j][i] = d * d;
        }
    }
    let iner_through: Vec<f64> = (0..n).map(|i| d2[i].iter().sum()).collect();
    let weights = vec![1.0; n];
    let mu = manifold::gyromidpoint(embeddings, &weights)?;
    let mut iner_total = 0.0;
    for e in embeddings {
        let d = manifold::distance(e, &mu)?;
        iner_total += d * d;
    }
    Ok(InertiaTables { d2, iner_through, iner_total })
}

impl InertiaTables {
    /// Pair term of Q_iner; the whole sum degenerates to 0 when the total
    /// inertia vanishes (all embeddings identical).
    fn pair_term(&self, n: usize, i: usize, j: usize) -> f64 {
        if self.iner_total <= 0.0 {
            return 0.0;
        }
        let scale = 2.0 * n as f64 * self.iner_total;
        self.iner_through[i] * self.iner_through[j] / (scale * scale) - self.d2[i][j] / scale
    }
}

/// Inertia modularity
/// Q_iner = Σ_{ij} [iner(X,x_i)·iner(X,x_j)/(2N·iner(X))² −
///                  d_κ(x_i,x_j)²/(2N·iner(X))] δ(v_i, v_j),
/// over ordered same-community pairs including (i, i). Zero when all
/// embeddings coincide.
pub fn modularity_inertia(embeddings: &[ManifoldPoint], part: &Partition) -> Result<f64> {
    let n = embeddings.len();
    if n < 2 {
        return Err(Error::Input("inertia modularity needs at least 2 nodes".into()));
    }
    if part.node_count() != n {
        return Err(Error::Input("partition size does not match embeddings".into()));
    }
    let tables = inertia_tables(embeddings)?;
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if part.community(i as u32) == part.community(j as u32) {
                q += tables.pair_term(n, i, j);
            }
        }
    }
    Ok(q)
}

/// One accepted local move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptedMove {
    pub node: u32,
    pub from: u32,
    pub to: u32,
    pub delta_q: f64,
}

/// Result of the I-Louvain local-move phase.
#[derive(Debug, Clone)]
pub struct LouvainRun {
    pub partition: Partition,
    pub moves: Vec<AcceptedMove>,
}

/// Greedy local-move maximization of Q = Q_NG + Q_iner.
///
/// Starts from singletons; in a fixed seeded node order, each node is
/// offered every neighbor community and takes the best strictly-positive
/// ΔQ; terminates when a full pass makes no move. Isolated nodes stay
/// singletons. ΔQ is evaluated incrementally; the increments telescoped
/// over accepted moves reproduce the full Q recomputation (pinned in
/// tests).
pub fn i_louvain_run(layer: &Layer, embeddings: &[ManifoldPoint], seed: u64) -> Result<LouvainRun> {
    let n = layer.node_count();
    if embeddings.len() != n {
        return Err(Error::Input(format!(
            "expected {n} embeddings, got {}",
            embeddings.len()
        )));
    }
    if n == 0 {
        return Ok(LouvainRun { partition: Partition::from_assignment(&[]), moves: Vec::new() });
    }
    if layer.edge_count() == 0 {
        return Ok(LouvainRun { partition: Partition::singletons(n), moves: Vec::new() });
    }

    let tables = inertia_tables(embeddings)?;
    let m = layer.edge_count() as f64;

    // Community state: assignment, member sets, degree sums.
    let mut comm: Vec<u32> = (0..n as u32).collect();
    let mut members: Vec<BTreeSet<u32>> = (0..n as u32).map(|u| BTreeSet::from([u])).collect();
    let mut deg_sum: Vec<f64> = (0..n as u32).map(|u| layer.degree(u) as f64).collect();

    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4c4f_5556); // "LOUV"
    order.shuffle(&mut rng);

    let inertia_sum = |u: usize, c: u32, members: &[BTreeSet<u32>]| -> f64 {
        members[c as usize]
            .iter()
            .filter(|&&j| j as usize != u)
            .map(|&j| tables.pair_term(n, u, j as usize))
            .sum()
    };

    let mut moves = Vec::new();
    let max_passes = 10 * n + 10;
    for _pass in 0..max_passes {
        let mut moved = false;
        for &u in &order {
            let from = comm[u as usize];
            let d_u = layer.degree(u) as f64;

            // Edge multiplicity from u into each adjacent community.
            let mut k_to: BTreeMap<u32, f64> = BTreeMap::new();
            for &v in layer.neighbors(u) {
                *k_to.entry(comm[v as usize]).or_insert(0.0) += 1.0;
            }
            let k_from = k_to.get(&from).copied().unwrap_or(0.0);
            let iner_from = inertia_sum(u as usize, from, &members);

            let mut best: Option<(f64, u32)> = None;
            for (&to, &k_in) in &k_to {
                if to == from {
                    continue;
                }
                let dq_ng = (k_in - k_from) / m
                    - d_u * (deg_sum[to as usize] - (deg_sum[from as usize] - d_u)) / (2.0 * m * m);
                let dq_iner = 2.0 * (inertia_sum(u as usize, to, &members) - iner_from);
                let dq = dq_ng + dq_iner;
                if dq > MOVE_EPS && best.map_or(true, |(b, _)| dq > b) {
                    best = Some((dq, to));
                }
            }
            if let Some((dq, to)) = best {
                members[from as usize].remove(&u);
                members[to as usize].insert(u);
                deg_sum[from as usize] -= d_u;
                deg_sum[to as usize] += d_u;
                comm[u as usize] = to;
                moves.push(AcceptedMove { node: u, from, to, delta_q: dq });
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }

    Ok(LouvainRun { partition: Partition::from_assignment(&comm), moves })
}

/// Community partition via [`i_louvain_run`].
pub fn i_louvain(layer: &Layer, embeddings: &[ManifoldPoint], seed: u64) -> Result<Partition> {
    Ok(i_louvain_run(layer, embeddings, seed)?.partition)
}

/// A community partition together with its coarse graph and the manifold
/// midpoint of every community.
#[derive(Debug, Clone)]
pub struct SupernodeView {
    pub partition: Partition,
    /// Equal-weight gyromidpoint of each community's member embeddings.
    pub midpoints: Vec<ManifoldPoint>,
    /// Edge multiplicities between communities, keyed (min, max); the
    /// diagonal holds intra-community edge counts.
    pub coarse_edges: BTreeMap<(u32, u32), u64>,
    pub member_counts: Vec<usize>,
}

/// Collapses each community into one supernode.
pub fn build_supernode_view(
    layer: &Layer,
    part: &Partition,
    embeddings: &[ManifoldPoint],
) -> Result<SupernodeView> {
    if part.node_count() != layer.node_count() || embeddings.len() != layer.node_count() {
        return Err(Error::Input("partition/embeddings do not match layer".into()));
    }
    let members = part.members();
    let mut midpoints = Vec::with_capacity(part.count());
    for group in &members {
        let pts: Vec<ManifoldPoint> =
            group.iter().map(|&u| embeddings[u as usize].clone()).collect();
        let weights = vec![1.0; pts.len()];
        midpoints.push(manifold::gyromidpoint(&pts, &weights)?);
    }
    let mut coarse_edges: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for &(a, b) in layer.edges() {
        let (ca, cb) = (part.community(a), part.community(b));
        *coarse_edges.entry((ca.min(cb), ca.max(cb))).or_insert(0) += 1;
    }
    let member_counts = members.iter().map(|g| g.len()).collect();
    Ok(SupernodeView { partition: part.clone(), midpoints, coarse_edges, member_counts })
}
