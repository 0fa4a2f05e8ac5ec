//! Ollivier-Ricci curvature on edges and nodes, constant-curvature
//! summarization per layer, an exact Wasserstein solver under hop-count
//! ground cost, and a sampled Gromov four-point hyperbolicity diagnostic.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::graph::Layer;
use crate::manifold::{Curvature, KAPPA_MAX};
use crate::{Error, Result};

/// Below this magnitude the layer mean is summarized as exactly Euclidean.
pub const KAPPA_DEAD_ZONE: f64 = 0.01;

/// Lazy-walk parameters for the Ricci estimator.
#[derive(Debug, Clone, Copy)]
pub struct RicciConfig {
    /// Mass kept at the node itself, in [0, 1].
    pub alpha: f64,
    /// Number of nodes sampled for the layer summary.
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for RicciConfig {
    fn default() -> Self {
        RicciConfig { alpha: 0.5, sample_count: 512, seed: 0 }
    }
}

impl RicciConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Config(format!("alpha must lie in [0, 1], got {}", self.alpha)));
        }
        if self.sample_count == 0 {
            return Err(Error::Config("sample_count must be positive".into()));
        }
        Ok(())
    }
}

/// Per-node Ricci values plus the summarized constant curvature.
#[derive(Debug, Clone)]
pub struct CurvatureEstimate {
    /// (node, mean incident-edge Ricci) for every sampled non-isolated node,
    /// sorted by node id.
    pub node_values: Vec<(u32, f64)>,
    pub kappa: Curvature,
    pub sampled_nodes: Vec<u32>,
}

/// Lazy random-walk mass distribution of node `u`: mass `alpha` at `u`,
/// `(1-alpha)/|N(u)|` on each neighbor. Sorted sparse vector; sums to 1
/// exactly (the node's own entry absorbs the rounding remainder).
pub fn mass_distribution(layer: &Layer, u: u32, alpha: f64) -> Vec<(u32, f64)> {
    let deg = layer.degree(u);
    if deg == 0 || alpha == 1.0 {
        return vec![(u, 1.0)];
    }
    let share = (1.0 - alpha) / deg as f64;
    let mut out: Vec<(u32, f64)> = Vec::with_capacity(deg + 1);
    if alpha > 0.0 {
        out.push((u, alpha));
    }
    for &v in layer.neighbors(u) {
        out.push((v, share));
    }
    out.sort_unstable_by_key(|&(n, _)| n);
    force_exact_unit_sum(&mut out);
    out
}

/// Nudges the largest entry until a left-to-right sum is exactly 1.0,
/// absorbing the rounding remainder of the per-neighbor shares.
fn force_exact_unit_sum(masses: &mut [(u32, f64)]) {
    for _ in 0..8 {
        let s: f64 = masses.iter().map(|&(_, m)| m).sum();
        if s == 1.0 {
            return;
        }
        let idx = masses
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        masses[idx].1 += 1.0 - s;
    }
}

/// Exact 1-Wasserstein distance between two sparse distributions on the
/// layer's nodes, under hop-count shortest-path ground cost.
pub fn wasserstein(layer: &Layer, mu: &[(u32, f64)], nu: &[(u32, f64)]) -> Result<f64> {
    for (name, dist) in [("mu", mu), ("nu", nu)] {
        let total: f64 = dist.iter().map(|&(_, m)| m).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Input(format!("{name} sums to {total}, expected 1")));
        }
        if dist.iter().any(|&(_, m)| m < 0.0) {
            return Err(Error::Input(format!("{name} has negative mass")));
        }
    }
    let cost = ground_cost(layer, mu, nu)?;
    let supply: Vec<f64> = mu.iter().map(|&(_, m)| m).collect();
    let demand: Vec<f64> = nu.iter().map(|&(_, m)| m).collect();
    solve_transport(&supply, &demand, &cost)
}

/// Hop-count cost matrix between the two supports (BFS from each `mu` node).
fn ground_cost(layer: &Layer, mu: &[(u32, f64)], nu: &[(u32, f64)]) -> Result<Vec<Vec<f64>>> {
    let mut cost = vec![vec![0.0; nu.len()]; mu.len()];
    for (i, &(src, _)) in mu.iter().enumerate() {
        let dist = layer.bfs_distances(src);
        for (j, &(dst, _)) in nu.iter().enumerate() {
            match dist[dst as usize] {
                Some(d) => cost[i][j] = d as f64,
                None => {
                    return Err(Error::Input(format!(
                        "supports in different components: no path {src} -> {dst}"
                    )))
                }
            }
        }
    }
    Ok(cost)
}

const MASS_EPS: f64 = 1e-15;

/// Exact transportation problem via successive shortest paths with node
/// potentials. Supports are tiny (degree + 1), so no scaling is needed.
fn solve_transport(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> Result<f64> {
    let m = supply.len();
    let n = demand.len();
    let mut rem_s = supply.to_vec();
    let mut rem_d = demand.to_vec();
    let mut flow = vec![vec![0.0f64; n]; m];
    // Potentials over sources then sinks.
    let mut pot = vec![0.0f64; m + n];

    let max_iters = (m + n + 1) * (m + n + 1);
    for _ in 0..max_iters {
        if rem_s.iter().sum::<f64>() <= MASS_EPS {
            let total: f64 =
                (0..m).map(|i| (0..n).map(|j| flow[i][j] * cost[i][j]).sum::<f64>()).sum();
            return Ok(total);
        }
        // Dijkstra over the residual bipartite graph with reduced costs.
        let inf = f64::INFINITY;
        let mut dist = vec![inf; m + n];
        let mut prev = vec![usize::MAX; m + n];
        let mut done = vec![false; m + n];
        for i in 0..m {
            if rem_s[i] > MASS_EPS {
                dist[i] = 0.0;
            }
        }
        loop {
            let mut u = usize::MAX;
            let mut best = inf;
            for v in 0..m + n {
                if !done[v] && dist[v] < best {
                    best = dist[v];
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            if u < m {
                for j in 0..n {
                    let rc = cost[u][j] + pot[u] - pot[m + j];
                    let nd = dist[u] + rc.max(0.0);
                    if nd < dist[m + j] {
                        dist[m + j] = nd;
                        prev[m + j] = u;
                    }
                }
            } else {
                let j = u - m;
                for i in 0..m {
                    if flow[i][j] > MASS_EPS {
                        let rc = -cost[i][j] + pot[u] - pot[i];
                        let nd = dist[u] + rc.max(0.0);
                        if nd < dist[i] {
                            dist[i] = nd;
                            prev[i] = u;
                        }
                    }
                }
            }
        }
        // Cheapest reachable sink with remaining demand.
        let mut sink = usize::MAX;
        let mut best = inf;
        for j in 0..n {
            if rem_d[j] > MASS_EPS && dist[m + j] < best {
                best = dist[m + j];
                sink = m + j;
            }
        }
        if sink == usize::MAX {
            return Err(Error::Input("transport demand unreachable from supply".into()));
        }
        // Bottleneck along the path.
        let mut bottleneck = rem_d[sink - m];
        let mut v = sink;
        while prev[v] != usize::MAX {
            let u = prev[v];
            if u >= m {
                // Backward arc sink u -> source v carries flow[v][u-m].
                bottleneck = bottleneck.min(flow[v][u - m]);
            }
            v = u;
        }
        bottleneck = bottleneck.min(rem_s[v]);
        // Augment.
        let mut vtx = sink;
        while prev[vtx] != usize::MAX {
            let u = prev[vtx];
            if u < m {
                flow[u][vtx - m] += bottleneck;
            } else {
                flow[vtx][u - m] -= bottleneck;
            }
            vtx = u;
        }
        rem_s[vtx] -= bottleneck;
        rem_d[sink - m] -= bottleneck;
        // Johnson potential update keeps reduced costs non-negative.
        for v in 0..m + n {
            if dist[v].is_finite() {
                pot[v] += dist[v];
            }
        }
    }
    Err(Error::Singularity("transport solver failed to converge".into()))
}

/// Edge Ricci curvature Ricci^α(i,j) = 1 − W(m_i^α, m_j^α)/d(i,j), defined
/// here for edges only (d = 1 under hop cost).
pub fn ollivier_ricci_edge(layer: &Layer, i: u32, j: u32, alpha: f64) -> Result<f64> {
    if !layer.has_edge(i, j) {
        return Err(Error::Input(format!("({i}, {j}) is not an edge")));
    }
    let mu = mass_distribution(layer, i, alpha);
    let nu = mass_distribution(layer, j, alpha);
    let w = wasserstein(layer, &mu, &nu)?;
    Ok(1.0 - w)
}

/// Node Ricci curvature: arithmetic mean over incident edges.
pub fn node_ricci(layer: &Layer, i: u32, alpha: f64) -> Result<f64> {
    let deg = layer.degree(i);
    if deg == 0 {
        return Err(Error::Input(format!("node {i} is isolated; curvature undefined")));
    }
    let mut total = 0.0;
    for &j in layer.neighbors(i) {
        total += ollivier_ricci_edge(layer, i, j, alpha)?;
    }
    Ok(total / deg as f64)
}

/// Samples nodes uniformly without replacement and summarizes the layer's
/// constant curvature as the clamped mean of node Ricci values; means inside
/// the dead zone collapse to the exact Euclidean branch.
pub fn estimate_kappa(layer: &Layer, config: &RicciConfig) -> Result<CurvatureEstimate> {
    config.validate()?;
    let n = layer.node_count();
    if (0..n as u32).all(|u| layer.degree(u) == 0) {
        return Err(Error::Input("layer has no non-isolated node".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5249_4343); // "RICC"
    let take = config.sample_count.min(n);
    let mut sampled: Vec<u32> =
        rand::seq::index::sample(&mut rng, n, take).into_iter().map(|i| i as u32).collect();
    sampled.sort_unstable();

    // Node curvatures are independent; compute in parallel, reduce in
    // sorted-node order so the mean is bit-stable.
    let values: Vec<(u32, Option<f64>)> = sampled
        .par_iter()
        .map(|&u| {
            if layer.degree(u) == 0 {
                Ok((u, None))
            } else {
                node_ricci(layer, u, config.alpha).map(|v| (u, Some(v)))
            }
        })
        .collect::<Result<_>>()?;
    let node_values: Vec<(u32, f64)> =
        values.iter().filter_map(|&(u, v)| v.map(|v| (u, v))).collect();
    if node_values.is_empty() {
        return Err(Error::Input("all sampled nodes are isolated".into()));
    }
    let mean = node_values.iter().map(|&(_, v)| v).sum::<f64>() / node_values.len() as f64;
    let kappa = if mean.abs() < KAPPA_DEAD_ZONE {
        Curvature::flat()
    } else {
        Curvature::new(mean.clamp(-KAPPA_MAX, KAPPA_MAX))?
    };
    Ok(CurvatureEstimate { node_values, kappa, sampled_nodes: sampled })
}

/// Gromov four-point delta of one quadruple: the two largest of the three
/// pairwise-distance sums differ by 2δ.
fn four_point_delta(d: &[Vec<u32>], q: [usize; 4]) -> f64 {
    let [a, b, c, e] = q;
    let s1 = (d[a][b] + d[c][e]) as f64;
    let s2 = (d[a][c] + d[b][e]) as f64;
    let s3 = (d[a][e] + d[b][c]) as f64;
    let mut s = [s1, s2, s3];
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    (s[0] - s[1]) / 2.0
}

/// Sampled Gromov δ-hyperbolicity: the maximum four-point δ over
/// `quadruple_samples` distinct node quadruples of the largest component.
pub fn delta_hyperbolicity(layer: &Layer, quadruple_samples: usize, seed: u64) -> Result<f64> {
    if quadruple_samples == 0 {
        return Err(Error::Config("quadruple_samples must be positive".into()));
    }
    let comps = layer.components();
    let comp = comps
        .first()
        .ok_or_else(|| Error::Input("empty graph".into()))?;
    if comp.len() < 4 {
        return Err(Error::Input(format!(
            "largest component has {} nodes; need at least 4",
            comp.len()
        )));
    }
    let sub = layer.induced_subgraph(comp);
    let n = sub.node_count();
    let dist: Vec<Vec<u32>> = (0..n as u32)
        .map(|u| sub.bfs_distances(u).into_iter().map(|d| d.expect("connected")).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4459_5045); // "DYPE"
    let mut best: f64 = 0.0;
    for _ in 0..quadruple_samples {
        let q = rand::seq::index::sample(&mut rng, n, 4);
        best = best.max(four_point_delta(&dist, [q.index(0), q.index(1), q.index(2), q.index(3)]));
    }
    Ok(best)
}

/// Exhaustive four-point δ over all distinct quadruples of the largest
/// component. Exponential in n; diagnostic use on small graphs only.
pub fn delta_hyperbolicity_exact(layer: &Layer) -> Result<f64> {
    let comps = layer.components();
    let comp = comps.first().ok_or_else(|| Error::Input("empty graph".into()))?;
    if comp.len() < 4 {
        return Err(Error::Input("need at least 4 nodes".into()));
    }
    let sub = layer.induced_subgraph(comp);
    let n = sub.node_count();
    let dist: Vec<Vec<u32>> = (0..n as u32)
        .map(|u| sub.bfs_distances(u).into_iter().map(|d| d.expect("connected")).collect())
        .collect();
    let mut best: f64 = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for e in c + 1..n {
                    best = best.max(four_point_delta(&dist, [a, b, c, e]));
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Layer;
    use approx::assert_relative_eq;

    fn complete(n: u32) -> Layer {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Layer::from_edges("k", n as usize, &edges).unwrap()
    }

    fn path(n: u32) -> Layer {
        let edges: Vec<(u32, u32)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Layer::from_edges("p", n as usize, &edges).unwrap()
    }

    #[test]
    fn mass_distribution_examples() {
        let k4 = complete(4);
        let m = mass_distribution(&k4, 0, 1.0);
        assert_eq!(m, vec![(0, 1.0)]);

        let m = mass_distribution(&k4, 0, 0.0);
        assert_eq!(m.len(), 3);
        for &(v, mass) in &m {
            assert_ne!(v, 0);
            assert_relative_eq!(mass, 1.0 / 3.0);
        }
        assert_eq!(m.iter().map(|&(_, x)| x).sum::<f64>(), 1.0);

        let p3 = path(3);
        let m = mass_distribution(&p3, 1, 0.5);
        assert_eq!(m, vec![(0, 0.25), (1, 0.5), (2, 0.25)]);
        assert_eq!(m.iter().map(|&(_, x)| x).sum::<f64>(), 1.0);

        // Isolated node: point mass.
        let iso = Layer::from_edges("i", 3, &[(0, 1)]).unwrap();
        assert_eq!(mass_distribution(&iso, 2, 0.3), vec![(2, 1.0)]);
    }

    #[test]
    fn mass_distribution_sums_exactly_to_one() {
        let star = Layer::from_edges("s", 8, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7)])
            .unwrap();
        for alpha in [0.0, 0.1, 1.0 / 3.0, 0.5, 0.7, 0.9, 1.0] {
            let m = mass_distribution(&star, 0, alpha);
            assert_eq!(m.iter().map(|&(_, x)| x).sum::<f64>(), 1.0, "alpha={alpha}");
        }
    }

    #[test]
    fn wasserstein_examples() {
        let p4 = path(4);
        let mu = vec![(1u32, 1.0)];
        assert_eq!(wasserstein(&p4, &mu, &mu).unwrap(), 0.0);

        // Point masses: plain graph distance.
        let nu = vec![(3u32, 1.0)];
        assert_eq!(wasserstein(&p4, &mu, &nu).unwrap(), 2.0);

        // Uniform on {0, 1} vs point at 2 with d(1,2)=1, d(0,2)=2 -> 1.5.
        let mu = vec![(0u32, 0.5), (1u32, 0.5)];
        let nu = vec![(2u32, 1.0)];
        assert_relative_eq!(wasserstein(&p4, &mu, &nu).unwrap(), 1.5);
    }

    #[test]
    fn wasserstein_rejects_bad_inputs() {
        let p4 = path(4);
        let bad = vec![(0u32, 0.7)];
        let ok = vec![(1u32, 1.0)];
        assert!(wasserstein(&p4, &bad, &ok).is_err());

        let two = Layer::from_edges("d", 4, &[(0, 1), (2, 3)]).unwrap();
        let mu = vec![(0u32, 1.0)];
        let nu = vec![(3u32, 1.0)];
        assert!(wasserstein(&two, &mu, &nu).is_err());
    }

    #[test]
    fn wasserstein_is_symmetric() {
        let k4 = complete(4);
        let mu = mass_distribution(&k4, 0, 0.5);
        let nu = mass_distribution(&k4, 2, 0.5);
        let a = wasserstein(&k4, &mu, &nu).unwrap();
        let b = wasserstein(&k4, &nu, &mu).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn ricci_edge_basics() {
        let k4 = complete(4);
        // alpha = 1: point masses, W = d = 1, curvature exactly 0.
        assert_eq!(ollivier_ricci_edge(&k4, 0, 1, 1.0).unwrap(), 0.0);
        // Non-edge rejected.
        let p4 = path(4);
        assert!(ollivier_ricci_edge(&p4, 0, 2, 0.5).is_err());
        // K4 with alpha 0: neighbors overlap, positive curvature expected.
        let r = ollivier_ricci_edge(&k4, 0, 1, 0.0).unwrap();
        assert!(r > 0.0, "K4 should be positively curved, got {r}");
        // P4 middle edge with alpha 0: every unit of mass moves one hop,
        // so W = 1 and the curvature is exactly 0 (hand transport plan).
        let r = ollivier_ricci_edge(&p4, 1, 2, 0.0).unwrap();
        assert_relative_eq!(r, 0.0);
        // Double star (two adjacent hubs with two leaves each): the bridge
        // is negatively curved, -2/3 by hand enumeration at alpha 0.
        let ds = Layer::from_edges("ds", 6, &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]).unwrap();
        let r = ollivier_ricci_edge(&ds, 0, 1, 0.0).unwrap();
        assert_relative_eq!(r, -2.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn node_ricci_basics() {
        let p2 = path(2);
        let edge = ollivier_ricci_edge(&p2, 0, 1, 0.5).unwrap();
        assert_eq!(node_ricci(&p2, 0, 0.5).unwrap(), edge);

        let k4 = complete(4);
        assert_eq!(node_ricci(&k4, 0, 1.0).unwrap(), 0.0);
        // Symmetry of K4: node value equals any edge value.
        let e = ollivier_ricci_edge(&k4, 0, 1, 0.0).unwrap();
        assert_relative_eq!(node_ricci(&k4, 0, 0.0).unwrap(), e, max_relative = 1e-12);

        let iso = Layer::from_edges("i", 3, &[(0, 1)]).unwrap();
        assert!(node_ricci(&iso, 2, 0.5).is_err());
    }

    #[test]
    fn estimate_kappa_behaviour() {
        let k4 = complete(4);
        // All node values equal by symmetry -> kappa equals that value.
        let est = estimate_kappa(&k4, &RicciConfig { alpha: 0.0, sample_count: 10, seed: 1 }).unwrap();
        let v = est.node_values[0].1;
        assert!(v.abs() >= KAPPA_DEAD_ZONE);
        assert_relative_eq!(est.kappa.kappa(), v);

        // alpha = 1 -> all zeros -> dead zone -> exact flat branch.
        let est = estimate_kappa(&k4, &RicciConfig { alpha: 1.0, sample_count: 10, seed: 1 }).unwrap();
        assert!(est.kappa.is_flat());

        // Determinism.
        let cfg = RicciConfig { alpha: 0.5, sample_count: 3, seed: 9 };
        let a = estimate_kappa(&k4, &cfg).unwrap();
        let b = estimate_kappa(&k4, &cfg).unwrap();
        assert_eq!(a.sampled_nodes, b.sampled_nodes);
        assert_eq!(a.kappa.kappa(), b.kappa.kappa());
    }

    #[test]
    fn delta_hyperbolicity_examples() {
        // Trees are 0-hyperbolic.
        let tree =
            Layer::from_edges("t", 7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap();
        assert_eq!(delta_hyperbolicity_exact(&tree).unwrap(), 0.0);
        assert_eq!(delta_hyperbolicity(&tree, 200, 3).unwrap(), 0.0);

        // K4: all quadruple sums are equal.
        let k4 = complete(4);
        assert_eq!(delta_hyperbolicity_exact(&k4).unwrap(), 0.0);

        // Sampled estimate never exceeds the exhaustive value.
        let c6: Vec<(u32, u32)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let c6 = Layer::from_edges("c", 6, &c6).unwrap();
        let exact = delta_hyperbolicity_exact(&c6).unwrap();
        let sampled = delta_hyperbolicity(&c6, 25, 17).unwrap();
        assert!(sampled <= exact);

        let p3 = path(3);
        assert!(delta_hyperbolicity(&p3, 10, 0).is_err());
    }
}
