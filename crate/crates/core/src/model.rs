//! Curvature-aware graph attention encoder: feature lift, Möbius feature
//! transform, intra-/inter-network attention with one shared softmax
//! denominator per node, gyromidpoint aggregation, stacked layers.
//!
//! The forward pass is recorded on an autodiff tape so the same code path
//! serves evaluation (no dropout, pure function of graph/params/κ) and
//! training (dropout masks on the normalized attention weights, gradients
//! via the tape).

use rand::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::autodiff::{ad_drop0, ad_gyromidpoint, ad_lift0, MidWeights, Tape, Var};
use crate::graph::Multiplex;
use crate::linalg::Mat;
use crate::manifold::{Curvature, ManifoldPoint};
use crate::{Error, Result};

/// Node embeddings of one network layer.
pub type Embeddings = Vec<ManifoldPoint>;

/// Encoder hyperparameters.
#[derive(Debug, Clone, Copy)]
pub struct EncoderConfig {
    /// Dimension of the input features / learnable base embeddings.
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub output_dim: usize,
    /// Number of stacked attention layers.
    pub layers: usize,
    /// Dropout rate on normalized attention weights (train mode only).
    pub dropout: f64,
    /// Reserved knob of the classic Euclidean attention scorer; the
    /// Riemannian layer scores with the logistic function, so this has no
    /// effect there.
    pub negative_slope: f64,
    /// Learn base embeddings instead of lifting fixed features.
    pub learnable_base: bool,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        EncoderConfig {
            input_dim: 32,
            hidden_dim: 32,
            output_dim: 32,
            layers: 2,
            dropout: 0.3,
            negative_slope: 0.2,
            learnable_base: true,
        }
    }
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 {
            return Err(Error::Config("layer count must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err(Error::Config(format!("dropout must lie in [0, 1), got {}", self.dropout)));
        }
        if self.input_dim == 0 || self.hidden_dim == 0 || self.output_dim == 0 {
            return Err(Error::Config("dimensions must be positive".into()));
        }
        Ok(())
    }

    /// (input, output) dimension of attention layer `l`.
    pub fn layer_dims(&self, l: usize) -> (usize, usize) {
        let din = if l == 0 { self.input_dim } else { self.hidden_dim };
        let dout = if l + 1 == self.layers { self.output_dim } else { self.hidden_dim };
        (din, dout)
    }
}

/// Per-layer weights of one network.
#[derive(Debug, Clone)]
pub struct LayerParams {
    /// Feature transform for own-network tangents (d_out × d_in).
    pub w_x: Mat,
    /// Cross-network transform for the counterpart's tangents (d_out × d_in).
    pub w_xy: Mat,
    /// Intra-network attention vector, length 2·d_out.
    pub beta_in: Vec<f64>,
    /// Inter-network attention vector, length 2·d_out.
    pub beta_er: Vec<f64>,
}

/// Parameters of one network's encoder stack.
#[derive(Debug, Clone)]
pub struct NetParams {
    pub layers: Vec<LayerParams>,
    /// Learnable manifold-valued base embeddings; `None` lifts the layer's
    /// fixed features instead.
    pub base: Option<Vec<ManifoldPoint>>,
}

/// All learnable state of the two-network encoder.
#[derive(Debug, Clone)]
pub struct EncoderParams {
    pub nets: [NetParams; 2],
}

fn glorot(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Mat {
    let bound = (6.0 / (rows + cols) as f64).sqrt();
    let data: Vec<f64> = (0..rows * cols).map(|_| rng.random_range(-bound..bound)).collect();
    Mat::from_data(rows, cols, data)
}

impl EncoderParams {
    /// Glorot-uniform W, zero β (uniform initial attention), base embeddings
    /// lifted from 0.1-scaled features (fixed ones if present, otherwise the
    /// layer's seeded random defaults).
    pub fn init(
        config: &EncoderConfig,
        mx: &Multiplex,
        kappas: [Curvature; 2],
        seed: u64,
    ) -> Result<EncoderParams> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x494e_4954); // "INIT"
        let mut nets = Vec::with_capacity(2);
        for (net_idx, layer) in [&mx.source, &mx.target].into_iter().enumerate() {
            let mut layers = Vec::with_capacity(config.layers);
            for l in 0..config.layers {
                let (din, dout) = config.layer_dims(l);
                layers.push(LayerParams {
                    w_x: glorot(dout, din, &mut rng),
                    w_xy: glorot(dout, din, &mut rng),
                    beta_in: vec![0.0; 2 * dout],
                    beta_er: vec![0.0; 2 * dout],
                });
            }
            let base = if config.learnable_base {
                let feats = layer.features_or_random(config.input_dim, seed ^ (net_idx as u64 + 1));
                let mut pts = Vec::with_capacity(layer.node_count());
                for r in 0..layer.node_count() {
                    let row: Vec<f64> =
                        (0..config.input_dim).map(|c| 0.1 * feats.get(r, c)).collect();
                    pts.push(crate::manifold::lift_to_manifold(&row, kappas[net_idx])?);
                }
                Some(pts)
            } else {
                None
            };
            nets.push(NetParams { layers, base });
        }
        let nets: [NetParams; 2] = nets.try_into().expect("two networks");
        Ok(EncoderParams { nets })
    }

    /// Flat views over every tensor in a fixed order, paired with names.
    /// The order defines optimizer slot assignment and checkpoint layout.
    pub fn tensor_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        for (n, net) in self.nets.iter().enumerate() {
            for (l, _) in net.layers.iter().enumerate() {
                names.push(format!("net{n}.layer{l}.w_x"));
                names.push(format!("net{n}.layer{l}.w_xy"));
                names.push(format!("net{n}.layer{l}.beta_in"));
                names.push(format!("net{n}.layer{l}.beta_er"));
            }
            if net.base.is_some() {
                names.push(format!("net{n}.base"));
            }
        }
        names
    }
}

/// Tape handles for every parameter tensor.
pub struct ParamVars {
    pub nets: [NetVars; 2],
}

pub struct NetVars {
    pub layers: Vec<LayerVars>,
    /// One var per node when the base embeddings are learnable.
    pub base: Option<Vec<Var>>,
}

pub struct LayerVars {
    pub w_x: Var,
    pub w_xy: Var,
    pub beta_in: Var,
    pub beta_er: Var,
}

impl EncoderParams {
    /// Loads every tensor onto the tape as leaves.
    pub fn load_into(&self, tape: &mut Tape) -> ParamVars {
        let nets: Vec<NetVars> = self
            .nets
            .iter()
            .map(|net| NetVars {
                layers: net
                    .layers
                    .iter()
                    .map(|lp| LayerVars {
                        w_x: tape.leaf(lp.w_x.data().to_vec()),
                        w_xy: tape.leaf(lp.w_xy.data().to_vec()),
                        beta_in: tape.leaf(lp.beta_in.clone()),
                        beta_er: tape.leaf(lp.beta_er.clone()),
                    })
                    .collect(),
                base: net.base.as_ref().map(|pts| {
                    pts.iter().map(|p| tape.leaf(p.coords().to_vec())).collect()
                }),
            })
            .collect();
        let nets: [NetVars; 2] = match nets.try_into() {
            Ok(n) => n,
            Err(_) => unreachable!("two networks"),
        };
        ParamVars { nets }
    }
}

/// Pregenerated dropout masks: `mask[net][layer][node][candidate]`, where
/// the candidate order is self, sorted neighbors, anchor counterpart.
#[derive(Debug, Clone)]
pub struct DropoutPlan {
    mask: Vec<Vec<Vec<Vec<bool>>>>,
}

impl DropoutPlan {
    /// Samples keep-masks with probability 1 − dropout; a node whose whole
    /// candidate set would drop keeps its self-loop instead.
    pub fn generate(
        mx: &Multiplex,
        anchors: &[(u32, u32)],
        config: &EncoderConfig,
        seed: u64,
    ) -> DropoutPlan {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x44524f50); // "DROP"
        let keep = 1.0 - config.dropout;
        let anchor_maps = anchor_maps(mx, anchors);
        let mut mask = Vec::with_capacity(2);
        for (net_idx, layer) in [&mx.source, &mx.target].into_iter().enumerate() {
            let mut per_layer = Vec::with_capacity(config.layers);
            for _ in 0..config.layers {
                let mut per_node = Vec::with_capacity(layer.node_count());
                for u in 0..layer.node_count() as u32 {
                    let mut n_cand = 1 + layer.degree(u);
                    if anchor_maps[net_idx][u as usize].is_some() {
                        n_cand += 1;
                    }
                    let mut bits: Vec<bool> =
                        (0..n_cand).map(|_| rng.random::<f64>() < keep).collect();
                    if bits.iter().all(|b| !b) {
                        bits[0] = true;
                    }
                    per_node.push(bits);
                }
                per_layer.push(per_node);
            }
            mask.push(per_layer);
        }
        DropoutPlan { mask }
    }
}

/// Forward mode: dropout plan in training, deterministic in evaluation.
pub enum Mode<'a> {
    Train(&'a DropoutPlan),
    Eval,
}

/// Final embedding vars per network, still attached to the tape.
pub struct ForwardVars {
    pub source: Vec<Var>,
    pub target: Vec<Var>,
}

/// `anchor_of[net][node]` = counterpart node in the other network, if any.
fn anchor_maps(mx: &Multiplex, anchors: &[(u32, u32)]) -> [Vec<Option<u32>>; 2] {
    let mut src = vec![None; mx.source.node_count()];
    let mut tgt = vec![None; mx.target.node_count()];
    for &(s, t) in anchors {
        src[s as usize] = Some(t);
        tgt[t as usize] = Some(s);
    }
    [src, tgt]
}

/// Runs the stacked κ-attention encoder on the tape.
///
/// Anchor counterparts are routed through the shared flat tangent
/// coordinates: logged in their own manifold, transformed by W^xy, lifted
/// at the attending network's curvature.
pub fn forward(
    tape: &mut Tape,
    params: &ParamVars,
    config: &EncoderConfig,
    mx: &Multiplex,
    kappas: [Curvature; 2],
    anchors: &[(u32, u32)],
    mode: Mode<'_>,
) -> Result<ForwardVars> {
    config.validate()?;
    let layers = [&mx.source, &mx.target];
    let anchor_of = anchor_maps(mx, anchors);

    // Layer-0 inputs: learnable base points or lifted fixed features.
    let mut current: [Vec<Var>; 2] = [Vec::new(), Vec::new()];
    for net in 0..2 {
        current[net] = match &params.nets[net].base {
            Some(base_vars) => {
                if base_vars.len() != layers[net].node_count() {
                    return Err(Error::Config(format!(
                        "net {net}: {} base embeddings for {} nodes",
                        base_vars.len(),
                        layers[net].node_count()
                    )));
                }
                base_vars.clone()
            }
            None => {
                let feats = layers[net]
                    .features()
                    .ok_or_else(|| {
                        Error::Config(format!(
                            "net {net} has no features and no learnable base"
                        ))
                    })?
                    .clone();
                if feats.cols() != config.input_dim {
                    return Err(Error::Config(format!(
                        "net {net}: feature dim {} != input_dim {}",
                        feats.cols(),
                        config.input_dim
                    )));
                }
                (0..feats.rows())
                    .map(|r| {
                        let row: Vec<f64> =
                            (0..feats.cols()).map(|c| feats.get(r, c)).collect();
                        let leaf = tape.leaf(row);
                        ad_lift0(tape, leaf, kappas[net])
                    })
                    .collect()
            }
        };
    }

    for l in 0..config.layers {
        let (din, dout) = config.layer_dims(l);
        // Own-network transformed tangents and the two score halves, per net.
        let mut transformed: [Vec<Var>; 2] = [Vec::new(), Vec::new()];
        let mut tangents: [Vec<Var>; 2] = [Vec::new(), Vec::new()];
        for net in 0..2 {
            let lv = &params.nets[net].layers[l];
            for &p in &current[net] {
                let u = ad_drop0(tape, p, kappas[net]);
                tangents[net].push(u);
                transformed[net].push(tape.matvec(lv.w_x, dout, din, u));
            }
        }

        let mut next: [Vec<Var>; 2] = [Vec::new(), Vec::new()];
        for net in 0..2 {
            let other = 1 - net;
            let lv = &params.nets[net].layers[l];
            let beta_in_a = tape.segment(lv.beta_in, 0, dout);
            let beta_in_b = tape.segment(lv.beta_in, dout, dout);
            let beta_er_a = tape.segment(lv.beta_er, 0, dout);
            let beta_er_b = tape.segment(lv.beta_er, dout, dout);

            // Per-node score halves over own-network transforms.
            let sa: Vec<Var> =
                transformed[net].iter().map(|&a| tape.dot(beta_in_a, a)).collect();
            let sb: Vec<Var> =
                transformed[net].iter().map(|&a| tape.dot(beta_in_b, a)).collect();
            let sa_er: Vec<Var> =
                transformed[net].iter().map(|&a| tape.dot(beta_er_a, a)).collect();

            // Cross-network transforms and messages, built lazily per anchor.
            let mut cross_msg: Vec<Option<(Var, Var)>> =
                vec![None; layers[other].node_count()];

            // Own-network messages lifted back to this net's manifold.
            let msgs: Vec<Var> = transformed[net]
                .iter()
                .map(|&a| ad_lift0(tape, a, kappas[net]))
                .collect();

            for i in 0..layers[net].node_count() {
                // Candidate order: self, sorted neighbors, anchor.
                let mut scores: Vec<Var> = Vec::new();
                let mut points: Vec<Var> = Vec::new();
                let raw_self = tape.add(sa[i], sb[i]);
                scores.push(tape.sigmoid(raw_self));
                points.push(msgs[i]);
                for &j in layers[net].neighbors(i as u32) {
                    let raw = tape.add(sa[i], sb[j as usize]);
                    scores.push(tape.sigmoid(raw));
                    points.push(msgs[j as usize]);
                }
                if let Some(j) = anchor_of[net][i] {
                    let (score_half, msg) = match cross_msg[j as usize] {
                        Some(pair) => pair,
                        None => {
                            let w_xy = lv.w_xy;
                            let b = tape.matvec(w_xy, dout, din, tangents[other][j as usize]);
                            let half = tape.dot(beta_er_b, b);
                            let lifted = ad_lift0(tape, b, kappas[net]);
                            cross_msg[j as usize] = Some((half, lifted));
                            (half, lifted)
                        }
                    };
                    let raw = tape.add(sa_er[i], score_half);
                    scores.push(tape.sigmoid(raw));
                    points.push(msg);
                }

                // Joint softmax (Eqs with one shared denominator).
                let lse = tape.logsumexp(&scores);
                let mut weights: Vec<Var> = scores
                    .iter()
                    .map(|&s| {
                        let c = tape.sub(s, lse);
                        tape.exp(c)
                    })
                    .collect();

                if let Mode::Train(plan) = &mode {
                    let bits = &plan.mask[net][l][i];
                    if bits.len() != weights.len() {
                        return Err(Error::Config(
                            "dropout plan does not match candidate sets".into(),
                        ));
                    }
                    if bits.iter().any(|b| !b) {
                        let kept: Vec<Var> = weights
                            .iter()
                            .zip(bits)
                            .map(|(&w, &b)| tape.cmul(w, if b { 1.0 } else { 0.0 }))
                            .collect();
                        let total = tape.add_n(&kept);
                        let inv = tape.recip(total);
                        weights = kept.iter().map(|&w| tape.mul(w, inv)).collect();
                    }
                }

                let agg =
                    ad_gyromidpoint(tape, &points, &MidWeights::Vars(&weights), kappas[net]);
                next[net].push(agg);
            }
        }
        current = next;
    }

    let [source, target] = current;
    Ok(ForwardVars { source, target })
}

/// Materializes embedding vars as domain-checked manifold points.
pub fn extract_embeddings(tape: &Tape, vars: &[Var], kappa: Curvature) -> Result<Embeddings> {
    vars.iter().map(|&v| ManifoldPoint::project(tape.value(v).to_vec(), kappa)).collect()
}

/// Convenience wrapper: eval-mode forward pass producing plain embeddings.
pub fn encode(
    params: &EncoderParams,
    config: &EncoderConfig,
    mx: &Multiplex,
    kappas: [Curvature; 2],
    anchors: &[(u32, u32)],
) -> Result<(Embeddings, Embeddings)> {
    let mut tape = Tape::new();
    let pv = params.load_into(&mut tape);
    let fv = forward(&mut tape, &pv, config, mx, kappas, anchors, Mode::Eval)?;
    let src = extract_embeddings(&tape, &fv.source, kappas[0])?;
    let tgt = extract_embeddings(&tape, &fv.target, kappas[1])?;
    Ok((src, tgt))
}
