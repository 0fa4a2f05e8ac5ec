//! Tape-based reverse-mode automatic differentiation over `Vec<f64>`
//! values (scalars are length-1 vectors), plus composite builders for the
//! κ-stereographic operations the encoder and losses are made of.
//!
//! The tape records every intermediate; [`Tape::backward`] walks it once in
//! reverse and returns a gradient per node. Gradients of every loss are
//! pinned against central finite differences in the test suite.
//!
//! Clamp boundaries use a subgradient convention: `clamp_min` passes
//! gradient only where the input is strictly above the floor, `clamp_max`
//! only strictly below the ceiling.

use crate::linalg::Mat;
use crate::manifold::{Curvature, BOUNDARY_EPS};

/// Handle to a tape node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

#[derive(Debug, Clone)]
enum Op {
    Leaf,
    Add(Var, Var),
    Sub(Var, Var),
    Mul(Var, Var),
    AddN(Vec<Var>),
    /// vector * broadcast scalar
    Smul(Var, Var),
    Cmul(Var, f64),
    Cadd(Var, f64),
    Neg(Var),
    Dot(Var, Var),
    Sum(Var),
    MatVec { m: Var, x: Var, rows: usize, cols: usize },
    Segment { src: Var, start: usize, len: usize },
    Tanh(Var),
    Atanh(Var),
    Tan(Var),
    Atan(Var),
    Exp(Var),
    Ln(Var),
    Sqrt(Var),
    Recip(Var),
    Sigmoid(Var),
    ClampMin(Var, f64),
    ClampMax(Var, f64),
    LogSumExp(Vec<Var>),
}

struct Node {
    op: Op,
    value: Vec<f64>,
}

/// Recording tape. Values are computed eagerly at construction.
#[derive(Default)]
pub struct Tape {
    nodes: Vec<Node>,
}

impl Tape {
    pub fn new() -> Self {
        Tape { nodes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, v: Var) -> &[f64] {
        &self.nodes[v.0].value
    }

    pub fn scalar(&self, v: Var) -> f64 {
        debug_assert_eq!(self.nodes[v.0].value.len(), 1);
        self.nodes[v.0].value[0]
    }

    fn push(&mut self, op: Op, value: Vec<f64>) -> Var {
        self.nodes.push(Node { op, value });
        Var(self.nodes.len() - 1)
    }

    pub fn leaf(&mut self, value: Vec<f64>) -> Var {
        self.push(Op::Leaf, value)
    }

    pub fn scalar_leaf(&mut self, value: f64) -> Var {
        self.push(Op::Leaf, vec![value])
    }

    pub fn add(&mut self, a: Var, b: Var) -> Var {
        let v: Vec<f64> = self.zip(a, b, |x, y| x + y);
        self.push(Op::Add(a, b), v)
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Var {
        let v: Vec<f64> = self.zip(a, b, |x, y| x - y);
        self.push(Op::Sub(a, b), v)
    }

    pub fn mul(&mut self, a: Var, b: Var) -> Var {
        let v: Vec<f64> = self.zip(a, b, |x, y| x * y);
        self.push(Op::Mul(a, b), v)
    }

    fn zip(&self, a: Var, b: Var, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let (va, vb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        assert_eq!(va.len(), vb.len(), "elementwise op length mismatch");
        va.iter().zip(vb).map(|(x, y)| f(*x, *y)).collect()
    }

    pub fn add_n(&mut self, vars: &[Var]) -> Var {
        assert!(!vars.is_empty(), "add_n needs at least one input");
        let len = self.nodes[vars[0].0].value.len();
        let mut acc = vec![0.0; len];
        for v in vars {
            let val = &self.nodes[v.0].value;
            assert_eq!(val.len(), len, "add_n length mismatch");
            for (a, x) in acc.iter_mut().zip(val) {
                *a += x;
            }
        }
        self.push(Op::AddN(vars.to_vec()), acc)
    }

    pub fn smul(&mut self, a: Var, s: Var) -> Var {
        assert_eq!(self.nodes[s.0].value.len(), 1, "smul scalar must have length 1");
        let sv = self.nodes[s.0].value[0];
        let v: Vec<f64> = self.nodes[a.0].value.iter().map(|x| x * sv).collect();
        self.push(Op::Smul(a, s), v)
    }

    pub fn cmul(&mut self, a: Var, c: f64) -> Var {
        let v: Vec<f64> = self.nodes[a.0].value.iter().map(|x| x * c).collect();
        self.push(Op::Cmul(a, c), v)
    }

    pub fn cadd(&mut self, a: Var, c: f64) -> Var {
        let v: Vec<f64> = self.nodes[a.0].value.iter().map(|x| x + c).collect();
        self.push(Op::Cadd(a, c), v)
    }

    pub fn neg(&mut self, a: Var) -> Var {
        let v: Vec<f64> = self.nodes[a.0].value.iter().map(|x| -x).collect();
        self.push(Op::Neg(a), v)
    }

    pub fn dot(&mut self, a: Var, b: Var) -> Var {
        let s: f64 = self.zip(a, b, |x, y| x * y).iter().sum();
        self.push(Op::Dot(a, b), vec![s])
    }

    pub fn sum(&mut self, a: Var) -> Var {
        let s: f64 = self.nodes[a.0].value.iter().sum();
        self.push(Op::Sum(a), vec![s])
    }

    /// y = M x with M a flattened row-major (rows × cols) leaf.
    pub fn matvec(&mut self, m: Var, rows: usize, cols: usize, x: Var) -> Var {
        assert_eq!(self.nodes[m.0].value.len(), rows * cols, "matrix shape mismatch");
        assert_eq!(self.nodes[x.0].value.len(), cols, "matvec input length mismatch");
        let mv = &self.nodes[m.0].value;
        let xv = &self.nodes[x.0].value;
        let mut y = vec![0.0; rows];
        for r in 0..rows {
            y[r] = mv[r * cols..(r + 1) * cols].iter().zip(xv).map(|(a, b)| a * b).sum();
        }
        self.push(Op::MatVec { m, x, rows, cols }, y)
    }

    pub fn segment(&mut self, src: Var, start: usize, len: usize) -> Var {
        let v = self.nodes[src.0].value[start..start + len].to_vec();
        self.push(Op::Segment { src, start, len }, v)
    }

    pub fn tanh(&mut self, a: Var) -> Var {
        let v: Vec<f64> = self.nodes[a.0].value.iter().map(|x| x.tanh()).collect();
        self.push(Op::Tanh(a), v)
    }

    pub fn atanh(&mut self, a: Var) -> Var {
        let v: Vec<f64> = self.nodes[a.0].value.iter().map(|x| x.atanh()).collect();
        self.push(Op::Atanh(a), v)
    }

    pub fn tan(&mut self, a: Var) -> Var {
        let v: Vec<f64> = self.nodes[a.0].value.iter().map(|x| x.tan()).collect();
        self.push(Op::Tan(a), v)
    }

    pub fn atan(&mut self, a: Var) -> Var {
        let v: Vec<f64> = self.nodes[a.0].value.iter().map(|x| x.atan()).collect();
        self.push(Op::Atan(a), v)
    }

    pub fn exp(&mut self, a: Var) -> Var {
        let v: Vec<f64> = self.nodes[a.0].value.iter().map(|x| x.exp()).collect();
        self.push(Op::Exp(a), v)
    }

    pub fn ln(&mut self, a: Var) -> Var {
        let v: Vec<f64> = self.nodes[a.0].value.iter().map(|x| x.ln()).collect();
        self.push(Op::Ln(a), v)
    }

    pub fn sqrt(&mut self, a: Var) -> Var {
        let v: Vec<f64> = self.nodes[a.0].value.iter().map(|x| x.sqrt()).collect();
        self.push(Op::Sqrt(a), v)
    }

    pub fn recip(&mut self, a: Var) -> Var {
        let v: Vec<f64> = self.nodes[a.0].value.iter().map(|x| 1.0 / x).collect();
        self.push(Op::Recip(a), v)
    }

    pub fn sigmoid(&mut self, a: Var) -> Var {
        let v: Vec<f64> =
            self.nodes[a.0].value.iter().map(|x| 1.0 / (1.0 + (-x).exp())).collect();
        self.push(Op::Sigmoid(a), v)
    }

    pub fn clamp_min(&mut self, a: Var, c: f64) -> Var {
        let v: Vec<f64> = self.nodes[a.0].value.iter().map(|x| x.max(c)).collect();
        self.push(Op::ClampMin(a, c), v)
    }

    pub fn clamp_max(&mut self, a: Var, c: f64) -> Var {
        let v: Vec<f64> = self.nodes[a.0].value.iter().map(|x| x.min(c)).collect();
        self.push(Op::ClampMax(a, c), v)
    }

    /// log Σ exp over scalar inputs, max-shifted for stability.
    pub fn logsumexp(&mut self, vars: &[Var]) -> Var {
        assert!(!vars.is_empty(), "logsumexp needs at least one input");
        let vals: Vec<f64> = vars
            .iter()
            .map(|v| {
                debug_assert_eq!(self.nodes[v.0].value.len(), 1);
                self.nodes[v.0].value[0]
            })
            .collect();
        let m = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = vals.iter().map(|x| (x - m).exp()).sum();
        self.push(Op::LogSumExp(vars.to_vec()), vec![m + s.ln()])
    }

    /// Reverse pass from a scalar root; returns one gradient per node.
    pub fn backward(&self, root: Var) -> Gradients {
        assert_eq!(self.nodes[root.0].value.len(), 1, "backward root must be scalar");
        let mut grads: Vec<Option<Vec<f64>>> = vec![None; self.nodes.len()];
        grads[root.0] = Some(vec![1.0]);

        for idx in (0..=root.0).rev() {
            let Some(g) = grads[idx].take() else { continue };
            match &self.nodes[idx].op {
                Op::Leaf => {
                    grads[idx] = Some(g);
                    continue;
                }
                Op::Add(a, b) => {
                    self.accum(&mut grads, *a, &g);
                    self.accum(&mut grads, *b, &g);
                }
                Op::Sub(a, b) => {
                    self.accum(&mut grads, *a, &g);
                    let ng: Vec<f64> = g.iter().map(|x| -x).collect();
                    self.accum(&mut grads, *b, &ng);
                }
                Op::Mul(a, b) => {
                    let ga: Vec<f64> =
                        g.iter().zip(&self.nodes[b.0].value).map(|(x, y)| x * y).collect();
                    let gb: Vec<f64> =
                        g.iter().zip(&self.nodes[a.0].value).map(|(x, y)| x * y).collect();
                    self.accum(&mut grads, *a, &ga);
                    self.accum(&mut grads, *b, &gb);
                }
                Op::AddN(vars) => {
                    for v in vars {
                        self.accum(&mut grads, *v, &g);
                    }
                }
                Op::Smul(a, s) => {
                    let sv = self.nodes[s.0].value[0];
                    let ga: Vec<f64> = g.iter().map(|x| x * sv).collect();
                    let gs: f64 =
                        g.iter().zip(&self.nodes[a.0].value).map(|(x, y)| x * y).sum();
                    self.accum(&mut grads, *a, &ga);
                    self.accum(&mut grads, *s, &[gs]);
                }
                Op::Cmul(a, c) => {
                    let ga: Vec<f64> = g.iter().map(|x| x * c).collect();
                    self.accum(&mut grads, *a, &ga);
                }
                Op::Cadd(a, _) => self.accum(&mut grads, *a, &g),
                Op::Neg(a) => {
                    let ga: Vec<f64> = g.iter().map(|x| -x).collect();
                    self.accum(&mut grads, *a, &ga);
                }
                Op::Dot(a, b) => {
                    let g0 = g[0];
                    let ga: Vec<f64> = self.nodes[b.0].value.iter().map(|y| g0 * y).collect();
                    let gb: Vec<f64> = self.nodes[a.0].value.iter().map(|x| g0 * x).collect();
                    self.accum(&mut grads, *a, &ga);
                    self.accum(&mut grads, *b, &gb);
                }
                Op::Sum(a) => {
                    let g0 = g[0];
                    let ga = vec![g0; self.nodes[a.0].value.len()];
                    self.accum(&mut grads, *a, &ga);
                }
                Op::MatVec { m, x, rows, cols } => {
                    let xv = &self.nodes[x.0].value;
                    let mv = &self.nodes[m.0].value;
                    let mut gm = vec![0.0; rows * cols];
                    let mut gx = vec![0.0; *cols];
                    for r in 0..*rows {
                        let gr = g[r];
                        for c in 0..*cols {
                            gm[r * cols + c] = gr * xv[c];
                            gx[c] += mv[r * cols + c] * gr;
                        }
                    }
                    self.accum(&mut grads, *m, &gm);
                    self.accum(&mut grads, *x, &gx);
                }
                Op::Segment { src, start, len } => {
                    let mut gs = vec![0.0; self.nodes[src.0].value.len()];
                    gs[*start..start + len].copy_from_slice(&g);
                    self.accum(&mut grads, *src, &gs);
                }
                Op::Tanh(a) => {
                    let y = &self.nodes[idx].value;
                    let ga: Vec<f64> = g.iter().zip(y).map(|(gi, yi)| gi * (1.0 - yi * yi)).collect();
                    self.accum(&mut grads, *a, &ga);
                }
                Op::Atanh(a) => {
                    let x = &self.nodes[a.0].value;
                    let ga: Vec<f64> =
                        g.iter().zip(x).map(|(gi, xi)| gi / (1.0 - xi * xi)).collect();
                    self.accum(&mut grads, *a, &ga);
                }
                Op::Tan(a) => {
                    let y = &self.nodes[idx].value;
                    let ga: Vec<f64> = g.iter().zip(y).map(|(gi, yi)| gi * (1.0 + yi * yi)).collect();
                    self.accum(&mut grads, *a, &ga);
                }
                Op::Atan(a) => {
                    let x = &self.nodes[a.0].value;
                    let ga: Vec<f64> =
                        g.iter().zip(x).map(|(gi, xi)| gi / (1.0 + xi * xi)).collect();
                    self.accum(&mut grads, *a, &ga);
                }
                Op::Exp(a) => {
                    let y = &self.nodes[idx].value;
                    let ga: Vec<f64> = g.iter().zip(y).map(|(gi, yi)| gi * yi).collect();
                    self.accum(&mut grads, *a, &ga);
                }
                Op::Ln(a) => {
                    let x = &self.nodes[a.0].value;
                    let ga: Vec<f64> = g.iter().zip(x).map(|(gi, xi)| gi / xi).collect();
                    self.accum(&mut grads, *a, &ga);
                }
                Op::Sqrt(a) => {
                    let y = &self.nodes[idx].value;
                    let ga: Vec<f64> = g.iter().zip(y).map(|(gi, yi)| gi * 0.5 / yi).collect();
                    self.accum(&mut grads, *a, &ga);
                }
                Op::Recip(a) => {
                    let y = &self.nodes[idx].value;
                    let ga: Vec<f64> = g.iter().zip(y).map(|(gi, yi)| -gi * yi * yi).collect();
                    self.accum(&mut grads, *a, &ga);
                }
                Op::Sigmoid(a) => {
                    let y = &self.nodes[idx].value;
                    let ga: Vec<f64> =
                        g.iter().zip(y).map(|(gi, yi)| gi * yi * (1.0 - yi)).collect();
                    self.accum(&mut grads, *a, &ga);
                }
                Op::ClampMin(a, c) => {
                    let x = &self.nodes[a.0].value;
                    let ga: Vec<f64> =
                        g.iter().zip(x).map(|(gi, xi)| if *xi > *c { *gi } else { 0.0 }).collect();
                    self.accum(&mut grads, *a, &ga);
                }
                Op::ClampMax(a, c) => {
                    let x = &self.nodes[a.0].value;
                    let ga: Vec<f64> =
                        g.iter().zip(x).map(|(gi, xi)| if *xi < *c { *gi } else { 0.0 }).collect();
                    self.accum(&mut grads, *a, &ga);
                }
                Op::LogSumExp(vars) => {
                    let out = self.nodes[idx].value[0];
                    let g0 = g[0];
                    for v in vars {
                        let w = (self.nodes[v.0].value[0] - out).exp();
                        self.accum(&mut grads, *v, &[g0 * w]);
                    }
                }
            }
        }
        Gradients { grads }
    }

    fn accum(&self, grads: &mut [Option<Vec<f64>>], v: Var, g: &[f64]) {
        match &mut grads[v.0] {
            Some(acc) => {
                for (a, x) in acc.iter_mut().zip(g) {
                    *a += x;
                }
            }
            slot => *slot = Some(g.to_vec()),
        }
    }
}

/// Gradient of the root with respect to every node.
pub struct Gradients {
    grads: Vec<Option<Vec<f64>>>,
}

impl Gradients {
    /// Gradient for `v`; zero-filled if `v` does not influence the root.
    pub fn get(&self, v: Var, len: usize) -> Vec<f64> {
        self.grads[v.0].clone().unwrap_or_else(|| vec![0.0; len])
    }
}

const NORM_FLOOR_SQ: f64 = 1e-30;

/// ‖v‖ with the squared norm floored at 1e−30 before the square root.
pub fn ad_norm(t: &mut Tape, v: Var) -> Var {
    let d = t.dot(v, v);
    let c = t.clamp_min(d, NORM_FLOOR_SQ);
    t.sqrt(c)
}

/// tan_κ(s · x) as a tape op, with the 1/√|κ| handled by the caller.
fn ad_tan_kappa(t: &mut Tape, x: Var, kappa: Curvature) -> Var {
    if kappa.kappa() < 0.0 {
        t.tanh(x)
    } else {
        t.tan(x)
    }
}

/// tan_κ⁻¹ with the κ < 0 argument clamped at 1 − BOUNDARY_EPS, matching
/// the non-tape operations.
fn ad_taninv_kappa(t: &mut Tape, x: Var, kappa: Curvature) -> Var {
    if kappa.kappa() < 0.0 {
        let c = t.clamp_max(x, 1.0 - BOUNDARY_EPS);
        t.atanh(c)
    } else {
        t.atan(x)
    }
}

/// exp_ν(v): lift of flat coordinates at the basepoint.
pub fn ad_lift0(t: &mut Tape, v: Var, kappa: Curvature) -> Var {
    if kappa.is_flat() {
        return t.cmul(v, 1.0);
    }
    let sk = kappa.sqrt_abs();
    let n = ad_norm(t, v);
    let arg = t.cmul(n, sk);
    let tn = ad_tan_kappa(t, arg, kappa);
    let r = t.recip(n);
    let s = t.mul(tn, r);
    let s = t.cmul(s, 1.0 / sk);
    t.smul(v, s)
}

/// log_ν(x): tangent coordinates at the basepoint.
pub fn ad_drop0(t: &mut Tape, x: Var, kappa: Curvature) -> Var {
    if kappa.is_flat() {
        return t.cmul(x, 1.0);
    }
    let sk = kappa.sqrt_abs();
    let n = ad_norm(t, x);
    let arg = t.cmul(n, sk);
    let th = ad_taninv_kappa(t, arg, kappa);
    let r = t.recip(n);
    let s = t.mul(th, r);
    let s = t.cmul(s, 1.0 / sk);
    t.smul(x, s)
}

/// x ⊕_κ y.
pub fn ad_mobius_add(t: &mut Tape, x: Var, y: Var, kappa: Curvature) -> Var {
    if kappa.is_flat() {
        return t.add(x, y);
    }
    let k = kappa.kappa();
    let x2 = t.dot(x, x);
    let y2 = t.dot(y, y);
    let xy = t.dot(x, y);
    let a = t.cmul(xy, -2.0 * k);
    let b = t.cmul(y2, -k);
    let cx = t.add(a, b);
    let cx = t.cadd(cx, 1.0);
    let cy = t.cmul(x2, k);
    let cy = t.cadd(cy, 1.0);
    let x2y2 = t.mul(x2, y2);
    let d1 = t.cmul(xy, -2.0 * k);
    let d2 = t.cmul(x2y2, k * k);
    let den = t.add(d1, d2);
    let den = t.cadd(den, 1.0);
    let nx = t.smul(x, cx);
    let ny = t.smul(y, cy);
    let num = t.add(nx, ny);
    let rden = t.recip(den);
    t.smul(num, rden)
}

/// d_κ(x, y); the flat branch is 2‖x−y‖.
pub fn ad_distance(t: &mut Tape, x: Var, y: Var, kappa: Curvature) -> Var {
    if kappa.is_flat() {
        let d = t.sub(x, y);
        let n = ad_norm(t, d);
        return t.cmul(n, 2.0);
    }
    let nx = t.neg(x);
    let w = ad_mobius_add(t, nx, y, kappa);
    let sk = kappa.sqrt_abs();
    let n = ad_norm(t, w);
    let arg = t.cmul(n, sk);
    let th = ad_taninv_kappa(t, arg, kappa);
    t.cmul(th, 2.0 / sk)
}

/// r ⊗_κ z with a constant scale factor.
pub fn ad_gyro_scale_const(t: &mut Tape, r: f64, z: Var, kappa: Curvature) -> Var {
    if kappa.is_flat() {
        return t.cmul(z, r);
    }
    let sk = kappa.sqrt_abs();
    let n = ad_norm(t, z);
    let arg = t.cmul(n, sk);
    let th = ad_taninv_kappa(t, arg, kappa);
    let th = t.cmul(th, r);
    let tn = ad_tan_kappa(t, th, kappa);
    let rn = t.recip(n);
    let s = t.mul(tn, rn);
    let s = t.cmul(s, 1.0 / sk);
    t.smul(z, s)
}

/// λ_x = 2/(1 + κ‖x‖²) as a scalar node.
pub fn ad_conformal(t: &mut Tape, x: Var, kappa: Curvature) -> Var {
    let x2 = t.dot(x, x);
    let d = t.cmul(x2, kappa.kappa());
    let d = t.cadd(d, 1.0);
    let r = t.recip(d);
    t.cmul(r, 2.0)
}

/// Aggregation weights: fixed constants or tape scalars.
pub enum MidWeights<'a> {
    Const(&'a [f64]),
    Vars(&'a [Var]),
}

/// Weighted gyromidpoint (1/2) ⊗ Σ_i [w_i λ_i / Σ_j w_j (λ_j − 1)] x_i.
/// Var weights are assumed normalized to sum 1 on the flat branch.
pub fn ad_gyromidpoint(
    t: &mut Tape,
    points: &[Var],
    weights: &MidWeights<'_>,
    kappa: Curvature,
) -> Var {
    assert!(!points.is_empty());
    if kappa.is_flat() {
        let terms: Vec<Var> = match weights {
            MidWeights::Const(ws) => {
                let total: f64 = ws.iter().sum();
                points.iter().zip(ws.iter()).map(|(p, w)| t.cmul(*p, w / total)).collect()
            }
            MidWeights::Vars(ws) => {
                points.iter().zip(ws.iter()).map(|(p, w)| t.smul(*p, *w)).collect()
            }
        };
        return t.add_n(&terms);
    }
    let lambdas: Vec<Var> = points.iter().map(|p| ad_conformal(t, *p, kappa)).collect();
    let den_terms: Vec<Var> = match weights {
        MidWeights::Const(ws) => lambdas
            .iter()
            .zip(ws.iter())
            .map(|(l, w)| {
                let lm1 = t.cadd(*l, -1.0);
                t.cmul(lm1, *w)
            })
            .collect(),
        MidWeights::Vars(ws) => lambdas
            .iter()
            .zip(ws.iter())
            .map(|(l, w)| {
                let lm1 = t.cadd(*l, -1.0);
                t.mul(lm1, *w)
            })
            .collect(),
    };
    let den = t.add_n(&den_terms);
    let rden = t.recip(den);
    let terms: Vec<Var> = points
        .iter()
        .zip(lambdas.iter())
        .enumerate()
        .map(|(i, (p, l))| {
            let wl = match weights {
                MidWeights::Const(ws) => t.cmul(*l, ws[i]),
                MidWeights::Vars(ws) => t.mul(*l, ws[i]),
            };
            let coef = t.mul(wl, rden);
            t.smul(*p, coef)
        })
        .collect();
    let z = t.add_n(&terms);
    ad_gyro_scale_const(t, 0.5, z, kappa)
}

/// sim_κ(x, y)/τ: inner product of origin tangents, each point log-mapped
/// in its own manifold.
pub fn ad_sim(
    t: &mut Tape,
    x: Var,
    kx: Curvature,
    y: Var,
    ky: Curvature,
    inv_tau: f64,
) -> Var {
    let tx = ad_drop0(t, x, kx);
    let ty = ad_drop0(t, y, ky);
    let d = t.dot(tx, ty);
    t.cmul(d, inv_tau)
}

/// Loads a [`Mat`] as a leaf (flattened row-major).
pub fn mat_leaf(t: &mut Tape, m: &Mat) -> Var {
    t.leaf(m.data().to_vec())
}
