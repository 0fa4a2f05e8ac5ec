//! Constant-curvature (κ-stereographic) vector algebra.
//!
//! One coordinate model covers all three constant-curvature geometries: for
//! κ < 0 the open ball of radius 1/√(−κ), for κ ≥ 0 all of Rᵈ, with the
//! conformal metric g = (λ_x^κ)² I, λ_x^κ = 2/(1 + κ‖x‖²). The κ = 0 case is
//! an exact Euclidean code branch (vector sum, distance 2‖x−y‖, identity
//! maps at the origin), never a numerical limit of the curved formulas.
//!
//! All operations are pure; values are immutable after construction.

use crate::linalg::{self, Mat};
use crate::{Error, Result};

/// Largest admissible |κ|.
pub const KAPPA_MAX: f64 = 10.0;

/// Relative margin kept from the open-ball boundary when κ < 0.
pub const BOUNDARY_EPS: f64 = 1e-7;

/// Norms below this are treated as zero before division.
pub const TANGENT_FLOOR: f64 = 1e-15;

/// Denominators below this magnitude raise a singularity error.
pub const SINGULARITY_EPS: f64 = 1e-15;

/// Sectional curvature of a κ-stereographic space.
///
/// The exact Euclidean branch is tracked by a dedicated flag so that κ = 0
/// is never confused with a small nonzero curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvature {
    kappa: f64,
    flat: bool,
}

impl Curvature {
    pub fn new(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::Domain(format!("curvature must be finite, got {kappa}")));
        }
        if kappa.abs() > KAPPA_MAX {
            return Err(Error::Domain(format!(
                "curvature magnitude {} exceeds KAPPA_MAX={KAPPA_MAX}",
                kappa.abs()
            )));
        }
        Ok(Curvature { kappa, flat: kappa == 0.0 })
    }

    /// The exact Euclidean branch.
    pub fn flat() -> Self {
        Curvature { kappa: 0.0, flat: true }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn is_flat(&self) -> bool {
        self.flat
    }

    /// √|κ|.
    pub fn sqrt_abs(&self) -> f64 {
        self.kappa.abs().sqrt()
    }

    /// Open-ball radius 1/√(−κ) for κ < 0, +∞ otherwise.
    pub fn ball_radius(&self) -> f64 {
        if self.kappa < 0.0 {
            1.0 / (-self.kappa).sqrt()
        } else {
            f64::INFINITY
        }
    }
}

/// A point of the κ-stereographic model: −κ‖x‖² < 1 holds strictly.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldPoint {
    coords: Vec<f64>,
    kappa: Curvature,
}

impl ManifoldPoint {
    /// Validates the domain constraint without altering coordinates.
    pub fn new(coords: Vec<f64>, kappa: Curvature) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("point coordinates must be finite".into()));
        }
        let n2 = linalg::dot(&coords, &coords);
        if -kappa.kappa() * n2 >= 1.0 {
            return Err(Error::Domain(format!(
                "point outside manifold: -kappa*|x|^2 = {} >= 1",
                -kappa.kappa() * n2
            )));
        }
        Ok(ManifoldPoint { coords, kappa })
    }

    /// Builds a point from raw operation output, clamping the norm to
    /// (1 − BOUNDARY_EPS)·radius when κ < 0 before the domain re-check.
    pub fn project(mut coords: Vec<f64>, kappa: Curvature) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("point coordinates must be finite".into()));
        }
        if kappa.kappa() < 0.0 {
            let max_norm = (1.0 - BOUNDARY_EPS) * kappa.ball_radius();
            let n = linalg::norm(&coords);
            if n > max_norm {
                let s = max_norm / n;
                for c in coords.iter_mut() {
                    *c *= s;
                }
            }
        }
        ManifoldPoint::new(coords, kappa)
    }

    /// The basepoint ν (zero vector) of the stereographic model.
    pub fn origin(dim: usize, kappa: Curvature) -> Self {
        ManifoldPoint { coords: vec![0.0; dim], kappa }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn kappa(&self) -> Curvature {
        self.kappa
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.coords)
    }

    pub fn is_origin(&self) -> bool {
        self.norm() < TANGENT_FLOOR
    }

    fn neg(&self) -> ManifoldPoint {
        ManifoldPoint { coords: linalg::scale(&self.coords, -1.0), kappa: self.kappa }
    }
}

/// A tangent vector attached to a basepoint.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    coords: Vec<f64>,
    basepoint: ManifoldPoint,
}

impl TangentVector {
    pub fn new(coords: Vec<f64>, basepoint: ManifoldPoint) -> Result<Self> {
        if coords.len() != basepoint.dim() {
            return Err(Error::Input(format!(
                "tangent dimension {} does not match basepoint dimension {}",
                coords.len(),
                basepoint.dim()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("tangent coordinates must be finite".into()));
        }
        Ok(TangentVector { coords, basepoint })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn basepoint(&self) -> &ManifoldPoint {
        &self.basepoint
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.coords)
    }
}

/// Which curvature-sign-generic trigonometric function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigKind {
    Tan,
    TanInv,
    Cos,
    Sin,
}

/// Curvature trigonometry: hyperbolic for κ < 0, circular for κ > 0, the
/// shared limit x for κ = 0.
///
/// For κ < 0, `TanInv` clamps its argument to ±(1 − BOUNDARY_EPS) so points
/// pushed against the ball boundary stay evaluable.
pub fn trig_kappa(kind: TrigKind, x: f64, kappa: Curvature) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("trig_kappa input must be finite, got {x}")));
    }
    if kappa.is_flat() {
        return Ok(x);
    }
    let v = if kappa.kappa() < 0.0 {
        match kind {
            TrigKind::Tan => x.tanh(),
            TrigKind::TanInv => x.clamp(-(1.0 - BOUNDARY_EPS), 1.0 - BOUNDARY_EPS).atanh(),
            TrigKind::Cos => x.cosh(),
            TrigKind::Sin => x.sinh(),
        }
    } else {
        match kind {
            TrigKind::Tan => x.tan(),
            TrigKind::TanInv => x.atan(),
            TrigKind::Cos => x.cos(),
            TrigKind::Sin => x.sin(),
        }
    };
    Ok(v)
}

/// Conformal factor λ_x^κ = 2/(1 + κ‖x‖²); strictly positive on the domain.
pub fn conformal_factor(x: &ManifoldPoint) -> f64 {
    let n2 = linalg::dot(x.coords(), x.coords());
    2.0 / (1.0 + x.kappa.kappa() * n2)
}

fn check_pair(x: &ManifoldPoint, y: &ManifoldPoint) -> Result<()> {
    if x.kappa != y.kappa {
        return Err(Error::Input(format!(
            "curvature mismatch: {} vs {}",
            x.kappa.kappa(),
            y.kappa.kappa()
        )));
    }
    if x.dim() != y.dim() {
        return Err(Error::Input(format!("dimension mismatch: {} vs {}", x.dim(), y.dim())));
    }
    Ok(())
}

/// Gyrovector addition x ⊕_κ y.
pub fn mobius_add(x: &ManifoldPoint, y: &ManifoldPoint) -> Result<ManifoldPoint> {
    check_pair(x, y)?;
    let kappa = x.kappa;
    if kappa.is_flat() {
        return ManifoldPoint::new(linalg::add(x.coords(), y.coords()), kappa);
    }
    let k = kappa.kappa();
    let x2 = linalg::dot(x.coords(), x.coords());
    let y2 = linalg::dot(y.coords(), y.coords());
    let xy = linalg::dot(x.coords(), y.coords());
    let den = 1.0 - 2.0 * k * xy + k * k * x2 * y2;
    if den.abs() < SINGULARITY_EPS {
        return Err(Error::Singularity(format!("gyro addition denominator {den} below 1e-15")));
    }
    let cx = (1.0 - 2.0 * k * xy - k * y2) / den;
    let cy = (1.0 + k * x2) / den;
    let mut out = linalg::scale(x.coords(), cx);
    linalg::axpy(&mut out, cy, y.coords());
    ManifoldPoint::project(out, kappa)
}

/// Gyrovector scaling r ⊗_κ x = (1/√|κ|)·tan_κ(r·tan_κ⁻¹(√|κ|‖x‖))·x/‖x‖.
pub fn gyro_scale(r: f64, x: &ManifoldPoint) -> Result<ManifoldPoint> {
    if !r.is_finite() {
        return Err(Error::Domain(format!("scale factor must be finite, got {r}")));
    }
    let kappa = x.kappa;
    if kappa.is_flat() {
        return ManifoldPoint::new(linalg::scale(x.coords(), r), kappa);
    }
    let n = x.norm();
    if n < TANGENT_FLOOR || r == 0.0 {
        return Ok(ManifoldPoint::origin(x.dim(), kappa));
    }
    let sk = kappa.sqrt_abs();
    let theta = trig_kappa(TrigKind::TanInv, sk * n, kappa)?;
    let s = trig_kappa(TrigKind::Tan, r * theta, kappa)? / sk;
    ManifoldPoint::project(linalg::scale(x.coords(), s / n), kappa)
}

/// Exponential map exp_x^κ(v) = x ⊕_κ (tan_κ(√|κ|·λ_x‖v‖/2)·v/(√|κ|‖v‖)).
pub fn exp_map(x: &ManifoldPoint, v: &TangentVector) -> Result<ManifoldPoint> {
    if v.basepoint().coords() != x.coords() || v.basepoint().kappa() != x.kappa() {
        return Err(Error::Input("tangent vector is not based at x".into()));
    }
    let kappa = x.kappa;
    if kappa.is_flat() {
        return ManifoldPoint::new(linalg::add(x.coords(), v.coords()), kappa);
    }
    let vn = v.norm();
    if vn < TANGENT_FLOOR {
        return Ok(x.clone());
    }
    let sk = kappa.sqrt_abs();
    let lam = conformal_factor(x);
    let g = trig_kappa(TrigKind::Tan, sk * lam * vn / 2.0, kappa)? / sk;
    let step = ManifoldPoint::project(linalg::scale(v.coords(), g / vn), kappa)?;
    mobius_add(x, &step)
}

/// Logarithmic map log_x^κ(y); inverse of [`exp_map`] at the same basepoint.
pub fn log_map(x: &ManifoldPoint, y: &ManifoldPoint) -> Result<TangentVector> {
    check_pair(x, y)?;
    let kappa = x.kappa;
    if kappa.is_flat() {
        return TangentVector::new(linalg::sub(y.coords(), x.coords()), x.clone());
    }
    let w = mobius_add(&x.neg(), y)?;
    let wn = w.norm();
    if wn < TANGENT_FLOOR {
        return TangentVector::new(vec![0.0; x.dim()], x.clone());
    }
    let sk = kappa.sqrt_abs();
    let lam = conformal_factor(x);
    let s = 2.0 / (lam * sk) * trig_kappa(TrigKind::TanInv, sk * wn, kappa)?;
    TangentVector::new(linalg::scale(w.coords(), s / wn), x.clone())
}

/// Geodesic distance d_κ(x,y) = (2/√|κ|)·tan_κ⁻¹(√|κ|‖−x ⊕_κ y‖); the κ = 0
/// branch is the analytic limit 2‖x−y‖.
pub fn distance(x: &ManifoldPoint, y: &ManifoldPoint) -> Result<f64> {
    check_pair(x, y)?;
    let kappa = x.kappa;
    if kappa.is_flat() {
        return Ok(2.0 * linalg::norm(&linalg::sub(x.coords(), y.coords())));
    }
    // Arguments are ordered canonically so symmetry is exact in floating point.
    let (a, b) = if x.coords() <= y.coords() { (x, y) } else { (y, x) };
    let w = mobius_add(&a.neg(), b)?;
    let sk = kappa.sqrt_abs();
    Ok(2.0 / sk * trig_kappa(TrigKind::TanInv, sk * w.norm(), kappa)?)
}

/// Möbius matrix-vector product M ⊗_κ x = exp_ν(M·log_ν(x)).
///
/// M·log_ν(x) numerically zero with x ≠ 0 returns the origin of the output
/// space (documented convention).
pub fn mobius_matvec(m: &Mat, x: &ManifoldPoint) -> Result<ManifoldPoint> {
    if m.cols() != x.dim() {
        return Err(Error::Input(format!(
            "matrix has {} columns but point has dimension {}",
            m.cols(),
            x.dim()
        )));
    }
    let u = drop_to_tangent(x);
    let w = m.matvec(&u);
    lift_to_manifold(&w, x.kappa)
}

/// Weighted gyromidpoint
/// μ = (1/2) ⊗_κ Σ_i [w_i λ_{x_i} / Σ_j w_j (λ_{x_j} − 1)] x_i.
///
/// The κ = 0 branch reduces to the Euclidean weighted mean.
pub fn gyromidpoint(points: &[ManifoldPoint], weights: &[f64]) -> Result<ManifoldPoint> {
    if points.is_empty() || points.len() != weights.len() {
        return Err(Error::Input(format!(
            "gyromidpoint needs matching non-empty points/weights, got {}/{}",
            points.len(),
            weights.len()
        )));
    }
    let kappa = points[0].kappa;
    for p in points.iter().skip(1) {
        check_pair(&points[0], p)?;
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::Input("gyromidpoint weights must be finite and non-negative".into()));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::Input("gyromidpoint needs at least one positive weight".into()));
    }

    if kappa.is_flat() {
        let mut acc = vec![0.0; points[0].dim()];
        for (p, w) in points.iter().zip(weights) {
            linalg::axpy(&mut acc, w / total, p.coords());
        }
        return ManifoldPoint::new(acc, kappa);
    }

    let lambdas: Vec<f64> = points.iter().map(conformal_factor).collect();
    let den: f64 = weights.iter().zip(&lambdas).map(|(w, l)| w * (l - 1.0)).sum();
    if den.abs() < SINGULARITY_EPS {
        return Err(Error::Singularity("gyromidpoint denominator below 1e-15".into()));
    }
    let mut acc = vec![0.0; points[0].dim()];
    for ((p, w), l) in points.iter().zip(weights).zip(&lambdas) {
        linalg::axpy(&mut acc, w * l / den, p.coords());
    }
    let z = ManifoldPoint::project(acc, kappa)?;
    gyro_scale(0.5, &z)
}

/// Lifts a flat vector to the manifold: exp_ν(v) with v read as a tangent
/// vector at the basepoint ν = 0. Inverse of [`drop_to_tangent`].
pub fn lift_to_manifold(x_flat: &[f64], kappa: Curvature) -> Result<ManifoldPoint> {
    if x_flat.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("lift input must be finite".into()));
    }
    if kappa.is_flat() {
        return ManifoldPoint::new(x_flat.to_vec(), kappa);
    }
    let n = linalg::norm(x_flat);
    if n < TANGENT_FLOOR {
        return Ok(ManifoldPoint::origin(x_flat.len(), kappa));
    }
    // At ν the conformal factor is 2, so the exp-map argument is √|κ|·‖v‖.
    let sk = kappa.sqrt_abs();
    let g = trig_kappa(TrigKind::Tan, sk * n, kappa)? / sk;
    ManifoldPoint::project(linalg::scale(x_flat, g / n), kappa)
}

/// Tangent coordinates log_ν(x) at the basepoint ν = 0.
pub fn drop_to_tangent(x: &ManifoldPoint) -> Vec<f64> {
    if x.kappa.is_flat() {
        return x.coords().to_vec();
    }
    let n = x.norm();
    if n < TANGENT_FLOOR {
        return vec![0.0; x.dim()];
    }
    let sk = x.kappa.sqrt_abs();
    // trig_kappa clamps the atanh argument; inputs are already domain-checked.
    let s = trig_kappa(TrigKind::TanInv, sk * n, x.kappa).expect("finite by construction") / sk;
    linalg::scale(x.coords(), s / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn k(v: f64) -> Curvature {
        Curvature::new(v).unwrap()
    }

    fn pt(coords: &[f64], kappa: f64) -> ManifoldPoint {
        ManifoldPoint::new(coords.to_vec(), k(kappa)).unwrap()
    }

    #[test]
    fn curvature_validation() {
        assert!(Curvature::new(f64::NAN).is_err());
        assert!(Curvature::new(10.5).is_err());
        assert!(Curvature::new(-1.0).is_ok());
        assert!(Curvature::new(0.0).unwrap().is_flat());
        assert!(!Curvature::new(1e-9).unwrap().is_flat());
        assert!(Curvature::flat().is_flat());
    }

    #[test]
    fn domain_constraint_enforced() {
        // kappa = -1: open unit ball.
        assert!(ManifoldPoint::new(vec![0.999, 0.0], k(-1.0)).is_ok());
        assert!(ManifoldPoint::new(vec![1.0, 0.0], k(-1.0)).is_err());
        // kappa >= 0: unconstrained.
        assert!(ManifoldPoint::new(vec![5.0, 5.0], k(1.0)).is_ok());
        assert!(ManifoldPoint::new(vec![5.0, 5.0], k(0.0)).is_ok());
    }

    #[test]
    fn trig_examples() {
        assert_eq!(trig_kappa(TrigKind::Tan, 0.0, k(-1.0)).unwrap(), 0.0);
        assert_relative_eq!(
            trig_kappa(TrigKind::Tan, 0.5, k(-1.0)).unwrap(),
            0.46211715726_f64,
            max_relative = 1e-10
        );
        assert_eq!(trig_kappa(TrigKind::Tan, 0.5, k(0.0)).unwrap(), 0.5);
        assert_relative_eq!(trig_kappa(TrigKind::Tan, 0.5, k(1.0)).unwrap(), 0.5_f64.tan());
        assert!(trig_kappa(TrigKind::Tan, f64::INFINITY, k(-1.0)).is_err());
        // atanh clamp keeps boundary arguments finite.
        assert!(trig_kappa(TrigKind::TanInv, 1.0, k(-1.0)).unwrap().is_finite());
    }

    #[test]
    fn conformal_factor_examples() {
        assert_eq!(conformal_factor(&pt(&[0.0, 0.0], -1.0)), 2.0);
        assert_eq!(conformal_factor(&pt(&[3.0, 4.0], 0.0)), 2.0);
        assert_relative_eq!(conformal_factor(&pt(&[0.5, 0.0], -1.0)), 8.0 / 3.0);
    }

    #[test]
    fn mobius_add_examples() {
        let x = pt(&[0.3, 0.0], -1.0);
        let zero = pt(&[0.0, 0.0], -1.0);
        let r = mobius_add(&x, &zero).unwrap();
        assert_relative_eq!(r.coords()[0], 0.3, max_relative = 1e-12);

        let a = pt(&[0.3, 0.0], 0.0);
        let b = pt(&[0.2, 0.0], 0.0);
        assert_eq!(mobius_add(&a, &b).unwrap().coords(), &[0.5, 0.0]);

        // Collinear kappa = -1 reduces to (a+b)/(1+ab).
        let a = pt(&[0.3, 0.0], -1.0);
        let b = pt(&[0.2, 0.0], -1.0);
        let r = mobius_add(&a, &b).unwrap();
        assert_relative_eq!(r.coords()[0], 0.5 / 1.06, max_relative = 1e-12);
        assert_eq!(r.coords()[1], 0.0);
    }

    #[test]
    fn mobius_add_singularity() {
        // kappa > 0: doubling an equator point projects to infinity.
        let x = pt(&[1.0, 0.0], 1.0);
        assert!(matches!(mobius_add(&x, &x), Err(Error::Singularity(_))));
    }

    #[test]
    fn gyro_scale_examples() {
        let x = pt(&[0.3, 0.0], -1.0);
        let r1 = gyro_scale(1.0, &x).unwrap();
        assert_relative_eq!(r1.coords()[0], 0.3, max_relative = 1e-12);

        let r0 = gyro_scale(0.0, &x).unwrap();
        assert!(r0.is_origin());

        let r2 = gyro_scale(2.0, &x).unwrap();
        // Double-angle oracle: tanh(2 atanh t) = 2t/(1+t^2).
        assert_relative_eq!(r2.coords()[0], 0.6 / 1.09, max_relative = 1e-12);

        let f = pt(&[0.3, -0.4], 0.0);
        assert_eq!(gyro_scale(2.0, &f).unwrap().coords(), &[0.6, -0.8]);
    }

    #[test]
    fn exp_log_examples() {
        let o = ManifoldPoint::origin(2, k(-1.0));
        let v = TangentVector::new(vec![0.5, 0.0], o.clone()).unwrap();
        let p = exp_map(&o, &v).unwrap();
        assert_relative_eq!(p.coords()[0], 0.5_f64.tanh(), max_relative = 1e-12);

        let back = log_map(&o, &p).unwrap();
        assert_relative_eq!(back.coords()[0], 0.5, max_relative = 1e-9);

        // v = 0 -> x.
        let x = pt(&[0.2, 0.1], -1.0);
        let z = TangentVector::new(vec![0.0, 0.0], x.clone()).unwrap();
        assert_eq!(exp_map(&x, &z).unwrap().coords(), x.coords());

        // Flat branch: exp at origin is the identity.
        let o0 = ManifoldPoint::origin(2, k(0.0));
        let v0 = TangentVector::new(vec![1.0, 2.0], o0.clone()).unwrap();
        assert_eq!(exp_map(&o0, &v0).unwrap().coords(), &[1.0, 2.0]);

        // log_x(x) = 0.
        let l = log_map(&x, &x).unwrap();
        assert_eq!(l.coords(), &[0.0, 0.0]);
    }

    #[test]
    fn distance_examples() {
        let x = pt(&[0.2, -0.3], -1.0);
        assert_eq!(distance(&x, &x).unwrap(), 0.0);

        let a = pt(&[0.0, 0.0], 0.0);
        let b = pt(&[0.3, 0.4], 0.0);
        assert_relative_eq!(distance(&a, &b).unwrap(), 1.0);

        let o = ManifoldPoint::origin(2, k(-1.0));
        let p = pt(&[0.5, 0.0], -1.0);
        assert_relative_eq!(distance(&o, &p).unwrap(), 2.0 * 0.5_f64.atanh(), max_relative = 1e-12);
        // Natural-log form of the same value.
        assert_relative_eq!(distance(&o, &p).unwrap(), (1.5_f64 / 0.5).ln(), max_relative = 1e-12);
    }

    #[test]
    fn matvec_examples() {
        let x = pt(&[0.3, 0.0], -1.0);
        let id = Mat::identity(2);
        let r = mobius_matvec(&id, &x).unwrap();
        assert_relative_eq!(r.coords()[0], 0.3, max_relative = 1e-9);

        let zero = Mat::zeros(2, 2);
        assert!(mobius_matvec(&zero, &x).unwrap().is_origin());

        // Scalar matrix reduces to gyro scaling.
        let two = Mat::from_data(2, 2, vec![2.0, 0.0, 0.0, 2.0]);
        let a = mobius_matvec(&two, &x).unwrap();
        let b = gyro_scale(2.0, &x).unwrap();
        assert_relative_eq!(a.coords()[0], b.coords()[0], max_relative = 1e-10);
    }

    #[test]
    fn matvec_agrees_with_closed_form_negative_kappa() {
        // Closed form: (1/sqrt|k|) tanh((|Mx|/|x|) atanh(sqrt|k| |x|)) Mx/|Mx|.
        let m = Mat::from_data(2, 2, vec![1.5, -0.3, 0.7, 0.2]);
        for kv in [-0.5, -1.0, -2.0] {
            let x = pt(&[0.25, -0.1], kv);
            let got = mobius_matvec(&m, &x).unwrap();
            let sk = (-kv as f64).sqrt();
            let mx = m.matvec(x.coords());
            let mxn = linalg::norm(&mx);
            let xn = x.norm();
            let s = (mxn / xn * (sk * xn).atanh()).tanh() / sk;
            let want = linalg::scale(&mx, s / mxn);
            for (g, w) in got.coords().iter().zip(&want) {
                assert_relative_eq!(g, w, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn gyromidpoint_examples() {
        let x = pt(&[0.3, 0.1], -1.0);
        let m = gyromidpoint(std::slice::from_ref(&x), &[1.0]).unwrap();
        for (a, b) in m.coords().iter().zip(x.coords()) {
            assert_relative_eq!(a, b, max_relative = 1e-9);
        }

        let nx = pt(&[-0.3, -0.1], -1.0);
        let mid = gyromidpoint(&[x.clone(), nx], &[1.0, 1.0]).unwrap();
        assert!(mid.norm() < 1e-12);

        // Flat branch: Euclidean weighted mean.
        let a = pt(&[1.0, 0.0], 0.0);
        let b = pt(&[0.0, 2.0], 0.0);
        let m = gyromidpoint(&[a, b], &[3.0, 1.0]).unwrap();
        assert_relative_eq!(m.coords()[0], 0.75);
        assert_relative_eq!(m.coords()[1], 0.5);

        let x = pt(&[0.3, 0.1], -1.0);
        assert!(gyromidpoint(std::slice::from_ref(&x), &[0.0]).is_err());
    }

    #[test]
    fn lift_drop_examples() {
        let kappa = k(-1.0);
        let p = lift_to_manifold(&[0.0, 0.0], kappa).unwrap();
        assert!(p.is_origin());

        let flat = lift_to_manifold(&[0.7, -0.2], k(0.0)).unwrap();
        assert_eq!(flat.coords(), &[0.7, -0.2]);

        let v = [0.4, -0.3, 0.2];
        for kv in [-2.0, -1.0, -0.1, 0.1, 1.0, 2.0] {
            let p = lift_to_manifold(&v, k(kv)).unwrap();
            let back = drop_to_tangent(&p);
            for (a, b) in back.iter().zip(&v) {
                assert_relative_eq!(a, b, max_relative = 1e-9);
            }
        }

        let x = pt(&[0.2, 0.1], -1.0);
        let dropped = drop_to_tangent(&x);
        let lifted = lift_to_manifold(&dropped, x.kappa()).unwrap();
        for (a, b) in lifted.coords().iter().zip(x.coords()) {
            assert_relative_eq!(a, b, max_relative = 1e-9);
        }
    }
}
