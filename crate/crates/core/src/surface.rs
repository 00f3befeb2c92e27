//! Spacelike surface patches, their jets and normal frames.

use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::expr::Expr;
use crate::minkowski::{causal_class_default, CausalClass, Vec4};
use crate::series::{self, Real, Taylor, V4};

/// Default threshold on `det g` below which the metric counts as degenerate.
pub const METRIC_DET_TOL: f64 = 1e-12;
/// Threshold on normalization norms inside the frame construction.
pub const FRAME_NORM_TOL: f64 = 1e-12;

/// Closed rectangle `[a1, b1] x [a2, b2]` of parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub u1: (f64, f64),
    pub u2: (f64, f64),
}

impl Domain {
    pub fn new(a1: f64, b1: f64, a2: f64, b2: f64) -> Self {
        Domain { u1: (a1, b1), u2: (a2, b2) }
    }

    pub fn span(&self) -> (f64, f64) {
        (self.u1.1 - self.u1.0, self.u2.1 - self.u2.0)
    }

    pub fn area(&self) -> f64 {
        let (s1, s2) = self.span();
        s1 * s2
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.u1.0 + self.u1.1), 0.5 * (self.u2.0 + self.u2.1))
    }

    /// Membership with a relative slack of 1e-12 of the span, so grid nodes
    /// computed by floating arithmetic on the boundary are accepted.
    pub fn contains(&self, u1: f64, u2: f64) -> bool {
        let (s1, s2) = self.span();
        let (e1, e2) = (1e-12 * s1.abs().max(1.0), 1e-12 * s2.abs().max(1.0));
        u1 >= self.u1.0 - e1 && u1 <= self.u1.1 + e1 && u2 >= self.u2.0 - e2 && u2 <= self.u2.1 + e2
    }

    /// The same rectangle shrunk by `margin` on every side.
    pub fn shrink(&self, margin: f64) -> Domain {
        Domain::new(self.u1.0 + margin, self.u1.1 - margin, self.u2.0 + margin, self.u2.1 - margin)
    }
}

/// Value and partial derivatives up to order 3 of a map `U -> R^4_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub x: Vec4,
    pub x1: Vec4,
    pub x2: Vec4,
    pub x11: Vec4,
    pub x12: Vec4,
    pub x22: Vec4,
    pub x111: Vec4,
    pub x112: Vec4,
    pub x122: Vec4,
    pub x222: Vec4,
    /// Highest derivative order that carries meaningful data.
    pub valid_order: usize,
}

impl Jet3 {
    /// First partial `X_{u_i}` with `i` in `{0, 1}`.
    pub fn d1(&self, i: usize) -> Vec4 {
        [self.x1, self.x2][i]
    }

    /// Second partial `X_{u_i u_j}`.
    pub fn d2(&self, i: usize, j: usize) -> Vec4 {
        match i + j {
            0 => self.x11,
            1 => self.x12,
            _ => self.x22,
        }
    }

    /// Third partial `X_{u_i u_j u_k}`.
    pub fn d3(&self, i: usize, j: usize, k: usize) -> Vec4 {
        match i + j + k {
            0 => self.x111,
            1 => self.x112,
            2 => self.x122,
            _ => self.x222,
        }
    }

    pub fn from_series(s: &V4<Taylor>, valid_order: usize) -> Jet3 {
        let p = |a: usize, b: usize| {
            Vec4::new(s[0].partial(a, b), s[1].partial(a, b), s[2].partial(a, b), s[3].partial(a, b))
        };
        Jet3 {
            x: p(0, 0),
            x1: p(1, 0),
            x2: p(0, 1),
            x11: p(2, 0),
            x12: p(1, 1),
            x22: p(0, 2),
            x111: p(3, 0),
            x112: p(2, 1),
            x122: p(1, 2),
            x222: p(0, 3),
            valid_order,
        }
    }

    /// Inverse of [`Jet3::from_series`]: the Taylor polynomial of the jet.
    pub fn to_series(&self) -> V4<Taylor> {
        let parts = [
            (self.x, 1.0),
            (self.x1, 1.0),
            (self.x2, 1.0),
            (self.x11, 0.5),
            (self.x12, 1.0),
            (self.x22, 0.5),
            (self.x111, 1.0 / 6.0),
            (self.x112, 0.5),
            (self.x122, 0.5),
            (self.x222, 1.0 / 6.0),
        ];
        let mut out = [Taylor::default(); 4];
        for (k, t) in out.iter_mut().enumerate() {
            for (i, (v, w)) in parts.iter().enumerate() {
                t.c[i] = v[k] * w;
            }
        }
        out
    }

    fn is_finite(&self) -> bool {
        [self.x, self.x1, self.x2, self.x11, self.x12, self.x22, self.x111, self.x112, self.x122, self.x222]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// Origin of a patch's jets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    ClosedForm,
    ExpressionAD,
    FiniteDifference,
}

/// How the future-directed timelike normal is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FrameRule {
    /// Normalized normal projection of `e0`.
    #[default]
    ProjectE0,
    /// `nT = X`, for patches in hyperbolic 3-space.
    TimelikePosition,
    /// `nS = X`, for patches in de Sitter 3-space.
    SpacelikePosition,
}

/// A map from Taylor seeds `(u1, u2)` to the four coordinate series.
pub type SeriesMap = Arc<dyn Fn(&Taylor, &Taylor) -> V4<Taylor> + Send + Sync>;
/// A plain point evaluator, differentiated by finite differences.
pub type PointMap = Arc<dyn Fn(f64, f64) -> Vec4 + Send + Sync>;

#[derive(Clone)]
pub enum Evaluator {
    /// Exact to order `order`.
    Series {
        map: SeriesMap,
        order: usize,
    },
    Points(PointMap),
}

/// A spacelike embedding `X: U -> R^4_1` on a parameter rectangle.
#[derive(Clone)]
pub struct SurfacePatch {
    pub name: String,
    pub domain: Domain,
    pub evaluator: Evaluator,
    pub provenance: Provenance,
    pub frame_rule: FrameRule,
}

impl fmt::Debug for SurfacePatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfacePatch")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("provenance", &self.provenance)
            .field("frame_rule", &self.frame_rule)
            .finish()
    }
}

impl SurfacePatch {
    pub fn closed_form<F>(name: &str, domain: Domain, f: F) -> Self
    where
        F: Fn(&Taylor, &Taylor) -> V4<Taylor> + Send + Sync + 'static,
    {
        SurfacePatch {
            name: name.to_string(),
            domain,
            evaluator: Evaluator::Series { map: Arc::new(f), order: 3 },
            provenance: Provenance::ClosedForm,
            frame_rule: FrameRule::ProjectE0,
        }
    }

    /// A patch from four coordinate expressions in `u1`, `u2`.
    pub fn from_expressions(name: &str, domain: Domain, coords: [&str; 4]) -> Result<Self> {
        let exprs =
            [Expr::parse(coords[0])?, Expr::parse(coords[1])?, Expr::parse(coords[2])?, Expr::parse(coords[3])?];
        let map = move |u1: &Taylor, u2: &Taylor| {
            [
                exprs[0].eval_series(u1, u2),
                exprs[1].eval_series(u1, u2),
                exprs[2].eval_series(u1, u2),
                exprs[3].eval_series(u1, u2),
            ]
        };
        Ok(SurfacePatch {
            name: name.to_string(),
            domain,
            evaluator: Evaluator::Series { map: Arc::new(map), order: 3 },
            provenance: Provenance::ExpressionAD,
            frame_rule: FrameRule::ProjectE0,
        })
    }

    /// The graph `(f, g, u1, u2)` of two scalar expressions.
    pub fn graph(name: &str, domain: Domain, f: &str, g: &str) -> Result<Self> {
        SurfacePatch::from_expressions(name, domain, [f, g, "u1", "u2"])
    }

    /// A patch known only through point evaluations.
    pub fn from_points<F>(name: &str, domain: Domain, f: F) -> Self
    where
        F: Fn(f64, f64) -> Vec4 + Send + Sync + 'static,
    {
        SurfacePatch {
            name: name.to_string(),
            domain,
            evaluator: Evaluator::Points(Arc::new(f)),
            provenance: Provenance::FiniteDifference,
            frame_rule: FrameRule::ProjectE0,
        }
    }

    pub fn with_frame_rule(mut self, rule: FrameRule) -> Self {
        self.frame_rule = rule;
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    /// Order up to which jets are exact (finite-difference jets report 3).
    pub fn jet_order(&self) -> usize {
        match &self.evaluator {
            Evaluator::Series { order, .. } => *order,
            Evaluator::Points(_) => 3,
        }
    }

    pub fn has_analytic_jets(&self) -> bool {
        matches!(self.evaluator, Evaluator::Series { .. })
    }

    fn check_domain(&self, u1: f64, u2: f64) -> Result<()> {
        if !u1.is_finite() || !u2.is_finite() || !self.domain.contains(u1, u2) {
            return Err(GeometryError::OutOfDomain { u1, u2 });
        }
        Ok(())
    }

    /// The position `X(u)`, without domain checks.
    pub fn position(&self, u1: f64, u2: f64) -> Vec4 {
        match &self.evaluator {
            Evaluator::Series { map, .. } => {
                let s = map(&Taylor::constant(u1), &Taylor::constant(u2));
                Vec4::new(s[0].value(), s[1].value(), s[2].value(), s[3].value())
            }
            Evaluator::Points(f) => f(u1, u2),
        }
    }

    /// Taylor expansion of `X` at `u`. Finite-difference patches expand
    /// their finite-difference jet.
    pub fn eval_series(&self, u1: f64, u2: f64) -> Result<V4<Taylor>> {
        self.check_domain(u1, u2)?;
        let s = match &self.evaluator {
            Evaluator::Series { map, .. } => map(&Taylor::variable(u1, 0), &Taylor::variable(u2, 1)),
            Evaluator::Points(f) => fd_jet(f.as_ref(), &self.domain, u1, u2).to_series(),
        };
        if s.iter().all(Taylor::is_finite) {
            Ok(s)
        } else {
            Err(GeometryError::NonFinite("surface evaluation"))
        }
    }

    /// The order-3 jet of `X` at `u`.
    pub fn eval_jet(&self, u1: f64, u2: f64) -> Result<Jet3> {
        self.check_domain(u1, u2)?;
        let jet = match &self.evaluator {
            Evaluator::Series { map, order } => {
                Jet3::from_series(&map(&Taylor::variable(u1, 0), &Taylor::variable(u2, 1)), *order)
            }
            Evaluator::Points(f) => fd_jet(f.as_ref(), &self.domain, u1, u2),
        };
        if jet.is_finite() {
            Ok(jet)
        } else {
            Err(GeometryError::NonFinite("surface evaluation"))
        }
    }

    /// The normal frame at `u` under this patch's frame rule.
    pub fn frame(&self, u1: f64, u2: f64) -> Result<NormalFrame> {
        normal_frame_with(&self.eval_jet(u1, u2)?, self.frame_rule)
    }

    /// Taylor expansions of `nT` and `nS` at `u`, exact to order 2.
    pub fn frame_series(&self, u1: f64, u2: f64) -> Result<(V4<Taylor>, V4<Taylor>)> {
        let x = self.eval_series(u1, u2)?;
        let x1 = x.map(|c| c.diff(0));
        let x2 = x.map(|c| c.diff(1));
        frame_generic(&x, &x1, &x2, self.frame_rule)
    }

    /// Checks that both tangent vectors are spacelike and `det g > 0` at
    /// every node of the given sample set.
    pub fn validate_spacelike(&self, nodes: &[(f64, f64)]) -> Result<()> {
        for &(u1, u2) in nodes {
            let jet = self.eval_jet(u1, u2)?;
            for v in [jet.x1, jet.x2] {
                if causal_class_default(v) != CausalClass::Spacelike {
                    return Err(GeometryError::DegenerateMetric { det: v.norm_sq() });
                }
            }
            first_fundamental_form(&jet)?;
        }
        Ok(())
    }
}

/// Central-difference jet of a point evaluator. Steps are `1e-4` of the
/// domain span for orders one and two and `1e-3` for order three, where
/// cancellation dominates earlier.
fn fd_jet(f: &(dyn Fn(f64, f64) -> Vec4 + Send + Sync), domain: &Domain, u1: f64, u2: f64) -> Jet3 {
    let (s1, s2) = domain.span();
    let (h1, h2) = (1e-4 * s1, 1e-4 * s2);
    let at = |a: f64, b: f64| f(u1 + a, u2 + b);
    let x = at(0.0, 0.0);
    let x1 = (at(h1, 0.0) - at(-h1, 0.0)) / (2.0 * h1);
    let x2 = (at(0.0, h2) - at(0.0, -h2)) / (2.0 * h2);
    let x11 = (at(h1, 0.0) - 2.0 * x + at(-h1, 0.0)) / (h1 * h1);
    let x22 = (at(0.0, h2) - 2.0 * x + at(0.0, -h2)) / (h2 * h2);
    let x12 = (at(h1, h2) - at(h1, -h2) - at(-h1, h2) + at(-h1, -h2)) / (4.0 * h1 * h2);

    let (k1, k2) = (1e-3 * s1, 1e-3 * s2);
    let x111 = (at(2.0 * k1, 0.0) - 2.0 * at(k1, 0.0) + 2.0 * at(-k1, 0.0) - at(-2.0 * k1, 0.0)) / (2.0 * k1.powi(3));
    let x222 = (at(0.0, 2.0 * k2) - 2.0 * at(0.0, k2) + 2.0 * at(0.0, -k2) - at(0.0, -2.0 * k2)) / (2.0 * k2.powi(3));
    let d11 = |b: f64| (at(k1, b) - 2.0 * at(0.0, b) + at(-k1, b)) / (k1 * k1);
    let d22 = |a: f64| (at(a, k2) - 2.0 * at(a, 0.0) + at(a, -k2)) / (k2 * k2);
    let x112 = (d11(k2) - d11(-k2)) / (2.0 * k2);
    let x122 = (d22(k1) - d22(-k1)) / (2.0 * k1);
    Jet3 { x, x1, x2, x11, x12, x22, x111, x112, x122, x222, valid_order: 3 }
}

/// The induced metric `g_ij = <X_{u_i}, X_{u_j}>` with its determinant
/// and inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric {
    pub g: Matrix2<f64>,
    pub det: f64,
    pub inv: Matrix2<f64>,
}

impl Metric {
    pub fn from_matrix(g: Matrix2<f64>, tol: f64) -> Result<Metric> {
        let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
        if !(det > tol) {
            return Err(GeometryError::DegenerateMetric { det });
        }
        let inv = Matrix2::new(g[(1, 1)], -g[(0, 1)], -g[(1, 0)], g[(0, 0)]) / det;
        Ok(Metric { g, det, inv })
    }

    /// The area element `sqrt(g11 g22 - g12^2)`.
    pub fn area_element(&self) -> f64 {
        self.det.sqrt()
    }
}

pub fn first_fundamental_form(jet: &Jet3) -> Result<Metric> {
    first_fundamental_form_tol(jet, METRIC_DET_TOL)
}

pub fn first_fundamental_form_tol(jet: &Jet3, tol: f64) -> Result<Metric> {
    let g12 = jet.x1.inner(jet.x2);
    let g = Matrix2::new(jet.x1.norm_sq(), g12, g12, jet.x2.norm_sq());
    Metric::from_matrix(g, tol)
}

/// The pair `(nT, nS)` with the lightlike normals `l+- = nT +- nS`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFrame {
    pub n_t: Vec4,
    pub n_s: Vec4,
    pub l_plus: Vec4,
    pub l_minus: Vec4,
}

impl NormalFrame {
    pub fn new(n_t: Vec4, n_s: Vec4) -> Self {
        NormalFrame { n_t, n_s, l_plus: n_t + n_s, l_minus: n_t - n_s }
    }

    /// The lightlike normal `nT + sign nS` for `sign = +-1`.
    pub fn ell(&self, sign: f64) -> Vec4 {
        if sign >= 0.0 {
            self.l_plus
        } else {
            self.l_minus
        }
    }

    /// Largest violation of the orthonormality relations.
    pub fn orthonormality_residual(&self) -> f64 {
        let a = (self.n_t.norm_sq() + 1.0).abs();
        let b = (self.n_s.norm_sq() - 1.0).abs();
        let c = self.n_t.inner(self.n_s).abs();
        a.max(b).max(c)
    }

    /// A normal-plane boost of rapidity `theta`; it rescales `l+` by
    /// `e^theta` and `l-` by `e^-theta`.
    pub fn boost(&self, theta: f64) -> NormalFrame {
        let (ch, sh) = (theta.cosh(), theta.sinh());
        NormalFrame::new(self.n_t * ch + self.n_s * sh, self.n_t * sh + self.n_s * ch)
    }
}

fn normalize<T: Real>(v: &V4<T>, timelike: bool) -> Result<V4<T>> {
    let q = series::inner(v, v);
    let q = if timelike { -q } else { q };
    if !(q.value() > FRAME_NORM_TOL) {
        return Err(GeometryError::FrameConstructionFailure { norm: q.value() });
    }
    let r = T::from(1.0) / q.sqrt();
    Ok(series::scale(v, r))
}

/// Normal projection of `e0`: `e0 - g^{ij} <e0, X_j> X_i`.
fn project_e0<T: Real>(x1: &V4<T>, x2: &V4<T>) -> Result<V4<T>> {
    let g11 = series::inner(x1, x1);
    let g12 = series::inner(x1, x2);
    let g22 = series::inner(x2, x2);
    let det = g11 * g22 - g12 * g12;
    if !(det.value() > METRIC_DET_TOL) {
        return Err(GeometryError::DegenerateMetric { det: det.value() });
    }
    // <e0, X_j> = -X_j[0]
    let b1 = -x1[0];
    let b2 = -x2[0];
    let c1 = (g22 * b1 - g12 * b2) / det;
    let c2 = (g11 * b2 - g12 * b1) / det;
    let zero = T::from(0.0);
    let e0 = [T::from(1.0), zero, zero, zero];
    Ok(series::sub(&series::sub(&e0, &series::scale(x1, c1)), &series::scale(x2, c2)))
}

/// Frame construction over any [`Real`] scalar, so running it on Taylor
/// series yields the derivatives of the frame.
pub fn frame_generic<T: Real>(x: &V4<T>, x1: &V4<T>, x2: &V4<T>, rule: FrameRule) -> Result<(V4<T>, V4<T>)> {
    match rule {
        FrameRule::ProjectE0 => {
            let n_t = normalize(&project_e0(x1, x2)?, true)?;
            let n_s = normalize(&series::wedge3(&n_t, x1, x2), false)?;
            Ok((n_t, n_s))
        }
        FrameRule::TimelikePosition => {
            let mut n_t = normalize(x, true)?;
            if n_t[0].value() < 0.0 {
                n_t = n_t.map(|c| -c);
            }
            let n_s = normalize(&series::wedge3(&n_t, x1, x2), false)?;
            Ok((n_t, n_s))
        }
        FrameRule::SpacelikePosition => {
            let n_s = normalize(x, false)?;
            let nu = project_e0(x1, x2)?;
            let c = series::inner(&nu, &n_s);
            let n_t = normalize(&series::sub(&nu, &series::scale(&n_s, c)), true)?;
            Ok((n_t, n_s))
        }
    }
}

fn to_vec4(v: &V4<f64>) -> Vec4 {
    Vec4::from_array(*v)
}

/// The default frame of a jet: `nT` from the projection of `e0`, `nS` from
/// the wedge product.
pub fn normal_frame(jet: &Jet3) -> Result<NormalFrame> {
    normal_frame_with(jet, FrameRule::ProjectE0)
}

pub fn normal_frame_with(jet: &Jet3, rule: FrameRule) -> Result<NormalFrame> {
    let (n_t, n_s) = frame_generic(&jet.x.to_array(), &jet.x1.to_array(), &jet.x2.to_array(), rule)?;
    Ok(NormalFrame::new(to_vec4(&n_t), to_vec4(&n_s)))
}

/// Partial derivatives of the frame fields; index 0 is `u1`, index 1 is `u2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameDerivatives {
    pub n_t: [Vec4; 2],
    pub n_s: [Vec4; 2],
    pub l_plus: [Vec4; 2],
    pub l_minus: [Vec4; 2],
}

impl FrameDerivatives {
    pub fn ell(&self, sign: f64) -> [Vec4; 2] {
        if sign >= 0.0 {
            self.l_plus
        } else {
            self.l_minus
        }
    }

    fn from_parts(n_t: [Vec4; 2], n_s: [Vec4; 2]) -> Self {
        FrameDerivatives {
            n_t,
            n_s,
            l_plus: [n_t[0] + n_s[0], n_t[1] + n_s[1]],
            l_minus: [n_t[0] - n_s[0], n_t[1] - n_s[1]],
        }
    }
}

/// Finite differences of the frame fields with step `h` in parameter
/// units: central where both neighbours lie in the domain, second-order
/// one-sided otherwise.
pub fn frame_derivatives(patch: &SurfacePatch, u1: f64, u2: f64, h: f64) -> Result<FrameDerivatives> {
    patch.check_domain(u1, u2)?;
    let dom = patch.domain;
    let mut n_t = [Vec4::ZERO; 2];
    let mut n_s = [Vec4::ZERO; 2];
    for k in 0..2 {
        let at = |s: f64| {
            let (a, b) = if k == 0 { (u1 + s * h, u2) } else { (u1, u2 + s * h) };
            patch.frame(a, b)
        };
        let inside = |s: f64| {
            let (a, b) = if k == 0 { (u1 + s * h, u2) } else { (u1, u2 + s * h) };
            dom.contains(a, b)
        };
        let (dt, ds) = if inside(1.0) && inside(-1.0) {
            let (p, m) = (at(1.0)?, at(-1.0)?);
            ((p.n_t - m.n_t) / (2.0 * h), (p.n_s - m.n_s) / (2.0 * h))
        } else {
            let dir = if inside(1.0) { 1.0 } else { -1.0 };
            let (f0, f1, f2) = (at(0.0)?, at(dir)?, at(2.0 * dir)?);
            let d = |a: Vec4, b: Vec4, c: Vec4| (a * -3.0 + b * 4.0 - c) / (2.0 * h * dir);
            (d(f0.n_t, f1.n_t, f2.n_t), d(f0.n_s, f1.n_s, f2.n_s))
        };
        n_t[k] = dt;
        n_s[k] = ds;
    }
    Ok(FrameDerivatives::from_parts(n_t, n_s))
}

/// Exact frame derivatives from the Taylor expansion of the frame.
pub fn frame_derivatives_ad(patch: &SurfacePatch, u1: f64, u2: f64) -> Result<FrameDerivatives> {
    let (t, s) = patch.frame_series(u1, u2)?;
    let d = |v: &V4<Taylor>, k: usize| {
        let (a, b) = if k == 0 { (1, 0) } else { (0, 1) };
        Vec4::new(v[0].partial(a, b), v[1].partial(a, b), v[2].partial(a, b), v[3].partial(a, b))
    };
    Ok(FrameDerivatives::from_parts([d(&t, 0), d(&t, 1)], [d(&s, 0), d(&s, 1)]))
}
