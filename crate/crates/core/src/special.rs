//! Surfaces inside the classical 3-dimensional slices of `R^4_1`: Euclidean
//! space, Minkowski 3-space, hyperbolic space, de Sitter space and the
//! lightcone.

use std::collections::BTreeMap;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::curvature::{
    curvature_report, curvature_report_with_frame, mean_curvature_combination, principal_curvatures, CurvatureReport,
    Tolerances,
};
use crate::error::{GeometryError, Result};
use crate::grid::Grid;
use crate::minkowski::Vec4;
use crate::normalized::normalized_report;
use crate::surface::{first_fundamental_form, FrameRule, Jet3, NormalFrame, SurfacePatch};

/// Largest allowed slice constraint residual.
pub const CONSTRAINT_TOL: f64 = 1e-10;
/// Step of the finite differences of normal fields.
pub const NORMAL_FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SliceKind {
    Euclidean3,
    Minkowski3,
    Hyperbolic3,
    DeSitter3,
    Lightcone,
}

impl SliceKind {
    /// Signed constraint defect of a point.
    pub fn constraint(self, x: Vec4) -> f64 {
        match self {
            SliceKind::Euclidean3 => x.x0,
            SliceKind::Minkowski3 => x.x3,
            SliceKind::Hyperbolic3 => {
                if x.x0 <= 0.0 {
                    f64::INFINITY
                } else {
                    x.norm_sq() + 1.0
                }
            }
            SliceKind::DeSitter3 => x.norm_sq() - 1.0,
            SliceKind::Lightcone => {
                if x.euclid_norm() == 0.0 {
                    f64::INFINITY
                } else {
                    x.norm_sq() / x.euclid_norm_sq()
                }
            }
        }
    }

    fn frame_rule(self) -> FrameRule {
        match self {
            SliceKind::Hyperbolic3 => FrameRule::TimelikePosition,
            SliceKind::DeSitter3 => FrameRule::SpacelikePosition,
            _ => FrameRule::ProjectE0,
        }
    }
}

/// A patch certified to lie in a slice.
#[derive(Debug, Clone)]
pub struct AmbientSlice {
    pub kind: SliceKind,
    pub patch: SurfacePatch,
    pub constraint_residual: f64,
}

/// Checks the slice constraint on an `n x n` grid and installs the frame
/// rule of the slice.
pub fn embed(kind: SliceKind, patch: SurfacePatch, n: usize) -> Result<AmbientSlice> {
    let grid = Grid::new(patch.domain, n, n);
    let residual = grid.map(|a, b| kind.constraint(patch.position(a, b)).abs()).into_iter().fold(0.0_f64, |m, v| {
        if v.is_nan() {
            f64::INFINITY
        } else {
            m.max(v)
        }
    });
    if residual > CONSTRAINT_TOL {
        return Err(GeometryError::ConstraintViolated { residual });
    }
    let patch = patch.with_frame_rule(kind.frame_rule());
    Ok(AmbientSlice { kind, patch, constraint_residual: residual })
}

/// Shape operator `S_ij = -<n_{u_i}, X_{u_k}> g^{kj}` of a normal field
/// given pointwise, differentiated by central differences.
fn shape_from_normal_fd<F>(patch: &SurfacePatch, u1: f64, u2: f64, normal: F) -> Result<Matrix2<f64>>
where
    F: Fn(&Jet3) -> Result<Vec4>,
{
    let h = NORMAL_FD_STEP;
    let jet = patch.eval_jet(u1, u2)?;
    let metric = first_fundamental_form(&jet)?;
    let at = |a: f64, b: f64| patch.eval_jet(a, b).and_then(|j| normal(&j));
    let mut dn = [Vec4::ZERO; 2];
    for (k, d) in dn.iter_mut().enumerate() {
        let (da, db) = if k == 0 { (h, 0.0) } else { (0.0, h) };
        let fwd = patch.domain.contains(u1 + da, u2 + db);
        let bwd = patch.domain.contains(u1 - da, u2 - db);
        *d = if fwd && bwd {
            (at(u1 + da, u2 + db)? - at(u1 - da, u2 - db)?) / (2.0 * h)
        } else {
            let s = if fwd { 1.0 } else { -1.0 };
            let f0 = at(u1, u2)?;
            let f1 = at(u1 + s * da, u2 + s * db)?;
            let f2 = at(u1 + 2.0 * s * da, u2 + 2.0 * s * db)?;
            (f0 * -3.0 + f1 * 4.0 - f2) / (2.0 * h * s)
        };
    }
    let x = [jet.x1, jet.x2];
    let hm = Matrix2::from_fn(|i, j| -0.5 * (dn[i].inner(x[j]) + dn[j].inner(x[i])));
    Ok(hm * metric.inv)
}

/// Mean and Gauss curvature of a surface in Euclidean 3-space from the
/// classical cross-product normal. Returns `(H, K, N)` with `N` spatial.
pub fn euclidean3_curvatures(jet: &Jet3) -> (f64, f64, Vec4) {
    let s = |v: Vec4| [v.x1, v.x2, v.x3];
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let (a, b) = (s(jet.x1), s(jet.x2));
    let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let len = dot(c, c).sqrt();
    let n = [c[0] / len, c[1] / len, c[2] / len];
    let first = Matrix2::new(dot(a, a), dot(a, b), dot(a, b), dot(b, b));
    let second = Matrix2::new(dot(n, s(jet.x11)), dot(n, s(jet.x12)), dot(n, s(jet.x12)), dot(n, s(jet.x22)));
    let w = second * first.try_inverse().unwrap_or_else(|| Matrix2::from_element(f64::NAN));
    (0.5 * w.trace(), w.determinant(), Vec4::new(0.0, n[0], n[1], n[2]))
}

/// Mean and Gauss-Kronecker curvature of a spacelike surface in the slice
/// `x3 = 0` with respect to its future-directed timelike unit normal
/// `N`, computed with the 3-dimensional Lorentzian cross product.
pub fn minkowski3_curvatures(jet: &Jet3) -> (f64, f64, Vec4) {
    let s = |v: Vec4| [v.x0, v.x1, v.x2];
    let dot = |a: [f64; 3], b: [f64; 3]| -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let (a, b) = (s(jet.x1), s(jet.x2));
    let e = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let c = [-e[0], e[1], e[2]];
    let mut len = (-dot(c, c)).sqrt();
    if c[0] < 0.0 {
        len = -len;
    }
    let n = [c[0] / len, c[1] / len, c[2] / len];
    let first = Matrix2::new(dot(a, a), dot(a, b), dot(a, b), dot(b, b));
    let second = Matrix2::new(dot(n, s(jet.x11)), dot(n, s(jet.x12)), dot(n, s(jet.x12)), dot(n, s(jet.x22)));
    let w = second * first.try_inverse().unwrap_or_else(|| Matrix2::from_element(f64::NAN));
    (0.5 * w.trace(), w.determinant(), Vec4::new(n[0], n[1], n[2], 0.0))
}

/// Largest residual of each specialization identity over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecializationReport {
    pub kind: SliceKind,
    pub nodes: usize,
    pub residuals: BTreeMap<String, f64>,
    /// Nodes classified strongly marginally trapped.
    pub strongly_mt_nodes: usize,
}

impl SpecializationReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.values().fold(0.0_f64, |m, v| m.max(*v))
    }
}

fn wedge_normal(x: Vec4, jet: &Jet3) -> Result<Vec4> {
    let w = crate::minkowski::wedge3(x, jet.x1, jet.x2);
    let n = w.norm_sq();
    if n.is_nan() || n.abs() < 1e-300 {
        return Err(GeometryError::FrameConstructionFailure { norm: n });
    }
    Ok(w / n.abs().sqrt())
}

fn point_residuals(
    slice: &AmbientSlice,
    u1: f64,
    u2: f64,
    tol: &Tolerances,
) -> Result<(Vec<(&'static str, f64)>, bool)> {
    let p = &slice.patch;
    let r = curvature_report(p, u1, u2, tol)?;
    let s = &r.scalars;
    let x = r.jet.x;
    let mut out = Vec::new();
    match slice.kind {
        SliceKind::Euclidean3 => {
            let (h, k, n) = euclidean3_curvatures(&r.jet);
            let sigma = r.frame.n_s.inner(n).signum();
            let nr = normalized_report(&r)?;
            out.push(("nT_is_e0", (r.frame.n_t - Vec4::basis(0)).max_abs()));
            out.push(("H_tilde_plus", (nr.h_tilde_plus - sigma * h).abs()));
            out.push(("H_tilde_minus", (nr.h_tilde_minus + sigma * h).abs()));
            out.push(("K_tilde_plus", (nr.k_tilde_plus - k).abs()));
            out.push(("K_tilde_minus", (nr.k_tilde_minus - k).abs()));
        }
        SliceKind::Minkowski3 => {
            let (h, k, n) = minkowski3_curvatures(&r.jet);
            let e3 = Vec4::basis(3);
            out.push(("nS_is_e3", (r.frame.n_s - e3).max_abs().min((r.frame.n_s + e3).max_abs())));
            out.push(("nT_is_slice_normal", (r.frame.n_t - n).max_abs()));
            out.push(("H_plus", (s.h_plus - h).abs()));
            out.push(("H_minus", (s.h_minus - h).abs()));
            out.push(("K_plus", (s.k_plus - k).abs()));
            out.push(("K_minus", (s.k_minus - k).abs()));
        }
        SliceKind::Hyperbolic3 => {
            // Mean curvature inside hyperbolic space from the derivative of
            // the de Sitter normal X ^ X_1 ^ X_2.
            let sh = shape_from_normal_fd(p, u1, u2, |j| wedge_normal(j.x, j))?;
            let sign = wedge_normal(x, &r.jet)?.inner(r.frame.n_s).signum();
            let h = sign * 0.5 * sh.trace();
            out.push(("nT_is_X", (r.frame.n_t - x).max_abs()));
            out.push(("H_T_is_minus_one", (s.h_t + 1.0).abs()));
            out.push(("H_plus", (s.h_plus - (-1.0 + h)).abs()));
            out.push(("H_minus", (s.h_minus - (-1.0 - h)).abs()));
        }
        SliceKind::DeSitter3 => {
            // Mean curvature inside de Sitter space from the derivative of
            // the hyperbolic normal X_1 ^ X_2 ^ X.
            let sh = shape_from_normal_fd(p, u1, u2, |j| {
                let w = wedge_normal(j.x, j)?;
                Ok(if w.x0 < 0.0 { -w } else { w })
            })?;
            let h = 0.5 * sh.trace();
            out.push(("nS_is_X", (r.frame.n_s - x).max_abs()));
            out.push(("H_S_is_minus_one", (s.h_s + 1.0).abs()));
            out.push(("H_plus", (s.h_plus - (h - 1.0)).abs()));
            out.push(("H_minus", (s.h_minus - (h + 1.0)).abs()));
        }
        SliceKind::Lightcone => {
            let d = lightcone_dual(p, u1, u2, tol)?;
            out.push(("dual_pairing", d.pairing_residual));
            out.push(("dual_lightlike", d.lightlike_residual));
            out.push(("dual_frame", d.frame.orthonormality_residual()));
            out.push(("kappa_T_relation", d.kappa_t_residual));
            out.push(("kappa_S_relation", d.kappa_s_residual));
            out.push(("K_I_is_H_lc", (r.k_intrinsic - d.h_lc).abs()));
        }
    }
    Ok((out, r.flags().strongly_marginally_trapped))
}

/// Evaluates every identity of the slice at each node of an `n1 x n2` grid.
pub fn specialization_check(
    slice: &AmbientSlice,
    n1: usize,
    n2: usize,
    tol: &Tolerances,
) -> Result<SpecializationReport> {
    let grid = Grid::new(slice.patch.domain, n1, n2);
    let rows = grid.try_map(|a, b| point_residuals(slice, a, b, tol))?;
    let mut residuals = BTreeMap::new();
    let mut strongly = 0;
    for (row, smt) in &rows {
        for (name, v) in row {
            let e = residuals.entry(name.to_string()).or_insert(0.0_f64);
            *e = if v.is_nan() { f64::INFINITY } else { e.max(*v) };
        }
        strongly += usize::from(*smt);
    }
    Ok(SpecializationReport { kind: slice.kind, nodes: rows.len(), residuals, strongly_mt_nodes: strongly })
}

/// The dual `X^l` of a surface in the lightcone at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightconeDual {
    pub x_ell: Vec4,
    /// `nT = (X + X^l) / 2`, `nS = (X - X^l) / 2`.
    pub frame: NormalFrame,
    pub kappa_ell: (f64, f64),
    pub k_lc: f64,
    pub h_lc: f64,
    /// `max(|<X, X^l> + 2|, |<X_{u_i}, X^l>|)`.
    pub pairing_residual: f64,
    /// `|<X^l, X^l>|`.
    pub lightlike_residual: f64,
    /// Largest defect of `kappa_i(nT) = (-1 + kappa^l_i) / 2`.
    pub kappa_t_residual: f64,
    /// Largest defect of `kappa_i(nS) = (-1 - kappa^l_i) / 2`.
    pub kappa_s_residual: f64,
}

/// Tolerance on the parallel defect used to recognise the lightlike
/// normal along `X`.
pub const DUAL_PARALLEL_TOL: f64 = 1e-8;

fn dual_vector(x: Vec4, frame: &NormalFrame) -> Result<Vec4> {
    let (dp, dm) = (frame.l_plus.parallel_defect(x), frame.l_minus.parallel_defect(x));
    let other = if dp <= DUAL_PARALLEL_TOL && dp <= dm {
        frame.l_minus
    } else if dm <= DUAL_PARALLEL_TOL {
        frame.l_plus
    } else {
        return Err(GeometryError::DualDegenerate { defect: dp.min(dm) });
    };
    Ok(other * (-2.0 / x.inner(other)))
}

fn dual_at(patch: &SurfacePatch, jet: &Jet3) -> Result<Vec4> {
    dual_vector(jet.x, &crate::surface::normal_frame_with(jet, patch.frame_rule)?)
}

pub fn lightcone_dual(patch: &SurfacePatch, u1: f64, u2: f64, tol: &Tolerances) -> Result<LightconeDual> {
    let jet = patch.eval_jet(u1, u2)?;
    let x = jet.x;
    let x_ell = dual_at(patch, &jet)?;
    let frame = NormalFrame::new((x + x_ell) / 2.0, (x - x_ell) / 2.0);
    let s_ell = shape_from_normal_fd(patch, u1, u2, |j| dual_at(patch, j))?;
    let kappa_ell = principal_curvatures(&s_ell)?;
    let r = curvature_report_with_frame(patch, u1, u2, frame, tol)?;
    let half = |k: f64, s: f64| 0.5 * (-1.0 + s * k);
    let kt = (r.kappa_t.0 - half(kappa_ell.0, 1.0)).abs().max((r.kappa_t.1 - half(kappa_ell.1, 1.0)).abs());
    // kappa(nS) reverses the order of the kappa^l.
    let ks = (r.kappa_s.0 - half(kappa_ell.1, -1.0)).abs().max((r.kappa_s.1 - half(kappa_ell.0, -1.0)).abs());
    let pairing = (x.inner(x_ell) + 2.0).abs().max(jet.x1.inner(x_ell).abs()).max(jet.x2.inner(x_ell).abs());
    Ok(LightconeDual {
        x_ell,
        frame,
        kappa_ell,
        k_lc: s_ell.determinant(),
        h_lc: 0.5 * s_ell.trace(),
        pairing_residual: pairing,
        lightlike_residual: x_ell.norm_sq().abs(),
        kappa_t_residual: kt,
        kappa_s_residual: ks,
    })
}

/// Lightcone identities and the equivalence of the marginally trapped
/// conditions, aggregated over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightconeTheoremReport {
    pub nodes: usize,
    /// `max |K_I - H_lc|`.
    pub egregium_residual: f64,
    /// Nodes where the five predicates do not all agree.
    pub predicate_disagreements: usize,
    /// Nodes where all five predicates hold.
    pub mt_nodes: usize,
    /// `max |H_l(nT, nS) + 2|` in the dual frame.
    pub h_plus_residual_literal: f64,
    /// `max |H_l(nT, -nS) - 2 H_lc|` in the dual frame.
    pub h_minus_residual_literal: f64,
    /// `max |H_l(nT, nS) + 1|` in the dual frame.
    pub h_plus_residual: f64,
    /// `max |H_l(nT, -nS) - H_lc|` in the dual frame.
    pub h_minus_residual: f64,
    /// `max |H_l(nT, nS) H_l(nT, -nS) + H_lc|`, independent of the frame.
    pub product_residual: f64,
    pub strongly_mt_nodes: usize,
    /// Tolerance shared by the five predicates.
    pub predicate_tol: f64,
}

struct LightconeRow {
    egregium: f64,
    predicates: [bool; 5],
    h_plus_literal: f64,
    h_minus_literal: f64,
    h_plus: f64,
    h_minus: f64,
    product: f64,
    strongly_mt: bool,
}

fn parallel_or_zero(v: Vec4, x: Vec4, tau: f64) -> bool {
    v.euclid_norm() <= tau || v.parallel_defect(x) <= tau
}

fn lightcone_row(patch: &SurfacePatch, u1: f64, u2: f64, tau: f64, tol: &Tolerances) -> Result<LightconeRow> {
    let d = lightcone_dual(patch, u1, u2, tol)?;
    let r: CurvatureReport = curvature_report_with_frame(patch, u1, u2, d.frame, tol)?;
    let x = r.jet.x;
    let s = &r.scalars;
    let predicates = [
        r.flags().marginally_trapped,
        d.h_lc.abs() <= tau,
        parallel_or_zero(mean_curvature_combination(&r.frame, s), x, tau),
        r.k_intrinsic.abs() <= tau,
        parallel_or_zero(r.gauss_curvature_vector, x, tau),
    ];
    Ok(LightconeRow {
        egregium: (r.k_intrinsic - d.h_lc).abs(),
        predicates,
        h_plus_literal: (s.h_plus + 2.0).abs(),
        h_minus_literal: (s.h_minus - 2.0 * d.h_lc).abs(),
        h_plus: (s.h_plus + 1.0).abs(),
        h_minus: (s.h_minus - d.h_lc).abs(),
        product: (s.h_plus * s.h_minus + d.h_lc).abs(),
        strongly_mt: r.flags().strongly_marginally_trapped,
    })
}

pub fn lightcone_theorem_check(
    slice: &AmbientSlice,
    n1: usize,
    n2: usize,
    predicate_tol: f64,
    tol: &Tolerances,
) -> Result<LightconeTheoremReport> {
    if slice.kind != SliceKind::Lightcone {
        return Err(GeometryError::InvalidInput(format!("{:?} slice given to the lightcone check", slice.kind)));
    }
    let grid = Grid::new(slice.patch.domain, n1, n2);
    let rows = grid.try_map(|a, b| lightcone_row(&slice.patch, a, b, predicate_tol, tol))?;
    let max = |f: fn(&LightconeRow) -> f64| rows.iter().map(f).fold(0.0_f64, f64::max);
    Ok(LightconeTheoremReport {
        nodes: rows.len(),
        egregium_residual: max(|r| r.egregium),
        predicate_disagreements: rows.iter().filter(|r| r.predicates.iter().any(|&p| p != r.predicates[0])).count(),
        mt_nodes: rows.iter().filter(|r| r.predicates.iter().all(|&p| p)).count(),
        h_plus_residual_literal: max(|r| r.h_plus_literal),
        h_minus_residual_literal: max(|r| r.h_minus_literal),
        h_plus_residual: max(|r| r.h_plus),
        h_minus_residual: max(|r| r.h_minus),
        product_residual: max(|r| r.product),
        strongly_mt_nodes: rows.iter().filter(|r| r.strongly_mt).count(),
        predicate_tol,
    })
}

/// Constancy of the lightcone Gauss images of a de Sitter patch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorosphereReport {
    pub nodes: usize,
    /// Fewer than two nodes; constancy holds trivially.
    pub insufficient_samples: bool,
    /// Largest Euclidean deviation of `l+` and `l-` from their value at the
    /// first node.
    pub deviation: [f64; 2],
    /// The constant lightlike vector, if one of `l+-` is constant.
    pub constant_normal: Option<Vec4>,
    /// `max |<X, v> - c|` for the constant normal `v`.
    pub hyperplane_residual: Option<f64>,
}

impl HorosphereReport {
    pub fn is_horosphere(&self, tol: f64) -> bool {
        self.hyperplane_residual.is_some_and(|r| r <= tol)
    }
}

pub fn desitter_horosphere_check(slice: &AmbientSlice, n1: usize, n2: usize, tau: f64) -> Result<HorosphereReport> {
    if slice.kind != SliceKind::DeSitter3 {
        return Err(GeometryError::InvalidInput(format!("{:?} slice given to the horosphere check", slice.kind)));
    }
    let p = &slice.patch;
    let grid = Grid::new(p.domain, n1, n2);
    let nodes = grid.try_map(|a, b| Ok((p.position(a, b), p.frame(a, b)?)))?;
    let insufficient = nodes.len() < 2;
    let (_, f0) = nodes[0];
    let dev = |sign: f64| nodes.iter().fold(0.0_f64, |m, (_, f)| m.max((f.ell(sign) - f0.ell(sign)).euclid_norm()));
    let deviation = [dev(1.0), dev(-1.0)];
    let constant_normal = if deviation[0] <= tau && deviation[0] <= deviation[1] {
        Some(f0.l_plus)
    } else if deviation[1] <= tau {
        Some(f0.l_minus)
    } else {
        None
    };
    let hyperplane_residual = constant_normal.map(|v| {
        let c = nodes[0].0.inner(v);
        nodes.iter().fold(0.0_f64, |m, (x, _)| m.max((x.inner(v) - c).abs()))
    });
    Ok(HorosphereReport {
        nodes: nodes.len(),
        insufficient_samples: insufficient,
        deviation,
        constant_normal,
        hyperplane_residual,
    })
}
