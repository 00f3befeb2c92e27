//! Graphs `(f, g, u1, u2)` and their marginally trapped criteria.
//!
//! Quantities are evaluated in algebraically equivalent forms that avoid
//! cancellation between large gradient terms, e.g.
//! `Delta = 1 + |grad g|^2 - |grad f|^2 - (f1 g2 - f2 g1)^2`.

use serde::{Deserialize, Serialize};

use crate::curvature::{curvature_report, Tolerances};
use crate::error::{GeometryError, Result};
use crate::expr::Expr;
use crate::grid::Grid;
use crate::minkowski::Vec4;
use crate::series::Taylor;
use crate::surface::{Domain, Provenance, SurfacePatch};

/// Threshold below which `Delta` counts as non-spacelike in
/// [`graph_point_data`].
pub const DELTA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct GraphSurface {
    pub f: Expr,
    pub g: Expr,
    pub domain: Domain,
}

impl GraphSurface {
    pub fn new(f: &str, g: &str, domain: Domain) -> Result<Self> {
        Ok(GraphSurface { f: Expr::parse(f)?, g: Expr::parse(g)?, domain })
    }

    /// The graph as a general patch for the curvature engine.
    pub fn patch(&self) -> SurfacePatch {
        let (f, g) = (self.f.clone(), self.g.clone());
        let name = format!("graph({}, {})", self.f, self.g);
        let mut p = SurfacePatch::closed_form(&name, self.domain, move |a, b| {
            [f.eval_series(a, b), g.eval_series(a, b), *a, *b]
        });
        p.provenance = Provenance::ExpressionAD;
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphPointData {
    pub phi1: f64,
    pub phi2: f64,
    pub delta: f64,
    pub tau11: f64,
    pub tau12: f64,
    pub tau22: f64,
    pub v1: Vec4,
    pub v2: Vec4,
    /// Mean curvature vector from the closed form.
    pub mean_curvature: Vec4,
    /// `tau11 phi1^2 - 2 tau12 phi1 phi2 + tau22 phi2^2`.
    pub mt_quadratic: f64,
    /// `|grad f|^2 + |grad g|^2`.
    pub gradient_sq: f64,
}

fn raw_point_data(gs: &GraphSurface, u1: f64, u2: f64) -> Result<GraphPointData> {
    if !gs.domain.contains(u1, u2) {
        return Err(GeometryError::OutOfDomain { u1, u2 });
    }
    let (a, b) = (Taylor::variable(u1, 0), Taylor::variable(u2, 1));
    let (fs, gs_) = (gs.f.eval_series(&a, &b), gs.g.eval_series(&a, &b));
    let (f1, f2, f11, f12, f22) =
        (fs.partial(1, 0), fs.partial(0, 1), fs.partial(2, 0), fs.partial(1, 1), fs.partial(0, 2));
    let (g1, g2, g11, g12, g22) =
        (gs_.partial(1, 0), gs_.partial(0, 1), gs_.partial(2, 0), gs_.partial(1, 1), gs_.partial(0, 2));
    if ![f1, f2, f11, f12, f22, g1, g2, g11, g12, g22].iter().all(|v| v.is_finite()) {
        return Err(GeometryError::NonFinite("graph derivatives"));
    }

    // Metric coefficients 1 - f_i^2 + g_i^2 written as 1 + (g_i - f_i)(g_i + f_i).
    let m11 = 1.0 + (g1 - f1) * (g1 + f1);
    let m22 = 1.0 + (g2 - f2) * (g2 + f2);
    let m12 = -f1 * f2 + g1 * g2;
    let phi1 = m22 * f11 - 2.0 * m12 * f12 + m11 * f22;
    let phi2 = m22 * g11 - 2.0 * m12 * g12 + m11 * g22;

    let tau11 = 1.0 + g1 * g1 + g2 * g2;
    let tau12 = f1 * g1 + f2 * g2;
    let tau22 = -1.0 + f1 * f1 + f2 * f2;
    let cross = f1 * g2 - f2 * g1;
    let delta = 1.0 + (g1 - f1) * (g1 + f1) + (g2 - f2) * (g2 + f2) - cross * cross;

    // w = phi1 grad g - phi2 grad f, so that
    // tau11 phi1 - tau12 phi2 = phi1 + grad g . w and
    // tau12 phi1 - tau22 phi2 = phi2 + grad f . w.
    let w = (phi1 * g1 - phi2 * f1, phi1 * g2 - phi2 * f2);
    let c1 = phi1 + g1 * w.0 + g2 * w.1;
    let c2 = phi2 + f1 * w.0 + f2 * w.1;
    let v1 = Vec4::new(1.0, 0.0, f1, f2);
    let v2 = Vec4::new(0.0, 1.0, -g1, -g2);
    let mean_curvature = (v1 * c1 + v2 * c2) / (2.0 * delta * delta);
    let mt_quadratic = (phi1 - phi2) * (phi1 + phi2) + w.0 * w.0 + w.1 * w.1;

    Ok(GraphPointData {
        phi1,
        phi2,
        delta,
        tau11,
        tau12,
        tau22,
        v1,
        v2,
        mean_curvature,
        mt_quadratic,
        gradient_sq: f1 * f1 + f2 * f2 + g1 * g1 + g2 * g2,
    })
}

pub fn graph_point_data(gs: &GraphSurface, u1: f64, u2: f64) -> Result<GraphPointData> {
    let d = raw_point_data(gs, u1, u2)?;
    if d.delta <= DELTA_TOL {
        return Err(GeometryError::NotSpacelike { delta: d.delta });
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphClass {
    NotSpacelike,
    StronglyMT,
    MT,
    NotMT,
}

impl GraphClass {
    pub fn is_mt(self) -> bool {
        matches!(self, GraphClass::MT | GraphClass::StronglyMT)
    }
}

/// Tolerance applied to the quadratic MT criterion, scaled by
/// `(1 + |grad f|^2 + |grad g|^2)^2 max(|phi1|, |phi2|, 1)^2`.
pub fn quadratic_tolerance(d: &GraphPointData, tau: f64) -> f64 {
    let s = 1.0 + d.gradient_sq;
    let p = d.phi1.abs().max(d.phi2.abs()).max(1.0);
    tau * s * s * p * p
}

fn classify_data(d: &GraphPointData, tau: f64) -> GraphClass {
    if d.delta <= tau {
        return GraphClass::NotSpacelike;
    }
    let strongly = d.phi1.abs() <= tau && d.phi2.abs() <= tau;
    let mt = d.mt_quadratic.abs() <= quadratic_tolerance(d, tau);
    debug_assert!(!strongly || mt, "strongly MT without MT");
    if strongly {
        GraphClass::StronglyMT
    } else if mt {
        GraphClass::MT
    } else {
        GraphClass::NotMT
    }
}

pub fn classify_graph(gs: &GraphSurface, u1: f64, u2: f64, tau: f64) -> Result<GraphClass> {
    Ok(classify_data(&raw_point_data(gs, u1, u2)?, tau))
}

/// Agreement between the closed-form graph quantities and the general
/// curvature engine at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphCrossCheck {
    /// Euclidean norm of the difference of the two mean curvature vectors.
    pub vector_residual: f64,
    /// `|<H, H> + quadratic / (4 Delta^3)|` with `H` from the closed form.
    pub square_residual: f64,
    pub graph_square: f64,
    pub engine_square: f64,
    pub graph_class: GraphClass,
    pub engine_mt: bool,
    pub engine_strongly_mt: bool,
}

pub fn cross_validate_graph(gs: &GraphSurface, u1: f64, u2: f64, tol: &Tolerances) -> Result<GraphCrossCheck> {
    let d = graph_point_data(gs, u1, u2)?;
    let r = curvature_report(&gs.patch(), u1, u2, tol)?;
    let graph_square = d.mean_curvature.norm_sq();
    Ok(GraphCrossCheck {
        vector_residual: (d.mean_curvature - r.mean_curvature_vector).euclid_norm(),
        square_residual: (graph_square + d.mt_quadratic / (4.0 * d.delta.powi(3))).abs(),
        graph_square,
        engine_square: r.mean_curvature_square(),
        graph_class: classify_data(&d, tol.mt),
        engine_mt: r.flags().marginally_trapped,
        engine_strongly_mt: r.flags().strongly_marginally_trapped,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernsteinCase {
    pub f: String,
    pub domain: Domain,
    pub nodes: usize,
    pub strongly_mt_nodes: usize,
    pub max_delta_defect: f64,
    pub max_phi: f64,
}

impl BernsteinCase {
    pub fn passed(&self, delta_tol: f64) -> bool {
        self.strongly_mt_nodes == self.nodes && self.max_delta_defect <= delta_tol
    }
}

/// Entire non-affine harmonic functions used by
/// [`bernstein_counterexample_suite`].
pub const HARMONIC_EXAMPLES: [&str; 3] = ["u1^2 - u2^2", "exp(u1)*cos(u2)", "u1^3 - 3*u1*u2^2"];

/// Classifies `(f, f, u1, u2)` for each harmonic example on an `n x n`
/// grid over `[-half, half]^2`.
pub fn bernstein_counterexample_suite(half: f64, n: usize, tau: f64) -> Result<Vec<BernsteinCase>> {
    let domain = Domain::new(-half, half, -half, half);
    HARMONIC_EXAMPLES
        .iter()
        .map(|src| {
            let gs = GraphSurface::new(src, src, domain)?;
            let grid = Grid::new(domain, n, n);
            let data = grid.try_map(|a, b| raw_point_data(&gs, a, b))?;
            Ok(BernsteinCase {
                f: gs.f.to_string(),
                domain,
                nodes: data.len(),
                strongly_mt_nodes: data.iter().filter(|d| classify_data(d, tau) == GraphClass::StronglyMT).count(),
                max_delta_defect: data.iter().fold(0.0_f64, |m, d| m.max((d.delta - 1.0).abs())),
                max_phi: data.iter().fold(0.0_f64, |m, d| m.max(d.phi1.abs()).max(d.phi2.abs())),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Domain {
        Domain::new(-1.0, 1.0, -1.0, 1.0)
    }

    fn gs(f: &str, g: &str) -> GraphSurface {
        GraphSurface::new(f, g, square()).unwrap()
    }

    #[test]
    fn harmonic_lightlike_graph() {
        let d = graph_point_data(&gs("u1^2 - u2^2", "u1^2 - u2^2"), 0.3, -0.6).unwrap();
        assert_eq!((d.phi1, d.phi2, d.delta), (0.0, 0.0, 1.0));
        // The textbook form of Delta agrees.
        assert!((d.tau12 * d.tau12 - d.tau11 * d.tau22 - 1.0).abs() < 1e-14);
        assert_eq!(classify_graph(&gs("u1^2 - u2^2", "u1^2 - u2^2"), 0.3, -0.6, 1e-8).unwrap(), GraphClass::StronglyMT);
    }

    #[test]
    fn paraboloid_at_origin() {
        let g = gs("u1^2 + u2^2", "0");
        let d = graph_point_data(&g, 0.0, 0.0).unwrap();
        assert_eq!((d.phi1, d.phi2, d.delta, d.mt_quadratic), (4.0, 0.0, 1.0, 16.0));
        assert_eq!(d.mean_curvature, Vec4::new(2.0, 0.0, 0.0, 0.0));
        assert_eq!(classify_graph(&g, 0.0, 0.0, 1e-8).unwrap(), GraphClass::NotMT);
    }

    #[test]
    fn plane_and_affine() {
        let d = graph_point_data(&gs("0", "0"), 0.5, 0.5).unwrap();
        assert_eq!((d.phi1, d.phi2, d.delta, d.mean_curvature), (0.0, 0.0, 1.0, Vec4::ZERO));
        assert_eq!(classify_graph(&gs("u1", "u1"), 0.5, 0.5, 1e-8).unwrap(), GraphClass::StronglyMT);
    }

    #[test]
    fn nonharmonic_lightlike_graph_is_mt() {
        let g = gs("u1^2", "u1^2");
        assert_eq!(classify_graph(&g, 0.4, 0.1, 1e-8).unwrap(), GraphClass::MT);
        let c = cross_validate_graph(&g, 0.4, 0.1, &Tolerances::default()).unwrap();
        assert!(c.graph_square.abs() < 1e-10 && c.engine_square.abs() < 1e-10);
        assert!(c.engine_mt && !c.engine_strongly_mt);
    }

    #[test]
    fn not_spacelike() {
        let g = gs("2*u1", "0");
        assert!(matches!(graph_point_data(&g, 0.0, 0.0), Err(GeometryError::NotSpacelike { .. })));
        assert_eq!(classify_graph(&g, 0.0, 0.0, 1e-8).unwrap(), GraphClass::NotSpacelike);
    }

    #[test]
    fn two_routes_agree() {
        let g = gs("sin(u1)*sinh(u2)", "u1*u2");
        for (a, b) in [(0.1, 0.2), (-0.3, 0.4), (0.25, -0.15)] {
            let c = cross_validate_graph(&g, a, b, &Tolerances::default()).unwrap();
            assert!(c.vector_residual < 1e-8, "{c:?}");
            assert!(c.square_residual < 1e-8, "{c:?}");
        }
    }

    #[test]
    fn bernstein_small_box() {
        for case in bernstein_counterexample_suite(2.0, 9, 1e-8).unwrap() {
            assert!(case.passed(1e-12), "{case:?}");
        }
    }
}
