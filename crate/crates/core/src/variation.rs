//! Area functional and its variations along the lightlike normals.

use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{curvature_report, CurvatureReport, Tolerances};
use crate::error::{GeometryError, Result};
use crate::expr::Expr;
use crate::grid::Grid;
use crate::minkowski::Vec4;
use crate::series::{Taylor, V4};
use crate::surface::{first_fundamental_form_tol, Evaluator, FrameDerivatives, FrameRule, SurfacePatch};

/// Lightlike normal along which a surface is varied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Plus => 1.0,
            Direction::Minus => -1.0,
        }
    }
}

/// How the variation depends on `eps`: `X + eps a l` or `X + sin(eps) a l`.
/// Both have the same variation field; the second is not polynomial in
/// `eps`, which keeps stencil truncation errors visible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Profile {
    #[default]
    Linear,
    Sine,
}

impl Profile {
    fn apply(self, eps: f64) -> f64 {
        match self {
            Profile::Linear => eps,
            Profile::Sine => eps.sin(),
        }
    }
}

/// A scalar field on the parameter domain, evaluable on Taylor seeds.
type FieldMap = Arc<dyn Fn(&Taylor, &Taylor) -> Taylor + Send + Sync>;

#[derive(Clone)]
pub struct ScalarField {
    pub label: String,
    map: FieldMap,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarField({})", self.label)
    }
}

impl ScalarField {
    pub fn new<F>(label: &str, f: F) -> Self
    where
        F: Fn(&Taylor, &Taylor) -> Taylor + Send + Sync + 'static,
    {
        ScalarField { label: label.to_string(), map: Arc::new(f) }
    }

    pub fn constant(c: f64) -> Self {
        ScalarField::new(&c.to_string(), move |_, _| Taylor::constant(c))
    }

    pub fn parse(src: &str) -> Result<Self> {
        let e = Expr::parse(src)?;
        Ok(ScalarField::new(&e.to_string(), move |a, b| e.eval_series(a, b)))
    }

    /// The smooth bump `exp(1 - 1/(1 - r^2))` with `r = |u - c| / radius`,
    /// zero outside the disc.
    pub fn bump(center: (f64, f64), radius: f64) -> Self {
        ScalarField::new(&format!("bump({}, {}; {radius})", center.0, center.1), move |a, b| {
            let x = (*a - center.0) / radius;
            let y = (*b - center.1) / radius;
            let r2 = x * x + y * y;
            if r2.value() >= 1.0 {
                Taylor::constant(0.0)
            } else {
                ((r2 - 1.0).recip() + 1.0).exp()
            }
        })
    }

    pub fn eval_series(&self, a: &Taylor, b: &Taylor) -> Taylor {
        (self.map)(a, b)
    }

    pub fn eval(&self, u1: f64, u2: f64) -> f64 {
        self.eval_series(&Taylor::constant(u1), &Taylor::constant(u2)).value()
    }
}

/// Default stencil `{0, +-1e-3, +-2e-3}`.
pub const DEFAULT_EPSILONS: [f64; 5] = [-2e-3, -1e-3, 0.0, 1e-3, 2e-3];

#[derive(Debug, Clone)]
pub struct VariationSpec {
    pub direction: Direction,
    pub alpha: ScalarField,
    pub epsilons: Vec<f64>,
    pub grid: (usize, usize),
    pub profile: Profile,
}

impl VariationSpec {
    pub fn new(direction: Direction, alpha: ScalarField) -> Self {
        VariationSpec {
            direction,
            alpha,
            epsilons: DEFAULT_EPSILONS.to_vec(),
            grid: (101, 101),
            profile: Profile::Linear,
        }
    }

    pub fn with_grid(mut self, n1: usize, n2: usize) -> Self {
        self.grid = (n1, n2);
        self
    }

    pub fn with_step(mut self, h: f64) -> Self {
        self.epsilons = vec![-2.0 * h, -h, 0.0, h, 2.0 * h];
        self
    }

    pub fn with_profile(mut self, profile: Profile) -> Self {
        self.profile = profile;
        self
    }

    /// The stencil step `h` once the epsilons are checked to be
    /// `{-h, 0, h}` or `{-2h, -h, 0, h, 2h}`.
    fn step(&self) -> Result<f64> {
        let mut e = self.epsilons.clone();
        e.sort_by(f64::total_cmp);
        let bad =
            || GeometryError::InvalidInput(format!("epsilon stencil {:?} is not symmetric and uniform", self.epsilons));
        let h = match e.len() {
            3 | 5 => e[e.len() - 1] / (e.len() / 2) as f64,
            _ => return Err(bad()),
        };
        let m = e.len() / 2;
        let uniform = e.iter().enumerate().all(|(i, &v)| (v - (i as f64 - m as f64) * h).abs() <= 1e-12 * h);
        if h <= 0.0 || !uniform {
            return Err(bad());
        }
        Ok(h)
    }
}

/// The varied surface `X^eps`. Its jets are exact to order 2 and it gets
/// its own normal frame from the `e0` projection.
pub fn vary(patch: &SurfacePatch, spec: &VariationSpec, eps: f64) -> SurfacePatch {
    let base = patch.clone();
    let alpha = spec.alpha.clone();
    let sign = spec.direction.sign();
    let t = spec.profile.apply(eps);
    let map = move |a: &Taylor, b: &Taylor| -> V4<Taylor> {
        let (u1, u2) = (a.value(), b.value());
        let nan = [Taylor::constant(f64::NAN); 4];
        let (x, (nt, ns)) = match (base.eval_series(u1, u2), base.frame_series(u1, u2)) {
            (Ok(x), Ok(f)) => (x, f),
            _ => return nan,
        };
        let (s1, s2) = (Taylor::variable(u1, 0), Taylor::variable(u2, 1));
        let w = alpha.eval_series(&s1, &s2) * t;
        let out: V4<Taylor> = std::array::from_fn(|k| x[k] + w * (nt[k] + ns[k] * sign));
        if *a == s1 && *b == s2 {
            out
        } else {
            out.map(|c| Taylor::constant(c.value()))
        }
    };
    SurfacePatch {
        name: format!("{}^eps={eps:e}", patch.name),
        domain: patch.domain,
        evaluator: Evaluator::Series { map: Arc::new(map), order: 2 },
        provenance: patch.provenance,
        frame_rule: FrameRule::ProjectE0,
    }
}

/// `A(X) = \int sqrt(det g) du1 du2` by composite Simpson quadrature.
pub fn area(patch: &SurfacePatch, grid: (usize, usize)) -> Result<f64> {
    let g = Grid::new(patch.domain, grid.0, grid.1);
    let dm = g.try_map(|a, b| {
        let jet = patch.eval_jet(a, b)?;
        Ok(first_fundamental_form_tol(&jet, Tolerances::default().metric_det)?.area_element())
    })?;
    g.integrate(&dm)
}

fn varied_area(patch: &SurfacePatch, spec: &VariationSpec, eps: f64) -> Result<f64> {
    area(&vary(patch, spec, eps), spec.grid).map_err(|e| match e {
        GeometryError::DegenerateMetric { .. } | GeometryError::FrameConstructionFailure { .. } => {
            GeometryError::VariationLeavesSpacelikeClass { eps, u1: f64::NAN, u2: f64::NAN }
        }
        other => other,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationResult {
    /// `(eps, A(X^eps))` in stencil order.
    pub area_values: Vec<(f64, f64)>,
    pub numeric_d1: f64,
    pub numeric_d2: f64,
    /// `-2 \int a H_l dM`.
    pub formula_d1: f64,
    /// `2 \int a^2 K_l dM`.
    pub formula_d2: f64,
    pub residual_d1: f64,
    pub residual_d2: f64,
}

impl VariationResult {
    /// `|numeric - formula| / max(|formula|, floor)`.
    pub fn relative_d1(&self, floor: f64) -> f64 {
        self.residual_d1 / self.formula_d1.abs().max(floor)
    }

    pub fn relative_d2(&self, floor: f64) -> f64 {
        self.residual_d2 / self.formula_d2.abs().max(floor)
    }
}

/// Lightcone curvatures of the variation direction at every grid node.
fn base_reports(patch: &SurfacePatch, grid: (usize, usize)) -> Result<(Grid, Vec<CurvatureReport>)> {
    let g = Grid::new(patch.domain, grid.0, grid.1);
    let tol = Tolerances::default();
    let reports = g.try_map(|a, b| curvature_report(patch, a, b, &tol))?;
    Ok((g, reports))
}

fn run(patch: &SurfacePatch, spec: &VariationSpec, reports: &(Grid, Vec<CurvatureReport>)) -> Result<VariationResult> {
    let h = spec.step()?;
    let (grid, reports) = reports;
    let sign = spec.direction.sign();
    let mut eps = spec.epsilons.clone();
    eps.sort_by(f64::total_cmp);
    let areas = eps.par_iter().map(|&e| varied_area(patch, spec, e)).collect::<Result<Vec<_>>>()?;
    let (d1, d2) = if areas.len() == 5 {
        (
            (-areas[4] + 8.0 * areas[3] - 8.0 * areas[1] + areas[0]) / (12.0 * h),
            (-areas[4] + 16.0 * areas[3] - 30.0 * areas[2] + 16.0 * areas[1] - areas[0]) / (12.0 * h * h),
        )
    } else {
        ((areas[2] - areas[0]) / (2.0 * h), (areas[2] - 2.0 * areas[1] + areas[0]) / (h * h))
    };
    let nodes = grid.nodes();
    let mut i1 = Vec::with_capacity(nodes.len());
    let mut i2 = Vec::with_capacity(nodes.len());
    for (r, &(a, b)) in reports.iter().zip(&nodes) {
        let al = spec.alpha.eval(a, b);
        let (k, hl) = r.scalars.lightcone(sign);
        let dm = r.metric.area_element();
        i1.push(-2.0 * al * hl * dm);
        i2.push(2.0 * al * al * k * dm);
    }
    let f1 = grid.integrate(&i1)?;
    let f2 = grid.integrate(&i2)?;
    Ok(VariationResult {
        area_values: eps.into_iter().zip(areas).collect(),
        numeric_d1: d1,
        numeric_d2: d2,
        formula_d1: f1,
        formula_d2: f2,
        residual_d1: (d1 - f1).abs(),
        residual_d2: (d2 - f2).abs(),
    })
}

/// Numeric `dA/deps` at 0 against `-2 \int a H_l dM`. No hypothesis on the
/// surface.
pub fn first_variation_check(patch: &SurfacePatch, spec: &VariationSpec) -> Result<VariationResult> {
    run(patch, spec, &base_reports(patch, spec.grid)?)
}

/// Numeric `d^2A/deps^2` at 0 against `2 \int a^2 K_l dM`. The surface
/// must be marginally trapped with `H_l = 0` in the variation direction.
pub fn second_variation_check(patch: &SurfacePatch, spec: &VariationSpec) -> Result<VariationResult> {
    let reports = base_reports(patch, spec.grid)?;
    let sign = spec.direction.sign();
    for r in &reports.1 {
        let hl = r.scalars.lightcone(sign).1;
        if !r.flags().marginally_trapped || hl.abs() > r.classification.thresholds.mt {
            return Err(GeometryError::HypothesisViolated(format!(
                "not marginally trapped in the {:?} direction at ({}, {}): H_l = {hl:e}",
                spec.direction, r.u.0, r.u.1
            )));
        }
    }
    run(patch, spec, &reports)
}

/// Residuals of the two Cayley-Hamilton identities for `S(+-)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CayleyHamilton {
    /// `|S^2 - 2 H_l S + K_l I|` for plus and minus.
    pub operator: [f64; 2],
    /// `max_ij |<l_i, l_j> - 2 H_l h_ij + K_l g_ij|` for plus and minus.
    pub derivative: [f64; 2],
}

impl CayleyHamilton {
    pub fn max_operator(&self) -> f64 {
        self.operator[0].max(self.operator[1])
    }

    pub fn max_derivative(&self) -> f64 {
        self.derivative[0].max(self.derivative[1])
    }
}

pub fn cayley_hamilton_check(report: &CurvatureReport, d: &FrameDerivatives) -> CayleyHamilton {
    let mut out = CayleyHamilton::default();
    for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
        let s = report.shape.signed(sign);
        let (kl, hl) = report.scalars.lightcone(sign);
        out.operator[k] = (s * s - s * (2.0 * hl) + Matrix2::identity() * kl).norm();
        let h = report.sff.signed(sign);
        let g = report.metric.g;
        let dl = d.ell(sign);
        let mut worst = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                let r = dl[i].inner(dl[j]) - 2.0 * hl * h[(i, j)] + kl * g[(i, j)];
                worst = worst.max(r.abs());
            }
        }
        out.derivative[k] = worst;
    }
    out
}

/// Both sides of the derivative of `H_l` along the variation at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanCurvatureDerivative {
    /// Stencil derivative of `H_l` of the varied surfaces.
    pub lhs: f64,
    /// `a (2 H_l^2 - K_l) - <d_eps l, l'> H_l / 2`, `l'` the other lightlike
    /// normal.
    pub rhs: f64,
    /// `<d_eps l, l'>` from the stencil on the varied frames.
    pub frame_term: f64,
    pub residual: f64,
}

impl MeanCurvatureDerivative {
    pub fn relative(&self, floor: f64) -> f64 {
        self.residual / self.lhs.abs().max(self.rhs.abs()).max(floor)
    }
}

pub fn mean_curvature_derivative_check(
    patch: &SurfacePatch,
    spec: &VariationSpec,
    u1: f64,
    u2: f64,
) -> Result<MeanCurvatureDerivative> {
    let h = spec.step()?;
    let sign = spec.direction.sign();
    let tol = Tolerances::default();
    let at = |e: f64| -> Result<(f64, Vec4)> {
        let r = curvature_report(&vary(patch, spec, e), u1, u2, &tol)?;
        Ok((r.scalars.lightcone(sign).1, r.frame.ell(sign)))
    };
    let base = curvature_report(&vary(patch, spec, 0.0), u1, u2, &tol)?;
    let (m2, m1, p1, p2) = (at(-2.0 * h)?, at(-h)?, at(h)?, at(2.0 * h)?);
    let lhs = (-p2.0 + 8.0 * p1.0 - 8.0 * m1.0 + m2.0) / (12.0 * h);
    let dl = (p2.1 * -1.0 + p1.1 * 8.0 - m1.1 * 8.0 + m2.1) / (12.0 * h);
    let frame_term = dl.inner(base.frame.ell(-sign));
    let (kl, hl) = base.scalars.lightcone(sign);
    let a = spec.alpha.eval(u1, u2);
    let rhs = a * (2.0 * hl * hl - kl) - 0.5 * frame_term * hl;
    Ok(MeanCurvatureDerivative { lhs, rhs, frame_term, residual: (lhs - rhs).abs() })
}
