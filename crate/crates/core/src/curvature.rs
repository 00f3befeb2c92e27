//! Second fundamental invariants, shape operators, curvatures, intrinsic
//! curvature and pointwise classification.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::minkowski::Vec4;
use crate::surface::{first_fundamental_form_tol, frame_derivatives, Jet3, Metric, NormalFrame, SurfacePatch};

/// Step, relative to the domain span, used when Christoffel symbols have to
/// be differentiated numerically.
pub const CHRISTOFFEL_FD_STEP: f64 = 3e-3;

/// Tolerances of the classification predicates. Each absolute threshold is
/// the relative factor times a local scale, see [`classify_point`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative factor of `tau_mt`.
    pub mt: f64,
    /// Relative factor of the umbilic threshold `tau_u`.
    pub umbilic: f64,
    /// Relative factor of the parabolic threshold `tau_p`.
    pub parabolic: f64,
    /// Threshold on `det g`.
    pub metric_det: f64,
    /// Relative threshold on a negative eigenvalue discriminant.
    pub spectrum: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { mt: 1e-8, umbilic: 1e-8, parabolic: 1e-8, metric_det: 1e-12, spectrum: 1e-10 }
    }
}

/// The matrices `h_ij(nT)`, `h_ij(nS)` and `h_ij(nT, +-nS)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondFundamental {
    pub h_t: Matrix2<f64>,
    pub h_s: Matrix2<f64>,
    pub h_plus: Matrix2<f64>,
    pub h_minus: Matrix2<f64>,
}

impl SecondFundamental {
    pub fn signed(&self, sign: f64) -> Matrix2<f64> {
        if sign >= 0.0 {
            self.h_plus
        } else {
            self.h_minus
        }
    }
}

/// Pairs every `X_{u_i u_j}` with a normal vector.
pub fn second_fundamental_form_of(jet: &Jet3, n: Vec4) -> Matrix2<f64> {
    let h12 = n.inner(jet.x12);
    Matrix2::new(n.inner(jet.x11), h12, h12, n.inner(jet.x22))
}

pub fn second_fundamental(jet: &Jet3, frame: &NormalFrame) -> SecondFundamental {
    let h_t = second_fundamental_form_of(jet, frame.n_t);
    let h_s = second_fundamental_form_of(jet, frame.n_s);
    SecondFundamental { h_t, h_s, h_plus: h_t + h_s, h_minus: h_t - h_s }
}

/// Shape operators as the mixed tensors `h_i^j = h_ik g^{kj}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeOperators {
    pub s_t: Matrix2<f64>,
    pub s_s: Matrix2<f64>,
    pub s_plus: Matrix2<f64>,
    pub s_minus: Matrix2<f64>,
}

impl ShapeOperators {
    pub fn signed(&self, sign: f64) -> Matrix2<f64> {
        if sign >= 0.0 {
            self.s_plus
        } else {
            self.s_minus
        }
    }

    /// Frobenius norm of `[S(nT), S(nS)]`.
    pub fn commutator_norm(&self) -> f64 {
        (self.s_t * self.s_s - self.s_s * self.s_t).norm()
    }
}

pub fn shape_operators(metric: &Metric, sff: &SecondFundamental) -> ShapeOperators {
    let s_t = sff.h_t * metric.inv;
    let s_s = sff.h_s * metric.inv;
    ShapeOperators { s_t, s_s, s_plus: s_t + s_s, s_minus: s_t - s_s }
}

/// Eigenvalues `k1 <= k2` of a real 2x2 matrix with real spectrum.
pub fn principal_curvatures(s: &Matrix2<f64>) -> Result<(f64, f64)> {
    principal_curvatures_tol(s, Tolerances::default().spectrum)
}

pub fn principal_curvatures_tol(s: &Matrix2<f64>, rel_tol: f64) -> Result<(f64, f64)> {
    let (a, b, c, d) = (s[(0, 0)], s[(0, 1)], s[(1, 0)], s[(1, 1)]);
    // (a - d)^2 + 4bc avoids the cancellation in tr^2 - 4 det.
    let disc = (a - d) * (a - d) + 4.0 * b * c;
    let scale = 1.0 + s.norm_squared();
    if disc < -rel_tol * scale {
        return Err(GeometryError::ComplexSpectrum { discriminant: disc });
    }
    let r = disc.max(0.0).sqrt();
    let tr = a + d;
    Ok((0.5 * (tr - r), 0.5 * (tr + r)))
}

/// Determinant and half-trace curvatures of every shape operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureScalars {
    pub k_plus: f64,
    pub k_minus: f64,
    pub h_plus: f64,
    pub h_minus: f64,
    pub k_t: f64,
    pub k_s: f64,
    pub h_t: f64,
    pub h_s: f64,
}

impl CurvatureScalars {
    /// `(K_l, H_l)` for the lightlike normal `nT + sign nS`.
    pub fn lightcone(&self, sign: f64) -> (f64, f64) {
        if sign >= 0.0 {
            (self.k_plus, self.h_plus)
        } else {
            (self.k_minus, self.h_minus)
        }
    }
}

pub fn curvature_scalars(ops: &ShapeOperators) -> CurvatureScalars {
    CurvatureScalars {
        k_plus: ops.s_plus.determinant(),
        k_minus: ops.s_minus.determinant(),
        h_plus: 0.5 * ops.s_plus.trace(),
        h_minus: 0.5 * ops.s_minus.trace(),
        k_t: ops.s_t.determinant(),
        k_s: ops.s_s.determinant(),
        h_t: 0.5 * ops.s_t.trace(),
        h_s: 0.5 * ops.s_s.trace(),
    }
}

/// The mean curvature vector, the normal trace of the second fundamental
/// form: `-H(nT) nT + H(nS) nS`. The sign on `nT` comes from
/// `<nT, nT> = -1`; with it the vector does not depend on the frame.
pub fn mean_curvature_vector(frame: &NormalFrame, s: &CurvatureScalars) -> Vec4 {
    frame.n_s * s.h_s - frame.n_t * s.h_t
}

/// `H(nT) nT + H(nS) nS`, the combination with a plus sign on `nT`. It has
/// the same self product as [`mean_curvature_vector`] but depends on the
/// frame.
pub fn mean_curvature_combination(frame: &NormalFrame, s: &CurvatureScalars) -> Vec4 {
    frame.n_t * s.h_t + frame.n_s * s.h_s
}

/// The Gaussian curvature vector `K(nT) nT + K(nS) nS`.
pub fn gaussian_curvature_vector(frame: &NormalFrame, s: &CurvatureScalars) -> Vec4 {
    frame.n_t * s.k_t + frame.n_s * s.k_s
}

/// `dg[k][i][j]` is `d_k g_ij`.
type MetricGrad = [[[f64; 2]; 2]; 2];

fn metric_gradient(jet: &Jet3) -> MetricGrad {
    let mut dg = [[[0.0; 2]; 2]; 2];
    for (k, dk) in dg.iter_mut().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                dk[i][j] = jet.d2(i, k).inner(jet.d1(j)) + jet.d1(i).inner(jet.d2(j, k));
            }
        }
    }
    dg
}

/// Second metric derivatives `ddg[l][k][i][j] = d_l d_k g_ij`.
fn metric_hessian(jet: &Jet3) -> [[[[f64; 2]; 2]; 2]; 2] {
    let mut ddg = [[[[0.0; 2]; 2]; 2]; 2];
    for l in 0..2 {
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    ddg[l][k][i][j] = jet.d3(i, k, l).inner(jet.d1(j))
                        + jet.d2(i, k).inner(jet.d2(j, l))
                        + jet.d2(i, l).inner(jet.d2(j, k))
                        + jet.d1(i).inner(jet.d3(j, k, l));
                }
            }
        }
    }
    ddg
}

/// Christoffel symbols of the second kind, `gamma[k][i][j]` for
/// `Gamma^k_ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffel {
    pub gamma: [[[f64; 2]; 2]; 2],
}

/// Christoffel symbols of the first kind `c[i][j][m]`.
fn first_kind(dg: &MetricGrad) -> [[[f64; 2]; 2]; 2] {
    let mut c = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for m in 0..2 {
                c[i][j][m] = 0.5 * (dg[i][j][m] + dg[j][i][m] - dg[m][i][j]);
            }
        }
    }
    c
}

fn raise(inv: &Matrix2<f64>, c: &[[[f64; 2]; 2]; 2]) -> [[[f64; 2]; 2]; 2] {
    let mut gamma = [[[0.0; 2]; 2]; 2];
    for (k, gk) in gamma.iter_mut().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                gk[i][j] = (0..2).map(|m| inv[(k, m)] * c[i][j][m]).sum();
            }
        }
    }
    gamma
}

/// Christoffel symbols from the metric and its first derivatives.
pub fn christoffel_from_jet(jet: &Jet3, metric: &Metric) -> Christoffel {
    Christoffel { gamma: raise(&metric.inv, &first_kind(&metric_gradient(jet))) }
}

pub fn christoffel(patch: &SurfacePatch, u1: f64, u2: f64) -> Result<Christoffel> {
    let jet = patch.eval_jet(u1, u2)?;
    let metric = first_fundamental_form_tol(&jet, Tolerances::default().metric_det)?;
    Ok(christoffel_from_jet(&jet, &metric))
}

/// `dgamma[a][k][i][j] = d_a Gamma^k_ij` from order-3 jet data.
fn christoffel_gradient_analytic(jet: &Jet3, metric: &Metric) -> [[[[f64; 2]; 2]; 2]; 2] {
    let dg = metric_gradient(jet);
    let ddg = metric_hessian(jet);
    let c = first_kind(&dg);
    let inv = metric.inv;
    let mut out = [[[[0.0; 2]; 2]; 2]; 2];
    for a in 0..2 {
        // d_a g^{km} = -g^{kp} (d_a g_pq) g^{qm}
        let dga = Matrix2::new(dg[a][0][0], dg[a][0][1], dg[a][1][0], dg[a][1][1]);
        let dinv = -(inv * dga * inv);
        let mut dc = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for m in 0..2 {
                    dc[i][j][m] = 0.5 * (ddg[a][i][j][m] + ddg[a][j][i][m] - ddg[a][m][i][j]);
                }
            }
        }
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    out[a][k][i][j] = (0..2).map(|m| dinv[(k, m)] * c[i][j][m] + inv[(k, m)] * dc[i][j][m]).sum();
                }
            }
        }
    }
    out
}

fn christoffel_gradient_fd(patch: &SurfacePatch, u1: f64, u2: f64, rel: f64) -> Result<[[[[f64; 2]; 2]; 2]; 2]> {
    let mut out = [[[[0.0; 2]; 2]; 2]; 2];
    let span = patch.domain.span();
    for (a, oa) in out.iter_mut().enumerate() {
        let h = rel * if a == 0 { span.0 } else { span.1 };
        let shift = |s: f64| if a == 0 { (u1 + s * h, u2) } else { (u1, u2 + s * h) };
        let at = |s: f64| {
            let (p, q) = shift(s);
            christoffel(patch, p, q).map(|c| c.gamma)
        };
        let inside = |s: f64| {
            let (p, q) = shift(s);
            patch.domain.contains(p, q)
        };
        // Fourth-order central stencil in the interior, second-order
        // one-sided stencil near the boundary.
        let (nodes, weights, denom): (Vec<f64>, Vec<f64>, f64) = if inside(2.0) && inside(-2.0) {
            (vec![-2.0, -1.0, 1.0, 2.0], vec![1.0, -8.0, 8.0, -1.0], 12.0 * h)
        } else {
            let d = if inside(2.0) { 1.0 } else { -1.0 };
            (vec![0.0, d, 2.0 * d], vec![-3.0, 4.0, -1.0], 2.0 * h * d)
        };
        let values = nodes.iter().map(|&s| at(s)).collect::<Result<Vec<_>>>()?;
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let v: f64 = values.iter().zip(&weights).map(|(g, w)| w * g[k][i][j]).sum();
                    oa[k][i][j] = v / denom;
                }
            }
        }
    }
    Ok(out)
}

/// A curvature tensor with all indices down, `r[i][j][k][l] = R_ijkl`.
pub type Tensor4 = [[[[f64; 2]; 2]; 2]; 2];

/// The two independent evaluations of `R_ijkl`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannPair {
    /// From Christoffel symbols and their derivatives.
    pub intrinsic: Tensor4,
    /// From the second fundamental forms.
    pub extrinsic: Tensor4,
    /// Whether the intrinsic route used analytic metric derivatives.
    pub analytic: bool,
}

impl RiemannPair {
    pub fn max_discrepancy(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        worst = worst.max((self.intrinsic[i][j][k][l] - self.extrinsic[i][j][k][l]).abs());
                    }
                }
            }
        }
        worst
    }
}

/// `R^l_ijk = d_k G^l_ij - d_j G^l_ik + G^m_ij G^l_mk - G^m_ik G^l_mj`,
/// lowered with `R_ijkl = g_im R^m_jkl`.
pub fn riemann_from_christoffel(metric: &Metric, gamma: &Christoffel, dgamma: &[[[[f64; 2]; 2]; 2]; 2]) -> Tensor4 {
    let g = &gamma.gamma;
    let mut up = [[[[0.0; 2]; 2]; 2]; 2]; // up[l][i][j][k] = R^l_ijk
    for (l, ul) in up.iter_mut().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let mut v = dgamma[k][l][i][j] - dgamma[j][l][i][k];
                    for m in 0..2 {
                        v += g[m][i][j] * g[l][m][k] - g[m][i][k] * g[l][m][j];
                    }
                    ul[i][j][k] = v;
                }
            }
        }
    }
    let mut down = [[[[0.0; 2]; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    down[i][j][k][l] = (0..2).map(|m| metric.g[(i, m)] * up[m][j][k][l]).sum();
                }
            }
        }
    }
    down
}

/// `R_ijkl = -hT_jk hT_il + hT_jl hT_ik + hS_jk hS_il - hS_jl hS_ik`.
pub fn riemann_from_second_fundamental(sff: &SecondFundamental) -> Tensor4 {
    let (t, s) = (&sff.h_t, &sff.h_s);
    let mut r = [[[[0.0; 2]; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    r[i][j][k][l] =
                        -t[(j, k)] * t[(i, l)] + t[(j, l)] * t[(i, k)] + s[(j, k)] * s[(i, l)] - s[(j, l)] * s[(i, k)];
                }
            }
        }
    }
    r
}

/// Both routes to the Riemann tensor at `u`. Metric derivatives are
/// analytic when the patch has exact order-3 jets and come from central
/// differences of the Christoffel symbols otherwise.
pub fn riemann_tensor(patch: &SurfacePatch, u1: f64, u2: f64) -> Result<RiemannPair> {
    let jet = patch.eval_jet(u1, u2)?;
    let metric = first_fundamental_form_tol(&jet, Tolerances::default().metric_det)?;
    let frame = crate::surface::normal_frame_with(&jet, patch.frame_rule)?;
    riemann_with(patch, u1, u2, &jet, &metric, &second_fundamental(&jet, &frame))
}

fn riemann_with(
    patch: &SurfacePatch,
    u1: f64,
    u2: f64,
    jet: &Jet3,
    metric: &Metric,
    sff: &SecondFundamental,
) -> Result<RiemannPair> {
    let gamma = christoffel_from_jet(jet, metric);
    let analytic = patch.has_analytic_jets() && jet.valid_order >= 3;
    let dgamma = if analytic {
        christoffel_gradient_analytic(jet, metric)
    } else {
        christoffel_gradient_fd(patch, u1, u2, CHRISTOFFEL_FD_STEP)?
    };
    Ok(RiemannPair {
        intrinsic: riemann_from_christoffel(metric, &gamma, &dgamma),
        extrinsic: riemann_from_second_fundamental(sff),
        analytic,
    })
}

/// `K_I = -R_1212 / det g`.
pub fn intrinsic_gauss_curvature(r: &Tensor4, metric: &Metric) -> f64 {
    -r[0][1][0][1] / metric.det
}

/// Classification flags of a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Flags {
    pub marginally_trapped: bool,
    pub strongly_marginally_trapped: bool,
    pub umbilic_plus: bool,
    pub umbilic_minus: bool,
    pub parabolic_plus: bool,
    pub parabolic_minus: bool,
    pub flat_plus: bool,
    pub flat_minus: bool,
    pub intrinsic_flat: bool,
    pub extrinsic_flat: bool,
}

impl Flags {
    pub const NAMES: [&'static str; 10] = [
        "marginallyTrapped",
        "stronglyMarginallyTrapped",
        "umbilicPlus",
        "umbilicMinus",
        "parabolicPlus",
        "parabolicMinus",
        "flatPlus",
        "flatMinus",
        "intrinsicFlat",
        "extrinsicFlat",
    ];

    pub fn values(&self) -> [bool; 10] {
        [
            self.marginally_trapped,
            self.strongly_marginally_trapped,
            self.umbilic_plus,
            self.umbilic_minus,
            self.parabolic_plus,
            self.parabolic_minus,
            self.flat_plus,
            self.flat_minus,
            self.intrinsic_flat,
            self.extrinsic_flat,
        ]
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        Flags::NAMES.iter().position(|n| *n == name).map(|i| self.values()[i])
    }
}

/// Thresholds actually applied at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub mt: f64,
    pub mt_lightcone: f64,
    pub umbilic: f64,
    pub parabolic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub flags: Flags,
    pub thresholds: Thresholds,
    /// Verdict of the lightcone mean curvature test, kept for cross-checks.
    pub mt_by_lightcone: bool,
    pub warnings: Vec<String>,
}

/// Every invariant at one point of a patch.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub u: (f64, f64),
    pub jet: Jet3,
    pub frame: NormalFrame,
    pub metric: Metric,
    pub sff: SecondFundamental,
    pub shape: ShapeOperators,
    pub kappa_t: (f64, f64),
    pub kappa_s: (f64, f64),
    pub kappa_plus: (f64, f64),
    pub kappa_minus: (f64, f64),
    pub scalars: CurvatureScalars,
    pub mean_curvature_vector: Vec4,
    pub gauss_curvature_vector: Vec4,
    pub riemann: RiemannPair,
    /// Intrinsic Gauss curvature from the Christoffel route.
    pub k_intrinsic: f64,
    pub classification: Classification,
}

impl CurvatureReport {
    pub fn flags(&self) -> &Flags {
        &self.classification.flags
    }

    /// Self product of the mean curvature vector.
    pub fn mean_curvature_square(&self) -> f64 {
        self.mean_curvature_vector.norm_sq()
    }

    /// `|K_I + K(nT) - K(nS)|`.
    pub fn egregium_residual(&self) -> f64 {
        (self.k_intrinsic + self.scalars.k_t - self.scalars.k_s).abs()
    }

    /// Largest Euclidean norm of
    /// `X_ij - Gamma^k_ij X_k + h_ij(nT) nT - h_ij(nS) nS` over `i, j`.
    pub fn gauss_equation_residual(&self) -> f64 {
        let gamma = christoffel_from_jet(&self.jet, &self.metric);
        let mut worst = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                let mut r = self.jet.d2(i, j);
                for k in 0..2 {
                    r -= self.jet.d1(k) * gamma.gamma[k][i][j];
                }
                r += self.frame.n_t * self.sff.h_t[(i, j)];
                r -= self.frame.n_s * self.sff.h_s[(i, j)];
                worst = worst.max(r.euclid_norm());
            }
        }
        worst
    }

    /// Tangential projection `g^{ab} <v, X_b> X_a`.
    pub fn tangential(&self, v: Vec4) -> Vec4 {
        let c = [v.inner(self.jet.x1), v.inner(self.jet.x2)];
        let mut out = Vec4::ZERO;
        for a in 0..2 {
            let w: f64 = (0..2).map(|b| self.metric.inv[(a, b)] * c[b]).sum();
            out += self.jet.d1(a) * w;
        }
        out
    }

    /// Largest norm of `pi^t(l_{u_i}) + h_i^j X_{u_j}` for the given
    /// derivatives of `l = nT + sign nS`.
    pub fn weingarten_residual(&self, sign: f64, dl: &[Vec4; 2]) -> f64 {
        let s = self.shape.signed(sign);
        let mut worst = 0.0_f64;
        for (i, d) in dl.iter().enumerate() {
            let mut r = self.tangential(*d);
            for j in 0..2 {
                r += self.jet.d1(j) * s[(i, j)];
            }
            worst = worst.max(r.euclid_norm());
        }
        worst
    }

    /// Scalar fields addressable by name in dumps.
    pub fn scalar(&self, name: &str) -> Option<f64> {
        let s = &self.scalars;
        Some(match name {
            "K_plus" => s.k_plus,
            "K_minus" => s.k_minus,
            "H_plus" => s.h_plus,
            "H_minus" => s.h_minus,
            "K_T" => s.k_t,
            "K_S" => s.k_s,
            "H_T" => s.h_t,
            "H_S" => s.h_s,
            "K_I" => self.k_intrinsic,
            "mean_curvature_square" => self.mean_curvature_square(),
            "egregium_residual" => self.egregium_residual(),
            "gauss_residual" => self.gauss_equation_residual(),
            "det_g" => self.metric.det,
            _ => return None,
        })
    }

    pub const SCALAR_NAMES: [&'static str; 13] = [
        "K_plus",
        "K_minus",
        "H_plus",
        "H_minus",
        "K_T",
        "K_S",
        "H_T",
        "H_S",
        "K_I",
        "mean_curvature_square",
        "egregium_residual",
        "gauss_residual",
        "det_g",
    ];
}

/// Applies the classification predicates to a report.
pub fn classify_point(r: &CurvatureReport, tol: &Tolerances) -> Classification {
    let s = &r.scalars;
    let mt_scale = 1.0 + s.h_t.abs() + s.h_s.abs();
    let tau_mt = tol.mt * mt_scale * mt_scale;
    // <H, H> = -H+ H-, so min |H+-| <= tau / max |H+-| is the same condition
    // as the isotropy test.
    let h_max = s.h_plus.abs().max(s.h_minus.abs());
    let tau_mt_l = if h_max > 0.0 { tau_mt / h_max } else { f64::MAX };
    let c = 1.0 + r.shape.s_t.norm() + r.shape.s_s.norm();
    let tau_u = tol.umbilic * c;
    let tau_p = tol.parabolic * c * c;

    let mt = r.mean_curvature_square().abs() <= tau_mt;
    let mt_l = s.h_plus.abs().min(s.h_minus.abs()) <= tau_mt_l;
    let umbilic_plus = (r.kappa_plus.1 - r.kappa_plus.0).abs() <= tau_u;
    let umbilic_minus = (r.kappa_minus.1 - r.kappa_minus.0).abs() <= tau_u;
    let parabolic_plus = s.k_plus.abs() <= tau_p;
    let parabolic_minus = s.k_minus.abs() <= tau_p;
    let flags = Flags {
        marginally_trapped: mt,
        strongly_marginally_trapped: r.mean_curvature_vector.euclid_norm() <= tau_mt,
        umbilic_plus,
        umbilic_minus,
        parabolic_plus,
        parabolic_minus,
        flat_plus: umbilic_plus && parabolic_plus,
        flat_minus: umbilic_minus && parabolic_minus,
        intrinsic_flat: r.k_intrinsic.abs() <= tau_p,
        extrinsic_flat: r.gauss_curvature_vector.euclid_norm() <= tau_p,
    };
    let mut warnings = Vec::new();
    if mt != mt_l {
        warnings.push(format!(
            "ConsistencyWarning: isotropy test gives {mt} (|<H,H>| = {:e}) but lightcone test gives {mt_l} (H+ = {:e}, H- = {:e})",
            r.mean_curvature_square(),
            s.h_plus,
            s.h_minus
        ));
    }
    Classification {
        flags,
        thresholds: Thresholds { mt: tau_mt, mt_lightcone: tau_mt_l, umbilic: tau_u, parabolic: tau_p },
        mt_by_lightcone: mt_l,
        warnings,
    }
}

/// The full report at `u` in the patch's own frame.
pub fn curvature_report(patch: &SurfacePatch, u1: f64, u2: f64, tol: &Tolerances) -> Result<CurvatureReport> {
    let jet = patch.eval_jet(u1, u2)?;
    let frame = crate::surface::normal_frame_with(&jet, patch.frame_rule)?;
    report_in_frame(patch, u1, u2, &jet, frame, tol)
}

/// The full report at `u` computed in a caller-supplied normal frame.
pub fn curvature_report_with_frame(
    patch: &SurfacePatch,
    u1: f64,
    u2: f64,
    frame: NormalFrame,
    tol: &Tolerances,
) -> Result<CurvatureReport> {
    let jet = patch.eval_jet(u1, u2)?;
    report_in_frame(patch, u1, u2, &jet, frame, tol)
}

fn report_in_frame(
    patch: &SurfacePatch,
    u1: f64,
    u2: f64,
    jet: &Jet3,
    frame: NormalFrame,
    tol: &Tolerances,
) -> Result<CurvatureReport> {
    let metric = first_fundamental_form_tol(jet, tol.metric_det)?;
    let sff = second_fundamental(jet, &frame);
    let shape = shape_operators(&metric, &sff);
    let pc = |m: &Matrix2<f64>| principal_curvatures_tol(m, tol.spectrum);
    let scalars = curvature_scalars(&shape);
    let riemann = riemann_with(patch, u1, u2, jet, &metric, &sff)?;
    let k_intrinsic = intrinsic_gauss_curvature(&riemann.intrinsic, &metric);
    let mut report = CurvatureReport {
        u: (u1, u2),
        jet: *jet,
        frame,
        metric,
        sff,
        kappa_t: pc(&shape.s_t)?,
        kappa_s: pc(&shape.s_s)?,
        kappa_plus: pc(&shape.s_plus)?,
        kappa_minus: pc(&shape.s_minus)?,
        shape,
        scalars,
        mean_curvature_vector: mean_curvature_vector(&frame, &scalars),
        gauss_curvature_vector: gaussian_curvature_vector(&frame, &scalars),
        riemann,
        k_intrinsic,
        classification: Classification {
            flags: Flags::default(),
            thresholds: Thresholds { mt: 0.0, mt_lightcone: 0.0, umbilic: 0.0, parabolic: 0.0 },
            mt_by_lightcone: false,
            warnings: Vec::new(),
        },
    };
    report.classification = classify_point(&report, tol);
    Ok(report)
}

/// Weingarten residuals for both lightlike normals using finite-difference
/// frame derivatives with step `h`.
pub fn weingarten_residuals(patch: &SurfacePatch, report: &CurvatureReport, h: f64) -> Result<(f64, f64)> {
    let d = frame_derivatives(patch, report.u.0, report.u.1, h)?;
    Ok((report.weingarten_residual(1.0, &d.l_plus), report.weingarten_residual(-1.0, &d.l_minus)))
}
