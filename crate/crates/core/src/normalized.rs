//! The normalized lightcone Gauss maps and the normalized invariants.

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curvature::{curvature_report_with_frame, CurvatureReport, Tolerances};
use crate::error::{GeometryError, Result};
use crate::minkowski::{project_to_s2plus, Vec4};
use crate::surface::{frame_derivatives, SurfacePatch};

/// Default relative tolerance of the isothermality test.
pub const ISOTHERMAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedReport {
    pub l_tilde_plus: Vec4,
    pub l_tilde_minus: Vec4,
    pub ell0_plus: f64,
    pub ell0_minus: f64,
    pub k_tilde_plus: f64,
    pub k_tilde_minus: f64,
    pub h_tilde_plus: f64,
    pub h_tilde_minus: f64,
    pub kappa_tilde_plus: (f64, f64),
    pub kappa_tilde_minus: (f64, f64),
    pub h_tilde_plus_form: Matrix2<f64>,
    pub h_tilde_minus_form: Matrix2<f64>,
}

impl NormalizedReport {
    /// `(K~, H~)` for the sign `+-1`.
    pub fn signed(&self, sign: f64) -> (f64, f64) {
        if sign >= 0.0 {
            (self.k_tilde_plus, self.h_tilde_plus)
        } else {
            (self.k_tilde_minus, self.h_tilde_minus)
        }
    }
}

pub fn normalized_report(r: &CurvatureReport) -> Result<NormalizedReport> {
    let f = &r.frame;
    let (lp, lm) = (project_to_s2plus(f.l_plus)?, project_to_s2plus(f.l_minus)?);
    let (ap, am) = (f.l_plus.x0, f.l_minus.x0);
    let s = &r.scalars;
    // l0 > 0 for future-directed lightlike vectors, so dividing keeps the
    // order of the principal curvatures.
    Ok(NormalizedReport {
        l_tilde_plus: lp,
        l_tilde_minus: lm,
        ell0_plus: ap,
        ell0_minus: am,
        k_tilde_plus: s.k_plus / (ap * ap),
        k_tilde_minus: s.k_minus / (am * am),
        h_tilde_plus: s.h_plus / ap,
        h_tilde_minus: s.h_minus / am,
        kappa_tilde_plus: (r.kappa_plus.0 / ap, r.kappa_plus.1 / ap),
        kappa_tilde_minus: (r.kappa_minus.0 / am, r.kappa_minus.1 / am),
        h_tilde_plus_form: r.sff.h_plus / ap,
        h_tilde_minus_form: r.sff.h_minus / am,
    })
}

/// Outcome of comparing the normalized data across boosted frames.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FrameIndependence {
    /// Largest Euclidean deviation of `L~+-` from the base frame.
    pub l_tilde_deviation: f64,
    /// Largest deviation of `H~+-` and `K~+-` from the base frame.
    pub value_deviation: f64,
    /// Trials in which the sign of some `H~+-` flipped.
    pub sign_changes: usize,
    /// Trials in which some vanishing predicate of `H~+-`, `K~+-` changed.
    pub vanishing_disagreements: usize,
    /// Largest residual of `l0 L~_{u_i} = l_{u_i} - (l0)_{u_i} L~`.
    pub derivative_split_residual: f64,
}

impl FrameIndependence {
    pub fn max_deviation(&self) -> f64 {
        self.l_tilde_deviation
            .max(self.value_deviation)
            .max(self.sign_changes as f64)
            .max(self.vanishing_disagreements as f64)
    }
}

fn vanishing(n: &NormalizedReport, tau: f64) -> [bool; 4] {
    [
        n.h_tilde_plus.abs() <= tau,
        n.h_tilde_minus.abs() <= tau,
        n.k_tilde_plus.abs() <= tau,
        n.k_tilde_minus.abs() <= tau,
    ]
}

fn sign_pattern(n: &NormalizedReport, tau: f64) -> [i8; 2] {
    let s = |v: f64| {
        if v.abs() <= tau {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    };
    [s(n.h_tilde_plus), s(n.h_tilde_minus)]
}

/// Boost rapidities used by [`frame_independence_check`], in `[-2, 2]`.
pub fn random_boosts(trials: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| rng.gen_range(-2.0..=2.0)).collect()
}

/// Rebuilds the normalized data in `trials` randomly boosted frames and
/// compares it with the patch's own frame.
pub fn frame_independence_check(
    patch: &SurfacePatch,
    u1: f64,
    u2: f64,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<FrameIndependence> {
    let base_frame = patch.frame(u1, u2)?;
    let base_report = curvature_report_with_frame(patch, u1, u2, base_frame, tol)?;
    let base = normalized_report(&base_report)?;
    let scale = 1.0 + base_report.shape.s_t.norm() + base_report.shape.s_s.norm();
    let tau = tol.mt * scale;
    let mut out = FrameIndependence {
        derivative_split_residual: derivative_split_residual(patch, u1, u2, &base)?,
        ..Default::default()
    };
    for theta in random_boosts(trials, seed) {
        let r = curvature_report_with_frame(patch, u1, u2, base_frame.boost(theta), tol)?;
        let n = normalized_report(&r)?;
        let dl = (n.l_tilde_plus - base.l_tilde_plus)
            .euclid_norm()
            .max((n.l_tilde_minus - base.l_tilde_minus).euclid_norm());
        out.l_tilde_deviation = out.l_tilde_deviation.max(dl);
        let dv = [
            n.h_tilde_plus - base.h_tilde_plus,
            n.h_tilde_minus - base.h_tilde_minus,
            n.k_tilde_plus - base.k_tilde_plus,
            n.k_tilde_minus - base.k_tilde_minus,
        ]
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
        out.value_deviation = out.value_deviation.max(dv);
        if sign_pattern(&n, tau) != sign_pattern(&base, tau) {
            out.sign_changes += 1;
        }
        if vanishing(&n, tau) != vanishing(&base, tau) {
            out.vanishing_disagreements += 1;
        }
    }
    Ok(out)
}

/// Differentiating `l = l0 L~` by central differences of the frame and of
/// the projected map.
fn derivative_split_residual(patch: &SurfacePatch, u1: f64, u2: f64, base: &NormalizedReport) -> Result<f64> {
    let h = 1e-5;
    let d = frame_derivatives(patch, u1, u2, h)?;
    let mut worst = 0.0_f64;
    for k in 0..2 {
        let (a, b) = if k == 0 { (h, 0.0) } else { (0.0, h) };
        if !patch.domain.contains(u1 + a, u2 + b) || !patch.domain.contains(u1 - a, u2 - b) {
            continue;
        }
        let fp = patch.frame(u1 + a, u2 + b)?;
        let fm = patch.frame(u1 - a, u2 - b)?;
        for (sign, l0, lt) in [(1.0, base.ell0_plus, base.l_tilde_plus), (-1.0, base.ell0_minus, base.l_tilde_minus)] {
            let (p, m) = (fp.ell(sign), fm.ell(sign));
            let dlt = (project_to_s2plus(p)? - project_to_s2plus(m)?) / (2.0 * h);
            let dl0 = (p.x0 - m.x0) / (2.0 * h);
            let r = dlt * l0 - (d.ell(sign)[k] - lt * dl0);
            worst = worst.max(r.euclid_norm());
        }
    }
    Ok(worst)
}

/// Residuals of the Laplacian identity in isothermal coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsothermalResidual {
    /// Against `g11 (-l0+ (H~+ + H~-) nT + l0- (H~+ - H~-) nS)`, which
    /// assumes `l0+ = l0-`.
    pub equal_time_form: Vec4,
    /// Against `g11 (-(l0+ H~+ + l0- H~-) nT + (l0+ H~+ - l0- H~-) nS)`,
    /// valid in any frame.
    pub general_form: Vec4,
    /// `X_11 + X_22`.
    pub laplacian: Vec4,
}

/// Checks the isothermality precondition and returns both residuals.
pub fn isothermal_identity_residual(
    r: &CurvatureReport,
    n: &NormalizedReport,
    tau_iso: f64,
) -> Result<IsothermalResidual> {
    let g = r.metric.g;
    let g11 = g[(0, 0)];
    let defect = ((g11 - g[(1, 1)]).abs()).max(g[(0, 1)].abs());
    if defect > tau_iso * g11 {
        return Err(GeometryError::NotIsothermal { defect: defect / g11 });
    }
    let (nt, ns) = (r.frame.n_t, r.frame.n_s);
    let lap = r.jet.x11 + r.jet.x22;
    let (ap, am) = (n.ell0_plus, n.ell0_minus);
    let (hp, hm) = (n.h_tilde_plus, n.h_tilde_minus);
    let equal = (nt * (-ap * (hp + hm)) + ns * (am * (hp - hm))) * g11;
    let general = (nt * (-(ap * hp + am * hm)) + ns * (ap * hp - am * hm)) * g11;
    Ok(IsothermalResidual { equal_time_form: lap - equal, general_form: lap - general, laplacian: lap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::curvature::curvature_report;

    fn report(p: &SurfacePatch, a: f64, b: f64) -> (CurvatureReport, NormalizedReport) {
        let r = curvature_report(p, a, b, &Tolerances::default()).unwrap();
        let n = normalized_report(&r).unwrap();
        (r, n)
    }

    #[test]
    fn euclidean_slice_has_unit_time_components() {
        let (r, n) = report(&catalog::sphere(1.0), 0.8, 2.0);
        assert_eq!((n.ell0_plus, n.ell0_minus), (1.0, 1.0));
        assert!((n.h_tilde_plus - r.scalars.h_plus).abs() < 1e-15);
        assert!((n.k_tilde_minus - 1.0).abs() < 1e-14);
        assert_eq!(n.l_tilde_plus.x0, 1.0);
    }

    #[test]
    fn plane_vanishes() {
        let (_, n) = report(&catalog::plane(), 0.1, 0.1);
        assert_eq!([n.k_tilde_plus, n.k_tilde_minus, n.h_tilde_plus, n.h_tilde_minus], [0.0; 4]);
    }

    #[test]
    fn scaling_relations() {
        let p = catalog::generic_spacelike();
        let (r, n) = report(&p, 0.4, -0.7);
        assert!((n.k_tilde_plus * n.ell0_plus.powi(2) - r.scalars.k_plus).abs() < 1e-12);
        assert!((n.h_tilde_minus * n.ell0_minus - r.scalars.h_minus).abs() < 1e-12);
    }

    #[test]
    fn frame_independence() {
        let tol = Tolerances::default();
        for p in [catalog::plane(), catalog::sphere(1.0), catalog::generic_spacelike()] {
            let (a, b) = p.domain.center();
            let f = frame_independence_check(&p, a, b, 10, 7, &tol).unwrap();
            assert!(f.l_tilde_deviation < 1e-9, "{}: {f:?}", p.name);
            assert!(f.value_deviation < 1e-9, "{}: {f:?}", p.name);
            assert_eq!(f.sign_changes + f.vanishing_disagreements, 0);
            assert!(f.derivative_split_residual < 1e-6, "{}: {f:?}", p.name);
        }
    }

    #[test]
    fn isothermal_identity() {
        for (p, harmonic) in [(catalog::graph_harmonic(), true), (catalog::graph_nonharmonic(), false)] {
            let (r, n) = report(&p, 0.3, -0.5);
            let res = isothermal_identity_residual(&r, &n, ISOTHERMAL_TOL).unwrap();
            assert!(res.equal_time_form.euclid_norm() < 1e-8);
            assert!(res.general_form.euclid_norm() < 1e-8);
            assert_eq!(res.laplacian == Vec4::ZERO, harmonic);
        }
        let p = catalog::mercator_sphere();
        let (r, n) = report(&p, 1.0, 0.7);
        let res = isothermal_identity_residual(&r, &n, ISOTHERMAL_TOL).unwrap();
        assert!(res.equal_time_form.euclid_norm() < 1e-7 && res.general_form.euclid_norm() < 1e-7);
    }

    #[test]
    fn not_isothermal() {
        let (r, n) = report(&catalog::sphere(1.0), 0.8, 1.0);
        assert!(matches!(
            isothermal_identity_residual(&r, &n, ISOTHERMAL_TOL),
            Err(GeometryError::NotIsothermal { .. })
        ));
    }
}
