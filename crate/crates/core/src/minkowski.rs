//! Linear algebra of Lorentz-Minkowski 4-space with signature (-,+,+,+).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// Relative factor for the default causal-classification tolerance.
pub const DEFAULT_CAUSAL_TOL: f64 = 1e-10;

/// A vector of R^4_1. Component 0 is the time coordinate.
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec4 {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Vec4 {
    pub const ZERO: Vec4 = Vec4::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Vec4 { x0, x1, x2, x3 }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Vec4::new(a[0], a[1], a[2], a[3])
    }

    /// Canonical basis vector `e_i`.
    pub fn basis(i: usize) -> Self {
        let mut a = [0.0; 4];
        a[i] = 1.0;
        Vec4::from_array(a)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    /// Pseudo scalar product `-a0 b0 + a1 b1 + a2 b2 + a3 b3`.
    #[inline]
    pub fn inner(self, other: Vec4) -> f64 {
        minkowski_inner(self, other)
    }

    /// Self product `<v, v>`.
    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.inner(self)
    }

    /// Pseudo norm `sqrt(|<v, v>|)`.
    pub fn pseudo_norm(self) -> f64 {
        self.norm_sq().abs().sqrt()
    }

    pub fn euclid_norm_sq(self) -> f64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn euclid_norm(self) -> f64 {
        self.euclid_norm_sq().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    pub fn max_abs(self) -> f64 {
        self.to_array().iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Largest 2x2 minor of the pair, i.e. how far `self` and `other` are
    /// from being parallel (relative to their Euclidean sizes).
    pub fn parallel_defect(self, other: Vec4) -> f64 {
        let a = self.to_array();
        let b = other.to_array();
        let scale = self.euclid_norm() * other.euclid_norm();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in (i + 1)..4 {
                worst = worst.max((a[i] * b[j] - a[j] * b[i]).abs());
            }
        }
        worst / scale
    }
}

impl fmt::Debug for Vec4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.x0, self.x1, self.x2, self.x3)
    }
}

impl Index<usize> for Vec4 {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x0,
            1 => &self.x1,
            2 => &self.x2,
            3 => &self.x3,
            _ => panic!("Vec4 index {i} out of range"),
        }
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl AddAssign for Vec4 {
    fn add_assign(&mut self, o: Vec4) {
        *self = *self + o;
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl SubAssign for Vec4 {
    fn sub_assign(&mut self, o: Vec4) {
        *self = *self - o;
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    fn mul(self, s: f64) -> Vec4 {
        Vec4::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;
    fn mul(self, v: Vec4) -> Vec4 {
        v * self
    }
}

impl Div<f64> for Vec4 {
    type Output = Vec4;
    fn div(self, s: f64) -> Vec4 {
        Vec4::new(self.x0 / s, self.x1 / s, self.x2 / s, self.x3 / s)
    }
}

/// Causal character of a vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Lightlike,
    Zero,
}

pub fn minkowski_inner(a: Vec4, b: Vec4) -> f64 {
    -a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3
}

/// Classifies `v` with an absolute tolerance `tol` on `<v, v>`.
pub fn causal_class(v: Vec4, tol: f64) -> CausalClass {
    debug_assert!(tol >= 0.0);
    if v == Vec4::ZERO {
        return CausalClass::Zero;
    }
    let q = v.norm_sq();
    if q > tol {
        CausalClass::Spacelike
    } else if q < -tol {
        CausalClass::Timelike
    } else {
        CausalClass::Lightlike
    }
}

/// Classifies `v` using the default tolerance `1e-10 * |v|_E^2`.
pub fn causal_class_default(v: Vec4) -> CausalClass {
    causal_class(v, DEFAULT_CAUSAL_TOL * v.euclid_norm_sq())
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Determinant of the 4x4 matrix with rows `a, b, c, d`.
pub fn det4(a: Vec4, b: Vec4, c: Vec4, d: Vec4) -> f64 {
    let rows = [b.to_array(), c.to_array(), d.to_array()];
    let first = a.to_array();
    (0..4)
        .map(|j: usize| {
            let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * first[j] * det3(minor(&rows, j))
        })
        .sum()
}

fn minor(rows: &[[f64; 4]; 3], skip: usize) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for (r, row) in rows.iter().enumerate() {
        let mut k = 0;
        for (j, &v) in row.iter().enumerate() {
            if j != skip {
                m[r][k] = v;
                k += 1;
            }
        }
    }
    m
}

/// Ternary wedge product: the vector `w` with `<x, w> = det(x, a, b, c)` for
/// every `x`. It is pseudo-orthogonal to each argument.
pub fn wedge3(a: Vec4, b: Vec4, c: Vec4) -> Vec4 {
    let rows = [a.to_array(), b.to_array(), c.to_array()];
    let cof = |j: usize| {
        let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * det3(minor(&rows, j))
    };
    // First row of the formal determinant is (-e0, e1, e2, e3).
    Vec4::new(-cof(0), cof(1), cof(2), cof(3))
}

/// The projection of the lightcone onto the lightcone unit sphere `S^2_+`.
pub fn project_to_s2plus(v: Vec4) -> Result<Vec4, GeometryError> {
    let scale = v.euclid_norm_sq();
    if causal_class(v, DEFAULT_CAUSAL_TOL * scale.max(f64::MIN_POSITIVE)) != CausalClass::Lightlike {
        return Err(GeometryError::NonLightlikeInput { self_product: v.norm_sq() });
    }
    if v.x0.abs() <= 1e-12 * scale.sqrt() {
        return Err(GeometryError::ZeroTimeComponent);
    }
    Ok(Vec4::new(1.0, v.x1 / v.x0, v.x2 / v.x0, v.x3 / v.x0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Vec4 {
        Vec4::basis(i)
    }

    #[test]
    fn signature() {
        assert_eq!(minkowski_inner(e(0), e(0)), -1.0);
        assert_eq!(minkowski_inner(e(1), e(1)), 1.0);
        let n = Vec4::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(minkowski_inner(n, n), 0.0);
    }

    #[test]
    fn classes() {
        assert_eq!(causal_class_default(e(0)), CausalClass::Timelike);
        assert_eq!(causal_class_default(Vec4::new(1.0, 1.0, 0.0, 0.0)), CausalClass::Lightlike);
        assert_eq!(causal_class_default(Vec4::new(0.0, 2.0, 0.0, 1.0)), CausalClass::Spacelike);
        assert_eq!(causal_class_default(Vec4::ZERO), CausalClass::Zero);
    }

    #[test]
    fn wedge_of_basis_vectors() {
        // Cofactor oracle: <x, w> = det(x, e1, e2, e3) = x0 for every x.
        let w = wedge3(e(1), e(2), e(3));
        assert_eq!(w, Vec4::new(-1.0, 0.0, 0.0, 0.0));
        for i in 0..4 {
            assert_eq!(w.inner(e(i)), det4(e(i), e(1), e(2), e(3)));
        }
        assert_eq!(wedge3(e(0), e(1), e(2)), Vec4::new(0.0, 0.0, 0.0, -1.0));
        assert_eq!(wedge3(e(0), e(2), e(3)), Vec4::new(0.0, -1.0, 0.0, 0.0));
    }

    #[test]
    fn wedge_with_repeated_argument_vanishes() {
        let a = Vec4::new(0.3, -1.2, 2.0, 0.7);
        let b = Vec4::new(1.1, 0.4, -0.5, 3.0);
        assert!(wedge3(a, a, b).max_abs() < 1e-14);
    }

    #[test]
    fn projection_examples() {
        let p = |v| project_to_s2plus(v).unwrap();
        assert_eq!(p(Vec4::new(2.0, 2.0, 0.0, 0.0)), Vec4::new(1.0, 1.0, 0.0, 0.0));
        assert_eq!(p(Vec4::new(1.0, 0.0, 1.0, 0.0)), Vec4::new(1.0, 0.0, 1.0, 0.0));
        assert_eq!(p(Vec4::new(-3.0, 0.0, 0.0, 3.0)), Vec4::new(1.0, 0.0, 0.0, -1.0));
    }

    #[test]
    fn projection_rejects_non_null_vectors() {
        assert!(matches!(project_to_s2plus(e(0)), Err(GeometryError::NonLightlikeInput { .. })));
        assert!(matches!(project_to_s2plus(Vec4::ZERO), Err(GeometryError::NonLightlikeInput { .. })));
    }
}
