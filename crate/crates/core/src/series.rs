//! Bivariate truncated Taylor series of total order 3.
//!
//! A [`Taylor`] holds the coefficients of a polynomial in `(du1, du2)`,
//! so forward-mode propagation through arithmetic and the elementary
//! functions yields every partial derivative up to order 3 at once.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Number of monomials `du1^a du2^b` with `a + b <= 3`.
pub const NCOEF: usize = 10;
pub const ORDER: usize = 3;

/// Exponents of each stored coefficient, graded by total degree.
pub const EXPONENTS: [(usize, usize); NCOEF] =
    [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)];

/// Storage index of the monomial `du1^a du2^b`.
pub const fn coef_index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

const fn product_table() -> [(u8, u8, u8); 35] {
    let mut t = [(0u8, 0u8, 0u8); 35];
    let mut n = 0;
    let mut i = 0;
    while i < NCOEF {
        let mut j = 0;
        while j < NCOEF {
            let (ai, bi) = EXPONENTS[i];
            let (aj, bj) = EXPONENTS[j];
            if ai + bi + aj + bj <= ORDER {
                t[n] = (i as u8, j as u8, coef_index(ai + aj, bi + bj) as u8);
                n += 1;
            }
            j += 1;
        }
        i += 1;
    }
    t
}

const PRODUCT: [(u8, u8, u8); 35] = product_table();

const FACT: [f64; 4] = [1.0, 1.0, 2.0, 6.0];

#[derive(Clone, Copy, PartialEq, Default)]
pub struct Taylor {
    pub c: [f64; NCOEF],
}

impl std::fmt::Debug for Taylor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Taylor{:?}", self.c)
    }
}

impl Taylor {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; NCOEF];
        c[0] = v;
        Taylor { c }
    }

    /// The coordinate `u_{k+1}` seeded at `value`.
    pub fn variable(value: f64, k: usize) -> Self {
        let mut t = Taylor::constant(value);
        t.c[1 + k] = 1.0;
        t
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// The partial derivative `d^(a+b) / du1^a du2^b` at the expansion point.
    pub fn partial(&self, a: usize, b: usize) -> f64 {
        assert!(a + b <= ORDER, "derivative order exceeds the series order");
        FACT[a] * FACT[b] * self.c[coef_index(a, b)]
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    /// Formal partial derivative in direction `k`. The top-degree
    /// coefficients of the result are unknown and set to zero, so the
    /// result is exact only up to order 2.
    pub fn diff(&self, k: usize) -> Taylor {
        let mut out = [0.0; NCOEF];
        for (i, &(a, b)) in EXPONENTS.iter().enumerate() {
            if a + b == ORDER {
                continue;
            }
            let (na, nb, m) = if k == 0 { (a + 1, b, a + 1) } else { (a, b + 1, b + 1) };
            out[i] = m as f64 * self.c[coef_index(na, nb)];
        }
        Taylor { c: out }
    }

    /// Applies `f` given its value and first three derivatives at `c0`.
    fn compose(&self, d: [f64; 4]) -> Taylor {
        let mut delta = *self;
        delta.c[0] = 0.0;
        let d2 = delta * delta;
        let d3 = d2 * delta;
        let mut out = [0.0; NCOEF];
        out[0] = d[0];
        for i in 1..NCOEF {
            out[i] = d[1] * delta.c[i] + d[2] / 2.0 * d2.c[i] + d[3] / 6.0 * d3.c[i];
        }
        Taylor { c: out }
    }

    pub fn recip(&self) -> Taylor {
        let x = self.c[0];
        let r = 1.0 / x;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn sqrt(&self) -> Taylor {
        let r = self.c[0].sqrt();
        self.compose([r, 0.5 / r, -0.25 / (r * r * r), 0.375 / (r * r * r * r * r)])
    }

    pub fn sin(&self) -> Taylor {
        let (s, c) = self.c[0].sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Taylor {
        let (s, c) = self.c[0].sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn tan(&self) -> Taylor {
        let t = self.c[0].tan();
        let p = 1.0 + t * t;
        self.compose([t, p, 2.0 * t * p, p * (2.0 + 6.0 * t * t)])
    }

    pub fn sinh(&self) -> Taylor {
        let (s, c) = (self.c[0].sinh(), self.c[0].cosh());
        self.compose([s, c, s, c])
    }

    pub fn cosh(&self) -> Taylor {
        let (s, c) = (self.c[0].sinh(), self.c[0].cosh());
        self.compose([c, s, c, s])
    }

    pub fn tanh(&self) -> Taylor {
        let t = self.c[0].tanh();
        let p = 1.0 - t * t;
        self.compose([t, p, -2.0 * t * p, p * (6.0 * t * t - 2.0)])
    }

    pub fn exp(&self) -> Taylor {
        let e = self.c[0].exp();
        self.compose([e, e, e, e])
    }

    pub fn ln(&self) -> Taylor {
        let x = self.c[0];
        let r = 1.0 / x;
        self.compose([x.ln(), r, -r * r, 2.0 * r * r * r])
    }

    pub fn atan(&self) -> Taylor {
        let x = self.c[0];
        let q = 1.0 / (1.0 + x * x);
        self.compose([x.atan(), q, -2.0 * x * q * q, (6.0 * x * x - 2.0) * q * q * q])
    }

    pub fn powi(&self, n: i32) -> Taylor {
        let x = self.c[0];
        let nf = n as f64;
        let d1 = if n == 0 { 0.0 } else { nf * x.powi(n - 1) };
        let d2 = if n == 0 || n == 1 { 0.0 } else { nf * (nf - 1.0) * x.powi(n - 2) };
        let d3 = if (0..=2).contains(&n) { 0.0 } else { nf * (nf - 1.0) * (nf - 2.0) * x.powi(n - 3) };
        self.compose([x.powi(n), d1, d2, d3])
    }

    pub fn powf(&self, p: f64) -> Taylor {
        let x = self.c[0];
        self.compose([
            x.powf(p),
            p * x.powf(p - 1.0),
            p * (p - 1.0) * x.powf(p - 2.0),
            p * (p - 1.0) * (p - 2.0) * x.powf(p - 3.0),
        ])
    }

    /// `self ^ e` for a series exponent. Constant integer exponents are
    /// go through `powi` so negative bases stay valid.
    pub fn pow(&self, e: &Taylor) -> Taylor {
        let is_const = e.c[1..].iter().all(|&v| v == 0.0);
        if is_const {
            let p = e.c[0];
            if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
                return self.powi(p as i32);
            }
            return self.powf(p);
        }
        (*e * self.ln()).exp()
    }
}

impl From<f64> for Taylor {
    fn from(v: f64) -> Self {
        Taylor::constant(v)
    }
}

impl Add for Taylor {
    type Output = Taylor;
    fn add(mut self, o: Taylor) -> Taylor {
        for i in 0..NCOEF {
            self.c[i] += o.c[i];
        }
        self
    }
}

impl Sub for Taylor {
    type Output = Taylor;
    fn sub(mut self, o: Taylor) -> Taylor {
        for i in 0..NCOEF {
            self.c[i] -= o.c[i];
        }
        self
    }
}

impl Neg for Taylor {
    type Output = Taylor;
    fn neg(mut self) -> Taylor {
        for v in self.c.iter_mut() {
            *v = -*v;
        }
        self
    }
}

impl Mul for Taylor {
    type Output = Taylor;
    fn mul(self, o: Taylor) -> Taylor {
        let mut out = [0.0; NCOEF];
        for &(i, j, k) in PRODUCT.iter() {
            out[k as usize] += self.c[i as usize] * o.c[j as usize];
        }
        Taylor { c: out }
    }
}

impl Div for Taylor {
    type Output = Taylor;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Taylor) -> Taylor {
        self * o.recip()
    }
}

impl Add<f64> for Taylor {
    type Output = Taylor;
    fn add(mut self, o: f64) -> Taylor {
        self.c[0] += o;
        self
    }
}

impl Sub<f64> for Taylor {
    type Output = Taylor;
    fn sub(mut self, o: f64) -> Taylor {
        self.c[0] -= o;
        self
    }
}

impl Mul<f64> for Taylor {
    type Output = Taylor;
    fn mul(mut self, o: f64) -> Taylor {
        for v in self.c.iter_mut() {
            *v *= o;
        }
        self
    }
}

impl Div<f64> for Taylor {
    type Output = Taylor;
    fn div(self, o: f64) -> Taylor {
        self * (1.0 / o)
    }
}

impl AddAssign for Taylor {
    fn add_assign(&mut self, o: Taylor) {
        *self = *self + o;
    }
}

impl SubAssign for Taylor {
    fn sub_assign(&mut self, o: Taylor) {
        *self = *self - o;
    }
}

impl MulAssign for Taylor {
    fn mul_assign(&mut self, o: Taylor) {
        *self = *self * o;
    }
}

/// Scalars that the frame construction can run on: plain reals and
/// Taylor series.
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + From<f64>
{
    fn value(&self) -> f64;
    fn sqrt(&self) -> Self;
}

impl Real for f64 {
    fn value(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
}

impl Real for Taylor {
    fn value(&self) -> f64 {
        self.c[0]
    }
    fn sqrt(&self) -> Self {
        Taylor::sqrt(self)
    }
}

/// A 4-vector over a [`Real`] scalar, used by generic frame code.
pub type V4<T> = [T; 4];

pub fn inner<T: Real>(a: &V4<T>, b: &V4<T>) -> T {
    -(a[0] * b[0]) + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

pub fn scale<T: Real>(a: &V4<T>, s: T) -> V4<T> {
    [a[0] * s, a[1] * s, a[2] * s, a[3] * s]
}

pub fn add<T: Real>(a: &V4<T>, b: &V4<T>) -> V4<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub fn sub<T: Real>(a: &V4<T>, b: &V4<T>) -> V4<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

/// Generic form of [`crate::minkowski::wedge3`].
pub fn wedge3<T: Real>(a: &V4<T>, b: &V4<T>, c: &V4<T>) -> V4<T> {
    let m = |i: usize, j: usize, k: usize| {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    [-m(1, 2, 3), -m(0, 2, 3), m(0, 1, 3), -m(0, 1, 2)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(u1: f64, u2: f64) -> (Taylor, Taylor) {
        (Taylor::variable(u1, 0), Taylor::variable(u2, 1))
    }

    #[test]
    fn index_layout() {
        for (i, &(a, b)) in EXPONENTS.iter().enumerate() {
            assert_eq!(coef_index(a, b), i);
        }
    }

    #[test]
    fn polynomial_partials() {
        // f = u1^3 u2^0 + 2 u1 u2^2 at (2, 3)
        let (x, y) = vars(2.0, 3.0);
        let f = x * x * x + x * y * y * 2.0;
        assert_eq!(f.value(), 8.0 + 36.0);
        assert_eq!(f.partial(1, 0), 12.0 + 18.0);
        assert_eq!(f.partial(0, 1), 24.0);
        assert_eq!(f.partial(2, 0), 12.0);
        assert_eq!(f.partial(1, 1), 12.0);
        assert_eq!(f.partial(0, 2), 8.0);
        assert_eq!(f.partial(3, 0), 6.0);
        assert_eq!(f.partial(1, 2), 4.0);
        assert_eq!(f.partial(2, 1), 0.0);
    }

    #[test]
    fn elementary_functions_match_closed_forms() {
        let (x, y) = vars(0.7, -0.4);
        let f = (x * y).sin();
        let (u, v) = (0.7_f64, -0.4_f64);
        let p = u * v;
        assert!((f.partial(1, 1) - (p.cos() - p * p.sin())).abs() < 1e-14);
        assert!((f.partial(2, 1) - (-2.0 * v * p.sin() - p * v * p.cos())).abs() < 1e-14);
        let g = x.exp() * y.cosh();
        assert!((g.partial(3, 0) - u.exp() * v.cosh()).abs() < 1e-14);
        assert!((g.partial(1, 2) - u.exp() * v.cosh()).abs() < 1e-14);
        let h = x.atan();
        let d3 = (6.0 * u * u - 2.0) / (1.0 + u * u).powi(3);
        assert!((h.partial(3, 0) - d3).abs() < 1e-14);
    }

    #[test]
    fn inverse_functions_round_trip() {
        let (x, y) = vars(1.3, 0.2);
        let s = x * x + y;
        for t in [s.sqrt() * s.sqrt(), s.ln().exp(), s.atan().tan()] {
            for i in 0..NCOEF {
                assert!((t.c[i] - s.c[i]).abs() < 1e-12, "{t:?} vs {s:?}");
            }
        }
        let r = s / s;
        assert!((r.c[0] - 1.0).abs() < 1e-15 && r.c[1..].iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn integer_powers_of_negative_bases() {
        let (x, _) = vars(-2.0, 0.0);
        let p = x.pow(&Taylor::constant(3.0));
        assert_eq!(p.value(), -8.0);
        assert_eq!(p.partial(1, 0), 12.0);
        assert_eq!(p.partial(2, 0), -12.0);
        assert_eq!(p.partial(3, 0), 6.0);
    }

    #[test]
    fn formal_derivative() {
        let (x, y) = vars(0.5, 1.5);
        let f = x * x * y;
        let fx = f.diff(0);
        assert_eq!(fx.value(), f.partial(1, 0));
        assert_eq!(fx.partial(1, 0), f.partial(2, 0));
        assert_eq!(fx.partial(1, 1), f.partial(2, 1));
    }

    #[test]
    fn generic_wedge_matches_cofactor_version() {
        use crate::minkowski::{wedge3 as w, Vec4};
        let a = [0.3, -1.2, 2.0, 0.7];
        let b = [1.1, 0.4, -0.5, 3.0];
        let c = [-0.6, 2.2, 0.1, -1.4];
        let g = wedge3(&a, &b, &c);
        let f = w(Vec4::from_array(a), Vec4::from_array(b), Vec4::from_array(c));
        for i in 0..4 {
            assert!((g[i] - f[i]).abs() < 1e-14);
        }
    }
}
