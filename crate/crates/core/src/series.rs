//! Truncated Taylor series in one variable.
//!
//! A [`TruncatedSeries`] holds the coefficients `c_0 .. c_N` of a germ
//! `f(base_point + t) = sum c_k t^k + O(t^{N+1})`. All arithmetic keeps the
//! truncation order fixed and refuses to mix germs taken at different base
//! points.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold below which a coefficient counts as zero in [`TruncatedSeries::ord`].
pub const DEFAULT_ORD_TOL: f64 = 1e-9;
/// Truncation order used when none is given.
pub const DEFAULT_ORDER: usize = 16;
/// Radius of the Cauchy circle used by [`TruncatedSeries::from_function`] by default.
pub const DEFAULT_RADIUS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    base_point: f64,
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    pub fn new(base_point: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "a truncated series needs at least one coefficient".into(),
            ));
        }
        Ok(Self { base_point, coeffs })
    }

    /// Builds a series from real coefficients.
    pub fn from_real(base_point: f64, coeffs: &[f64]) -> Result<Self> {
        Self::new(base_point, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(base_point: f64, order: usize) -> Self {
        Self {
            base_point,
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn constant(base_point: f64, order: usize, value: Complex64) -> Self {
        let mut s = Self::zero(base_point, order);
        s.coeffs[0] = value;
        s
    }

    pub fn one(base_point: f64, order: usize) -> Self {
        Self::constant(base_point, order, Complex64::new(1.0, 0.0))
    }

    /// The local coordinate `t` itself (the germ of `x - base_point`).
    pub fn variable(base_point: f64, order: usize) -> Self {
        Self::monomial(base_point, order, 1, Complex64::new(1.0, 0.0))
    }

    /// `c * t^k`, or zero when `k` exceeds the order.
    pub fn monomial(base_point: f64, order: usize, k: usize, c: Complex64) -> Self {
        let mut s = Self::zero(base_point, order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Vanishing order: the smallest index whose coefficient exceeds
    /// `rel_tol` times the largest coefficient magnitude. `None` encodes the
    /// numerically zero germ.
    pub fn ord(&self, rel_tol: f64) -> Option<usize> {
        let threshold = rel_tol * self.max_abs();
        self.coeffs.iter().position(|c| c.norm() > threshold)
    }

    /// Like [`ord`](Self::ord) but with an absolute threshold.
    pub fn ord_abs(&self, threshold: f64) -> Option<usize> {
        self.coeffs.iter().position(|c| c.norm() > threshold)
    }

    pub fn is_zero(&self, rel_tol: f64) -> bool {
        self.ord(rel_tol).is_none()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        if self.base_point != other.base_point {
            return Err(Error::BasePointMismatch(self.base_point, other.base_point));
        }
        Ok(())
    }

    pub fn arith(&self, other: &Self, op: SeriesOp) -> Result<Self> {
        match op {
            SeriesOp::Add => self.add(other),
            SeriesOp::Mul => self.mul(other),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs[..n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self {
            base_point: self.base_point,
            coeffs: out,
        })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            base_point: self.base_point,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            base_point: self.base_point,
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    /// Term-by-term derivative. The top coefficient becomes zero so the
    /// order is preserved.
    pub fn derivative(&self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for k in 1..n {
            out[k - 1] = self.coeffs[k] * k as f64;
        }
        Self {
            base_point: self.base_point,
            coeffs: out,
        }
    }

    /// Substitutes `t -> c t`.
    pub fn rescale(&self, c: Complex64) -> Self {
        let mut pow = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let v = a * pow;
                pow *= c;
                v
            })
            .collect();
        Self {
            base_point: self.base_point,
            coeffs,
        }
    }

    /// Evaluates the truncated polynomial at local offset `dt`.
    pub fn eval(&self, dt: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * dt + c)
    }

    /// `exp(self)` through the recurrence `k b_k = sum_j j a_j b_{k-j}`.
    pub fn exp(&self) -> Self {
        let n = self.coeffs.len();
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        b[0] = self.coeffs[0].exp();
        for k in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * b[k - j] * j as f64;
            }
            b[k] = acc / k as f64;
        }
        Self {
            base_point: self.base_point,
            coeffs: b,
        }
    }

    pub fn sin(&self) -> Self {
        let i = Complex64::new(0.0, 1.0);
        let a = self.scale(i).exp();
        let b = self.scale(-i).exp();
        a.zip_with(&b, |x, y| (x - y) / (2.0 * i))
    }

    pub fn cos(&self) -> Self {
        let i = Complex64::new(0.0, 1.0);
        let a = self.scale(i).exp();
        let b = self.scale(-i).exp();
        a.zip_with(&b, |x, y| (x + y) / 2.0)
    }

    /// Taylor coefficients of an analytic function from Cauchy's formula,
    /// discretised by the trapezoid rule on `|t - base_point| = radius`.
    ///
    /// Uses `max(4N, 32)` nodes. Coefficient `k` carries a rounding error of
    /// roughly `eps * max|f| / radius^k`, so high orders are only meaningful
    /// when the radius is not too small.
    pub fn from_function<F>(eval: F, base_point: f64, order: usize, radius: f64) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64,
    {
        let nodes = (4 * order).max(32);
        Self::from_function_with_nodes(eval, base_point, order, radius, nodes)
    }

    pub fn from_function_with_nodes<F>(
        eval: F,
        base_point: f64,
        order: usize,
        radius: f64,
        nodes: usize,
    ) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64,
    {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        if nodes < 4 * order || nodes == 0 {
            return Err(Error::InvalidArgument(format!(
                "{nodes} quadrature nodes are too few for order {order}"
            )));
        }
        let samples: Vec<Complex64> = (0..nodes)
            .map(|j| {
                let theta = TAU * j as f64 / nodes as f64;
                let t = Complex64::new(base_point, 0.0) + Complex64::from_polar(radius, theta);
                eval(t)
            })
            .collect();
        if let Some(j) = samples.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFiniteSample(format!("node {j}")));
        }
        let coeffs = (0..=order)
            .map(|k| {
                let sum: Complex64 = samples
                    .iter()
                    .enumerate()
                    .map(|(j, &f)| {
                        let theta = TAU * ((j * k) % nodes) as f64 / nodes as f64;
                        f * Complex64::from_polar(1.0, -theta)
                    })
                    .sum();
                sum / (nodes as f64 * radius.powi(k as i32))
            })
            .collect();
        Ok(Self { base_point, coeffs })
    }
}
