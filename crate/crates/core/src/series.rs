//! Truncated Taylor series with complex coefficients.
//!
//! All analytic building blocks (h, g, the dilatation, recovered
//! antiderivatives) route through this type. Binary operations truncate to
//! the minimum order of the operands, so truncation error is one-sided:
//! a result is exact through its own order whenever the inputs are.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation degree used when callers do not specify one.
pub const DEFAULT_ORDER: usize = 64;

/// Coefficient magnitude past which we treat the series as having blown up.
const OVERFLOW_LIMIT: f64 = 1e150;

const ZERO_TOL: f64 = 1e-12;

/// A power series truncated at a fixed degree: `c_0 + c_1 z + ... + c_N z^N`.
///
/// Invariant: `coeffs.len() == order + 1` and every coefficient is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeries {
    coeffs: Vec<Complex64>,
}

impl ComplexSeries {
    /// Builds a series from coefficients, index = degree.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::NonFiniteCoefficient);
        }
        let s = Self { coeffs };
        s.check()?;
        Ok(s)
    }

    /// Series with all coefficients zero.
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::ZERO; order + 1],
        }
    }

    /// Constant series `c`.
    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; order + 1];
        coeffs[0] = c;
        Self { coeffs }
    }

    /// The monomial `z^k` (zero if `k > order`).
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; order + 1];
        if k <= order {
            coeffs[k] = Complex64::ONE;
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero past the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::ZERO)
    }

    /// Same coefficients re-truncated (or zero-padded) to `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::ZERO);
        Self { coeffs }
    }

    fn check(&self) -> Result<()> {
        for c in &self.coeffs {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFiniteCoefficient);
            }
            if c.norm_sqr() > OVERFLOW_LIMIT * OVERFLOW_LIMIT {
                return Err(Error::CoefficientOverflow);
            }
        }
        Ok(())
    }

    /// Coefficient-wise sum, truncated to the smaller order.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        Self::new((0..=n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        Self::new((0..=n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, c: Complex64) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Cauchy product, truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        let mut coeffs = vec![Complex64::ZERO; n + 1];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut acc = Complex64::ZERO;
            for j in 0..=k {
                acc += self.coeff(j) * other.coeff(k - j);
            }
            *c = acc;
        }
        Self::new(coeffs)
    }

    /// Termwise derivative; drops the order by one.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::ZeroOrder);
        }
        Self::new(
            (1..=self.order())
                .map(|k| self.coeff(k) * k as f64)
                .collect(),
        )
    }

    /// Antiderivative with value 0 at the origin; raises the order by one.
    pub fn antiderivative(&self) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.order() + 2);
        coeffs.push(Complex64::ZERO);
        for k in 0..=self.order() {
            coeffs.push(self.coeff(k) / (k + 1) as f64);
        }
        Self::new(coeffs)
    }

    /// Exponential of the series: `E(0) = e^{c_0}` and `E' = s' E`.
    pub fn exp(&self) -> Result<Self> {
        let n = self.order();
        let mut e = vec![Complex64::ZERO; n + 1];
        e[0] = self.coeff(0).exp();
        // (k+1) e_{k+1} = sum_{j=0..k} (j+1) s_{j+1} e_{k-j}
        for k in 0..n {
            let mut acc = Complex64::ZERO;
            for j in 0..=k {
                acc += (j + 1) as f64 * self.coeff(j + 1) * e[k - j];
            }
            e[k + 1] = acc / (k + 1) as f64;
        }
        Self::new(e)
    }

    /// Principal-branch logarithm: `L(0) = Log c_0` and `L' = s'/s`.
    pub fn log(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.norm() <= ZERO_TOL {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order();
        let mut l = vec![Complex64::ZERO; n + 1];
        l[0] = c0.ln();
        // (k+1) s_{k+1} = sum_{j=0..k} (j+1) l_{j+1} s_{k-j}
        for k in 0..n {
            let mut acc = (k + 1) as f64 * self.coeff(k + 1);
            for j in 0..k {
                acc -= (j + 1) as f64 * l[j + 1] * self.coeff(k - j);
            }
            l[k + 1] = acc / ((k + 1) as f64 * c0);
        }
        Self::new(l)
    }

    /// Cauchy quotient `self / other`, truncated to the smaller order.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let t0 = other.coeff(0);
        if t0.norm() <= ZERO_TOL {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order().min(other.order());
        let mut q = vec![Complex64::ZERO; n + 1];
        for k in 0..=n {
            let mut acc = self.coeff(k);
            for (j, &qj) in q.iter().enumerate().take(k) {
                acc -= qj * other.coeff(k - j);
            }
            q[k] = acc / t0;
        }
        Self::new(q)
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// True when every coefficient above `degree` is numerically zero.
    pub fn is_polynomial_of_degree(&self, degree: usize, tol: f64) -> bool {
        self.coeffs
            .iter()
            .skip(degree + 1)
            .all(|c| c.norm() <= tol)
    }

    /// Multiplies by z, shifting coefficients up; raises the order by one.
    pub fn shift_up(&self) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.order() + 2);
        coeffs.push(Complex64::ZERO);
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    /// Divides by z, i.e. shifts coefficients down; requires `c_0 ~ 0`.
    pub fn shift_down(&self) -> Result<Self> {
        if self.coeff(0).norm() > ZERO_TOL {
            return Err(Error::DilatationNotVanishingAtZero {
                value: self.coeff(0).norm(),
            });
        }
        if self.order() == 0 {
            return Ok(Self::zero(0));
        }
        Self::new(self.coeffs[1..].to_vec())
    }
}

impl Serialize for ComplexSeries {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ComplexSeries {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(de)?;
        ComplexSeries::new(
            pairs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}
