//! Analytic maps on the unit disk and logharmonic mappings built from them.
//!
//! A map is either a truncated series or a closed-form preset. Presets carry
//! exact value and derivative evaluators, which is what makes supremum
//! searches near the boundary meaningful: a truncated series is useless at
//! `r = 1 - 1e-4`, while the extremal families of interest live exactly there.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{self, path_integral};
use crate::schwarz::GridSpec;
use crate::series::ComplexSeries;

const DERIV_TOL: f64 = 1e-12;

fn poly_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn poly_deriv(coeffs: &[Complex64]) -> Vec<Complex64> {
    if coeffs.len() <= 1 {
        return vec![Complex64::ZERO];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            a.get(k).copied().unwrap_or(Complex64::ZERO)
                + b.get(k).copied().unwrap_or(Complex64::ZERO)
        })
        .collect()
}

fn poly_sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            a.get(k).copied().unwrap_or(Complex64::ZERO)
                - b.get(k).copied().unwrap_or(Complex64::ZERO)
        })
        .collect()
}

/// Quotient of two polynomials, stored by coefficients.
///
/// Finite Blaschke products, Herglotz-type derivatives `(1+ε)/(1-ε)` and
/// their products all live here, with exact first and second derivatives by
/// the quotient rule.
#[derive(Debug, Clone)]
pub struct RationalFn {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

impl RationalFn {
    pub fn new(num: Vec<Complex64>, den: Vec<Complex64>) -> Self {
        assert!(!num.is_empty() && !den.is_empty());
        Self { num, den }
    }

    /// Finite Blaschke product `scale · Π (z - a_i)/(1 - conj(a_i) z)`.
    pub fn blaschke(zeros: &[Complex64], scale: Complex64) -> Self {
        let mut num = vec![scale];
        let mut den = vec![Complex64::ONE];
        for &a in zeros {
            num = poly_mul(&num, &[-a, Complex64::ONE]);
            den = poly_mul(&den, &[Complex64::ONE, -a.conj()]);
        }
        Self { num, den }
    }

    /// `(1 + eps)/(1 - eps)` for a rational self-map `eps` of the disk.
    pub fn herglotz(eps: &RationalFn) -> Self {
        Self {
            num: poly_add(&eps.den, &eps.num),
            den: poly_sub(&eps.den, &eps.num),
        }
    }

    pub fn mul(&self, other: &RationalFn) -> Self {
        Self {
            num: poly_mul(&self.num, &other.num),
            den: poly_mul(&self.den, &other.den),
        }
    }

    /// Numerator multiplied by z (used to force a zero at the origin).
    pub fn times_z(&self) -> Self {
        Self {
            num: poly_mul(&self.num, &[Complex64::ZERO, Complex64::ONE]),
            den: self.den.clone(),
        }
    }

    /// Exact derivative as another rational function.
    pub fn derivative(&self) -> Self {
        let np = poly_deriv(&self.num);
        let dp = poly_deriv(&self.den);
        Self {
            num: poly_sub(&poly_mul(&np, &self.den), &poly_mul(&self.num, &dp)),
            den: poly_mul(&self.den, &self.den),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let q = poly_eval(&self.den, z);
        if q.norm() <= DERIV_TOL {
            return Err(Error::DegenerateDerivative { z });
        }
        Ok(poly_eval(&self.num, z) / q)
    }

    pub fn eval_d(&self, z: Complex64) -> Result<Complex64> {
        let q = poly_eval(&self.den, z);
        if q.norm() <= DERIV_TOL {
            return Err(Error::DegenerateDerivative { z });
        }
        let p = poly_eval(&self.num, z);
        let pp = poly_eval(&poly_deriv(&self.num), z);
        let qp = poly_eval(&poly_deriv(&self.den), z);
        Ok((pp * q - p * qp) / (q * q))
    }

    pub fn eval_dd(&self, z: Complex64) -> Result<Complex64> {
        let q = poly_eval(&self.den, z);
        if q.norm() <= DERIV_TOL {
            return Err(Error::DegenerateDerivative { z });
        }
        let p = poly_eval(&self.num, z);
        let np = poly_deriv(&self.num);
        let dp = poly_deriv(&self.den);
        let pp = poly_eval(&np, z);
        let qp = poly_eval(&dp, z);
        let ppp = poly_eval(&poly_deriv(&np), z);
        let qpp = poly_eval(&poly_deriv(&dp), z);
        let n1 = pp * q - p * qp;
        Ok((ppp * q - p * qpp) / (q * q) - 2.0 * qp * n1 / (q * q * q))
    }

    pub fn to_series(&self, order: usize) -> Result<ComplexSeries> {
        let num = ComplexSeries::new(self.num.clone())?.truncate(order);
        let den = ComplexSeries::new(self.den.clone())?.truncate(order);
        num.div(&den)
    }
}

/// An analytic function on the disk: a truncated series, a named closed
/// form, or a composite built from other maps.
#[derive(Debug, Clone)]
pub enum AnalyticMap {
    Series(ComplexSeries),
    /// h(z) = z
    Identity,
    /// h(z) = -z - 2 log(1-z), with h' = (1+z)/(1-z)
    KoebeLog,
    /// h(z) = log(1+z)
    Log1p,
    /// h(z) = z + alpha z²/2
    Quad { alpha: f64 },
    /// omega(z) = (t - z)/(1 - t z)
    MobiusSub { t: f64 },
    /// omega(z) = (alpha + z)/(1 + alpha z)
    MobiusAdd { alpha: f64 },
    /// omega(z) = z
    ScaleZ,
    /// omega(z) = -z
    NegZ,
    /// omega(z) = c
    Const { c: Complex64 },
    Rational(RationalFn),
    /// F(z) = ∫_0^z inner(ζ) dζ; values by adaptive quadrature.
    Integral(Box<AnalyticMap>),
    /// omega = g'/h' of a nonvanishing logharmonic map.
    DilNonvanishing {
        h: Box<AnalyticMap>,
        g: Box<AnalyticMap>,
    },
    /// omega = z g'/(1 + z h') of an origin-fixed logharmonic map.
    DilOriginFixed {
        h: Box<AnalyticMap>,
        g: Box<AnalyticMap>,
    },
}

impl AnalyticMap {
    pub fn zero() -> Self {
        AnalyticMap::Const { c: Complex64::ZERO }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        use AnalyticMap::*;
        let one = Complex64::ONE;
        Ok(match self {
            Series(s) => s.evaluate(z),
            Identity | ScaleZ => z,
            KoebeLog => -z - 2.0 * (one - z).ln(),
            Log1p => (one + z).ln(),
            Quad { alpha } => z + alpha * z * z * 0.5,
            MobiusSub { t } => (t - z) / (one - t * z),
            MobiusAdd { alpha } => (alpha + z) / (one + alpha * z),
            NegZ => -z,
            Const { c } => *c,
            Rational(r) => r.eval(z)?,
            Integral(inner) => {
                let v = path_integral(
                    |w| {
                        inner
                            .eval(w)
                            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
                    },
                    z,
                    quad::DEFAULT_TOL,
                    quad::DEFAULT_MAX_DEPTH,
                )?;
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::EvaluationFailure(format!(
                        "path integral hit a singular point evaluating at {z}"
                    )));
                }
                v
            }
            DilNonvanishing { h, g } => {
                let hp = h.eval_d(z)?;
                if hp.norm() <= DERIV_TOL {
                    return Err(Error::DegenerateDerivative { z });
                }
                g.eval_d(z)? / hp
            }
            DilOriginFixed { h, g } => {
                let den = one + z * h.eval_d(z)?;
                if den.norm() <= DERIV_TOL {
                    return Err(Error::DegenerateDerivative { z });
                }
                z * g.eval_d(z)? / den
            }
        })
    }

    pub fn eval_d(&self, z: Complex64) -> Result<Complex64> {
        use AnalyticMap::*;
        let one = Complex64::ONE;
        Ok(match self {
            Series(s) => {
                if s.order() == 0 {
                    Complex64::ZERO
                } else {
                    s.derivative()?.evaluate(z)
                }
            }
            Identity | ScaleZ => one,
            KoebeLog => (one + z) / (one - z),
            Log1p => one / (one + z),
            Quad { alpha } => one + alpha * z,
            MobiusSub { t } => {
                let d = one - t * z;
                (t * t - 1.0) / (d * d)
            }
            MobiusAdd { alpha } => {
                let d = one + alpha * z;
                (1.0 - alpha * alpha) / (d * d)
            }
            NegZ => -one,
            Const { .. } => Complex64::ZERO,
            Rational(r) => r.eval_d(z)?,
            Integral(inner) => inner.eval(z)?,
            DilNonvanishing { h, g } => {
                let hp = h.eval_d(z)?;
                if hp.norm() <= DERIV_TOL {
                    return Err(Error::DegenerateDerivative { z });
                }
                (g.eval_dd(z)? * hp - g.eval_d(z)? * h.eval_dd(z)?) / (hp * hp)
            }
            DilOriginFixed { h, g } => {
                let hp = h.eval_d(z)?;
                let gp = g.eval_d(z)?;
                let den = one + z * hp;
                if den.norm() <= DERIV_TOL {
                    return Err(Error::DegenerateDerivative { z });
                }
                let num = (gp + z * g.eval_dd(z)?) * den - z * gp * (hp + z * h.eval_dd(z)?);
                num / (den * den)
            }
        })
    }

    pub fn eval_dd(&self, z: Complex64) -> Result<Complex64> {
        use AnalyticMap::*;
        let one = Complex64::ONE;
        Ok(match self {
            Series(s) => {
                if s.order() <= 1 {
                    Complex64::ZERO
                } else {
                    s.derivative()?.derivative()?.evaluate(z)
                }
            }
            Identity | ScaleZ | NegZ | Const { .. } => Complex64::ZERO,
            KoebeLog => {
                let d = one - z;
                2.0 / (d * d)
            }
            Log1p => {
                let d = one + z;
                -one / (d * d)
            }
            Quad { alpha } => Complex64::new(*alpha, 0.0),
            MobiusSub { t } => {
                let d = one - t * z;
                2.0 * t * (t * t - 1.0) / (d * d * d)
            }
            MobiusAdd { alpha } => {
                let d = one + alpha * z;
                -2.0 * alpha * (1.0 - alpha * alpha) / (d * d * d)
            }
            Rational(r) => r.eval_dd(z)?,
            Integral(inner) => inner.eval_d(z)?,
            DilNonvanishing { .. } | DilOriginFixed { .. } => {
                return Err(Error::SecondDerivativeUnavailable)
            }
        })
    }

    /// Taylor coefficients through `order` (exact for the presets, truncated
    /// for composites).
    pub fn to_series(&self, order: usize) -> Result<ComplexSeries> {
        use AnalyticMap::*;
        Ok(match self {
            Series(s) => s.truncate(order),
            Identity | ScaleZ => ComplexSeries::monomial(1, order),
            KoebeLog => {
                // -z - 2 log(1-z)
                let log1m = ComplexSeries::from_real(&[1.0, -1.0])?.truncate(order).log()?;
                ComplexSeries::monomial(1, order)
                    .scale(Complex64::new(-1.0, 0.0))?
                    .add(&log1m.scale(Complex64::new(-2.0, 0.0))?)?
            }
            Log1p => ComplexSeries::from_real(&[1.0, 1.0])?.truncate(order).log()?,
            Quad { alpha } => {
                ComplexSeries::from_real(&[0.0, 1.0, alpha * 0.5])?.truncate(order)
            }
            MobiusSub { t } => RationalFn::new(
                vec![Complex64::new(*t, 0.0), -Complex64::ONE],
                vec![Complex64::ONE, Complex64::new(-t, 0.0)],
            )
            .to_series(order)?,
            MobiusAdd { alpha } => RationalFn::new(
                vec![Complex64::new(*alpha, 0.0), Complex64::ONE],
                vec![Complex64::ONE, Complex64::new(*alpha, 0.0)],
            )
            .to_series(order)?,
            NegZ => ComplexSeries::monomial(1, order).scale(Complex64::new(-1.0, 0.0))?,
            Const { c } => ComplexSeries::constant(*c, order),
            Rational(r) => r.to_series(order)?,
            Integral(inner) => {
                if order == 0 {
                    ComplexSeries::zero(0)
                } else {
                    inner.to_series(order - 1)?.antiderivative()?
                }
            }
            DilNonvanishing { h, g } => {
                let hp = h.to_series(order + 1)?.derivative()?;
                let gp = g.to_series(order + 1)?.derivative()?;
                gp.div(&hp)?
            }
            DilOriginFixed { h, g } => {
                let hp = h.to_series(order + 2)?.derivative()?;
                let gp = g.to_series(order + 2)?.derivative()?;
                let den = ComplexSeries::constant(Complex64::ONE, order + 2)
                    .add(&hp.shift_up()?)?;
                gp.shift_up()?.div(&den)?.truncate(order)
            }
        })
    }

    /// The map's value as a rational function, when it is one.
    pub fn as_rational(&self) -> Option<RationalFn> {
        use AnalyticMap::*;
        let one = Complex64::ONE;
        Some(match self {
            Identity | ScaleZ => RationalFn::new(vec![Complex64::ZERO, one], vec![one]),
            NegZ => RationalFn::new(vec![Complex64::ZERO, -one], vec![one]),
            Const { c } => RationalFn::new(vec![*c], vec![one]),
            Quad { alpha } => RationalFn::new(
                vec![Complex64::ZERO, one, Complex64::new(alpha * 0.5, 0.0)],
                vec![one],
            ),
            MobiusSub { t } => RationalFn::new(
                vec![Complex64::new(*t, 0.0), -one],
                vec![one, Complex64::new(-t, 0.0)],
            ),
            MobiusAdd { alpha } => RationalFn::new(
                vec![Complex64::new(*alpha, 0.0), one],
                vec![one, Complex64::new(*alpha, 0.0)],
            ),
            Rational(r) => r.clone(),
            _ => return None,
        })
    }

    /// The map's derivative as a rational function, when available.
    pub fn derivative_rational(&self) -> Option<RationalFn> {
        use AnalyticMap::*;
        let one = Complex64::ONE;
        Some(match self {
            KoebeLog => RationalFn::new(vec![one, one], vec![one, -one]),
            Log1p => RationalFn::new(vec![one], vec![one, one]),
            Integral(inner) => inner.as_rational()?,
            other => other.as_rational()?.derivative(),
        })
    }
}

/// Which normalization the logharmonic map uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// f = e^h · conj(e^g), nonvanishing on the disk.
    Nonvanishing,
    /// f = z · e^h · conj(e^g); vanishes exactly at the origin.
    OriginFixed,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Nonvanishing => "nonvanishing",
            Variant::OriginFixed => "origin_fixed",
        }
    }
}

/// A logharmonic mapping in the `e^h conj(e^g)` normalization.
///
/// `omega` is kept when the map was built from a prescribed dilatation, so
/// that dilatation-dependent quantities stay exact near the boundary instead
/// of going through a truncated g.
#[derive(Debug, Clone)]
pub struct LogharmonicMap {
    pub h: AnalyticMap,
    pub g: AnalyticMap,
    pub omega: Option<AnalyticMap>,
    pub variant: Variant,
}

const NORMALIZATION_TOL: f64 = 1e-12;

impl LogharmonicMap {
    pub fn new(h: AnalyticMap, g: AnalyticMap, variant: Variant) -> Result<Self> {
        for (name, m) in [("h", &h), ("g", &g)] {
            let v = m.eval(Complex64::ZERO)?;
            if v.norm() > NORMALIZATION_TOL {
                return Err(Error::InvalidManifest(format!(
                    "{name}(0) = {v}, expected 0"
                )));
            }
        }
        Ok(Self {
            h,
            g,
            omega: None,
            variant,
        })
    }

    /// Builds the map from `h` and a prescribed dilatation, deriving `g`.
    pub fn from_dilatation(
        h: AnalyticMap,
        omega: AnalyticMap,
        variant: Variant,
        order: usize,
    ) -> Result<Self> {
        let g = solve_g_from_dilatation(&h, &omega, variant, order)?;
        Ok(Self {
            h,
            g,
            omega: Some(omega),
            variant,
        })
    }

    /// The dilatation as an analytic map.
    ///
    /// Prescribed dilatations are returned as-is; otherwise the quotient is
    /// formed from h and g (as a series when both parts are series).
    pub fn dilatation(&self) -> Result<AnalyticMap> {
        if let Some(om) = &self.omega {
            return Ok(om.clone());
        }
        let composite = match self.variant {
            Variant::Nonvanishing => AnalyticMap::DilNonvanishing {
                h: Box::new(self.h.clone()),
                g: Box::new(self.g.clone()),
            },
            Variant::OriginFixed => AnalyticMap::DilOriginFixed {
                h: Box::new(self.h.clone()),
                g: Box::new(self.g.clone()),
            },
        };
        if let (AnalyticMap::Series(hs), AnalyticMap::Series(gs)) = (&self.h, &self.g) {
            let order = hs.order().min(gs.order()).saturating_sub(1);
            return Ok(AnalyticMap::Series(composite.to_series(order)?));
        }
        Ok(composite)
    }

    /// Point value `f(z)`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let hv = self.h.eval(z)?;
        let gv = self.g.eval(z)?;
        let base = hv.exp() * gv.exp().conj();
        Ok(match self.variant {
            Variant::Nonvanishing => base,
            Variant::OriginFixed => z * base,
        })
    }

    /// Jacobian `|f_z|² (1 - |ω|²)`.
    pub fn jacobian(&self, z: Complex64) -> Result<f64> {
        if self.variant == Variant::OriginFixed && z == Complex64::ZERO {
            return Err(Error::OriginSingularity);
        }
        let hv = self.h.eval(z)?;
        let gv = self.g.eval(z)?;
        let hp = self.h.eval_d(z)?;
        let analytic_factor = match self.variant {
            Variant::Nonvanishing => hp,
            Variant::OriginFixed => Complex64::ONE + z * hp,
        };
        // f_z = h' e^h conj(e^g) resp. (1 + z h') e^h conj(e^g)
        let fz = analytic_factor * hv.exp() * gv.exp().conj();
        let om = self.dilatation()?.eval(z)?;
        Ok(fz.norm_sqr() * (1.0 - om.norm_sqr()))
    }
}

/// Recovers `g` from a prescribed dilatation at truncation order `order`.
///
/// Nonvanishing: `g = ∫ ω h'`. Origin-fixed: `g = ∫ ω(ζ)(1 + ζ h'(ζ))/ζ dζ`,
/// which requires `ω(0) = 0`. The construction never exponentiates and takes
/// logs, so no branch tracking is involved.
pub fn solve_g_from_dilatation(
    h: &AnalyticMap,
    omega: &AnalyticMap,
    variant: Variant,
    order: usize,
) -> Result<AnalyticMap> {
    if order == 0 {
        return Ok(AnalyticMap::Series(ComplexSeries::zero(0)));
    }
    let gp = match variant {
        Variant::Nonvanishing => {
            let hp = h.to_series(order)?.derivative()?;
            let om = omega.to_series(order - 1)?;
            om.mul(&hp)?
        }
        Variant::OriginFixed => {
            let om0 = omega.eval(Complex64::ZERO)?;
            if om0.norm() > NORMALIZATION_TOL {
                return Err(Error::DilatationNotVanishingAtZero { value: om0.norm() });
            }
            let om_over_z = omega.to_series(order)?.shift_down()?;
            let hp = h.to_series(order)?.derivative()?;
            let one_plus_zhp =
                ComplexSeries::constant(Complex64::ONE, order).add(&hp.shift_up()?)?;
            om_over_z.mul(&one_plus_zhp)?
        }
    };
    Ok(AnalyticMap::Series(gp.truncate(order - 1).antiderivative()?))
}

/// `g` as an exact path integral when both `ω` and `h'` are rational.
///
/// Used where series truncation would spoil boundary-accurate comparisons
/// (growth verification, the random certification suite).
pub fn exact_g_from_dilatation(h: &AnalyticMap, omega: &AnalyticMap) -> Option<AnalyticMap> {
    let om = omega.as_rational()?;
    let hp = h.derivative_rational()?;
    Some(AnalyticMap::Integral(Box::new(AnalyticMap::Rational(
        om.mul(&hp),
    ))))
}

/// Numerical probe of membership in the class R: `Re h' > 0` with the usual
/// normalization. A certificate, not a proof.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ClassRCertificate {
    pub min_re_hprime: f64,
    pub radii_count: usize,
    pub angles_count: usize,
    pub r_max: f64,
    pub normalized: bool,
}

impl ClassRCertificate {
    pub fn member(&self) -> bool {
        self.min_re_hprime > 0.0 && self.normalized
    }
}

pub fn check_class_r(h: &AnalyticMap, grid: &GridSpec) -> Result<ClassRCertificate> {
    let h0 = h.eval(Complex64::ZERO)?;
    let hp0 = h.eval_d(Complex64::ZERO)?;
    let normalized = h0.norm() <= 1e-10 && (hp0 - Complex64::ONE).norm() <= 1e-10;

    let mut min_re = f64::INFINITY;
    for j in 0..grid.radii_count {
        let r = grid.r_max * (j + 1) as f64 / grid.radii_count as f64;
        for i in 0..grid.angles_count {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / grid.angles_count as f64;
            let z = Complex64::from_polar(r, theta);
            let re = h
                .eval_d(z)
                .map_err(|e| Error::EvaluationFailure(format!("h' failed at {z}: {e}")))?
                .re;
            min_re = min_re.min(re);
        }
    }
    Ok(ClassRCertificate {
        min_re_hprime: min_re,
        radii_count: grid.radii_count,
        angles_count: grid.angles_count,
        r_max: grid.r_max,
        normalized,
    })
}
