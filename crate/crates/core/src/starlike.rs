//! Full-starlikeness machinery for origin-fixed logharmonic maps: the
//! coefficient criterion `|1-b₁| + Σ n|a_n - b_n| ≤ 1`, the rotational
//! field `Re(Df/f)`, and a finite-difference argument oracle.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{AnalyticMap, LogharmonicMap, Variant};
use crate::par::{map_indexed, Parallelism};
use crate::schwarz::GridSpec;

const NORM_TOL: f64 = 1e-12;
/// Below this magnitude a trailing coefficient counts as exactly zero when
/// deciding whether a series is a genuine polynomial.
const POLY_TOL: f64 = 1e-14;
/// Radii below this carry no information; the field tends to 1 there.
const INNER_RADIUS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    PassCriterion,
    FailCriterion,
    FieldNegative,
}

#[derive(Debug, Clone, Serialize)]
pub struct StarlikeReport {
    pub coefficient_sum: f64,
    /// 0 for genuinely polynomial data; infinite when the series truncates
    /// an infinite tail, in which case the criterion is inconclusive.
    pub tail_bound: f64,
    pub min_re_field: f64,
    pub witness: Complex64,
    pub grid: GridSpec,
    pub verdict: Verdict,
}

fn require_origin_fixed(f: &LogharmonicMap) -> Result<()> {
    if f.variant != Variant::OriginFixed {
        return Err(Error::WrongVariant {
            expected: "origin_fixed",
            found: f.variant.name(),
        });
    }
    Ok(())
}

/// Is the truncated series a genuine polynomial, as far as its top quarter
/// of coefficients can tell?
fn polynomial_tail_is_zero(m: &AnalyticMap, order: usize) -> Result<bool> {
    let s = m.to_series(order)?;
    let cutoff = order - order / 4;
    Ok(s.is_polynomial_of_degree(cutoff, POLY_TOL))
}

/// The criterion sum `S_N = |1-b₁| + Σ_{n=2}^N n|a_n - b_n|` together with a
/// tail bound (0 when both series are exactly polynomial, +inf otherwise —
/// a heuristic tail bound for an infinite series would be an invention).
pub fn coefficient_criterion(f: &LogharmonicMap, order: usize) -> Result<(f64, f64)> {
    require_origin_fixed(f)?;
    let hs = f.h.to_series(order)?;
    let gs = f.g.to_series(order)?;
    let a1 = hs.coeff(1);
    let deviation = (a1 - Complex64::ONE).norm();
    if deviation > NORM_TOL {
        return Err(Error::NotNormalized { deviation });
    }
    let mut sum = (Complex64::ONE - gs.coeff(1)).norm();
    for n in 2..=order {
        sum += n as f64 * (hs.coeff(n) - gs.coeff(n)).norm();
    }
    let tail = if polynomial_tail_is_zero(&f.h, order)? && polynomial_tail_is_zero(&f.g, order)? {
        0.0
    } else {
        f64::INFINITY
    };
    Ok((sum, tail))
}

/// The rotational field `Df/f = 1 + z h'(z) - conj(z g'(z))`; its real part
/// is the angular derivative of `arg f` along circles.
pub fn radial_field(f: &LogharmonicMap, z: Complex64) -> Result<Complex64> {
    require_origin_fixed(f)?;
    if z == Complex64::ZERO {
        return Err(Error::OriginExcluded);
    }
    let hp = f.h.eval_d(z)?;
    let zgp = match &f.omega {
        // omega = z g'/(1+z h')  =>  z g' = omega (1 + z h')
        Some(om) => om.eval(z)? * (Complex64::ONE + z * hp),
        None => z * f.g.eval_d(z)?,
    };
    Ok(Complex64::ONE + z * hp - zgp.conj())
}

/// Scans `Re(Df/f)` over an annular grid and assembles the full report,
/// criterion included.
pub fn field_scan(f: &LogharmonicMap, grid: &GridSpec, order: usize) -> Result<StarlikeReport> {
    require_origin_fixed(f)?;
    let (coefficient_sum, tail_bound) = coefficient_criterion(f, order)?;

    let radii: Vec<f64> = (0..grid.radii_count)
        .map(|j| {
            INNER_RADIUS
                + (grid.r_max - INNER_RADIUS) * j as f64 / (grid.radii_count - 1) as f64
        })
        .collect();
    let per_radius: Vec<Result<(f64, Complex64)>> =
        map_indexed(radii.len(), Parallelism::default(), |j| {
            let r = radii[j];
            let mut min_re = f64::INFINITY;
            let mut witness = Complex64::ZERO;
            for i in 0..grid.angles_count {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / grid.angles_count as f64;
                let z = Complex64::from_polar(r, theta);
                let re = radial_field(f, z)?.re;
                if re < min_re {
                    min_re = re;
                    witness = z;
                }
            }
            Ok((min_re, witness))
        });

    let mut min_re_field = f64::INFINITY;
    let mut witness = Complex64::ZERO;
    for res in per_radius {
        let (m, w) = res?;
        if m < min_re_field {
            min_re_field = m;
            witness = w;
        }
    }

    let verdict = if min_re_field <= 0.0 {
        Verdict::FieldNegative
    } else if coefficient_sum + tail_bound <= 1.0 {
        Verdict::PassCriterion
    } else {
        Verdict::FailCriterion
    };
    Ok(StarlikeReport {
        coefficient_sum,
        tail_bound,
        min_re_field,
        witness,
        grid: grid.clone(),
        verdict,
    })
}

/// Independent oracle for the field: the angular derivative of the
/// unwrapped `arg f(r e^{iθ})` by central differences must match
/// `Re(Df/f)`. Returns the largest discrepancy over the circle.
pub fn argument_monotonicity_oracle(
    f: &LogharmonicMap,
    r: f64,
    theta_steps: usize,
) -> Result<f64> {
    require_origin_fixed(f)?;
    let n = theta_steps.max(8);
    let step = 2.0 * std::f64::consts::PI / n as f64;

    // unwrapped phases at theta_j, j = 0..n+1
    let mut phases = Vec::with_capacity(n + 2);
    let mut prev = 0.0f64;
    for j in 0..=(n + 1) {
        let z = Complex64::from_polar(r, step * j as f64);
        let v = f.evaluate(z)?;
        if v.norm() < 1e-300 {
            return Err(Error::ZeroOnCircle { z });
        }
        let raw = v.arg();
        let mut ph = raw;
        if j > 0 {
            // branch correction at ±π jumps
            let two_pi = 2.0 * std::f64::consts::PI;
            let k = ((prev - raw) / two_pi).round();
            ph = raw + k * two_pi;
        }
        phases.push(ph);
        prev = ph;
    }

    let mut worst = 0.0f64;
    for j in 1..=n {
        let fd = (phases[j + 1] - phases[j - 1]) / (2.0 * step);
        let z = Complex64::from_polar(r, step * j as f64);
        let re = radial_field(f, z)?.re;
        worst = worst.max((fd - re).abs());
    }
    Ok(worst)
}

/// The hereditarily starlike family `f_α`: `h = z + αz²/2`, dilatation `z`,
/// so that `g = z + z²/2 + αz³/3`.
pub fn starlike_family(alpha: f64, order: usize) -> Result<LogharmonicMap> {
    LogharmonicMap::from_dilatation(
        AnalyticMap::Quad { alpha },
        AnalyticMap::ScaleZ,
        Variant::OriginFixed,
        order,
    )
}

/// The non-starlike counterexample: `h = log(1+z)`, dilatation `-z`;
/// `Re(Df/f) = Re(1+2z)` goes negative for `Re z < -1/2`.
pub fn counterexample(order: usize) -> Result<LogharmonicMap> {
    LogharmonicMap::from_dilatation(
        AnalyticMap::Log1p,
        AnalyticMap::NegZ,
        Variant::OriginFixed,
        order,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ComplexSeries;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn test_grid() -> GridSpec {
        GridSpec {
            radii_count: 48,
            angles_count: 128,
            r_max: 0.999,
            refine_iters: 0,
        }
    }

    #[test]
    fn criterion_is_one_for_family() {
        for k in 0..=10 {
            let alpha = k as f64 / 10.0;
            let f = starlike_family(alpha, 64).unwrap();
            let (sum, tail) = coefficient_criterion(&f, 64).unwrap();
            assert!((sum - 1.0).abs() <= 1e-12, "alpha={alpha}: sum={sum}");
            assert_eq!(tail, 0.0);
        }
    }

    #[test]
    fn criterion_trivial_pass() {
        // h = z, g = z: S = 0
        let f = LogharmonicMap::new(
            AnalyticMap::Identity,
            AnalyticMap::Series(ComplexSeries::monomial(1, 16)),
            Variant::OriginFixed,
        )
        .unwrap();
        let (sum, tail) = coefficient_criterion(&f, 16).unwrap();
        assert!(sum.abs() < 1e-15 && tail == 0.0);
    }

    #[test]
    fn criterion_rejects_unnormalized() {
        let f = LogharmonicMap::new(
            AnalyticMap::Series(ComplexSeries::from_real(&[0.0, 2.0]).unwrap().truncate(8)),
            AnalyticMap::Series(ComplexSeries::zero(8)),
            Variant::OriginFixed,
        )
        .unwrap();
        assert!(matches!(
            coefficient_criterion(&f, 8),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn counterexample_criterion_inconclusive_or_failing() {
        let f = counterexample(64).unwrap();
        let (sum, tail) = coefficient_criterion(&f, 64).unwrap();
        assert!(sum + tail > 1.0, "sum={sum} tail={tail}");
    }

    #[test]
    fn field_examples() {
        let f = starlike_family(1.0, 32).unwrap();
        // near the origin the field tends to 1
        let v = radial_field(&f, c(1e-8, 0.0)).unwrap();
        assert!((v - Complex64::ONE).norm() < 1e-6);
        // at z = 0.5: 1 + 0.75 - 0.875
        let v = radial_field(&f, c(0.5, 0.0)).unwrap();
        assert!((v.re - 0.875).abs() < 1e-12);

        assert!(matches!(
            radial_field(&f, Complex64::ZERO),
            Err(Error::OriginExcluded)
        ));
    }

    #[test]
    fn counterexample_field_is_one_plus_two_z() {
        let f = counterexample(64).unwrap();
        let v = radial_field(&f, c(-0.75, 0.0)).unwrap();
        assert!((v.re + 0.5).abs() < 1e-12, "Re = {}", v.re);
        for k in 0..20 {
            let z = Complex64::from_polar(0.8, 0.3 * k as f64);
            let re = radial_field(&f, z).unwrap().re;
            assert!((re - (1.0 + 2.0 * z.re)).abs() < 1e-12);
        }
    }

    #[test]
    fn field_scan_family_passes() {
        let f = starlike_family(0.6, 64).unwrap();
        let rep = field_scan(&f, &test_grid(), 64).unwrap();
        assert!(rep.min_re_field > 0.0);
        assert_eq!(rep.verdict, Verdict::PassCriterion);
    }

    #[test]
    fn field_scan_flags_counterexample() {
        let f = counterexample(64).unwrap();
        let rep = field_scan(&f, &test_grid(), 64).unwrap();
        assert_eq!(rep.verdict, Verdict::FieldNegative);
        assert!(rep.witness.re < -0.5, "witness {}", rep.witness);
    }

    #[test]
    fn symmetric_parts_give_positive_field() {
        // g = h (with a1 = b1 = 1) makes z h' - conj(z g') purely imaginary
        let h = AnalyticMap::Quad { alpha: 0.9 };
        let f = LogharmonicMap::new(h.clone(), h, Variant::OriginFixed).unwrap();
        for k in 0..50 {
            let z = Complex64::from_polar(0.9, 0.13 * k as f64);
            let re = radial_field(&f, z).unwrap().re;
            assert!((re - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn proof_chain_lower_bound() {
        // min Re(field) >= 1 - S_N for polynomial parts
        let cases = [
            (vec![0.0, 1.0, 0.2, -0.1], vec![0.0, 0.9, 0.15, 0.05]),
            (vec![0.0, 1.0, -0.3], vec![0.0, 1.1, 0.1, 0.0, 0.02]),
        ];
        for (hc, gc) in cases {
            let f = LogharmonicMap::new(
                AnalyticMap::Series(ComplexSeries::from_real(&hc).unwrap().truncate(16)),
                AnalyticMap::Series(ComplexSeries::from_real(&gc).unwrap().truncate(16)),
                Variant::OriginFixed,
            )
            .unwrap();
            let (sum, tail) = coefficient_criterion(&f, 16).unwrap();
            assert_eq!(tail, 0.0);
            let rep = field_scan(&f, &test_grid(), 16).unwrap();
            assert!(
                rep.min_re_field >= 1.0 - sum - 1e-9,
                "min {} vs 1 - {sum}",
                rep.min_re_field
            );
        }
    }

    #[test]
    fn oracle_exact_for_rotation() {
        // f = z: d/dθ arg f = 1 = Re(field)
        let f = LogharmonicMap::new(
            AnalyticMap::Series(ComplexSeries::zero(4)),
            AnalyticMap::Series(ComplexSeries::zero(4)),
            Variant::OriginFixed,
        )
        .unwrap();
        let d = argument_monotonicity_oracle(&f, 0.5, 256).unwrap();
        assert!(d < 1e-10);
    }

    #[test]
    fn oracle_small_discrepancy_for_family() {
        let f = starlike_family(1.0, 64).unwrap();
        let d = argument_monotonicity_oracle(&f, 0.7, 4096).unwrap();
        assert!(d <= 1e-4, "discrepancy {d}");
    }

    #[test]
    fn oracle_sees_negative_arc_on_counterexample() {
        let f = counterexample(64).unwrap();
        let r = 0.9;
        let n = 512;
        let step = 2.0 * std::f64::consts::PI / n as f64;
        // the finite-difference derivative itself goes negative where
        // Re(1+2z) < 0
        let mut any_negative = false;
        for j in 1..n {
            let z = Complex64::from_polar(r, step * j as f64);
            if 1.0 + 2.0 * z.re < -0.05 {
                let zm = Complex64::from_polar(r, step * (j - 1) as f64);
                let zp = Complex64::from_polar(r, step * (j + 1) as f64);
                let a = f.evaluate(zm).unwrap();
                let b = f.evaluate(zp).unwrap();
                let mut d = b.arg() - a.arg();
                while d > std::f64::consts::PI {
                    d -= 2.0 * std::f64::consts::PI;
                }
                while d < -std::f64::consts::PI {
                    d += 2.0 * std::f64::consts::PI;
                }
                if d < 0.0 {
                    any_negative = true;
                }
            }
        }
        assert!(any_negative);
    }
}
