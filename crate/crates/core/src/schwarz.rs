//! Pre-Schwarzian derivatives, Bloch seminorms and the disk-supremum
//! estimator behind every norm bound checked by this crate.
//!
//! The supremum search is two-stage: a coarse polar grid with radii packed
//! toward the boundary (extremal behavior consistently appears along radial
//! limits), then golden-section refinement in the angle around each radial
//! maximizer and in the radius around the global one.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{AnalyticMap, LogharmonicMap, Variant};
use crate::par::{map_indexed, Parallelism};

const DERIV_TOL: f64 = 1e-12;
const BOUNDARY_TOL: f64 = 1e-12;
const BRACKET_TOL: f64 = 1e-12;

/// Discretization of `sup_{z in D}`.
#[derive(Debug, Clone, Serialize)]
pub struct GridSpec {
    pub radii_count: usize,
    pub angles_count: usize,
    pub r_max: f64,
    pub refine_iters: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            radii_count: 96,
            angles_count: 384,
            r_max: 1.0 - 1e-4,
            refine_iters: 30,
        }
    }
}

impl GridSpec {
    /// Radii packed toward `r_max` (spacing shrinks like cos near the top).
    pub fn radii(&self) -> Vec<f64> {
        let k = self.radii_count;
        (0..k)
            .map(|j| self.r_max * (std::f64::consts::FRAC_PI_2 * (j + 1) as f64 / k as f64).sin())
            .collect()
    }
}

/// Result of a disk supremum search for `(1-|z|²)·field(z)`.
#[derive(Debug, Clone, Serialize)]
pub struct SupremumReport {
    pub value: f64,
    pub argmax: Complex64,
    pub boundary_divergent: bool,
    pub radial_profile: Vec<(f64, f64)>,
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let (mut best_x, mut best_f) = if fc > fd { (c, fc) } else { (d, fd) };
    for _ in 0..iters {
        if (b - a).abs() < BRACKET_TOL {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
        if fc > best_f {
            best_x = c;
            best_f = fc;
        }
        if fd > best_f {
            best_x = d;
            best_f = fd;
        }
    }
    (best_x, best_f)
}

/// Supremum estimate of `(1-|z|²)·field(z)` for a nonnegative field.
///
/// Probe failures at isolated points are skipped; only a grid where every
/// point fails is an error.
pub fn sup_weighted_with<F>(
    field: &F,
    grid: &GridSpec,
    mode: Parallelism,
) -> Result<SupremumReport>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    let radii = grid.radii();
    let two_pi = 2.0 * std::f64::consts::PI;
    let dtheta = two_pi / grid.angles_count as f64;

    let weighted = |r: f64, theta: f64| -> Option<f64> {
        let z = Complex64::from_polar(r, theta);
        field(z).ok().map(|v| (1.0 - r * r) * v)
    };

    // best (value, theta) at a fixed radius: coarse angle scan then a
    // golden-section polish around the winner
    let scan_radius = |r: f64| -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for i in 0..grid.angles_count {
            let theta = dtheta * i as f64;
            if let Some(v) = weighted(r, theta) {
                if best.is_none_or(|(bv, _)| v > bv) {
                    best = Some((v, theta));
                }
            }
        }
        let (coarse_v, coarse_t) = best?;
        let f = |t: f64| weighted(r, t).unwrap_or(f64::NEG_INFINITY);
        let (t, v) = golden_max(&f, coarse_t - dtheta, coarse_t + dtheta, grid.refine_iters);
        Some(if v > coarse_v { (v, t) } else { (coarse_v, coarse_t) })
    };

    let per_radius: Vec<Option<(f64, f64)>> =
        map_indexed(radii.len(), mode, |j| scan_radius(radii[j]));

    if per_radius.iter().all(|p| p.is_none()) {
        return Err(Error::AllPointsFailed);
    }

    let mut profile: Vec<(f64, f64)> = Vec::with_capacity(radii.len());
    let mut best_j = 0usize;
    let mut best = f64::NEG_INFINITY;
    let mut best_theta = 0.0;
    for (j, (r, p)) in radii.iter().zip(&per_radius).enumerate() {
        let (v, t) = match p {
            Some((v, t)) => (*v, *t),
            None => (f64::NEG_INFINITY, 0.0),
        };
        profile.push((*r, v));
        if v > best {
            best = v;
            best_j = j;
            best_theta = t;
        }
    }

    // radial polish around the winning radius
    let lo = if best_j == 0 { 0.0 } else { radii[best_j - 1] };
    let hi = if best_j + 1 < radii.len() {
        radii[best_j + 1]
    } else {
        grid.r_max
    };
    let radial = |r: f64| scan_radius(r).map_or(f64::NEG_INFINITY, |(v, _)| v);
    let (r_star, v_star) = golden_max(&radial, lo, hi, grid.refine_iters);

    let (value, argmax) = if v_star > best {
        let theta = scan_radius(r_star).map_or(best_theta, |(_, t)| t);
        (v_star, Complex64::from_polar(r_star, theta))
    } else {
        (best, Complex64::from_polar(radii[best_j], best_theta))
    };
    profile[best_j].1 = profile[best_j].1.max(value);

    // divergence heuristic: strictly increasing over the last quarter of
    // radii and a 10x blowup relative to the half-radius value
    let quarter = profile.len() - profile.len() / 4;
    let increasing = profile[quarter.saturating_sub(1)..]
        .windows(2)
        .all(|w| w[1].1 > w[0].1);
    let half_idx = (0..profile.len())
        .min_by(|&a, &b| {
            let da = (profile[a].0 - grid.r_max / 2.0).abs();
            let db = (profile[b].0 - grid.r_max / 2.0).abs();
            da.partial_cmp(&db).unwrap()
        })
        .unwrap();
    let last = profile.last().unwrap().1;
    let boundary_divergent = increasing && last > 10.0 * profile[half_idx].1;

    Ok(SupremumReport {
        value,
        argmax,
        boundary_divergent,
        radial_profile: profile,
    })
}

pub fn sup_weighted<F>(field: &F, grid: &GridSpec) -> Result<SupremumReport>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    sup_weighted_with(field, grid, Parallelism::default())
}

/// Norm estimate `sup (1-|z|²)|P(z)|` for a complex pointwise field.
pub fn norm_estimate<F>(field: &F, grid: &GridSpec) -> Result<SupremumReport>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    sup_weighted(&|z| field(z).map(|v| v.norm()), grid)
}

pub fn norm_estimate_with<F>(
    field: &F,
    grid: &GridSpec,
    mode: Parallelism,
) -> Result<SupremumReport>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    sup_weighted_with(&|z| field(z).map(|v| v.norm()), grid, mode)
}

/// `P_h = h''/h'` of an analytic map.
pub fn pre_schwarzian_analytic(h: &AnalyticMap, z: Complex64) -> Result<Complex64> {
    let hp = h.eval_d(z)?;
    if hp.norm() <= DERIV_TOL {
        return Err(Error::DegenerateDerivative { z });
    }
    Ok(h.eval_dd(z)? / hp)
}

fn dilatation_terms(om_map: &AnalyticMap, z: Complex64) -> Result<(Complex64, Complex64)> {
    let om = om_map.eval(z)?;
    if om.norm() >= 1.0 - BOUNDARY_TOL {
        return Err(Error::DilatationOnBoundary { z });
    }
    let omp = om_map.eval_d(z)?;
    Ok((om, omp))
}

/// Logharmonic pre-Schwarzian `(log J_f)_z` for the nonvanishing
/// normalization, with the dilatation supplied separately so scans do not
/// rebuild it per point:
/// `P_f = h' + h''/h' + ω h' - conj(ω) ω' / (1 - |ω|²)`.
pub fn pre_schwarzian_logharmonic_with(
    f: &LogharmonicMap,
    om_map: &AnalyticMap,
    z: Complex64,
) -> Result<Complex64> {
    if f.variant != Variant::Nonvanishing {
        return Err(Error::WrongVariant {
            expected: "nonvanishing",
            found: f.variant.name(),
        });
    }
    let hp = f.h.eval_d(z)?;
    if hp.norm() <= DERIV_TOL {
        return Err(Error::DegenerateDerivative { z });
    }
    let hpp = f.h.eval_dd(z)?;
    let (om, omp) = dilatation_terms(om_map, z)?;
    Ok(hp + hpp / hp + om * hp - om.conj() * omp / (1.0 - om.norm_sqr()))
}

pub fn pre_schwarzian_logharmonic(f: &LogharmonicMap, z: Complex64) -> Result<Complex64> {
    let om = f.dilatation()?;
    pre_schwarzian_logharmonic_with(f, &om, z)
}

/// Harmonic pre-Schwarzian `h''/h' - conj(ω) ω' / (1 - |ω|²)` of
/// `F = h + conj(log G)`.
pub fn pre_schwarzian_harmonic(
    h: &AnalyticMap,
    omega: &AnalyticMap,
    z: Complex64,
) -> Result<Complex64> {
    let ps = pre_schwarzian_analytic(h, z)?;
    let (om, omp) = dilatation_terms(omega, z)?;
    Ok(ps - om.conj() * omp / (1.0 - om.norm_sqr()))
}

/// Norm of the logharmonic pre-Schwarzian over the disk.
pub fn logharmonic_norm(f: &LogharmonicMap, grid: &GridSpec) -> Result<SupremumReport> {
    let om = f.dilatation()?;
    norm_estimate(&|z| pre_schwarzian_logharmonic_with(f, &om, z), grid)
}

/// Norm of the harmonic pre-Schwarzian of `log f` over the disk.
pub fn harmonic_norm(
    h: &AnalyticMap,
    omega: &AnalyticMap,
    grid: &GridSpec,
) -> Result<SupremumReport> {
    norm_estimate(&|z| pre_schwarzian_harmonic(h, omega, z), grid)
}

/// Bloch seminorm `sup (1-|z|²)(|h'| + |g'|)` in the `e^h conj(e^g)`
/// normalization (`g' = ω h'` when the dilatation is prescribed).
pub fn bloch_seminorm(f: &LogharmonicMap, grid: &GridSpec) -> Result<SupremumReport> {
    if f.variant != Variant::Nonvanishing {
        return Err(Error::WrongVariant {
            expected: "nonvanishing",
            found: f.variant.name(),
        });
    }
    let omega = f.omega.clone();
    let g = f.g.clone();
    let h = f.h.clone();
    sup_weighted(
        &move |z| {
            let hp = h.eval_d(z)?;
            let gp = match &omega {
                Some(om) => om.eval(z)? * hp,
                None => g.eval_d(z)?,
            };
            Ok(hp.norm() + gp.norm())
        },
        grid,
    )
}

/// Pre-Schwarzian of the logharmonic Koebe map
/// `K = [z/(1-z)]e^{2z/(1-z)} · conj[(1-z)e^{2z/(1-z)}]` with dilatation z.
/// Its norm is not finite; the supremum search flags the divergence.
pub fn logharmonic_koebe_pre_schwarzian(z: Complex64) -> Result<Complex64> {
    let one = Complex64::ONE;
    let d = one - z;
    if d.norm() <= DERIV_TOL || z.norm() >= 1.0 - BOUNDARY_TOL {
        return Err(Error::DilatationOnBoundary { z });
    }
    // H''/H' = 2/(1-z)² + 1/(1+z) + 3/(1-z), G'/G = (1+z)/(1-z)²
    let hh = 2.0 / (d * d) + one / (one + z) + 3.0 / d;
    let gg = (one + z) / (d * d);
    Ok(hh + gg - z.conj() / (1.0 - z.norm_sqr()))
}
