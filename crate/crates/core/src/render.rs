//! Image-domain rendering: samples f on concentric circles and radial rays,
//! runs geometric sanity checks, and emits deterministic SVG/CSV.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{LogharmonicMap, Variant};
use crate::par::{map_indexed, Parallelism};

/// Default outer radius for pictures; closer to 1 the image blows up like
/// (1-r)^{-4} and the plot degenerates.
pub const RENDER_R_MAX: f64 = 0.995;
/// Adaptive refinement bisects a segment while it exceeds this fraction of
/// the bounding-box diagonal.
const REFINE_FRACTION: f64 = 0.01;
/// Refinement depth cap: 2^3 = 8x the base density.
const REFINE_DEPTH: u32 = 3;
/// Segment budget for the brute-force self-intersection sweep.
const INTERSECTION_CAP: usize = 4096;

/// A sampled curve: (parameter, image point) pairs. The parameter is the
/// angle for circles and the radius for rays.
pub type Polyline = Vec<(f64, Complex64)>;

#[derive(Debug, Clone, Serialize)]
pub struct CurveSet {
    pub circles: Vec<(f64, Polyline)>,
    pub rays: Vec<(f64, Polyline)>,
    /// Free-form echo of the mapping manifest that produced the curves.
    pub meta: String,
}

fn check_finite(p: Complex64) -> Result<Complex64> {
    if p.re.is_finite() && p.im.is_finite() {
        Ok(p)
    } else {
        Err(Error::EvaluationFailure("non-finite image point".into()))
    }
}

fn sample_circle(f: &LogharmonicMap, r: f64, theta_count: usize) -> Result<Polyline> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut base: Polyline = Vec::with_capacity(theta_count + 1);
    for j in 0..theta_count {
        let theta = two_pi * j as f64 / theta_count as f64;
        let p = check_finite(f.evaluate(Complex64::from_polar(r, theta))?)?;
        base.push((theta, p));
    }
    // close exactly on the first preimage point
    base.push((two_pi, base[0].1));

    // bounding-box diagonal of the base sample drives the refinement scale
    let diag = bbox(base.iter().map(|&(_, p)| p)).diagonal();
    let tol = REFINE_FRACTION * diag;

    let mut refined: Polyline = Vec::with_capacity(base.len());
    for w in base.windows(2) {
        let (ta, pa) = w[0];
        let (tb, pb) = w[1];
        refined.push((ta, pa));
        refine_segment(f, r, ta, pa, tb, pb, tol, REFINE_DEPTH, &mut refined)?;
    }
    refined.push(*base.last().unwrap());
    Ok(refined)
}

#[allow(clippy::too_many_arguments)]
fn refine_segment(
    f: &LogharmonicMap,
    r: f64,
    ta: f64,
    pa: Complex64,
    tb: f64,
    pb: Complex64,
    tol: f64,
    depth: u32,
    out: &mut Polyline,
) -> Result<()> {
    if depth == 0 || (pb - pa).norm() <= tol {
        return Ok(());
    }
    let tm = 0.5 * (ta + tb);
    let pm = check_finite(f.evaluate(Complex64::from_polar(r, tm))?)?;
    refine_segment(f, r, ta, pa, tm, pm, tol, depth - 1, out)?;
    out.push((tm, pm));
    refine_segment(f, r, tm, pm, tb, pb, tol, depth - 1, out)
}

/// Samples f on concentric circles (adaptively refined in the image) and on
/// uniformly spaced radial rays out to the largest circle.
pub fn sample_image(
    f: &LogharmonicMap,
    radii: &[f64],
    theta_count: usize,
    ray_count: usize,
) -> Result<CurveSet> {
    if radii.is_empty() {
        return Err(Error::EmptyCurveSet);
    }
    if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::InvalidManifest("circle radii must lie in (0,1)".into()));
    }
    if theta_count < 64 {
        return Err(Error::InvalidManifest("theta_count must be at least 64".into()));
    }

    let circle_results: Vec<Result<Polyline>> =
        map_indexed(radii.len(), Parallelism::default(), |j| {
            sample_circle(f, radii[j], theta_count)
        });
    let mut circles = Vec::with_capacity(radii.len());
    for (j, res) in circle_results.into_iter().enumerate() {
        circles.push((radii[j], res?));
    }

    let r_out = radii.iter().cloned().fold(0.0f64, f64::max);
    let inner = match f.variant {
        Variant::OriginFixed => 0.0,
        Variant::Nonvanishing => 1e-3,
    };
    let mut rays = Vec::with_capacity(ray_count);
    let steps = 96usize;
    for k in 0..ray_count {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / ray_count as f64;
        let mut line: Polyline = Vec::with_capacity(steps + 1);
        for i in 0..=steps {
            let t = inner + (r_out - inner) * i as f64 / steps as f64;
            let z = Complex64::from_polar(t, theta);
            line.push((t, check_finite(f.evaluate(z)?)?));
        }
        rays.push((theta, line));
    }

    Ok(CurveSet {
        circles,
        rays,
        meta: String::new(),
    })
}

#[derive(Debug, Clone, Copy)]
struct BBox {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl BBox {
    fn diagonal(&self) -> f64 {
        ((self.max_x - self.min_x).powi(2) + (self.max_y - self.min_y).powi(2)).sqrt()
    }
}

fn bbox(points: impl Iterator<Item = Complex64>) -> BBox {
    let mut b = BBox {
        min_x: f64::INFINITY,
        min_y: f64::INFINITY,
        max_x: f64::NEG_INFINITY,
        max_y: f64::NEG_INFINITY,
    };
    for p in points {
        b.min_x = b.min_x.min(p.re);
        b.min_y = b.min_y.min(p.im);
        b.max_x = b.max_x.max(p.re);
        b.max_y = b.max_y.max(p.im);
    }
    b
}

fn all_points(c: &CurveSet) -> impl Iterator<Item = Complex64> + '_ {
    c.circles
        .iter()
        .flat_map(|(_, pl)| pl.iter().map(|&(_, p)| p))
        .chain(c.rays.iter().flat_map(|(_, pl)| pl.iter().map(|&(_, p)| p)))
}

fn fmt_coord(v: f64) -> String {
    // fixed precision keeps the byte stream deterministic
    format!("{v:.6}")
}

fn path_data(pl: &Polyline) -> String {
    let mut d = String::new();
    for (i, &(_, p)) in pl.iter().enumerate() {
        // SVG y axis points down, so flip the imaginary part
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd}{} {} ", fmt_coord(p.re), fmt_coord(-p.im));
    }
    d.pop();
    d
}

/// Renders the curve set to a standalone SVG. Same input yields
/// byte-identical output.
pub fn svg_string(c: &CurveSet) -> Result<String> {
    if c.circles.is_empty() && c.rays.is_empty() {
        return Err(Error::EmptyCurveSet);
    }
    let b = bbox(all_points(c));
    let pad_x = 0.05 * (b.max_x - b.min_x).max(1e-9);
    let pad_y = 0.05 * (b.max_y - b.min_y).max(1e-9);
    let (x0, y0) = (b.min_x - pad_x, -b.max_y - pad_y);
    let (w, h) = (
        b.max_x - b.min_x + 2.0 * pad_x,
        b.max_y - b.min_y + 2.0 * pad_y,
    );
    let stroke = 0.002 * b.diagonal().max(1e-9);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
        fmt_coord(x0),
        fmt_coord(y0),
        fmt_coord(w),
        fmt_coord(h)
    );
    for (theta, pl) in &c.rays {
        let _ = writeln!(
            s,
            "  <path data-theta=\"{}\" d=\"{}\" fill=\"none\" stroke=\"#c8c8c8\" stroke-width=\"{}\"/>",
            fmt_coord(*theta),
            path_data(pl),
            fmt_coord(0.5 * stroke)
        );
    }
    let r_out = c
        .circles
        .iter()
        .map(|&(r, _)| r)
        .fold(f64::NEG_INFINITY, f64::max);
    for (r, pl) in &c.circles {
        let outer = *r == r_out;
        let (color, width) = if outer {
            ("#00338d", 2.0 * stroke)
        } else {
            ("#4a7bd4", stroke)
        };
        let _ = writeln!(
            s,
            "  <path data-r=\"{}\" d=\"{}Z\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{}\"/>",
            fmt_coord(*r),
            path_data(pl),
            fmt_coord(width)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_svg(c: &CurveSet, path: &Path) -> Result<()> {
    std::fs::write(path, svg_string(c)?)?;
    Ok(())
}

/// CSV companion with header `r,theta,re,im`, one row per sampled point.
pub fn csv_string(c: &CurveSet) -> Result<String> {
    if c.circles.is_empty() && c.rays.is_empty() {
        return Err(Error::EmptyCurveSet);
    }
    let mut s = String::from("r,theta,re,im\n");
    for (r, pl) in &c.circles {
        for &(theta, p) in pl {
            let _ = writeln!(s, "{r},{theta},{},{}", p.re, p.im);
        }
    }
    for (theta, pl) in &c.rays {
        for &(t, p) in pl {
            let _ = writeln!(s, "{t},{theta},{},{}", p.re, p.im);
        }
    }
    Ok(s)
}

pub fn emit_csv(c: &CurveSet, path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(c)?)?;
    Ok(())
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

fn segments_cross(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    // proper crossing only; shared endpoints between adjacent segments are
    // excluded by the caller
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Brute-force segment-pair sweep over a closed polyline. Polylines with
/// more than the segment budget are thinned evenly first.
pub fn self_intersection_free(pl: &Polyline) -> bool {
    let mut pts: Vec<Complex64> = pl.iter().map(|&(_, p)| p).collect();
    if pts.len() > INTERSECTION_CAP + 1 {
        let n = pts.len();
        pts = (0..=INTERSECTION_CAP)
            .map(|i| pts[i * (n - 1) / INTERSECTION_CAP])
            .collect();
    }
    let m = pts.len() - 1; // segments i..i+1
    for i in 0..m {
        for j in (i + 2)..m {
            // the closing segment shares an endpoint with the first one
            if i == 0 && j == m - 1 {
                continue;
            }
            if segments_cross(pts[i], pts[i + 1], pts[j], pts[j + 1]) {
                return false;
            }
        }
    }
    true
}

/// The unwrapped argument along a closed curve around the origin must be
/// nondecreasing (tiny backtracks below `tol` tolerated) when the mapping
/// is starlike on that circle.
pub fn argument_nondecreasing(pl: &Polyline, tol: f64) -> bool {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut prev = pl[0].1.arg();
    for &(_, p) in &pl[1..] {
        let raw = p.arg();
        let k = ((prev - raw) / two_pi).round();
        let ph = raw + k * two_pi;
        if ph < prev - tol {
            return false;
        }
        prev = ph;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::AnalyticMap;
    use crate::series::ComplexSeries;
    use crate::starlike::starlike_family;

    fn identity_map() -> LogharmonicMap {
        LogharmonicMap::new(
            AnalyticMap::Series(ComplexSeries::zero(4)),
            AnalyticMap::Series(ComplexSeries::zero(4)),
            Variant::OriginFixed,
        )
        .unwrap()
    }

    #[test]
    fn identity_circle_is_round() {
        let c = sample_image(&identity_map(), &[0.5], 64, 8).unwrap();
        let (r, pl) = &c.circles[0];
        assert_eq!(*r, 0.5);
        for &(_, p) in pl {
            assert!((p.norm() - 0.5).abs() < 1e-12);
        }
        let first = pl.first().unwrap().1;
        let last = pl.last().unwrap().1;
        assert!((first - last).norm() < 1e-9);
    }

    #[test]
    fn family_value_on_positive_axis() {
        let f = starlike_family(1.0, 64).unwrap();
        let c = sample_image(&f, &[0.5], 64, 4).unwrap();
        let p0 = c.circles[0].1[0].1;
        assert!((p0.im).abs() < 1e-12);
        assert!((p0.re - 1.819_423_124_176_762).abs() < 1e-9, "got {p0}");
    }

    #[test]
    fn real_coefficients_give_conjugate_symmetry() {
        let f = starlike_family(0.6, 64).unwrap();
        let c = sample_image(&f, &[0.9], 128, 4).unwrap();
        let pl = &c.circles[0].1;
        // theta and 2pi - theta map to conjugate points
        let by_theta: std::collections::BTreeMap<u64, Complex64> = pl
            .iter()
            .map(|&(t, p)| ((t * 1e12).round() as u64, p))
            .collect();
        let two_pi = (2.0 * std::f64::consts::PI * 1e12).round() as u64;
        let mut checked = 0;
        for (&t, &p) in &by_theta {
            if let Some(q) = by_theta.get(&(two_pi - t)) {
                assert!((q.conj() - p).norm() < 1e-12);
                checked += 1;
            }
        }
        assert!(checked > 64);
    }

    #[test]
    fn refinement_respects_cap() {
        let f = starlike_family(1.0, 64).unwrap();
        let c = sample_image(&f, &[0.99], 64, 4).unwrap();
        let n = c.circles[0].1.len();
        assert!(n > 65, "adaptive refinement should add points, got {n}");
        assert!(n <= 64 * 8 + 1, "cap exceeded: {n}");
    }

    #[test]
    fn outer_curves_pass_geometry_checks() {
        for alpha in [0.2, 0.6, 0.8, 1.0] {
            let f = starlike_family(alpha, 64).unwrap();
            let c = sample_image(&f, &[RENDER_R_MAX], 256, 4).unwrap();
            let pl = &c.circles[0].1;
            assert!(self_intersection_free(pl), "alpha = {alpha}");
            assert!(argument_nondecreasing(pl, 1e-10), "alpha = {alpha}");
        }
    }

    #[test]
    fn self_intersection_detects_figure_eight() {
        let mk = |pts: &[(f64, f64)]| -> Polyline {
            pts.iter()
                .enumerate()
                .map(|(i, &(x, y))| (i as f64, Complex64::new(x, y)))
                .collect()
        };
        let eight = mk(&[
            (0.0, 0.0),
            (1.0, 1.0),
            (1.0, 0.0),
            (0.0, 1.0),
            (0.0, 0.0),
        ]);
        assert!(!self_intersection_free(&eight));
        let square = mk(&[
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 1.0),
            (0.0, 1.0),
            (0.0, 0.0),
        ]);
        assert!(self_intersection_free(&square));
    }

    #[test]
    fn svg_deterministic_and_valid() {
        let f = starlike_family(0.8, 64).unwrap();
        let c = sample_image(&f, &[0.3, 0.6, RENDER_R_MAX], 64, 12).unwrap();
        let a = svg_string(&c).unwrap();
        let b = svg_string(&c).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        assert_eq!(a.matches("<path").count(), 15);
        // one emphasized outer circle
        assert_eq!(a.matches("#00338d").count(), 1);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let c = sample_image(&identity_map(), &[0.5], 64, 2).unwrap();
        let s = csv_string(&c).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), "r,theta,re,im");
        assert!(s.lines().count() > 64);
    }

    #[test]
    fn empty_set_is_an_error() {
        let empty = CurveSet {
            circles: vec![],
            rays: vec![],
            meta: String::new(),
        };
        assert!(matches!(svg_string(&empty), Err(Error::EmptyCurveSet)));
        assert!(matches!(csv_string(&empty), Err(Error::EmptyCurveSet)));
        assert!(matches!(
            sample_image(&identity_map(), &[], 64, 4),
            Err(Error::EmptyCurveSet)
        ));
    }

    #[test]
    fn bad_arguments_rejected() {
        let f = identity_map();
        assert!(sample_image(&f, &[1.5], 64, 4).is_err());
        assert!(sample_image(&f, &[0.5], 32, 4).is_err());
    }
}
