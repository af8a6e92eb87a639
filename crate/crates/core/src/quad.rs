//! Adaptive Simpson quadrature for smooth integrands on a bounded interval.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_DEPTH: u32 = 40;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol {
        return Ok(left + right + err / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureNonConvergence);
    }
    let l = adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    adapt(&f, a, b, fa, fm, fb, whole, tol, max_depth)
}

/// Path integral `∫_0^z g(ζ) dζ` along the straight segment, done as a
/// complex-valued integral over the unit parameter interval.
pub fn path_integral<F: Fn(Complex64) -> Complex64>(
    g: F,
    z: Complex64,
    tol: f64,
    max_depth: u32,
) -> Result<Complex64> {
    if z == Complex64::ZERO {
        return Ok(Complex64::ZERO);
    }
    let re = adaptive_simpson(|t| (g(z * t) * z).re, 0.0, 1.0, tol, max_depth)?;
    let im = adaptive_simpson(|t| (g(z * t) * z).im, 0.0, 1.0, tol, max_depth)?;
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson(|x| x * x * x, 0.0, 2.0, 1e-12, 10).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn smooth_integral() {
        let v = adaptive_simpson(|x| x.exp(), 0.0, 1.0, 1e-12, DEFAULT_MAX_DEPTH).unwrap();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-11);
    }

    #[test]
    fn complex_path() {
        // ∫_0^z ζ dζ = z²/2 along any path
        let z = Complex64::new(0.3, 0.4);
        let v = path_integral(|w| w, z, 1e-12, DEFAULT_MAX_DEPTH).unwrap();
        assert!((v - z * z * 0.5).norm() < 1e-12);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(adaptive_simpson(|x| x, 1.0, 1.0, 1e-12, 5).unwrap(), 0.0);
    }
}
