//! Central finite-difference stencils shared by field extraction and gauge checks.

use std::ops::{Add, Mul, Sub};

use crate::minkowski::FourVector;

/// Default first-derivative step at event `x`: `1e-4 * (1 + |x|_inf)`.
pub fn default_step(x: FourVector) -> f64 {
    1e-4 * (1.0 + x.max_abs())
}

/// Default step for the second-order d'Alembertian stencil.
pub const WAVE_EQUATION_STEP: f64 = 1e-3;

/// Fourth-order central first derivative of `f` at 0.
pub fn central4<T, F, E>(f: F, h: f64) -> Result<T, E>
where
    T: Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
    F: Fn(f64) -> Result<T, E>,
{
    let m2 = f(-2.0 * h)?;
    let m1 = f(-h)?;
    let p1 = f(h)?;
    let p2 = f(2.0 * h)?;
    Ok(((m2 - p2) + (p1 - m1) * 8.0) * (1.0 / (12.0 * h)))
}

/// Second-order central second derivative of `f` at 0.
pub fn central2_second<F: Fn(f64) -> f64>(f: F, h: f64) -> f64 {
    (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    #[test]
    fn central4_is_exact_for_quartics() {
        // error term is h^4 f^(5); vanishes for degree <= 4
        let f = |s: f64| Ok::<_, Infallible>((1.3 + s).powi(4) - 2.0 * (1.3 + s));
        let d = central4(f, 0.1).unwrap();
        let exact = 4.0 * 1.3f64.powi(3) - 2.0;
        assert!((d - exact).abs() < 1e-12, "{d} vs {exact}");
    }

    #[test]
    fn central4_fourth_order_convergence() {
        let err = |h: f64| {
            (central4(|s| Ok::<_, Infallible>((0.7 + s).sin()), h).unwrap() - 0.7f64.cos()).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 16.0).abs() < 0.5, "ratio {ratio}");
    }

    #[test]
    fn second_derivative_of_quadratic() {
        let d2 = central2_second(|s| 3.0 * (2.0 + s).powi(2), 1e-3);
        assert!((d2 - 6.0).abs() < 1e-6);
    }

    #[test]
    fn simpson_integrates_cos() {
        let v = adaptive_simpson(&|p: f64| p.cos(), 0.0, 2.5, 1e-13);
        assert!((v - 2.5f64.sin()).abs() < 1e-11);
        let back = adaptive_simpson(&|p: f64| p.cos(), 0.0, -1.0, 1e-13);
        assert!((back - (-1.0f64).sin()).abs() < 1e-11);
    }
}
