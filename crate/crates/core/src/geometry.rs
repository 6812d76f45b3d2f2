//! Volume integrals in constant curvature and the ratio/gap bounds they
//! yield.
//!
//! Everything here is a pure function of an intrinsic dimension `d` and one
//! or two scales. A ball of radius `eps` around a manifold point is squeezed
//! between a spherical and a hyperbolic comparison ball; [`cv`] and [`cr`]
//! are the resulting volume bounds, [`diagonal_ratio_bounds`] bounds the
//! ratio of thick-diagonal volumes at two scales, and [`gap_delta`] converts
//! that ratio into the safety margin of the rounded two-scale estimator.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

/// Absolute quadrature tolerance. Table reproduction needs 1e-5; the spare
/// orders of magnitude are cheap because the integrands are smooth.
const QUAD_TOL: f64 = 1e-12;

/// A pair of scales with `0 < eps2 < eps1`.
///
/// The curvature bounds are only valid on a d-dependent range (`eps1 < 1`
/// for `d >= 2`, `eps1 < 2` for `d = 1`); [`ScalePair::validate_for`] checks
/// it where needed so that plain two-scale estimation stays unrestricted.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalePair {
    pub eps1: f64,
    pub eps2: f64,
}

impl ScalePair {
    pub fn new(eps1: f64, eps2: f64) -> Result<Self> {
        if !eps1.is_finite() || !eps2.is_finite() || !(0.0 < eps2 && eps2 < eps1) {
            return Err(Error::Domain(format!(
                "scales must satisfy 0 < eps2 < eps1, got eps1={eps1} eps2={eps2}"
            )));
        }
        Ok(Self { eps1, eps2 })
    }

    /// `eps2/eps1`, always in (0, 1).
    pub fn ratio(&self) -> f64 {
        self.eps2 / self.eps1
    }

    /// `log(eps1/eps2)`, the slope denominator; always positive.
    pub fn log_ratio(&self) -> f64 {
        (self.eps1 / self.eps2).ln()
    }

    /// Checks the d-dependent domain of the curvature bounds.
    pub fn validate_for(&self, d: u32) -> Result<()> {
        check_dim(d)?;
        let limit = if d == 1 { 2.0 } else { 1.0 };
        if self.eps1 >= limit {
            return Err(Error::Domain(format!(
                "eps1={} out of range for d={d} (needs eps1 < {limit})",
                self.eps1
            )));
        }
        Ok(())
    }
}

/// Two-sided bound on the thick-diagonal volume ratio vol(D(eps1))/vol(D(eps2)).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioBounds {
    pub lower: f64,
    pub upper: f64,
}

pub(crate) fn check_dim(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    Ok(())
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
#[allow(clippy::too_many_arguments)]
fn simpson_recurse<F: Fn(f64) -> f64>(
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
    let err = left + right - whole;
    if depth == 0 || err.abs() <= 15.0 * tol {
        // Richardson extrapolation of the two Simpson estimates.
        left + right + err / 15.0
    } else {
        simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

pub(crate) fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Relative tolerance: integrand magnitudes here span 1e-9 (sin powers on
    // short ranges) to 1e13 (high sinh powers), and downstream ceilings sit
    // within 1e-6 of integer boundaries, so a fixed absolute tolerance would
    // be either unreachable or far too loose at the extremes. The scale comes
    // from a 17-point peak scan, not the Simpson value alone: integrands like
    // (t - pi/2)^2 sin t vanish at the three Simpson nodes up to roundoff,
    // and scaling by that near-zero estimate would make the target
    // unattainable (the recursion would expand to its full depth).
    let width = b - a;
    let mut peak = fa.abs().max(fm.abs()).max(fb.abs());
    for i in 1..16 {
        peak = peak.max(f(a + width * i as f64 / 16.0).abs());
    }
    let scale = whole.abs().max(width.abs() * peak);
    let scaled = if scale > f64::MIN_POSITIVE { tol * scale } else { tol };
    simpson_recurse(&f, a, b, fa, fm, fb, whole, scaled, 48)
}

/// Gamma(n/2) by the half-integer recurrence; n >= 1.
fn gamma_half(n: u32) -> f64 {
    if n % 2 == 0 {
        // Gamma(k) = (k-1)!
        let mut g = 1.0;
        for k in 2..n / 2 {
            g *= k as f64;
        }
        g
    } else {
        // Gamma(1/2) = sqrt(pi), then climb in unit steps.
        let target = n as f64 / 2.0;
        let mut g = PI.sqrt();
        let mut a = 0.5;
        while a + 1.0 <= target + 1e-9 {
            g *= a;
            a += 1.0;
        }
        g
    }
}

/// Integral of sin^(d-1) over [0, x]; x must lie in [0, pi].
pub fn integral_sin_pow(d: u32, x: f64) -> Result<f64> {
    check_dim(d)?;
    if !(0.0..=PI).contains(&x) {
        return Err(Error::Domain(format!("x={x} outside [0, pi]")));
    }
    let k = (d - 1) as i32;
    Ok(integrate(|t| t.sin().powi(k), 0.0, x, QUAD_TOL))
}

/// Integral of sinh^(d-1) over [0, x]; x must be >= 0.
pub fn integral_sinh_pow(d: u32, x: f64) -> Result<f64> {
    check_dim(d)?;
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("x={x} must be >= 0")));
    }
    let k = (d - 1) as i32;
    Ok(integrate(|t| t.sinh().powi(k), 0.0, x, QUAD_TOL))
}

/// (d-1)-measure of the unit sphere in d-space: 2 pi^(d/2) / Gamma(d/2).
pub fn sphere_surface_measure(d: u32) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / gamma_half(d)
}

/// Volume of the d-dimensional Euclidean ball of radius r.
pub fn euclidean_ball_volume(d: u32, r: f64) -> f64 {
    PI.powf(d as f64 / 2.0) * r.powi(d as i32) / gamma_half(d + 2)
}

/// Lower bound for the volume of an eps-ball on the manifold: the volume of
/// an eps-ball on the unit d-sphere.
pub fn cv(d: u32, eps: f64) -> Result<f64> {
    check_dim(d)?;
    if !(0.0 < eps && eps <= PI) {
        return Err(Error::Domain(format!("eps={eps} outside (0, pi]")));
    }
    Ok(sphere_surface_measure(d) * integral_sin_pow(d, eps)?)
}

/// Upper bound for the max/min ratio of eps-ball volumes on the manifold
/// (hyperbolic over spherical comparison ball); always >= 1.
pub fn cr(d: u32, eps: f64) -> Result<f64> {
    check_dim(d)?;
    if !(0.0 < eps && eps < 2.0) {
        return Err(Error::Domain(format!("eps={eps} outside (0, 2)")));
    }
    let x = 2.0 * SQRT_2 * (eps / 2.0).asin();
    let num = 2.0f64.powf(-(d as f64) / 2.0) * integral_sinh_pow(d, x)?;
    Ok(num / integral_sin_pow(d, eps)?)
}

/// Two-sided bound on vol(D(eps1))/vol(D(eps2)) for a reach-1 manifold.
///
/// `d = 1` uses the sharper circle bounds, valid on the extended range
/// `eps1 < 2`.
pub fn diagonal_ratio_bounds(d: u32, s: ScalePair) -> Result<RatioBounds> {
    s.validate_for(d)?;
    let (e1, e2) = (s.eps1, s.eps2);
    if d == 1 {
        return Ok(RatioBounds {
            lower: e1 / e2,
            upper: 1.0 + 2.0 * ((e1 - e2) / 2.0).asin() / e2,
        });
    }
    let a2 = (e2 / 2.0).asin();
    let lower = (e1 / 2.0) / a2 * (e1.sin() / (2.0 * a2).sin()).powi((d - 1) as i32);
    let upper = integral_sinh_pow(d, 2.0 * SQRT_2 * (e1 / 2.0).asin())?
        / integral_sinh_pow(d, SQRT_2 * e2)?;
    Ok(RatioBounds { lower, upper })
}

/// Margin by which the two-scale log-ratio slope is pinned inside
/// (d - 1/2, d + 1/2). Positive means the rounded estimator cannot miss;
/// a value <= 0 means the scales are unusable for this dimension.
pub fn gap_delta(d: u32, s: ScalePair) -> Result<f64> {
    let bounds = diagonal_ratio_bounds(d, s)?;
    let l = s.log_ratio();
    let hi = d as f64 + 0.5 - bounds.upper.ln() / l;
    let lo = bounds.lower.ln() / l - (d as f64 - 0.5);
    Ok(hi.min(lo))
}
