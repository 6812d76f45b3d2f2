//! Sample-size planning.
//!
//! Two planning routes coexist. The rigorous route turns the curvature
//! bounds of [`crate::geometry`] into a worst-case point budget of the form
//! `n_const + n_coeff * sqrt(vol)` and searches scales minimizing it. The
//! heuristic route models each close pair as an independent Bernoulli trial
//! with success probability `(eps2/eps1)^d` and budgets close pairs instead
//! of points; it is orders of magnitude cheaper and is what the experiment
//! harness validates.

use crate::error::{Error, Result};
use crate::geometry::{self, ScalePair};
use crate::reference;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

/// Rigorous plan: scales, error split, and the point-budget law
/// `n(vol) = n_const + n_coeff * sqrt(vol)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TheoreticalPlan {
    pub d: u32,
    pub scales: ScalePair,
    /// Share of the failure budget assigned to the large scale (alpha2 = 1 - alpha1).
    pub alpha1: f64,
    /// Safety margin of the rounded estimator at these scales.
    pub delta: f64,
    /// Concentration target derived from delta and the failure probability.
    pub rho: f64,
    pub n_const: f64,
    pub n_coeff: f64,
    pub failure_prob: f64,
}

impl TheoreticalPlan {
    /// Point budget for a manifold of the given volume, un-rounded.
    pub fn n_for_volume(&self, vol: f64) -> f64 {
        self.n_const + self.n_coeff * vol.sqrt()
    }

    /// Integer point budget: each term of the law is rounded up first, then
    /// the total. This is the convention the reference table uses.
    pub fn n_points(&self, vol: f64) -> u64 {
        (self.n_const.ceil() + self.n_coeff.ceil() * vol.sqrt()).ceil() as u64
    }
}

/// Heuristic plan: scales plus the close-pair budget at a confidence level.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HeuristicPlan {
    pub d: u32,
    pub scales: ScalePair,
    pub confidence: f64,
    pub n_pairs: u64,
    pub mean_ed: f64,
    pub sigma_d: f64,
    pub gap_d: f64,
}

impl HeuristicPlan {
    /// Plan for dimension d at the standard scales.
    pub fn standard(d: u32, confidence: f64) -> Result<Self> {
        let scales = reference::standard_scales(d)?;
        let n_pairs = pairs_required_exact(d, scales, confidence)?;
        let (mean_ed, sigma_d, gap_d) = heuristic_stats(d as f64, scales)?;
        Ok(Self { d, scales, confidence, n_pairs, mean_ed, sigma_d, gap_d })
    }

    /// Plans for all dimensions with standard scales, d = 1..10.
    pub fn standard_table(confidence: f64) -> Result<Vec<Self>> {
        (1..=10).map(|d| Self::standard(d, confidence)).collect()
    }
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if !(0.0 < v && v < 1.0) {
        return Err(Error::Domain(format!("{name}={v} outside (0, 1)")));
    }
    Ok(())
}

/// Concentration target rho = failure_prob * (1 - (eps2/eps1)^(delta/2))^2.
///
/// A zero failure probability is allowed and gives rho = 0 (degenerate).
pub fn rho_for_target(s: ScalePair, delta: f64, failure_prob: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta={delta} must be > 0")));
    }
    if !(0.0..1.0).contains(&failure_prob) {
        return Err(Error::Domain(format!(
            "failure_prob={failure_prob} outside [0, 1)"
        )));
    }
    let shrink = 1.0 - s.ratio().powf(delta / 2.0);
    Ok(failure_prob * shrink * shrink)
}

/// The two terms of the volume-separable point budget: worst-branch constant
/// and sqrt(vol) coefficient.
pub fn n_required_parts(d: u32, s: ScalePair, alpha1: f64, rho: f64) -> Result<(f64, f64)> {
    check_unit_interval("alpha1", alpha1)?;
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("rho={rho} must be > 0")));
    }
    s.validate_for(d)?;
    let mut n_const: f64 = 0.0;
    let mut n_coeff: f64 = 0.0;
    for (eps, alpha) in [(s.eps1, alpha1), (s.eps2, 1.0 - alpha1)] {
        let crv = geometry::cr(d, eps)?;
        let cvv = geometry::cv(d, eps)?;
        n_const = n_const.max((crv - 1.0) * (crv - 1.0) / (alpha * rho));
        n_coeff = n_coeff.max((2.0 / (alpha * rho * cvv)).sqrt());
    }
    Ok((1.0 + n_const, n_coeff))
}

/// Points sufficient for the rounded two-scale estimate to be right with
/// probability 1 - failure on a reach-1 manifold of the given volume
/// (volume-separable form).
pub fn n_required(d: u32, s: ScalePair, alpha1: f64, vol: f64, rho: f64) -> Result<f64> {
    if !(vol > 0.0) {
        return Err(Error::Domain(format!("vol={vol} must be > 0")));
    }
    let (n_const, n_coeff) = n_required_parts(d, s, alpha1, rho)?;
    Ok(n_const + n_coeff * vol.sqrt())
}

/// Full plan at given scales: gap, rho, and budget law.
pub fn theoretical_plan(
    d: u32,
    s: ScalePair,
    alpha1: f64,
    failure_prob: f64,
) -> Result<TheoreticalPlan> {
    s.validate_for(d)?;
    let delta = geometry::gap_delta(d, s)?;
    if !(delta > 0.0) {
        return Err(Error::Infeasible(format!(
            "gap {delta:.6} is not positive at scales ({}, {})",
            s.eps1, s.eps2
        )));
    }
    let rho = rho_for_target(s, delta, failure_prob)?;
    let (n_const, n_coeff) = n_required_parts(d, s, alpha1, rho)?;
    Ok(TheoreticalPlan { d, scales: s, alpha1, delta, rho, n_const, n_coeff, failure_prob })
}

/// Exhaustive grid minimization of the per-branch point budget
/// max_i (1 + (CR_i - 1)^2 / (alpha_i rho) + sqrt(2 vol / (alpha_i rho CV_i)))
/// over eps1 > eps2 (within the d-dependent domain, gap > 0) and alpha1.
///
/// Deterministic regardless of worker count; ties break toward the
/// lexicographically smallest (eps1, eps2, alpha1).
pub fn scale_search(
    d: u32,
    vol: f64,
    grid_step: f64,
    alpha_step: f64,
    failure_prob: f64,
) -> Result<TheoreticalPlan> {
    geometry::check_dim(d)?;
    if !(grid_step > 0.0) || !(alpha_step > 0.0) {
        return Err(Error::Domain("grid steps must be > 0".into()));
    }
    if !(vol > 0.0) {
        return Err(Error::Domain(format!("vol={vol} must be > 0")));
    }
    check_unit_interval("failure_prob", failure_prob)?;

    let eps_max = if d == 1 { 2.0 } else { 1.0 };
    let ks = (1..)
        .map(|k| k as f64 * grid_step)
        .take_while(|&e| e < eps_max - 1e-12)
        .collect::<Vec<_>>();
    let alphas = (1..)
        .map(|j| j as f64 * alpha_step)
        .take_while(|&a| a < 1.0 - 1e-12)
        .collect::<Vec<_>>();
    if ks.len() < 2 {
        return Err(Error::Infeasible("grid has no pair of scales".into()));
    }

    // Per-scale geometry shared by every pair containing that scale.
    struct PerEps {
        cr: f64,
        cv: f64,
        sinh_at_asin: f64, // integral to 2*sqrt(2)*asin(e/2), the upper-bound numerator
        sinh_at_lin: f64,  // integral to sqrt(2)*e, the upper-bound denominator
        asin_half: f64,
        sin_e: f64,
        sin_2asin: f64,
    }
    let per: Vec<PerEps> = ks
        .iter()
        .map(|&e| -> Result<PerEps> {
            let asin_half = (e / 2.0).asin();
            Ok(PerEps {
                cr: geometry::cr(d, e)?,
                cv: geometry::cv(d, e)?,
                sinh_at_asin: geometry::integral_sinh_pow(
                    d,
                    2.0 * std::f64::consts::SQRT_2 * asin_half,
                )?,
                sinh_at_lin: geometry::integral_sinh_pow(d, std::f64::consts::SQRT_2 * e)?,
                asin_half,
                sin_e: e.sin(),
                sin_2asin: (2.0 * asin_half).sin(),
            })
        })
        .collect::<Result<_>>()?;

    // Candidate = (objective, eps1, eps2, alpha1); smaller is better, and the
    // scale/alpha components give the deterministic tie-break.
    let better = |a: &(f64, f64, f64, f64), b: &(f64, f64, f64, f64)| -> bool {
        (a.0, a.1, a.2, a.3) < (b.0, b.1, b.2, b.3)
    };

    let best = (1..ks.len())
        .into_par_iter()
        .map(|i1| {
            let e1 = ks[i1];
            let mut local: Option<(f64, f64, f64, f64)> = None;
            for i2 in 0..i1 {
                let e2 = ks[i2];
                let (lower, upper) = if d == 1 {
                    (e1 / e2, 1.0 + 2.0 * ((e1 - e2) / 2.0).asin() / e2)
                } else {
                    let lo = (e1 / 2.0) / per[i2].asin_half
                        * (per[i1].sin_e / per[i2].sin_2asin).powi((d - 1) as i32);
                    (lo, per[i1].sinh_at_asin / per[i2].sinh_at_lin)
                };
                let l = (e1 / e2).ln();
                let delta = (d as f64 + 0.5 - upper.ln() / l).min(lower.ln() / l - (d as f64 - 0.5));
                if !(delta > 0.0) {
                    continue;
                }
                let shrink = 1.0 - (e2 / e1).powf(delta / 2.0);
                let rho = failure_prob * shrink * shrink;
                let a1_term = (per[i1].cr - 1.0) * (per[i1].cr - 1.0) / rho;
                let a2_term = (per[i2].cr - 1.0) * (per[i2].cr - 1.0) / rho;
                let b1 = 2.0 * vol / (rho * per[i1].cv);
                let b2 = 2.0 * vol / (rho * per[i2].cv);
                for &a in &alphas {
                    let branch1 = 1.0 + a1_term / a + (b1 / a).sqrt();
                    let branch2 = 1.0 + a2_term / (1.0 - a) + (b2 / (1.0 - a)).sqrt();
                    let obj = branch1.max(branch2);
                    let cand = (obj, e1, e2, a);
                    if local.as_ref().is_none_or(|cur| better(&cand, cur)) {
                        local = Some(cand);
                    }
                }
            }
            local
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (Some(x), Some(y)) => Some(if better(&x, &y) { x } else { y }),
                (x, None) => x,
                (None, y) => y,
            },
        );

    let (_, e1, e2, alpha1) =
        best.ok_or_else(|| Error::Infeasible("no feasible scales: gap <= 0 on the whole grid".into()))?;
    theoretical_plan(d, ScalePair::new(e1, e2)?, alpha1, failure_prob)
}

/// Mean, standard deviation, and rounding gap of the Bernoulli close-pair
/// model at (possibly half-integer) dimension d.
pub fn heuristic_stats(d: f64, s: ScalePair) -> Result<(f64, f64, f64)> {
    if !(d >= 0.5) {
        return Err(Error::Domain(format!("d={d} must be >= 0.5")));
    }
    let r = s.ratio();
    let e = r.powf(d);
    let sigma = (e - e * e).sqrt();
    let gap = (r.powf(d - 0.5) - e).min(e - r.powf(d + 0.5));
    Ok((e, sigma, gap))
}

/// Close-pair budget from the normal approximation: ceil((z sigma / gap)^2).
pub fn pairs_required_clt(d: u32, s: ScalePair, z: f64) -> Result<u64> {
    geometry::check_dim(d)?;
    if !(z > 0.0) {
        return Err(Error::Domain(format!("z={z} must be > 0")));
    }
    let (_, sigma, gap) = heuristic_stats(d as f64, s)?;
    let n = (z * sigma / gap).powi(2).ceil();
    Ok((n as u64).max(1))
}

/// Binomial tail bound used to certify that the stability scan can stop:
/// exp(-n KL(q, p)) bounds the tail beyond fraction q.
fn chernoff(q: f64, p: f64, n: u64) -> f64 {
    let kl = q * (q / p).ln() + (1.0 - q) * ((1.0 - q) / (1.0 - p)).ln();
    (-(n as f64) * kl).exp()
}

/// Smallest close-pair budget N whose rounded slope is right with the given
/// probability, for this and every larger budget.
///
/// The success window for Z ~ Binomial(N, E_d) is
/// E_{d+1/2} N < Z <= E_{d-1/2} N (a slope landing exactly on d - 1/2 rounds
/// up to d, one landing on d + 1/2 rounds up to d + 1). The window
/// probability oscillates with the binomial lattice, so the scan returns the
/// last crossing, not the first, and stops once a Chernoff bound certifies
/// that no later budget can fail.
pub fn pairs_required_exact(d: u32, s: ScalePair, confidence: f64) -> Result<u64> {
    geometry::check_dim(d)?;
    check_unit_interval("confidence", confidence)?;
    let r = s.ratio();
    let p = r.powi(d as i32);
    let lo = r.powf(d as f64 + 0.5);
    let hi = r.powf(d as f64 - 0.5);
    let allowed = 1.0 - confidence;

    let mut last_fail: u64 = 0;
    let mut n: u64 = 1;
    loop {
        let kmin = (lo * n as f64).floor() as u64 + 1;
        let kmax = ((hi * n as f64).floor() as u64).min(n);
        let p_window = if kmin > kmax {
            0.0
        } else {
            let dist = Binomial::new(p, n)
                .map_err(|e| Error::Domain(format!("binomial({p}, {n}): {e}")))?;
            let upper = dist.cdf(kmax);
            let lower = if kmin == 0 { 0.0 } else { dist.cdf(kmin - 1) };
            upper - lower
        };
        if p_window < confidence {
            last_fail = n;
        } else if chernoff(lo, p, n) + chernoff(hi, p, n) < allowed {
            // Every larger budget keeps at least `confidence` window mass.
            return Ok(last_fail + 1);
        }
        n += 1;
        if n > 2_000_000 {
            return Err(Error::Infeasible(
                "binomial stability scan exceeded its horizon".into(),
            ));
        }
    }
}

/// Number of points whose expected close-pair count at eps1 is N:
/// the nearest integer to the positive root of n(n-1)/2 * q = N with
/// q = ball(d, eps1) / vol.
pub fn points_for_pairs(n_pairs: u64, d: u32, eps1: f64, vol: f64) -> Result<u64> {
    geometry::check_dim(d)?;
    if n_pairs == 0 || !(eps1 > 0.0) || !(vol > 0.0) {
        return Err(Error::Domain("points_for_pairs needs positive arguments".into()));
    }
    let q = geometry::euclidean_ball_volume(d, eps1) / vol;
    let root = 0.5 * (1.0 + (1.0 + 8.0 * n_pairs as f64 / q).sqrt());
    Ok(((root + 0.5).floor() as u64).max(2))
}

/// Coefficient c(d) of the heuristic point law n = c(d) * sqrt(vol) in the
/// large-volume limit, at the standard scales and 90% confidence.
pub fn heuristic_point_coefficients(d: u32) -> Result<f64> {
    let s = reference::standard_scales(d)?;
    let n = pairs_required_exact(d, s, 0.9)?;
    Ok((2.0 * n as f64 / geometry::euclidean_ball_volume(d, s.eps1)).sqrt())
}
