//! Comparison estimators: the angle-variance statistic, local PCA rules,
//! and expected k-tuple counts.
//!
//! The angle route replaces pair counting by the second moment of vertex
//! angles about π/2. For a d-dimensional cloud that moment concentrates on
//! β_d (the moment of the angle between two independent uniform directions
//! in R^d), so the dimension is read off as the nearest β_d.

use crate::error::{Error, Result};
use crate::estimator::{diff_vec, neighbor_lists, PointCloud};
use crate::geometry::{self, ScalePair};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::RangeInclusive;

/// Vertex angles of all close triples, in anchor order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AngleSample {
    /// Values in [0, π]; one per (anchor, neighbor pair) incidence, so each
    /// unordered triple contributes its three vertex angles exactly once.
    pub angles: Vec<f64>,
}

/// k-th moment of (θ - π/2) when θ has density proportional to sin^{d-2}
/// on [0, π]. Requires d ≥ 2 so the integrand is bounded.
fn central_moment(d: f64, k: i32) -> f64 {
    let p = d - 2.0;
    let num = geometry::integrate(
        |t| (t - FRAC_PI_2).powi(k) * t.sin().powf(p),
        0.0,
        PI,
        1e-12,
    );
    let den = geometry::integrate(|t| t.sin().powf(p), 0.0, PI, 1e-12);
    num / den
}

/// β at any real index d > 1.
///
/// Below d = 2 the integrand sin^{d-2} blows up at the endpoints, so the
/// value is pulled down from d + 2 instead: integrating
/// ∫ u² cos^p u du by parts twice over [-π/2, π/2] gives
/// β_d = β_{d-2} - 2/(d-2)² for d > 3, which inverts to
/// β_d = β_{d+2} + 2/d² for every d > 1.
fn beta_any(d: f64) -> f64 {
    debug_assert!(d > 1.0);
    if d >= 2.0 {
        central_moment(d, 2)
    } else {
        central_moment(d + 2.0, 2) + 2.0 / (d * d)
    }
}

/// Mean of (θ - π/2)² for the angle θ between two independent uniform
/// directions in R^d (density proportional to sin^{d-2} on [0, π]).
pub fn beta_d(d: f64) -> Result<f64> {
    if !(d >= 2.0) {
        return Err(Error::Domain(format!(
            "d={d} must be >= 2: angle statistics degenerate below the plane"
        )));
    }
    Ok(central_moment(d, 2))
}

/// β for an integer dimension candidate, d ≥ 1.
///
/// A one-dimensional cloud only realizes angles 0 and π, both of which
/// square to (π/2)², so β₁ = π²/4.
pub fn beta_for_dimension(d: u32) -> Result<f64> {
    match d {
        0 => Err(Error::Domain("dimension candidate must be >= 1".into())),
        1 => Ok(FRAC_PI_2 * FRAC_PI_2),
        _ => Ok(beta_any(d as f64)),
    }
}

/// Vertex angles of every unordered triple whose three mutual distances lie
/// in (0, eps1]. Each triple shows up once per vertex: the anchor scans
/// unordered pairs of its own neighbors and keeps those already close to
/// each other.
pub fn collect_angles(x: &PointCloud, eps1: f64) -> Result<AngleSample> {
    let lists = neighbor_lists(x, eps1)?;
    let eps2 = eps1 * eps1;
    let metric = x.metric();
    let per_anchor: Vec<Vec<f64>> = (0..x.n())
        .into_par_iter()
        .map(|i| {
            let anchor = x.point(i);
            let list = &lists[i];
            let mut angles = Vec::new();
            for (a_pos, &a) in list.iter().enumerate() {
                for &b in &list[a_pos + 1..] {
                    let d2 = x.dist2(a as usize, b as usize);
                    if !(d2 > 0.0 && d2 <= eps2) {
                        continue;
                    }
                    let u = diff_vec(x.point(a as usize), anchor, metric);
                    let v = diff_vec(x.point(b as usize), anchor, metric);
                    let dot: f64 = u.iter().zip(&v).map(|(p, q)| p * q).sum();
                    let nu: f64 = u.iter().map(|t| t * t).sum::<f64>().sqrt();
                    let nv: f64 = v.iter().map(|t| t * t).sum::<f64>().sqrt();
                    angles.push((dot / (nu * nv)).clamp(-1.0, 1.0).acos());
                }
            }
            angles
        })
        .collect();
    let angles: Vec<f64> = per_anchor.into_iter().flatten().collect();
    if angles.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no triple has all three distances within eps1={eps1}"
        )));
    }
    Ok(AngleSample { angles })
}

/// The angle statistic B: mean of (θ - π/2)² over a sample.
pub fn anova_statistic(sample: &AngleSample) -> f64 {
    let s: f64 = sample.angles.iter().map(|t| (t - FRAC_PI_2) * (t - FRAC_PI_2)).sum();
    s / sample.angles.len() as f64
}

/// Candidate dimension whose β is closest to an observed angle statistic.
/// Ties go to the smaller dimension.
pub fn nearest_beta_dimension(b: f64, d_range: RangeInclusive<u32>) -> Result<u32> {
    let (lo, hi) = (*d_range.start(), *d_range.end());
    if lo < 1 || hi < lo {
        return Err(Error::Domain(format!("bad candidate range {lo}..={hi}")));
    }
    let mut best = (f64::INFINITY, lo);
    for d in lo..=hi {
        let diff = (b - beta_for_dimension(d)?).abs();
        if diff < best.0 {
            best = (diff, d);
        }
    }
    Ok(best.1)
}

/// Dimension whose β is closest to the cloud's angle statistic at scale
/// eps1, searched over the inclusive candidate range.
pub fn anova_dimension(x: &PointCloud, eps1: f64, d_range: RangeInclusive<u32>) -> Result<u32> {
    nearest_beta_dimension(anova_statistic(&collect_angles(x, eps1)?), d_range)
}

/// Angle budget by the normal approximation, the analog of the close-pair
/// budget: N = ceil((z σ_B / gap_B)²) with σ_B² = Var[(θ-π/2)²] under the
/// sin^{d-2} density and gap_B the closer half-integer β step.
///
/// The budget is scale-free (the limiting angle law does not involve eps);
/// the scale pair is validated for shape only, to keep planning calls
/// uniform across the pair- and angle-based routes.
pub fn anova_required_angles(d: u32, s: ScalePair, z: f64) -> Result<u64> {
    if d < 2 {
        return Err(Error::Domain(format!("d={d} must be >= 2 for angle planning")));
    }
    s.validate_for(d)?;
    if !(z > 0.0) {
        return Err(Error::Domain(format!("z={z} must be > 0")));
    }
    let beta = beta_any(d as f64);
    let sigma2 = central_moment(d as f64, 4) - beta * beta;
    let gap = (beta_any(d as f64 - 0.5) - beta).min(beta - beta_any(d as f64 + 0.5));
    let n = (z * sigma2.sqrt() / gap).powi(2).ceil();
    Ok((n as u64).max(1))
}

/// Expected number of k-element subsets of an n-point uniform sample whose
/// points are pairwise within eps on a d-manifold of the given volume:
/// C(n, k) (ball(d, eps)/vol)^{k-1}.
pub fn expected_ktuples(n: u64, k: u32, d: u32, eps: f64, vol: f64) -> Result<f64> {
    geometry::check_dim(d)?;
    if k < 2 {
        return Err(Error::Domain(format!("k={k} must be >= 2")));
    }
    if n < k as u64 {
        return Err(Error::Domain(format!("n={n} must be >= k={k}")));
    }
    if !(eps > 0.0) || !(vol > 0.0) {
        return Err(Error::Domain("eps and vol must be > 0".into()));
    }
    let mut binom = 1.0f64;
    for i in 1..=k as u64 {
        binom *= (n - k as u64 + i) as f64 / i as f64;
    }
    let q = geometry::euclidean_ball_volume(d, eps) / vol;
    Ok(binom * q.powi(k as i32 - 1))
}

/// Principal standard deviations of a neighborhood, sorted descending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    /// Non-increasing, non-negative; length = min(point count, ambient dim).
    pub values: Vec<f64>,
}

const JACOBI_TOL: f64 = 1e-12;

/// One-sided Jacobi: rotate column pairs until all are mutually orthogonal;
/// the singular values are then the column norms.
fn jacobi_orthogonalize(cols: &mut [Vec<f64>]) {
    let m = cols.len();
    for _ in 0..60 {
        let mut rotated = false;
        for i in 0..m {
            for j in (i + 1)..m {
                let (mut aii, mut ajj, mut aij) = (0.0, 0.0, 0.0);
                for t in 0..cols[i].len() {
                    let (x, y) = (cols[i][t], cols[j][t]);
                    aii += x * x;
                    ajj += y * y;
                    aij += x * y;
                }
                if aij.abs() <= JACOBI_TOL * (aii * ajj).sqrt() {
                    continue;
                }
                let zeta = (ajj - aii) / (2.0 * aij);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (head, tail) = cols.split_at_mut(j);
                let (ci, cj) = (&mut head[i], &mut tail[0]);
                for t_ in 0..ci.len() {
                    let (x, y) = (ci[t_], cj[t_]);
                    ci[t_] = c * x - s * y;
                    cj[t_] = s * x + c * y;
                }
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }
}

/// Principal standard deviations of a point set: singular values of the
/// centered coordinate matrix scaled by 1/sqrt(n), so that uniform unit-ball
/// data in R^d yields d values near 1/sqrt(d+2). All points equal gives the
/// all-zero spectrum.
pub fn local_pca_spectrum(rows: &[Vec<f64>]) -> Result<SingularSpectrum> {
    let n = rows.len();
    if n < 2 {
        return Err(Error::InsufficientData("local PCA needs at least 2 points".into()));
    }
    let ambient = rows[0].len();
    if ambient == 0 || rows.iter().any(|r| r.len() != ambient) {
        return Err(Error::Domain("rows must share one positive length".into()));
    }
    let mut mean = vec![0.0; ambient];
    for r in rows {
        for (m, v) in mean.iter_mut().zip(r) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let scale = 1.0 / (n as f64).sqrt();
    // Work on whichever side is shorter; the singular values agree.
    let mut cols: Vec<Vec<f64>> = if ambient <= n {
        (0..ambient)
            .map(|j| rows.iter().map(|r| (r[j] - mean[j]) * scale).collect())
            .collect()
    } else {
        rows.iter()
            .map(|r| r.iter().zip(&mean).map(|(v, m)| (v - m) * scale).collect())
            .collect()
    };
    jacobi_orthogonalize(&mut cols);
    let mut values: Vec<f64> =
        cols.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    values.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(SingularSpectrum { values })
}

/// Dimension read-off rule applied to a singular spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PcaRule {
    /// Index k maximizing s_k - s_{k+1}, with an implicit trailing zero.
    MaxGap,
    /// Largest k with s_k >= t.
    Threshold(f64),
}

/// Applies a rule to a spectrum. A degenerate (empty or all-zero) spectrum
/// gives 0.
pub fn pca_rule_dimension(spectrum: &SingularSpectrum, rule: PcaRule) -> u32 {
    let s = &spectrum.values;
    if s.is_empty() || s[0] <= 0.0 {
        return 0;
    }
    match rule {
        PcaRule::MaxGap => {
            let mut best = (f64::NEG_INFINITY, 0usize);
            for k in 0..s.len() {
                let next = s.get(k + 1).copied().unwrap_or(0.0);
                let gap = s[k] - next;
                if gap > best.0 {
                    best = (gap, k + 1);
                }
            }
            best.1 as u32
        }
        PcaRule::Threshold(t) => s.iter().take_while(|&&v| v >= t).count() as u32,
    }
}

/// Spectrum plus rule in one call.
pub fn local_pca_dimension(rows: &[Vec<f64>], rule: PcaRule) -> Result<u32> {
    Ok(pca_rule_dimension(&local_pca_spectrum(rows)?, rule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::Metric;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn beta_closed_forms() {
        assert_abs_diff_eq!(beta_d(2.0).unwrap(), PI * PI / 12.0, epsilon = 1e-10);
        assert_abs_diff_eq!(beta_d(3.0).unwrap(), PI * PI / 4.0 - 2.0, epsilon = 1e-10);
        // Pinned reference values.
        assert_abs_diff_eq!(beta_d(4.0).unwrap(), 0.322_467_033, epsilon = 5e-8);
        assert_abs_diff_eq!(beta_d(5.0).unwrap(), 0.245_178_878, epsilon = 5e-8);
        assert!(beta_d(1.9).is_err());
    }

    #[test]
    fn beta_half_integers() {
        assert_abs_diff_eq!(beta_any(2.5), 0.598_664_577, epsilon = 5e-8);
        assert_abs_diff_eq!(beta_any(3.5), 0.382_050_935, epsilon = 5e-8);
        assert_abs_diff_eq!(beta_any(4.5), 0.278_664_577, epsilon = 5e-8);
        assert_abs_diff_eq!(beta_any(5.5), 0.218_785_629, epsilon = 5e-8);
    }

    #[test]
    fn beta_recurrence_and_monotonicity() {
        // The two-step recurrence the sub-plane extension relies on.
        for d in [2.0, 2.5, 3.0] {
            assert_abs_diff_eq!(beta_any(d) - beta_any(d + 2.0), 2.0 / (d * d), epsilon = 1e-9);
        }
        let mut prev = beta_for_dimension(1).unwrap();
        assert_abs_diff_eq!(prev, PI * PI / 4.0, epsilon = 1e-15);
        let mut d = 1.5;
        while d <= 12.0 {
            let b = beta_any(d);
            assert!(b < prev, "beta not decreasing at d={d}");
            prev = b;
            d += 0.5;
        }
    }

    #[test]
    fn angle_budgets() {
        // Pinned reference values at z = 1.64 and the standard scales.
        let cases = [
            (2u32, ScalePair::new(0.78, 0.2).unwrap(), 30u64),
            (3, ScalePair::new(0.63, 0.23).unwrap(), 97),
            (4, ScalePair::new(0.54, 0.23).unwrap(), 205),
            (5, ScalePair::new(0.46, 0.22).unwrap(), 357),
        ];
        for (d, s, want) in cases {
            assert_eq!(anova_required_angles(d, s, 1.64).unwrap(), want, "d={d}");
        }
        // Tiny z collapses to a single angle.
        assert_eq!(
            anova_required_angles(4, ScalePair::new(0.54, 0.23).unwrap(), 1e-9).unwrap(),
            1
        );
        assert!(anova_required_angles(1, ScalePair::new(1.5, 0.19).unwrap(), 1.64).is_err());
    }

    #[test]
    fn angle_enumeration_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rows: Vec<Vec<f64>> =
            (0..25).map(|_| (0..3).map(|_| rng.gen::<f64>()).collect()).collect();
        let x = PointCloud::from_rows(&rows, Metric::Euclidean).unwrap();
        let eps = 0.9;
        let mut triples = 0u64;
        for i in 0..rows.len() {
            for j in (i + 1)..rows.len() {
                for k in (j + 1)..rows.len() {
                    let close = |a: usize, b: usize| {
                        let d2 = x.dist2(a, b);
                        d2 > 0.0 && d2 <= eps * eps
                    };
                    if close(i, j) && close(i, k) && close(j, k) {
                        triples += 1;
                    }
                }
            }
        }
        let sample = collect_angles(&x, eps).unwrap();
        assert_eq!(sample.angles.len() as u64, 3 * triples);
        assert!(sample.angles.iter().all(|&t| (0.0..=PI).contains(&t)));
    }

    #[test]
    fn equilateral_triangle_statistic() {
        let h = 0.25 * 3.0f64.sqrt();
        let rows = vec![vec![0.0, 0.0], vec![0.5, 0.0], vec![0.25, h]];
        let x = PointCloud::from_rows(&rows, Metric::Euclidean).unwrap();
        let b = anova_statistic(&collect_angles(&x, 0.6).unwrap());
        // All three angles are π/3.
        assert_abs_diff_eq!(b, (PI / 6.0) * (PI / 6.0), epsilon = 1e-12);
        assert_eq!(anova_dimension(&x, 0.6, 1..=12).unwrap(), 5);

        // Rotation plus translation leaves the statistic untouched.
        let (c, s) = (0.7f64.cos(), 0.7f64.sin());
        let moved: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| vec![c * r[0] - s * r[1] + 2.0, s * r[0] + c * r[1] - 1.0])
            .collect();
        let y = PointCloud::from_rows(&moved, Metric::Euclidean).unwrap();
        assert_abs_diff_eq!(
            anova_statistic(&collect_angles(&y, 0.6).unwrap()),
            b,
            epsilon = 1e-12
        );

        // Two points admit no triple.
        let pair = PointCloud::from_rows(&rows[..2].to_vec(), Metric::Euclidean).unwrap();
        assert!(collect_angles(&pair, 0.6).is_err());
    }

    #[test]
    fn one_dimensional_torus_angles_wrap() {
        let p = 2.0 * PI;
        let rows = vec![vec![0.1], vec![p - 0.103_185], vec![0.3]];
        let x = PointCloud::from_rows(&rows, Metric::FlatTorus { period: p }).unwrap();
        let sample = collect_angles(&x, 0.5).unwrap();
        assert_eq!(sample.angles.len(), 3);
        // On a line every angle is 0 or π, so B = (π/2)² = β₁.
        assert_abs_diff_eq!(anova_statistic(&sample), PI * PI / 4.0, epsilon = 1e-9);
        assert_eq!(anova_dimension(&x, 0.5, 1..=12).unwrap(), 1);
    }

    #[test]
    fn ktuple_reference_values() {
        let vol = (2.0 * PI).powi(4);
        let k3 = expected_ktuples(1958, 3, 4, 0.54, vol).unwrap();
        assert_abs_diff_eq!(k3, 90.546_515_987, epsilon = 1e-6);
        assert_eq!(k3.round() as i64, 91);

        let k6 = expected_ktuples(1958, 6, 4, 0.54, vol).unwrap();
        assert_abs_diff_eq!(k6, 0.109_860_105, epsilon = 1e-8);

        // Independent arithmetic for the eps = 2 case: ball(4, 2) = 8π²
        // and C(1958, 6) taken exactly.
        let k6_wide = expected_ktuples(1958, 6, 4, 2.0, vol).unwrap();
        let binom: u128 =
            1958u128 * 1957 * 1956 * 1955 * 1954 * 1953 / 720;
        let q = 8.0 * PI * PI / vol;
        let want = binom as f64 * q.powi(5);
        assert_abs_diff_eq!(k6_wide / want, 1.0, epsilon = 1e-12);

        // k = 2 reduces to the expected close-pair count.
        let pairs = expected_ktuples(200, 2, 4, 0.54, vol).unwrap();
        let q2 = geometry::euclidean_ball_volume(4, 0.54) / vol;
        assert_abs_diff_eq!(pairs, 200.0 * 199.0 / 2.0 * q2, epsilon = 1e-12);

        assert!(expected_ktuples(10, 1, 4, 0.5, 1.0).is_err());
        assert!(expected_ktuples(3, 6, 4, 0.5, 1.0).is_err());
    }

    #[test]
    fn pca_plane_recovery() {
        // Six points in a skewed 2-plane inside R⁴: rank exactly 2.
        let u = [1.0, 0.0, 1.0, 0.0];
        let v = [0.0, 1.0, -1.0, 1.0];
        let coeffs = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 1.0), (1.0, 2.0)];
        let rows: Vec<Vec<f64>> = coeffs
            .iter()
            .map(|(a, b)| (0..4).map(|i| a * u[i] + b * v[i]).collect())
            .collect();
        let spec = local_pca_spectrum(&rows).unwrap();
        assert_eq!(spec.values.len(), 4); // min(6 points, ambient 4)
        assert!(spec.values[2] < 1e-10 && spec.values[3] < 1e-10);
        assert!(spec.values.windows(2).all(|w| w[0] >= w[1]));

        // Axis-aligned variant where both in-plane spreads are comparable.
        let flat: Vec<Vec<f64>> = coeffs.iter().map(|(a, b)| vec![*a, *b, 0.0, 0.0]).collect();
        assert_eq!(local_pca_dimension(&flat, PcaRule::MaxGap).unwrap(), 2);
        assert_eq!(local_pca_dimension(&flat, PcaRule::Threshold(0.1)).unwrap(), 2);
    }

    #[test]
    fn pca_rules_on_fixed_spectra() {
        let s = SingularSpectrum { values: vec![0.5, 0.5, 0.01] };
        assert_eq!(pca_rule_dimension(&s, PcaRule::Threshold(0.1)), 2);
        assert_eq!(pca_rule_dimension(&s, PcaRule::MaxGap), 2);
        assert_eq!(pca_rule_dimension(&s, PcaRule::Threshold(0.6)), 0);
        let zero = SingularSpectrum { values: vec![0.0, 0.0] };
        assert_eq!(pca_rule_dimension(&zero, PcaRule::MaxGap), 0);
        assert_eq!(pca_rule_dimension(&zero, PcaRule::Threshold(0.1)), 0);
    }

    #[test]
    fn pca_invariances() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|_| vec![rng.gen::<f64>(), 0.3 * rng.gen::<f64>(), 0.05 * rng.gen::<f64>()])
            .collect();
        let base = local_pca_spectrum(&rows).unwrap();

        let (c, s) = (1.1f64.cos(), 1.1f64.sin());
        let rotated: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| vec![c * r[0] - s * r[2], r[1] + 7.0, s * r[0] + c * r[2]])
            .collect();
        let rot = local_pca_spectrum(&rotated).unwrap();
        for (a, b) in base.values.iter().zip(&rot.values) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }

        let lam = 2.5;
        let scaled: Vec<Vec<f64>> =
            rows.iter().map(|r| r.iter().map(|v| lam * v).collect()).collect();
        let sc = local_pca_spectrum(&scaled).unwrap();
        for (a, b) in base.values.iter().zip(&sc.values) {
            assert_abs_diff_eq!(lam * a, *b, epsilon = 1e-9);
        }
    }

    #[test]
    fn pca_moment_limits() {
        // Uniform unit disk: both principal standard deviations near 1/2.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut rows = Vec::with_capacity(100_000);
        while rows.len() < 100_000 {
            let (x, y) = (2.0 * rng.gen::<f64>() - 1.0, 2.0 * rng.gen::<f64>() - 1.0);
            if x * x + y * y <= 1.0 {
                rows.push(vec![x, y]);
            }
        }
        let spec = local_pca_spectrum(&rows).unwrap();
        for v in &spec.values {
            assert!((v - 0.5).abs() < 0.005, "disk spectrum {v}");
        }

        // Isotropic Gaussian: every value near sigma.
        let sigma = 0.7;
        let rows: Vec<Vec<f64>> = (0..30_000)
            .map(|_| {
                (0..3)
                    .map(|_| sigma * rng.sample::<f64, _>(rand_distr::StandardNormal))
                    .collect()
            })
            .collect();
        let spec = local_pca_spectrum(&rows).unwrap();
        assert_eq!(spec.values.len(), 3);
        for v in &spec.values {
            assert!((v - sigma).abs() / sigma < 0.02, "gaussian spectrum {v}");
        }
    }

    #[test]
    fn pca_degenerate_and_small() {
        let same = vec![vec![1.0, 2.0]; 5];
        let spec = local_pca_spectrum(&same).unwrap();
        assert!(spec.values.iter().all(|&v| v == 0.0));
        assert_eq!(local_pca_dimension(&same, PcaRule::MaxGap).unwrap(), 0);

        // Two points in R⁵: spectrum length 2, rank 1.
        let two = vec![vec![0.0; 5], vec![1.0, 0.0, 0.0, 0.0, 0.0]];
        let spec = local_pca_spectrum(&two).unwrap();
        assert_eq!(spec.values.len(), 2);
        assert!(spec.values[1] < 1e-12);

        assert!(local_pca_spectrum(&[vec![1.0]]).is_err());
    }
}
