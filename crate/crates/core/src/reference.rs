//! Pinned reference values: the standard per-dimension scale choices and the
//! expected contents of every table the toolkit regenerates. Tests and the
//! `tables` command diff computed values against these fixtures.

use crate::error::{Error, Result};
use crate::geometry::ScalePair;

/// Standard scales (eps1, eps2) per dimension d = 1..10.
pub const STANDARD_SCALES: [(f64, f64); 10] = [
    (1.5, 0.19),
    (0.78, 0.2),
    (0.63, 0.23),
    (0.54, 0.23),
    (0.46, 0.22),
    (0.4, 0.21),
    (0.36, 0.21),
    (0.33, 0.2),
    (0.31, 0.19),
    (0.29, 0.18),
];

/// Standard alpha1 split per dimension d = 1..10 (alpha2 = 1 - alpha1).
pub const STANDARD_ALPHA1: [f64; 10] =
    [0.15, 0.11, 0.09, 0.06, 0.04, 0.03, 0.03, 0.02, 0.02, 0.01];

/// Expected gap values at the standard scales, d = 1..10.
pub const GAP_TABLE: [f64; 10] = [
    0.463241, 0.387573, 0.307476, 0.249891, 0.223958, 0.208521, 0.178814, 0.166892, 0.155560,
    0.152528,
];

/// Expected rigorous plan law n = n_const + n_coeff * sqrt(vol) at the
/// standard scales and alpha, after ceiling each term; d = 1..10.
pub const PLAN_TABLE: [(u64, u64); 10] = [
    (9, 21),
    (94, 58),
    (635, 146),
    (2786, 392),
    (7013, 1119),
    (13221, 3366),
    (25138, 10644),
    (50033, 34890),
    (63876, 119533),
    (139412, 425554),
];

/// Expected close-pair budgets from the exact binomial model at 90%
/// confidence, d = 1..10.
pub const PAIR_BUDGET_90: [u64; 10] =
    [30, 122, 249, 516, 878, 1329, 1719, 2481, 3900, 5849];

/// Same at 70% confidence.
pub const PAIR_BUDGET_70: [u64; 10] = [10, 40, 111, 238, 360, 554, 698, 1070, 1604, 2414];

/// Expected heuristic point-count coefficients (n = c(d) * sqrt(vol)) after
/// rounding up, d = 1..10.
pub const POINT_COEFFICIENTS: [u64; 10] =
    [5, 12, 22, 50, 128, 355, 964, 2949, 9458, 33021];

/// One Monte Carlo target row: manifold, intrinsic dimension, expected
/// success rates (in percent) at the 90% and 70% pair budgets.
pub struct RateRow {
    pub manifold: &'static str,
    pub d: u32,
    pub rate_90: f64,
    pub rate_70: f64,
}

/// Expected success rates when each trial samples until the pair budget of
/// the hypothesis dimension is reached.
pub const EXPECTED_RATES_FIXED_PAIRS: [RateRow; 10] = [
    RateRow { manifold: "rotation", d: 2, rate_90: 92.0, rate_70: 70.0 },
    RateRow { manifold: "clifford:2", d: 2, rate_90: 89.0, rate_70: 69.0 },
    RateRow { manifold: "flat:2", d: 2, rate_90: 88.0, rate_70: 66.0 },
    RateRow { manifold: "schwarz", d: 2, rate_90: 88.0, rate_70: 66.0 },
    RateRow { manifold: "sphere:3", d: 3, rate_90: 92.0, rate_70: 76.0 },
    RateRow { manifold: "sphere:4", d: 4, rate_90: 89.0, rate_70: 75.0 },
    RateRow { manifold: "product(rotation,rotation)", d: 4, rate_90: 92.0, rate_70: 70.0 },
    RateRow { manifold: "clifford:4", d: 4, rate_90: 93.0, rate_70: 72.0 },
    RateRow { manifold: "flat:4", d: 4, rate_90: 90.0, rate_70: 74.0 },
    RateRow { manifold: "gauss:4", d: 4, rate_90: 90.0, rate_70: 76.0 },
];

/// Expected success rates when each trial samples a fixed number of points,
/// the heuristic count c(d) * sqrt(vol) rounded up.
pub struct FixedPointsRow {
    pub manifold: &'static str,
    pub d: u32,
    pub n_points: u32,
    pub rate: f64,
}

pub const EXPECTED_RATES_FIXED_POINTS: [FixedPointsRow; 4] = [
    FixedPointsRow { manifold: "clifford:2", d: 2, n_points: 76, rate: 91.0 },
    FixedPointsRow { manifold: "sphere:3", d: 3, n_points: 98, rate: 91.0 },
    FixedPointsRow { manifold: "flat:4", d: 4, n_points: 1974, rate: 91.0 },
    FixedPointsRow { manifold: "product(rotation,rotation)", d: 4, n_points: 3948, rate: 94.0 },
];

/// Expected paired success rates of the two-scale estimator vs the
/// angle-variance estimator on the same clouds.
pub struct CompareRow {
    pub manifold: &'static str,
    pub d: u32,
    pub n_points: u32,
    pub rate_corr: f64,
    pub rate_anova: f64,
}

pub const EXPECTED_RATES_COMPARE: [CompareRow; 2] = [
    CompareRow { manifold: "clifford:2", d: 2, n_points: 76, rate_corr: 93.0, rate_anova: 65.0 },
    CompareRow { manifold: "clifford:3", d: 3, n_points: 347, rate_corr: 93.0, rate_anova: 67.0 },
];

/// Standard scales for dimension d in 1..=10.
pub fn standard_scales(d: u32) -> Result<ScalePair> {
    let (e1, e2) = *STANDARD_SCALES
        .get(d.wrapping_sub(1) as usize)
        .ok_or_else(|| Error::Domain(format!("no standard scales for d={d}")))?;
    ScalePair::new(e1, e2)
}

/// Standard alpha1 for dimension d in 1..=10.
pub fn standard_alpha1(d: u32) -> Result<f64> {
    STANDARD_ALPHA1
        .get(d.wrapping_sub(1) as usize)
        .copied()
        .ok_or_else(|| Error::Domain(format!("no standard alpha for d={d}")))
}
