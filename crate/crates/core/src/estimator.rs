//! Point clouds, pair counting, and the dimension estimators.
//!
//! Pair counting is the workhorse: everything else reduces to the number of
//! unordered point pairs within a scale. Counts use a uniform grid with
//! cell size equal to the scale (wrap-around cells for the flat torus) and
//! fall back to brute force for small clouds. Distances are compared
//! squared, on the input floats, so counts are bit-stable.

use crate::error::{Error, Result};
use crate::geometry::ScalePair;
use crate::planner::HeuristicPlan;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Distance law for a cloud.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Metric {
    Euclidean,
    /// Per-coordinate circular distance with the given period.
    FlatTorus { period: f64 },
}

/// Immutable set of ambient-space samples plus the metric they live under.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointCloud {
    coords: Vec<f64>,
    n: usize,
    ambient_dim: usize,
    metric: Metric,
}

impl PointCloud {
    /// Builds a cloud from a flat row-major coordinate buffer.
    /// Flat-torus coordinates are reduced mod period.
    pub fn new(mut coords: Vec<f64>, ambient_dim: usize, metric: Metric) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::Domain("ambient dimension must be >= 1".into()));
        }
        if coords.len() % ambient_dim != 0 {
            return Err(Error::Domain(format!(
                "coordinate buffer length {} is not a multiple of ambient dim {ambient_dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("coordinates must be finite".into()));
        }
        if let Metric::FlatTorus { period } = metric {
            if !(period > 0.0) {
                return Err(Error::Domain(format!("period={period} must be > 0")));
            }
            for v in &mut coords {
                *v = v.rem_euclid(period);
            }
        }
        let n = coords.len() / ambient_dim;
        Ok(Self { coords, n, ambient_dim, metric })
    }

    pub fn from_rows(rows: &[Vec<f64>], metric: Metric) -> Result<Self> {
        let ambient_dim = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ambient_dim) {
            return Err(Error::Domain("rows have inconsistent lengths".into()));
        }
        let coords = rows.iter().flatten().copied().collect();
        Self::new(coords, ambient_dim.max(1), metric)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.ambient_dim..(i + 1) * self.ambient_dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.ambient_dim)
    }

    /// Squared distance between points i and j under the cloud metric.
    pub fn dist2(&self, i: usize, j: usize) -> f64 {
        dist2(self.point(i), self.point(j), self.metric)
    }

    /// All positive squared pairwise distances (duplicate points excluded).
    pub fn positive_dist2(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let d2 = self.dist2(i, j);
                if d2 > 0.0 {
                    out.push(d2);
                }
            }
        }
        out
    }
}

/// Squared distance between two coordinate slices under a metric.
pub fn dist2(a: &[f64], b: &[f64], metric: Metric) -> f64 {
    match metric {
        Metric::Euclidean => a
            .iter()
            .zip(b)
            .map(|(x, y)| {
                let d = x - y;
                d * d
            })
            .sum(),
        Metric::FlatTorus { period } => a
            .iter()
            .zip(b)
            .map(|(x, y)| {
                let d = (x - y).abs();
                let d = d.min(period - d);
                d * d
            })
            .sum(),
    }
}

/// Difference vector a - b, taking the shorter way around each coordinate on
/// the flat torus. Used wherever ambient geometry (angles) is needed.
pub fn diff_vec(a: &[f64], b: &[f64], metric: Metric) -> Vec<f64> {
    match metric {
        Metric::Euclidean => a.iter().zip(b).map(|(x, y)| x - y).collect(),
        Metric::FlatTorus { period } => a
            .iter()
            .zip(b)
            .map(|(x, y)| {
                let mut d = x - y;
                if d > period / 2.0 {
                    d -= period;
                } else if d < -period / 2.0 {
                    d += period;
                }
                d
            })
            .collect(),
    }
}

/// Number of unordered pairs within a scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCount {
    pub eps: f64,
    pub count: u64,
}

const BRUTE_FORCE_LIMIT: usize = 64;

/// Grid key along the first up-to-3 axes.
type CellKey = [i64; 3];

struct Grid {
    eps: f64,
    metric: Metric,
    axes: usize,
    /// Cells per axis for the torus (shared by all axes); 0 for Euclidean.
    wrap_cells: i64,
    cells: HashMap<CellKey, Vec<u32>>,
}

impl Grid {
    fn new(eps: f64, metric: Metric, ambient_dim: usize) -> Self {
        let axes = ambient_dim.min(3);
        let wrap_cells = match metric {
            Metric::Euclidean => 0,
            Metric::FlatTorus { period } => ((period / eps).floor() as i64).max(1),
        };
        Grid { eps, metric, axes, wrap_cells, cells: HashMap::new() }
    }

    fn key(&self, p: &[f64]) -> CellKey {
        let mut key = [0i64; 3];
        for (a, k) in key.iter_mut().enumerate().take(self.axes) {
            let c = (p[a] / self.eps).floor() as i64;
            // Clamp the last, slightly wider torus cell.
            *k = if self.wrap_cells > 0 { c.min(self.wrap_cells - 1) } else { c };
        }
        key
    }

    /// Distinct neighbor cells of `key` (including itself).
    fn neighbors(&self, key: CellKey) -> Vec<CellKey> {
        let mut axis_options: [Vec<i64>; 3] = [vec![0], vec![0], vec![0]];
        for (a, opts) in axis_options.iter_mut().enumerate().take(self.axes) {
            let mut vals: Vec<i64> = (-1..=1)
                .map(|o| {
                    let c = key[a] + o;
                    if self.wrap_cells > 0 {
                        c.rem_euclid(self.wrap_cells)
                    } else {
                        c
                    }
                })
                .collect();
            vals.sort_unstable();
            vals.dedup();
            *opts = vals;
        }
        let mut out = Vec::with_capacity(27);
        for &x in &axis_options[0] {
            for &y in &axis_options[1] {
                for &z in &axis_options[2] {
                    out.push([x, y, z]);
                }
            }
        }
        out
    }

    fn insert(&mut self, p: &[f64], idx: u32) {
        self.cells.entry(self.key(p)).or_default().push(idx);
    }
}

/// Incremental pair counter: insert points one at a time, maintaining the
/// number of unordered pairs within `eps`.
pub struct IncrementalPairCounter {
    grid: Grid,
    coords: Vec<f64>,
    ambient_dim: usize,
    eps2: f64,
    count: u64,
}

impl IncrementalPairCounter {
    pub fn new(eps: f64, metric: Metric, ambient_dim: usize) -> Self {
        Self {
            grid: Grid::new(eps, metric, ambient_dim),
            coords: Vec::new(),
            ambient_dim,
            eps2: eps * eps,
            count: 0,
        }
    }

    /// Adds a point and returns the updated pair count.
    pub fn insert(&mut self, p: &[f64]) -> u64 {
        debug_assert_eq!(p.len(), self.ambient_dim);
        // Torus coordinates must live in [0, period) for keying and distances.
        let normalized: Vec<f64>;
        let p: &[f64] = match self.grid.metric {
            Metric::FlatTorus { period } => {
                normalized = p.iter().map(|v| v.rem_euclid(period)).collect();
                &normalized
            }
            Metric::Euclidean => p,
        };
        let idx = (self.coords.len() / self.ambient_dim) as u32;
        for cell in self.grid.neighbors(self.grid.key(p)) {
            if let Some(members) = self.grid.cells.get(&cell) {
                for &j in members {
                    let q = &self.coords
                        [j as usize * self.ambient_dim..(j as usize + 1) * self.ambient_dim];
                    let d2 = dist2(p, q, self.grid.metric);
                    if d2 > 0.0 && d2 <= self.eps2 {
                        self.count += 1;
                    }
                }
            }
        }
        self.grid.insert(p, idx);
        self.coords.extend_from_slice(p);
        self.count
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn n_points(&self) -> usize {
        self.coords.len() / self.ambient_dim
    }

    pub fn into_cloud(self, metric: Metric) -> Result<PointCloud> {
        PointCloud::new(self.coords, self.ambient_dim, metric)
    }
}

/// Number of unordered pairs at distance in (0, eps].
pub fn count_pairs(x: &PointCloud, eps: f64) -> Result<PairCount> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("eps={eps} must be > 0")));
    }
    let n = x.n();
    let eps2 = eps * eps;
    if n <= BRUTE_FORCE_LIMIT {
        let mut count = 0u64;
        for i in 0..n {
            for j in (i + 1)..n {
                let d2 = x.dist2(i, j);
                if d2 > 0.0 && d2 <= eps2 {
                    count += 1;
                }
            }
        }
        return Ok(PairCount { eps, count });
    }

    let mut grid = Grid::new(eps, x.metric(), x.ambient_dim());
    for (i, p) in x.rows().enumerate() {
        grid.insert(p, i as u32);
    }
    let mut count = 0u64;
    for (&key, members) in &grid.cells {
        // Pairs within the cell.
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                let d2 = x.dist2(i as usize, j as usize);
                if d2 > 0.0 && d2 <= eps2 {
                    count += 1;
                }
            }
        }
        // Pairs with strictly larger neighbor cells; each unordered cell
        // pair is visited exactly once.
        for other in grid.neighbors(key) {
            if other <= key {
                continue;
            }
            if let Some(rhs) = grid.cells.get(&other) {
                for &i in members {
                    for &j in rhs {
                        let d2 = x.dist2(i as usize, j as usize);
                        if d2 > 0.0 && d2 <= eps2 {
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(PairCount { eps, count })
}

/// For each point, the indices of all other points within eps (positive
/// distance only), each list in increasing index order.
pub fn neighbor_lists(x: &PointCloud, eps: f64) -> Result<Vec<Vec<u32>>> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("eps={eps} must be > 0")));
    }
    let n = x.n();
    let eps2 = eps * eps;
    if n <= BRUTE_FORCE_LIMIT {
        let mut out = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d2 = x.dist2(i, j);
                if d2 > 0.0 && d2 <= eps2 {
                    out[i].push(j as u32);
                    out[j].push(i as u32);
                }
            }
        }
        return Ok(out);
    }
    let mut grid = Grid::new(eps, x.metric(), x.ambient_dim());
    for (i, p) in x.rows().enumerate() {
        grid.insert(p, i as u32);
    }
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let p = x.point(i);
            let mut list = Vec::new();
            for cell in grid.neighbors(grid.key(p)) {
                if let Some(members) = grid.cells.get(&cell) {
                    for &j in members {
                        if j as usize != i {
                            let d2 = x.dist2(i, j as usize);
                            if d2 > 0.0 && d2 <= eps2 {
                                list.push(j);
                            }
                        }
                    }
                }
            }
            list.sort_unstable();
            list
        })
        .collect())
}

/// Pair counts at each scale of a strictly increasing grid.
pub fn pair_count_curve(x: &PointCloud, eps_list: &[f64]) -> Result<Vec<PairCount>> {
    if eps_list.windows(2).any(|w| w[0] >= w[1]) || eps_list.first().is_some_and(|&e| e <= 0.0) {
        return Err(Error::Domain("scale grid must be positive and strictly increasing".into()));
    }
    eps_list.iter().map(|&e| count_pairs(x, e)).collect()
}

/// Result of a two-scale estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DimEstimate {
    /// Both counts positive: slope and its nearest integer (half rounds up).
    Defined { raw_slope: f64, rounded: i64 },
    /// Pairs at eps1 but none at eps2: the data only bounds the dimension
    /// from below. `lower` is the floor of the slope computed with count 1
    /// at the small scale.
    GreaterThan { lower: i64, limit_slope: f64 },
    /// No pairs at eps1: nothing to estimate.
    Undefined,
}

impl DimEstimate {
    /// Integer estimate when one exists.
    pub fn rounded(&self) -> Option<i64> {
        match self {
            DimEstimate::Defined { rounded, .. } => Some(*rounded),
            _ => None,
        }
    }

    pub fn raw_slope(&self) -> Option<f64> {
        match self {
            DimEstimate::Defined { raw_slope, .. } => Some(*raw_slope),
            _ => None,
        }
    }
}

/// Nearest integer with halves rounding up (toward +inf).
pub(crate) fn round_half_up(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}

/// Two-scale slope estimate from the pair counts at s.eps1 and s.eps2.
pub fn dim_corr(x: &PointCloud, s: ScalePair) -> Result<DimEstimate> {
    let c1 = count_pairs(x, s.eps1)?.count;
    let c2 = count_pairs(x, s.eps2)?.count;
    Ok(dim_corr_from_counts(c1, c2, s))
}

/// The same estimate from precomputed counts.
pub fn dim_corr_from_counts(c1: u64, c2: u64, s: ScalePair) -> DimEstimate {
    if c1 == 0 {
        return DimEstimate::Undefined;
    }
    if c2 == 0 {
        let limit_slope = (c1 as f64).ln() / s.log_ratio();
        return DimEstimate::GreaterThan { lower: limit_slope.floor() as i64, limit_slope };
    }
    let raw_slope = ((c1 as f64).ln() - (c2 as f64).ln()) / s.log_ratio();
    DimEstimate::Defined { raw_slope, rounded: round_half_up(raw_slope) }
}

/// One-scale correlation-integral slope: log of the ordered-pair fraction
/// over log eps.
pub fn dim_gp(x: &PointCloud, eps: f64) -> Result<f64> {
    let c = count_pairs(x, eps)?.count;
    if c == 0 {
        return Err(Error::Undefined(format!("no pairs at eps={eps}")));
    }
    let n = x.n() as f64;
    Ok((2.0 * c as f64 / (n * (n - 1.0))).ln() / eps.ln())
}

/// Outcome of the reach-free hypothesis test.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ReachFreeOutcome {
    pub estimate: DimEstimate,
    /// Working scale: smallest radius capturing the budgeted pair count.
    pub r_big: f64,
    /// Small scale, r_big shrunk by the standard eps2/eps1 ratio for d.
    pub r_small: f64,
    pub n_pairs_budget: u64,
    pub pass: bool,
}

/// Tests the hypothesis "the cloud is d-dimensional" without any reach
/// assumption: picks the smallest scale R with enough pairs for d, shrinks
/// it by the standard ratio, and checks the two-scale estimate.
pub fn reach_free_test(
    x: &PointCloud,
    d: u32,
    table: &[HeuristicPlan],
) -> Result<ReachFreeOutcome> {
    let plan = table
        .iter()
        .find(|p| p.d == d)
        .ok_or_else(|| Error::Domain(format!("no plan for d={d} in the table")))?;
    let n_pairs = plan.n_pairs;
    let mut d2 = x.positive_dist2();
    if (d2.len() as u64) < n_pairs {
        return Err(Error::InsufficientData(format!(
            "cloud has {} positive-distance pairs, hypothesis d={d} needs {n_pairs}",
            d2.len()
        )));
    }
    let k = (n_pairs - 1) as usize;
    let (_, kth, _) = d2.select_nth_unstable_by(k, |a, b| a.partial_cmp(b).unwrap());
    let r_big = kth.sqrt();
    let r_small = plan.scales.ratio() * r_big;
    let estimate = dim_corr(x, ScalePair::new(r_big, r_small)?)?;
    let pass = estimate.rounded() == Some(d as i64);
    Ok(ReachFreeOutcome { estimate, r_big, r_small, n_pairs_budget: n_pairs, pass })
}

/// Log-log pair-count curve. Zero counts carry the sentinel -1 on the y axis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LogLogCurve {
    /// (log eps, log count) with natural logs; y = -1 where the count is 0.
    pub points: Vec<(f64, f64)>,
}

pub const LOGLOG_SENTINEL: f64 = -1.0;

/// Default scale grid for [`loglog_points`]: 50 log-uniform scales between
/// the 1st percentile of the positive pairwise distances and the diameter.
pub fn default_loglog_grid(x: &PointCloud) -> Result<Vec<f64>> {
    let mut d2 = x.positive_dist2();
    if d2.is_empty() {
        return Err(Error::InsufficientData("cloud has no positive-distance pairs".into()));
    }
    d2.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let lo = d2[((d2.len() - 1) as f64 * 0.01).floor() as usize].sqrt();
    let hi = d2[d2.len() - 1].sqrt();
    if lo >= hi {
        return Err(Error::InsufficientData("degenerate distance range".into()));
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    Ok((0..50)
        .map(|k| (llo + (lhi - llo) * k as f64 / 49.0).exp())
        .collect())
}

/// Log-log curve of pair counts over a scale grid.
pub fn loglog_points(x: &PointCloud, eps_grid: &[f64]) -> Result<LogLogCurve> {
    let counts = pair_count_curve(x, eps_grid)?;
    Ok(LogLogCurve {
        points: counts
            .iter()
            .map(|pc| {
                let y = if pc.count == 0 { LOGLOG_SENTINEL } else { (pc.count as f64).ln() };
                (pc.eps.ln(), y)
            })
            .collect(),
    })
}

impl LogLogCurve {
    /// Least-squares slope over the defined points whose log-scale lies in
    /// [center - w/2, center + w/2].
    pub fn window_slope(&self, center: f64, width: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .filter(|(lx, ly)| *ly != LOGLOG_SENTINEL && (lx - center).abs() <= width / 2.0)
            .copied()
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    }

    /// Slope over one decade centered in the middle of the grid.
    pub fn central_decade_slope(&self) -> Option<f64> {
        let (first, last) = (self.points.first()?, self.points.last()?);
        self.window_slope(0.5 * (first.0 + last.0), 10f64.ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn euclid(rows: &[Vec<f64>]) -> PointCloud {
        PointCloud::from_rows(rows, Metric::Euclidean).unwrap()
    }

    #[test]
    fn boundary_pairs_counted_inclusively() {
        let x = euclid(&[vec![0.0], vec![1.0]]);
        assert_eq!(count_pairs(&x, 1.0).unwrap().count, 1);
        assert_eq!(count_pairs(&x, 0.999_999).unwrap().count, 0);
    }

    #[test]
    fn collinear_counts() {
        let x = euclid(&[vec![0.0], vec![1.0], vec![2.0]]);
        assert_eq!(count_pairs(&x, 1.0).unwrap().count, 2);
        assert_eq!(count_pairs(&x, 2.0).unwrap().count, 3);
    }

    #[test]
    fn duplicates_are_not_pairs() {
        let x = euclid(&[vec![1.0, 2.0], vec![1.0, 2.0], vec![1.5, 2.0]]);
        assert_eq!(count_pairs(&x, 1.0).unwrap().count, 2);
    }

    #[test]
    fn flat_torus_wraps() {
        let p = 2.0 * std::f64::consts::PI;
        let x = PointCloud::from_rows(
            &[vec![0.0], vec![p - 0.1]],
            Metric::FlatTorus { period: p },
        )
        .unwrap();
        assert_abs_diff_eq!(x.dist2(0, 1).sqrt(), 0.1, epsilon = 1e-12);
        assert_eq!(count_pairs(&x, 0.1).unwrap().count, 1);
    }

    #[test]
    fn grid_matches_brute_force_mid_size() {
        // One deterministic mid-size check here; the property suite drives
        // many randomized ones.
        let mut rows = Vec::new();
        let mut s = 0x2545F4914F6CDD1Du64;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..300 {
            rows.push(vec![next() * 4.0, next() * 4.0, next() * 4.0]);
        }
        let x = euclid(&rows);
        for eps in [0.2, 0.5, 1.0] {
            let fast = count_pairs(&x, eps).unwrap().count;
            let mut brute = 0u64;
            for i in 0..x.n() {
                for j in (i + 1)..x.n() {
                    let d2 = x.dist2(i, j);
                    if d2 > 0.0 && d2 <= eps * eps {
                        brute += 1;
                    }
                }
            }
            assert_eq!(fast, brute, "eps={eps}");
        }
    }

    #[test]
    fn incremental_counter_agrees_with_batch() {
        let p = 2.0 * std::f64::consts::PI;
        let mut rows = Vec::new();
        let mut s = 0xDEADBEEFu64;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            rows.push(vec![next() * p, next() * p]);
        }
        let metric = Metric::FlatTorus { period: p };
        let mut inc = IncrementalPairCounter::new(0.7, metric, 2);
        for r in &rows {
            inc.insert(r);
        }
        let x = PointCloud::from_rows(&rows, metric).unwrap();
        assert_eq!(inc.count(), count_pairs(&x, 0.7).unwrap().count);
    }

    #[test]
    fn neighbor_lists_consistent_with_pair_counts() {
        let mut rows = Vec::new();
        let mut s = 0xA5A5A5A5u64;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..150 {
            rows.push(vec![next() * 3.0, next() * 3.0]);
        }
        let x = euclid(&rows);
        for eps in [0.3, 0.8] {
            let lists = neighbor_lists(&x, eps).unwrap();
            let degree_sum: u64 = lists.iter().map(|l| l.len() as u64).sum();
            assert_eq!(degree_sum, 2 * count_pairs(&x, eps).unwrap().count);
            // Symmetry and order.
            for (i, l) in lists.iter().enumerate() {
                assert!(l.windows(2).all(|w| w[0] < w[1]));
                for &j in l {
                    assert!(lists[j as usize].contains(&(i as u32)));
                }
            }
        }
        // Brute-force regime agrees as well.
        let small = euclid(&rows[..40].to_vec());
        let lists = neighbor_lists(&small, 0.5).unwrap();
        let degree_sum: u64 = lists.iter().map(|l| l.len() as u64).sum();
        assert_eq!(degree_sum, 2 * count_pairs(&small, 0.5).unwrap().count);
    }

    #[test]
    fn curve_is_monotone_and_saturates() {
        let x = euclid(&[vec![0.0], vec![0.4], vec![1.1], vec![3.0]]);
        let curve = pair_count_curve(&x, &[0.5, 1.0, 2.0, 4.0]).unwrap();
        let counts: Vec<u64> = curve.iter().map(|c| c.count).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*counts.last().unwrap(), 6); // n(n-1)/2
        assert!(pair_count_curve(&x, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn slope_arithmetic() {
        let s = ScalePair::new(0.54, 0.23).unwrap();
        match dim_corr_from_counts(100, 18, s) {
            DimEstimate::Defined { raw_slope, rounded } => {
                assert_abs_diff_eq!(raw_slope, 2.009_160_937_296_533_3, epsilon = 1e-12);
                assert_eq!(rounded, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        // Equal counts give slope zero.
        assert_eq!(dim_corr_from_counts(7, 7, s).raw_slope(), Some(0.0));
    }

    #[test]
    fn degenerate_counts() {
        let s = ScalePair::new(1.5, 0.19).unwrap();
        assert_eq!(dim_corr_from_counts(0, 0, s), DimEstimate::Undefined);
        match dim_corr_from_counts(30, 0, s) {
            DimEstimate::GreaterThan { lower, .. } => assert_eq!(lower, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rounding_half_goes_up() {
        assert_eq!(round_half_up(2.5), 3);
        assert_eq!(round_half_up(2.499_999_9), 2);
        assert_eq!(round_half_up(-0.5), 0);
    }

    #[test]
    fn slope_invariances() {
        let rows = vec![
            vec![0.0, 0.0],
            vec![0.3, 0.1],
            vec![0.7, 0.4],
            vec![1.0, 1.0],
            vec![0.2, 0.8],
            vec![0.9, 0.2],
        ];
        let x = euclid(&rows);
        let s = ScalePair::new(0.9, 0.3).unwrap();
        let base = dim_corr(&x, s).unwrap();

        // Rotation + translation.
        let (c, sn) = (0.6f64.cos(), 0.6f64.sin());
        let moved: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| vec![c * r[0] - sn * r[1] + 5.0, sn * r[0] + c * r[1] - 2.0])
            .collect();
        assert_eq!(dim_corr(&euclid(&moved), s).unwrap(), base);

        // Simultaneous rescaling of cloud and scales.
        let lam = 3.7;
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| vec![lam * r[0], lam * r[1]]).collect();
        let s_scaled = ScalePair::new(s.eps1 * lam, s.eps2 * lam).unwrap();
        let rescaled = dim_corr(&euclid(&scaled), s_scaled).unwrap();
        assert_abs_diff_eq!(
            rescaled.raw_slope().unwrap(),
            base.raw_slope().unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn gp_degenerate_cases() {
        let x = euclid(&[vec![0.0], vec![0.3]]);
        // The only ordered-pair fraction is 1, so the slope is 0.
        assert_abs_diff_eq!(dim_gp(&x, 0.5).unwrap(), 0.0, epsilon = 1e-12);
        assert!(dim_gp(&x, 0.1).is_err());
    }

    #[test]
    fn reach_free_radius_is_exact_order_statistic() {
        let rows = vec![vec![0.0], vec![0.1], vec![0.35], vec![0.9], vec![2.0]];
        let x = euclid(&rows);
        let mut d: Vec<f64> = x.positive_dist2().iter().map(|v| v.sqrt()).collect();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let plan = HeuristicPlan {
            d: 1,
            scales: ScalePair::new(1.5, 0.19).unwrap(),
            confidence: 0.9,
            n_pairs: 4,
            mean_ed: 0.0,
            sigma_d: 0.0,
            gap_d: 0.0,
        };
        let out = reach_free_test(&x, 1, &[plan]).unwrap();
        assert_abs_diff_eq!(out.r_big, d[3], epsilon = 1e-15);
        assert_abs_diff_eq!(out.r_small, d[3] * 0.19 / 1.5, epsilon = 1e-15);
    }

    #[test]
    fn loglog_sentinels_and_plateau() {
        let x = euclid(&[vec![0.0], vec![1.0], vec![2.0]]);
        let curve = loglog_points(&x, &[0.5, 1.5, 3.0]).unwrap();
        assert_eq!(curve.points[0].1, LOGLOG_SENTINEL);
        assert_abs_diff_eq!(curve.points[1].1, 2.0f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(curve.points[2].1, 3.0f64.ln(), epsilon = 1e-12);
        // Defined part is non-decreasing.
        assert!(curve.points[1].1 <= curve.points[2].1);
    }
}
