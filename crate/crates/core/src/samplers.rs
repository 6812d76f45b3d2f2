//! Uniform samplers for the synthetic benchmark manifolds.
//!
//! Every sampler draws points i.i.d. from the Riemannian volume form of its
//! manifold (the Gaussian from its own law). Draw sequences are fully
//! determined by a (master seed, stream) pair, so parallel trials with
//! distinct streams are reproducible regardless of scheduling.

use crate::error::{Error, Result};
use crate::estimator::{IncrementalPairCounter, Metric, PointCloud};
use crate::geometry;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

/// Deterministic RNG coordinates: a master seed shared by an experiment and
/// a stream id per trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl Seed {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self { master_seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

const DEFAULT_SCHWARZ_RESOLUTION: u32 = 64;
const SWISS_T_MIN: f64 = 1.5 * PI;
const SWISS_T_MAX: f64 = 4.5 * PI;
const SWISS_WIDTH: f64 = 21.0;

/// A synthetic manifold (or distribution) the harness can sample.
///
/// The compact string form used by the CLI: `sphere:3`, `clifford:4`,
/// `flat:2`, `rotation`, `swiss`, `swiss:raw`, `schwarz`, `schwarz:96`,
/// `gauss:4`, `product(rotation,rotation)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ManifoldSpec {
    /// Unit d-sphere in R^{d+1}.
    Sphere { d: u32 },
    /// Product of d unit circles embedded pairwise in R^{2d}.
    CliffordTorus { d: u32 },
    /// Abstract torus (R/2πZ)^d with the flat metric.
    FlatTorus { d: u32 },
    /// Circle of radius 1 rotated around the z axis at distance 2 (reach 1).
    RotationTorus,
    /// Spiral sheet (t cos t, y, t sin t), t in [1.5π, 4.5π], y in [0, 21].
    /// `corrected` draws t with density ∝ sqrt(1 + t²) for true area
    /// uniformity; otherwise t is uniform, mimicking the common generator.
    SwissRoll { corrected: bool },
    /// Triply periodic surface cos x + cos y + cos z = 0 inside the flat
    /// 3-torus, triangulated at the given grid resolution.
    SchwarzP { resolution: u32 },
    /// Standard Gaussian in R^d (not a manifold; no reference volume).
    Gaussian { d: u32 },
    /// Cartesian product with concatenated ambient coordinates.
    Product(Box<ManifoldSpec>, Box<ManifoldSpec>),
}

use ManifoldSpec::*;

impl ManifoldSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            Sphere { d } | CliffordTorus { d } | FlatTorus { d } | Gaussian { d } => {
                if *d == 0 {
                    return Err(Error::InvalidSpec(format!("{self}: dimension must be >= 1")));
                }
            }
            RotationTorus | SwissRoll { .. } => {}
            SchwarzP { resolution } => {
                if !(4..=512).contains(resolution) {
                    return Err(Error::InvalidSpec(format!(
                        "{self}: resolution must be in 4..=512"
                    )));
                }
            }
            Product(a, b) => {
                a.validate()?;
                b.validate()?;
                self.metric()?; // surfaces incompatible factor metrics
            }
        }
        Ok(())
    }

    pub fn intrinsic_dim(&self) -> u32 {
        match self {
            Sphere { d } | CliffordTorus { d } | FlatTorus { d } | Gaussian { d } => *d,
            RotationTorus | SwissRoll { .. } | SchwarzP { .. } => 2,
            Product(a, b) => a.intrinsic_dim() + b.intrinsic_dim(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Sphere { d } => *d as usize + 1,
            CliffordTorus { d } => 2 * *d as usize,
            FlatTorus { d } | Gaussian { d } => *d as usize,
            RotationTorus | SwissRoll { .. } | SchwarzP { .. } => 3,
            Product(a, b) => a.ambient_dim() + b.ambient_dim(),
        }
    }

    /// Ambient distance law. Products must combine factors living in the
    /// same kind of ambient space; a wrapped factor next to an unwrapped one
    /// has no common PointCloud metric and is rejected.
    pub fn metric(&self) -> Result<Metric> {
        match self {
            FlatTorus { .. } | SchwarzP { .. } => Ok(Metric::FlatTorus { period: TAU }),
            Sphere { .. } | CliffordTorus { .. } | RotationTorus | SwissRoll { .. }
            | Gaussian { .. } => Ok(Metric::Euclidean),
            Product(a, b) => {
                let (ma, mb) = (a.metric()?, b.metric()?);
                if ma == mb {
                    Ok(ma)
                } else {
                    Err(Error::InvalidSpec(format!(
                        "product factors {a} and {b} have incompatible ambient metrics"
                    )))
                }
            }
        }
    }

    /// Total Riemannian volume, closed-form where available; the triangulated
    /// surface reports its mesh area.
    pub fn reference_volume(&self) -> Result<f64> {
        match self {
            Sphere { d } => Ok(geometry::sphere_surface_measure(d + 1)),
            CliffordTorus { d } | FlatTorus { d } => Ok(TAU.powi(*d as i32)),
            RotationTorus => Ok(8.0 * PI * PI), // Pappus: 2π·1 times 2π·2
            SwissRoll { .. } => {
                Ok(SWISS_WIDTH * (swiss_arclength(SWISS_T_MAX) - swiss_arclength(SWISS_T_MIN)))
            }
            SchwarzP { resolution } => Ok(schwarz_mesh(*resolution)?.total_area),
            Gaussian { .. } => {
                Err(Error::Domain(format!("{self} has infinite support, no reference volume")))
            }
            Product(a, b) => Ok(a.reference_volume()? * b.reference_volume()?),
        }
    }

    /// One draw. The caller owns the RNG so consecutive points of a cloud
    /// come from a single deterministic stream.
    pub fn sample_one(&self, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        Ok(match self {
            Sphere { d } => {
                let n = *d as usize + 1;
                loop {
                    let v: Vec<f64> =
                        (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                    let norm2: f64 = v.iter().map(|x| x * x).sum();
                    if norm2 > 1e-24 {
                        let norm = norm2.sqrt();
                        break v.into_iter().map(|x| x / norm).collect();
                    }
                }
            }
            CliffordTorus { d } => {
                let mut out = Vec::with_capacity(2 * *d as usize);
                for _ in 0..*d {
                    let theta = TAU * rng.gen::<f64>();
                    out.push(theta.cos());
                    out.push(theta.sin());
                }
                out
            }
            FlatTorus { d } => (0..*d).map(|_| TAU * rng.gen::<f64>()).collect(),
            RotationTorus => {
                let u = TAU * rng.gen::<f64>();
                // Area element is (2 + cos v) du dv: accept v with that weight.
                let v = loop {
                    let v = TAU * rng.gen::<f64>();
                    if rng.gen::<f64>() <= (2.0 + v.cos()) / 3.0 {
                        break v;
                    }
                };
                let ring = 2.0 + v.cos();
                vec![ring * u.cos(), ring * u.sin(), v.sin()]
            }
            SwissRoll { corrected } => {
                let t = if *corrected {
                    // Area element sqrt(1 + t²) dt dy.
                    let env = (1.0 + SWISS_T_MAX * SWISS_T_MAX).sqrt();
                    loop {
                        let t = SWISS_T_MIN + (SWISS_T_MAX - SWISS_T_MIN) * rng.gen::<f64>();
                        if env * rng.gen::<f64>() <= (1.0 + t * t).sqrt() {
                            break t;
                        }
                    }
                } else {
                    SWISS_T_MIN + (SWISS_T_MAX - SWISS_T_MIN) * rng.gen::<f64>()
                };
                let y = SWISS_WIDTH * rng.gen::<f64>();
                vec![t * t.cos(), y, t * t.sin()]
            }
            SchwarzP { resolution } => {
                let mesh = schwarz_mesh(*resolution)?;
                mesh.sample_point(rng).to_vec()
            }
            Gaussian { d } => {
                (0..*d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
            }
            Product(a, b) => {
                let mut out = a.sample_one(rng)?;
                out.extend(b.sample_one(rng)?);
                out
            }
        })
    }
}

/// n i.i.d. points from the spec's distribution.
pub fn sample(spec: &ManifoldSpec, n: usize, seed: Seed) -> Result<PointCloud> {
    spec.validate()?;
    let metric = spec.metric()?;
    let ambient = spec.ambient_dim();
    let mut rng = seed.rng();
    let mut coords = Vec::with_capacity(n * ambient);
    for _ in 0..n {
        coords.extend(spec.sample_one(&mut rng)?);
    }
    PointCloud::new(coords, ambient, metric)
}

/// Adds points one at a time until the cloud holds at least `n_pairs` pairs
/// within eps1, so the returned size is minimal for this draw sequence.
/// `cap` bounds the point count to guard against scales no sample can fill.
pub fn sample_until_pairs(
    spec: &ManifoldSpec,
    eps1: f64,
    n_pairs: u64,
    seed: Seed,
    cap: u64,
) -> Result<PointCloud> {
    spec.validate()?;
    if n_pairs == 0 {
        return Err(Error::Domain("pair target must be >= 1".into()));
    }
    if !(eps1 > 0.0) {
        return Err(Error::Domain(format!("eps1={eps1} must be > 0")));
    }
    let metric = spec.metric()?;
    let mut counter = IncrementalPairCounter::new(eps1, metric, spec.ambient_dim());
    let mut rng = seed.rng();
    while counter.count() < n_pairs {
        if counter.n_points() as u64 >= cap {
            return Err(Error::CapExceeded(format!(
                "{spec}: {} points reached only {} of {n_pairs} pairs at eps1={eps1} (cap {cap})",
                counter.n_points(),
                counter.count()
            )));
        }
        counter.insert(&spec.sample_one(&mut rng)?);
    }
    counter.into_cloud(metric)
}

/// Antiderivative of sqrt(1 + t²).
fn swiss_arclength(t: f64) -> f64 {
    0.5 * (t * (1.0 + t * t).sqrt() + t.asinh())
}

// ---------------------------------------------------------------------------
// Triangulated Schwarz surface.

struct SchwarzMesh {
    /// Triangle corners.
    triangles: Vec<[[f64; 3]; 3]>,
    /// Cumulative triangle areas for proportional selection.
    cumulative: Vec<f64>,
    total_area: f64,
}

fn schwarz_mesh(resolution: u32) -> Result<Arc<SchwarzMesh>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<SchwarzMesh>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("schwarz mesh cache poisoned");
    if let Some(mesh) = guard.get(&resolution) {
        return Ok(mesh.clone());
    }
    let mesh = Arc::new(build_schwarz_mesh(resolution)?);
    guard.insert(resolution, mesh.clone());
    Ok(mesh)
}

/// Triangulates cos x + cos y + cos z = 0 over [0, 2π]³ by splitting each
/// grid cube into the six tetrahedra sharing its main diagonal and cutting
/// each tetrahedron by the linear interpolant of the field (marching
/// tetrahedra). The split direction is uniform, so neighbouring cubes agree
/// on shared faces and the mesh is watertight.
fn build_schwarz_mesh(resolution: u32) -> Result<SchwarzMesh> {
    if !(4..=512).contains(&resolution) {
        return Err(Error::InvalidSpec(format!(
            "schwarz resolution {resolution} outside 4..=512"
        )));
    }
    let m = resolution as usize;
    let h = TAU / m as f64;
    // Field values on the (m+1)³ grid; one axis table suffices by symmetry.
    let axis_cos: Vec<f64> = (0..=m).map(|i| (i as f64 * h).cos()).collect();

    // The six tetrahedra of the Kuhn split, as corner masks (bit 0 = +x,
    // bit 1 = +y, bit 2 = +z) along each axis-permutation path 000 -> 111.
    const PERMS: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut tets = [[0usize; 4]; 6];
    for (t, perm) in PERMS.iter().enumerate() {
        let mut mask = 0usize;
        tets[t][0] = 0;
        mask |= 1 << perm[0];
        tets[t][1] = mask;
        mask |= 1 << perm[1];
        tets[t][2] = mask;
        tets[t][3] = 7;
    }

    let mut triangles = Vec::new();
    let mut corner_pos = [[0.0f64; 3]; 8];
    let mut corner_val = [0.0f64; 8];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for (c, pos) in corner_pos.iter_mut().enumerate() {
                    let (di, dj, dk) = (c & 1, (c >> 1) & 1, (c >> 2) & 1);
                    *pos = [
                        (i + di) as f64 * h,
                        (j + dj) as f64 * h,
                        (k + dk) as f64 * h,
                    ];
                    corner_val[c] = axis_cos[i + di] + axis_cos[j + dj] + axis_cos[k + dk];
                }
                for tet in &tets {
                    emit_tet_triangles(tet, &corner_pos, &corner_val, &mut triangles);
                }
            }
        }
    }

    let mut cumulative = Vec::with_capacity(triangles.len());
    let mut total_area = 0.0;
    for tri in &triangles {
        total_area += triangle_area(tri);
        cumulative.push(total_area);
    }
    if !(total_area > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "schwarz triangulation at resolution {resolution} is empty"
        )));
    }
    Ok(SchwarzMesh { triangles, cumulative, total_area })
}

/// Zero-crossing of the linear interpolant on the segment a-b.
fn edge_crossing(a: [f64; 3], fa: f64, b: [f64; 3], fb: f64) -> [f64; 3] {
    let t = fa / (fa - fb);
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])]
}

fn triangle_area(tri: &[[f64; 3]; 3]) -> f64 {
    let u = [tri[1][0] - tri[0][0], tri[1][1] - tri[0][1], tri[1][2] - tri[0][2]];
    let v = [tri[2][0] - tri[0][0], tri[2][1] - tri[0][1], tri[2][2] - tri[0][2]];
    let c = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    0.5 * (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
}

fn emit_tet_triangles(
    tet: &[usize; 4],
    pos: &[[f64; 3]; 8],
    val: &[f64; 8],
    out: &mut Vec<[[f64; 3]; 3]>,
) {
    let mut neg = [0usize; 4];
    let mut pos_idx = [0usize; 4];
    let (mut nn, mut np) = (0, 0);
    for &c in tet {
        if val[c] < 0.0 {
            neg[nn] = c;
            nn += 1;
        } else {
            pos_idx[np] = c;
            np += 1;
        }
    }
    let cross = |a: usize, b: usize| edge_crossing(pos[a], val[a], pos[b], val[b]);
    match nn {
        1 => out.push([cross(neg[0], pos_idx[0]), cross(neg[0], pos_idx[1]), cross(neg[0], pos_idx[2])]),
        3 => out.push([cross(pos_idx[0], neg[0]), cross(pos_idx[0], neg[1]), cross(pos_idx[0], neg[2])]),
        2 => {
            // Quad corners in cyclic order: consecutive ones share a tet face.
            let q = [
                cross(neg[0], pos_idx[0]),
                cross(neg[0], pos_idx[1]),
                cross(neg[1], pos_idx[1]),
                cross(neg[1], pos_idx[0]),
            ];
            out.push([q[0], q[1], q[2]]);
            out.push([q[0], q[2], q[3]]);
        }
        _ => {}
    }
}

impl SchwarzMesh {
    /// Area-proportional triangle pick, uniform barycentric point, then a
    /// Newton walk along the gradient onto the exact surface.
    fn sample_point(&self, rng: &mut ChaCha8Rng) -> [f64; 3] {
        let target = rng.gen::<f64>() * self.total_area;
        let idx = self
            .cumulative
            .partition_point(|&c| c < target)
            .min(self.triangles.len() - 1);
        let [a, b, c] = self.triangles[idx];
        let (r1, r2) = (rng.gen::<f64>(), rng.gen::<f64>());
        let s = r1.sqrt();
        let (wa, wb, wc) = (1.0 - s, s * (1.0 - r2), s * r2);
        let mut p = [
            wa * a[0] + wb * b[0] + wc * c[0],
            wa * a[1] + wb * b[1] + wc * c[1],
            wa * a[2] + wb * b[2] + wc * c[2],
        ];
        for _ in 0..64 {
            let f = p[0].cos() + p[1].cos() + p[2].cos();
            if f.abs() <= 1e-9 {
                break;
            }
            let g = [-p[0].sin(), -p[1].sin(), -p[2].sin()];
            let g2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
            if g2 < 1e-18 {
                break;
            }
            let step = f / g2;
            p[0] -= step * g[0];
            p[1] -= step * g[1];
            p[2] -= step * g[2];
        }
        [p[0].rem_euclid(TAU), p[1].rem_euclid(TAU), p[2].rem_euclid(TAU)]
    }
}

// ---------------------------------------------------------------------------
// Compact string form.

impl fmt::Display for ManifoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sphere { d } => write!(f, "sphere:{d}"),
            CliffordTorus { d } => write!(f, "clifford:{d}"),
            FlatTorus { d } => write!(f, "flat:{d}"),
            RotationTorus => write!(f, "rotation"),
            SwissRoll { corrected: true } => write!(f, "swiss"),
            SwissRoll { corrected: false } => write!(f, "swiss:raw"),
            SchwarzP { resolution } if *resolution == DEFAULT_SCHWARZ_RESOLUTION => {
                write!(f, "schwarz")
            }
            SchwarzP { resolution } => write!(f, "schwarz:{resolution}"),
            Gaussian { d } => write!(f, "gauss:{d}"),
            Product(a, b) => write!(f, "product({a},{b})"),
        }
    }
}

impl FromStr for ManifoldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("product(").and_then(|r| r.strip_suffix(')')) {
            let mut depth = 0usize;
            let mut split = None;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => {
                        depth = depth.checked_sub(1).ok_or_else(|| {
                            Error::InvalidSpec(format!("unbalanced parentheses in '{s}'"))
                        })?
                    }
                    ',' if depth == 0 => {
                        split = Some(i);
                        break;
                    }
                    _ => {}
                }
            }
            let i = split.ok_or_else(|| {
                Error::InvalidSpec(format!("product needs two comma-separated factors: '{s}'"))
            })?;
            let spec = Product(
                Box::new(inner[..i].parse()?),
                Box::new(inner[i + 1..].parse()?),
            );
            spec.validate()?;
            return Ok(spec);
        }
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let dim = |a: Option<&str>| -> Result<u32> {
            let a = a.ok_or_else(|| {
                Error::InvalidSpec(format!("'{name}' needs a dimension, e.g. '{name}:2'"))
            })?;
            a.parse::<u32>()
                .map_err(|_| Error::InvalidSpec(format!("bad dimension '{a}' in '{s}'")))
        };
        let spec = match (name, arg) {
            ("sphere", a) => Sphere { d: dim(a)? },
            ("clifford", a) => CliffordTorus { d: dim(a)? },
            ("flat", a) => FlatTorus { d: dim(a)? },
            ("gauss", a) => Gaussian { d: dim(a)? },
            ("rotation", None) => RotationTorus,
            ("swiss", None) => SwissRoll { corrected: true },
            ("swiss", Some("raw")) => SwissRoll { corrected: false },
            ("schwarz", None) => SchwarzP { resolution: DEFAULT_SCHWARZ_RESOLUTION },
            ("schwarz", Some(a)) => SchwarzP {
                resolution: a.parse::<u32>().map_err(|_| {
                    Error::InvalidSpec(format!("bad resolution '{a}' in '{s}'"))
                })?,
            },
            _ => {
                return Err(Error::InvalidSpec(format!(
                    "unknown manifold '{s}' (try sphere:2, clifford:4, flat:2, rotation, \
                     swiss, schwarz, gauss:4, product(rotation,rotation))"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<ManifoldSpec> for String {
    fn from(spec: ManifoldSpec) -> String {
        spec.to_string()
    }
}

impl TryFrom<String> for ManifoldSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}
