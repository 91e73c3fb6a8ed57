//! Euclidean and spherical cones over finite metric measure spaces.
//!
//! A [`ConeGrid`] discretizes a cone as the product of a base space with a
//! radial node list, plus the collapsed fibres (apex `O` for the Euclidean
//! cone, poles `S` and `N` for the spherical one). Radial cells are the
//! Voronoi cells of the nodes on the radial axis; their masses integrate
//! `s^N` exactly and `sin^N s` with 64-point Gauss-Legendre per cell.

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::path::Path;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mms::{self, json_error, FiniteMetricMeasureSpace, SpaceFile};
use crate::par;

/// Base distances up to `pi + BASE_DIAMETER_TOL` are accepted and clamped.
pub const BASE_DIAMETER_TOL: f64 = 1e-9;

const QUAD_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeKind {
    Euclidean,
    Spherical,
}

impl ConeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConeKind::Euclidean => "euclidean",
            ConeKind::Spherical => "spherical",
        }
    }
}

/// A point of a cone: a collapsed fibre or a (base point, radius) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ConePoint {
    /// Radius 0: the Euclidean apex `O` or the spherical south pole `S`.
    Apex,
    /// Radius `pi` on a spherical cone.
    NorthPole,
    Fiber {
        base: usize,
        radial: f64,
    },
}

impl ConePoint {
    pub fn radial(self) -> f64 {
        match self {
            ConePoint::Apex => 0.0,
            ConePoint::NorthPole => PI,
            ConePoint::Fiber { radial, .. } => radial,
        }
    }

    pub fn base(self) -> Option<usize> {
        match self {
            ConePoint::Fiber { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn is_singular(self) -> bool {
        !matches!(self, ConePoint::Fiber { .. })
    }
}

/// Cone distance via the cosine law, `sqrt(s^2 + t^2 - 2 s t cos d)`.
pub fn eucl_cone_dist(s: f64, t: f64, base_d: f64) -> Result<f64> {
    check_radius(s, f64::INFINITY)?;
    check_radius(t, f64::INFINITY)?;
    Ok(eucl_dist_unchecked(s, t, clamp_base(base_d)?))
}

/// Spherical cone distance, `arccos(cos s cos t + sin s sin t cos d)`.
pub fn sph_cone_dist(s: f64, t: f64, base_d: f64) -> Result<f64> {
    check_radius(s, PI)?;
    check_radius(t, PI)?;
    Ok(sph_dist_unchecked(s, t, clamp_base(base_d)?))
}

fn check_radius(r: f64, max: f64) -> Result<()> {
    if r >= 0.0 && r <= max && !r.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius {r} outside [0, {max}]")))
    }
}

fn clamp_base(d: f64) -> Result<f64> {
    if !(0.0..=PI + BASE_DIAMETER_TOL).contains(&d) {
        return Err(Error::Domain(format!("base distance {d} outside [0, pi]")));
    }
    Ok(d.min(PI))
}

// (s - t)^2 + 4 s t sin^2(d/2) avoids cancellation for nearby points.
#[inline]
fn eucl_dist_unchecked(s: f64, t: f64, d: f64) -> f64 {
    let h = (0.5 * d).sin();
    ((s - t) * (s - t) + 4.0 * s * t * h * h).sqrt()
}

// Half-angle form: sin^2(D/2) and cos^2(D/2) are both sums of nonnegative
// terms, so atan2 stays accurate near 0 and near pi.
#[inline]
fn sph_dist_unchecked(s: f64, t: f64, d: f64) -> f64 {
    let ss = s.sin() * t.sin();
    let a = (0.5 * (s - t)).sin().powi(2) + ss * (0.5 * d).sin().powi(2);
    let b = (0.5 * (s + t)).cos().powi(2) + ss * (0.5 * d).cos().powi(2);
    2.0 * a.max(0.0).sqrt().atan2(b.max(0.0).sqrt())
}

/// Ricci curvature of the punctured Euclidean cone in direction
/// `v + lambda d/dr`, given the base Ricci value `ric_vv = Ric_M(v, v)` and
/// `v_norm2 = |v|^2` over an `n`-dimensional base. Radial directions are
/// flat, so `lambda` does not enter.
pub fn cone_ricci(ric_vv: f64, v_norm2: f64, _lambda: f64, n: u32) -> f64 {
    debug_assert!(v_norm2 >= 0.0 && n >= 1);
    ric_vv - f64::from(n - 1) * v_norm2
}

/// Ricci curvature and squared norm of `v + lambda d/dr` at radius `r` on
/// the punctured spherical cone over an `n`-dimensional base.
pub fn sph_cone_ricci(
    ric_vv: f64,
    v_norm2: f64,
    lambda: f64,
    r: f64,
    n: u32,
) -> Result<(f64, f64)> {
    if !(r > 0.0 && r < PI) {
        return Err(Error::Domain(format!(
            "radius {r} is not in (0, pi); the poles are singular"
        )));
    }
    let n = f64::from(n);
    let ricci = ric_vv + (1.0 - n * r.cos().powi(2)) * v_norm2 + n * lambda * lambda;
    let norm2 = lambda * lambda + r.sin().powi(2) * v_norm2;
    Ok((ricci, norm2))
}

fn gauss_legendre() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(QUAD_POINTS).expect("nonzero")))
}

/// `int_a^b s^N ds`.
fn power_mass(a: f64, b: f64, n: f64) -> f64 {
    (b.powf(n + 1.0) - a.powf(n + 1.0)) / (n + 1.0)
}

/// `int_a^b sin^N s ds` by Gauss-Legendre.
fn sine_mass(a: f64, b: f64, n: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    gauss_legendre().integrate(a, b, |s| s.sin().max(0.0).powf(n))
}

/// A discretized cone.
#[derive(Debug, Clone)]
pub struct ConeGrid {
    kind: ConeKind,
    n_exp: f64,
    radial_grid: Vec<f64>,
    cells: Vec<(f64, f64)>,
    base: FiniteMetricMeasureSpace,
    base_ref: String,
    points: Vec<ConePoint>,
    space: FiniteMetricMeasureSpace,
    warnings: Vec<String>,
}

/// Builds the `N`-Euclidean cone over `base` on the given radial nodes.
pub fn build_eucl_cone(
    base: &FiniteMetricMeasureSpace,
    radial_grid: &[f64],
    n: f64,
) -> Result<ConeGrid> {
    ConeGrid::build(ConeKind::Euclidean, base, radial_grid, n, "inline")
}

/// Builds the `N`-spherical cone over `base` on radial nodes in `(0, pi)`.
pub fn build_sph_cone(
    base: &FiniteMetricMeasureSpace,
    radial_grid: &[f64],
    n: f64,
) -> Result<ConeGrid> {
    ConeGrid::build(ConeKind::Spherical, base, radial_grid, n, "inline")
}

/// `cells` nodes at cell centres of a uniform partition of `(0, rmax]`.
pub fn uniform_radial_grid(cells: usize, rmax: f64) -> Vec<f64> {
    let h = rmax / cells as f64;
    (0..cells).map(|k| (k as f64 + 0.5) * h).collect()
}

impl ConeGrid {
    pub fn build(
        kind: ConeKind,
        base: &FiniteMetricMeasureSpace,
        radial_grid: &[f64],
        n: f64,
        base_ref: &str,
    ) -> Result<ConeGrid> {
        if !(n >= 1.0) || !n.is_finite() {
            return Err(Error::Domain(format!(
                "cone exponent N must be >= 1, got {n}"
            )));
        }
        let mut warnings = Vec::new();
        let nb = base.len();
        for i in 0..nb {
            for j in 0..nb {
                let d = base.d(i, j);
                if d > PI + BASE_DIAMETER_TOL {
                    return Err(Error::DiameterTooLarge { i, j, distance: d });
                }
            }
        }
        if let Some((i, j)) = (0..nb)
            .flat_map(|i| (0..nb).map(move |j| (i, j)))
            .find(|&(i, j)| base.d(i, j) > PI)
        {
            warnings.push(format!(
                "base distance d({i},{j}) = {} exceeds pi and was clamped",
                base.d(i, j)
            ));
        }
        let rmax = match kind {
            ConeKind::Euclidean => f64::INFINITY,
            ConeKind::Spherical => PI,
        };
        for (k, &r) in radial_grid.iter().enumerate() {
            if !(r > 0.0 && r < rmax) {
                return Err(Error::Domain(format!(
                    "radial node {k} = {r} outside (0, {rmax})"
                )));
            }
            if k > 0 && r <= radial_grid[k - 1] {
                return Err(Error::Domain(format!(
                    "radial grid not strictly increasing at node {k}"
                )));
            }
        }

        let cells = radial_cells(kind, radial_grid);
        let base_mass = base.total_mass();
        let cell_mass = |a: f64, b: f64| match kind {
            ConeKind::Euclidean => power_mass(a, b, n),
            ConeKind::Spherical => sine_mass(a, b, n),
        };

        let mut points = Vec::with_capacity(1 + nb * radial_grid.len() + 1);
        let mut weight = Vec::with_capacity(points.capacity());
        let mut labels = Vec::with_capacity(points.capacity());
        let first_lower = cells.first().map(|c| c.0);
        points.push(ConePoint::Apex);
        labels.push(match kind {
            ConeKind::Euclidean => "O".to_string(),
            ConeKind::Spherical => "S".to_string(),
        });
        weight.push(match (kind, first_lower) {
            (_, Some(a)) => base_mass * cell_mass(0.0, a),
            // No radial cells: the apex carries the base mass.
            (ConeKind::Euclidean, None) => base_mass,
            (ConeKind::Spherical, None) => base_mass * sine_mass(0.0, 0.5 * PI, n),
        });
        for (k, (&r, &(a, b))) in radial_grid.iter().zip(&cells).enumerate() {
            let m = cell_mass(a, b);
            for bi in 0..nb {
                points.push(ConePoint::Fiber {
                    base: bi,
                    radial: r,
                });
                weight.push(base.weight(bi) * m);
                labels.push(format!("{}@{k}", base.labels()[bi]));
            }
        }
        if kind == ConeKind::Spherical {
            let upper = cells.last().map(|c| c.1).unwrap_or(0.5 * PI);
            points.push(ConePoint::NorthPole);
            labels.push("N".to_string());
            weight.push(base_mass * sine_mass(upper, PI, n));
        }

        let np = points.len();
        let mut dist = vec![0.0; np * np];
        let pts = &points;
        par::fill_rows(&mut dist, np, |i, row| {
            for (j, out) in row.iter_mut().enumerate() {
                *out = point_dist(kind, base, pts[i], pts[j]);
            }
        });
        let space = FiniteMetricMeasureSpace::new(labels, dist, weight)?;
        Ok(ConeGrid {
            kind,
            n_exp: n,
            radial_grid: radial_grid.to_vec(),
            cells,
            base: base.clone(),
            base_ref: base_ref.to_string(),
            points,
            space,
            warnings,
        })
    }

    pub fn kind(&self) -> ConeKind {
        self.kind
    }

    /// Measure exponent `N`.
    pub fn exponent(&self) -> f64 {
        self.n_exp
    }

    pub fn radial_grid(&self) -> &[f64] {
        &self.radial_grid
    }

    /// Radial cell `[lower, upper]` of each node.
    pub fn cells(&self) -> &[(f64, f64)] {
        &self.cells
    }

    pub fn base(&self) -> &FiniteMetricMeasureSpace {
        &self.base
    }

    pub fn base_ref(&self) -> &str {
        &self.base_ref
    }

    pub fn space(&self) -> &FiniteMetricMeasureSpace {
        &self.space
    }

    pub fn points(&self) -> &[ConePoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> ConePoint {
        self.points[i]
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the product point at radial node `k` over base point `b`.
    pub fn index_of(&self, b: usize, k: usize) -> usize {
        1 + k * self.base.len() + b
    }

    /// Radial node index of a product point.
    pub fn radial_index(&self, i: usize) -> Option<usize> {
        match self.points[i] {
            ConePoint::Fiber { .. } => Some((i - 1) / self.base.len()),
            _ => None,
        }
    }

    /// Indices of the collapsed fibres (apex, or both poles).
    pub fn singular_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.points[i].is_singular())
            .collect()
    }

    /// Index of the radial node closest to `r`.
    pub fn nearest_radial_node(&self, r: f64) -> Option<usize> {
        (0..self.radial_grid.len()).min_by(|&a, &b| {
            (self.radial_grid[a] - r)
                .abs()
                .total_cmp(&(self.radial_grid[b] - r).abs())
        })
    }

    pub fn radial_spacing(&self) -> f64 {
        self.cells.iter().map(|(a, b)| b - a).fold(0.0, f64::max)
    }

    /// Largest side of a grid cell: the larger of the radial cell width and
    /// the cone distance between neighbouring base points at that radius.
    pub fn max_spacing(&self) -> f64 {
        let base_step = self.base.mesh_size();
        self.radial_grid
            .iter()
            .zip(&self.cells)
            .map(|(&r, &(a, b))| {
                let across = match self.kind {
                    ConeKind::Euclidean => eucl_dist_unchecked(r, r, base_step.min(PI)),
                    ConeKind::Spherical => sph_dist_unchecked(r, r, base_step.min(PI)),
                };
                (b - a).max(across)
            })
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        let mut file = SpaceFile::from(&self.space);
        let meta = GridMeta {
            kind: self.kind,
            n: self.n_exp,
            radial_grid: self.radial_grid.clone(),
            base_ref: self.base_ref.clone(),
            base: serde_json::to_value(SpaceFile::from(&self.base)).expect("base serializes"),
        };
        file.meta = Some(serde_json::to_value(meta).expect("meta serializes"));
        serde_json::to_string(&file).expect("grid serializes")
    }

    /// Parses a grid file, rebuilding the cone from its metadata and
    /// checking the stored distances and weights against the rebuild.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpaceFile = serde_json::from_str(text).map_err(|e| json_error(&e))?;
        let meta_value = file.meta.clone().ok_or_else(|| Error::Parse {
            line: 1,
            field: "meta".into(),
            message: "cone grid file needs a meta block".into(),
        })?;
        let meta: GridMeta = serde_json::from_value(meta_value).map_err(|e| Error::Parse {
            line: 1,
            field: "meta".into(),
            message: e.to_string(),
        })?;
        let base_file: SpaceFile = serde_json::from_value(meta.base).map_err(|e| Error::Parse {
            line: 1,
            field: "meta.base".into(),
            message: e.to_string(),
        })?;
        let base = base_file.into_space(text)?;
        let report = mms::validate(&base);
        if !report.is_empty() {
            return Err(Error::Validation(report));
        }
        let stored = file.into_space(text)?;
        let grid = ConeGrid::build(meta.kind, &base, &meta.radial_grid, meta.n, &meta.base_ref)?;
        if stored.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: stored.len(),
            });
        }
        let bad_dist = stored
            .dist_matrix()
            .iter()
            .zip(grid.space.dist_matrix())
            .position(|(a, b)| (a - b).abs() > 1e-12);
        if let Some(p) = bad_dist {
            let n = grid.len();
            return Err(Error::Domain(format!(
                "stored distance ({},{}) disagrees with the cone formula",
                p / n,
                p % n
            )));
        }
        if let Some(i) = (0..grid.len()).find(|&i| {
            (stored.weight(i) - grid.space.weight(i)).abs() > 1e-12 * grid.space.weight(i).max(1.0)
        }) {
            return Err(Error::Domain(format!(
                "stored weight {i} disagrees with the cone measure"
            )));
        }
        Ok(grid)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Serialize, Deserialize)]
struct GridMeta {
    kind: ConeKind,
    #[serde(rename = "N")]
    n: f64,
    radial_grid: Vec<f64>,
    base_ref: String,
    base: serde_json::Value,
}

fn radial_cells(kind: ConeKind, nodes: &[f64]) -> Vec<(f64, f64)> {
    let m = nodes.len();
    let mut cells = Vec::with_capacity(m);
    for k in 0..m {
        let lower = if k == 0 {
            0.5 * nodes[0]
        } else {
            0.5 * (nodes[k - 1] + nodes[k])
        };
        let upper = if k + 1 < m {
            0.5 * (nodes[k] + nodes[k + 1])
        } else {
            match kind {
                ConeKind::Euclidean => 2.0 * nodes[k] - lower,
                ConeKind::Spherical => 0.5 * (nodes[k] + PI),
            }
        };
        cells.push((lower, upper));
    }
    cells
}

fn point_dist(kind: ConeKind, base: &FiniteMetricMeasureSpace, p: ConePoint, q: ConePoint) -> f64 {
    let bd = match (p.base(), q.base()) {
        (Some(a), Some(b)) => base.d(a, b).min(PI),
        _ => 0.0,
    };
    match kind {
        ConeKind::Euclidean => eucl_dist_unchecked(p.radial(), q.radial(), bd),
        ConeKind::Spherical => sph_dist_unchecked(p.radial(), q.radial(), bd),
    }
}
