//! Finite metric measure spaces: points, a symmetric distance matrix and a
//! nonnegative weight per point.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

/// Slack allowed in the triangle inequality for discretized metrics.
pub const TRIANGLE_TOL: f64 = 1e-9;

/// Mass tolerance for probability vectors.
pub const MASS_TOL: f64 = 1e-12;

const MAX_TRIANGLE_REPORTS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricMeasureSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    weight: Vec<f64>,
}

impl FiniteMetricMeasureSpace {
    /// Builds a space from a row-major `n x n` distance matrix. Only shapes
    /// are checked here; use [`validate`] for the metric axioms.
    pub fn new(labels: Vec<String>, dist: Vec<f64>, weight: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if weight.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: weight.len(),
            });
        }
        if dist.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: dist.len(),
            });
        }
        Ok(Self {
            labels,
            dist,
            weight,
        })
    }

    pub fn from_rows(labels: Vec<String>, rows: &[Vec<f64>], weight: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        let mut dist = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            dist.extend_from_slice(row);
        }
        Self::new(labels, dist, weight)
    }

    /// Space with default labels `p0, p1, ...`.
    pub fn unlabeled(dist: Vec<f64>, weight: Vec<f64>) -> Result<Self> {
        let labels = (0..weight.len()).map(|i| format!("p{i}")).collect();
        Self::new(labels, dist, weight)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn dist_matrix(&self) -> &[f64] {
        &self.dist
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weight[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weight
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn total_mass(&self) -> f64 {
        self.weight.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.weight[i] > 0.0).collect()
    }

    /// Largest distance from a point to its nearest distinct neighbour.
    pub fn mesh_size(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| self.d(i, j))
                    .filter(|&d| d > 0.0)
                    .fold(f64::INFINITY, f64::min)
            })
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    }

    /// Same points and distances with different weights.
    pub fn with_weights(&self, weight: Vec<f64>) -> Result<Self> {
        Self::new(self.labels.clone(), self.dist.clone(), weight)
    }

    /// Reorders points so that new point `k` is old point `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.len();
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        let weight = perm.iter().map(|&p| self.weight[p]).collect();
        let mut dist = vec![0.0; n * n];
        for (a, &pa) in perm.iter().enumerate() {
            for (b, &pb) in perm.iter().enumerate() {
                dist[a * n + b] = self.d(pa, pb);
            }
        }
        Self::new(labels, dist, weight)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SpaceFile::from(self)).expect("space serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SpaceFile = serde_json::from_str(text).map_err(|e| json_error(&e))?;
        let space = raw.into_space(text)?;
        let report = validate(&space);
        if !report.is_empty() {
            return Err(Error::Validation(report));
        }
        Ok(space)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// On-disk layout shared by plain spaces and cone grids.
#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct SpaceFile {
    pub labels: Vec<String>,
    pub dist: Vec<Vec<f64>>,
    pub weight: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

impl From<&FiniteMetricMeasureSpace> for SpaceFile {
    fn from(s: &FiniteMetricMeasureSpace) -> Self {
        let n = s.len();
        SpaceFile {
            labels: s.labels.clone(),
            dist: (0..n).map(|i| s.row(i).to_vec()).collect(),
            weight: s.weight.clone(),
            meta: None,
        }
    }
}

impl SpaceFile {
    pub(crate) fn into_space(self, text: &str) -> Result<FiniteMetricMeasureSpace> {
        let n = self.labels.len();
        let line = line_of_key(text, "dist");
        if self.weight.len() != n {
            return Err(Error::Parse {
                line: line_of_key(text, "weight"),
                field: "weight".into(),
                message: format!("{} entries, expected {n}", self.weight.len()),
            });
        }
        if self.dist.len() != n {
            return Err(Error::Parse {
                line,
                field: format!("dist[{}]", self.dist.len()),
                message: format!(
                    "missing matrix row {} (found {} of {n} rows)",
                    self.dist.len(),
                    self.dist.len()
                ),
            });
        }
        for (i, row) in self.dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse {
                    line,
                    field: format!("dist[{i}]"),
                    message: format!("row {i} has {} entries, expected {n}", row.len()),
                });
            }
        }
        FiniteMetricMeasureSpace::from_rows(self.labels, &self.dist, self.weight)
    }
}

pub(crate) fn json_error(e: &serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        field: format!("column {}", e.column()),
        message: e.to_string(),
    }
}

fn line_of_key(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    text.find(&needle)
        .map(|pos| text[..pos].matches('\n').count() + 1)
        .unwrap_or(1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NonFiniteDistance {
        i: usize,
        j: usize,
    },
    NegativeDistance {
        i: usize,
        j: usize,
        value: f64,
    },
    NonzeroDiagonal {
        i: usize,
        value: f64,
    },
    Asymmetry {
        i: usize,
        j: usize,
        dij: f64,
        dji: f64,
    },
    Triangle {
        i: usize,
        j: usize,
        k: usize,
        excess: f64,
    },
    BadWeight {
        i: usize,
        value: f64,
    },
    EmptySupport,
    DuplicateLabel {
        i: usize,
        label: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFiniteDistance { i, j } => write!(f, "d({i},{j}) is not finite"),
            Violation::NegativeDistance { i, j, value } => write!(f, "d({i},{j}) = {value} < 0"),
            Violation::NonzeroDiagonal { i, value } => write!(f, "d({i},{i}) = {value} != 0"),
            Violation::Asymmetry { i, j, dij, dji } => {
                write!(f, "asymmetry at ({i},{j}): {dij} != {dji}")
            }
            Violation::Triangle { i, j, k, excess } => {
                write!(
                    f,
                    "triangle violated: d({i},{j}) > d({i},{k}) + d({k},{j}) by {excess:.3e}"
                )
            }
            Violation::BadWeight { i, value } => {
                write!(f, "weight[{i}] = {value} is not a nonnegative number")
            }
            Violation::EmptySupport => f.write_str("no point has positive weight"),
            Violation::DuplicateLabel { i, label } => write!(f, "duplicate label {label:?} at {i}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Total triangle violations found (only the first few are listed).
    pub triangle_violations: usize,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        write!(f, "{} violation(s)", self.violations.len())?;
        for v in self.violations.iter().take(5) {
            write!(f, "; {v}")?;
        }
        Ok(())
    }
}

/// Checks all metric measure space invariants, including the O(n^3)
/// triangle inequality.
pub fn validate(space: &FiniteMetricMeasureSpace) -> ValidationReport {
    validate_with(space, true)
}

/// Like [`validate`], optionally skipping the triangle inequality.
pub fn validate_with(space: &FiniteMetricMeasureSpace, triangle: bool) -> ValidationReport {
    let n = space.len();
    let mut report = ValidationReport::default();
    let mut seen = HashSet::new();
    for (i, l) in space.labels.iter().enumerate() {
        if !seen.insert(l) {
            report.violations.push(Violation::DuplicateLabel {
                i,
                label: l.clone(),
            });
        }
    }
    for i in 0..n {
        let w = space.weight[i];
        if !(w >= 0.0) || !w.is_finite() {
            report.violations.push(Violation::BadWeight { i, value: w });
        }
        let dii = space.d(i, i);
        if dii != 0.0 {
            report
                .violations
                .push(Violation::NonzeroDiagonal { i, value: dii });
        }
        for j in 0..n {
            let dij = space.d(i, j);
            if !dij.is_finite() {
                report
                    .violations
                    .push(Violation::NonFiniteDistance { i, j });
            } else if dij < 0.0 {
                report
                    .violations
                    .push(Violation::NegativeDistance { i, j, value: dij });
            }
            if j > i {
                let dji = space.d(j, i);
                if dij != dji {
                    report
                        .violations
                        .push(Violation::Asymmetry { i, j, dij, dji });
                }
            }
        }
    }
    if !space.weight.iter().any(|&w| w > 0.0) {
        report.violations.push(Violation::EmptySupport);
    }
    if triangle {
        let per_row = par::map_range(n, |i| {
            let mut found = Vec::new();
            let mut count = 0usize;
            for j in 0..n {
                let dij = space.d(i, j);
                for k in 0..n {
                    let excess = dij - space.d(i, k) - space.d(k, j);
                    if excess > TRIANGLE_TOL {
                        count += 1;
                        if found.len() < MAX_TRIANGLE_REPORTS {
                            found.push(Violation::Triangle { i, j, k, excess });
                        }
                    }
                }
            }
            (count, found)
        });
        for (count, found) in per_row {
            report.triangle_violations += count;
            let room = MAX_TRIANGLE_REPORTS.saturating_sub(
                report
                    .violations
                    .iter()
                    .filter(|v| matches!(v, Violation::Triangle { .. }))
                    .count(),
            );
            report.violations.extend(found.into_iter().take(room));
        }
    }
    report
}

/// Largest distance between two support points.
pub fn diameter(space: &FiniteMetricMeasureSpace) -> Result<f64> {
    let support = space.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut best = 0.0f64;
    for &i in &support {
        for &j in &support {
            best = best.max(space.d(i, j));
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntipodeSet {
    pub points: Vec<usize>,
    /// Set when two antipodes of the same point are distinct, which cannot
    /// happen on a CD(N-1,N) base.
    pub warning: Option<String>,
}

/// Support points at distance at least `pi - tol` from `i`.
pub fn antipode_set(space: &FiniteMetricMeasureSpace, i: usize, tol: f64) -> AntipodeSet {
    let points: Vec<usize> = space
        .support()
        .into_iter()
        .filter(|&j| space.d(i, j) >= PI - tol)
        .collect();
    let mut warning = None;
    'outer: for (a, &p) in points.iter().enumerate() {
        for &q in &points[a + 1..] {
            if space.d(p, q) > tol {
                warning = Some(format!(
                    "point {i} has distinct antipodes {p} and {q} (d = {:.6})",
                    space.d(p, q)
                ));
                break 'outer;
            }
        }
    }
    AntipodeSet { points, warning }
}

/// `count` equally spaced points on the unit circle with the angular metric
/// and total mass `2 pi`.
pub fn circle_space(count: usize) -> Result<FiniteMetricMeasureSpace> {
    if count < 2 {
        return Err(Error::Domain(format!(
            "circle needs at least 2 points, got {count}"
        )));
    }
    let labels = (0..count).map(|j| format!("c{j}")).collect();
    let mut dist = vec![0.0; count * count];
    for i in 0..count {
        for j in 0..count {
            let k = (i + count - j) % count;
            let m = k.min(count - k);
            dist[i * count + j] = PI * ((2 * m) as f64 / count as f64);
        }
    }
    let weight = vec![2.0 * PI / count as f64; count];
    FiniteMetricMeasureSpace::new(labels, dist, weight)
}

/// A probability vector on the points of an ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    mass: Vec<f64>,
    ac: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct MassFile {
    mass: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(mass: Vec<f64>, space: &FiniteMetricMeasureSpace) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                got: mass.len(),
            });
        }
        if let Some(i) = mass.iter().position(|m| !(*m >= 0.0) || !m.is_finite()) {
            return Err(Error::Domain(format!(
                "mass[{i}] = {} is not a nonnegative number",
                mass[i]
            )));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::Domain(format!("masses sum to {total}, not 1")));
        }
        let ac = space.weights().iter().map(|&w| w > 0.0).collect();
        Ok(Self { mass, ac })
    }

    /// Normalizes nonnegative raw masses to total 1.
    pub fn normalized(raw: Vec<f64>, space: &FiniteMetricMeasureSpace) -> Result<Self> {
        let total: f64 = raw.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Domain("cannot normalize zero mass".into()));
        }
        Self::new(raw.into_iter().map(|m| m / total).collect(), space)
    }

    pub fn dirac(space: &FiniteMetricMeasureSpace, i: usize) -> Result<Self> {
        let mut mass = vec![0.0; space.len()];
        *mass
            .get_mut(i)
            .ok_or_else(|| Error::Domain(format!("point {i} out of range")))? = 1.0;
        Self::new(mass, space)
    }

    /// The ambient measure normalized to a probability.
    pub fn uniform(space: &FiniteMetricMeasureSpace) -> Result<Self> {
        Self::normalized(space.weights().to_vec(), space)
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn is_ac_at(&self, i: usize) -> bool {
        self.ac[i]
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.mass.len())
            .filter(|&i| self.mass[i] > 0.0)
            .collect()
    }

    /// Mass sitting on zero-weight points.
    pub fn singular_mass(&self) -> f64 {
        self.mass
            .iter()
            .zip(&self.ac)
            .filter(|(_, &ac)| !ac)
            .map(|(m, _)| m)
            .sum()
    }

    pub fn is_fully_ac(&self) -> bool {
        self.singular_mass() == 0.0
    }

    /// Density with respect to the ambient weights (0 off the support).
    pub fn density(&self, i: usize, space: &FiniteMetricMeasureSpace) -> f64 {
        let w = space.weight(i);
        if w > 0.0 {
            self.mass[i] / w
        } else {
            0.0
        }
    }

    /// Total variation distance `0.5 * sum |a - b|`.
    pub fn total_variation(&self, other: &ProbabilityVector) -> f64 {
        0.5 * self
            .mass
            .iter()
            .zip(&other.mass)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MassFile {
            mass: self.mass.clone(),
        })
        .expect("masses serialize")
    }

    pub fn from_json(text: &str, space: &FiniteMetricMeasureSpace) -> Result<Self> {
        let raw: MassFile = serde_json::from_str(text).map_err(|e| json_error(&e))?;
        Self::new(raw.mass, space)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point(d: f64, w: [f64; 2]) -> FiniteMetricMeasureSpace {
        FiniteMetricMeasureSpace::unlabeled(vec![0.0, d, d, 0.0], w.to_vec()).unwrap()
    }

    #[test]
    fn asymmetry_is_reported() {
        let s =
            FiniteMetricMeasureSpace::unlabeled(vec![0.0, 1.0, 1.5, 0.0], vec![1.0, 1.0]).unwrap();
        let r = validate(&s);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Asymmetry { i: 0, j: 1, .. })));
    }

    #[test]
    fn triangle_violation_is_reported() {
        let d = vec![0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0];
        let s = FiniteMetricMeasureSpace::unlabeled(d, vec![1.0; 3]).unwrap();
        let r = validate(&s);
        assert!(r.triangle_violations > 0);
        assert!(r.violations.iter().any(|v| matches!(
            v,
            Violation::Triangle {
                i: 0,
                j: 2,
                k: 1,
                ..
            }
        )));
    }

    #[test]
    fn negative_weight_and_empty_support() {
        let s = two_point(1.0, [-1.0, 0.0]);
        let r = validate(&s);
        assert!(r
            .violations
            .contains(&Violation::BadWeight { i: 0, value: -1.0 }));
        assert!(r.violations.contains(&Violation::EmptySupport));
    }

    #[test]
    fn circle_examples() {
        let c4 = circle_space(4).unwrap();
        assert_eq!(c4.d(0, 2), PI);
        assert_eq!(c4.d(0, 1), PI / 2.0);
        assert!(c4.weights().iter().all(|&w| w == PI / 2.0));
        let c2 = circle_space(2).unwrap();
        assert_eq!(c2.d(0, 1), PI);
        let c8 = circle_space(8).unwrap();
        assert_eq!(diameter(&c8).unwrap(), PI);
        assert!((c8.total_mass() - 2.0 * PI).abs() < 1e-14);
        assert!(circle_space(1).is_err());
    }

    #[test]
    fn circle_spaces_validate() {
        for n in 2..=256 {
            let r = validate(&circle_space(n).unwrap());
            assert!(r.is_empty(), "n = {n}: {r}");
        }
    }

    #[test]
    fn diameter_examples() {
        let one = FiniteMetricMeasureSpace::unlabeled(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(diameter(&one).unwrap(), 0.0);
        assert_eq!(diameter(&two_point(1.0, [1.0, 0.0])).unwrap(), 0.0);
        assert!(matches!(
            diameter(&two_point(1.0, [0.0, 0.0])),
            Err(Error::EmptySupport)
        ));
    }

    #[test]
    fn diameter_bounded_by_matrix_max() {
        let c = circle_space(9).unwrap();
        let max = c.dist_matrix().iter().cloned().fold(0.0, f64::max);
        assert_eq!(diameter(&c).unwrap(), max);
        let mut w = c.weights().to_vec();
        w[0] = 0.0;
        w[4] = 0.0;
        let partial = c.with_weights(w).unwrap();
        assert!(diameter(&partial).unwrap() <= max);
    }

    #[test]
    fn antipode_examples() {
        let c8 = circle_space(8).unwrap();
        let a = antipode_set(&c8, 0, 1e-6);
        assert_eq!(a.points, vec![4]);
        assert!(a.warning.is_none());
        assert!(antipode_set(&two_point(1.0, [1.0, 1.0]), 0, 1e-6)
            .points
            .is_empty());
        assert!(antipode_set(&circle_space(7).unwrap(), 0, 1e-6)
            .points
            .is_empty());
    }

    #[test]
    fn antipode_warning_never_fires_on_circles() {
        for n in 2..=64 {
            let c = circle_space(n).unwrap();
            for i in 0..n {
                assert!(antipode_set(&c, i, 1e-6).warning.is_none());
            }
        }
    }

    #[test]
    fn antipode_warning_fires_on_two_antipodes() {
        // Point 0 sits at distance pi from both 1 and 2, which are pi/2 apart.
        let h = PI / 2.0;
        let d = vec![0.0, PI, PI, PI, 0.0, h, PI, h, 0.0];
        let s = FiniteMetricMeasureSpace::unlabeled(d, vec![1.0; 3]).unwrap();
        let a = antipode_set(&s, 0, 1e-6);
        assert_eq!(a.points, vec![1, 2]);
        assert!(a.warning.is_some());
    }

    #[test]
    fn json_round_trip() {
        let c = circle_space(4).unwrap();
        let back = FiniteMetricMeasureSpace::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        let c = circle_space(5).unwrap();
        c.save(&path).unwrap();
        assert_eq!(FiniteMetricMeasureSpace::load(&path).unwrap(), c);
    }

    #[test]
    fn negative_weight_file_is_rejected() {
        let text = r#"{"labels":["a","b"],"dist":[[0,1],[1,0]],"weight":[1,-2]}"#;
        assert!(matches!(
            FiniteMetricMeasureSpace::from_json(text),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn missing_row_names_the_row() {
        let text =
            "{\n\"labels\":[\"a\",\"b\",\"c\"],\n\"dist\":[[0,1,1],[1,0,1]],\n\"weight\":[1,1,1]}";
        match FiniteMetricMeasureSpace::from_json(text) {
            Err(Error::Parse {
                line,
                field,
                message,
            }) => {
                assert_eq!(line, 3);
                assert_eq!(field, "dist[2]");
                assert!(message.contains("row 2"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_json_reports_line() {
        let text = "{\n\"labels\": [\"a\"],\n\"dist\": [[0]],\n\"weight\": [oops]}";
        match FiniteMetricMeasureSpace::from_json(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn probability_vector_checks() {
        let s = two_point(1.0, [2.0, 0.0]);
        assert!(ProbabilityVector::new(vec![0.5, 0.4], &s).is_err());
        assert!(ProbabilityVector::new(vec![0.5], &s).is_err());
        let p = ProbabilityVector::new(vec![0.75, 0.25], &s).unwrap();
        assert_eq!(p.singular_mass(), 0.25);
        assert!(!p.is_fully_ac());
        assert_eq!(p.density(0, &s), 0.375);
        let u = ProbabilityVector::uniform(&s).unwrap();
        assert_eq!(u.mass(), &[1.0, 0.0]);
        assert!(u.is_fully_ac());
    }
}
