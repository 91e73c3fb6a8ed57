//! Graph Laplacians on finite metric measure spaces and spectral gaps.
//!
//! Edge weights use the kernel `k(u) = (1 - u^2)_+` with a symmetric degree
//! normalization,
//!
//! ```text
//! W_ij = c * 2 (d + 4) / h^2 * k(d_ij / h) m_i m_j / sqrt(D_i D_j),
//! D_i  = sum_j k(d_ij / h) m_j,
//! ```
//!
//! so that `(L f)_i = sum_j W_ij (f_i - f_j) / m_i` approximates `-Laplace f`
//! on a `d`-dimensional space. The constant `c` removes the remaining
//! discretization bias: it is fitted on the unit circle sampled at the same
//! bandwidth-to-spacing ratio, where the first eigenvalue is known to be 1.

use std::collections::VecDeque;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::cones::{ConeGrid, ConeKind};
use crate::error::{Error, Result};
use crate::mms::{circle_space, FiniteMetricMeasureSpace};
use crate::par;

const CALIBRATION_POINTS: usize = 64;

#[inline]
fn kernel(u: f64) -> f64 {
    if u < 1.0 {
        1.0 - u * u
    } else {
        0.0
    }
}

/// Mass-weighted graph Laplacian on the points of positive weight.
#[derive(Debug, Clone)]
pub struct GraphOperator {
    vertices: Vec<usize>,
    mass: Vec<f64>,
    /// Dense `L = diag(sum W) - W`, row-major.
    lap: Vec<f64>,
    bandwidth: f64,
    dim: u32,
    calibration: f64,
}

impl GraphOperator {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Indices into the source space.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Intrinsic dimension used in the normalization.
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn calibration(&self) -> f64 {
        self.calibration
    }

    pub fn entry(&self, a: usize, b: usize) -> f64 {
        self.lap[a * self.len() + b]
    }

    /// `f^T L f`, i.e. `1/2 sum W_ij (f_i - f_j)^2`.
    pub fn dirichlet(&self, f: &[f64]) -> f64 {
        let n = self.len();
        let mut q = 0.0;
        for a in 0..n {
            let row = &self.lap[a * n..(a + 1) * n];
            q += f[a] * row.iter().zip(f).map(|(l, x)| l * x).sum::<f64>();
        }
        q
    }

    /// Connected components of the edge graph, each sorted, ordered by
    /// smallest member (vertex positions, not space indices).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(a) = queue.pop_front() {
                for b in 0..n {
                    if !seen[b] && b != a && self.entry(a, b) != 0.0 {
                        seen[b] = true;
                        comp.push(b);
                        queue.push_back(b);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Eigenpairs of `L f = lambda M f`, ascending. Eigenvectors are
    /// `M`-orthonormal and returned column-wise.
    pub fn eigen(&self) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let n = self.len();
        let inv_sqrt: Vec<f64> = self.mass.iter().map(|m| 1.0 / m.sqrt()).collect();
        let a = Mat::from_fn(n, n, |i, j| self.lap[i * n + j] * inv_sqrt[i] * inv_sqrt[j]);
        let eig = a
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|e| Error::Solver(format!("{e:?}")))?;
        let vals: Vec<f64> = (0..n).map(|k| eig.S()[k]).collect();
        let vecs = (0..n)
            .map(|k| (0..n).map(|i| eig.U()[(i, k)] * inv_sqrt[i]).collect())
            .collect();
        Ok((vals, vecs))
    }
}

/// Assembles the operator at bandwidth `h`, estimating the intrinsic
/// dimension from ball masses at `h` and `h/2` and calibrating on the circle.
pub fn graph_laplacian(space: &FiniteMetricMeasureSpace, bandwidth: f64) -> Result<GraphOperator> {
    let dim = estimate_dimension(space, bandwidth);
    let ratio = bandwidth / space.mesh_size();
    let calibration = circle_calibration(ratio)?;
    assemble(space, bandwidth, dim, calibration)
}

/// Like [`graph_laplacian`] with explicit dimension and constant.
pub fn graph_laplacian_with(
    space: &FiniteMetricMeasureSpace,
    bandwidth: f64,
    dim: u32,
    calibration: f64,
) -> Result<GraphOperator> {
    assemble(space, bandwidth, dim, calibration)
}

fn assemble(
    space: &FiniteMetricMeasureSpace,
    h: f64,
    dim: u32,
    calibration: f64,
) -> Result<GraphOperator> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!(
            "bandwidth must be positive, got {h}"
        )));
    }
    let vertices = space.support();
    let n = vertices.len();
    let min_pos = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b)
        .map(|(a, b)| space.d(vertices[a], vertices[b]))
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min);
    if n < 2 || h <= min_pos && min_pos.is_finite() {
        return Err(Error::Domain(format!(
            "bandwidth {h} does not exceed the smallest distance {min_pos}: the graph has no edges"
        )));
    }
    let mass: Vec<f64> = vertices.iter().map(|&v| space.weight(v)).collect();
    let kern = |a: usize, b: usize| kernel(space.d(vertices[a], vertices[b]) / h);
    let degree = par::map_range(n, |a| (0..n).map(|b| kern(a, b) * mass[b]).sum::<f64>());
    let scale = calibration * 2.0 * (f64::from(dim) + 4.0) / (h * h);
    let mut lap = vec![0.0; n * n];
    par::fill_rows(&mut lap, n, |a, row| {
        let mut diag = 0.0;
        for b in 0..n {
            if b == a {
                continue;
            }
            let w = scale * kern(a, b) * mass[a] * mass[b] / (degree[a] * degree[b]).sqrt();
            row[b] = -w;
            diag += w;
        }
        row[a] = diag;
    });
    Ok(GraphOperator {
        vertices,
        mass,
        lap,
        bandwidth: h,
        dim,
        calibration,
    })
}

/// `round(log2(B(h) / B(h/2)))` from median ball-mass ratios, at least 1.
fn estimate_dimension(space: &FiniteMetricMeasureSpace, h: f64) -> u32 {
    let support = space.support();
    let mut ratios: Vec<f64> = support
        .iter()
        .map(|&a| {
            let ball = |r: f64| -> f64 {
                support
                    .iter()
                    .filter(|&&b| space.d(a, b) <= r)
                    .map(|&b| space.weight(b))
                    .sum()
            };
            ball(h) / ball(0.5 * h)
        })
        .collect();
    ratios.sort_by(f64::total_cmp);
    let median = ratios.get(ratios.len() / 2).copied().unwrap_or(2.0);
    (median.log2().round() as u32).max(1)
}

/// `1 / lambda_1` of the uncalibrated operator on the unit circle with the
/// given bandwidth-to-spacing ratio.
pub fn circle_calibration(ratio: f64) -> Result<f64> {
    let circle = circle_space(CALIBRATION_POINTS)?;
    let h = ratio * circle.mesh_size();
    let op = assemble(&circle, h, 1, 1.0)?;
    Ok(1.0 / spectral_gap(&op)?)
}

/// Smallest nonzero eigenvalue of the mass-weighted Laplacian.
pub fn spectral_gap(op: &GraphOperator) -> Result<f64> {
    Ok(gap_and_vector(op)?.0)
}

/// The gap together with an `M`-normalized eigenvector.
pub fn gap_and_vector(op: &GraphOperator) -> Result<(f64, Vec<f64>)> {
    let comps = op.components();
    if comps.len() > 1 {
        return Err(Error::Disconnected {
            components: comps
                .into_iter()
                .map(|c| c.into_iter().map(|a| op.vertices[a]).collect())
                .collect(),
        });
    }
    let (vals, mut vecs) = op.eigen()?;
    if vals.len() < 2 {
        return Err(Error::Domain("operator has a single vertex".into()));
    }
    Ok((vals[1], vecs.swap_remove(1)))
}

/// `f^T L f / sum m_i f_i^2` after removing the mass-weighted mean of `f`.
pub fn poincare_quotient(f: &[f64], op: &GraphOperator) -> Result<f64> {
    if f.len() != op.len() {
        return Err(Error::DimensionMismatch {
            expected: op.len(),
            got: f.len(),
        });
    }
    let total: f64 = op.mass.iter().sum();
    let mean = f.iter().zip(&op.mass).map(|(x, m)| x * m).sum::<f64>() / total;
    let g: Vec<f64> = f.iter().map(|x| x - mean).collect();
    let norm: f64 = g.iter().zip(&op.mass).map(|(x, m)| m * x * x).sum();
    let scale: f64 = f.iter().zip(&op.mass).map(|(x, m)| m * x * x).sum();
    if !(norm > 1e-24 * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::Domain("function is constant after centering".into()));
    }
    Ok(op.dirichlet(&g) / norm)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub gap: f64,
    pub bound: f64,
    pub n: u32,
    pub bandwidth: f64,
    pub verdict: bool,
}

/// Checks `lambda_1 >= (n + 1)(1 - tol_rel)` on a spherical cone grid.
/// `bandwidth` defaults to four times the mesh size.
pub fn lichnerowicz_check(
    grid: &ConeGrid,
    n: u32,
    bandwidth: Option<f64>,
    tol_rel: f64,
) -> Result<GapReport> {
    if grid.kind() != ConeKind::Spherical {
        return Err(Error::Domain(
            "the Lichnerowicz check needs a spherical cone".into(),
        ));
    }
    if grid.radial_grid().is_empty() || grid.base().len() < 2 {
        return Err(Error::Domain("grid has no interior cells".into()));
    }
    let space = grid.space();
    let h = bandwidth.unwrap_or_else(|| default_bandwidth(space));
    let op = graph_laplacian(space, h)?;
    let gap = spectral_gap(&op)?;
    let bound = f64::from(n + 1);
    Ok(GapReport {
        gap,
        bound,
        n,
        bandwidth: h,
        verdict: gap >= bound * (1.0 - tol_rel),
    })
}

pub fn default_bandwidth(space: &FiniteMetricMeasureSpace) -> f64 {
    4.0 * space.mesh_size()
}
