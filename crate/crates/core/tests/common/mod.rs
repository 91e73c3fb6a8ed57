#![allow(dead_code)]

use std::f64::consts::PI;

use conecd::cones::ConePoint;
use conecd::{ConeGrid, FiniteMetricMeasureSpace};

/// Minimum transport cost over all vertices of the transportation polytope,
/// found by trying every spanning-tree basis. Exponential; for marginals of
/// at most four points.
pub fn brute_force_cost(a: &[f64], b: &[f64], cost: &dyn Fn(usize, usize) -> f64) -> f64 {
    let (m, n) = (a.len(), b.len());
    let cells: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let k = m + n - 1;
    let mut best = f64::INFINITY;
    let mut chosen = Vec::with_capacity(k);
    subsets(&cells, k, 0, &mut chosen, &mut |basis| {
        if let Some(flow) = basis_flow(a, b, basis) {
            let c: f64 = basis
                .iter()
                .zip(&flow)
                .map(|(&(i, j), f)| f * cost(i, j))
                .sum();
            best = best.min(c);
        }
    });
    best
}

fn subsets(
    cells: &[(usize, usize)],
    k: usize,
    from: usize,
    chosen: &mut Vec<(usize, usize)>,
    visit: &mut dyn FnMut(&[(usize, usize)]),
) {
    if chosen.len() == k {
        visit(chosen);
        return;
    }
    for c in from..cells.len() {
        if cells.len() - c < k - chosen.len() {
            break;
        }
        chosen.push(cells[c]);
        subsets(cells, k, c + 1, chosen, visit);
        chosen.pop();
    }
}

/// Flows on a spanning-tree basis by peeling leaves; `None` if the cells do
/// not form a tree or some flow is negative.
fn basis_flow(a: &[f64], b: &[f64], basis: &[(usize, usize)]) -> Option<Vec<f64>> {
    let (m, n) = (a.len(), b.len());
    let mut left: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut alive = vec![true; basis.len()];
    let mut flow = vec![0.0; basis.len()];
    for _ in 0..basis.len() {
        let mut degree = vec![0usize; m + n];
        for (c, &(i, j)) in basis.iter().enumerate() {
            if alive[c] {
                degree[i] += 1;
                degree[m + j] += 1;
            }
        }
        let (c, leaf) = basis.iter().enumerate().find_map(|(c, &(i, j))| {
            if !alive[c] {
                None
            } else if degree[i] == 1 {
                Some((c, i))
            } else if degree[m + j] == 1 {
                Some((c, m + j))
            } else {
                None
            }
        })?;
        let (i, j) = basis[c];
        let other = if leaf == i { m + j } else { i };
        flow[c] = left[leaf];
        left[other] -= left[leaf];
        left[leaf] = 0.0;
        alive[c] = false;
    }
    let scale: f64 = a.iter().sum::<f64>().max(1.0);
    (flow.iter().all(|&f| f >= -1e-13 * scale) && left.iter().all(|r| r.abs() <= 1e-12 * scale))
        .then_some(flow)
}

/// Planar coordinates of a Euclidean cone point over the angular circle.
pub fn planar(grid: &ConeGrid, i: usize) -> [f64; 2] {
    let nb = grid.base().len() as f64;
    match grid.point(i) {
        ConePoint::Fiber { base, radial } => {
            let phi = 2.0 * PI * base as f64 / nb;
            [radial * phi.cos(), radial * phi.sin()]
        }
        _ => [0.0, 0.0],
    }
}

/// Unit vector of a spherical cone point over the angular circle.
pub fn spherical(grid: &ConeGrid, i: usize) -> [f64; 3] {
    let nb = grid.base().len() as f64;
    match grid.point(i) {
        ConePoint::Fiber { base, radial } => {
            let phi = 2.0 * PI * base as f64 / nb;
            [
                radial.sin() * phi.cos(),
                radial.sin() * phi.sin(),
                radial.cos(),
            ]
        }
        ConePoint::Apex => [0.0, 0.0, 1.0],
        ConePoint::NorthPole => [0.0, 0.0, -1.0],
    }
}

pub fn great_circle(u: [f64; 3], v: [f64; 3]) -> f64 {
    let cross = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    let c = (cross[0].powi(2) + cross[1].powi(2) + cross[2].powi(2)).sqrt();
    c.atan2(u[0] * v[0] + u[1] * v[1] + u[2] * v[2])
}

/// `count` random points in the unit square with Euclidean distances and
/// unit weights.
pub fn random_planar_space(points: &[[f64; 2]]) -> FiniteMetricMeasureSpace {
    let n = points.len();
    let dist = (0..n * n)
        .map(|e| {
            let (p, q) = (points[e / n], points[e % n]);
            (p[0] - q[0]).hypot(p[1] - q[1])
        })
        .collect();
    FiniteMetricMeasureSpace::unlabeled(dist, vec![1.0; n]).unwrap()
}
