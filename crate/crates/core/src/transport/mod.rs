//! Exact optimal transport for the squared-distance cost.

mod geodesic;
mod simplex;

pub use geodesic::{
    apex_scan, build_geodesic_plan, midpoints, ApexScanReport, GeodesicPlan, RoutedPair, Triple,
};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mms::{FiniteMetricMeasureSpace, ProbabilityVector};

/// Marginal sums may differ by at most this much.
pub const MARGINAL_TOL: f64 = 1e-10;

// Masses are transported as integer multiples of 2^-50.
const FLOW_SCALE: f64 = (1u64 << 50) as f64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// A transport plan, stored sparsely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub cost: f64,
    pub plan: Vec<PlanEntry>,
    pub source: Vec<f64>,
    pub target: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Coupling {
    pub fn len(&self) -> usize {
        self.plan.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plan.is_empty()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.plan.iter().map(|e| (e.i, e.j)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.source.len()];
        for e in &self.plan {
            out[e.i] += e.w;
        }
        out
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.target.len()];
        for e in &self.plan {
            out[e.j] += e.w;
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coupling serializes")
    }
}

/// Solves the discrete optimal transport problem between `mu0` and `mu1`
/// for the cost `d^2`. Only arcs between the two supports enter the LP.
pub fn solve_ot(
    space: &FiniteMetricMeasureSpace,
    mu0: &ProbabilityVector,
    mu1: &ProbabilityVector,
) -> Result<Coupling> {
    for mu in [mu0, mu1] {
        if mu.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                got: mu.len(),
            });
        }
    }
    let (a, b) = (mu0.mass(), mu1.mass());
    let (ma, mb): (f64, f64) = (a.iter().sum(), b.iter().sum());
    if (ma - mb).abs() > MARGINAL_TOL {
        return Err(Error::InfeasibleMarginals {
            source_mass: ma,
            target_mass: mb,
        });
    }
    let src = mu0.support();
    let dst = mu1.support();
    if src.is_empty() || dst.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut warnings = Vec::new();
    for (name, mu) in [("source", mu0), ("target", mu1)] {
        let sing = mu.singular_mass();
        if sing > 0.0 {
            warnings.push(format!(
                "{name} measure has singular mass {sing} on zero-weight points"
            ));
        }
    }

    let supply = scale_masses(&src.iter().map(|&i| a[i]).collect::<Vec<_>>());
    let mut demand = scale_masses(&dst.iter().map(|&j| b[j]).collect::<Vec<_>>());
    // the LP needs exactly balanced integer totals
    let gap: i64 = supply.iter().sum::<i64>() - demand.iter().sum::<i64>();
    let top = argmax(&demand);
    demand[top] += gap;

    let mut cost = Vec::with_capacity(src.len() * dst.len());
    for &i in &src {
        let row = space.row(i);
        cost.extend(dst.iter().map(|&j| row[j] * row[j]));
    }
    let sol = simplex::solve(&supply, &demand, cost);
    let src_mass: Vec<f64> = src.iter().map(|&i| a[i]).collect();
    let dst_mass: Vec<f64> = dst.iter().map(|&j| b[j]).collect();
    let weights = forest_weights(&sol.flows, &src_mass, &dst_mass).unwrap_or_else(|| {
        sol.flows
            .iter()
            .map(|&(_, _, f)| f as f64 / FLOW_SCALE)
            .collect()
    });
    let plan: Vec<PlanEntry> = sol
        .flows
        .iter()
        .zip(weights)
        .map(|(&(ii, jj, _), w)| PlanEntry {
            i: src[ii],
            j: dst[jj],
            w,
        })
        .collect();
    let cost = plan.iter().map(|e| e.w * space.d(e.i, e.j).powi(2)).sum();
    Ok(Coupling {
        cost,
        plan,
        source: a.to_vec(),
        target: b.to_vec(),
        warnings,
    })
}

/// Wasserstein distance `W_2(mu0, mu1)`.
pub fn wasserstein(
    space: &FiniteMetricMeasureSpace,
    mu0: &ProbabilityVector,
    mu1: &ProbabilityVector,
) -> Result<f64> {
    Ok(solve_ot(space, mu0, mu1)?.cost.max(0.0).sqrt())
}

// The positive flows of a basic solution form a forest, so their values are
// fixed by the marginals. Peeling leaves recovers them from the f64 masses,
// which keeps the marginals exact where the scaled integers would round.
// Returns None if rounding drives a weight negative.
fn forest_weights(flows: &[(usize, usize, i64)], a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let ns = a.len();
    let mut left: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); left.len()];
    for (e, &(i, j, _)) in flows.iter().enumerate() {
        incident[i].push(e);
        incident[ns + j].push(e);
    }
    let mut degree: Vec<usize> = incident.iter().map(Vec::len).collect();
    let mut done = vec![false; flows.len()];
    let mut w = vec![0.0; flows.len()];
    let mut stack: Vec<usize> = (0..left.len()).rev().filter(|&v| degree[v] == 1).collect();
    while let Some(v) = stack.pop() {
        if degree[v] != 1 {
            continue;
        }
        let e = *incident[v].iter().find(|&&e| !done[e])?;
        let (i, j, _) = flows[e];
        let other = if v == i { ns + j } else { i };
        let x = left[v];
        if !(x >= 0.0) {
            return None;
        }
        w[e] = x;
        done[e] = true;
        left[v] = 0.0;
        left[other] -= x;
        degree[v] = 0;
        degree[other] -= 1;
        if degree[other] == 1 {
            stack.push(other);
        }
    }
    (done.iter().all(|&d| d) && w.iter().all(|&x| x > 0.0)).then_some(w)
}

fn scale_masses(mass: &[f64]) -> Vec<i64> {
    let mut out: Vec<i64> = mass
        .iter()
        .map(|&m| (m * FLOW_SCALE).round() as i64)
        .collect();
    let total: i64 = out.iter().sum();
    let want = FLOW_SCALE as i64;
    let top = argmax(&out);
    out[top] += want - total;
    out
}

fn argmax(v: &[i64]) -> usize {
    let mut best = 0;
    for (k, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = k;
        }
    }
    best
}

/// Outcome of a cyclical monotonicity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityCheck {
    pub monotone: bool,
    /// First violating cycle, as a list of `(x, y)` pairs.
    pub witness: Option<Vec<(usize, usize)>>,
    pub cycles_checked: u64,
}

/// Checks `sum d^2(x_l, y_l) <= sum d^2(x_l, y_{l+1})` on cycles of pairs.
///
/// Every cycle of length up to `min(k_max, 4)` is enumerated, with the
/// smallest pair index first to skip rotations. `samples` random cycles of
/// length 5 and up are tried afterwards. Exhaustive cost is `O(P^k)` for `P`
/// pairs.
pub fn is_cyclically_monotone(
    pairs: &[(usize, usize)],
    space: &FiniteMetricMeasureSpace,
    k_max: usize,
    samples: usize,
    seed: u64,
) -> MonotonicityCheck {
    let p = pairs.len();
    let d2 = |x: usize, y: usize| space.d(x, y).powi(2);
    let mut checked = 0u64;
    let violates = |cycle: &[usize]| {
        let k = cycle.len();
        let mut own = 0.0;
        let mut shifted = 0.0;
        for l in 0..k {
            let (x, y) = pairs[cycle[l]];
            own += d2(x, y);
            shifted += d2(x, pairs[cycle[(l + 1) % k]].1);
        }
        shifted < own - 1e-12 * own.max(1.0)
    };
    let witness = |cycle: &[usize]| Some(cycle.iter().map(|&c| pairs[c]).collect());

    let exhaustive = k_max.min(4);
    let mut cycle = Vec::with_capacity(exhaustive);
    for k in 2..=exhaustive {
        for first in 0..p {
            cycle.clear();
            cycle.push(first);
            if let Some(found) = extend(&mut cycle, first, k, p, &mut checked, &violates) {
                return MonotonicityCheck {
                    monotone: false,
                    witness: witness(&found),
                    cycles_checked: checked,
                };
            }
        }
    }

    let longest = k_max.max(8).min(p);
    if longest >= 5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let k = rng.gen_range(5..=longest);
            let c: Vec<usize> = sample(&mut rng, p, k).into_vec();
            checked += 1;
            if violates(&c) {
                return MonotonicityCheck {
                    monotone: false,
                    witness: witness(&c),
                    cycles_checked: checked,
                };
            }
        }
    }
    MonotonicityCheck {
        monotone: true,
        witness: None,
        cycles_checked: checked,
    }
}

fn extend(
    cycle: &mut Vec<usize>,
    first: usize,
    k: usize,
    p: usize,
    checked: &mut u64,
    violates: &impl Fn(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    if cycle.len() == k {
        *checked += 1;
        return violates(cycle).then(|| cycle.clone());
    }
    for next in first + 1..p {
        if cycle.contains(&next) {
            continue;
        }
        cycle.push(next);
        let found = extend(cycle, first, k, p, checked, violates);
        cycle.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}
