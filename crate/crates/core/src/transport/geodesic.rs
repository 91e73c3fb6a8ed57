//! Three-point geodesic plans and the apex scan.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Coupling;
use crate::cones::{ConeGrid, ConePoint};
use crate::error::{Error, Result};
use crate::mms::{FiniteMetricMeasureSpace, ProbabilityVector};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triple {
    pub i: usize,
    pub mid: usize,
    pub j: usize,
    pub w: f64,
    pub slack: f64,
}

/// A coupling lifted to `(x0, x_s, x1)` triples on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPlan {
    pub s: f64,
    pub tol: f64,
    pub max_slack: f64,
    pub triples: Vec<Triple>,
    /// Mass of the intermediate measure at every point.
    pub marginal: Vec<f64>,
    /// Intermediate points hit by more than one endpoint pair. On a finite
    /// grid this is expected and only reported.
    pub shared_midpoints: usize,
}

fn slack(space: &FiniteMetricMeasureSpace, i: usize, k: usize, j: usize, s: f64) -> f64 {
    let d = space.d(i, j);
    (space.d(i, k) - s * d).abs() + (space.d(k, j) - (1.0 - s) * d).abs()
}

/// Points `k` with both `d(i,k)` and `d(k,j)` within `tol` of `d(i,j)/2`,
/// sorted by total slack, then index.
pub fn midpoints(space: &FiniteMetricMeasureSpace, i: usize, j: usize, tol: f64) -> Vec<usize> {
    let half = 0.5 * space.d(i, j);
    let mut hits: Vec<(f64, usize)> = (0..space.len())
        .filter_map(|k| {
            let a = (space.d(i, k) - half).abs();
            let b = (space.d(k, j) - half).abs();
            (a <= tol && b <= tol).then_some((a + b, k))
        })
        .collect();
    hits.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    hits.into_iter().map(|(_, k)| k).collect()
}

/// For each pair in the coupling, picks the point minimizing the
/// `s`-intermediate slack (lowest index on ties).
pub fn build_geodesic_plan(
    space: &FiniteMetricMeasureSpace,
    coupling: &Coupling,
    s: f64,
    tol: f64,
) -> Result<GeodesicPlan> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!(
            "interpolation fraction {s} not in (0, 1)"
        )));
    }
    if coupling.source.len() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            got: coupling.source.len(),
        });
    }
    let n = space.len();
    let picks = par::map_slice(&coupling.plan, |e| {
        let mut best = (f64::INFINITY, 0);
        for k in 0..n {
            let sl = slack(space, e.i, k, e.j, s);
            if sl < best.0 {
                best = (sl, k);
            }
        }
        best
    });
    let mut triples = Vec::with_capacity(picks.len());
    for (e, &(sl, mid)) in coupling.plan.iter().zip(&picks) {
        if sl > tol {
            return Err(Error::PlanTooCoarse {
                i: e.i,
                j: e.j,
                slack: sl,
                tol,
            });
        }
        triples.push(Triple {
            i: e.i,
            mid,
            j: e.j,
            w: e.w,
            slack: sl,
        });
    }
    Ok(GeodesicPlan::from_triples(n, s, tol, triples))
}

impl GeodesicPlan {
    fn from_triples(n: usize, s: f64, tol: f64, triples: Vec<Triple>) -> Self {
        let mut marginal = vec![0.0; n];
        let mut ends: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut shared = std::collections::BTreeSet::new();
        for t in &triples {
            marginal[t.mid] += t.w;
            match ends.get(&t.mid) {
                Some(&p) if p != (t.i, t.j) => {
                    shared.insert(t.mid);
                }
                Some(_) => {}
                None => {
                    ends.insert(t.mid, (t.i, t.j));
                }
            }
        }
        GeodesicPlan {
            s,
            tol,
            max_slack: triples.iter().map(|t| t.slack).fold(0.0, f64::max),
            triples,
            marginal,
            shared_midpoints: shared.len(),
        }
    }

    /// The intermediate measure `mu_s`.
    pub fn intermediate(&self, space: &FiniteMetricMeasureSpace) -> Result<ProbabilityVector> {
        ProbabilityVector::new(self.marginal.clone(), space)
    }

    pub fn source_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.marginal.len()];
        for t in &self.triples {
            out[t.i] += t.w;
        }
        out
    }

    pub fn target_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.marginal.len()];
        for t in &self.triples {
            out[t.j] += t.w;
        }
        out
    }

    /// Keeps the triples whose three points all lie farther than `eps` from
    /// every point of `centers`, renormalized to a probability plan.
    /// Returns `None` when nothing is left.
    pub fn restrict_away_from(
        &self,
        space: &FiniteMetricMeasureSpace,
        centers: &[usize],
        eps: f64,
    ) -> Option<GeodesicPlan> {
        let far = |p: usize| centers.iter().all(|&c| space.d(c, p) > eps);
        let kept: Vec<Triple> = self
            .triples
            .iter()
            .filter(|t| far(t.i) && far(t.mid) && far(t.j))
            .copied()
            .collect();
        let total: f64 = kept.iter().map(|t| t.w).sum();
        if !(total > 0.0) {
            return None;
        }
        let kept = kept
            .into_iter()
            .map(|t| Triple {
                w: t.w / total,
                ..t
            })
            .collect();
        Some(GeodesicPlan::from_triples(
            self.marginal.len(),
            self.s,
            self.tol,
            kept,
        ))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plan serializes")
    }
}

/// A triple whose intermediate point is a collapsed fibre.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutedPair {
    pub i: usize,
    pub mid: usize,
    pub j: usize,
    pub w: f64,
    /// `"apex"`, `"south"` or `"north"`.
    pub through: String,
    pub base: Option<(usize, usize)>,
    pub radii: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApexScanReport {
    pub s: f64,
    pub eps: f64,
    pub radial_tol: f64,
    /// Total weight of triples whose intermediate point is an apex or pole.
    pub apex_mass: f64,
    /// Part of `apex_mass` from triples sitting entirely on one singular point.
    pub degenerate_mass: f64,
    pub routed: Vec<RoutedPair>,
    /// The antipodal base pair shared by all routed pairs, when unique.
    pub base_pair: Option<(usize, usize)>,
    pub pattern_ok: bool,
    pub violations: Vec<String>,
}

/// Reports how much of a plan passes through the apex (or the poles) and
/// whether those pairs follow the only admissible pattern: one antipodal
/// pair of base points at radii `r0`, `r1` with `r1 = (1-s)/s * r0`
/// measured from the pole that is crossed.
pub fn apex_scan(plan: &GeodesicPlan, grid: &ConeGrid, eps: f64) -> ApexScanReport {
    let s = plan.s;
    let radial_tol = grid.radial_spacing();
    let ratio = (1.0 - s) / s;
    let mut report = ApexScanReport {
        s,
        eps,
        radial_tol,
        apex_mass: 0.0,
        degenerate_mass: 0.0,
        routed: Vec::new(),
        base_pair: None,
        pattern_ok: true,
        violations: Vec::new(),
    };
    let spherical = grid.kind() == crate::cones::ConeKind::Spherical;
    let near_pole = |p: ConePoint| -> Option<&'static str> {
        let r = p.radial();
        if r <= eps {
            Some(if spherical { "south" } else { "apex" })
        } else if spherical && r >= PI - eps {
            Some("north")
        } else {
            None
        }
    };
    for t in &plan.triples {
        let mid = grid.point(t.mid);
        let Some(through) = near_pole(mid) else {
            continue;
        };
        report.apex_mass += t.w;
        let (p0, p1) = (grid.point(t.i), grid.point(t.j));
        if t.i == t.mid && t.j == t.mid {
            report.degenerate_mass += t.w;
            continue;
        }
        let base = p0.base().zip(p1.base());
        let (r0, r1) = (p0.radial(), p1.radial());
        report.routed.push(RoutedPair {
            i: t.i,
            mid: t.mid,
            j: t.j,
            w: t.w,
            through: through.to_string(),
            base,
            radii: (r0, r1),
        });
        let Some((b0, b1)) = base else {
            report.violations.push(format!(
                "pair ({}, {}) has an endpoint on a collapsed fibre",
                t.i, t.j
            ));
            continue;
        };
        if grid.base().d(b0, b1) < PI - 1e-9 {
            report.violations.push(format!(
                "base points {b0} and {b1} of pair ({}, {}) are not antipodal",
                t.i, t.j
            ));
        }
        match report.base_pair {
            None => report.base_pair = Some((b0, b1)),
            Some(bp) if bp != (b0, b1) => report.violations.push(format!(
                "pair ({}, {}) uses base pair ({b0}, {b1}) besides ({}, {})",
                t.i, t.j, bp.0, bp.1
            )),
            Some(_) => {}
        }
        let (h0, h1) = if through == "north" {
            (PI - r0, PI - r1)
        } else {
            (r0, r1)
        };
        if (h1 - ratio * h0).abs() > radial_tol {
            report.violations.push(format!(
                "pair ({}, {}) has radii {r0}, {r1}; expected {} for s = {s}",
                t.i,
                t.j,
                if through == "north" {
                    PI - ratio * h0
                } else {
                    ratio * h0
                }
            ));
        }
    }
    report.pattern_ok = report.violations.is_empty();
    report
}
