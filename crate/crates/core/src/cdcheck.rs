//! Rényi entropy and direct checks of the curvature-dimension inequality
//! along geodesic plans.

use std::f64::consts::PI;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeffs::{sigma, tau, DistortionParams, ExtReal};
use crate::cones::ConeGrid;
use crate::error::{Error, Result};
use crate::measures::random_ac_measure;
use crate::mms::{diameter, FiniteMetricMeasureSpace, ProbabilityVector};
use crate::par;
use crate::transport::{build_geodesic_plan, solve_ot, GeodesicPlan};

/// `S_N'(mu) = -sum_i rho_i^(1 - 1/N') m_i` over points of positive weight.
/// Mass on zero-weight points contributes nothing.
pub fn renyi_entropy(mu: &ProbabilityVector, space: &FiniteMetricMeasureSpace, nprime: f64) -> f64 {
    let e = -1.0 / nprime;
    -mu.mass()
        .iter()
        .zip(space.weights())
        .filter(|(&p, &w)| p > 0.0 && w > 0.0)
        .map(|(&p, &w)| p * (p / w).powf(e))
        .sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Some pair sits where a coefficient is infinite, so the right-hand
    /// side is `-inf` and the inequality cannot hold.
    InfiniteRhs,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::InfiniteRhs => "infinite-rhs",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdReport {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "Nprime")]
    pub nprime: f64,
    pub t: f64,
    pub reduced: bool,
    #[serde(with = "crate::serde_ext")]
    pub lhs: f64,
    #[serde(with = "crate::serde_ext")]
    pub rhs: f64,
    #[serde(with = "crate::serde_ext")]
    pub deficit: f64,
    pub slack: f64,
    pub eps: f64,
    pub verdict: Verdict,
}

/// Evaluates `S_N'(mu_t) <= -sum w [c^(1-t)(d) rho0^(-1/N') + c^(t)(d) rho1^(-1/N')]`
/// over the plan's triples, with `c = tau` (or `sigma` when `reduced`).
/// Passes when `rhs - lhs >= -eps`.
#[allow(clippy::too_many_arguments)]
pub fn cd_inequality_check(
    mu0: &ProbabilityVector,
    mu1: &ProbabilityVector,
    plan: &GeodesicPlan,
    space: &FiniteMetricMeasureSpace,
    k: f64,
    nprime: f64,
    reduced: bool,
    eps: f64,
) -> Result<CdReport> {
    let t = plan.s;
    if !mu0.is_fully_ac() || !mu1.is_fully_ac() {
        return Err(Error::SingularMeasure {
            mass: mu0.singular_mass() + mu1.singular_mass(),
        });
    }
    if !(nprime >= 1.0) {
        return Err(Error::Domain(format!("N' must be >= 1, got {nprime}")));
    }
    let coeff = |tt: f64, theta: f64| -> Result<ExtReal> {
        let p = DistortionParams::new(k, nprime, tt, theta)?;
        Ok(if reduced { sigma(p) } else { tau(p) })
    };
    let e = -1.0 / nprime;
    let mut sum = 0.0;
    let mut infinite = false;
    for tr in &plan.triples {
        if tr.w <= 0.0 {
            continue;
        }
        let theta = space.d(tr.i, tr.j);
        let (r0, r1) = (mu0.density(tr.i, space), mu1.density(tr.j, space));
        if !(r0 > 0.0 && r1 > 0.0) {
            return Err(Error::Domain(format!(
                "plan pair ({}, {}) leaves the supports of the end measures",
                tr.i, tr.j
            )));
        }
        match (coeff(1.0 - t, theta)?, coeff(t, theta)?) {
            // equal densities are factored out so that the identity plan
            // reproduces the entropy term bit for bit
            (ExtReal::Finite(a), ExtReal::Finite(b)) if r0 == r1 => {
                sum += tr.w * ((a + b) * r0.powf(e))
            }
            (ExtReal::Finite(a), ExtReal::Finite(b)) => {
                sum += tr.w * (a * r0.powf(e) + b * r1.powf(e))
            }
            _ => infinite = true,
        }
    }
    let lhs = renyi_entropy(&plan.intermediate(space)?, space, nprime);
    let (rhs, deficit, verdict) = if infinite {
        (f64::NEG_INFINITY, f64::NEG_INFINITY, Verdict::InfiniteRhs)
    } else {
        let rhs = -sum;
        let deficit = rhs - lhs;
        (
            rhs,
            deficit,
            if deficit >= -eps {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        )
    };
    Ok(CdReport {
        k,
        nprime,
        t,
        reduced,
        lhs,
        rhs,
        deficit,
        slack: plan.max_slack,
        eps,
        verdict,
    })
}

/// `diam <= pi * sqrt((N - 1) / K)`; vacuous for `K <= 0`.
pub fn bonnet_myers_check(space: &FiniteMetricMeasureSpace, k: f64, n: f64) -> Result<bool> {
    if k <= 0.0 {
        return Ok(true);
    }
    let bound = PI * ((n - 1.0).max(0.0) / k).sqrt();
    Ok(diameter(space)? <= bound + 1e-9)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdVerifyConfig {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub trials: usize,
    pub t_list: Vec<f64>,
    /// Defaults to `{N, N+1, 2N}`.
    pub nprimes: Option<Vec<f64>>,
    /// Defaults to 5x the grid's maximum spacing.
    pub eps: Option<f64>,
    /// Slack allowed when building plans; defaults to 2x the maximum spacing.
    pub plan_tol: Option<f64>,
    pub seed: u64,
}

impl CdVerifyConfig {
    pub fn new(k: f64, n: f64, trials: usize, seed: u64) -> Self {
        CdVerifyConfig {
            k,
            n,
            trials,
            t_list: vec![0.25, 0.5, 0.75],
            nprimes: None,
            eps: None,
            plan_tol: None,
            seed,
        }
    }

    pub fn resolved_nprimes(&self) -> Vec<f64> {
        self.nprimes
            .clone()
            .unwrap_or_else(|| vec![self.n, self.n + 1.0, 2.0 * self.n])
    }
}

/// One full/reduced report pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdRecord {
    pub trial: usize,
    pub full: CdReport,
    pub reduced: CdReport,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub pass: usize,
    pub fail: usize,
    pub infinite_rhs: usize,
}

impl VerdictCounts {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Pass => self.pass += 1,
            Verdict::Fail => self.fail += 1,
            Verdict::InfiniteRhs => self.infinite_rhs += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdVerifyReport {
    pub config: CdVerifyConfig,
    pub eps: f64,
    pub plan_tol: f64,
    pub nprimes: Vec<f64>,
    pub records: Vec<CdRecord>,
    #[serde(with = "crate::serde_ext")]
    pub min_deficit: f64,
    pub max_slack: f64,
    pub full: VerdictCounts,
    pub reduced: VerdictCounts,
}

impl CdVerifyReport {
    /// True when every full-coefficient report passed.
    pub fn all_pass(&self) -> bool {
        self.full.fail == 0 && self.full.infinite_rhs == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// One row per report: trial, t, Nprime, K, lhs, rhs, deficit, slack,
    /// verdict, and whether the reduced coefficients were used.
    pub fn csv_rows(&self) -> Vec<[String; 10]> {
        let row = |trial: usize, r: &CdReport| {
            [
                trial.to_string(),
                r.t.to_string(),
                r.nprime.to_string(),
                r.k.to_string(),
                r.lhs.to_string(),
                r.rhs.to_string(),
                r.deficit.to_string(),
                r.slack.to_string(),
                r.verdict.to_string(),
                r.reduced.to_string(),
            ]
        };
        self.records
            .iter()
            .flat_map(|rec| [row(rec.trial, &rec.full), row(rec.trial, &rec.reduced)])
            .collect()
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "trial", "t", "Nprime", "K", "lhs", "rhs", "deficit", "slack", "verdict", "reduced",
];

/// Draws `trials` seeded pairs of random measures on the grid and checks
/// the inequality for every `t` and `N'`, with both coefficient families.
/// Trial `k` uses stream `k` of a ChaCha generator seeded with `seed`, so
/// results do not depend on scheduling.
pub fn cd_verify(grid: &ConeGrid, config: &CdVerifyConfig) -> Result<CdVerifyReport> {
    let spacing = grid.max_spacing();
    let eps = config.eps.unwrap_or(5.0 * spacing);
    let plan_tol = config.plan_tol.unwrap_or(2.0 * spacing);
    let nprimes = config.resolved_nprimes();
    if let Some(&t) = config.t_list.iter().find(|&&t| !(t > 0.0 && t < 1.0)) {
        return Err(Error::Domain(format!("t = {t} not in (0, 1)")));
    }
    let space = grid.space();
    let per_trial = par::map_range(config.trials, |trial| -> Result<Vec<CdRecord>> {
        let wrap = |e: Error| Error::Trial {
            trial,
            source: Box::new(e),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(trial as u64);
        let mu0 = random_ac_measure(grid, &mut rng).map_err(wrap)?;
        let mu1 = random_ac_measure(grid, &mut rng).map_err(wrap)?;
        let coupling = solve_ot(space, &mu0, &mu1).map_err(wrap)?;
        let mut out = Vec::new();
        for &t in &config.t_list {
            let plan = build_geodesic_plan(space, &coupling, t, plan_tol).map_err(wrap)?;
            for &np in &nprimes {
                let full = cd_inequality_check(&mu0, &mu1, &plan, space, config.k, np, false, eps)
                    .map_err(wrap)?;
                let reduced =
                    cd_inequality_check(&mu0, &mu1, &plan, space, config.k, np, true, eps)
                        .map_err(wrap)?;
                out.push(CdRecord {
                    trial,
                    full,
                    reduced,
                });
            }
        }
        Ok(out)
    });
    let mut records = Vec::new();
    for r in per_trial {
        records.extend(r?);
    }
    Ok(CdVerifyReport::from_records(
        config.clone(),
        eps,
        plan_tol,
        nprimes,
        records,
    ))
}

impl CdVerifyReport {
    /// Aggregates records in the given order.
    pub fn from_records(
        config: CdVerifyConfig,
        eps: f64,
        plan_tol: f64,
        nprimes: Vec<f64>,
        records: Vec<CdRecord>,
    ) -> CdVerifyReport {
        let mut full = VerdictCounts::default();
        let mut reduced = VerdictCounts::default();
        let mut min_deficit = f64::INFINITY;
        let mut max_slack: f64 = 0.0;
        for rec in &records {
            full.add(rec.full.verdict);
            reduced.add(rec.reduced.verdict);
            min_deficit = min_deficit.min(rec.full.deficit);
            max_slack = max_slack.max(rec.full.slack);
        }
        CdVerifyReport {
            config,
            eps,
            plan_tol,
            nprimes,
            records,
            min_deficit,
            max_slack,
            full,
            reduced,
        }
    }
}
