//! Seeded measure generators on cone grids and the named scenarios.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cones::{ConeGrid, ConeKind};
use crate::error::{Error, Result};
use crate::mms::ProbabilityVector;

/// Random absolutely continuous measure: a mixture of 2 to 4 indicator
/// blobs (uniform density with respect to the grid measure) over boxes of
/// base points times radial nodes, smoothed by one step of neighbour
/// averaging. The first radial node (and the last on a spherical grid) and
/// the collapsed fibres carry no mass.
pub fn random_ac_measure<R: Rng>(grid: &ConeGrid, rng: &mut R) -> Result<ProbabilityVector> {
    let nb = grid.base().len();
    let (lo, hi) = allowed_radial(grid)?;
    let n = grid.len();
    let blobs = rng.gen_range(2..=4);
    let mut density = vec![0.0; n];
    for _ in 0..blobs {
        let centre = rng.gen_range(0..nb);
        let half = rng.gen_range(1..=(nb / 8).max(1));
        let k0 = rng.gen_range(lo..=hi);
        let k1 = (k0 + rng.gen_range(1..=((hi - lo) / 3).max(1))).min(hi);
        let share = rng.gen_range(0.5..1.5);
        let mut cells = Vec::new();
        for off in 0..=2 * half {
            let b = (centre + nb + off - half) % nb;
            for k in k0..=k1 {
                cells.push(grid.index_of(b, k));
            }
        }
        cells.sort_unstable();
        cells.dedup();
        let vol: f64 = cells.iter().map(|&i| grid.space().weight(i)).sum();
        for &i in &cells {
            density[i] += share / vol;
        }
    }
    let smoothed = smooth(grid, &density, lo, hi);
    let mass: Vec<f64> = smoothed
        .iter()
        .enumerate()
        .map(|(i, &rho)| rho * grid.space().weight(i))
        .collect();
    ProbabilityVector::normalized(mass, grid.space())
}

fn allowed_radial(grid: &ConeGrid) -> Result<(usize, usize)> {
    let m = grid.radial_grid().len();
    let hi = match grid.kind() {
        ConeKind::Euclidean => m.checked_sub(1),
        ConeKind::Spherical => m.checked_sub(2),
    };
    match hi {
        Some(hi) if hi >= 1 && grid.base().len() >= 2 => Ok((1, hi)),
        _ => Err(Error::Domain(
            "grid too small for the measure generator".into(),
        )),
    }
}

fn base_neighbours(grid: &ConeGrid) -> Vec<Vec<usize>> {
    let base = grid.base();
    let nb = base.len();
    (0..nb)
        .map(|b| {
            let nn = (0..nb)
                .filter(|&c| c != b)
                .map(|c| base.d(b, c))
                .fold(f64::INFINITY, f64::min);
            (0..nb)
                .filter(|&c| c != b && base.d(b, c) <= 1.01 * nn)
                .collect()
        })
        .collect()
}

// Weighted average of the density over each point, its base neighbours at
// the same radius and its radial neighbours; masked nodes stay empty.
fn smooth(grid: &ConeGrid, density: &[f64], lo: usize, hi: usize) -> Vec<f64> {
    let nbrs = base_neighbours(grid);
    let w = grid.space().weights();
    let nb = grid.base().len();
    let mut out = vec![0.0; density.len()];
    for k in lo..=hi {
        for b in 0..nb {
            let i = grid.index_of(b, k);
            let mut num = density[i] * w[i];
            let mut den = w[i];
            let mut add = |j: usize| {
                num += density[j] * w[j];
                den += w[j];
            };
            for &c in &nbrs[b] {
                add(grid.index_of(c, k));
            }
            if k > lo {
                add(grid.index_of(b, k - 1));
            }
            if k < hi {
                add(grid.index_of(b, k + 1));
            }
            out[i] = if den > 0.0 { num / den } else { 0.0 };
        }
    }
    out
}

/// A pair of measures with the interpolation fraction they are meant for.
#[derive(Debug, Clone)]
pub struct ScenarioPair {
    pub mu0: ProbabilityVector,
    pub mu1: ProbabilityVector,
    pub s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    AntipodalDirac,
    GenericBlobs,
    NearAntipodal,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "antipodal-dirac" => Ok(Preset::AntipodalDirac),
            "generic-blobs" => Ok(Preset::GenericBlobs),
            "near-antipodal" => Ok(Preset::NearAntipodal),
            other => Err(Error::Domain(format!("unknown preset '{other}'"))),
        }
    }
}

/// Diracs at antipodal base points. On a Euclidean cone both sit at the
/// radial node nearest 1 and `s = 1/2`; on a spherical cone `s = 1/3` and
/// the radii are the nodes nearest `pi/6` and twice that, so the geodesic
/// crosses the south pole at time `s`.
pub fn antipodal_dirac(grid: &ConeGrid) -> Result<ScenarioPair> {
    let base = grid.base();
    let b1 = (1..base.len())
        .find(|&c| base.d(0, c) >= PI - 1e-9)
        .ok_or_else(|| Error::Domain("base point 0 has no antipode".into()))?;
    let (s, k0, k1) = match grid.kind() {
        ConeKind::Euclidean => {
            let k = grid.nearest_radial_node(1.0).ok_or(Error::EmptySupport)?;
            (0.5, k, k)
        }
        ConeKind::Spherical => {
            let k0 = grid
                .nearest_radial_node(PI / 6.0)
                .ok_or(Error::EmptySupport)?;
            let k1 = grid
                .nearest_radial_node(2.0 * grid.radial_grid()[k0])
                .ok_or(Error::EmptySupport)?;
            (1.0 / 3.0, k0, k1)
        }
    };
    Ok(ScenarioPair {
        mu0: ProbabilityVector::dirac(grid.space(), grid.index_of(0, k0))?,
        mu1: ProbabilityVector::dirac(grid.space(), grid.index_of(b1, k1))?,
        s,
    })
}

/// Two independent draws of [`random_ac_measure`].
pub fn generic_blobs<R: Rng>(grid: &ConeGrid, rng: &mut R) -> Result<ScenarioPair> {
    Ok(ScenarioPair {
        mu0: random_ac_measure(grid, rng)?,
        mu1: random_ac_measure(grid, rng)?,
        s: 0.5,
    })
}

/// Mass spread over the band at distance `[0.92 B, 0.99 B]` from an
/// equatorial point `p`, sent to a Dirac at `p`, where
/// `B = pi * sqrt((N - 1) / K)` is the diameter bound of CD(K, N). Distances
/// stay below `B`, so every coefficient is finite but large.
pub fn near_antipodal(grid: &ConeGrid, k: f64, n: f64) -> Result<ScenarioPair> {
    if grid.kind() != ConeKind::Spherical {
        return Err(Error::Domain(
            "near-antipodal preset needs a spherical cone".into(),
        ));
    }
    if !(k > 0.0) || n < 1.0 {
        return Err(Error::Domain(format!(
            "near-antipodal preset needs K > 0, N >= 1 (got K={k}, N={n})"
        )));
    }
    let bound = PI * ((n - 1.0) / k).sqrt();
    if bound >= PI {
        return Err(Error::Domain(format!(
            "diameter bound {bound} is not below pi; the grid cannot violate it"
        )));
    }
    let kp = grid
        .nearest_radial_node(PI / 2.0)
        .ok_or(Error::EmptySupport)?;
    let p = grid.index_of(0, kp);
    let space = grid.space();
    let raw: Vec<f64> = (0..space.len())
        .map(|i| {
            let d = space.d(p, i);
            if d >= 0.92 * bound && d <= 0.99 * bound {
                space.weight(i)
            } else {
                0.0
            }
        })
        .collect();
    Ok(ScenarioPair {
        mu0: ProbabilityVector::normalized(raw, space)?,
        mu1: ProbabilityVector::dirac(space, p)?,
        s: 0.5,
    })
}

/// Builds the pair for a named preset. Generic pairs come from stream
/// `trial` of a ChaCha generator seeded with `seed`; the near-antipodal
/// preset needs `(K, N)`.
pub fn preset_pair(
    preset: Preset,
    grid: &ConeGrid,
    seed: u64,
    trial: usize,
    kn: Option<(f64, f64)>,
) -> Result<ScenarioPair> {
    match preset {
        Preset::AntipodalDirac => antipodal_dirac(grid),
        Preset::GenericBlobs => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            generic_blobs(grid, &mut rng)
        }
        Preset::NearAntipodal => {
            let (k, n) =
                kn.ok_or_else(|| Error::Domain("near-antipodal preset needs K and N".into()))?;
            near_antipodal(grid, k, n)
        }
    }
}
