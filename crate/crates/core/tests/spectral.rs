use std::f64::consts::PI;

use conecd::cones::uniform_radial_grid;
use conecd::spectral::{default_bandwidth, gap_and_vector};
use conecd::{
    build_sph_cone, circle_space, graph_laplacian, lichnerowicz_check, poincare_quotient,
    spectral_gap, ConeGrid,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sphere(nb: usize, cells: usize) -> ConeGrid {
    build_sph_cone(
        &circle_space(nb).unwrap(),
        &uniform_radial_grid(cells, PI),
        1.0,
    )
    .unwrap()
}

#[test]
fn circle_gap_near_one() {
    let c = circle_space(64).unwrap();
    let gap = spectral_gap(&graph_laplacian(&c, default_bandwidth(&c)).unwrap()).unwrap();
    assert!((gap - 1.0).abs() < 0.1, "{gap}");
}

#[test]
fn gap_ignores_labels_and_mass_scale() {
    let g = sphere(24, 12);
    let space = g.space();
    let h = default_bandwidth(space);
    let gap = spectral_gap(&graph_laplacian(space, h).unwrap()).unwrap();

    let mut perm: Vec<usize> = (0..space.len()).collect();
    perm.reverse();
    perm.swap(3, 40);
    let relabeled = space.permuted(&perm).unwrap();
    let g2 = spectral_gap(&graph_laplacian(&relabeled, h).unwrap()).unwrap();
    assert!((g2 - gap).abs() <= 1e-9 * gap, "{g2} vs {gap}");

    let scaled = space
        .with_weights(space.weights().iter().map(|w| 7.5 * w).collect())
        .unwrap();
    let g3 = spectral_gap(&graph_laplacian(&scaled, h).unwrap()).unwrap();
    assert!((g3 - gap).abs() <= 1e-9 * gap, "{g3} vs {gap}");
}

#[test]
fn random_functions_respect_the_gap() {
    let g = sphere(24, 12);
    let op = graph_laplacian(g.space(), default_bandwidth(g.space())).unwrap();
    let (gap, v) = gap_and_vector(&op).unwrap();
    assert!((poincare_quotient(&v, &op).unwrap() - gap).abs() < 1e-8);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let f: Vec<f64> = (0..op.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        assert!(poincare_quotient(&f, &op).unwrap() >= gap - 1e-8);
    }
}

#[test]
fn height_function_quotient_near_two() {
    let g = sphere(48, 24);
    let op = graph_laplacian(g.space(), default_bandwidth(g.space())).unwrap();
    let z: Vec<f64> = op
        .vertices()
        .iter()
        .map(|&i| g.point(i).radial().cos())
        .collect();
    let q = poincare_quotient(&z, &op).unwrap();
    assert!((q - 2.0).abs() < 0.3, "{q}");
}

#[test]
fn overclaimed_dimension_fails() {
    let g = sphere(32, 16);
    let r = lichnerowicz_check(&g, 3, None, 0.15).unwrap();
    assert!(!r.verdict && r.bound == 4.0);
}

#[test]
fn refinement_trend() {
    // soft check: only reported
    let coarse = lichnerowicz_check(&sphere(16, 8), 1, None, 0.15)
        .unwrap()
        .gap;
    let fine = lichnerowicz_check(&sphere(32, 16), 1, None, 0.15)
        .unwrap()
        .gap;
    if (fine - 2.0).abs() > (coarse - 2.0).abs() {
        eprintln!("warning: refined gap {fine} is further from 2 than {coarse}");
    }
    assert!(fine.is_finite() && coarse.is_finite());
}

#[test]
fn degenerate_grid_is_an_error() {
    let g = build_sph_cone(&circle_space(4).unwrap(), &[], 1.0).unwrap();
    assert!(lichnerowicz_check(&g, 1, None, 0.15).is_err());
}
