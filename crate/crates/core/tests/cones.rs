mod common;

use std::f64::consts::PI;

use conecd::cones::uniform_radial_grid;
use conecd::mms::{antipode_set, validate};
use conecd::{build_eucl_cone, build_sph_cone, circle_space, ConeGrid};

#[test]
fn cone_over_circle_is_the_plane() {
    let g = build_eucl_cone(
        &circle_space(24).unwrap(),
        &uniform_radial_grid(10, 3.0),
        1.0,
    )
    .unwrap();
    for i in 0..g.len() {
        for j in 0..g.len() {
            let (p, q) = (common::planar(&g, i), common::planar(&g, j));
            assert!((g.space().d(i, j) - (p[0] - q[0]).hypot(p[1] - q[1])).abs() < 1e-12);
        }
    }
}

#[test]
fn suspension_of_circle_is_the_sphere() {
    let g = build_sph_cone(
        &circle_space(24).unwrap(),
        &uniform_radial_grid(10, PI),
        1.0,
    )
    .unwrap();
    for i in 0..g.len() {
        for j in 0..g.len() {
            let gc = common::great_circle(common::spherical(&g, i), common::spherical(&g, j));
            assert!((g.space().d(i, j) - gc).abs() < 1e-12);
        }
    }
}

#[test]
fn suspension_has_antipodes() {
    let g = build_sph_cone(&circle_space(16).unwrap(), &uniform_radial_grid(8, PI), 1.0).unwrap();
    let s = antipode_set(g.space(), 0, 1e-12);
    assert_eq!(s.points, vec![g.len() - 1]);
    assert!(validate(g.space()).is_empty());
}

#[test]
fn grid_file_round_trip() {
    let g = build_eucl_cone(&circle_space(8).unwrap(), &uniform_radial_grid(4, 2.0), 2.0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.json");
    g.save(&path).unwrap();
    let back = ConeGrid::load(&path).unwrap();
    assert_eq!(back.space(), g.space());
    assert_eq!(back.exponent(), 2.0);
}
