use std::f64::consts::PI;

use conecd::{s_fun, sigma, tau, DistortionParams, ExtReal};
use serde_json::Value;

fn oracle() -> Vec<Value> {
    serde_json::from_str(include_str!("data/coeff_oracle.json")).unwrap()
}

fn check(row: &Value, name: &str, got: ExtReal) {
    match (&row[name], got) {
        (Value::String(s), ExtReal::Infinite) => assert_eq!(s, "inf"),
        (Value::Number(x), ExtReal::Finite(y)) => {
            if row["kind"] == "value" {
                let x = x.as_f64().unwrap();
                assert!((x - y).abs() <= 1e-12, "{name} at {row}: {y} vs {x}");
            }
        }
        (want, got) => panic!("{name} at {row}: expected {want}, got {got}"),
    }
}

#[test]
fn matches_high_precision_values() {
    for row in oracle() {
        let f = |k: &str| row[k].as_f64().unwrap();
        let p = DistortionParams::new(f("k"), f("n"), f("t"), f("theta")).unwrap();
        let s = s_fun(p.k, p.theta);
        assert!((s - f("s_fun")).abs() <= 1e-12, "s_fun at {row}");
        check(&row, "sigma", sigma(p));
        check(&row, "tau", tau(p));
    }
}

#[test]
fn infinite_branch_boundary() {
    for row in oracle() {
        let f = |k: &str| row[k].as_f64().unwrap();
        let p = DistortionParams::new(f("k"), f("n"), f("t"), f("theta")).unwrap();
        assert_eq!(
            sigma(p).is_infinite(),
            p.k * p.theta * p.theta >= p.n * PI * PI
        );
    }
}

#[test]
fn documented_examples() {
    assert_eq!(s_fun(0.0, 2.7), 1.0);
    assert_eq!(s_fun(1.0, 0.0), 1.0);
    let p = |k, n, t, x| DistortionParams::new(k, n, t, x).unwrap();
    assert!(sigma(p(10.0, 1.0, 0.5, PI)).is_infinite());
    assert_eq!(sigma(p(0.0, 3.0, 0.25, 1.9)), ExtReal::Finite(0.25));
    assert_eq!(tau(p(0.0, 5.0, 0.3, 2.0)), ExtReal::Finite(0.3));
    assert!(tau(p(2.0, 2.0, 0.5, PI)).is_infinite());
}
