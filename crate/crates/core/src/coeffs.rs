//! Volume distortion coefficients.
//!
//! `s_fun` is the normalized sine/sinh profile, `sigma` the reduced
//! coefficient family and `tau` the full family
//! `tau = t^{1/N} sigma_{K,N-1}^{1-1/N}`. The infinite branch of `sigma` is
//! kept explicit through [`ExtReal`].

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real number or `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(into = "f64_repr::Repr", from = "f64_repr::Repr")]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::Infinite => None,
        }
    }

    /// Lossy view as `f64` (`+inf` maps to `f64::INFINITY`).
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    /// `self^p` for `p >= 0`, with `x^0 = 1` for every `x` including `+inf`.
    pub fn powf(self, p: f64) -> ExtReal {
        if p == 0.0 {
            return ExtReal::Finite(1.0);
        }
        match self {
            ExtReal::Finite(x) => ExtReal::Finite(x.powf(p)),
            ExtReal::Infinite => ExtReal::Infinite,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::Infinite => f.write_str("inf"),
        }
    }
}

mod f64_repr {
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    pub struct Repr(#[serde(with = "crate::serde_ext")] pub f64);

    impl From<super::ExtReal> for Repr {
        fn from(x: super::ExtReal) -> Self {
            Repr(x.to_f64())
        }
    }

    impl From<Repr> for super::ExtReal {
        fn from(r: Repr) -> Self {
            if r.0 == f64::INFINITY {
                super::ExtReal::Infinite
            } else {
                super::ExtReal::Finite(r.0)
            }
        }
    }
}

/// Curvature `k`, dimension `n`, interpolation fraction `t` and distance
/// `theta` for one coefficient evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionParams {
    pub k: f64,
    pub n: f64,
    pub t: f64,
    pub theta: f64,
}

impl DistortionParams {
    pub fn new(k: f64, n: f64, t: f64, theta: f64) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::Domain(format!("K must be finite, got {k}")));
        }
        if !(n >= 1.0) || !n.is_finite() {
            return Err(Error::Domain(format!("N must be >= 1, got {n}")));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("t must lie in [0,1], got {t}")));
        }
        if !(theta >= 0.0) || !theta.is_finite() {
            return Err(Error::Domain(format!("theta must be >= 0, got {theta}")));
        }
        Ok(Self { k, n, t, theta })
    }

    /// Same parameters with `t` replaced by `1 - t`.
    pub fn reversed(self) -> Self {
        Self {
            t: 1.0 - self.t,
            ..self
        }
    }
}

/// `sin(sqrt(k) x) / (sqrt(k) x)` for `k > 0`, `1` for `k = 0`,
/// `sinh(sqrt(-k) x) / (sqrt(-k) x)` for `k < 0`; `1` at `theta = 0`.
pub fn s_fun(k: f64, theta: f64) -> f64 {
    if k == 0.0 || theta == 0.0 {
        return 1.0;
    }
    if k > 0.0 {
        let x = k.sqrt() * theta;
        x.sin() / x
    } else {
        let x = (-k).sqrt() * theta;
        x.sinh() / x
    }
}

/// Reduced distortion coefficient `sigma^{(t)}_{K,N}(theta)`.
///
/// Requires `N > 0`. Infinite iff `K theta^2 >= N pi^2`; equals `t` at
/// `theta = 0`.
pub fn sigma(p: DistortionParams) -> ExtReal {
    sigma_raw(p.k, p.n, p.t, p.theta)
}

fn sigma_raw(k: f64, n: f64, t: f64, theta: f64) -> ExtReal {
    debug_assert!(n > 0.0);
    if k * theta * theta >= n * PI * PI {
        return ExtReal::Infinite;
    }
    if theta == 0.0 || k == 0.0 {
        return ExtReal::Finite(t);
    }
    let kn = k / n;
    ExtReal::Finite(t * s_fun(kn, t * theta) / s_fun(kn, theta))
}

/// Full distortion coefficient `tau^{(t)}_{K,N}(theta)`.
///
/// At `N = 1` the exponent on `sigma_{K,0}` vanishes and the result is `t`.
pub fn tau(p: DistortionParams) -> ExtReal {
    let DistortionParams { k, n, t, theta } = p;
    if n == 1.0 {
        return ExtReal::Finite(t);
    }
    match sigma_raw(k, n - 1.0, t, theta) {
        // t^{1/N} t^{1-1/N} = t; keep it exact.
        ExtReal::Finite(x) if x == t => ExtReal::Finite(t),
        ExtReal::Finite(x) => ExtReal::Finite(t.powf(1.0 / n) * x.powf(1.0 - 1.0 / n)),
        ExtReal::Infinite => ExtReal::Infinite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(k: f64, n: f64, t: f64, theta: f64) -> DistortionParams {
        DistortionParams::new(k, n, t, theta).unwrap()
    }

    #[test]
    fn s_fun_examples() {
        assert_eq!(s_fun(0.0, 2.7), 1.0);
        assert_eq!(s_fun(1.0, 0.0), 1.0);
        assert_abs_diff_eq!(
            s_fun(1.0, PI / 2.0),
            0.636_619_772_367_581_4,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(s_fun(-1.0, 1.0), 1.175_201_193_643_801_4, epsilon = 1e-12);
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(p(10.0, 1.0, 0.5, PI)), ExtReal::Infinite);
        assert_eq!(sigma(p(0.0, 3.0, 0.25, 1.9)), ExtReal::Finite(0.25));
        let v = sigma(p(1.0, 1.0, 0.5, PI / 2.0)).finite().unwrap();
        assert_abs_diff_eq!(v, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(p(0.0, 5.0, 0.3, 2.0)), ExtReal::Finite(0.3));
        let v = tau(p(1.0, 2.0, 0.5, PI / 2.0)).finite().unwrap();
        assert_abs_diff_eq!(v, 0.594_603_557_501_360_5, epsilon = 1e-12);
        assert_eq!(tau(p(2.0, 2.0, 0.5, PI)), ExtReal::Infinite);
    }

    #[test]
    fn tau_at_dimension_one_is_t_even_on_infinite_branch() {
        assert_eq!(tau(p(50.0, 1.0, 0.4, 3.0)), ExtReal::Finite(0.4));
    }

    #[test]
    fn zero_distance_returns_limit() {
        assert_eq!(sigma(p(3.0, 2.0, 0.7, 0.0)), ExtReal::Finite(0.7));
        assert_eq!(tau(p(-3.0, 4.0, 0.7, 0.0)), ExtReal::Finite(0.7));
    }

    #[test]
    fn endpoints_of_t() {
        for &(k, n, th) in &[(1.0, 2.0, 1.0), (-2.0, 3.0, 2.5), (0.5, 5.0, 3.0)] {
            assert_eq!(sigma(p(k, n, 0.0, th)), ExtReal::Finite(0.0));
            assert_eq!(sigma(p(k, n, 1.0, th)), ExtReal::Finite(1.0));
        }
    }

    #[test]
    fn params_reject_out_of_range() {
        assert!(DistortionParams::new(0.0, 0.5, 0.5, 1.0).is_err());
        assert!(DistortionParams::new(0.0, 2.0, 1.5, 1.0).is_err());
        assert!(DistortionParams::new(0.0, 2.0, 0.5, -1.0).is_err());
    }

    #[test]
    fn ext_real_json_round_trip() {
        let v = vec![ExtReal::Finite(0.25), ExtReal::Infinite];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[0.25,"inf"]"#);
        let back: Vec<ExtReal> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn flat_coefficients_are_exactly_t(n in 1.0f64..20.0, t in 0.0f64..=1.0, th in 0.0f64..10.0) {
                prop_assert_eq!(sigma(p(0.0, n, t, th)), ExtReal::Finite(t));
                prop_assert_eq!(tau(p(0.0, n, t, th)), ExtReal::Finite(t));
            }

            #[test]
            fn finite_coefficients_positive(k in -5.0f64..5.0, n in 1.0f64..10.0, t in 0.01f64..=1.0, th in 0.0f64..3.0) {
                if let ExtReal::Finite(s) = sigma(p(k, n, t, th)) {
                    prop_assert!(s > 0.0);
                }
                if let ExtReal::Finite(s) = tau(p(k, n, t, th)) {
                    prop_assert!(s > 0.0);
                }
            }

            #[test]
            fn sigma_below_tau_for_nonnegative_k(k in 0.0f64..5.0, n in 1.0f64..10.0, t in 0.0f64..=1.0, th in 0.0f64..3.0) {
                let par = p(k, n, t, th);
                if let (ExtReal::Finite(s), ExtReal::Finite(u)) = (sigma(par), tau(par)) {
                    prop_assert!(s <= u * (1.0 + 1e-14) + 1e-300, "sigma {} > tau {}", s, u);
                }
            }

            #[test]
            fn reversed_matches_direct_evaluation(k in -3.0f64..3.0, n in 1.0f64..8.0, t in 0.0f64..=1.0, th in 0.0f64..2.0) {
                let par = p(k, n, t, th);
                let direct = tau(p(k, n, 1.0 - t, th));
                prop_assert_eq!(tau(par.reversed()), direct);
            }
        }
    }
}
