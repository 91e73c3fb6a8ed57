//! Numerical verification of generalized lower Ricci bounds on cones.
//!
//! The crate discretizes metric measure spaces, builds N-Euclidean and
//! N-spherical cones over them, solves exact optimal transport with
//! squared-distance cost and checks the curvature-dimension inequality
//! CD(K,N) (and its reduced variant CD*(K,N)) along the resulting geodesic
//! plans. A graph-Laplacian module estimates spectral gaps for the
//! Lichnerowicz bound on spherical cones.
//!
//! Heavy loops (distance fills, plan construction, trial batches, operator
//! assembly) run on rayon when the `parallel` feature is enabled and fall
//! back to plain iterators otherwise. Results are identical either way:
//! parallel sections only map and collect, floating-point reductions stay
//! sequential.

pub mod cdcheck;
pub mod coeffs;
pub mod cones;
pub mod error;
pub mod measures;
pub mod mms;
pub mod par;
pub mod serde_ext;
pub mod spectral;
pub mod transport;

pub use cdcheck::{
    bonnet_myers_check, cd_inequality_check, cd_verify, renyi_entropy, CdReport, CdVerifyConfig,
    CdVerifyReport, Verdict,
};
pub use coeffs::{s_fun, sigma, tau, DistortionParams, ExtReal};
pub use cones::{
    build_eucl_cone, build_sph_cone, cone_ricci, eucl_cone_dist, sph_cone_dist, sph_cone_ricci,
    ConeGrid, ConeKind, ConePoint,
};
pub use error::{Error, Result};
pub use mms::{circle_space, FiniteMetricMeasureSpace, ProbabilityVector, ValidationReport};
pub use spectral::{
    graph_laplacian, lichnerowicz_check, poincare_quotient, spectral_gap, GraphOperator,
};
pub use transport::{
    apex_scan, build_geodesic_plan, is_cyclically_monotone, midpoints, solve_ot, wasserstein,
    ApexScanReport, Coupling, GeodesicPlan,
};
