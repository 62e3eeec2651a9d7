//! Computations behind the Frobenius stratification of rank-3 stable bundles
//! on a genus-2 curve in characteristic 3.
//!
//! * [`gfield`]: finite fields `F_{p^m}` and the projective plane over them.
//! * [`polygon`]: lattice HN polygons, their partial order, and the enumeration
//!   of admissible polygons for Frobenius pull-backs.
//! * [`slopecalc`]: degree formulas for `F_*`/`F^*` and slope certificates.
//! * [`localmodel`]: the truncated stalk `k[t] (x)_{k[t^p]} k[t]`, its
//!   `tau = t (x) 1 - 1 (x) t` calculus, and classification of colength-one
//!   submodules.
//! * [`strata`]: dimensions of Quot strata and moduli strata.
//! * [`verify`]: brute-force cross-checks.

pub mod gfield;
pub mod localmodel;
pub mod polygon;
pub mod slopecalc;
pub mod strata;
pub mod verify;

pub use gfield::{projective_plane, FieldElement, FieldError, FieldSpec, ProjectivePoint};
pub use localmodel::{
    classify_stratum, contains_monomial, intersection_colength, membership, pullback_span,
    stratum_census, submodule_from_point, tau_power, LocalModelError, ModelSpec, SubmoduleV,
    SubspaceBasis, TensorElement,
};
pub use polygon::{
    dominates, enumerate_destabilized_polygons, name_polygon, polygon_of_filtration, CurveParams,
    Dominance, FiltrationData, Label, LatticePolygon, PolygonError, Rational,
};
pub use slopecalc::{BundleData, Certificate, Slope, SlopeError};
pub use strata::{dualize_polygon, strata_table, StrataError, StrataTable, StratumRecord};
