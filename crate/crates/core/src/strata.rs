//! Dimension ledger for the Frobenius strata of rank-3 stable bundles on a
//! genus-2 curve in characteristic 3.
//!
//! Strata `Psi2`..`Psi4` are reached through the Quot scheme of
//! `F_* L`, `deg L = d - 1`: the fiber over a point `x` and a line bundle is
//! `P^2`, `P^1` or a point, and the base contributes `dim X + dim Pic = 1 + g`.
//! `Psi1` is obtained from `Psi2` by dualizing.

use serde::Serialize;
use thiserror::Error;

use crate::polygon::{name_polygon, CurveParams, Label, LatticePolygon};

/// `dim X` for a curve.
pub const CURVE_DIM: i64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("{0} has no Quot-scheme fiber")]
    NoQuotFiber(Label),
    #[error("{0} is not a destabilized stratum label")]
    NotAStratum(Label),
    #[error("dimension table is only known for genus 2, got {0}")]
    UnsupportedGenus(i64),
    #[error("moduli dimension needs r >= 1 and g >= 2, got r = {0}, g = {1}")]
    BadModuliParams(i64, i64),
}

/// Dimension of the Quot fiber over `(x, [L])` for the closed stratum `label+`.
pub fn quot_fiber_dimension(label: Label) -> Result<i64, StrataError> {
    match label {
        Label::Psi2 => Ok(2),
        Label::Psi3 => Ok(1),
        Label::Psi4 => Ok(0),
        Label::Psi1 => Err(StrataError::NoQuotFiber(label)),
        _ => Err(StrataError::NotAStratum(label)),
    }
}

/// `fiber + dim X + dim Pic^{(d-1)}(X) = fiber + 1 + g`.
pub fn quot_stratum_dimension(label: Label, g: i64) -> Result<i64, StrataError> {
    Ok(quot_fiber_dimension(label)? + CURVE_DIM + g)
}

/// `dim M^s(r, d) = r^2 (g - 1) + 1`.
pub fn moduli_dimension(r: i64, g: i64) -> Result<i64, StrataError> {
    if r < 1 || g < 2 {
        return Err(StrataError::BadModuliParams(r, g));
    }
    Ok(r * r * (g - 1) + 1)
}

/// HN polygon of the dual bundle: vertices `(rho, delta) -> (r - rho, delta - D)`,
/// read from the other end.
pub fn dualize_polygon(poly: &LatticePolygon) -> LatticePolygon {
    let (r, big_d) = poly.endpoint();
    let vertices: Vec<(i64, i64)> = poly
        .vertices()
        .iter()
        .rev()
        .map(|&(rho, delta)| (r - rho, delta - big_d))
        .collect();
    LatticePolygon::new(vertices).expect("dual of a convex polygon is convex")
}

/// Label of the dual stratum, found by dualizing the template polygon.
pub fn dual_label(label: Label) -> Result<Label, StrataError> {
    let template = label.template(0).ok_or(StrataError::NotAStratum(label))?;
    let params = CurveParams {
        p: 3,
        g: 2,
        r: 3,
        d: 0,
    };
    Ok(name_polygon(&dualize_polygon(&template), &params).expect("regime is (3,2,3)"))
}

/// Dimension of `S(3, d, label)` inside `M^s(3, d)` for genus 2.
///
/// `Psi2`, `Psi3`: the classifying map is injective on the locus where `F^*E`
/// has a unique minimal-slope quotient line bundle, so Quot dimensions carry
/// over. `Psi4`: the bundles are push-forwards `F_* L'`, parameterized by the
/// Jacobian. `Psi1`: dual of `Psi2`.
pub fn moduli_stratum_dimension(label: Label, g: i64) -> Result<i64, StrataError> {
    if g != 2 {
        return Err(StrataError::UnsupportedGenus(g));
    }
    match label {
        Label::Psi2 | Label::Psi3 => quot_stratum_dimension(label, g),
        Label::Psi4 => Ok(g),
        Label::Psi1 => moduli_stratum_dimension(dual_label(label)?, g),
        _ => Err(StrataError::NotAStratum(label)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumRecord {
    pub label: Label,
    #[serde(rename = "vertices")]
    pub polygon: LatticePolygon,
    pub fiber_dim: Option<i64>,
    pub quot_dim: Option<i64>,
    pub stratum_dim: i64,
    #[serde(skip)]
    pub closed_stratum_dim: i64,
    pub closed_equals_open: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrataTable {
    pub d: i64,
    pub strata: Vec<StratumRecord>,
    pub moduli_dimension: i64,
    /// `dim M^s - max stratum dim`.
    pub codimension: i64,
    /// Number of strata attaining the maximal dimension.
    pub top_components: usize,
}

/// The four strata for `(p, g, r) = (3, 2, 3)` and degree `d`.
pub fn strata_table(d: i64) -> StrataTable {
    const G: i64 = 2;
    let strata: Vec<StratumRecord> = Label::DESTABILIZED
        .iter()
        .map(|&label| {
            let fiber_dim = quot_fiber_dimension(label).ok();
            let quot_dim = quot_stratum_dimension(label, G).ok();
            let dim = moduli_stratum_dimension(label, G).expect("genus 2 regime");
            StratumRecord {
                label,
                polygon: label.template(d).unwrap(),
                fiber_dim,
                quot_dim,
                stratum_dim: dim,
                closed_stratum_dim: dim,
                closed_equals_open: true,
            }
        })
        .collect();
    let moduli = moduli_dimension(3, G).unwrap();
    let top = strata.iter().map(|s| s.stratum_dim).max().unwrap();
    StrataTable {
        d,
        moduli_dimension: moduli,
        codimension: moduli - top,
        top_components: strata.iter().filter(|s| s.stratum_dim == top).count(),
        strata,
    }
}
