//! Independent re-computations used to cross-check the main routines.
//!
//! These deliberately avoid the code paths they check: the polygon scan works
//! on integer height vectors with cross-multiplied slope comparisons instead of
//! the recursive rational enumeration.

use crate::localmodel::{check_all_points, LocalModelError, ModelSpec, PointReport};
use crate::polygon::{CurveParams, LatticePolygon};

/// `floor(a / b)` for `b > 0`.
fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// Brute-force scan: every subset of interior ranks as vertex abscissas, every
/// integer height at those ranks inside the slope box `pd/r ± (r-1)(2g-2)`.
/// Keeps candidates that are strictly convex, have at least two segments, and
/// respect the slope-gap bound. Sorted lexicographically.
pub fn brute_force_destabilized_polygons(params: &CurveParams) -> Vec<LatticePolygon> {
    let r = params.r;
    let big_d = params.p as i64 * params.d;
    let radius = (r - 1) * (2 * params.g - 2);
    let gap = 2 * params.g - 2;
    // heights at rank x lie in [x (D - r radius) / r, x (D + r radius) / r]
    let box_at = |x: i64| {
        (
            ceil_div(x * (big_d - r * radius), r),
            floor_div(x * (big_d + r * radius), r),
        )
    };

    let mut found = Vec::new();
    let interior = (r - 1).max(0) as u32;
    for mask in 1u64..(1u64 << interior) {
        let xs: Vec<i64> = (1..r).filter(|x| mask >> (x - 1) & 1 == 1).collect();
        let ranges: Vec<(i64, i64)> = xs.iter().map(|&x| box_at(x)).collect();
        if ranges.iter().any(|(lo, hi)| lo > hi) {
            continue;
        }
        let mut heights: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let mut vertices = vec![(0, 0)];
            vertices.extend(xs.iter().copied().zip(heights.iter().copied()));
            vertices.push((r, big_d));
            if acceptable(&vertices, gap) {
                found.push(LatticePolygon::new(vertices).expect("scan keeps convex polygons"));
            }
            // odometer
            let mut k = 0;
            loop {
                if k == heights.len() {
                    break;
                }
                if heights[k] < ranges[k].1 {
                    heights[k] += 1;
                    break;
                }
                heights[k] = ranges[k].0;
                k += 1;
            }
            if k == heights.len() {
                break;
            }
        }
    }
    found.sort();
    found
}

/// Strictly decreasing slopes, each drop at most `gap`, using only integers.
fn acceptable(vertices: &[(i64, i64)], gap: i64) -> bool {
    vertices.windows(3).all(|w| {
        let (dx1, dy1) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let (dx2, dy2) = (w[2].0 - w[1].0, w[2].1 - w[1].1);
        // dy1/dx1 > dy2/dx2  and  dy1/dx1 - dy2/dx2 <= gap
        let lhs = dy1 * dx2 - dy2 * dx1;
        lhs > 0 && lhs <= gap * dx1 * dx2
    })
}

/// Disagreement between the claim checks at truncation `M` and `M + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationMismatch {
    pub at: PointReport,
    pub refined: PointReport,
}

/// Re-runs every per-point check at `M + 1` and reports the points whose
/// results changed.
pub fn truncation_stability(spec: &ModelSpec) -> Result<Vec<TruncationMismatch>, LocalModelError> {
    let base = check_all_points(spec)?;
    let refined = check_all_points(&spec.refined())?;
    Ok(base
        .into_iter()
        .zip(refined)
        .filter(|(a, b)| a != b)
        .map(|(at, refined)| TruncationMismatch { at, refined })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::enumerate_destabilized_polygons;

    #[test]
    fn brute_force_matches_enumeration() {
        for p in [2, 3, 5] {
            for g in [2, 3] {
                for r in 1..=4 {
                    for d in -3..=3 {
                        let params = CurveParams::new(p, g, r, d).unwrap();
                        assert_eq!(
                            brute_force_destabilized_polygons(&params),
                            enumerate_destabilized_polygons(&params).unwrap(),
                            "{params:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn integer_division_helpers() {
        assert_eq!(floor_div(-7, 3), -3);
        assert_eq!(ceil_div(-7, 3), -2);
        assert_eq!(ceil_div(7, 3), 3);
    }
}
