//! Convex lattice polygons in the (rank, degree) plane.
//!
//! A [`LatticePolygon`] is the graph of a concave piecewise-linear function on
//! `[0, m]`, given by its vertices. Harder-Narasimhan polygons of rank `r`,
//! degree `D` bundles live in this set with endpoints `(0,0)` and `(r, D)`.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gfield::is_prime;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("polygon needs at least two vertices")]
    TooFewVertices,
    #[error("polygon must start at (0,0), starts at ({0},{1})")]
    NotAtOrigin(i64, i64),
    #[error("ranks must strictly increase (vertex {0})")]
    RanksNotIncreasing(usize),
    #[error("slopes must strictly decrease (at vertex {0})")]
    NotConvex(usize),
    #[error("polygons end at different points: {0:?} vs {1:?}")]
    EndpointMismatch((i64, i64), (i64, i64)),
    #[error("polygon has a single segment")]
    SingleSegment,
    #[error("invalid curve parameters: {0}")]
    InvalidParams(String),
    #[error("enumeration requires genus >= 2, got {0}")]
    GenusTooSmall(i64),
    #[error("only the regime (p,g,r) = (3,2,3) is classified, got ({0},{1},{2})")]
    UnclassifiedRegime(u32, i64, i64),
    #[error("filtration must be nonempty with positive ranks")]
    BadFiltration,
    #[error("filtration slopes must strictly decrease (piece {0})")]
    FiltrationNotDecreasing(usize),
}

/// Strictly convex polygon with integral vertices, starting at `(0,0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LatticePolygon {
    vertices: Vec<(i64, i64)>,
}

impl<'de> Deserialize<'de> for LatticePolygon {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let vertices = Vec::<(i64, i64)>::deserialize(deserializer)?;
        LatticePolygon::new(vertices).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vertices
            .iter()
            .map(|(r, d)| format!("({r},{d})"))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

fn segment_slope(a: (i64, i64), b: (i64, i64)) -> Rational {
    Rational::new(b.1 - a.1, b.0 - a.0)
}

impl LatticePolygon {
    pub fn new(vertices: Vec<(i64, i64)>) -> Result<Self, PolygonError> {
        if vertices.len() < 2 {
            return Err(PolygonError::TooFewVertices);
        }
        if vertices[0] != (0, 0) {
            return Err(PolygonError::NotAtOrigin(vertices[0].0, vertices[0].1));
        }
        for (i, w) in vertices.windows(2).enumerate() {
            if w[1].0 <= w[0].0 {
                return Err(PolygonError::RanksNotIncreasing(i + 1));
            }
        }
        for (i, w) in vertices.windows(3).enumerate() {
            if segment_slope(w[1], w[2]) >= segment_slope(w[0], w[1]) {
                return Err(PolygonError::NotConvex(i + 1));
            }
        }
        Ok(LatticePolygon { vertices })
    }

    /// The one-segment polygon from `(0,0)` to `(rank, degree)`.
    pub fn straight(rank: i64, degree: i64) -> Self {
        assert!(rank > 0, "straight polygon needs positive rank");
        LatticePolygon {
            vertices: vec![(0, 0), (rank, degree)],
        }
    }

    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }

    pub fn endpoint(&self) -> (i64, i64) {
        *self.vertices.last().unwrap()
    }

    pub fn rank(&self) -> i64 {
        self.endpoint().0
    }

    pub fn segments(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Segment slopes, strictly decreasing.
    pub fn slopes(&self) -> Vec<Rational> {
        self.vertices
            .windows(2)
            .map(|w| segment_slope(w[0], w[1]))
            .collect()
    }

    /// Largest drop between consecutive slopes.
    pub fn max_slope_gap(&self) -> Result<Rational, PolygonError> {
        let slopes = self.slopes();
        slopes
            .windows(2)
            .map(|w| w[0] - w[1])
            .max()
            .ok_or(PolygonError::SingleSegment)
    }

    /// Height of the polygon over `x`, for `0 <= x <= rank`.
    pub fn height_at(&self, x: i64) -> Rational {
        assert!(x >= 0 && x <= self.rank(), "abscissa {x} outside polygon");
        let k = self.vertices.windows(2).position(|w| x <= w[1].0).unwrap();
        let (a, b) = (self.vertices[k], self.vertices[k + 1]);
        Rational::from_integer(a.1) + segment_slope(a, b) * Rational::from_integer(x - a.0)
    }

    /// Read back the graded pieces `(rank, degree)` of the segments.
    pub fn to_filtration(&self) -> FiltrationData {
        FiltrationData {
            pieces: self
                .vertices
                .windows(2)
                .map(|w| (w[1].0 - w[0].0, w[1].1 - w[0].1))
                .collect(),
        }
    }
}

/// Outcome of comparing two polygons with a common endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dominance {
    GreaterOrEqual,
    LessOrEqual,
    Equal,
    Incomparable,
}

/// Pointwise comparison of heights at every integer rank.
///
/// Both polygons break only at integer ranks, so this decides the order on the
/// whole interval.
pub fn dominates(p: &LatticePolygon, q: &LatticePolygon) -> Result<Dominance, PolygonError> {
    if p.endpoint() != q.endpoint() {
        return Err(PolygonError::EndpointMismatch(p.endpoint(), q.endpoint()));
    }
    let (mut above, mut below) = (false, false);
    for x in 0..=p.rank() {
        match p.height_at(x).cmp(&q.height_at(x)) {
            Ordering::Greater => above = true,
            Ordering::Less => below = true,
            Ordering::Equal => {}
        }
    }
    Ok(match (above, below) {
        (false, false) => Dominance::Equal,
        (true, false) => Dominance::GreaterOrEqual,
        (false, true) => Dominance::LessOrEqual,
        (true, true) => Dominance::Incomparable,
    })
}

/// Characteristic, genus, rank and degree of the bundles under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurveParams {
    pub p: u32,
    pub g: i64,
    pub r: i64,
    pub d: i64,
}

impl CurveParams {
    pub fn new(p: u32, g: i64, r: i64, d: i64) -> Result<Self, PolygonError> {
        if !is_prime(p) {
            return Err(PolygonError::InvalidParams(format!("p = {p} is not prime")));
        }
        if g < 1 {
            return Err(PolygonError::InvalidParams(format!("genus {g} < 1")));
        }
        if r < 1 {
            return Err(PolygonError::InvalidParams(format!("rank {r} < 1")));
        }
        Ok(CurveParams { p, g, r, d })
    }

    /// Degree of the Frobenius pull-back, `p * d`.
    pub fn pullback_degree(&self) -> i64 {
        self.p as i64 * self.d
    }

    /// Largest allowed drop between consecutive HN slopes of a pull-back, `2g - 2`.
    pub fn gap_bound(&self) -> i64 {
        2 * self.g - 2
    }

    /// Every HN slope of the pull-back lies within this distance of `p d / r`.
    pub fn slope_radius(&self) -> i64 {
        (self.r - 1) * self.gap_bound()
    }
}

/// All candidate HN polygons of Frobenius pull-backs with a nontrivial filtration.
///
/// Candidates are the strictly convex lattice polygons from `(0,0)` to
/// `(r, p d)` with at least two segments and every slope drop at most `2g - 2`.
/// Output is sorted lexicographically by vertex list.
pub fn enumerate_destabilized_polygons(
    params: &CurveParams,
) -> Result<Vec<LatticePolygon>, PolygonError> {
    if params.g < 2 {
        return Err(PolygonError::GenusTooSmall(params.g));
    }
    let end = (params.r, params.pullback_degree());
    let mean = Rational::new(end.1, end.0);
    let radius = Rational::from_integer(params.slope_radius());
    let (lo, hi) = (mean - radius, mean + radius);
    let gap = Rational::from_integer(params.gap_bound());

    let mut out = Vec::new();
    let mut stack = vec![(0i64, 0i64)];
    extend(&mut stack, None, end, (lo, hi), gap, &mut out);
    out.sort();
    Ok(out)
}

fn extend(
    stack: &mut Vec<(i64, i64)>,
    last_slope: Option<Rational>,
    end: (i64, i64),
    (lo, hi): (Rational, Rational),
    gap: Rational,
    out: &mut Vec<LatticePolygon>,
) {
    let (x, y) = *stack.last().unwrap();
    for nx in x + 1..=end.0 {
        let run = Rational::from_integer(nx - x);
        let y_min = y + (lo * run).ceil().to_integer();
        let y_max = y + (hi * run).floor().to_integer();
        for ny in y_min..=y_max {
            if nx == end.0 && ny != end.1 {
                continue;
            }
            let slope = Rational::new(ny - y, nx - x);
            if let Some(prev) = last_slope {
                if slope >= prev || prev - slope > gap {
                    continue;
                }
            }
            stack.push((nx, ny));
            if nx == end.0 {
                if stack.len() > 2 {
                    out.push(LatticePolygon {
                        vertices: stack.clone(),
                    });
                }
            } else {
                extend(stack, Some(slope), end, (lo, hi), gap, out);
            }
            stack.pop();
        }
    }
}

/// Graded pieces `(rank, degree)` of a filtration, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationData {
    pub pieces: Vec<(i64, i64)>,
}

impl FiltrationData {
    pub fn total_rank(&self) -> i64 {
        self.pieces.iter().map(|p| p.0).sum()
    }
}

/// Cumulative-sum polygon of a filtration with strictly decreasing slopes.
pub fn polygon_of_filtration(f: &FiltrationData) -> Result<LatticePolygon, PolygonError> {
    if f.pieces.is_empty() || f.pieces.iter().any(|&(r, _)| r <= 0) {
        return Err(PolygonError::BadFiltration);
    }
    for (i, w) in f.pieces.windows(2).enumerate() {
        if Rational::new(w[1].1, w[1].0) >= Rational::new(w[0].1, w[0].0) {
            return Err(PolygonError::FiltrationNotDecreasing(i + 1));
        }
    }
    let mut vertices = vec![(0, 0)];
    let (mut r, mut d) = (0, 0);
    for &(pr, pd) in &f.pieces {
        r += pr;
        d += pd;
        vertices.push((r, d));
    }
    LatticePolygon::new(vertices)
}

/// Names of the HN polygons in rank 3, genus 2, characteristic 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Psi1,
    Psi2,
    Psi3,
    Psi4,
    #[serde(rename = "semistable")]
    Semistable,
    #[serde(rename = "other")]
    Other,
}

impl Label {
    pub const DESTABILIZED: [Label; 4] = [Label::Psi1, Label::Psi2, Label::Psi3, Label::Psi4];

    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Psi1 => "Psi1",
            Label::Psi2 => "Psi2",
            Label::Psi3 => "Psi3",
            Label::Psi4 => "Psi4",
            Label::Semistable => "semistable",
            Label::Other => "other",
        }
    }

    /// The polygon this label denotes for degree `d` (rank 3, pull-back degree `3d`).
    pub fn template(&self, d: i64) -> Option<LatticePolygon> {
        let vertices = match self {
            Label::Psi1 => vec![(0, 0), (1, d + 1), (3, 3 * d)],
            Label::Psi2 => vec![(0, 0), (2, 2 * d + 1), (3, 3 * d)],
            Label::Psi3 => vec![(0, 0), (1, d + 1), (2, 2 * d + 1), (3, 3 * d)],
            Label::Psi4 => vec![(0, 0), (1, d + 2), (2, 2 * d + 2), (3, 3 * d)],
            Label::Semistable => vec![(0, 0), (3, 3 * d)],
            Label::Other => return None,
        };
        Some(LatticePolygon { vertices })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Matches `poly` against the four templates for `(p,g,r) = (3,2,3)`.
pub fn name_polygon(poly: &LatticePolygon, params: &CurveParams) -> Result<Label, PolygonError> {
    if (params.p, params.g, params.r) != (3, 2, 3) {
        return Err(PolygonError::UnclassifiedRegime(
            params.p, params.g, params.r,
        ));
    }
    let found = [
        Label::Psi1,
        Label::Psi2,
        Label::Psi3,
        Label::Psi4,
        Label::Semistable,
    ]
    .into_iter()
    .find(|l| l.template(params.d).as_ref() == Some(poly));
    Ok(found.unwrap_or(Label::Other))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[(i64, i64)]) -> LatticePolygon {
        LatticePolygon::new(v.to_vec()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn make_polygon_examples() {
        let psi4 = poly(&[(0, 0), (1, 2), (2, 2), (3, 0)]);
        assert_eq!(psi4.slopes(), vec![q(2, 1), q(0, 1), q(-2, 1)]);
        assert_eq!(Some(psi4), Label::Psi4.template(0));
        assert_eq!(poly(&[(0, 0), (3, 0)]).segments(), 1);
        assert_eq!(
            LatticePolygon::new(vec![(0, 0), (1, 0), (2, 1)]),
            Err(PolygonError::NotConvex(1))
        );
        assert_eq!(
            LatticePolygon::new(vec![(0, 0), (2, 1), (2, 3)]),
            Err(PolygonError::RanksNotIncreasing(2))
        );
        assert_eq!(
            LatticePolygon::new(vec![(1, 0), (2, 1)]),
            Err(PolygonError::NotAtOrigin(1, 0))
        );
        // collinear interior vertex: equal slopes are rejected
        assert_eq!(
            LatticePolygon::new(vec![(0, 0), (1, 1), (2, 2)]),
            Err(PolygonError::NotConvex(1))
        );
    }

    #[test]
    fn slopes_of_templates() {
        for d in -4..=4 {
            let psi3 = Label::Psi3.template(d).unwrap();
            assert_eq!(psi3.slopes(), vec![q(d + 1, 1), q(d, 1), q(d - 1, 1)]);
            let psi1 = Label::Psi1.template(d).unwrap();
            assert_eq!(psi1.slopes(), vec![q(d + 1, 1), q(2 * d - 1, 2)]);
            assert_eq!(LatticePolygon::straight(3, 3 * d).slopes(), vec![q(d, 1)]);
        }
    }

    #[test]
    fn slope_gaps() {
        assert_eq!(
            Label::Psi4.template(0).unwrap().max_slope_gap(),
            Ok(q(2, 1))
        );
        assert_eq!(
            Label::Psi3.template(0).unwrap().max_slope_gap(),
            Ok(q(1, 1))
        );
        assert_eq!(
            Label::Psi1.template(0).unwrap().max_slope_gap(),
            Ok(q(3, 2))
        );
        assert_eq!(
            LatticePolygon::straight(3, 0).max_slope_gap(),
            Err(PolygonError::SingleSegment)
        );
    }

    #[test]
    fn dominance_examples() {
        let t = |l: Label| l.template(0).unwrap();
        assert_eq!(
            dominates(&t(Label::Psi4), &t(Label::Psi3)),
            Ok(Dominance::GreaterOrEqual)
        );
        assert_eq!(
            dominates(&t(Label::Psi3), &t(Label::Psi4)),
            Ok(Dominance::LessOrEqual)
        );
        assert_eq!(
            dominates(&t(Label::Psi1), &t(Label::Psi2)),
            Ok(Dominance::Incomparable)
        );
        assert_eq!(
            dominates(&t(Label::Psi2), &t(Label::Psi2)),
            Ok(Dominance::Equal)
        );
        assert!(matches!(
            dominates(&t(Label::Psi2), &LatticePolygon::straight(3, 1)),
            Err(PolygonError::EndpointMismatch(..))
        ));
        // heights of Psi1 and Psi2 at ranks 1, 2
        let (p1, p2) = (t(Label::Psi1), t(Label::Psi2));
        assert_eq!((p1.height_at(1), p2.height_at(1)), (q(1, 1), q(1, 2)));
        assert_eq!((p1.height_at(2), p2.height_at(2)), (q(1, 2), q(1, 1)));
    }

    #[test]
    fn four_polygons_at_degree_zero() {
        let params = CurveParams::new(3, 2, 3, 0).unwrap();
        let got = enumerate_destabilized_polygons(&params).unwrap();
        let expected = vec![
            poly(&[(0, 0), (1, 1), (2, 1), (3, 0)]),
            poly(&[(0, 0), (1, 1), (3, 0)]),
            poly(&[(0, 0), (1, 2), (2, 2), (3, 0)]),
            poly(&[(0, 0), (2, 1), (3, 0)]),
        ];
        assert_eq!(got, expected);
        let labels: Vec<Label> = got
            .iter()
            .map(|p| name_polygon(p, &params).unwrap())
            .collect();
        assert_eq!(
            labels,
            vec![Label::Psi3, Label::Psi1, Label::Psi4, Label::Psi2]
        );
    }

    #[test]
    fn rank_two_characteristic_two() {
        let params = CurveParams::new(2, 2, 2, 0).unwrap();
        assert_eq!(
            enumerate_destabilized_polygons(&params).unwrap(),
            vec![poly(&[(0, 0), (1, 1), (2, 0)])]
        );
    }

    #[test]
    fn genus_one_is_rejected() {
        let params = CurveParams::new(3, 1, 3, 0).unwrap();
        assert_eq!(
            enumerate_destabilized_polygons(&params),
            Err(PolygonError::GenusTooSmall(1))
        );
        assert!(CurveParams::new(4, 2, 3, 0).is_err());
        assert!(CurveParams::new(3, 0, 3, 0).is_err());
        assert!(CurveParams::new(3, 2, 0, 0).is_err());
    }

    #[test]
    fn filtrations() {
        for d in -3..=3 {
            let f = FiltrationData {
                pieces: vec![(1, d + 2), (1, d), (1, d - 2)],
            };
            assert_eq!(
                polygon_of_filtration(&f).unwrap(),
                Label::Psi4.template(d).unwrap()
            );
            let f = FiltrationData {
                pieces: vec![(2, 2 * d + 1), (1, d - 1)],
            };
            assert_eq!(
                polygon_of_filtration(&f).unwrap(),
                Label::Psi2.template(d).unwrap()
            );
            let f = FiltrationData {
                pieces: vec![(3, 3 * d)],
            };
            assert_eq!(
                polygon_of_filtration(&f).unwrap(),
                LatticePolygon::straight(3, 3 * d)
            );
        }
        let bad = FiltrationData {
            pieces: vec![(1, 0), (1, 1)],
        };
        assert_eq!(
            polygon_of_filtration(&bad),
            Err(PolygonError::FiltrationNotDecreasing(1))
        );
        assert_eq!(
            polygon_of_filtration(&FiltrationData { pieces: vec![] }),
            Err(PolygonError::BadFiltration)
        );
    }

    #[test]
    fn naming() {
        let params = CurveParams::new(3, 2, 3, 0).unwrap();
        assert_eq!(
            name_polygon(&poly(&[(0, 0), (2, 1), (3, 0)]), &params),
            Ok(Label::Psi2)
        );
        assert_eq!(
            name_polygon(&poly(&[(0, 0), (3, 0)]), &params),
            Ok(Label::Semistable)
        );
        assert_eq!(
            name_polygon(&poly(&[(0, 0), (1, 3), (3, 0)]), &params),
            Ok(Label::Other)
        );
        let other = CurveParams::new(2, 2, 2, 0).unwrap();
        assert_eq!(
            name_polygon(&poly(&[(0, 0), (2, 0)]), &other),
            Err(PolygonError::UnclassifiedRegime(2, 2, 2))
        );
    }

    #[test]
    fn json_shape() {
        let p = Label::Psi2.template(0).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[0,0],[2,1],[3,0]]");
        let back: LatticePolygon = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<LatticePolygon>("[[0,0],[1,0],[2,1]]").is_err());
        assert_eq!(serde_json::to_string(&Label::Psi3).unwrap(), "\"Psi3\"");
    }
}
