//! Degree and slope bookkeeping for Frobenius push-forwards and pull-backs,
//! and the slope certificates for bundles embedded in `F_* L`.
//!
//! Everything is exact rational arithmetic.

use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("subrank {subrank} outside 1..={p}")]
    SubrankOutOfRange { subrank: i64, p: i64 },
    #[error("slope bound needs genus >= 2, got {0}")]
    GenusTooSmall(i64),
    #[error("rank must be positive, got {0}")]
    BadRank(i64),
    #[error("certificate needs rank {rank} {relation} p = {p}")]
    RankRegime {
        rank: i64,
        p: i64,
        relation: &'static str,
    },
    #[error("deg F_*L = {pushforward} is smaller than d = {d}")]
    DegreeTooLarge { pushforward: i64, d: i64 },
    #[error("colength {0} outside 1..=3")]
    ColengthOutOfRange(i64),
    #[error("characteristic must be at least 2, got {0}")]
    BadCharacteristic(i64),
}

/// Reduced rational with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slope(pub Ratio<i64>);

impl Slope {
    pub fn new(num: i64, den: i64) -> Self {
        Slope(Ratio::new(num, den))
    }

    pub fn integer(n: i64) -> Self {
        Slope(Ratio::from_integer(n))
    }

    pub fn num(&self) -> i64 {
        *self.0.numer()
    }

    pub fn den(&self) -> i64 {
        *self.0.denom()
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Frac {
            num: i64,
            den: i64,
        }
        Frac {
            num: self.num(),
            den: self.den(),
        }
        .serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BundleData {
    pub rank: i64,
    pub degree: i64,
}

impl BundleData {
    pub fn new(rank: i64, degree: i64) -> Result<Self, SlopeError> {
        if rank < 1 {
            return Err(SlopeError::BadRank(rank));
        }
        Ok(BundleData { rank, degree })
    }

    pub fn slope(&self) -> Slope {
        Slope::new(self.degree, self.rank)
    }
}

/// Euler characteristic `deg + rank (1 - g)`.
pub fn euler_characteristic(b: BundleData, g: i64) -> i64 {
    b.degree + b.rank * (1 - g)
}

/// `deg F_* E = deg E + rank (p - 1)(g - 1)`.
pub fn pushforward_degree(b: BundleData, p: i64, g: i64) -> i64 {
    b.degree + b.rank * (p - 1) * (g - 1)
}

/// `F_* E` as a bundle: rank `p rank`, degree from [`pushforward_degree`].
pub fn pushforward(b: BundleData, p: i64, g: i64) -> BundleData {
    BundleData {
        rank: p * b.rank,
        degree: pushforward_degree(b, p, g),
    }
}

/// `F^* E`: same rank, degree multiplied by `p`.
pub fn pullback_degree(b: BundleData, p: i64) -> BundleData {
    BundleData {
        rank: b.rank,
        degree: p * b.degree,
    }
}

/// Strict upper bound on `mu(G)` for a rank-`subrank` subsheaf `G` of the
/// push-forward of a line bundle: `mu(F_* L) - (p - subrank)(g - 1)/p`.
pub fn sun_upper_bound(
    subrank: i64,
    p: i64,
    g: i64,
    pushforward_slope: Slope,
) -> Result<Slope, SlopeError> {
    if subrank < 1 || subrank > p {
        return Err(SlopeError::SubrankOutOfRange { subrank, p });
    }
    Ok(Slope(
        pushforward_slope.0 - Ratio::new((p - subrank) * (g - 1), p),
    ))
}

/// One subrank's line in a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubrankWitness {
    pub subrank: i64,
    pub bound: Slope,
    pub threshold: Slope,
    pub verdict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    /// Every subsheaf of `E ⊂ F_* L` has slope below `mu(E)`.
    Stability,
    /// `E -> F_* L` cannot have a proper nonzero image, so it is injective.
    Embedding,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub pushforward_slope: Slope,
    pub witnesses: Vec<SubrankWitness>,
    pub verdict: bool,
}

fn witnesses(
    p: i64,
    g: i64,
    subranks: std::ops::Range<i64>,
    pushforward_slope: Slope,
    threshold: Slope,
) -> Result<Vec<SubrankWitness>, SlopeError> {
    subranks
        .map(|s| {
            let bound = sun_upper_bound(s, p, g, pushforward_slope)?;
            Ok(SubrankWitness {
                subrank: s,
                bound,
                threshold,
                verdict: bound <= threshold,
            })
        })
        .collect()
}

fn check_regime(p: i64, g: i64) -> Result<(), SlopeError> {
    if p < 2 {
        return Err(SlopeError::BadCharacteristic(p));
    }
    if g < 2 {
        return Err(SlopeError::GenusTooSmall(g));
    }
    Ok(())
}

/// Stability of a rank-`p` degree-`d` bundle `E ⊂ F_* L` with `deg L = t`.
///
/// A subsheaf `G ⊂ E` of rank `s` satisfies `mu(G) < sun_upper_bound(s)`; the
/// certificate holds when every such bound is at most `d / r`, since the
/// strict inequality then gives `mu(G) < mu(E)`.
pub fn stability_certificate(
    p: i64,
    g: i64,
    r: i64,
    d: i64,
    t: i64,
) -> Result<Certificate, SlopeError> {
    check_regime(p, g)?;
    if r != p {
        return Err(SlopeError::RankRegime {
            rank: r,
            p,
            relation: "=",
        });
    }
    let push = pushforward(BundleData { rank: 1, degree: t }, p, g);
    if push.degree < d {
        return Err(SlopeError::DegreeTooLarge {
            pushforward: push.degree,
            d,
        });
    }
    let mu = push.slope();
    let w = witnesses(p, g, 1..r, mu, Slope::new(d, r))?;
    Ok(Certificate {
        kind: CertificateKind::Stability,
        pushforward_slope: mu,
        verdict: w.iter().all(|x| x.verdict),
        witnesses: w,
    })
}

/// Injectivity of the adjoint `E -> F_* L` for stable `E` of rank `r <= p`,
/// degree `d`, given a nonzero `F^* E -> L` with `deg L = t`.
///
/// A proper image of rank `s` would be a quotient of the stable `E`, so its
/// slope exceeds `d / r`; it is also a subsheaf of `F_* L`, so its slope is
/// below `sun_upper_bound(s)`. Each witness records that this window is empty.
pub fn embedding_certificate(
    p: i64,
    g: i64,
    r: i64,
    d: i64,
    t: i64,
) -> Result<Certificate, SlopeError> {
    check_regime(p, g)?;
    if r < 1 || r > p {
        return Err(SlopeError::RankRegime {
            rank: r,
            p,
            relation: "<=",
        });
    }
    let mu = pushforward(BundleData { rank: 1, degree: t }, p, g).slope();
    let w = witnesses(p, g, 1..r, mu, Slope::new(d, r))?;
    Ok(Certificate {
        kind: CertificateKind::Embedding,
        pushforward_slope: mu,
        verdict: w.iter().all(|x| x.verdict),
        witnesses: w,
    })
}

/// Degrees of the graded pieces `Omega^i ⊗ L` of the canonical filtration of
/// `F^* F_* L`, top piece (`i = p - 1`) first: `t + i (2g - 2)`.
pub fn canonical_filtration_degrees(p: i64, g: i64, t: i64) -> Vec<i64> {
    (0..p).rev().map(|i| t + i * (2 * g - 2)).collect()
}

/// The divisibility condition `p | (g - 1)` exactly as it is usually quoted for
/// the non-splitting of `F^* F_* L` into its graded pieces.
///
/// This is the literal predicate only. For `(p, g) = (3, 2)` it returns
/// `false` even though the canonical filtration is known not to split there,
/// so callers must not read it as a splitting criterion.
pub fn nonsplit_predicate(p: i64, g: i64) -> bool {
    (g - 1) % p == 0
}

/// `deg(F^*E ∩ E_2) = (d + 3) - colength` for `(p, g, r) = (3, 2, 3)`, where
/// `d + 3` is the degree of the top graded piece `E_2 = Omega^2 ⊗ L`.
pub fn degree_from_colength(d: i64, colength: i64) -> Result<i64, SlopeError> {
    if !(1..=3).contains(&colength) {
        return Err(SlopeError::ColengthOutOfRange(colength));
    }
    Ok(d + 3 - colength)
}
