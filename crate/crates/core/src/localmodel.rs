//! Finite model of the stalk of `F^* F_* L` at a point.
//!
//! With `S = k[t]/(t^{pM})` and `R = k[u]/(u^M)` acting on `S` through
//! `u -> t^p`, the tensor product `S (x)_R S` is `S[y]/(y^p - t^p)` where
//! `y = 1 (x) t`. Its elements are stored in the normal form
//! `sum c[i][j] t^i (x) t^j` with `i < pM`, `j < p`.
//!
//! The left factor carries `F_* L`; the right factor is the structure sheaf
//! acting after pull-back. A colength-one `R`-submodule `V` of `S` (the local
//! shadow of an embedding `E -> F_* L`) is a hyperplane in `S / t^p S`, i.e. a
//! point of `P^2` when `p = 3`.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gfield::{projective_plane, FieldElement, FieldSpec, ProjectivePoint};
use crate::polygon::Label;

/// Smallest truncation level; keeps every `t^j` with `j <= 5` alive for `p = 3`.
pub const MIN_TRUNCATION: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalModelError {
    #[error("truncation level {0} is below the minimum {MIN_TRUNCATION}")]
    TruncationTooSmall(usize),
    #[error("submodule classification is implemented for p = 3 only, got p = {0}")]
    UnsupportedCharacteristic(u32),
    #[error("point and model are over different fields")]
    FieldMismatch,
    #[error("operands belong to different models")]
    SpecMismatch,
    #[error("intersection colength {0} outside 1..=3")]
    ColengthOutOfRange(usize),
}

/// Field plus truncation level `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    field: FieldSpec,
    p: usize,
    truncation: usize,
}

impl ModelSpec {
    pub fn new(field: FieldSpec, truncation: usize) -> Result<Self, LocalModelError> {
        if truncation < MIN_TRUNCATION {
            return Err(LocalModelError::TruncationTooSmall(truncation));
        }
        let p = field.characteristic() as usize;
        Ok(ModelSpec {
            field,
            p,
            truncation,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Number of left exponents kept, `pM`.
    pub fn left_len(&self) -> usize {
        self.p * self.truncation
    }

    /// `dim_k` of the truncated tensor product.
    pub fn dim(&self) -> usize {
        self.left_len() * self.p
    }

    /// Same field, truncation raised by one.
    pub fn refined(&self) -> Self {
        ModelSpec {
            truncation: self.truncation + 1,
            ..self.clone()
        }
    }

    fn index(&self, i: usize, j: usize) -> usize {
        i * self.p + j
    }
}

/// Element of the truncated `S (x)_R S` in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorElement {
    spec: ModelSpec,
    /// Flattened `c[i][j]` at `i * p + j`.
    coeffs: Vec<FieldElement>,
}

impl TensorElement {
    pub fn zero(spec: &ModelSpec) -> Self {
        TensorElement {
            spec: spec.clone(),
            coeffs: vec![spec.field.zero(); spec.dim()],
        }
    }

    /// `t^i (x) t^j`, reduced with `1 (x) t^p = t^p (x) 1` and truncated.
    pub fn monomial(spec: &ModelSpec, i: usize, j: usize) -> Self {
        let mut e = Self::zero(spec);
        let (i, j) = (i + spec.p * (j / spec.p), j % spec.p);
        if i < spec.left_len() {
            e.coeffs[spec.index(i, j)] = spec.field.one();
        }
        e
    }

    /// `s (x) 1` for `s = sum coeffs[i] t^i`.
    pub fn left_embed(spec: &ModelSpec, coeffs: &[FieldElement]) -> Self {
        let mut e = Self::zero(spec);
        for (i, c) in coeffs.iter().enumerate().take(spec.left_len()) {
            e.coeffs[spec.index(i, 0)] = c.clone();
        }
        e
    }

    /// `tau = t (x) 1 - 1 (x) t`.
    pub fn tau(spec: &ModelSpec) -> Self {
        Self::monomial(spec, 1, 0)
            .checked_sub(&Self::monomial(spec, 0, 1))
            .unwrap()
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn coeff(&self, i: usize, j: usize) -> &FieldElement {
        &self.coeffs[self.spec.index(i, j)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    /// Coordinates in the monomial order (left exponent, then right exponent).
    pub fn as_vector(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Nonzero terms `(i, j, c)` in monomial order.
    pub fn terms(&self) -> Vec<(usize, usize, FieldElement)> {
        let p = self.spec.p;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k / p, k % p, c.clone()))
            .collect()
    }

    fn check_same(&self, other: &Self) -> Result<(), LocalModelError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(LocalModelError::SpecMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LocalModelError> {
        self.check_same(other)?;
        Ok(TensorElement {
            spec: self.spec.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LocalModelError> {
        self.check_same(other)?;
        Ok(TensorElement {
            spec: self.spec.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        TensorElement {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Ring product in `S (x)_R S`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, LocalModelError> {
        self.check_same(other)?;
        let spec = &self.spec;
        let mut out = Self::zero(spec);
        let lhs = self.terms();
        for (i2, j2, c2) in other.terms() {
            for (i1, j1, c1) in &lhs {
                let (mut i, mut j) = (i1 + i2, j1 + j2);
                if j >= spec.p {
                    j -= spec.p;
                    i += spec.p;
                }
                if i >= spec.left_len() {
                    continue;
                }
                let k = spec.index(i, j);
                out.coeffs[k] = &out.coeffs[k] + &(c1 * &c2);
            }
        }
        Ok(out)
    }

    /// Multiplication by `1 (x) t`.
    pub fn times_t_right(&self) -> Self {
        self.checked_mul(&Self::monomial(&self.spec, 0, 1)).unwrap()
    }

    /// Multiplication by `t (x) 1`.
    pub fn times_t_left(&self) -> Self {
        self.checked_mul(&Self::monomial(&self.spec, 1, 0)).unwrap()
    }

    /// Multiplication by `1 (x) t^j`.
    pub fn times_right_power(&self, j: usize) -> Self {
        self.checked_mul(&Self::monomial(&self.spec, 0, j)).unwrap()
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mono = |e: usize| match e {
            0 => "1".to_string(),
            1 => "t".to_string(),
            _ => format!("t^{e}"),
        };
        let parts: Vec<String> = terms
            .iter()
            .map(|(i, j, c)| {
                if c.is_one() {
                    format!("{}⊗{}", mono(*i), mono(*j))
                } else {
                    format!("({c}){}⊗{}", mono(*i), mono(*j))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct Term<'a> {
    i: usize,
    j: usize,
    coeff: &'a FieldElement,
}

impl Serialize for TensorElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let p = self.spec.p;
        let nonzero: Vec<(usize, &FieldElement)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut seq = serializer.serialize_seq(Some(nonzero.len()))?;
        for (k, coeff) in nonzero {
            seq.serialize_element(&Term {
                i: k / p,
                j: k % p,
                coeff,
            })?;
        }
        seq.end()
    }
}

/// `tau^i` in normal form.
pub fn tau_power(spec: &ModelSpec, i: usize) -> TensorElement {
    let tau = TensorElement::tau(spec);
    let mut acc = TensorElement::monomial(spec, 0, 0);
    for _ in 0..i {
        acc = acc.checked_mul(&tau).unwrap();
    }
    acc
}

/// Subspace of the truncated tensor product, kept in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    spec: ModelSpec,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn span<'a>(
        spec: &ModelSpec,
        generators: impl IntoIterator<Item = &'a TensorElement>,
    ) -> Result<Self, LocalModelError> {
        let mut rows = Vec::new();
        for g in generators {
            if g.spec != *spec {
                return Err(LocalModelError::SpecMismatch);
            }
            rows.push(g.coeffs.clone());
        }
        let (rows, pivots) = row_reduce(rows);
        Ok(SubspaceBasis {
            spec: spec.clone(),
            rows,
            pivots,
        })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.spec.dim() - self.dim()
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn basis(&self) -> Vec<TensorElement> {
        self.rows
            .iter()
            .map(|r| TensorElement {
                spec: self.spec.clone(),
                coeffs: r.clone(),
            })
            .collect()
    }

    /// `self + other`.
    pub fn sum(&self, other: &Self) -> Result<Self, LocalModelError> {
        if self.spec != other.spec {
            return Err(LocalModelError::SpecMismatch);
        }
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        let (rows, pivots) = row_reduce(rows);
        Ok(SubspaceBasis {
            spec: self.spec.clone(),
            rows,
            pivots,
        })
    }

    fn residue(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if v[pc].is_zero() {
                continue;
            }
            let c = v[pc].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&c * r);
                }
            }
        }
        v
    }
}

/// Reduced row echelon form with pivots in increasing column order.
fn row_reduce(mut rows: Vec<Vec<FieldElement>>) -> (Vec<Vec<FieldElement>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = rows[rank][col].inverse().expect("pivot is nonzero");
        for x in rows[rank].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let c = row[col].clone();
            for (x, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *x = &*x - &(&c * pv);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    (rows, pivots)
}

/// Exact membership test by reduction against the echelon basis.
pub fn membership(e: &TensorElement, w: &SubspaceBasis) -> Result<bool, LocalModelError> {
    if e.spec != w.spec {
        return Err(LocalModelError::SpecMismatch);
    }
    Ok(w.residue(&e.coeffs).iter().all(FieldElement::is_zero))
}

/// Colength-one `R`-submodule `V` of `S`, given by the functional
/// `a0 + a1 t + a2 t^2 + ... -> alpha a0 + beta a1 + gamma a2` whose kernel is `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmoduleV {
    spec: ModelSpec,
    hyperplane: ProjectivePoint,
}

impl SubmoduleV {
    pub fn hyperplane(&self) -> &ProjectivePoint {
        &self.hyperplane
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    /// Basis of the kernel of the functional inside `span{1, t, t^2}`.
    pub fn kernel_vectors(&self) -> [Vec<FieldElement>; 2] {
        let coords = self.hyperplane.coords();
        let pivot = coords.iter().position(|c| !c.is_zero()).unwrap();
        let field = &self.spec.field;
        // coords are normalized, so coords[pivot] = 1
        let mut free = (0..3).filter(|&k| k != pivot).map(|k| {
            let mut v = vec![field.zero(); 3];
            v[k] = field.one();
            v[pivot] = -&coords[k];
            v
        });
        [free.next().unwrap(), free.next().unwrap()]
    }

    /// `R`-module generators of `V`: the two kernel vectors and `t^3, t^4, t^5`.
    pub fn generators(&self) -> Vec<Vec<FieldElement>> {
        let field = &self.spec.field;
        let mut gens: Vec<Vec<FieldElement>> = self.kernel_vectors().into();
        for e in 3..6 {
            let mut v = vec![field.zero(); e + 1];
            v[e] = field.one();
            gens.push(v);
        }
        gens
    }
}

/// The submodule cut out by the hyperplane `h = [alpha:beta:gamma]`.
pub fn submodule_from_point(
    spec: &ModelSpec,
    h: &ProjectivePoint,
) -> Result<SubmoduleV, LocalModelError> {
    if spec.p != 3 {
        return Err(LocalModelError::UnsupportedCharacteristic(spec.p as u32));
    }
    if h.spec() != spec.field() {
        return Err(LocalModelError::FieldMismatch);
    }
    Ok(SubmoduleV {
        spec: spec.clone(),
        hyperplane: h.clone(),
    })
}

/// Whether `t^j` lies in `V`. Every `t^j` with `j >= 3` does.
pub fn contains_monomial(v: &SubmoduleV, j: usize) -> bool {
    match v.hyperplane.coords().get(j) {
        Some(c) => c.is_zero(),
        None => true,
    }
}

/// Image of `V (x)_R S` in the truncated `S (x)_R S`.
pub fn pullback_span(v: &SubmoduleV) -> SubspaceBasis {
    let spec = &v.spec;
    let mut gens = Vec::new();
    for g in v.generators() {
        let base = TensorElement::left_embed(spec, &g);
        for a in 0..spec.truncation {
            for j in 0..spec.p {
                let shift = TensorElement::monomial(spec, spec.p * a, j);
                gens.push(base.checked_mul(&shift).unwrap());
            }
        }
    }
    SubspaceBasis::span(spec, &gens).unwrap()
}

/// `E_2 = tau^2 (1 (x) S)` inside the truncation.
pub fn e2_span(spec: &ModelSpec) -> SubspaceBasis {
    let tau2 = tau_power(spec, 2);
    let gens: Vec<TensorElement> = (0..spec.left_len())
        .map(|j| tau2.times_right_power(j))
        .collect();
    SubspaceBasis::span(spec, &gens).unwrap()
}

/// `dim_k E_2 / (E_2 ∩ (V (x) S))`, computed as `dim(E_2 + W) - dim W`.
pub fn intersection_colength(v: &SubmoduleV) -> Result<usize, LocalModelError> {
    let w = pullback_span(v);
    let sum = e2_span(&v.spec).sum(&w)?;
    let colength = sum.dim() - w.dim();
    if !(1..=3).contains(&colength) {
        return Err(LocalModelError::ColengthOutOfRange(colength));
    }
    Ok(colength)
}

/// HN type of `F^*E` determined by which of `t, t^2` lie in `V`.
pub fn classify_stratum(v: &SubmoduleV) -> Label {
    match (contains_monomial(v, 1), contains_monomial(v, 2)) {
        (true, true) => Label::Psi4,
        (false, true) => Label::Psi3,
        (_, false) => Label::Psi2,
    }
}

/// Label paired with each intersection colength.
pub fn label_of_colength(colength: usize) -> Option<Label> {
    match colength {
        1 => Some(Label::Psi4),
        2 => Some(Label::Psi3),
        3 => Some(Label::Psi2),
        _ => None,
    }
}

/// Classification of every point of `P^2(F_q)`.
pub fn stratum_census(spec: &ModelSpec) -> Result<BTreeMap<Label, usize>, LocalModelError> {
    if spec.p != 3 {
        return Err(LocalModelError::UnsupportedCharacteristic(spec.p as u32));
    }
    let mut census = BTreeMap::from([(Label::Psi2, 0), (Label::Psi3, 0), (Label::Psi4, 0)]);
    for pt in projective_plane(&spec.field) {
        let v = submodule_from_point(spec, &pt)?;
        *census.entry(classify_stratum(&v)).or_default() += 1;
    }
    Ok(census)
}

/// Truth values of the four membership claims for one `V`, plus the derived
/// colength and label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointReport {
    pub point: ProjectivePoint,
    /// `tau^2 ∉ V (x) S`.
    pub claim_a: bool,
    /// `tau^2 t ∈ V (x) S` iff `t, t^2 ∈ V`.
    pub claim_b: bool,
    /// `tau^2 t^2 ∈ V (x) S` iff `t^2 ∈ V`.
    pub claim_c: bool,
    /// `tau^2 t^3 ∈ V (x) S`.
    pub claim_d: bool,
    /// The colength equals `3 - #{j in 1,2 : tau^2 t^j ∈ V (x) S}`.
    pub colength_formula: bool,
    pub colength: usize,
    pub label: Label,
}

impl PointReport {
    pub fn all_pass(&self) -> bool {
        self.claim_a
            && self.claim_b
            && self.claim_c
            && self.claim_d
            && self.colength_formula
            && label_of_colength(self.colength) == Some(self.label)
    }
}

pub fn check_point(v: &SubmoduleV) -> Result<PointReport, LocalModelError> {
    let spec = &v.spec;
    let w = pullback_span(v);
    let tau2 = tau_power(spec, 2);
    let in_w = |j: usize| membership(&tau2.times_right_power(j), &w);
    let (m0, m1, m2, m3) = (in_w(0)?, in_w(1)?, in_w(2)?, in_w(3)?);
    let (has_t, has_t2) = (contains_monomial(v, 1), contains_monomial(v, 2));
    let colength = intersection_colength(v)?;
    Ok(PointReport {
        point: v.hyperplane.clone(),
        claim_a: !m0,
        claim_b: m1 == (has_t && has_t2),
        claim_c: m2 == has_t2,
        claim_d: m3,
        colength_formula: colength == 3 - m1 as usize - m2 as usize,
        colength,
        label: classify_stratum(v),
    })
}

/// [`check_point`] for every point of `P^2(F_q)`, in plane order.
pub fn check_all_points(spec: &ModelSpec) -> Result<Vec<PointReport>, LocalModelError> {
    projective_plane(&spec.field)
        .iter()
        .map(|pt| check_point(&submodule_from_point(spec, pt)?))
        .collect()
}
