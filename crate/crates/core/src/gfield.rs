//! Finite fields `F_{p^m}` in the polynomial basis, and projective planes over them.
//!
//! Fields here are tiny (the whole crate works with `q <= 27` or so), so the
//! arithmetic favours clarity over speed: an element is its coefficient vector
//! and multiplication is schoolbook followed by reduction modulo the defining
//! polynomial.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Upper bound on the field order. Enumeration-heavy callers would be
/// impractical long before this.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {0}^{1} is too large")]
    TooLarge(u32, usize),
    #[error("modulus must have {expected} coefficients (degree {degree}), got {got}")]
    ModulusLength {
        expected: usize,
        degree: usize,
        got: usize,
    },
    #[error("modulus has zero leading coefficient")]
    ModulusNotMonicable,
    #[error("modulus {0:?} is reducible over F_{1}")]
    ReducibleModulus(Vec<u32>, u32),
    #[error("element has {got} coefficients, field needs {expected}")]
    ElementLength { expected: usize, got: usize },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("all projective coordinates are zero")]
    ZeroPoint,
}

#[derive(Debug, PartialEq, Eq)]
struct FieldInner {
    p: u32,
    m: usize,
    /// Monic, low degree first, length `m + 1`.
    modulus: Vec<u32>,
}

/// A validated finite field `F_p[x]/(f)`. Cloning is cheap.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.m == 1 {
            write!(f, "F_{}", self.inner.p)
        } else {
            write!(
                f,
                "F_{}^{}[{:?}]",
                self.inner.p, self.inner.m, self.inner.modulus
            )
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let mut result = 1u64;
    let mut base = (a % p) as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Remainder of `a` modulo the monic polynomial `b` over `F_p`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    debug_assert_eq!(b[db], 1);
    while r.len() > db {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (k, &bk) in b.iter().enumerate() {
                let sub = (lead as u64 * bk as u64 % p as u64) as u32;
                r[shift + k] = (r[shift + k] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

/// Digits of `n` in base `p`, most significant first, `len` of them.
fn digits_msb_first(mut n: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (n % p as u64) as u32;
        n /= p as u64;
    }
    out
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=m/2`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    for k in 1..=m / 2 {
        let count = (p as u64).pow(k as u32);
        for n in 0..count {
            let mut g = digits_msb_first(n, p, k);
            g.reverse();
            g.push(1);
            if poly_rem(modulus, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds `F_{p^m}`. With `m > 1` and no modulus, the lexicographically
    /// smallest monic irreducible (coefficient list read low degree first) is used.
    pub fn new(p: u32, m: usize, modulus: Option<&[u32]>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if m < 1 {
            return Err(FieldError::ZeroDegree);
        }
        let order = (p as u64).checked_pow(m as u32);
        if order.is_none_or(|q| q > MAX_ORDER) {
            return Err(FieldError::TooLarge(p, m));
        }
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            match modulus {
                Some(given) => {
                    if given.len() != m + 1 {
                        return Err(FieldError::ModulusLength {
                            expected: m + 1,
                            degree: m,
                            got: given.len(),
                        });
                    }
                    let reduced: Vec<u32> = given.iter().map(|c| c % p).collect();
                    let lead = reduced[m];
                    if lead == 0 {
                        return Err(FieldError::ModulusNotMonicable);
                    }
                    let li = inv_mod_p(lead, p);
                    let monic: Vec<u32> = reduced
                        .iter()
                        .map(|&c| (c as u64 * li as u64 % p as u64) as u32)
                        .collect();
                    if !is_irreducible(&monic, p) {
                        return Err(FieldError::ReducibleModulus(given.to_vec(), p));
                    }
                    monic
                }
                None => Self::default_modulus(p, m),
            }
        };
        Ok(FieldSpec {
            inner: Arc::new(FieldInner { p, m, modulus }),
        })
    }

    /// Prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1, None)
    }

    /// The field of order `q` with the default modulus.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        let (p, m) = prime_power(q).ok_or(FieldError::NonPrime(q as u32))?;
        Self::new(p, m, None)
    }

    fn default_modulus(p: u32, m: usize) -> Vec<u32> {
        let count = (p as u64).pow(m as u32);
        (0..count)
            .map(|n| {
                let mut f = digits_msb_first(n, p, m);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .expect("irreducible polynomials exist in every degree")
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> usize {
        self.inner.m
    }

    pub fn order(&self) -> u64 {
        (self.inner.p as u64).pow(self.inner.m as u32)
    }

    /// Monic modulus, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            spec: self.clone(),
            coeffs: vec![0; self.inner.m],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = n.rem_euclid(self.inner.p as i64) as u32;
        e
    }

    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.inner.m {
            return Err(FieldError::ElementLength {
                expected: self.inner.m,
                got: coeffs.len(),
            });
        }
        Ok(FieldElement {
            spec: self.clone(),
            coeffs: coeffs.iter().map(|c| c % self.inner.p).collect(),
        })
    }

    /// The class of `x` in the polynomial basis (zero in a prime field).
    pub fn generator(&self) -> FieldElement {
        let mut e = self.zero();
        if self.inner.m > 1 {
            e.coeffs[1] = 1;
        }
        e
    }

    /// Element with index `n` in the enumeration order: `n = sum c_i p^i`.
    pub fn from_index(&self, mut n: u64) -> FieldElement {
        let p = self.inner.p as u64;
        let mut e = self.zero();
        for c in e.coeffs.iter_mut() {
            *c = (n % p) as u32;
            n /= p;
        }
        e
    }

    /// All `q` elements, ordered by index (`0` first, then `1`, ...).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |n| self.from_index(n))
    }

    fn reduce(&self, prod: Vec<u32>) -> Vec<u32> {
        let m = self.inner.m;
        let mut r = if prod.len() <= m {
            prod
        } else {
            poly_rem(&prod, &self.inner.modulus, self.inner.p)
        };
        r.resize(m, 0);
        r
    }
}

/// Returns `(p, m)` with `q = p^m` when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, usize)> {
    if q < 2 || q > u32::MAX as u64 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut m = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

/// Element of `F_{p^m}`: coefficients of `c_0 + c_1 x + ... + c_{m-1} x^{m-1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    spec: FieldSpec,
    coeffs: Vec<u32>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spec.degree() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            terms.push(match (i, c) {
                (0, _) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, _) => format!("{c}x"),
                (_, 1) => format!("x^{i}"),
                _ => format!("{c}x^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn index(&self) -> u64 {
        let p = self.spec.characteristic() as u64;
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * p + c as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check_same(&self, other: &Self) -> Result<(), FieldError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same(other)?;
        let p = self.spec.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        Ok(FieldElement {
            spec: self.spec.clone(),
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same(other)?;
        let p = self.spec.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + p - b) % p)
            .collect();
        Ok(FieldElement {
            spec: self.spec.clone(),
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same(other)?;
        let p = self.spec.characteristic() as u64;
        let m = self.coeffs.len();
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + a as u64 * b as u64) % p) as u32;
            }
        }
        Ok(FieldElement {
            spec: self.spec.clone(),
            coeffs: self.spec.reduce(prod),
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = self.spec.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Multiplicative inverse, computed as `a^(q-2)`.
    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(self.spec.order() - 2))
    }
}

// Operator forms panic on mixed fields; use the `checked_*` methods to recover.
macro_rules! impl_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                self.$checked(rhs).expect("mixed-field arithmetic")
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, checked_add);
impl_binop!(Sub, sub, checked_sub);
impl_binop!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.spec.characteristic();
        FieldElement {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|&c| (p - c) % p).collect(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// A point of `P^2`, scaled so its first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq)]
pub struct ProjectivePoint {
    coords: [FieldElement; 3],
}

impl ProjectivePoint {
    pub fn new(coords: [FieldElement; 3]) -> Result<Self, FieldError> {
        coords[0].check_same(&coords[1])?;
        coords[0].check_same(&coords[2])?;
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(FieldError::ZeroPoint)?;
        let scale = lead.inverse()?;
        Ok(ProjectivePoint {
            coords: coords.map(|c| &c * &scale),
        })
    }

    /// Convenience constructor from small integers (prime-field residues).
    pub fn from_ints(spec: &FieldSpec, coords: [i64; 3]) -> Result<Self, FieldError> {
        Self::new(coords.map(|c| spec.from_int(c)))
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        &self.coords
    }

    pub fn spec(&self) -> &FieldSpec {
        self.coords[0].spec()
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coords;
        write!(f, "[{a}:{b}:{c}]")
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

/// All `q^2 + q + 1` points of `P^2(F_q)`: first `[1:a:b]` (a, b in index
/// order, `a` outer), then `[0:1:b]`, then `[0:0:1]`.
pub fn projective_plane(spec: &FieldSpec) -> Vec<ProjectivePoint> {
    let elems: Vec<FieldElement> = spec.elements().collect();
    let zero = spec.zero();
    let one = spec.one();
    let mut out = Vec::with_capacity(elems.len() * elems.len() + elems.len() + 1);
    for a in &elems {
        for b in &elems {
            out.push(ProjectivePoint {
                coords: [one.clone(), a.clone(), b.clone()],
            });
        }
    }
    for b in &elems {
        out.push(ProjectivePoint {
            coords: [zero.clone(), one.clone(), b.clone()],
        });
    }
    out.push(ProjectivePoint {
        coords: [zero.clone(), zero, one],
    });
    out
}
