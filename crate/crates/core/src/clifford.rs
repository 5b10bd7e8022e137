//! Clifford algebras `Cl±_n` and `ℂl_n` on a bitmask basis, plus the
//! matrix-algebra classification with its mod-8 / mod-2 periodicity.

use crate::coeff::Cq;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Largest supported number of generators.
pub const MAX_GENERATORS: u32 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CliffordError {
    #[error("algebra tags differ: {0:?} vs {1:?}")]
    TagMismatch(CliffordTag, CliffordTag),
    #[error("generator index {index} outside 1..={n}")]
    Generator { index: u32, n: u32 },
    #[error("n = {0} outside 1..=16")]
    Size(u32),
    #[error("complex coefficient in a real Clifford algebra")]
    ComplexCoefficient,
}

/// Which quadratic form the generators square to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn square(self) -> i128 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct CliffordTag {
    pub n: u32,
    pub sign: Sign,
    pub complexified: bool,
}

impl CliffordTag {
    pub fn new(n: u32, sign: Sign, complexified: bool) -> Result<Self, CliffordError> {
        if n == 0 || n > MAX_GENERATORS {
            return Err(CliffordError::Size(n));
        }
        Ok(CliffordTag { n, sign, complexified })
    }

    /// Every basis monomial, as bitmasks `0..2^n`.
    pub fn basis(&self) -> impl Iterator<Item = u32> {
        0..(1u32 << self.n)
    }
}

/// Sign of `e_A · e_B` and the resulting mask.
pub fn monomial_product(a: u32, b: u32, sign: Sign) -> (i128, u32) {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        swaps += (a >> (bit + 1)).count_ones();
        rest &= rest - 1;
    }
    let mut s = if swaps.is_multiple_of(2) { 1 } else { -1 };
    if (a & b).count_ones() % 2 == 1 {
        s *= sign.square();
    }
    (s, a ^ b)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CliffordElt {
    tag: CliffordTag,
    coeffs: BTreeMap<u32, Cq>,
}

impl CliffordElt {
    pub fn zero(tag: CliffordTag) -> Self {
        CliffordElt { tag, coeffs: BTreeMap::new() }
    }

    pub fn scalar(tag: CliffordTag, c: Cq) -> Result<Self, CliffordError> {
        Self::monomial(tag, 0, c)
    }

    pub fn one(tag: CliffordTag) -> Self {
        Self::monomial(tag, 0, Cq::one()).expect("real unit")
    }

    /// `c · e_S` for a generator subset `S` given as bitmask (bit `i-1` is `e_i`).
    pub fn monomial(tag: CliffordTag, mask: u32, c: Cq) -> Result<Self, CliffordError> {
        if !tag.complexified && !c.is_real() {
            return Err(CliffordError::ComplexCoefficient);
        }
        let mut e = Self::zero(tag);
        if !c.is_zero() {
            e.coeffs.insert(mask & ((1u32 << tag.n) - 1), c);
        }
        Ok(e)
    }

    /// Generator `e_i`, `1 ≤ i ≤ n`.
    pub fn generator(tag: CliffordTag, i: u32) -> Result<Self, CliffordError> {
        if i == 0 || i > tag.n {
            return Err(CliffordError::Generator { index: i, n: tag.n });
        }
        Self::monomial(tag, 1 << (i - 1), Cq::one())
    }

    pub fn tag(&self) -> CliffordTag {
        self.tag
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Cq> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check(&self, o: &Self) -> Result<(), CliffordError> {
        if self.tag != o.tag {
            return Err(CliffordError::TagMismatch(self.tag, o.tag));
        }
        Ok(())
    }

    fn accumulate(map: &mut BTreeMap<u32, Cq>, mask: u32, c: Cq) {
        let slot = map.entry(mask).or_insert_with(Cq::zero);
        *slot += c;
        if slot.is_zero() {
            map.remove(&mask);
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, CliffordError> {
        self.check(o)?;
        let mut out = self.clone();
        for (&m, &c) in &o.coeffs {
            Self::accumulate(&mut out.coeffs, m, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Cq) -> Result<Self, CliffordError> {
        if !self.tag.complexified && !c.is_real() {
            return Err(CliffordError::ComplexCoefficient);
        }
        let mut out = Self::zero(self.tag);
        for (&m, &v) in &self.coeffs {
            Self::accumulate(&mut out.coeffs, m, v * c);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, CliffordError> {
        self.add(&o.scale(-Cq::one())?)
    }

    pub fn mul(&self, o: &Self) -> Result<Self, CliffordError> {
        self.check(o)?;
        let mut out = Self::zero(self.tag);
        for (&a, &ca) in &self.coeffs {
            for (&b, &cb) in &o.coeffs {
                let (s, m) = monomial_product(a, b, self.tag.sign);
                Self::accumulate(&mut out.coeffs, m, ca * cb * Cq::from(s));
            }
        }
        Ok(out)
    }

    /// `χ(e_S) = (−1)^{|S|} e_S`.
    pub fn grade_involution(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(&m, &c)| (m, if m.count_ones() % 2 == 0 { c } else { -c })).collect();
        CliffordElt { tag: self.tag, coeffs }
    }

    /// Even and odd parts.
    pub fn split_parity(&self) -> (Self, Self) {
        let (even, odd): (BTreeMap<_, _>, BTreeMap<_, _>) =
            self.coeffs.iter().map(|(&m, &c)| (m, c)).partition(|(m, _)| m.count_ones() % 2 == 0);
        (CliffordElt { tag: self.tag, coeffs: even }, CliffordElt { tag: self.tag, coeffs: odd })
    }
}

impl fmt::Display for CliffordElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&m, c)| {
                let gens: Vec<String> = (0..self.tag.n).filter(|b| m >> b & 1 == 1).map(|b| format!("e{}", b + 1)).collect();
                if gens.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", gens.join(""))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Dimension of the center, counted by enumerating central basis monomials.
///
/// A monomial either commutes or anticommutes with each generator, so the
/// center is spanned by the monomials commuting with all of them.
pub fn center_dimension(tag: CliffordTag) -> usize {
    tag.basis()
        .filter(|&m| {
            (0..tag.n).all(|i| {
                let g = 1u32 << i;
                monomial_product(m, g, tag.sign).0 == monomial_product(g, m, tag.sign).0
            })
        })
        .count()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    fn real_dim(self) -> u64 {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }

    fn center_real_dim(self) -> u64 {
        match self {
            Field::C => 2,
            _ => 1,
        }
    }
}

/// `M_k(F)` or `M_k(F) ⊕ M_k(F)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct MatrixAlgebraDescriptor {
    pub field: Field,
    pub size: u64,
    pub summands: u64,
}

impl MatrixAlgebraDescriptor {
    pub const fn new(field: Field, size: u64, summands: u64) -> Self {
        MatrixAlgebraDescriptor { field, size, summands }
    }

    /// Dimension over the ground field: ℝ for real algebras, ℂ for complex ones.
    pub fn dimension(&self, complexified: bool) -> u64 {
        let d = self.summands * self.size * self.size * self.field.real_dim();
        if complexified {
            d / 2
        } else {
            d
        }
    }

    pub fn center_dimension(&self, complexified: bool) -> u64 {
        let d = self.summands * self.field.center_real_dim();
        if complexified {
            d / 2
        } else {
            d
        }
    }

    /// Real tensor product `self ⊗_ℝ M_k(F)` for a simple factor.
    pub fn tensor_real(&self, other: &MatrixAlgebraDescriptor) -> MatrixAlgebraDescriptor {
        assert_eq!(other.summands, 1, "right factor must be simple");
        let (field, extra) = match (self.field, other.field) {
            (Field::R, f) | (f, Field::R) => (f, 1),
            (Field::C, Field::C) => panic!("ℂ ⊗_ℝ ℂ is not simple"),
            (Field::C, Field::H) | (Field::H, Field::C) => (Field::C, 2),
            (Field::H, Field::H) => (Field::R, 4),
        };
        MatrixAlgebraDescriptor::new(field, self.size * other.size * extra, self.summands)
    }
}

impl fmt::Display for MatrixAlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = match self.field {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        };
        let one = if self.size == 1 { field.to_string() } else { format!("M{}({field})", self.size) };
        if self.summands == 2 {
            write!(f, "{one} + {one}")
        } else {
            write!(f, "{one}")
        }
    }
}

use Field::{C, H, R};
const fn d(field: Field, size: u64, summands: u64) -> MatrixAlgebraDescriptor {
    MatrixAlgebraDescriptor::new(field, size, summands)
}

/// Rows `n = 1..8`: `(Cl⁺_n, Cl⁻_n, ℂl_n)`.
pub const CLASSIFICATION_TABLE: [[MatrixAlgebraDescriptor; 3]; 8] = [
    [d(R, 1, 2), d(C, 1, 1), d(C, 1, 2)],
    [d(R, 2, 1), d(H, 1, 1), d(C, 2, 1)],
    [d(C, 2, 1), d(H, 1, 2), d(C, 2, 2)],
    [d(H, 2, 1), d(H, 2, 1), d(C, 4, 1)],
    [d(H, 2, 2), d(C, 4, 1), d(C, 4, 2)],
    [d(H, 4, 1), d(R, 8, 1), d(C, 8, 1)],
    [d(C, 8, 1), d(R, 8, 2), d(C, 8, 2)],
    [d(R, 16, 1), d(R, 16, 1), d(C, 16, 1)],
];

/// Matrix-algebra type of `Cl±_n` (or `ℂl_n` when `complexified`).
pub fn classify(n: u32, sign: Sign, complexified: bool) -> Result<MatrixAlgebraDescriptor, CliffordError> {
    if n == 0 || n > MAX_GENERATORS {
        return Err(CliffordError::Size(n));
    }
    if complexified {
        // ℂl_{n+2} ≅ ℂl_n ⊗ M₂(ℂ)
        let base = CLASSIFICATION_TABLE[if n % 2 == 1 { 0 } else { 1 }][2];
        let doublings = (n - 1) / 2;
        return Ok(d(C, base.size << doublings, base.summands));
    }
    let col = match sign {
        Sign::Plus => 0,
        Sign::Minus => 1,
    };
    if n <= 8 {
        return Ok(CLASSIFICATION_TABLE[n as usize - 1][col]);
    }
    // Cl±_{n+8} ≅ Cl±_n ⊗ M₁₆(ℝ)
    let base = classify(n - 8, sign, false)?;
    Ok(base.tensor_real(&d(R, 16, 1)))
}

/// Rebuilds `Cl±_n` from `Cl±_1`, `Cl±_2` via `Cl±_k ⊗ Cl∓_2 ≅ Cl∓_{k+2}`.
pub fn classify_by_recursion(n: u32, sign: Sign) -> MatrixAlgebraDescriptor {
    match (n, sign) {
        (1, Sign::Plus) => d(R, 1, 2),
        (1, Sign::Minus) => d(C, 1, 1),
        (2, Sign::Plus) => d(R, 2, 1),
        (2, Sign::Minus) => d(H, 1, 1),
        _ => {
            let factor = classify_by_recursion(2, sign);
            classify_by_recursion(n - 2, sign.flip()).tensor_real(&factor)
        }
    }
}
