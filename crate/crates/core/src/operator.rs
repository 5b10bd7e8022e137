//! Matrix-valued differential operators of order at most two, antilinear
//! operators `M∘cc`, and their compositions.
//!
//! Formal adjoints assume a closed manifold: `(∂_μ)† = −∂_μ` and boundary
//! terms never appear.

use crate::coeff::Cq;
use crate::symfield::{Deriv, SymError, SymExpr};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpError {
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("operator order would exceed two")]
    OrderOverflow,
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("matrix is singular")]
    Singular,
    #[error("antilinear operators need a constant matrix part")]
    NonConstant,
    #[error("expected a multiplication (order-zero) operator")]
    NotOrderZero,
}

/// Square matrix of symbolic entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct SymMatrix {
    n: usize,
    data: Vec<SymExpr>,
}

impl SymMatrix {
    pub fn zero(n: usize) -> Self {
        SymMatrix { n, data: vec![SymExpr::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix::scalar(n, SymExpr::one())
    }

    /// `e·I_n`.
    pub fn scalar(n: usize, e: SymExpr) -> Self {
        let mut m = SymMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn diag(entries: Vec<SymExpr>) -> Self {
        let n = entries.len();
        let mut m = SymMatrix::zero(n);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    /// Builds from row-major entries.
    pub fn from_rows(n: usize, data: Vec<SymExpr>) -> Self {
        assert_eq!(data.len(), n * n, "expected {} entries", n * n);
        SymMatrix { n, data }
    }

    /// Builds a constant matrix from row-major Gaussian rationals.
    pub fn from_cq(n: usize, data: &[Cq]) -> Self {
        SymMatrix::from_rows(n, data.iter().map(|c| SymExpr::constant(*c)).collect())
    }

    /// Block-diagonal matrix.
    pub fn block_diag(blocks: &[SymMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut m = SymMatrix::zero(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.n;
        }
        m
    }

    /// Matrix from a square grid of equally sized blocks.
    pub fn from_blocks(grid: &[Vec<SymMatrix>]) -> Self {
        let k = grid.len();
        let b = grid[0][0].n;
        let mut m = SymMatrix::zero(k * b);
        for (bi, row) in grid.iter().enumerate() {
            assert_eq!(row.len(), k, "block grid must be square");
            for (bj, blk) in row.iter().enumerate() {
                assert_eq!(blk.n, b, "blocks must share a size");
                for i in 0..b {
                    for j in 0..b {
                        m.set(bi * b + i, bj * b + j, blk.get(i, j).clone());
                    }
                }
            }
        }
        m
    }

    /// Block `(bi, bj)` of size `b`.
    pub fn block(&self, bi: usize, bj: usize, b: usize) -> SymMatrix {
        let mut m = SymMatrix::zero(b);
        for i in 0..b {
            for j in 0..b {
                m.set(i, j, self.get(bi * b + i, bj * b + j).clone());
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &SymExpr {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: SymExpr) {
        self.data[i * self.n + j] = e;
    }

    pub fn entries(&self) -> &[SymExpr] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(SymExpr::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.data.iter().all(|e| e.as_constant().is_some())
    }

    pub fn map(&self, f: impl Fn(&SymExpr) -> SymExpr) -> SymMatrix {
        SymMatrix { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<E>(&self, f: impl Fn(&SymExpr) -> Result<SymExpr, E>) -> Result<SymMatrix, E> {
        Ok(SymMatrix { n: self.n, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn scale(&self, c: Cq) -> SymMatrix {
        self.map(|e| e.scale(c))
    }

    pub fn scale_expr(&self, s: &SymExpr) -> SymMatrix {
        self.map(|e| e * s)
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> SymMatrix {
        self.map(SymExpr::conj)
    }

    pub fn transpose(&self) -> SymMatrix {
        let mut m = SymMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> SymMatrix {
        self.transpose().conj()
    }

    pub fn derive(&self, mu: usize) -> Result<SymMatrix, SymError> {
        self.try_map(|e| e.derive(mu))
    }

    pub fn derive_multi(&self, d: Deriv) -> Result<SymMatrix, SymError> {
        self.try_map(|e| e.derive_multi(d))
    }

    pub fn add(&self, o: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, o.n, "matrix dimension mismatch");
        SymMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, o.n, "matrix dimension mismatch");
        SymMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn mul(&self, o: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, o.n, "matrix dimension mismatch");
        let n = self.n;
        let mut out = SymMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.data[i * n + j] += a * b;
                }
            }
        }
        out
    }

    /// `A·B − B·A`.
    pub fn commutator(&self, o: &SymMatrix) -> SymMatrix {
        self.mul(o).sub(&o.mul(self))
    }

    /// `A·B + B·A`.
    pub fn anticommutator(&self, o: &SymMatrix) -> SymMatrix {
        self.mul(o).add(&o.mul(self))
    }

    /// Tensor product with `outer` as the block index: entry `(i,j)` block
    /// is `outer_ij · inner`.
    pub fn kron(outer: &SymMatrix, inner: &SymMatrix) -> SymMatrix {
        let (p, q) = (outer.n, inner.n);
        let mut m = SymMatrix::zero(p * q);
        for a in 0..p {
            for b in 0..p {
                let o = outer.get(a, b);
                if o.is_zero() {
                    continue;
                }
                for i in 0..q {
                    for j in 0..q {
                        m.set(a * q + i, b * q + j, o * inner.get(i, j));
                    }
                }
            }
        }
        m
    }

    pub fn trace(&self) -> SymExpr {
        (0..self.n).fold(SymExpr::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Inverse of a constant matrix by exact Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<SymMatrix, OpError> {
        let n = self.n;
        let mut a: Vec<Vec<Cq>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).as_constant().ok_or(OpError::NonConstant)).collect())
            .collect::<Result<_, _>>()?;
        let mut inv: Vec<Vec<Cq>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { Cq::one() } else { Cq::zero() }).collect()).collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(OpError::Singular)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].inv().ok_or(OpError::Singular)?;
            for j in 0..n {
                a[col][j] = a[col][j] * p;
                inv[col][j] = inv[col][j] * p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col];
                for j in 0..n {
                    a[r][j] = a[r][j] - f * a[col][j];
                    inv[r][j] = inv[r][j] - f * inv[col][j];
                }
            }
        }
        Ok(SymMatrix::from_cq(n, &inv.into_iter().flatten().collect::<Vec<_>>()))
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[SymExpr]) -> Vec<SymExpr> {
        assert_eq!(v.len(), self.n, "vector length mismatch");
        (0..self.n).map(|i| (0..self.n).fold(SymExpr::zero(), |acc, j| acc + self.get(i, j) * &v[j])).collect()
    }

    /// Row-major canonical strings.
    pub fn to_json(&self) -> Value {
        json!((0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).canonical()).collect::<Vec<_>>()).collect::<Vec<_>>())
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).canonical()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Differential operator `Σ_α A_α ∂^α` with `|α| ≤ 2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MatDiffOp {
    n: usize,
    coeffs: BTreeMap<Deriv, SymMatrix>,
}

impl MatDiffOp {
    pub fn zero(n: usize) -> Self {
        MatDiffOp { n, coeffs: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        MatDiffOp::mult(SymMatrix::identity(n))
    }

    /// Multiplication operator.
    pub fn mult(m: SymMatrix) -> Self {
        MatDiffOp::from_coeffs(m.dim(), [(Deriv::NONE, m)])
    }

    /// `∂_μ · I_n`.
    pub fn partial(mu: usize, n: usize) -> Self {
        MatDiffOp::from_coeffs(n, [(Deriv::single(mu), SymMatrix::identity(n))])
    }

    /// Assembles an operator from coefficient matrices, summing duplicates.
    pub fn from_coeffs<I: IntoIterator<Item = (Deriv, SymMatrix)>>(n: usize, it: I) -> Self {
        let mut coeffs: BTreeMap<Deriv, SymMatrix> = BTreeMap::new();
        for (d, m) in it {
            assert_eq!(m.dim(), n, "coefficient dimension mismatch");
            match coeffs.get_mut(&d) {
                Some(c) => *c = c.add(&m),
                None => {
                    coeffs.insert(d, m);
                }
            }
        }
        coeffs.retain(|_, m| !m.is_zero());
        MatDiffOp { n, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Deriv, &SymMatrix)> {
        self.coeffs.iter()
    }

    /// Coefficient of `∂^α` (zero matrix if absent).
    pub fn coeff(&self, d: Deriv) -> SymMatrix {
        self.coeffs.get(&d).cloned().unwrap_or_else(|| SymMatrix::zero(self.n))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> usize {
        self.coeffs.keys().map(Deriv::order).max().unwrap_or(0)
    }

    /// The multiplication matrix if the operator has order zero.
    pub fn as_matrix(&self) -> Result<SymMatrix, OpError> {
        if self.order() > 0 {
            return Err(OpError::NotOrderZero);
        }
        Ok(self.coeff(Deriv::NONE))
    }

    pub fn map_coeffs(&self, f: impl Fn(&SymMatrix) -> SymMatrix) -> Self {
        MatDiffOp::from_coeffs(self.n, self.coeffs.iter().map(|(d, m)| (*d, f(m))))
    }

    pub fn try_map_entries<E>(&self, f: impl Fn(&SymExpr) -> Result<SymExpr, E>) -> Result<Self, E> {
        let mut out = Vec::new();
        for (d, m) in &self.coeffs {
            out.push((*d, m.try_map(&f)?));
        }
        Ok(MatDiffOp::from_coeffs(self.n, out))
    }

    fn check(&self, o: &MatDiffOp) -> Result<(), OpError> {
        if self.n != o.n {
            return Err(OpError::Dimension(self.n, o.n));
        }
        Ok(())
    }

    pub fn add(&self, o: &MatDiffOp) -> Result<MatDiffOp, OpError> {
        self.check(o)?;
        Ok(MatDiffOp::from_coeffs(self.n, self.coeffs.iter().chain(o.coeffs.iter()).map(|(d, m)| (*d, m.clone()))))
    }

    pub fn sub(&self, o: &MatDiffOp) -> Result<MatDiffOp, OpError> {
        self.add(&o.scale(-Cq::one()))
    }

    pub fn scale(&self, c: Cq) -> MatDiffOp {
        self.map_coeffs(|m| m.scale(c))
    }

    /// Entry-wise conjugation of the coefficients.
    pub fn conj_entries(&self) -> MatDiffOp {
        self.map_coeffs(SymMatrix::conj)
    }

    /// `M · A` for a matrix `M` acting after `A`.
    pub fn left_mul(&self, m: &SymMatrix) -> MatDiffOp {
        self.map_coeffs(|c| m.mul(c))
    }

    /// `A · M` for a constant matrix `M` (no Leibniz terms arise).
    pub fn right_mul_const(&self, m: &SymMatrix) -> Result<MatDiffOp, OpError> {
        if !m.is_constant() {
            return Err(OpError::NonConstant);
        }
        Ok(self.map_coeffs(|c| c.mul(m)))
    }

    /// Composition `A ∘ B` with Leibniz redistribution.
    pub fn compose(&self, o: &MatDiffOp) -> Result<MatDiffOp, OpError> {
        self.check(o)?;
        let mut out: Vec<(Deriv, SymMatrix)> = Vec::new();
        for (da, a) in &self.coeffs {
            for (db, b) in &o.coeffs {
                // ∂^α (B ∂^β) = Σ_{γ ⊆ α} (∂^γ B) ∂^{α∖γ + β}
                for (gamma, rest) in split_multi(*da) {
                    let bg = b.derive_multi(gamma)?;
                    if bg.is_zero() {
                        continue;
                    }
                    let d = rest.combine(*db).ok_or(OpError::OrderOverflow)?;
                    out.push((d, a.mul(&bg)));
                }
            }
        }
        let r = MatDiffOp::from_coeffs(self.n, out);
        Ok(r)
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, o: &MatDiffOp) -> Result<MatDiffOp, OpError> {
        self.compose(o)?.sub(&o.compose(self)?)
    }

    /// `D∘a − ρ(a)∘D` for multiplication operators `a`, `ρ(a)`.
    pub fn twisted_commutator(&self, a: &MatDiffOp, rho_a: &MatDiffOp) -> Result<MatDiffOp, OpError> {
        if a.order() > 0 || rho_a.order() > 0 {
            return Err(OpError::NotOrderZero);
        }
        self.compose(a)?.sub(&rho_a.compose(self)?)
    }

    /// Formal adjoint on a closed manifold: `(A ∂^α)† = (−1)^{|α|} ∂^α ∘ A†`.
    pub fn formal_adjoint(&self) -> Result<MatDiffOp, OpError> {
        self.dual(SymMatrix::adjoint)
    }

    /// Formal transpose: like the adjoint but without conjugation.
    pub fn formal_transpose(&self) -> Result<MatDiffOp, OpError> {
        self.dual(SymMatrix::transpose)
    }

    fn dual(&self, f: fn(&SymMatrix) -> SymMatrix) -> Result<MatDiffOp, OpError> {
        let mut acc = MatDiffOp::zero(self.n);
        for (d, m) in &self.coeffs {
            let mut term = MatDiffOp::mult(f(m));
            for &mu in d.indices() {
                term = MatDiffOp::partial(mu as usize, self.n).compose(&term)?.scale(-Cq::one());
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Applies the operator to a spinor of symbolic fields.
    pub fn apply(&self, psi: &[SymExpr]) -> Result<Vec<SymExpr>, OpError> {
        if psi.len() != self.n {
            return Err(OpError::Dimension(self.n, psi.len()));
        }
        let mut out = vec![SymExpr::zero(); self.n];
        for (d, m) in &self.coeffs {
            let dpsi: Vec<SymExpr> = psi.iter().map(|p| p.derive_multi(*d)).collect::<Result<_, _>>()?;
            for (o, v) in out.iter_mut().zip(m.apply(&dpsi)) {
                *o += v;
            }
        }
        Ok(out)
    }

    /// Tensor product with a constant outer matrix: `outer ⊗ A`.
    pub fn kron_outer(outer: &SymMatrix, a: &MatDiffOp) -> MatDiffOp {
        MatDiffOp::from_coeffs(outer.dim() * a.n, a.coeffs.iter().map(|(d, m)| (*d, SymMatrix::kron(outer, m))))
    }

    /// Coefficient map keyed by multi-index label, matrices row-major.
    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        for (d, m) in &self.coeffs {
            let key = if d.order() == 0 { "1".to_string() } else { d.label() };
            obj.insert(key, m.to_json());
        }
        json!({ "dim": self.n, "coefficients": obj })
    }
}

impl fmt::Display for MatDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return writeln!(f, "0");
        }
        for (d, m) in &self.coeffs {
            writeln!(f, "coefficient of {}:", if d.order() == 0 { "1".into() } else { d.label() })?;
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Ways of splitting a multi-index `α = γ + rest`, counted with
/// multiplicity so that Leibniz binomials come out right.
fn split_multi(d: Deriv) -> Vec<(Deriv, Deriv)> {
    let ix = d.indices();
    match ix.len() {
        0 => vec![(Deriv::NONE, Deriv::NONE)],
        1 => vec![(Deriv::NONE, d), (d, Deriv::NONE)],
        _ => {
            let (m, n) = (ix[0] as usize, ix[1] as usize);
            vec![(Deriv::NONE, d), (Deriv::single(m), Deriv::single(n)), (Deriv::single(n), Deriv::single(m)), (d, Deriv::NONE)]
        }
    }
}

/// Antilinear operator `ψ ↦ M·ψ̄` with a constant matrix `M`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AntilinearOp {
    m: SymMatrix,
}

impl AntilinearOp {
    pub fn new(m: SymMatrix) -> Result<Self, OpError> {
        if !m.is_constant() {
            return Err(OpError::NonConstant);
        }
        Ok(AntilinearOp { m })
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    /// `(M∘cc)² = M·M̄` as a linear matrix.
    pub fn square(&self) -> SymMatrix {
        self.m.mul(&self.m.conj())
    }

    /// `(M∘cc)⁻¹ = M̄⁻¹∘cc`.
    pub fn inverse(&self) -> Result<AntilinearOp, OpError> {
        AntilinearOp::new(self.m.conj().inverse()?)
    }

    /// `J ⊗ K` with `self` outermost.
    pub fn kron(outer: &AntilinearOp, inner: &AntilinearOp) -> AntilinearOp {
        AntilinearOp { m: SymMatrix::kron(&outer.m, &inner.m) }
    }

    /// Applies to a symbolic spinor.
    pub fn apply(&self, psi: &[SymExpr]) -> Vec<SymExpr> {
        let c: Vec<SymExpr> = psi.iter().map(SymExpr::conj).collect();
        self.m.apply(&c)
    }

    pub fn as_gen(&self) -> GenOp {
        GenOp::Anti { lin: MatDiffOp::identity(self.dim()), m: self.m.clone() }
    }
}

/// `J∘A∘J⁻¹ = M·Ā·M⁻¹` for `J = M∘cc`.
pub fn sandwich_antilinear(j: &AntilinearOp, a: &MatDiffOp) -> Result<MatDiffOp, OpError> {
    let minv = j.m.inverse()?;
    a.conj_entries().left_mul(&j.m).right_mul_const(&minv)
}

/// An operator that is either linear or antilinear, kept in the form
/// `L` or `L∘(M∘cc)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GenOp {
    Linear(MatDiffOp),
    Anti { lin: MatDiffOp, m: SymMatrix },
}

impl GenOp {
    pub fn dim(&self) -> usize {
        match self {
            GenOp::Linear(a) => a.dim(),
            GenOp::Anti { lin, .. } => lin.dim(),
        }
    }

    pub fn compose(&self, o: &GenOp) -> Result<GenOp, OpError> {
        Ok(match (self, o) {
            (GenOp::Linear(a), GenOp::Linear(b)) => GenOp::Linear(a.compose(b)?),
            (GenOp::Linear(a), GenOp::Anti { lin, m }) => GenOp::Anti { lin: a.compose(lin)?, m: m.clone() },
            (GenOp::Anti { lin, m }, GenOp::Linear(b)) => {
                let moved = b.conj_entries().left_mul(m).right_mul_const(&m.inverse()?)?;
                GenOp::Anti { lin: lin.compose(&moved)?, m: m.clone() }
            }
            (GenOp::Anti { lin: a, m: n }, GenOp::Anti { lin: b, m }) => {
                // A∘Ncc∘B∘Mcc = A·N·B̄·M̄
                let inner = b.conj_entries().left_mul(n).right_mul_const(&m.conj())?;
                GenOp::Linear(a.compose(&inner)?)
            }
        })
    }

    pub fn add(&self, o: &GenOp) -> Result<GenOp, OpError> {
        match (self, o) {
            (GenOp::Linear(a), GenOp::Linear(b)) => Ok(GenOp::Linear(a.add(b)?)),
            (GenOp::Anti { lin: a, m: n }, GenOp::Anti { lin: b, m }) if n == m => {
                Ok(GenOp::Anti { lin: a.add(b)?, m: m.clone() })
            }
            (GenOp::Anti { lin: a, m: n }, GenOp::Anti { lin: b, m }) => {
                // b∘Mcc = (b·M·N⁻¹)∘Ncc
                let conv = b.right_mul_const(&m.mul(&n.inverse()?))?;
                Ok(GenOp::Anti { lin: a.add(&conv)?, m: n.clone() })
            }
            _ => Err(OpError::Dimension(self.dim(), o.dim())),
        }
    }

    pub fn scale(&self, c: Cq) -> GenOp {
        match self {
            GenOp::Linear(a) => GenOp::Linear(a.scale(c)),
            GenOp::Anti { lin, m } => GenOp::Anti { lin: lin.scale(c), m: m.clone() },
        }
    }

    pub fn linear(&self) -> Option<&MatDiffOp> {
        match self {
            GenOp::Linear(a) => Some(a),
            GenOp::Anti { .. } => None,
        }
    }

    /// True if linear and zero, or antilinear with zero linear factor.
    pub fn is_zero(&self) -> bool {
        match self {
            GenOp::Linear(a) => a.is_zero(),
            GenOp::Anti { lin, .. } => lin.is_zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfield::Symbol;

    fn f() -> SymExpr {
        SymExpr::sym("f")
    }

    #[test]
    fn compose_leibniz_scalar() {
        let d0 = MatDiffOp::partial(0, 1);
        let fm = MatDiffOp::mult(SymMatrix::scalar(1, f()));
        let got = d0.compose(&fm).unwrap();
        let want = MatDiffOp::from_coeffs(
            1,
            [(Deriv::single(0), SymMatrix::scalar(1, f())), (Deriv::NONE, SymMatrix::scalar(1, Symbol::complex("f").d(0)))],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn second_order_binomial() {
        // ∂0∂1 ∘ f = f∂01 + f_0 ∂1 + f_1 ∂0 + f_01
        let d01 = MatDiffOp::from_coeffs(1, [(Deriv::pair(0, 1), SymMatrix::identity(1))]);
        let fm = MatDiffOp::mult(SymMatrix::scalar(1, f()));
        let got = d01.compose(&fm).unwrap();
        let s = Symbol::complex("f");
        assert_eq!(got.coeff(Deriv::pair(0, 1)).get(0, 0), &f());
        assert_eq!(got.coeff(Deriv::single(1)).get(0, 0), &s.d(0));
        assert_eq!(got.coeff(Deriv::single(0)).get(0, 0), &s.d(1));
        assert_eq!(got.coeff(Deriv::NONE).get(0, 0), &s.d(0).derive(1).unwrap());
    }

    #[test]
    fn third_order_is_rejected() {
        let d01 = MatDiffOp::from_coeffs(1, [(Deriv::pair(0, 1), SymMatrix::identity(1))]);
        assert_eq!(d01.compose(&MatDiffOp::partial(2, 1)), Err(OpError::OrderOverflow));
    }

    #[test]
    fn adjoint_of_multiplication_and_partial() {
        let fm = MatDiffOp::mult(SymMatrix::scalar(1, f()));
        assert_eq!(fm.formal_adjoint().unwrap(), MatDiffOp::mult(SymMatrix::scalar(1, f().conj())));
        let d = MatDiffOp::partial(1, 2);
        assert_eq!(d.formal_adjoint().unwrap(), d.scale(-Cq::one()));
        let op = fm.compose(&MatDiffOp::partial(1, 1)).unwrap();
        assert_eq!(op.formal_adjoint().unwrap().formal_adjoint().unwrap(), op);
    }

    #[test]
    fn inverse_of_constant_matrix() {
        let m = SymMatrix::from_cq(2, &[Cq::new(0, 1), Cq::new(1, 0), Cq::new(2, 0), Cq::new(0, 0)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), SymMatrix::identity(2));
        assert_eq!(SymMatrix::zero(2).inverse(), Err(OpError::Singular));
    }

    #[test]
    fn sandwich_with_plain_conjugation() {
        let j = AntilinearOp::new(SymMatrix::identity(1)).unwrap();
        let a = MatDiffOp::mult(SymMatrix::scalar(1, f()));
        assert_eq!(sandwich_antilinear(&j, &a).unwrap(), MatDiffOp::mult(SymMatrix::scalar(1, f().conj())));
    }

    #[test]
    fn genop_sandwich_matches_direct() {
        let m = SymMatrix::from_cq(2, &[Cq::new(0, 0), Cq::new(0, 1), Cq::new(0, -1), Cq::new(0, 0)]);
        let j = AntilinearOp::new(m).unwrap();
        let a = MatDiffOp::from_coeffs(
            2,
            [
                (Deriv::single(0), SymMatrix::diag(vec![f(), SymExpr::sym("g")])),
                (Deriv::NONE, SymMatrix::scalar(2, SymExpr::i())),
            ],
        );
        let g = j.as_gen().compose(&GenOp::Linear(a.clone())).unwrap().compose(&j.inverse().unwrap().as_gen()).unwrap();
        assert_eq!(g, GenOp::Linear(sandwich_antilinear(&j, &a).unwrap()));
    }

    #[test]
    fn kron_layout_outer_blocks() {
        let outer = SymMatrix::from_cq(2, &[Cq::new(0, 0), Cq::new(1, 0), Cq::new(0, 0), Cq::new(0, 0)]);
        let inner = SymMatrix::diag(vec![f(), SymExpr::int(2)]);
        let k = SymMatrix::kron(&outer, &inner);
        assert_eq!(k.get(0, 2), &f());
        assert_eq!(k.get(1, 3), &SymExpr::int(2));
        assert!(k.get(2, 0).is_zero());
    }
}
