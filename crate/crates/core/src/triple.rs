//! Real graded spectral triples: representation data, the algebraic axioms
//! (grading, KO signs, order zero, order one) and products with a finite
//! triple.
//!
//! Tensor products put the finite index outermost: `H = H_F ⊗ H_M` is laid
//! out as `dim H_F` blocks of spinors, so `π(f, g) = diag(f·I₄, g·I₄)` for
//! the two-point space.

use crate::coeff::Cq;
use crate::operator::{sandwich_antilinear, AntilinearOp, MatDiffOp, OpError, SymMatrix};
use crate::report::{Check, Report};
use crate::symfield::{Deriv, SymExpr};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TripleError {
    #[error("{relation}: declared KO-dimension {ko} needs {expected:+}, found {found}")]
    SignMismatch { relation: &'static str, ko: u8, expected: i8, found: String },
    #[error("{0} is neither +1 nor -1 times the expected operator")]
    NonSign(&'static str),
    #[error("grading axiom violated: {0}")]
    Grading(String),
    #[error("representation: {0}")]
    Representation(String),
    #[error(transparent)]
    Op(#[from] OpError),
    #[error("model description: {0}")]
    Description(String),
}

/// The signs `(ε, ε′, ε″)` for KO-dimension `n mod 8`; `ε″` only for even `n`.
pub fn ko_signs(n: u8) -> (i8, i8, Option<i8>) {
    match n % 8 {
        0 => (1, 1, Some(1)),
        1 => (1, -1, None),
        2 => (-1, 1, Some(-1)),
        3 => (-1, 1, None),
        4 => (-1, 1, Some(1)),
        5 => (-1, -1, None),
        6 => (1, 1, Some(-1)),
        _ => (1, 1, None),
    }
}

/// `π(a) = Σ_k a_k·M_k` over named scalar slots with constant matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    pub slots: Vec<String>,
    pub mats: Vec<SymMatrix>,
}

/// Slot values of an algebra element.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElt(pub Vec<SymExpr>);

impl AlgebraElt {
    /// Complex symbols named `{prefix}{slot}`.
    pub fn generic(rep: &Representation, prefix: &str) -> Self {
        AlgebraElt(rep.slots.iter().map(|s| SymExpr::sym(&format!("{prefix}{s}"))).collect())
    }

    pub fn from_names(names: &[&str]) -> Self {
        AlgebraElt(names.iter().map(|n| SymExpr::sym(n)).collect())
    }

    pub fn star(&self) -> Self {
        AlgebraElt(self.0.iter().map(SymExpr::conj).collect())
    }

    /// Slot permutation: `result[k] = self[perm[k]]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        AlgebraElt(perm.iter().map(|&k| self.0[k].clone()).collect())
    }
}

impl Representation {
    pub fn new(slots: Vec<String>, mats: Vec<SymMatrix>) -> Result<Self, TripleError> {
        if slots.len() != mats.len() || slots.is_empty() {
            return Err(TripleError::Representation("one matrix per slot required".into()));
        }
        let n = mats[0].dim();
        if mats.iter().any(|m| m.dim() != n || !m.is_constant()) {
            return Err(TripleError::Representation("slot matrices must be constant and equal-sized".into()));
        }
        Ok(Representation { slots, mats })
    }

    pub fn dim(&self) -> usize {
        self.mats[0].dim()
    }

    pub fn matrix(&self, a: &AlgebraElt) -> SymMatrix {
        self.mats.iter().zip(&a.0).fold(SymMatrix::zero(self.dim()), |acc, (m, v)| acc.add(&m.scale_expr(v)))
    }

    pub fn op(&self, a: &AlgebraElt) -> MatDiffOp {
        MatDiffOp::mult(self.matrix(a))
    }

    pub fn slot_index(&self, name: &str) -> Option<usize> {
        self.slots.iter().position(|s| s == name)
    }

    /// Unital (`Σ M_k = I`) and multiplicative (`M_j M_k = δ_jk M_k`).
    pub fn check(&self) -> Result<(), TripleError> {
        let sum = self.mats.iter().fold(SymMatrix::zero(self.dim()), |acc, m| acc.add(m));
        if sum != SymMatrix::identity(self.dim()) {
            return Err(TripleError::Representation("not unital".into()));
        }
        for (j, a) in self.mats.iter().enumerate() {
            for (k, b) in self.mats.iter().enumerate() {
                let want = if j == k { a.clone() } else { SymMatrix::zero(self.dim()) };
                if a.mul(b) != want {
                    return Err(TripleError::Representation(format!(
                        "slots {} and {} are not orthogonal idempotents",
                        self.slots[j], self.slots[k]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Outer-index tensor product with the finite representation outermost.
    pub fn product(manifold: &Representation, finite: &Representation) -> Representation {
        let single = manifold.slots.len() == 1;
        let mut slots = Vec::new();
        let mut mats = Vec::new();
        for (fs, fm) in finite.slots.iter().zip(&finite.mats) {
            for (ms, mm) in manifold.slots.iter().zip(&manifold.mats) {
                slots.push(if single { fs.clone() } else { format!("{ms}.{fs}") });
                mats.push(SymMatrix::kron(fm, mm));
            }
        }
        Representation { slots, mats }
    }
}

/// A real even spectral triple with algebraic data only.
#[derive(Clone, Debug)]
pub struct SpectralTripleData {
    pub name: String,
    pub rep: Representation,
    pub dirac: MatDiffOp,
    pub grading: SymMatrix,
    pub real: AntilinearOp,
    pub ko_dim: u8,
}

/// The signs found by [`check_real_signs`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct KoSigns {
    pub epsilon: i8,
    pub epsilon_prime: i8,
    pub epsilon_second: i8,
}

fn is_multiple(lhs: &MatDiffOp, rhs: &MatDiffOp, s: i8) -> Result<bool, OpError> {
    Ok(lhs.sub(&rhs.scale(Cq::from(i128::from(s))))?.is_zero())
}

/// Sign `s` with `lhs = s·rhs`, trying `prefer` first (both hold when `rhs = 0`).
fn sign_between(lhs: &MatDiffOp, rhs: &MatDiffOp, prefer: i8) -> Result<Option<i8>, OpError> {
    for s in [prefer, -prefer] {
        if is_multiple(lhs, rhs, s)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

impl SpectralTripleData {
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    fn grading_op(&self) -> MatDiffOp {
        MatDiffOp::mult(self.grading.clone())
    }

    /// `γ = γ†`, `γ² = I`, `γD = −Dγ`, `[γ, π(a)] = 0`.
    pub fn check_grading(&self) -> Result<(), TripleError> {
        let g = &self.grading;
        if g.adjoint() != *g {
            return Err(TripleError::Grading("γ is not self-adjoint".into()));
        }
        if g.mul(g) != SymMatrix::identity(self.dim()) {
            return Err(TripleError::Grading("γ² ≠ I".into()));
        }
        let anti = self.grading_op().compose(&self.dirac)?.add(&self.dirac.compose(&self.grading_op())?)?;
        if !anti.is_zero() {
            return Err(TripleError::Grading("γD + Dγ ≠ 0".into()));
        }
        for (s, m) in self.rep.slots.iter().zip(&self.rep.mats) {
            if !g.commutator(m).is_zero() {
                return Err(TripleError::Grading(format!("γ does not commute with slot {s}")));
            }
        }
        Ok(())
    }

    pub fn check_axioms(&self) -> Report {
        let mut r = Report::new(format!("axioms/{}", self.name));
        r.push(match self.rep.check() {
            Ok(()) => Check::pass(format!("{}: representation unital and multiplicative", self.name), "ok"),
            Err(e) => Check::fail(format!("{}: representation unital and multiplicative", self.name), "violated", e.to_string()),
        });
        r.push(match self.check_grading() {
            Ok(()) => Check::pass(format!("{}: grading relations", self.name), "γ=γ†, γ²=I, γD=−Dγ, [γ,a]=0"),
            Err(e) => Check::fail(format!("{}: grading relations", self.name), "violated", e.to_string()),
        });
        r.push(match check_real_signs(self) {
            Ok(s) => Check::pass(
                format!("{}: KO sign table row {}", self.name, self.ko_dim),
                format!("(ε, ε′, ε″) = ({}, {}, {})", s.epsilon, s.epsilon_prime, s.epsilon_second),
            ),
            Err(e) => Check::fail(format!("{}: KO sign table row {}", self.name, self.ko_dim), "mismatch", e.to_string()),
        });
        r.extend(check_order_zero(self));
        r.extend(check_order_one(self, None));
        r
    }
}

/// Computes `(ε, ε′, ε″)` from `J² = εI`, `JD = ε′DJ`, `Jγ = ε″γJ` and checks
/// them against the declared KO-dimension.
pub fn check_real_signs(t: &SpectralTripleData) -> Result<KoSigns, TripleError> {
    let (e, ep, epp) = ko_signs(t.ko_dim);
    let epp = epp.ok_or_else(|| TripleError::Description("odd KO-dimension has no grading sign".into()))?;
    let n = t.dim();
    let sq = MatDiffOp::mult(t.real.square());
    let epsilon = sign_between(&sq, &MatDiffOp::identity(n), e)?.ok_or(TripleError::NonSign("J²"))?;
    let jd = sandwich_antilinear(&t.real, &t.dirac)?;
    let epsilon_prime = sign_between(&jd, &t.dirac, ep)?.ok_or(TripleError::NonSign("JDJ⁻¹"))?;
    let jg = sandwich_antilinear(&t.real, &t.grading_op())?;
    let epsilon_second = sign_between(&jg, &t.grading_op(), epp)?.ok_or(TripleError::NonSign("JγJ⁻¹"))?;
    for (relation, expected, found) in
        [("J² = εI", e, epsilon), ("JD = ε′DJ", ep, epsilon_prime), ("Jγ = ε″γJ", epp, epsilon_second)]
    {
        if expected != found {
            return Err(TripleError::SignMismatch { relation, ko: t.ko_dim, expected, found: format!("{found:+}") });
        }
    }
    Ok(KoSigns { epsilon, epsilon_prime, epsilon_second })
}

/// `b° = J b* J⁻¹` as a multiplication operator.
pub fn opposite(t: &SpectralTripleData, b: &AlgebraElt) -> Result<MatDiffOp, OpError> {
    sandwich_antilinear(&t.real, &t.rep.op(&b.star()))
}

/// First nonzero coefficient entry, formatted for reports.
pub fn first_nonzero(op: &MatDiffOp) -> Option<String> {
    for (d, m) in op.coeffs() {
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                let e = m.get(i, j);
                if !e.is_zero() {
                    let at = if *d == Deriv::NONE { "order 0".to_string() } else { d.label() };
                    return Some(format!("{at} entry ({i},{j}) = {e}"));
                }
            }
        }
    }
    None
}

fn zero_check(anchor: String, op: Result<MatDiffOp, OpError>) -> Check {
    match op {
        Ok(o) => match first_nonzero(&o) {
            None => Check::pass(anchor, "exact zero operator"),
            Some(w) => Check::fail(anchor, "nonzero", w),
        },
        Err(e) => Check::fail(anchor, "operator error", e.to_string()),
    }
}

/// `[π(a), J π(b*) J⁻¹] = 0` for generic symbolic `a`, `b`.
pub fn check_order_zero(t: &SpectralTripleData) -> Report {
    let mut r = Report::new(format!("order-zero/{}", t.name));
    let a = AlgebraElt::generic(&t.rep, "a_");
    let b = AlgebraElt::generic(&t.rep, "b_");
    let op = opposite(t, &b).and_then(|bo| t.rep.op(&a).commutator(&bo));
    r.push(zero_check(format!("{}: order-zero condition [a, Jb*J⁻¹] = 0", t.name), op));
    r
}

/// Untwisted `[[D, a], b°] = 0`, or with a slot flip `ρ`:
/// `[D, a]_ρ b° − J ρ(b*) J⁻¹ [D, a]_ρ = 0`.
pub fn check_order_one(t: &SpectralTripleData, flip: Option<&[usize]>) -> Report {
    let mut r = Report::new(format!("order-one/{}", t.name));
    let a = AlgebraElt::generic(&t.rep, "a_");
    let b = AlgebraElt::generic(&t.rep, "b_");
    let op = (|| {
        let bo = opposite(t, &b)?;
        match flip {
            None => t.dirac.commutator(&t.rep.op(&a))?.commutator(&bo),
            Some(perm) => {
                let tc = t.dirac.twisted_commutator(&t.rep.op(&a), &t.rep.op(&a.permute(perm)))?;
                let rho_bo = opposite(t, &b.permute(perm))?;
                tc.compose(&bo)?.sub(&rho_bo.compose(&tc)?)
            }
        }
    })();
    let label = if flip.is_some() { "twisted order-one condition" } else { "order-one condition" };
    r.push(zero_check(format!("{}: {label}", t.name), op));
    r
}

/// Finite triple `(A_F, H_F, D_F; J_F, γ_F)`.
#[derive(Clone, Debug)]
pub struct FiniteTripleData {
    pub name: String,
    pub basis: Vec<String>,
    pub rep: Representation,
    pub dirac: SymMatrix,
    pub grading: SymMatrix,
    pub real: AntilinearOp,
    pub ko_dim: u8,
}

impl FiniteTripleData {
    pub fn as_triple(&self) -> SpectralTripleData {
        SpectralTripleData {
            name: self.name.clone(),
            rep: self.rep.clone(),
            dirac: MatDiffOp::mult(self.dirac.clone()),
            grading: self.grading.clone(),
            real: self.real.clone(),
            ko_dim: self.ko_dim,
        }
    }
}

/// `A_M ⊗ A_F` acting on `H_F ⊗ H_M` with `D = I_F ⊗ ð + D_F ⊗ γ_M`.
pub fn product_triple(m: &SpectralTripleData, f: &FiniteTripleData) -> SpectralTripleData {
    let nf = f.dirac.dim();
    let d = MatDiffOp::kron_outer(&SymMatrix::identity(nf), &m.dirac)
        .add(&MatDiffOp::mult(SymMatrix::kron(&f.dirac, &m.grading)))
        .expect("matching dimensions");
    SpectralTripleData {
        name: format!("{}x{}", m.name, f.name),
        rep: Representation::product(&m.rep, &f.rep),
        dirac: d,
        grading: SymMatrix::kron(&f.grading, &m.grading),
        real: AntilinearOp::kron(&f.real, &m.real),
        ko_dim: (m.ko_dim + f.ko_dim) % 8,
    }
}

/// Parses a matrix entry such as `d`, `-conj[d]`, `1/2*i*f + 3`.
pub fn parse_entry(s: &str) -> Result<SymExpr, TripleError> {
    let err = |m: &str| TripleError::Description(format!("entry `{s}`: {m}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty"));
    }
    let mut out = SymExpr::zero();
    let mut start = 0;
    let bytes: Vec<char> = compact.chars().collect();
    let mut terms = Vec::new();
    for (k, &c) in bytes.iter().enumerate() {
        if (c == '+' || c == '-') && k > 0 && bytes[k - 1] != '*' && bytes[k - 1] != '/' {
            terms.push(bytes[start..k].iter().collect::<String>());
            start = k;
        }
    }
    terms.push(bytes[start..].iter().collect());
    for term in terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, term.strip_prefix('+').unwrap_or(&term)),
        };
        let mut value = SymExpr::one();
        for factor in body.split('*') {
            let f = if factor == "i" {
                SymExpr::i()
            } else if let Some(inner) = factor.strip_prefix("conj[").and_then(|r| r.strip_suffix(']')) {
                SymExpr::sym(inner).conj()
            } else if let Some((n, d)) = factor.split_once('/') {
                let n: i128 = n.parse().map_err(|_| err("bad numerator"))?;
                let d: i128 = d.parse().map_err(|_| err("bad denominator"))?;
                if d == 0 {
                    return Err(err("zero denominator"));
                }
                SymExpr::constant(Cq::frac(n, d))
            } else if let Ok(v) = factor.parse::<i128>() {
                SymExpr::int(v)
            } else if !factor.is_empty() && factor.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
                SymExpr::sym(factor)
            } else {
                return Err(err("unrecognised factor"));
            };
            value = &value * &f;
        }
        out += if neg { -value } else { value };
    }
    Ok(out)
}

#[derive(Deserialize)]
struct SlotJson {
    name: String,
    /// Diagonal of the slot projector (0/1 entries).
    diag: Vec<i128>,
}

#[derive(Deserialize)]
struct FiniteJson {
    name: String,
    ko_dim: u8,
    basis: Vec<String>,
    slots: Vec<SlotJson>,
    dirac: Vec<Vec<String>>,
    grading: Vec<i128>,
    /// Matrix part of the antilinear `J_F`.
    real: Vec<Vec<String>>,
}

fn matrix_from_rows(rows: &[Vec<String>], n: usize) -> Result<SymMatrix, TripleError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(TripleError::Description(format!("expected a {n}x{n} matrix")));
    }
    let data = rows.iter().flatten().map(|e| parse_entry(e)).collect::<Result<Vec<_>, _>>()?;
    Ok(SymMatrix::from_rows(n, data))
}

/// Loads a finite triple from its declarative JSON description.
pub fn finite_from_json(text: &str) -> Result<FiniteTripleData, TripleError> {
    let j: FiniteJson = serde_json::from_str(text).map_err(|e| TripleError::Description(e.to_string()))?;
    let n = j.basis.len();
    let diag = |v: &[i128]| -> Result<SymMatrix, TripleError> {
        if v.len() != n {
            return Err(TripleError::Description("diagonal length differs from basis".into()));
        }
        Ok(SymMatrix::diag(v.iter().map(|&x| SymExpr::int(x)).collect()))
    };
    let mats = j.slots.iter().map(|s| diag(&s.diag)).collect::<Result<Vec<_>, _>>()?;
    let rep = Representation::new(j.slots.into_iter().map(|s| s.name).collect(), mats)?;
    Ok(FiniteTripleData {
        name: j.name,
        rep,
        dirac: matrix_from_rows(&j.dirac, n)?,
        grading: diag(&j.grading)?,
        real: AntilinearOp::new(matrix_from_rows(&j.real, n)?)?,
        ko_dim: j.ko_dim,
        basis: j.basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries() {
        let d = SymExpr::sym("d");
        assert_eq!(parse_entry("d").unwrap(), d);
        assert_eq!(parse_entry("-conj[d]").unwrap(), -d.conj());
        assert_eq!(
            parse_entry("1/2*i*d + 3").unwrap(),
            &d.scale(Cq::from_parts(0.into(), crate::Q::new(1, 2))) + &SymExpr::int(3)
        );
        assert_eq!(parse_entry("0").unwrap(), SymExpr::zero());
        assert!(parse_entry("d$").is_err());
    }

    #[test]
    fn ko_table_even_rows() {
        assert_eq!(ko_signs(4), (-1, 1, Some(1)));
        assert_eq!(ko_signs(6), (1, 1, Some(-1)));
        assert_eq!(ko_signs(2), (-1, 1, Some(-1)));
        assert_eq!(ko_signs(0), (1, 1, Some(1)));
        assert_eq!(ko_signs(5).2, None);
    }
}
