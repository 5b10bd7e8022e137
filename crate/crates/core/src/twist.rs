//! Minimal twist by the grading: each algebra slot is doubled, one copy acts
//! on each grading eigenspace, and the flip swaps the copies.
//!
//! The flip is kept as a slot permutation, so `ρ` acts structurally on
//! algebra elements and never as a matrix.

use crate::coeff::Cq;
use crate::gammarep::euclidean_gammas;
use crate::operator::{sandwich_antilinear, AntilinearOp, MatDiffOp, OpError, SymMatrix};
use crate::report::{Check, Report};
use crate::symfield::SymExpr;
use crate::triple::{check_order_one, check_order_zero, AlgebraElt, Representation, SpectralTripleData, TripleError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TwistError {
    #[error("slot {0} vanishes on the {1} grading eigenspace")]
    NotFaithful(String, &'static str),
    #[error("R is not unitary")]
    NotUnitary,
    #[error("R does not implement the flip: R π(a) R† ≠ π(ρ(a))")]
    NotImplementing,
    #[error("JR is neither RJ nor −RJ")]
    Incompatible,
    #[error("Hilbert space dimension {0} is not a multiple of 4")]
    NotSpinorial(usize),
    #[error(transparent)]
    Op(#[from] OpError),
    #[error(transparent)]
    Triple(#[from] TripleError),
}

/// A minimally twisted real spectral triple.
#[derive(Clone, Debug)]
pub struct TwistedTripleData {
    /// The untwisted triple the twist was built from.
    pub base: SpectralTripleData,
    /// Same `H`, `D`, `γ`, `J` with the doubled representation.
    pub triple: SpectralTripleData,
    /// `ρ` as a slot permutation: `ρ(a)[k] = a[flip[k]]`.
    pub flip: Vec<usize>,
    pub r: SymMatrix,
    pub eps3: i8,
    /// Slots whose restriction to one eigenspace vanishes (warning mode).
    pub warnings: Vec<String>,
}

/// Grading projectors `𝔭± = ½(I ± γ)`.
pub fn grading_projectors(gamma: &SymMatrix) -> (SymMatrix, SymMatrix) {
    let id = SymMatrix::identity(gamma.dim());
    let half = Cq::frac(1, 2);
    (id.add(gamma).scale(half), id.sub(gamma).scale(half))
}

/// `I_F ⊗ γ⁰` in the finite-outermost layout.
pub fn gamma0_unitary(dim: usize) -> Result<SymMatrix, TwistError> {
    if !dim.is_multiple_of(4) {
        return Err(TwistError::NotSpinorial(dim));
    }
    Ok(SymMatrix::kron(&SymMatrix::identity(dim / 4), &euclidean_gammas().gamma[0]))
}

/// Sign `s` with `JR = sRJ`.
pub fn compat_sign(r: &SymMatrix, j: &AntilinearOp) -> Result<i8, TwistError> {
    let jr = sandwich_antilinear(j, &MatDiffOp::mult(r.clone()))?.as_matrix()?;
    if jr == *r {
        Ok(1)
    } else if jr == r.scale(-Cq::one()) {
        Ok(-1)
    } else {
        Err(TwistError::Incompatible)
    }
}

/// Minimal twist with `R = I_F ⊗ γ⁰`; non-faithful restrictions are errors.
pub fn minimal_twist(t: &SpectralTripleData) -> Result<TwistedTripleData, TwistError> {
    minimal_twist_with(t, gamma0_unitary(t.dim())?, false)
}

/// Minimal twist with an explicit `R`; `lenient` turns non-faithful
/// restrictions into warnings.
pub fn minimal_twist_with(t: &SpectralTripleData, r: SymMatrix, lenient: bool) -> Result<TwistedTripleData, TwistError> {
    let (pp, pm) = grading_projectors(&t.grading);
    let k = t.rep.slots.len();
    let mut slots = Vec::with_capacity(2 * k);
    let mut mats = Vec::with_capacity(2 * k);
    let mut warnings = Vec::new();
    for (proj, side, suffix) in [(&pp, "+1", ""), (&pm, "-1", "'")] {
        for (s, m) in t.rep.slots.iter().zip(&t.rep.mats) {
            let restricted = proj.mul(m);
            if restricted.is_zero() {
                if !lenient {
                    return Err(TwistError::NotFaithful(s.clone(), side));
                }
                warnings.push(format!("slot {s} vanishes on the {side} eigenspace"));
            }
            slots.push(format!("{s}{suffix}"));
            mats.push(restricted);
        }
    }
    let flip: Vec<usize> = (0..2 * k).map(|i| (i + k) % (2 * k)).collect();
    let rep = Representation::new(slots, mats)?;
    if r.mul(&r.adjoint()) != SymMatrix::identity(t.dim()) {
        return Err(TwistError::NotUnitary);
    }
    let a = AlgebraElt::generic(&rep, "a_");
    if r.mul(&rep.matrix(&a)).mul(&r.adjoint()) != rep.matrix(&a.permute(&flip)) {
        return Err(TwistError::NotImplementing);
    }
    let eps3 = compat_sign(&r, &t.real)?;
    let triple = SpectralTripleData { name: format!("{}-twisted", t.name), rep, ..t.clone() };
    Ok(TwistedTripleData { base: t.clone(), triple, flip, r, eps3, warnings })
}

impl TwistedTripleData {
    pub fn rho(&self, a: &AlgebraElt) -> AlgebraElt {
        a.permute(&self.flip)
    }

    /// `π(a)` and `π(ρ(a))` as multiplication operators.
    pub fn pi_pair(&self, a: &AlgebraElt) -> (MatDiffOp, MatDiffOp) {
        (self.triple.rep.op(a), self.triple.rep.op(&self.rho(a)))
    }

    /// `[D, π(a)]_ρ`.
    pub fn twisted_commutator(&self, a: &AlgebraElt) -> Result<MatDiffOp, OpError> {
        let (p, rp) = self.pi_pair(a);
        self.triple.dirac.twisted_commutator(&p, &rp)
    }

    /// Generic element with slot symbols named after the slots themselves.
    pub fn slot_element(&self) -> AlgebraElt {
        AlgebraElt::generic(&self.triple.rep, "")
    }

    pub fn check(&self) -> Report {
        let name = &self.triple.name;
        let mut r = Report::new(format!("twist/{name}"));
        let a = AlgebraElt::generic(&self.triple.rep, "a_");
        let involutive = self.rho(&self.rho(&a)) == a;
        r.push(Check::from_bool(format!("{name}: flip is an involution"), involutive, "ρ² = id on slots"));
        let implements = self.r.mul(&self.triple.rep.matrix(&a)).mul(&self.r.adjoint()) == self.triple.rep.matrix(&self.rho(&a));
        r.push(Check::from_bool(format!("{name}: R implements the flip"), implements, "R π(a) R† = π(ρ(a))"));
        r.push(Check::pass(format!("{name}: compatibility sign of R with J"), format!("ε‴ = {}", self.eps3)));
        let bounded = self.twisted_commutator(&a).map(|c| c.order() == 0);
        r.push(Check::from_bool(
            format!("{name}: twisted commutator is bounded"),
            bounded == Ok(true),
            "[D, π(a)]_ρ is a multiplication operator",
        ));
        r.extend(check_order_zero(&self.triple));
        r.extend(check_order_one(&self.triple, Some(&self.flip)));
        r
    }
}

/// Integrand `ψ†Rφ` of the ρ-inner product.
pub fn rho_product(psi: &[SymExpr], phi: &[SymExpr], r: &SymMatrix) -> SymExpr {
    psi.iter().zip(r.apply(phi)).fold(SymExpr::zero(), |acc, (p, q)| &acc + &(&p.conj() * &q))
}
