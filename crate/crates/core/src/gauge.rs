//! Gauge transformations by unitary phase elements.
//!
//! Twisted: `ω ↦ ρ(u)([D, u*]_ρ + ωu*)` and `D_ω ↦ Ad ρ(u) · D_ω · Ad u*`.
//! Untwisted: the same with `ρ = id`. `Ad u = uJuJ⁻¹`.

use crate::fluct::{decompose, ChiralBlock, ChiralBlocks, FluctError, OneFormData};
use crate::operator::{sandwich_antilinear, MatDiffOp, OpError, SymMatrix};
use crate::report::{Check, Report};
use crate::symfield::{SymError, SymExpr};
use crate::triple::{AlgebraElt, Representation, SpectralTripleData};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GaugeError {
    #[error("expected {expected} phases, got {got}")]
    PhaseCount { expected: usize, got: usize },
    #[error("field blocks have different shapes")]
    ShapeMismatch,
    #[error(transparent)]
    Op(#[from] OpError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Fluct(#[from] FluctError),
}

/// `u = (e^{iθ_k})_k`, one real phase per algebra slot.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryElt {
    pub phases: Vec<String>,
    pub elt: AlgebraElt,
}

impl UnitaryElt {
    pub fn new(phases: &[&str]) -> Self {
        UnitaryElt {
            phases: phases.iter().map(|s| s.to_string()).collect(),
            elt: AlgebraElt(phases.iter().map(|p| SymExpr::phase(p)).collect()),
        }
    }

    /// Phases for a minimally twisted algebra: `names` covers the unprimed
    /// slots; primed slots get `name'`, or reuse `name` when
    /// `identify_primed` is set.
    pub fn twisted(names: &[&str], identify_primed: bool) -> Self {
        let primed: Vec<String> = names.iter().map(|n| if identify_primed { n.to_string() } else { format!("{n}'") }).collect();
        let all: Vec<&str> = names.iter().copied().chain(primed.iter().map(String::as_str)).collect();
        UnitaryElt::new(&all)
    }

    pub fn identity(slots: usize) -> Self {
        UnitaryElt { phases: Vec::new(), elt: AlgebraElt(vec![SymExpr::one(); slots]) }
    }

    /// `u* = (e^{−iθ_k})_k`.
    pub fn star(&self) -> AlgebraElt {
        self.elt.star()
    }

    fn check_len(&self, rep: &Representation) -> Result<(), GaugeError> {
        if self.elt.0.len() != rep.slots.len() {
            return Err(GaugeError::PhaseCount { expected: rep.slots.len(), got: self.elt.0.len() });
        }
        Ok(())
    }

    /// `π(u)π(u*)` and `π(u*)π(u)`, both of which should be the identity.
    pub fn unitarity_defect(&self, rep: &Representation) -> (SymMatrix, SymMatrix) {
        let (p, q) = (rep.matrix(&self.elt), rep.matrix(&self.star()));
        let id = SymMatrix::identity(rep.dim());
        (p.mul(&q).sub(&id), q.mul(&p).sub(&id))
    }
}

fn rho_of(a: &AlgebraElt, flip: Option<&[usize]>) -> AlgebraElt {
    flip.map_or_else(|| a.clone(), |f| a.permute(f))
}

/// Transformed one-form and the shift of its chiral fields.
#[derive(Clone, Debug)]
pub struct GaugeResult {
    pub omega: OneFormData,
    /// `after − before`, when both decompose.
    pub shift: Option<ChiralBlocks>,
}

/// `ρ(u)([D, u*]_ρ + ωu*)`; `flip = None` is the untwisted law.
pub fn transform_one_form(
    t: &SpectralTripleData,
    flip: Option<&[usize]>,
    omega: &OneFormData,
    u: &UnitaryElt,
) -> Result<GaugeResult, GaugeError> {
    u.check_len(&t.rep)?;
    let us = u.star();
    let p_us = t.rep.op(&us);
    let p_rus = t.rep.op(&rho_of(&us, flip));
    let p_ru = t.rep.op(&rho_of(&u.elt, flip));
    let inner = t.dirac.twisted_commutator(&p_us, &p_rus)?.add(&omega.op.compose(&p_us)?)?;
    let op = p_ru.compose(&inner)?;
    let blocks = decompose(&op).ok();
    let shift = match (&omega.blocks, &blocks) {
        (Some(b0), Some(b1)) => Some(block_difference(b0, b1)?),
        _ => None,
    };
    Ok(GaugeResult { omega: OneFormData { op, blocks, pairs: Vec::new() }, shift })
}

fn block_difference(before: &ChiralBlocks, after: &ChiralBlocks) -> Result<ChiralBlocks, GaugeError> {
    if before.0.len() != after.0.len() {
        return Err(GaugeError::ShapeMismatch);
    }
    Ok(ChiralBlocks(
        before
            .0
            .iter()
            .zip(&after.0)
            .map(|(b, a)| ChiralBlock::from_fn(|m| &a.plus[m] - &b.plus[m], |m| &a.minus[m] - &b.minus[m]))
            .collect(),
    ))
}

/// `Ad v = π(v) J π(v) J⁻¹`.
pub fn ad(t: &SpectralTripleData, v: &AlgebraElt) -> Result<MatDiffOp, GaugeError> {
    let p = t.rep.op(v);
    Ok(p.compose(&sandwich_antilinear(&t.real, &p)?)?)
}

/// `Ad ρ(u) · D_ω · Ad u*`.
pub fn transform_covariant_dirac(
    t: &SpectralTripleData,
    flip: Option<&[usize]>,
    d_omega: &MatDiffOp,
    u: &UnitaryElt,
) -> Result<MatDiffOp, GaugeError> {
    u.check_len(&t.rep)?;
    let left = ad(t, &rho_of(&u.elt, flip))?;
    let right = ad(t, &u.star())?;
    Ok(left.compose(d_omega)?.compose(&right)?)
}

/// Expected phases of the first block: `z ↦ z − i∂ϑ`, `z′ ↦ z′ − i∂ϑ′`.
#[derive(Clone, Debug)]
pub struct GaugeAngles {
    pub theta: SymExpr,
    pub theta_prime: SymExpr,
}

/// Compares the first chiral block before and after a transformation:
/// real parts must be invariant and imaginary parts shift by `−∂ϑ`.
pub fn field_shift_report(
    label: &str,
    before: &ChiralBlocks,
    after: &ChiralBlocks,
    angles: &GaugeAngles,
) -> Result<Report, GaugeError> {
    let diff = block_difference(before, after)?;
    let first = diff.0.first().ok_or(GaugeError::ShapeMismatch)?;
    let mut r = Report::new(format!("gauge/{label}"));
    for (side, shifts, angle) in [("z", &first.plus, &angles.theta), ("z'", &first.minus, &angles.theta_prime)] {
        for (mu, s) in shifts.iter().enumerate() {
            let re = s.re();
            r.push(Check::from_bool(
                format!("{label}: Re {side}_{mu} invariant"),
                re.is_zero(),
                format!("Δ Re {side}_{mu} = {re}"),
            ));
            let want = -angle.derive(mu)?;
            let im = s.im();
            r.push(Check::from_bool(
                format!("{label}: Im {side}_{mu} shifts by −∂ϑ"),
                im == want,
                format!("Δ Im {side}_{mu} = {im}"),
            ));
        }
    }
    Ok(r)
}

/// JSON listing each field's symbolic shift.
pub fn shift_json(shift: &ChiralBlocks) -> Value {
    json!({ "shift": shift.to_json() })
}
