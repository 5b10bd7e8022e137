//! Twisted one-forms `Σ π(x)[D, π(y)]_ρ`, twisted fluctuations
//! `ω + ε′JωJ⁻¹` and their field content.
//!
//! Every one-form of the built-in models is block diagonal in the finite
//! index with blocks `−iγ^μ diag(p_μ I₂, m_μ I₂)`; [`decompose`] recovers
//! the `(p_μ, m_μ)` pairs and refuses anything that does not reassemble
//! exactly. For the manifold the single block is `(h_μ, h′_μ)`; for the
//! two-point and electrodynamics models the first block of the fluctuation
//! is `(z_μ, z′_μ)`.

use crate::coeff::Cq;
use crate::gammarep::euclidean_gammas;
use crate::operator::{sandwich_antilinear, MatDiffOp, OpError, SymMatrix};
use crate::symfield::{SymError, SymExpr, Symbol};
use crate::triple::{check_real_signs, AlgebraElt, SpectralTripleData, TripleError};
use crate::twist::TwistedTripleData;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FluctError {
    #[error("operator is not of the form -iγ^μ W_μ with chiral-diagonal W_μ")]
    Unstructured,
    #[error("constraint `{0} = 0` is not linear in a solvable unknown")]
    Unsolvable(String),
    #[error(transparent)]
    Op(#[from] OpError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Triple(#[from] TripleError),
}

/// Coefficients of `−iγ^μ diag(plus_μ I₂, minus_μ I₂)` on one finite index.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiralBlock {
    pub plus: [SymExpr; 4],
    pub minus: [SymExpr; 4],
}

impl ChiralBlock {
    pub fn zero() -> Self {
        ChiralBlock { plus: Default::default(), minus: Default::default() }
    }

    /// Block with fields named `{plus}{μ}` and `{minus}{μ}`.
    pub fn named(plus: &str, minus: &str, real: bool) -> Self {
        let mk = |p: &str, mu: usize| {
            let n = format!("{p}{mu}");
            if real {
                SymExpr::real(&n)
            } else {
                SymExpr::sym(&n)
            }
        };
        ChiralBlock { plus: std::array::from_fn(|mu| mk(plus, mu)), minus: std::array::from_fn(|mu| mk(minus, mu)) }
    }

    pub fn from_fn(plus: impl Fn(usize) -> SymExpr, minus: impl Fn(usize) -> SymExpr) -> Self {
        ChiralBlock { plus: std::array::from_fn(plus), minus: std::array::from_fn(minus) }
    }

    pub fn map(&self, f: impl Fn(&SymExpr) -> SymExpr) -> Self {
        ChiralBlock { plus: std::array::from_fn(|m| f(&self.plus[m])), minus: std::array::from_fn(|m| f(&self.minus[m])) }
    }

    pub fn try_map<E>(&self, f: impl Fn(&SymExpr) -> Result<SymExpr, E>) -> Result<Self, E> {
        let mut out = ChiralBlock::zero();
        for m in 0..4 {
            out.plus[m] = f(&self.plus[m])?;
            out.minus[m] = f(&self.minus[m])?;
        }
        Ok(out)
    }

    /// The 4×4 matrix `W_μ = diag(plus_μ I₂, minus_μ I₂)`.
    pub fn w(&self, mu: usize) -> SymMatrix {
        let (p, m) = (&self.plus[mu], &self.minus[mu]);
        SymMatrix::diag(vec![p.clone(), p.clone(), m.clone(), m.clone()])
    }

    /// `−iγ^μ W_μ`.
    pub fn matrix(&self) -> SymMatrix {
        let g = euclidean_gammas();
        (0..4).fold(SymMatrix::zero(4), |acc, mu| acc.add(&g.gamma[mu].mul(&self.w(mu)).scale(-Cq::i())))
    }

    fn entries(&self) -> impl Iterator<Item = &SymExpr> {
        self.plus.iter().chain(self.minus.iter())
    }
}

/// Per-finite-index chiral blocks of an order-zero operator.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiralBlocks(pub Vec<ChiralBlock>);

impl ChiralBlocks {
    pub fn assemble(&self) -> SymMatrix {
        SymMatrix::block_diag(&self.0.iter().map(ChiralBlock::matrix).collect::<Vec<_>>())
    }

    pub fn op(&self) -> MatDiffOp {
        MatDiffOp::mult(self.assemble())
    }

    pub fn to_json(&self) -> Value {
        let side = |v: &[SymExpr; 4]| v.iter().map(|e| e.canonical()).collect::<Vec<_>>();
        Value::Array(self.0.iter().map(|b| json!({ "plus": side(&b.plus), "minus": side(&b.minus) })).collect())
    }
}

/// Recovers the chiral blocks of an order-zero operator, checking exact
/// reassembly.
pub fn decompose(op: &MatDiffOp) -> Result<ChiralBlocks, FluctError> {
    let m = op.as_matrix().map_err(|_| FluctError::Unstructured)?;
    if m.dim() % 4 != 0 {
        return Err(FluctError::Unstructured);
    }
    let g = euclidean_gammas();
    let half_i = SymExpr::constant(Cq::i() * Cq::frac(1, 2));
    let mut blocks = Vec::new();
    for k in 0..m.dim() / 4 {
        let b = m.block(k, k, 4);
        let upper = b.block(0, 1, 2);
        let lower = b.block(1, 0, 2);
        blocks.push(ChiralBlock::from_fn(
            |mu| &half_i * &g.sigma[mu].mul(&lower).trace(),
            |mu| &half_i * &g.sigma_tilde[mu].mul(&upper).trace(),
        ));
    }
    let blocks = ChiralBlocks(blocks);
    if blocks.assemble() != m {
        return Err(FluctError::Unstructured);
    }
    Ok(blocks)
}

/// A twisted one-form with its provenance and (when recognised) fields.
#[derive(Clone, Debug)]
pub struct OneFormData {
    pub op: MatDiffOp,
    pub blocks: Option<ChiralBlocks>,
    /// Pairs `(x, y)` contributing `π(x)[D, π(y)]_ρ`.
    pub pairs: Vec<(AlgebraElt, AlgebraElt)>,
}

impl OneFormData {
    /// A one-form given directly by its blocks.
    pub fn from_blocks(blocks: ChiralBlocks) -> Self {
        OneFormData { op: blocks.op(), blocks: Some(blocks), pairs: Vec::new() }
    }
}

/// `ω_ρ = Σ_i π(x_i)[D, π(y_i)]_ρ`.
pub fn build_one_form(t: &TwistedTripleData, pairs: &[(AlgebraElt, AlgebraElt)]) -> Result<OneFormData, FluctError> {
    let mut op = MatDiffOp::zero(t.triple.dim());
    for (x, y) in pairs {
        let tc = t.twisted_commutator(y)?;
        op = op.add(&t.triple.rep.op(x).compose(&tc)?)?;
    }
    let blocks = decompose(&op).ok();
    Ok(OneFormData { op, blocks, pairs: pairs.to_vec() })
}

/// Ordinary one-form `Σ_i π(x_i)[D, π(y_i)]` of an untwisted triple.
pub fn build_untwisted_one_form(t: &SpectralTripleData, pairs: &[(AlgebraElt, AlgebraElt)]) -> Result<OneFormData, FluctError> {
    let mut op = MatDiffOp::zero(t.dim());
    for (x, y) in pairs {
        let py = t.rep.op(y);
        let c = t.dirac.twisted_commutator(&py, &py)?;
        op = op.add(&t.rep.op(x).compose(&c)?)?;
    }
    let blocks = decompose(&op).ok();
    Ok(OneFormData { op, blocks, pairs: pairs.to_vec() })
}

/// `ω + ε′JωJ⁻¹`, the fluctuated operator and its fields.
#[derive(Clone, Debug)]
pub struct FluctuationFields {
    pub fluct: MatDiffOp,
    pub d_omega: MatDiffOp,
    pub blocks: Option<ChiralBlocks>,
}

impl FluctuationFields {
    fn first(&self) -> Result<&ChiralBlock, FluctError> {
        self.blocks.as_ref().and_then(|b| b.0.first()).ok_or(FluctError::Unstructured)
    }

    /// `(z_μ, z′_μ)`: the first block's coefficients.
    pub fn z(&self) -> Result<(&[SymExpr; 4], &[SymExpr; 4]), FluctError> {
        let b = self.first()?;
        Ok((&b.plus, &b.minus))
    }

    /// `X_μ = π_M(Re z_μ, Re z′_μ)` as the block `(f_μ, f′_μ)`.
    pub fn x(&self) -> Result<ChiralBlock, FluctError> {
        Ok(self.first()?.map(SymExpr::re))
    }

    /// `Y_μ = π_M(Im z_μ, Im z′_μ)` as the block `(g_μ, g′_μ)`.
    pub fn y(&self) -> Result<ChiralBlock, FluctError> {
        Ok(self.first()?.map(SymExpr::im))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "blocks": self.blocks.as_ref().map(ChiralBlocks::to_json),
            "fluctuation": self.fluct.to_json(),
        })
    }
}

/// Twisted fluctuation of `t.triple.dirac` by `ω`.
pub fn fluctuate(t: &TwistedTripleData, omega: &OneFormData) -> Result<FluctuationFields, FluctError> {
    let eps_prime = check_real_signs(&t.triple)?.epsilon_prime;
    let jw = sandwich_antilinear(&t.triple.real, &omega.op)?;
    let fluct = omega.op.add(&jw.scale(Cq::from(i128::from(eps_prime))))?;
    let d_omega = t.triple.dirac.add(&fluct)?;
    let blocks = decompose(&fluct).ok();
    Ok(FluctuationFields { fluct, d_omega, blocks })
}

/// `lhs = rhs` with `lhs` a single unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub unknown: String,
    pub lhs: SymExpr,
    pub rhs: SymExpr,
}

impl std::fmt::Display for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Solves `e = 0` for the symbol `name`, which must occur linearly, either
/// plain or conjugated but not both.
fn solve_linear(e: &SymExpr, name: &str) -> Result<SymExpr, FluctError> {
    let unsolvable = || FluctError::Unsolvable(e.canonical());
    let at = |v: SymExpr| e.substitute(&[(name, v)]);
    let rest = at(SymExpr::zero())?;
    let c1 = (&at(SymExpr::one())? - &rest).as_constant().ok_or_else(unsolvable)?;
    let ci = (&at(SymExpr::i())? - &rest).as_constant().ok_or_else(unsolvable)?;
    let c2 = (&at(SymExpr::int(2))? - &rest).as_constant().ok_or_else(unsolvable)?;
    if c1.is_zero() || c2 != c1 + c1 {
        return Err(unsolvable());
    }
    let inv = c1.inv().expect("nonzero");
    if ci == c1 * Cq::i() {
        Ok((-rest).scale(inv))
    } else if ci == -(c1 * Cq::i()) {
        Ok((-rest).scale(inv).conj())
    } else {
        Err(unsolvable())
    }
}

/// Conditions for the operator assembled from `template` to be formally
/// self-adjoint, solved for the symbols whose names satisfy `is_unknown`.
///
/// Equations come from decomposing `A − A†`; when every symbol of an
/// equation is real-valued it is split into real and imaginary parts first.
pub fn selfadjoint_constraints(
    template: &ChiralBlocks,
    is_unknown: impl Fn(&str) -> bool,
) -> Result<Vec<Constraint>, FluctError> {
    let op = template.op();
    let diff = op.sub(&op.formal_adjoint()?)?;
    let blocks = decompose(&diff)?;
    let mut solved: BTreeMap<String, SymExpr> = BTreeMap::new();
    for b in &blocks.0 {
        for eq in b.entries() {
            if eq.is_zero() {
                continue;
            }
            let all_real = eq.symbols().iter().all(|s| s.real);
            let parts = if all_real { vec![eq.re(), eq.im()] } else { vec![eq.clone()] };
            for part in parts.into_iter().filter(|p| !p.is_zero()) {
                let target = part
                    .symbols()
                    .into_iter()
                    .find(|s| is_unknown(&s.name))
                    .ok_or_else(|| FluctError::Unsolvable(part.canonical()))?;
                let value = solve_linear(&part, &target.name)?;
                match solved.get(&*target.name) {
                    Some(v) if *v == value => {}
                    Some(_) => return Err(FluctError::Unsolvable(part.canonical())),
                    None => {
                        solved.insert(target.name.to_string(), value);
                    }
                }
            }
        }
    }
    Ok(solved
        .into_iter()
        .map(|(name, rhs)| {
            let sym = template_symbol(template, &name);
            Constraint { lhs: sym.expr(), rhs, unknown: name }
        })
        .collect())
}

fn template_symbol(t: &ChiralBlocks, name: &str) -> Symbol {
    t.0.iter()
        .flat_map(|b| b.entries().flat_map(|e| e.symbols()))
        .find(|s| &*s.name == name)
        .expect("unknown comes from the template")
}

/// Applies solved constraints by substitution.
pub fn impose(e: &SymExpr, cs: &[Constraint]) -> Result<SymExpr, FluctError> {
    let subs: Vec<(&str, SymExpr)> = cs.iter().map(|c| (c.unknown.as_str(), c.rhs.clone())).collect();
    Ok(e.substitute(&subs)?)
}

pub fn impose_blocks(b: &ChiralBlocks, cs: &[Constraint]) -> Result<ChiralBlocks, FluctError> {
    Ok(ChiralBlocks(b.0.iter().map(|blk| blk.try_map(|e| impose(e, cs))).collect::<Result<_, _>>()?))
}

/// Field template of a manifold one-form `−iγ^μ diag(h_μ, h′_μ)`.
pub fn manifold_one_form_template() -> ChiralBlocks {
    ChiralBlocks(vec![ChiralBlock::named("h", "h'", false)])
}

/// Field template of a manifold fluctuation `−iγ^μ diag(f_μ, f′_μ)`, real fields.
pub fn manifold_fluct_template() -> ChiralBlocks {
    ChiralBlocks(vec![ChiralBlock::named("f", "f'", true)])
}

/// `diag(Z, Z̄)` with `Z_μ = π_M(z_μ, z′_μ)`.
pub fn two_point_fluct_template() -> ChiralBlocks {
    let z = ChiralBlock::named("z", "z'", false);
    ChiralBlocks(vec![z.clone(), z.map(SymExpr::conj)])
}

/// `diag(Z, Z′, Z̄, Z̄′)` of the electrodynamics model.
pub fn ed_fluct_template() -> ChiralBlocks {
    let z = ChiralBlock::named("z", "z'", false);
    let zp = ChiralBlock { plus: z.minus.clone(), minus: z.plus.clone() };
    ChiralBlocks(vec![z.clone(), zp.clone(), z.map(SymExpr::conj), zp.map(SymExpr::conj)])
}

/// `z_μ = f_μ + i g_μ`, `z′_μ = f′_μ + i g′_μ` with real fields.
pub fn real_parts_of_z() -> Vec<(String, SymExpr)> {
    let mut out = Vec::new();
    for mu in 0..4 {
        for p in ["", "'"] {
            let re = SymExpr::real(&format!("f{p}{mu}"));
            let im = SymExpr::real(&format!("g{p}{mu}"));
            out.push((format!("z{p}{mu}"), &re + &(&SymExpr::i() * &im)));
        }
    }
    out
}

/// `[γ⁵ ⊗ D_F, π(a)]_ρ` for the generic element of the twisted model.
pub fn finite_part_fluctuation(ed: &TwistedTripleData, d_f: &SymMatrix) -> Result<MatDiffOp, FluctError> {
    let finite = MatDiffOp::mult(SymMatrix::kron(d_f, &euclidean_gammas().gamma5));
    let (p, rp) = ed.pi_pair(&ed.slot_element());
    Ok(finite.twisted_commutator(&p, &rp)?)
}
