//! Super-commutative field polynomials: odd (Grassmann) and even generators
//! with `SymExpr` coefficients, bilinear forms `⟨Jφ, Dψ⟩` and fermionic
//! action densities.
//!
//! Vector mode and Grassmann mode share every routine; the only difference
//! is the parity flag of the spinor generators. Barred generators are
//! independent of unbarred ones and are only produced by conjugation.

use crate::coeff::Cq;
use crate::gammarep::pauli;
use crate::operator::{AntilinearOp, MatDiffOp, SymMatrix};
use crate::report::{Check, Report};
use crate::symfield::{Deriv, SymError, SymExpr};
use crate::twist::TwistedTripleData;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GrassmannError {
    #[error("spinor is not in the +1 eigenspace of R")]
    NotInHR,
    #[error("dimension mismatch: operator {0}, spinor {1}")]
    Dimension(usize, usize),
    #[error("derivative order exceeds two on {0}")]
    OrderOverflow(String),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// A generator `∂^α η` (or its bar).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Gen {
    pub name: Arc<str>,
    pub bar: bool,
    pub deriv: Deriv,
    pub odd: bool,
}

impl Gen {
    pub fn new(name: &str, odd: bool) -> Gen {
        Gen { name: Arc::from(name), bar: false, deriv: Deriv::NONE, odd }
    }

    pub fn d(&self, mu: usize) -> Result<Gen, GrassmannError> {
        let deriv = self.deriv.push(mu).ok_or_else(|| GrassmannError::OrderOverflow(self.to_string()))?;
        Ok(Gen { deriv, ..self.clone() })
    }

    fn same_base(&self, o: &Gen) -> bool {
        self.name == o.name && self.bar == o.bar
    }

    fn base(&self) -> (&str, bool) {
        (&self.name, self.bar)
    }

    fn underived(&self) -> Gen {
        Gen { deriv: Deriv::NONE, ..self.clone() }
    }

    fn without_first(&self) -> (usize, Gen) {
        let ix = self.deriv.indices();
        let rest: Vec<usize> = ix[1..].iter().map(|&m| m as usize).collect();
        (ix[0] as usize, Gen { deriv: Deriv::from_slice(&rest).expect("shorter"), ..self.clone() })
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let core = if self.bar { format!("bar({})", self.name) } else { self.name.to_string() };
        if self.deriv.order() == 0 {
            write!(f, "{core}")
        } else {
            write!(f, "{}[{core}]", self.deriv.label())
        }
    }
}

/// Ordered product of generators with powers; odd powers are at most one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct GMono(Vec<(Gen, u32)>);

impl GMono {
    pub fn factors(&self) -> &[(Gen, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, p)| p).sum()
    }

    /// Normal form of a sequence of generators, with the sign of the
    /// reordering; `None` when an odd generator repeats.
    fn normalize(seq: Vec<Gen>) -> Option<(GMono, i8)> {
        let mut v = seq;
        let mut sign = 1i8;
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                if v[j - 1].odd && v[j].odd {
                    sign = -sign;
                }
                v.swap(j - 1, j);
                j -= 1;
            }
        }
        let mut out: Vec<(Gen, u32)> = Vec::new();
        for g in v {
            match out.last_mut() {
                Some((last, p)) if *last == g => {
                    if g.odd {
                        return None;
                    }
                    *p += 1;
                }
                _ => out.push((g, 1)),
            }
        }
        Some((GMono(out), sign))
    }

    fn expand(&self) -> Vec<Gen> {
        self.0.iter().flat_map(|(g, p)| std::iter::repeat_n(g.clone(), *p as usize)).collect()
    }
}

/// `Σ coefficient · monomial`, kept in normal form.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GrassmannExpr {
    terms: BTreeMap<GMono, SymExpr>,
}

impl GrassmannExpr {
    pub fn zero() -> Self {
        GrassmannExpr::default()
    }

    pub fn scalar(c: SymExpr) -> Self {
        GrassmannExpr::from_terms([(GMono::default(), c)])
    }

    pub fn one() -> Self {
        GrassmannExpr::scalar(SymExpr::one())
    }

    pub fn atom(g: Gen) -> Self {
        GrassmannExpr::from_terms([(GMono(vec![(g, 1)]), SymExpr::one())])
    }

    pub fn gen(name: &str, odd: bool) -> Self {
        GrassmannExpr::atom(Gen::new(name, odd))
    }

    pub fn from_terms<I: IntoIterator<Item = (GMono, SymExpr)>>(it: I) -> Self {
        let mut terms: BTreeMap<GMono, SymExpr> = BTreeMap::new();
        for (m, c) in it {
            let slot = terms.entry(m).or_default();
            *slot = &*slot + &c;
        }
        terms.retain(|_, c| !c.is_zero());
        GrassmannExpr { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GMono, &SymExpr)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, o: &Self) -> Self {
        GrassmannExpr::from_terms(self.terms.clone().into_iter().chain(o.terms.clone()))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&SymExpr::int(-1)))
    }

    pub fn scale(&self, c: &SymExpr) -> Self {
        GrassmannExpr::from_terms(self.terms.iter().map(|(m, k)| (m.clone(), k * c)))
    }

    pub fn scale_c(&self, c: Cq) -> Self {
        self.scale(&SymExpr::constant(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Vec::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut seq = m1.expand();
                seq.extend(m2.expand());
                if let Some((m, s)) = GMono::normalize(seq) {
                    out.push((m, (c1 * c2).scale(Cq::from(i128::from(s)))));
                }
            }
        }
        GrassmannExpr::from_terms(out)
    }

    fn from_seq(seq: Vec<Gen>, c: SymExpr) -> Self {
        match GMono::normalize(seq) {
            Some((m, s)) => GrassmannExpr::from_terms([(m, c.scale(Cq::from(i128::from(s))))]),
            None => GrassmannExpr::zero(),
        }
    }

    /// Complex conjugation: coefficients conjugated, bars toggled, order of
    /// generators reversed.
    pub fn conj(&self) -> Self {
        let mut out = GrassmannExpr::zero();
        for (m, c) in &self.terms {
            let seq: Vec<Gen> = m.expand().into_iter().rev().map(|g| Gen { bar: !g.bar, ..g }).collect();
            out = out.add(&GrassmannExpr::from_seq(seq, c.conj()));
        }
        out
    }

    /// Total derivative `∂_μ`.
    pub fn derive(&self, mu: usize) -> Result<Self, GrassmannError> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let dc = c.derive(mu)?;
            if !dc.is_zero() {
                out.push((m.clone(), dc));
            }
            let seq = m.expand();
            for k in 0..seq.len() {
                let mut s = seq.clone();
                s[k] = s[k].d(mu)?;
                if let Some((mm, sign)) = GMono::normalize(s) {
                    out.push((mm, c.scale(Cq::from(i128::from(sign)))));
                }
            }
        }
        Ok(GrassmannExpr::from_terms(out))
    }

    pub fn derive_multi(&self, d: Deriv) -> Result<Self, GrassmannError> {
        let mut e = self.clone();
        for &m in d.indices() {
            e = e.derive(m as usize)?;
        }
        Ok(e)
    }

    pub fn map_coeffs(&self, f: impl Fn(&SymExpr) -> Result<SymExpr, SymError>) -> Result<Self, GrassmannError> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            out.push((m.clone(), f(c)?));
        }
        Ok(GrassmannExpr::from_terms(out))
    }

    pub fn substitute_coeffs(&self, subs: &[(&str, SymExpr)]) -> Result<Self, GrassmannError> {
        self.map_coeffs(|c| c.substitute(subs))
    }

    /// Replaces generators by name; derivative and barred atoms become the
    /// derivatives and conjugates of the replacement.
    pub fn substitute_gens(&self, subs: &[(&str, GrassmannExpr)]) -> Result<Self, GrassmannError> {
        let map: BTreeMap<&str, &GrassmannExpr> = subs.iter().map(|(n, e)| (*n, e)).collect();
        let mut out = GrassmannExpr::zero();
        for (m, c) in &self.terms {
            let mut prod = GrassmannExpr::scalar(c.clone());
            for g in m.expand() {
                let factor = match map.get(&*g.name) {
                    None => GrassmannExpr::atom(g),
                    Some(rep) => {
                        let v = rep.derive_multi(g.deriv)?;
                        if g.bar {
                            v.conj()
                        } else {
                            v
                        }
                    }
                };
                prod = prod.mul(&factor);
            }
            out = out.add(&prod);
        }
        Ok(out)
    }

    /// Replaces one exact atom (including its derivative multi-index).
    pub fn replace_atom(&self, atom: &Gen, with: &GrassmannExpr) -> Self {
        let mut out = GrassmannExpr::zero();
        for (m, c) in &self.terms {
            let mut prod = GrassmannExpr::scalar(c.clone());
            for g in m.expand() {
                prod = prod.mul(&if g == *atom { with.clone() } else { GrassmannExpr::atom(g) });
            }
            out = out.add(&prod);
        }
        out
    }

    /// Left derivative `∂/∂g`.
    pub fn left_derivative(&self, g: &Gen) -> Self {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let seq = m.expand();
            if let Some(pos) = seq.iter().position(|x| x == g) {
                let count = seq.iter().filter(|x| *x == g).count() as i128;
                let before_odd = seq[..pos].iter().filter(|x| x.odd).count();
                let sign = if g.odd && before_odd % 2 == 1 { -1 } else { 1 };
                let mut rest = seq.clone();
                rest.remove(pos);
                let (mm, s) = GMono::normalize(rest).expect("subsequence of a normal form");
                out.push((mm, c.scale(Cq::from(count * sign * i128::from(s)))));
            }
        }
        GrassmannExpr::from_terms(out)
    }

    /// Every generator atom occurring.
    pub fn atoms(&self) -> Vec<Gen> {
        let mut v: Vec<Gen> = self.terms.keys().flat_map(|m| m.0.iter().map(|(g, _)| g.clone())).collect();
        v.sort();
        v.dedup();
        v
    }

    /// True if some generator carries a derivative in direction `mu`, or some
    /// coefficient mentions `∂_μ` of a field.
    pub fn has_derivative(&self, mu: usize) -> bool {
        let d = mu as u8;
        self.atoms().iter().any(|g| g.deriv.indices().contains(&d))
            || self.terms.values().any(|c| c.atoms().iter().any(|a| a.deriv.indices().contains(&d)))
    }

    /// Number of terms whose coefficient mentions `name`.
    pub fn terms_mentioning(&self, name: &str) -> usize {
        self.terms.values().filter(|c| c.mentions(name)).count()
    }

    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GrassmannExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, "\n+ ")?;
            }
            write!(f, "({c})")?;
            for (g, p) in &m.0 {
                if *p == 1 {
                    write!(f, " {g}")?;
                } else {
                    write!(f, " {g}^{p}")?;
                }
            }
        }
        Ok(())
    }
}

/// Canonical representative modulo total derivatives.
///
/// In every quadratic monomial the derivatives are moved onto the generator
/// with the larger base; `c·A·∂_μA` with `A` even becomes `−½(∂_μc)A²`.
/// Monomials of other degrees are left untouched.
pub fn ibp_canonical(e: &GrassmannExpr) -> Result<GrassmannExpr, GrassmannError> {
    let mut done = GrassmannExpr::zero();
    let mut work: Vec<(GMono, SymExpr)> = e.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
    while let Some((m, c)) = work.pop() {
        let seq = m.expand();
        let next = match seq.as_slice() {
            [a, b] if !a.same_base(b) => {
                let (lo, hi, swapped) = if a.base() < b.base() { (a, b, false) } else { (b, a, true) };
                if lo.deriv.order() == 0 {
                    None
                } else {
                    // c·(∂_μA)·B ≡ −A·∂_μ(B c)
                    let (mu, lo_rest) = lo.without_first();
                    let sign = if swapped && a.odd && b.odd { -1 } else { 1 };
                    let c = c.scale(Cq::from(-sign));
                    let first = GrassmannExpr::from_seq(vec![lo_rest.clone(), hi.d(mu)?], c.clone());
                    let second = GrassmannExpr::from_seq(vec![lo_rest, hi.clone()], c.derive(mu)?);
                    Some(first.add(&second))
                }
            }
            [a, b] if !a.odd && a.same_base(b) && a.deriv.order() == 0 && b.deriv.order() == 1 => {
                let mu = b.deriv.indices()[0] as usize;
                let sq = GrassmannExpr::from_seq(vec![a.clone(), a.clone()], c.derive(mu)?);
                Some(sq.scale_c(Cq::frac(-1, 2)))
            }
            _ => None,
        };
        match next {
            None => done = done.add(&GrassmannExpr::from_terms([(m, c)])),
            Some(n) => work.extend(n.terms),
        }
    }
    Ok(done)
}

/// Euler–Lagrange derivative `Σ_α (−∂)^α ∂L/∂(∂^α η)` for every base `η`.
pub fn euler_operator(l: &GrassmannExpr) -> Result<BTreeMap<Gen, GrassmannExpr>, GrassmannError> {
    let mut out: BTreeMap<Gen, GrassmannExpr> = BTreeMap::new();
    for g in l.atoms() {
        let mut piece = l.left_derivative(&g).derive_multi(g.deriv)?;
        if g.deriv.order() % 2 == 1 {
            piece = piece.scale_c(-Cq::one());
        }
        let slot = out.entry(g.underived()).or_default();
        *slot = slot.add(&piece);
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// True when `a − b` is a total derivative, by the Euler operator.
pub fn equal_mod_total_derivatives(a: &GrassmannExpr, b: &GrassmannExpr) -> Result<bool, GrassmannError> {
    Ok(euler_operator(&a.sub(b))?.is_empty())
}

/// A column of field polynomials.
pub type Spinor = Vec<GrassmannExpr>;

/// Components `{name}_{k}`, `k = 1..=dim`.
pub fn generic_spinor(name: &str, dim: usize, odd: bool) -> Spinor {
    (1..=dim).map(|k| GrassmannExpr::gen(&format!("{name}_{k}"), odd)).collect()
}

/// Weyl spinor `(φ_1, φ_2)`.
pub fn weyl(name: &str, odd: bool) -> Spinor {
    generic_spinor(name, 2, odd)
}

/// `⊕_k (φ_k; φ_k)`, the general element of the `+1` eigenspace of
/// `I ⊗ γ⁰`, one Weyl spinor per finite index.
pub fn hr_spinor(blocks: &[&str], odd: bool) -> Spinor {
    blocks
        .iter()
        .flat_map(|b| {
            let w = weyl(b, odd);
            [w[0].clone(), w[1].clone(), w[0].clone(), w[1].clone()]
        })
        .collect()
}

pub fn apply_matrix(m: &SymMatrix, psi: &[GrassmannExpr]) -> Result<Spinor, GrassmannError> {
    if m.dim() != psi.len() {
        return Err(GrassmannError::Dimension(m.dim(), psi.len()));
    }
    Ok((0..m.dim()).map(|i| (0..m.dim()).fold(GrassmannExpr::zero(), |acc, j| acc.add(&psi[j].scale(m.get(i, j))))).collect())
}

pub fn apply_op(d: &MatDiffOp, psi: &[GrassmannExpr]) -> Result<Spinor, GrassmannError> {
    if d.dim() != psi.len() {
        return Err(GrassmannError::Dimension(d.dim(), psi.len()));
    }
    let mut out = vec![GrassmannExpr::zero(); psi.len()];
    for (deriv, m) in d.coeffs() {
        let dpsi: Spinor = psi.iter().map(|p| p.derive_multi(*deriv)).collect::<Result<_, _>>()?;
        for (o, v) in out.iter_mut().zip(apply_matrix(m, &dpsi)?) {
            *o = o.add(&v);
        }
    }
    Ok(out)
}

pub fn apply_anti(j: &AntilinearOp, psi: &[GrassmannExpr]) -> Result<Spinor, GrassmannError> {
    let c: Spinor = psi.iter().map(GrassmannExpr::conj).collect();
    apply_matrix(j.matrix(), &c)
}

/// `Σ_k conj(a_k) b_k`.
pub fn inner(a: &[GrassmannExpr], b: &[GrassmannExpr]) -> GrassmannExpr {
    a.iter().zip(b).fold(GrassmannExpr::zero(), |acc, (x, y)| acc.add(&x.conj().mul(y)))
}

/// `Σ_ab row_a m_ab col_b`.
pub fn row_mat_col(row: &[GrassmannExpr], m: &SymMatrix, col: &[GrassmannExpr]) -> Result<GrassmannExpr, GrassmannError> {
    let mc = apply_matrix(m, col)?;
    Ok(row.iter().zip(&mc).fold(GrassmannExpr::zero(), |acc, (r, c)| acc.add(&r.mul(c))))
}

fn in_hr(r: &SymMatrix, psi: &[GrassmannExpr]) -> Result<bool, GrassmannError> {
    Ok(apply_matrix(r, psi)? == psi)
}

/// Integrand of `⟨Jφ, Dψ⟩`, or of `⟨Jφ, RDψ⟩` when `twisted_r` is given.
pub fn bilinear_density(
    d: &MatDiffOp,
    j: &AntilinearOp,
    phi: &[GrassmannExpr],
    psi: &[GrassmannExpr],
    twisted_r: Option<&SymMatrix>,
) -> Result<GrassmannExpr, GrassmannError> {
    let mut dpsi = apply_op(d, psi)?;
    if let Some(r) = twisted_r {
        if !in_hr(r, phi)? || !in_hr(r, psi)? {
            return Err(GrassmannError::NotInHR);
        }
        dpsi = apply_matrix(r, &dpsi)?;
    }
    Ok(inner(&apply_anti(j, phi)?, &dpsi))
}

/// Outcome of [`symmetry_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryVerdict {
    pub sign: i8,
    pub vector_law: bool,
    pub grassmann_law: bool,
    pub vector_self_pairing_vanishes: bool,
    pub grassmann_self_pairing_vanishes: bool,
}

impl SymmetryVerdict {
    pub fn report(&self, label: &str) -> Report {
        let mut r = Report::new(format!("symmetry/{label}"));
        let s = self.sign;
        r.push(Check::from_bool(format!("{label}: ⟨Jφ, Dψ⟩ = εε′⟨Jψ, Dφ⟩"), self.vector_law, format!("εε′ = {s}")));
        r.push(Check::from_bool(
            format!("{label}: Grassmann form has the opposite symmetry"),
            self.grassmann_law,
            format!("sign {}", -s),
        ));
        if s == -1 {
            r.push(Check::from_bool(
                format!("{label}: vector self-pairing vanishes"),
                self.vector_self_pairing_vanishes,
                "𝔄(ψ, ψ) ≡ 0",
            ));
            r.push(Check::from_bool(
                format!("{label}: Grassmann self-pairing survives"),
                !self.grassmann_self_pairing_vanishes,
                "𝔄(ψ̃, ψ̃) ≢ 0",
            ));
        }
        r
    }
}

/// Checks `⟨Jφ, Dψ⟩ = εε′⟨Jψ, Dφ⟩` modulo total derivatives for generic
/// spinors, in both modes.
pub fn symmetry_check(d: &MatDiffOp, j: &AntilinearOp, eps: i8, eps_prime: i8) -> Result<SymmetryVerdict, GrassmannError> {
    let n = d.dim();
    let sign = eps * eps_prime;
    let law = |odd: bool, s: i8| -> Result<bool, GrassmannError> {
        let (phi, psi) = (generic_spinor("phi", n, odd), generic_spinor("psi", n, odd));
        let a = bilinear_density(d, j, &phi, &psi, None)?;
        let b = bilinear_density(d, j, &psi, &phi, None)?;
        Ok(ibp_canonical(&a.sub(&b.scale_c(Cq::from(i128::from(s)))))?.is_zero())
    };
    let self_zero = |odd: bool| -> Result<bool, GrassmannError> {
        let psi = generic_spinor("psi", n, odd);
        Ok(ibp_canonical(&bilinear_density(d, j, &psi, &psi, None)?)?.is_zero())
    };
    Ok(SymmetryVerdict {
        sign,
        vector_law: law(false, sign)?,
        grassmann_law: law(true, -sign)?,
        vector_self_pairing_vanishes: self_zero(false)?,
        grassmann_self_pairing_vanishes: self_zero(true)?,
    })
}

/// `S^f_ρ = 𝔄^ρ(ψ̃, ψ̃)` in canonical form.
pub fn fermionic_action_density(
    t: &TwistedTripleData,
    d: &MatDiffOp,
    psi: &[GrassmannExpr],
) -> Result<GrassmannExpr, GrassmannError> {
    ibp_canonical(&bilinear_density(d, &t.triple.real, psi, psi, Some(&t.r))?)
}

/// `row · σ₂ · col`.
pub fn sigma2_pair(row: &[GrassmannExpr], col: &[GrassmannExpr]) -> Result<GrassmannExpr, GrassmannError> {
    row_mat_col(row, &pauli(2), col)
}

/// `row · σ₂(i c I₂ − s Σ_j σ_j 𝔇_j) col` with `𝔇_j = ∂_j − i g_j`, or
/// plain `∂_j` when `gauge` is `None`.
pub fn weyl_kinetic(
    row: &[GrassmannExpr],
    col: &[GrassmannExpr],
    c: &SymExpr,
    gauge: Option<&str>,
    spatial_sign: i8,
) -> Result<GrassmannExpr, GrassmannError> {
    let mut k = GrassmannExpr::zero();
    let ic = &SymExpr::i() * c;
    k = k.add(&sigma2_pair(row, &col.iter().map(|x| x.scale(&ic)).collect::<Vec<_>>())?);
    for jx in 1..4 {
        let mut dcol: Spinor = col.iter().map(|x| x.derive(jx)).collect::<Result<_, _>>()?;
        if let Some(g) = gauge {
            let ig = &SymExpr::i() * &SymExpr::real(&format!("{g}{jx}"));
            dcol = dcol.iter().zip(col).map(|(dx, x)| dx.sub(&x.scale(&ig))).collect();
        }
        let s2sj = pauli(2).mul(&pauli(jx));
        let term = row_mat_col(row, &s2sj, &dcol)?;
        k = k.sub(&term.scale_c(Cq::from(i128::from(spatial_sign))));
    }
    Ok(k)
}

/// A field identification and the lagrangian it should reproduce.
#[derive(Clone, Debug)]
pub struct Identification {
    pub label: String,
    /// Overall factor: density = factor · lagrangian.
    pub factor: Cq,
    /// Generators of the density replaced by physical spinors.
    pub gens: Vec<(String, GrassmannExpr)>,
    /// Parameter substitutions (e.g. `d := −im`, `g_0 := 0`).
    pub coeffs: Vec<(String, SymExpr)>,
    /// Atom rules applied to the target (e.g. `∂₀Ψ := i f₀ Ψ`).
    pub target_rules: Vec<(Gen, GrassmannExpr)>,
    pub target: GrassmannExpr,
}

/// Outcome of [`physical_identification`]; `residual` is zero on success.
#[derive(Clone, Debug)]
pub struct IdentificationReport {
    pub label: String,
    pub matched: bool,
    /// Set when equality needed integration by parts.
    pub up_to_total_derivative: bool,
    pub residual: GrassmannExpr,
    pub identified: GrassmannExpr,
}

impl IdentificationReport {
    pub fn check(&self) -> Check {
        let detail = match (self.matched, self.up_to_total_derivative) {
            (true, false) => "literal equality".to_string(),
            (true, true) => "equal up to a total derivative".to_string(),
            (false, _) => format!("residual {}", self.residual),
        };
        Check::from_bool(self.label.clone(), self.matched, detail)
    }
}

pub fn physical_identification(density: &GrassmannExpr, id: &Identification) -> Result<IdentificationReport, GrassmannError> {
    let inv = id.factor.inv().expect("nonzero factor");
    let gens: Vec<(&str, GrassmannExpr)> = id.gens.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
    let coeffs: Vec<(&str, SymExpr)> = id.coeffs.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
    let lag = density.scale_c(inv).substitute_gens(&gens)?.substitute_coeffs(&coeffs)?;
    let mut target = id.target.clone();
    for (g, e) in &id.target_rules {
        target = target.replace_atom(g, e);
    }
    let target = target.substitute_coeffs(&coeffs)?;
    let mut residual = lag.sub(&target);
    let mut up_to_total_derivative = false;
    if !residual.is_zero() {
        residual = ibp_canonical(&residual)?;
        up_to_total_derivative = residual.is_zero();
    }
    Ok(IdentificationReport {
        label: id.label.clone(),
        matched: residual.is_zero(),
        up_to_total_derivative,
        residual,
        identified: lag,
    })
}

/// `iΨ†σ̃^μ_M∂_μΨ` (left) or `iΨ†σ^μ_M∂_μΨ` (right), with
/// `𝔇_j = ∂_j − ig_j` on spatial directions when `gauge` is set.
pub fn weyl_lagrangian(
    psi_dag: &[GrassmannExpr],
    psi: &[GrassmannExpr],
    left: bool,
    gauge: Option<&str>,
) -> Result<GrassmannExpr, GrassmannError> {
    let id2 = SymMatrix::identity(2);
    let d0: Spinor = psi.iter().map(|x| x.derive(0)).collect::<Result<_, _>>()?;
    let mut l = row_mat_col(psi_dag, &id2, &d0)?;
    for jx in 1..4 {
        let mut dj: Spinor = psi.iter().map(|x| x.derive(jx)).collect::<Result<_, _>>()?;
        if let Some(g) = gauge {
            let ig = &SymExpr::i() * &SymExpr::real(&format!("{g}{jx}"));
            dj = dj.iter().zip(psi).map(|(d, x)| d.sub(&x.scale(&ig))).collect();
        }
        let term = row_mat_col(psi_dag, &pauli(jx), &dj)?;
        l = if left { l.sub(&term) } else { l.add(&term) };
    }
    Ok(l.scale_c(Cq::i()))
}

/// Dirac lagrangian in Weyl components, temporal gauge:
/// `iΨ_l†(∂₀ − σ_j𝔇_j)Ψ_l + iΨ_r†(∂₀ + σ_j𝔇_j)Ψ_r − m(Ψ_l†Ψ_r + Ψ_r†Ψ_l)`.
pub fn dirac_lagrangian(
    l_dag: &[GrassmannExpr],
    l: &[GrassmannExpr],
    r_dag: &[GrassmannExpr],
    r: &[GrassmannExpr],
    mass: &SymExpr,
    gauge: &str,
) -> Result<GrassmannExpr, GrassmannError> {
    let id2 = SymMatrix::identity(2);
    let kin = weyl_lagrangian(l_dag, l, true, Some(gauge))?.add(&weyl_lagrangian(r_dag, r, false, Some(gauge))?);
    let m = row_mat_col(l_dag, &id2, r)?.add(&row_mat_col(r_dag, &id2, l)?);
    Ok(kin.sub(&m.scale(mass)))
}

/// Solves `Ψ† = c φ̃ᵀσ₂` for `φ̃`: `φ̃_k = c⁻¹ Σ_a Ψ†_a (σ₂)_{ak}`.
pub fn dagger_replacement(psi_dag: &[GrassmannExpr], c: Cq) -> Spinor {
    let s2 = pauli(2);
    let inv = c.inv().expect("nonzero factor");
    (0..2).map(|k| (0..2).fold(GrassmannExpr::zero(), |acc, a| acc.add(&psi_dag[a].scale(s2.get(a, k)))).scale_c(inv)).collect()
}
