//! Curved-space identities for `ð_X²`, each proved by rewriting both sides
//! to normal form.

use super::ncpoly::{Base, Ix, NCPoly, NcError, NormalForm, TKind, Term};
use super::FlatData;
use crate::coeff::Cq;
use crate::gammarep::euclidean_gammas;
use crate::operator::SymMatrix;
use crate::report::{Check, Report};
use crate::symfield::{Deriv, SymError};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Identities understood by [`prove_curved`].
pub const CURVED_IDENTITIES: [&str; 8] = [
    "squared-operator",
    "alpha-beta",
    "slashed-gamma-derivative",
    "gamma-pair-derivative",
    "metric-derivative",
    "gilkey-connection",
    "chi-relations",
    "endomorphism",
];

fn up(n: &str) -> Ix {
    Ix::up(n)
}

fn lo(n: &str) -> Ix {
    Ix::lo(n)
}

fn fresh() -> String {
    Ix::fresh().to_string()
}

fn c(n: i128) -> Cq {
    Cq::from(n)
}

/// One `lhs = rhs` statement with both sides normalized.
#[derive(Clone, Debug)]
pub struct Equation {
    pub label: String,
    pub lhs: NormalForm,
    pub rhs: NormalForm,
}

impl Equation {
    pub fn residual(&self) -> NormalForm {
        self.lhs.sub(&self.rhs)
    }

    pub fn holds(&self) -> bool {
        self.residual().is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct Derivation {
    pub id: &'static str,
    pub statement: &'static str,
    pub equations: Vec<Equation>,
    /// Rule firings, present when tracing was requested.
    pub trace: Vec<String>,
}

impl Derivation {
    pub fn holds(&self) -> bool {
        self.equations.iter().all(Equation::holds)
    }

    pub fn check(&self) -> Check {
        let bad: Vec<String> =
            self.equations.iter().filter(|e| !e.holds()).map(|e| format!("{}: residual {}", e.label, e.residual())).collect();
        let anchor = format!("curved {}: {}", self.id, self.statement);
        if bad.is_empty() {
            Check::pass(anchor, format!("{} normal-form equalities", self.equations.len()))
        } else {
            Check::fail(anchor, "irreducible residual", bad.join("; "))
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.id, self.statement)?;
        for e in &self.equations {
            writeln!(f, "  [{}] {}", if e.holds() { "ok" } else { "FAIL" }, e.label)?;
            writeln!(f, "    lhs = {}", e.lhs)?;
            writeln!(f, "    rhs = {}", e.rhs)?;
        }
        Ok(())
    }
}

struct Prover<'a> {
    trace: Option<&'a mut Vec<String>>,
    out: Vec<Equation>,
}

impl Prover<'_> {
    fn nf(&mut self, p: &NCPoly) -> Result<NormalForm, NcError> {
        match self.trace.as_deref_mut() {
            Some(t) => p.normalize_traced(t),
            None => p.normalize(),
        }
    }

    fn equate(&mut self, label: &str, lhs: &NCPoly, rhs: &NCPoly) -> Result<(), NcError> {
        if let Some(t) = self.trace.as_deref_mut() {
            t.push(format!("== {label}"));
        }
        let lhs = self.nf(lhs)?;
        let rhs = self.nf(rhs)?;
        self.out.push(Equation { label: label.to_string(), lhs, rhs });
        Ok(())
    }
}

/// `χ_μ = γ^νγ_μX_ν`.
pub fn chi(mu: &str) -> NCPoly {
    let n = fresh();
    NCPoly::product(&[NCPoly::gamma(up(&n)), NCPoly::gamma(lo(mu)), NCPoly::x(lo(&n))])
}

/// `α^ν = i(ðγ^ν) + i{𝝎_X, γ^ν} = γ^μ(∂_μγ^ν) + {γ^μω^X_μ, γ^ν}`.
pub fn alpha_def(nu: &str) -> Result<NCPoly, NcError> {
    let m = fresh();
    let slashed = NCPoly::gamma(up(&m)).mul(&NCPoly::omega_x(lo(&m)));
    let g = NCPoly::gamma(up(nu));
    Ok(NCPoly::gamma(up(&m)).mul(&g.partial(&lo(&m))?).add(&slashed.mul(&g)).add(&g.mul(&slashed)))
}

/// `β = −(ð𝝎_X) − 𝝎_X² = γ^μ∂_μ(γ^νω^X_ν) + γ^μω^X_μγ^νω^X_ν`.
pub fn beta_def() -> Result<NCPoly, NcError> {
    let (m, n) = (fresh(), fresh());
    let slashed = |k: &str| NCPoly::gamma(up(k)).mul(&NCPoly::omega_x(lo(k)));
    Ok(NCPoly::gamma(up(&m)).mul(&slashed(&n).partial(&lo(&m))?).add(&slashed(&m).mul(&slashed(&n))))
}

/// `α^ν = 2g^{μν}ω^X_μ − 2γ^μγ^νX_μ − Γ^ν`.
pub fn alpha_closed(nu: &str) -> NCPoly {
    let m = fresh();
    NCPoly::metric(up(&m), up(nu))
        .mul(&NCPoly::omega_x(lo(&m)))
        .scale(c(2))
        .sub(&NCPoly::product(&[NCPoly::gamma(up(&m)), NCPoly::gamma(up(nu)), NCPoly::x(lo(&m))]).scale(c(2)))
        .sub(&NCPoly::christoffel_trace(nu))
}

/// `β = γ^μγ^ν(∇^S_μ − X_μ)ω^X_ν − Γ^νω^X_ν`.
pub fn beta_closed() -> Result<NCPoly, NcError> {
    let (m, n) = (fresh(), fresh());
    let inner = NCPoly::omega_x(lo(&n))
        .partial(&lo(&m))?
        .add(&NCPoly::omega_s(lo(&m)).mul(&NCPoly::omega_x(lo(&n))))
        .sub(&NCPoly::x(lo(&m)).mul(&NCPoly::omega_x(lo(&n))));
    Ok(NCPoly::product(&[NCPoly::gamma(up(&m)), NCPoly::gamma(up(&n)), inner])
        .sub(&NCPoly::christoffel_trace(&n).mul(&NCPoly::omega_x(lo(&n)))))
}

/// Gilkey connection `ω_μ = ½g_{μλ}(α^λ + Γ^λ)`, normalized.
pub fn gilkey_omega(mu: &str) -> Result<NCPoly, NcError> {
    let l = fresh();
    let alpha = alpha_def(&l)?.normalize()?.to_poly();
    let w = NCPoly::metric(lo(mu), lo(&l)).mul(&alpha.add(&NCPoly::christoffel_trace(&l))).scale(Cq::frac(1, 2));
    Ok(w.normalize()?.to_poly())
}

/// `E = β + Γ^νω_ν − g^{μν}(∂_μω_ν + ω_μω_ν)`.
pub fn endomorphism_gilkey() -> Result<NCPoly, NcError> {
    let (m, n) = (fresh(), fresh());
    let w_n = gilkey_omega(&n)?;
    let w_m = gilkey_omega(&m)?;
    let inner = w_n.partial(&lo(&m))?.add(&w_m.mul(&w_n));
    Ok(beta_def()?.add(&NCPoly::christoffel_trace(&n).mul(&w_n)).sub(&NCPoly::metric(up(&m), up(&n)).mul(&inner)))
}

/// `F^X_{μν} = ∂_μω^X_ν − ∂_νω^X_μ + [ω^X_μ, ω^X_ν]`.
pub fn field_strength(mu: &str, nu: &str) -> Result<NCPoly, NcError> {
    let (a, b) = (NCPoly::omega_x(lo(mu)), NCPoly::omega_x(lo(nu)));
    Ok(b.partial(&lo(mu))?.sub(&a.partial(&lo(nu))?).add(&a.commutator(&b)))
}

/// `½γ^μγ^ν(F^X_{μν} + 2𝔇^X_νX_μ + 4X_μX_ν) − Γ^μX_μ`.
pub fn endomorphism_closed() -> Result<NCPoly, NcError> {
    let (m, n) = (fresh(), fresh());
    let inner = field_strength(&m, &n)?
        .add(&NCPoly::x(lo(&m)).cov_x(&lo(&n))?.scale(c(2)))
        .add(&NCPoly::x(lo(&m)).mul(&NCPoly::x(lo(&n))).scale(c(4)));
    let k = fresh();
    Ok(NCPoly::product(&[NCPoly::gamma(up(&m)), NCPoly::gamma(up(&n)), inner])
        .scale(Cq::frac(1, 2))
        .sub(&NCPoly::christoffel_trace(&k).mul(&NCPoly::x(lo(&k)))))
}

/// Differential operator `Σ c·∂_{μ₁}…∂_{μₖ}`; each derivative index is
/// contracted with an upper index of its coefficient.
#[derive(Clone, Debug, Default)]
struct DiffPoly(Vec<(NCPoly, Vec<Ix>)>);

impl DiffPoly {
    /// `ð_X = −iγ^μ∂_μ − iγ^μω^X_μ`.
    fn dirac_x() -> DiffPoly {
        let m = fresh();
        let g = NCPoly::gamma(up(&m)).scale(-Cq::i());
        DiffPoly(vec![(g.clone(), vec![lo(&m)]), (g.mul(&NCPoly::omega_x(lo(&m))), Vec::new())])
    }

    fn compose(&self, o: &DiffPoly) -> Result<DiffPoly, NcError> {
        let mut out = Vec::new();
        for (a, da) in &self.0 {
            for (b, db) in &o.0 {
                match da.as_slice() {
                    [] => out.push((a.mul(b), db.clone())),
                    [mu] => {
                        out.push((a.mul(&b.partial(mu)?), db.clone()));
                        let mut d = da.clone();
                        d.extend(db.iter().cloned());
                        out.push((a.mul(b), d));
                    }
                    _ => unimplemented!("left factor of order above one"),
                }
            }
        }
        Ok(DiffPoly(out))
    }

    /// Coefficient of order `k`, with derivative indices renamed `D1`, `D2`
    /// and symmetrized.
    fn coefficient(&self, k: usize) -> NCPoly {
        let mut acc = NCPoly::zero();
        for (cf, d) in &self.0 {
            if d.len() != k {
                continue;
            }
            let mut p = cf.clone();
            for (j, ix) in d.iter().enumerate() {
                p = p.rename(&ix.name, &format!("D{}", j + 1));
            }
            if k == 2 {
                let swapped = p.rename("D1", "D·").rename("D2", "D1").rename("D·", "D2");
                p = p.add(&swapped).scale(Cq::frac(1, 2));
            }
            acc = acc.add(&p);
        }
        acc
    }
}

fn squared_operator(p: &mut Prover) -> Result<(), NcError> {
    let sq = DiffPoly::dirac_x().compose(&DiffPoly::dirac_x())?;
    p.equate("second order: −g^{μν}", &sq.coefficient(2), &NCPoly::metric(up("D1"), up("D2")).scale(-Cq::one()))?;
    p.equate("first order: −α^ν", &sq.coefficient(1), &alpha_def("D1")?.scale(-Cq::one()))?;
    p.equate("zeroth order: −β", &sq.coefficient(0), &beta_def()?.scale(-Cq::one()))
}

fn alpha_beta(p: &mut Prover) -> Result<(), NcError> {
    p.equate("α^ν", &alpha_def("ν")?, &alpha_closed("ν"))?;
    p.equate("β", &beta_def()?, &beta_closed()?)
}

fn slashed_gamma_derivative(p: &mut Prover) -> Result<(), NcError> {
    let m = fresh();
    let lhs = NCPoly::gamma(up(&m)).mul(&NCPoly::gamma(up("ν")).cov_x(&lo(&m))?);
    let rhs = NCPoly::christoffel_trace("ν")
        .scale(-Cq::one())
        .sub(&NCPoly::product(&[NCPoly::gamma(up(&m)), NCPoly::gamma(up("ν")), NCPoly::x(lo(&m))]).scale(c(2)));
    p.equate("γ^μ𝔇^X_μγ^ν", &lhs, &rhs)?;
    // 𝔇^X_μγ^ν = −Γ^ν_{μκ}γ^κ − 2γ^νX_μ before contraction
    let k = fresh();
    let rhs = NCPoly::christoffel("ν", "μ", &k)
        .mul(&NCPoly::gamma(up(&k)))
        .scale(-Cq::one())
        .sub(&NCPoly::gamma(up("ν")).mul(&NCPoly::x(lo("μ"))).scale(c(2)));
    p.equate("𝔇^X_μγ^ν", &NCPoly::gamma(up("ν")).cov_x(&lo("μ"))?, &rhs)
}

fn gamma_pair_derivative(p: &mut Prover) -> Result<(), NcError> {
    let (m, n) = (fresh(), fresh());
    let lhs = NCPoly::gamma(up("λ")).mul(&NCPoly::gamma(up(&m))).cov_x(&lo(&m))?;
    let rhs = NCPoly::christoffel_trace("λ")
        .add(&NCPoly::product(&[NCPoly::gamma(up("λ")), NCPoly::gamma(up(&n)), NCPoly::christoffel(&m, &m, &n)]))
        .scale(-Cq::one());
    p.equate("𝔇^X_μ(γ^λγ^μ)", &lhs, &rhs)
}

fn metric_derivative(p: &mut Prover) -> Result<(), NcError> {
    let (m, n, l) = (fresh(), fresh(), fresh());
    let lhs = NCPoly::metric(up(&m), up(&n)).mul(&NCPoly::metric(lo(&n), lo("κ")).cov_x(&lo(&m))?);
    let rhs = NCPoly::christoffel_trace_low("κ").add(&NCPoly::christoffel(&m, &m, "κ"));
    p.equate("g^{μν}𝔇^X_μg_{νκ}", &lhs, &rhs)?;
    let lhs = NCPoly::metric(up("a"), up("b")).partial(&lo("μ"))?;
    let rhs = NCPoly::christoffel("a", "μ", &l)
        .mul(&NCPoly::metric(up(&l), up("b")))
        .add(&NCPoly::christoffel("b", "μ", &l).mul(&NCPoly::metric(up("a"), up(&l))))
        .scale(-Cq::one());
    p.equate("∂_μg^{ab}", &lhs, &rhs)
}

fn gilkey_connection(p: &mut Prover) -> Result<(), NcError> {
    p.equate("ω_μ = ω^X_μ − χ_μ", &gilkey_omega("μ")?, &NCPoly::omega_x(lo("μ")).sub(&chi("μ")))?;
    let m = fresh();
    let lhs = NCPoly::gamma(up(&m)).mul(&gilkey_omega(&m)?).scale(-Cq::i());
    let m = fresh();
    let slash = |f: NCPoly| NCPoly::gamma(up(&m)).mul(&f).scale(-Cq::i());
    let rhs = slash(NCPoly::omega_x(lo(&m))).add(&slash(NCPoly::x(lo(&m))).scale(c(2)));
    p.equate("𝝎 = 𝝎_X + 2𝐗", &lhs, &rhs)?;
    let m = fresh();
    let lhs = NCPoly::product(&[NCPoly::gamma(up(&m)), NCPoly::gamma(up("λ")), NCPoly::gamma(lo(&m))]);
    p.equate("γ^μγ^λγ_μ = −2γ^λ", &lhs, &NCPoly::gamma(up("λ")).scale(c(-2)))
}

fn chi_relations(p: &mut Prover) -> Result<(), NcError> {
    let (m, n, l, k) = (fresh(), fresh(), fresh(), fresh());
    let lhs = NCPoly::metric(up(&m), up(&n)).mul(&chi(&n).cov_x(&lo(&m))?);
    let rhs = NCPoly::product(&[NCPoly::gamma(up(&l)), NCPoly::gamma(up(&m)), NCPoly::x(lo(&l)).cov_x(&lo(&m))?])
        .add(&NCPoly::product(&[
            NCPoly::christoffel_trace_low(&k),
            NCPoly::gamma(up(&l)),
            NCPoly::gamma(up(&k)),
            NCPoly::x(lo(&l)),
        ]))
        .sub(&NCPoly::christoffel_trace(&l).mul(&NCPoly::x(lo(&l))));
    p.equate("g^{μν}𝔇^X_μχ_ν", &lhs, &rhs)?;
    let (m, n) = (fresh(), fresh());
    let lhs = NCPoly::product(&[NCPoly::metric(up(&m), up(&n)), chi(&m), chi(&n)]);
    let (l, k) = (fresh(), fresh());
    let rhs = NCPoly::product(&[NCPoly::gamma(up(&l)), NCPoly::gamma(up(&k)), NCPoly::x(lo(&l)), NCPoly::x(lo(&k))]).scale(c(-2));
    p.equate("χ·χ", &lhs, &rhs)?;
    let m = fresh();
    let lhs = NCPoly::christoffel_trace(&m).mul(&chi(&m));
    let (l, k) = (fresh(), fresh());
    let rhs =
        NCPoly::product(&[NCPoly::christoffel_trace_low(&k), NCPoly::gamma(up(&l)), NCPoly::gamma(up(&k)), NCPoly::x(lo(&l))]);
    p.equate("Γ^μχ_μ", &lhs, &rhs)
}

fn endomorphism(p: &mut Prover) -> Result<(), NcError> {
    p.equate("E from the Gilkey data", &endomorphism_gilkey()?, &endomorphism_closed()?)
}

/// Proves one named identity; `trace` collects every rule firing.
pub fn prove_curved(id: &str, trace: bool) -> Result<Option<Derivation>, NcError> {
    let Some(&id) = CURVED_IDENTITIES.iter().find(|&&k| k == id) else { return Ok(None) };
    let mut lines = Vec::new();
    let mut p = Prover { trace: trace.then_some(&mut lines), out: Vec::new() };
    let statement = match id {
        "squared-operator" => {
            squared_operator(&mut p)?;
            "ð_X² = −(g^{μν}∂_μ∂_ν + α^ν∂_ν + β)"
        }
        "alpha-beta" => {
            alpha_beta(&mut p)?;
            "α^ν = 2g^{μν}ω^X_μ − 2γ^μγ^νX_μ − Γ^ν, β = γ^μγ^ν(∇^S_μ − X_μ)ω^X_ν − Γ^νω^X_ν"
        }
        "slashed-gamma-derivative" => {
            slashed_gamma_derivative(&mut p)?;
            "γ^μ𝔇^X_μγ^ν = −Γ^ν − 2γ^μγ^νX_μ"
        }
        "gamma-pair-derivative" => {
            gamma_pair_derivative(&mut p)?;
            "𝔇^X_μ(γ^λγ^μ) = −Γ^λ − γ^λγ^νΓ^μ_{μν}"
        }
        "metric-derivative" => {
            metric_derivative(&mut p)?;
            "g^{μν}𝔇^X_μg_{νκ} = Γ_κ + Γ^μ_{μκ}"
        }
        "gilkey-connection" => {
            gilkey_connection(&mut p)?;
            "ω_μ = ω^X_μ − χ_μ, 𝝎 = 𝝎_X + 2𝐗"
        }
        "chi-relations" => {
            chi_relations(&mut p)?;
            "g^{μν}𝔇^X_μχ_ν, χ·χ and Γ^μχ_μ"
        }
        "endomorphism" => {
            endomorphism(&mut p)?;
            "E = ½γ^μγ^ν(F^X_{μν} + 2𝔇^X_νX_μ + 4X_μX_ν) − Γ^μX_μ"
        }
        _ => unreachable!(),
    };
    let equations = p.out;
    Ok(Some(Derivation { id, statement, equations, trace: lines }))
}

/// Evaluates a normal form at `Γ = 0`, `g = δ`,
/// euclidean gammas and the fields of `data`.
pub fn eval_flat(nf: &NormalForm, data: &FlatData) -> Result<SymMatrix, SymError> {
    eval_flat_terms(nf.terms(), data)
}

/// As [`eval_flat`], on raw terms; free indices are summed as well.
pub fn eval_flat_terms<'a>(terms: impl IntoIterator<Item = &'a Term>, data: &FlatData) -> Result<SymMatrix, SymError> {
    let gam = euclidean_gammas();
    let mut total = SymMatrix::zero(4);
    for term in terms {
        if term.t.iter().any(|t| matches!(t.kind, TKind::Chr | TKind::ChrTr | TKind::ChrTrLow)) {
            continue;
        }
        total = total.add(&eval_term(term, data, &gam.gamma)?);
    }
    Ok(total)
}

fn eval_term(term: &Term, data: &FlatData, gamma: &[SymMatrix; 4]) -> Result<SymMatrix, SymError> {
    // metric and δ factors identify index names
    let mut parent: BTreeMap<String, String> = BTreeMap::new();
    fn find(p: &BTreeMap<String, String>, x: &str) -> String {
        let mut x = x.to_string();
        while let Some(y) = p.get(&x) {
            if *y == x {
                break;
            }
            x = y.clone();
        }
        x
    }
    let mut names = BTreeSet::new();
    for l in &term.w {
        for ix in &l.ix {
            names.insert(ix.name.to_string());
        }
    }
    for t in &term.t {
        for ix in &t.ix {
            names.insert(ix.name.to_string());
        }
        let (a, b) = (find(&parent, &t.ix[0].name), find(&parent, &t.ix[1].name));
        if a != b {
            parent.insert(a, b);
        }
    }
    let classes: Vec<String> = names.iter().map(|n| find(&parent, n)).collect::<BTreeSet<_>>().into_iter().collect();
    let mut total = SymMatrix::zero(4);
    for code in 0..4usize.pow(classes.len() as u32) {
        let value = |name: &str| {
            let root = find(&parent, name);
            let k = classes.iter().position(|c| *c == root).expect("class");
            code / 4usize.pow(k as u32) % 4
        };
        let mut m = SymMatrix::identity(4).scale(term.c);
        for l in &term.w {
            let field = value(&l.ix[l.ix.len() - 1].name);
            let ders: Vec<usize> = l.ix[..l.ix.len() - 1].iter().map(|d| value(&d.name)).collect();
            let base = match l.base {
                Base::Gamma => gamma[field].clone(),
                Base::X => data.x[field].clone(),
                Base::OmegaS => data.omega_s[field].clone(),
            };
            let f = if ders.is_empty() { base } else { base.derive_multi(Deriv::from_slice(&ders).expect("derivative order"))? };
            m = m.mul(&f);
        }
        total = total.add(&m);
    }
    Ok(total)
}

/// Every curved identity plus the flat specialization of `E`.
pub fn curved_report() -> Result<Report, NcError> {
    let mut r = Report::new("lichnerowicz/curved");
    for id in CURVED_IDENTITIES {
        let d = prove_curved(id, false)?.expect("known identity");
        r.push(d.check());
    }
    Ok(r)
}
