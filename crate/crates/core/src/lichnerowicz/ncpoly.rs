//! Noncommutative polynomials in abstract-index gammas, twist fields and
//! spin connections, with commuting metric and Christoffel factors.
//!
//! A term is `c · (tensors) · word`. Indices are formal: a name occurring
//! once is free, twice (once up, once down) is summed. Normalization
//! applies, in priority order:
//!
//! 1. `γ_a → g_{ab}γ^b`
//! 2. `δ^a_b` contraction and `δ^a_a = 4`
//! 3. `g^{ab}g_{bc} → δ^a_c`
//! 4. Christoffel traces, and metric contraction into a slot whose natural
//!    position it restores
//! 5. `X_aγ^b → −γ^bX_a`
//! 6. Clifford: a γ pair contracted with one symmetric tensor collapses to
//!    `g^{ab}`, other gammas are sorted by a key that does not depend on
//!    dummy names, with `γ^aγ^b = −γ^bγ^a + 2g^{ab}`. Ties are settled by
//!    the canonical serialization of the whole term.
//!
//! Derivatives are expanded eagerly with the Leibniz rule and the axiom
//! `∂_μγ^λ + [ω^S_μ, γ^λ] = −Γ^λ_{μν}γ^ν`.

use crate::coeff::Cq;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;
use thiserror::Error;

/// Range of every index.
pub const DIMENSION: i128 = 4;
/// Rewrite budget per normalization.
pub const STEP_LIMIT: usize = 2_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum NcError {
    #[error("index `{0}` occurs {1} times in one term")]
    IllFormed(String, usize),
    #[error("rewriting did not terminate within {0} steps")]
    StepLimit(usize),
}

static FRESH: AtomicU32 = AtomicU32::new(0);

/// Index with position.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Ix {
    pub name: Arc<str>,
    pub up: bool,
}

impl Ix {
    pub fn up(n: &str) -> Ix {
        Ix { name: n.into(), up: true }
    }
    pub fn lo(n: &str) -> Ix {
        Ix { name: n.into(), up: false }
    }
    /// Unused name, for summation indices.
    pub fn fresh() -> Arc<str> {
        format!("·{}", FRESH.fetch_add(1, Ordering::Relaxed)).into()
    }
    pub fn flip(&self) -> Ix {
        Ix { name: self.name.clone(), up: !self.up }
    }
    fn with_name(&self, n: &Arc<str>) -> Ix {
        Ix { name: n.clone(), up: self.up }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Base {
    Gamma,
    X,
    OmegaS,
}

/// Noncommuting factor; `ix` holds derivative indices first, then the field index.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub base: Base,
    pub ix: Vec<Ix>,
}

impl Letter {
    fn nder(&self) -> usize {
        self.ix.len() - 1
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum TKind {
    /// `g^{ab}` or `g_{ab}`.
    Metric,
    /// `δ^a_b`.
    Delta,
    /// `Γ^a_{bc}`.
    Chr,
    /// `Γ^a = g^{bc}Γ^a_{bc}`.
    ChrTr,
    /// `Γ_a = g_{ab}Γ^b`.
    ChrTrLow,
}

/// Commuting factor; derivative indices come last.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tensor {
    pub kind: TKind,
    pub ix: Vec<Ix>,
    pub nder: usize,
}

impl Tensor {
    fn sym_pair(&self) -> Option<(usize, usize)> {
        match self.kind {
            TKind::Metric => Some((0, 1)),
            TKind::Chr => Some((1, 2)),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Term {
    pub c: Cq,
    pub t: Vec<Tensor>,
    pub w: Vec<Letter>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Loc {
    W(usize, usize),
    T(usize, usize),
}

impl Term {
    fn one() -> Term {
        Term { c: Cq::one(), t: Vec::new(), w: Vec::new() }
    }

    fn get(&self, l: Loc) -> &Ix {
        match l {
            Loc::W(p, s) => &self.w[p].ix[s],
            Loc::T(p, s) => &self.t[p].ix[s],
        }
    }

    fn set(&mut self, l: Loc, ix: Ix) {
        match l {
            Loc::W(p, s) => self.w[p].ix[s] = ix,
            Loc::T(p, s) => self.t[p].ix[s] = ix,
        }
    }

    fn occurrences(&self) -> HashMap<Arc<str>, Vec<Loc>> {
        let mut m: HashMap<Arc<str>, Vec<Loc>> = HashMap::new();
        for (p, l) in self.w.iter().enumerate() {
            for (s, ix) in l.ix.iter().enumerate() {
                m.entry(ix.name.clone()).or_default().push(Loc::W(p, s));
            }
        }
        for (p, t) in self.t.iter().enumerate() {
            for (s, ix) in t.ix.iter().enumerate() {
                m.entry(ix.name.clone()).or_default().push(Loc::T(p, s));
            }
        }
        m
    }

    fn partner(&self, occ: &HashMap<Arc<str>, Vec<Loc>>, at: Loc) -> Option<Loc> {
        occ.get(&self.get(at).name)?.iter().copied().find(|&l| l != at)
    }

    fn rename(&mut self, from: &Arc<str>, to: &Arc<str>) {
        for l in &mut self.w {
            for ix in &mut l.ix {
                if &ix.name == from {
                    ix.name = to.clone();
                }
            }
        }
        for t in &mut self.t {
            for ix in &mut t.ix {
                if &ix.name == from {
                    ix.name = to.clone();
                }
            }
        }
    }

    /// Renames every summed index to a fresh name.
    fn refresh(&mut self) {
        let occ = self.occurrences();
        for (name, locs) in occ {
            if locs.len() == 2 {
                self.rename(&name, &Ix::fresh());
            }
        }
    }

    fn mul(&self, o: &Term) -> Term {
        let (mut a, mut b) = (self.clone(), o.clone());
        a.refresh();
        b.refresh();
        a.c = a.c * b.c;
        a.t.extend(b.t);
        a.w.extend(b.w);
        a
    }

    fn with_scale(mut self, c: Cq) -> Term {
        self.c = self.c * c;
        self
    }
}

/// Finite sum of terms, not necessarily normalized.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NCPoly {
    terms: Vec<Term>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        NCPoly { terms: vec![Term::one()] }
    }

    pub fn constant(c: Cq) -> Self {
        NCPoly { terms: vec![Term::one().with_scale(c)] }
    }

    fn letter(base: Base, ix: Ix) -> Self {
        NCPoly { terms: vec![Term { c: Cq::one(), t: Vec::new(), w: vec![Letter { base, ix: vec![ix] }] }] }
    }

    fn tensor(kind: TKind, ix: Vec<Ix>) -> Self {
        NCPoly { terms: vec![Term { c: Cq::one(), t: vec![Tensor { kind, ix, nder: 0 }], w: Vec::new() }] }
    }

    /// `γ^a`; a lower index gives `γ_a = g_{ab}γ^b`.
    pub fn gamma(a: Ix) -> Self {
        if a.up {
            return NCPoly::letter(Base::Gamma, a);
        }
        let b = Ix::fresh();
        NCPoly::metric(a, Ix { name: b.clone(), up: false }).mul(&NCPoly::letter(Base::Gamma, Ix { name: b, up: true }))
    }

    /// `X_a`.
    pub fn x(a: Ix) -> Self {
        NCPoly::letter(Base::X, a)
    }

    /// `ω^S_a`.
    pub fn omega_s(a: Ix) -> Self {
        NCPoly::letter(Base::OmegaS, a)
    }

    /// `ω^X_a = ω^S_a + X_a`.
    pub fn omega_x(a: Ix) -> Self {
        NCPoly::omega_s(a.clone()).add(&NCPoly::x(a))
    }

    /// `g^{ab}` or `g_{ab}`; both indices must share a position.
    pub fn metric(a: Ix, b: Ix) -> Self {
        assert_eq!(a.up, b.up, "metric indices share a position");
        NCPoly::tensor(TKind::Metric, vec![a, b])
    }

    pub fn delta(a_up: &str, b_lo: &str) -> Self {
        NCPoly::tensor(TKind::Delta, vec![Ix::up(a_up), Ix::lo(b_lo)])
    }

    /// `Γ^a_{bc}`.
    pub fn christoffel(a: &str, b: &str, c: &str) -> Self {
        NCPoly::tensor(TKind::Chr, vec![Ix::up(a), Ix::lo(b), Ix::lo(c)])
    }

    /// `Γ^a`.
    pub fn christoffel_trace(a: &str) -> Self {
        NCPoly::tensor(TKind::ChrTr, vec![Ix::up(a)])
    }

    /// `Γ_a`.
    pub fn christoffel_trace_low(a: &str) -> Self {
        NCPoly::tensor(TKind::ChrTrLow, vec![Ix::lo(a)])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn add(&self, o: &NCPoly) -> NCPoly {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        NCPoly { terms }
    }

    pub fn sub(&self, o: &NCPoly) -> NCPoly {
        self.add(&o.scale(-Cq::one()))
    }

    pub fn scale(&self, c: Cq) -> NCPoly {
        NCPoly { terms: self.terms.iter().map(|t| t.clone().with_scale(c)).collect() }
    }

    /// Product; summed indices inside each factor are renamed apart first.
    pub fn mul(&self, o: &NCPoly) -> NCPoly {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &o.terms {
                terms.push(a.mul(b));
            }
        }
        NCPoly { terms }
    }

    /// Product of several factors, left to right.
    pub fn product(fs: &[NCPoly]) -> NCPoly {
        fs.iter().fold(NCPoly::one(), |acc, f| acc.mul(f))
    }

    pub fn commutator(&self, o: &NCPoly) -> NCPoly {
        self.mul(o).sub(&o.mul(self))
    }

    /// Renames a (free) index.
    pub fn rename(&self, from: &str, to: &str) -> NCPoly {
        let (f, t): (Arc<str>, Arc<str>) = (from.into(), to.into());
        NCPoly {
            terms: self
                .terms
                .iter()
                .map(|term| {
                    let mut term = term.clone();
                    term.rename(&f, &t);
                    term
                })
                .collect(),
        }
    }

    /// `∂_μ` with the Leibniz rule; `mu` must be a lower index.
    pub fn partial(&self, mu: &Ix) -> Result<NCPoly, NcError> {
        assert!(!mu.up, "derivative index is lower");
        let mut out = Vec::new();
        for term in &self.terms {
            for k in 0..term.t.len() {
                let d = d_tensor(mu, &term.t[k])?;
                for dt in d.terms {
                    let mut nt = term.clone();
                    nt.t.remove(k);
                    nt.c = nt.c * dt.c;
                    nt.t.extend(dt.t);
                    let mut w = dt.w;
                    w.extend(nt.w);
                    nt.w = w;
                    out.push(nt);
                }
            }
            for k in 0..term.w.len() {
                for dt in d_letter(mu, &term.w[k]).terms {
                    let mut nt = term.clone();
                    nt.c = nt.c * dt.c;
                    nt.t.extend(dt.t);
                    nt.w.splice(k..=k, dt.w);
                    out.push(nt);
                }
            }
        }
        Ok(NCPoly { terms: out })
    }

    /// `𝔇^S_μ A = ∂_μA + [ω^S_μ, A]`.
    pub fn cov_s(&self, mu: &Ix) -> Result<NCPoly, NcError> {
        Ok(self.partial(mu)?.add(&NCPoly::omega_s(mu.clone()).commutator(self)))
    }

    /// `𝔇^X_μ A = ∂_μA + [ω^X_μ, A]`.
    pub fn cov_x(&self, mu: &Ix) -> Result<NCPoly, NcError> {
        Ok(self.partial(mu)?.add(&NCPoly::omega_x(mu.clone()).commutator(self)))
    }

    pub fn normalize(&self) -> Result<NormalForm, NcError> {
        normalize(self, None)
    }

    pub fn normalize_traced(&self, trace: &mut Vec<String>) -> Result<NormalForm, NcError> {
        normalize(self, Some(trace))
    }
}

fn d_letter(mu: &Ix, l: &Letter) -> NCPoly {
    match l.base {
        Base::Gamma if l.nder() == 0 => {
            // ∂_μγ^a = −Γ^a_{μν}γ^ν − [ω^S_μ, γ^a]
            let a = &l.ix[0];
            let nu = Ix::fresh();
            let chr = NCPoly::tensor(TKind::Chr, vec![a.clone(), mu.clone(), Ix { name: nu.clone(), up: false }]);
            let g = NCPoly::gamma(Ix { name: nu, up: true });
            let spin = NCPoly::omega_s(mu.clone()).commutator(&NCPoly::gamma(a.clone()));
            chr.mul(&g).scale(-Cq::one()).sub(&spin)
        }
        _ => {
            let mut ix = vec![mu.clone()];
            ix.extend(l.ix.iter().cloned());
            NCPoly { terms: vec![Term { c: Cq::one(), t: Vec::new(), w: vec![Letter { base: l.base, ix }] }] }
        }
    }
}

fn d_tensor(mu: &Ix, t: &Tensor) -> Result<NCPoly, NcError> {
    match t.kind {
        TKind::Delta => Ok(NCPoly::zero()),
        TKind::Metric if t.nder == 0 && t.ix[0].up => {
            // g^{ab}·I = ½{γ^a, γ^b}
            let (a, b) = (NCPoly::gamma(t.ix[0].clone()), NCPoly::gamma(t.ix[1].clone()));
            let sym = a.mul(&b).add(&b.mul(&a)).scale(Cq::frac(1, 2));
            Ok(sym.partial(mu)?.normalize()?.to_poly())
        }
        TKind::Metric if t.nder == 0 => {
            // ∂g_{ab} = −g_{ac}g_{bd}∂g^{cd}
            let (c, d) = (Ix::fresh(), Ix::fresh());
            let up = Tensor {
                kind: TKind::Metric,
                ix: vec![Ix { name: c.clone(), up: true }, Ix { name: d.clone(), up: true }],
                nder: 0,
            };
            let dg = d_tensor(mu, &up)?;
            let lower = NCPoly::metric(t.ix[0].clone(), Ix { name: c, up: false })
                .mul(&NCPoly::metric(t.ix[1].clone(), Ix { name: d, up: false }));
            // dg has free c, d; multiply without renaming them
            let mut out = Vec::new();
            for l in &lower.terms {
                for r in &dg.terms {
                    let mut nt = l.clone();
                    nt.c = -(nt.c * r.c);
                    nt.t.extend(r.t.iter().cloned());
                    nt.w.extend(r.w.iter().cloned());
                    out.push(nt);
                }
            }
            Ok(NCPoly { terms: out })
        }
        _ => {
            let mut nt = t.clone();
            nt.ix.push(mu.clone());
            nt.nder += 1;
            Ok(NCPoly { terms: vec![Term { c: Cq::one(), t: vec![nt], w: Vec::new() }] })
        }
    }
}

/// Natural position of a slot (`Some(true)` = upper); `None` for metric and δ.
fn native_up(term: &Term, l: Loc) -> Option<bool> {
    match l {
        Loc::W(p, s) => {
            let letter = &term.w[p];
            Some(letter.base == Base::Gamma && s == letter.nder())
        }
        Loc::T(p, s) => {
            let t = &term.t[p];
            if s >= t.ix.len() - t.nder {
                return Some(false);
            }
            match t.kind {
                TKind::Metric | TKind::Delta => None,
                TKind::Chr => Some(s == 0),
                TKind::ChrTr => Some(true),
                TKind::ChrTrLow => Some(false),
            }
        }
    }
}

type Rewrite = (&'static str, Vec<Term>);

fn r_lower_gamma(term: &Term) -> Option<Rewrite> {
    let p = term.w.iter().position(|l| l.base == Base::Gamma && !l.ix[0].up)?;
    let mut nt = term.clone();
    let a = nt.w[p].ix[0].clone();
    let b = Ix::fresh();
    nt.w[p].ix[0] = Ix { name: b.clone(), up: true };
    nt.t.push(Tensor { kind: TKind::Metric, ix: vec![a, Ix { name: b, up: false }], nder: 0 });
    Some(("lower γ", vec![nt]))
}

fn r_delta(term: &Term, occ: &HashMap<Arc<str>, Vec<Loc>>) -> Option<Rewrite> {
    for (i, t) in term.t.iter().enumerate() {
        if t.kind != TKind::Delta {
            continue;
        }
        let (a, b) = (&t.ix[0], &t.ix[1]);
        let mut nt = term.clone();
        if a.name == b.name {
            nt.t.remove(i);
            nt.c = nt.c * Cq::from(DIMENSION);
            return Some(("δ trace", vec![nt]));
        }
        if let Some(l) = term.partner(occ, Loc::T(i, 0)) {
            let cur = term.get(l).clone();
            nt.set(l, cur.with_name(&b.name));
            nt.t.remove(i);
            return Some(("δ contraction", vec![nt]));
        }
        if let Some(l) = term.partner(occ, Loc::T(i, 1)) {
            let cur = term.get(l).clone();
            nt.set(l, cur.with_name(&a.name));
            nt.t.remove(i);
            return Some(("δ contraction", vec![nt]));
        }
    }
    None
}

fn r_metric_metric(term: &Term, occ: &HashMap<Arc<str>, Vec<Loc>>) -> Option<Rewrite> {
    for (i, t) in term.t.iter().enumerate() {
        if t.kind != TKind::Metric || t.nder != 0 || !t.ix[0].up {
            continue;
        }
        for s in 0..2 {
            let Some(Loc::T(j, sj)) = term.partner(occ, Loc::T(i, s)) else { continue };
            let u = &term.t[j];
            if j == i || u.kind != TKind::Metric || u.nder != 0 {
                continue;
            }
            let a = t.ix[1 - s].clone();
            let c = u.ix[1 - sj].clone();
            let mut nt = term.clone();
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            nt.t.remove(hi);
            nt.t.remove(lo);
            nt.t.push(Tensor { kind: TKind::Delta, ix: vec![a, c], nder: 0 });
            return Some(("g^{ab}g_{bc} = δ^a_c", vec![nt]));
        }
    }
    None
}

fn r_christoffel(term: &Term, occ: &HashMap<Arc<str>, Vec<Loc>>) -> Option<Rewrite> {
    for (i, t) in term.t.iter().enumerate() {
        if t.kind != TKind::Metric || t.nder != 0 {
            continue;
        }
        let p0 = term.partner(occ, Loc::T(i, 0));
        let p1 = term.partner(occ, Loc::T(i, 1));
        // g^{bc}Γ^a_{bc} = Γ^a
        if let (Some(Loc::T(j, s0)), Some(Loc::T(k, s1))) = (p0, p1) {
            let c = &term.t[j];
            if t.ix[0].up && j == k && c.kind == TKind::Chr && c.nder == 0 && s0 != s1 && s0 > 0 && s1 > 0 {
                let mut nt = term.clone();
                let a = c.ix[0].clone();
                let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                nt.t.remove(hi);
                nt.t.remove(lo);
                nt.t.push(Tensor { kind: TKind::ChrTr, ix: vec![a], nder: 0 });
                return Some(("Christoffel trace", vec![nt]));
            }
        }
        for (s, p) in [(0, p0), (1, p1)] {
            let Some(l) = p else { continue };
            let other = t.ix[1 - s].clone();
            if let Loc::T(j, 0) = l {
                let u = &term.t[j];
                let lowering = !t.ix[0].up && u.kind == TKind::ChrTr && u.nder == 0;
                let raising = t.ix[0].up && u.kind == TKind::ChrTrLow && u.nder == 0;
                if lowering || raising {
                    let mut nt = term.clone();
                    nt.t[j] = Tensor { kind: if lowering { TKind::ChrTrLow } else { TKind::ChrTr }, ix: vec![other], nder: 0 };
                    nt.t.remove(i);
                    return Some(("Γ^a index moved by the metric", vec![nt]));
                }
            }
            // contraction that puts a slot back in its natural position
            if native_up(term, l) == Some(t.ix[0].up) {
                let mut nt = term.clone();
                nt.set(l, other);
                nt.t.remove(i);
                return Some(("metric contraction", vec![nt]));
            }
        }
    }
    None
}

fn r_x_gamma(term: &Term) -> Option<Rewrite> {
    let p = (0..term.w.len().saturating_sub(1)).find(|&p| {
        let (a, b) = (&term.w[p], &term.w[p + 1]);
        a.base == Base::X && a.nder() == 0 && b.base == Base::Gamma
    })?;
    let mut nt = term.clone();
    nt.w.swap(p, p + 1);
    nt.c = -nt.c;
    Some(("X_aγ^b = −γ^bX_a", vec![nt]))
}

/// Sort key of a γ index: free indices by name, then summed indices by
/// where their partner sits.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Key {
    Free(Arc<str>),
    Word(usize, usize),
    Tensor(TKind, usize, Vec<String>),
}

fn gamma_key(term: &Term, occ: &HashMap<Arc<str>, Vec<Loc>>, p: usize) -> Key {
    let at = Loc::W(p, 0);
    match term.partner(occ, at) {
        None => Key::Free(term.get(at).name.clone()),
        Some(Loc::W(q, s)) => Key::Word(q, s),
        Some(Loc::T(j, s)) => {
            let t = &term.t[j];
            let desc = (0..t.ix.len())
                .filter(|&k| k != s)
                .map(|k| match term.partner(occ, Loc::T(j, k)) {
                    None => t.ix[k].name.to_string(),
                    Some(Loc::W(q, qs)) => format!("w{q}.{qs}"),
                    Some(Loc::T(..)) => "*".to_string(),
                })
                .collect();
            // slots of a symmetric pair are interchangeable
            let slot = match t.sym_pair() {
                Some((a, b)) if s == b => a,
                _ => s,
            };
            Key::Tensor(t.kind, slot, desc)
        }
    }
}

/// Partner tensor and slot when a γ is contracted into a symmetric pair.
fn sym_partner(term: &Term, occ: &HashMap<Arc<str>, Vec<Loc>>, p: usize) -> Option<(usize, usize)> {
    match term.partner(occ, Loc::W(p, 0))? {
        Loc::T(j, s) => {
            let (a, b) = term.t[j].sym_pair()?;
            (!term.t[j].ix[s].up && (s == a || s == b)).then_some((j, s))
        }
        Loc::W(..) => None,
    }
}

fn swap_gammas(term: &Term, p: usize) -> Vec<Term> {
    // γ^aγ^b = −γ^bγ^a + 2g^{ab}
    let mut swapped = term.clone();
    swapped.w.swap(p, p + 1);
    swapped.c = -swapped.c;
    let mut contracted = term.clone();
    let a = contracted.w[p].ix[0].clone();
    let b = contracted.w[p + 1].ix[0].clone();
    contracted.w.drain(p..=p + 1);
    contracted.t.push(Tensor { kind: TKind::Metric, ix: vec![a, b], nder: 0 });
    contracted.c = contracted.c * Cq::from(2);
    vec![swapped, contracted]
}

fn r_clifford(term: &Term, occ: &HashMap<Arc<str>, Vec<Loc>>) -> Option<Rewrite> {
    let n = term.w.len();
    let mut start = 0;
    while start < n {
        if term.w[start].base != Base::Gamma {
            start += 1;
            continue;
        }
        let mut end = start;
        while end < n && term.w[end].base == Base::Gamma {
            end += 1;
        }
        let sym: Vec<Option<(usize, usize)>> = (start..end).map(|p| sym_partner(term, occ, p)).collect();
        for i in 0..sym.len() {
            for j in i + 1..sym.len() {
                let (Some((ti, si)), Some((tj, sj))) = (sym[i], sym[j]) else { continue };
                if ti != tj || si == sj {
                    continue;
                }
                let (p, q) = (start + i, start + j);
                if q == p + 1 {
                    // γ^aγ^b S_{ab} = g^{ab}S_{ab} for symmetric S
                    let mut nt = term.clone();
                    let a = nt.w[p].ix[0].clone();
                    let b = nt.w[q].ix[0].clone();
                    nt.w.drain(p..=q);
                    nt.t.push(Tensor { kind: TKind::Metric, ix: vec![a, b], nder: 0 });
                    return Some(("γ^aγ^b on a symmetric pair = g^{ab}", vec![nt]));
                }
                return Some(("Clifford (gathering a symmetric pair)", swap_gammas(term, q - 1)));
            }
        }
        for p in start..end - 1 {
            let (ka, kb) = (gamma_key(term, occ, p), gamma_key(term, occ, p + 1));
            if ka > kb {
                return Some(("Clifford reordering", swap_gammas(term, p)));
            }
            if ka == kb {
                // partners indistinguishable by key: decide on the full canonical form
                let mut swapped = term.clone();
                swapped.w.swap(p, p + 1);
                let (here, there) = (canonical(term).0, canonical(&swapped).0);
                if here == there {
                    let mut nt = term.clone();
                    let a = nt.w[p].ix[0].clone();
                    let b = nt.w[p + 1].ix[0].clone();
                    nt.w.drain(p..=p + 1);
                    nt.t.push(Tensor { kind: TKind::Metric, ix: vec![a, b], nder: 0 });
                    return Some(("γ^aγ^b symmetric under exchange = g^{ab}", vec![nt]));
                }
                if there < here {
                    return Some(("Clifford reordering (tie broken canonically)", swap_gammas(term, p)));
                }
            }
        }
        start = end;
    }
    None
}

fn rewrite_once(term: &Term) -> Result<Option<Rewrite>, NcError> {
    let occ = term.occurrences();
    if let Some((n, locs)) = occ.iter().find(|(_, l)| l.len() > 2) {
        return Err(NcError::IllFormed(n.to_string(), locs.len()));
    }
    Ok(r_lower_gamma(term)
        .or_else(|| r_delta(term, &occ))
        .or_else(|| r_metric_metric(term, &occ))
        .or_else(|| r_christoffel(term, &occ))
        .or_else(|| r_x_gamma(term))
        .or_else(|| r_clifford(term, &occ)))
}

/// Normalized polynomial keyed by a dummy-name-independent serialization.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NormalForm {
    terms: BTreeMap<String, Term>,
}

fn normalize(p: &NCPoly, mut trace: Option<&mut Vec<String>>) -> Result<NormalForm, NcError> {
    let mut work: Vec<Term> = p.terms.iter().filter(|t| !t.c.is_zero()).cloned().collect();
    let mut out = NormalForm::default();
    let mut steps = 0;
    while let Some(term) = work.pop() {
        steps += 1;
        if steps > STEP_LIMIT {
            return Err(NcError::StepLimit(STEP_LIMIT));
        }
        match rewrite_once(&term)? {
            Some((rule, next)) => {
                if let Some(tr) = trace.as_deref_mut() {
                    let rhs: Vec<String> = next.iter().map(|t| t.to_string()).collect();
                    tr.push(format!("{rule}: {term} → {}", if rhs.is_empty() { "0".into() } else { rhs.join(" + ") }));
                }
                work.extend(next.into_iter().filter(|t| !t.c.is_zero()));
            }
            None => out.insert(term),
        }
    }
    Ok(out)
}

fn serialize(term: &Term, order: &[usize], flips: &[bool]) -> (String, Term) {
    let occ = term.occurrences();
    let mut names: HashMap<Arc<str>, Arc<str>> = HashMap::new();
    let mut next = 0;
    let mut canon = Term { c: term.c, t: Vec::new(), w: term.w.clone() };
    for &i in order {
        let mut t = term.t[i].clone();
        if flips[i] {
            if let Some((a, b)) = t.sym_pair() {
                t.ix.swap(a, b);
            }
        }
        canon.t.push(t);
    }
    let mut visit = |ix: &mut Ix| {
        if occ.get(&ix.name).map_or(0, Vec::len) == 2 {
            let n = names.entry(ix.name.clone()).or_insert_with(|| {
                next += 1;
                format!("i{}", next - 1).into()
            });
            ix.name = n.clone();
        }
    };
    for l in &mut canon.w {
        l.ix.iter_mut().for_each(&mut visit);
    }
    for t in &mut canon.t {
        t.ix.iter_mut().for_each(&mut visit);
    }
    let mut c = canon.clone();
    c.c = Cq::one();
    (c.to_string(), canon)
}

/// Slot `s` of a symmetric pair is reported as the pair's first slot.
fn pair_slot(t: &Tensor, s: usize) -> usize {
    match t.sym_pair() {
        Some((a, b)) if s == b => a,
        _ => s,
    }
}

/// What slot `s` of tensor `j` is attached to, ignoring dummy names.
fn slot_desc(term: &Term, occ: &HashMap<Arc<str>, Vec<Loc>>, j: usize, s: usize, partner_sig: Option<&[String]>) -> String {
    let ix = &term.t[j].ix[s];
    let pos = if ix.up { '^' } else { '_' };
    match term.partner(occ, Loc::T(j, s)) {
        None => format!("{pos}F{}", ix.name),
        Some(Loc::W(p, q)) => format!("{pos}W{p}.{q}"),
        Some(Loc::T(k, q)) if k == j => format!("{pos}S{}", pair_slot(&term.t[j], q)),
        Some(Loc::T(k, q)) => {
            let extra = partner_sig.map_or(String::new(), |sig| format!("<{}>", sig[k]));
            format!("{pos}T{:?}.{}.{}{extra}", term.t[k].kind, term.t[k].nder, pair_slot(&term.t[k], q))
        }
    }
}

/// Signature of every tensor, and whether its symmetric pair must or may be swapped.
fn signatures(term: &Term, occ: &HashMap<Arc<str>, Vec<Loc>>, prev: Option<&[String]>) -> (Vec<String>, Vec<Option<bool>>) {
    let mut sigs = Vec::new();
    let mut flips = Vec::new();
    for (j, t) in term.t.iter().enumerate() {
        let mut descs: Vec<String> = (0..t.ix.len()).map(|s| slot_desc(term, occ, j, s, prev)).collect();
        let mut flip = Some(false);
        if let Some((a, b)) = t.sym_pair() {
            match descs[a].cmp(&descs[b]) {
                std::cmp::Ordering::Greater => {
                    descs.swap(a, b);
                    flip = Some(true);
                }
                std::cmp::Ordering::Equal => flip = None,
                std::cmp::Ordering::Less => {}
            }
        }
        sigs.push(format!("{:?}/{}[{}]", t.kind, t.nder, descs.join(",")));
        flips.push(flip);
    }
    (sigs, flips)
}

/// Upper bound on candidate orderings tried for one term.
const CANONICAL_BUDGET: usize = 50_000;

/// Canonical serialization: tensors are ordered by refined signatures, and
/// only ties are resolved by trying every arrangement.
fn canonical(term: &Term) -> (String, Term) {
    let occ = term.occurrences();
    let (sig0, _) = signatures(term, &occ, None);
    let (sig1, fixed) = signatures(term, &occ, Some(&sig0));
    let mut order: Vec<usize> = (0..term.t.len()).collect();
    order.sort_by(|&a, &b| sig1[a].cmp(&sig1[b]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(g) if sig1[g[0]] == sig1[i] => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let free_flips: Vec<usize> = (0..term.t.len()).filter(|&i| fixed[i].is_none()).collect();
    let base_flips: Vec<bool> = fixed.iter().map(|f| f.unwrap_or(false)).collect();
    let mut orders: Vec<Vec<usize>> = vec![Vec::new()];
    for g in &groups {
        let perms = permutations(g.len());
        let mut next = Vec::new();
        'outer: for o in &orders {
            for p in &perms {
                if next.len() >= CANONICAL_BUDGET {
                    break 'outer;
                }
                let mut q = o.clone();
                q.extend(p.iter().map(|&k| g[k]));
                next.push(q);
            }
        }
        orders = next;
    }
    let mut best: Option<(String, Term)> = None;
    let nflip = 1usize << free_flips.len().min(12);
    for o in orders.iter().take(CANONICAL_BUDGET / nflip.max(1) + 1) {
        for mask in 0..nflip {
            let mut flips = base_flips.clone();
            for (bit, &i) in free_flips.iter().enumerate().take(12) {
                flips[i] = mask >> bit & 1 == 1;
            }
            let cand = serialize(term, o, &flips);
            if best.as_ref().is_none_or(|b| cand.0 < b.0) {
                best = Some(cand);
            }
        }
    }
    best.expect("at least one ordering")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

impl NormalForm {
    fn insert(&mut self, term: Term) {
        let (key, canon) = canonical(&term);
        let entry = self.terms.entry(key.clone()).or_insert_with(|| Term { c: Cq::zero(), ..canon });
        entry.c += term.c;
        if entry.c.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.terms.values()
    }

    /// Back to a polynomial, with summed indices renamed apart from every other term.
    pub fn to_poly(&self) -> NCPoly {
        let terms = self
            .terms
            .values()
            .map(|t| {
                let mut t = t.clone();
                t.refresh();
                t
            })
            .collect();
        NCPoly { terms }
    }

    /// `self − other`, normalized.
    pub fn sub(&self, other: &NormalForm) -> NormalForm {
        let mut out = self.clone();
        for t in other.terms.values() {
            out.insert(t.clone().with_scale(-Cq::one()));
        }
        out
    }

    /// Terms that still carry a Christoffel factor.
    pub fn without_christoffel(&self) -> NormalForm {
        NormalForm {
            terms: self
                .terms
                .iter()
                .filter(|(_, t)| t.t.iter().all(|x| !matches!(x.kind, TKind::Chr | TKind::ChrTr | TKind::ChrTrLow)))
                .map(|(k, t)| (k.clone(), t.clone()))
                .collect(),
        }
    }
}

fn fmt_ix(ixs: &[Ix]) -> (String, String) {
    let mut up = String::new();
    let mut lo = String::new();
    for ix in ixs {
        if ix.up {
            up.push_str(&ix.name);
        } else {
            lo.push_str(&ix.name);
        }
    }
    (up, lo)
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = &self.ix[..self.ix.len() - self.nder];
        for d in &self.ix[self.ix.len() - self.nder..] {
            write!(f, "∂_{}", d.name)?;
        }
        let sym = match self.kind {
            TKind::Metric => "g",
            TKind::Delta => "δ",
            TKind::Chr | TKind::ChrTr | TKind::ChrTrLow => "Γ",
        };
        let (up, lo) = fmt_ix(body);
        write!(f, "{sym}")?;
        if !up.is_empty() {
            write!(f, "^{{{up}}}")?;
        }
        if !lo.is_empty() {
            write!(f, "_{{{lo}}}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.ix[..self.nder()] {
            write!(f, "∂_{}", d.name)?;
        }
        let ix = &self.ix[self.nder()];
        let sym = match self.base {
            Base::Gamma => "γ",
            Base::X => "X",
            Base::OmegaS => "ωS",
        };
        if ix.up {
            write!(f, "{sym}^{}", ix.name)
        } else {
            write!(f, "{sym}_{}", ix.name)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.c)?;
        for t in &self.t {
            write!(f, " {t}")?;
        }
        for l in &self.w {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.values().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
