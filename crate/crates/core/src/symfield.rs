//! Commutative polynomial algebra of formal smooth fields on a 4-manifold.
//!
//! An expression is a finite sum of exact Gaussian-rational coefficients
//! times monomials in atoms. An atom is a field symbol, its complex
//! conjugate, or a formal partial derivative of either (jet order at most
//! two), or a unitary phase `exp(iθ)` of a real symbol `θ`. Phases may carry
//! negative exponents so that `exp(iθ)·exp(-iθ)` normalizes to one.
//!
//! Expressions are kept in normal form at all times: terms live in an
//! ordered map keyed by sorted monomials and zero coefficients are dropped.

use crate::coeff::Cq;
use num_complex::Complex64;
use rand::Rng;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

/// Number of coordinate directions.
pub const DIM: usize = 4;

/// Highest derivative order an atom may carry.
pub const MAX_ORDER: usize = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("derivative order overflow: {0} would need a third derivative")]
    OrderOverflow(String),
    #[error("missing value for atom {0}")]
    MissingAtom(String),
    #[error("cannot substitute into the phase of {0}")]
    PhaseSubstitution(String),
}

/// Sorted multi-index of partial derivatives, `|α| ≤ 2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Deriv {
    len: u8,
    idx: [u8; 2],
}

impl Deriv {
    pub const NONE: Deriv = Deriv { len: 0, idx: [0, 0] };

    pub fn single(mu: usize) -> Deriv {
        assert!(mu < DIM, "direction {mu} out of range");
        Deriv { len: 1, idx: [mu as u8, 0] }
    }

    pub fn pair(mu: usize, nu: usize) -> Deriv {
        assert!(mu < DIM && nu < DIM, "direction out of range");
        let (a, b) = if mu <= nu { (mu, nu) } else { (nu, mu) };
        Deriv { len: 2, idx: [a as u8, b as u8] }
    }

    /// Builds a multi-index from an unsorted slice; `None` past order two.
    pub fn from_slice(ix: &[usize]) -> Option<Deriv> {
        match ix {
            [] => Some(Deriv::NONE),
            [m] => Some(Deriv::single(*m)),
            [m, n] => Some(Deriv::pair(*m, *n)),
            _ => None,
        }
    }

    pub fn indices(&self) -> &[u8] {
        &self.idx[..self.len as usize]
    }

    pub fn order(&self) -> usize {
        self.len as usize
    }

    /// Adds one more derivative direction.
    pub fn push(self, mu: usize) -> Option<Deriv> {
        match self.len {
            0 => Some(Deriv::single(mu)),
            1 => Some(Deriv::pair(self.idx[0] as usize, mu)),
            _ => None,
        }
    }

    /// Sum of two multi-indices.
    pub fn combine(self, other: Deriv) -> Option<Deriv> {
        let mut out = self;
        for &m in other.indices() {
            out = out.push(m as usize)?;
        }
        Some(out)
    }

    /// All multi-indices of order at most two, ascending.
    pub fn all() -> Vec<Deriv> {
        let mut v = vec![Deriv::NONE];
        v.extend((0..DIM).map(Deriv::single));
        for m in 0..DIM {
            for n in m..DIM {
                v.push(Deriv::pair(m, n));
            }
        }
        v.sort();
        v
    }

    /// Compact label such as `d01`; empty for no derivative.
    pub fn label(&self) -> String {
        if self.len == 0 {
            return String::new();
        }
        let mut s = String::from("d");
        for i in self.indices() {
            s.push(char::from(b'0' + i));
        }
        s
    }

    /// Number of distinct orderings of the multi-index (1 or 2).
    pub fn multiplicity(&self) -> usize {
        if self.len == 2 && self.idx[0] != self.idx[1] {
            2
        } else {
            1
        }
    }
}

impl Ord for Deriv {
    fn cmp(&self, other: &Self) -> Ordering {
        self.indices().cmp(other.indices())
    }
}

impl PartialOrd for Deriv {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A named scalar field, real or complex valued.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Symbol {
    pub name: Arc<str>,
    pub real: bool,
}

impl Symbol {
    pub fn complex(name: &str) -> Symbol {
        Symbol { name: Arc::from(name), real: false }
    }

    pub fn real(name: &str) -> Symbol {
        Symbol { name: Arc::from(name), real: true }
    }

    pub fn expr(&self) -> SymExpr {
        SymExpr::atom(self.atom())
    }

    /// `∂_μ` of the field.
    pub fn d(&self, mu: usize) -> SymExpr {
        SymExpr::atom(Atom { deriv: Deriv::single(mu), ..self.atom() })
    }

    pub fn atom(&self) -> Atom {
        Atom { name: self.name.clone(), conj: false, deriv: Deriv::NONE, real: self.real, phase: false }
    }
}

/// Building block of monomials.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Atom {
    pub name: Arc<str>,
    pub conj: bool,
    pub deriv: Deriv,
    pub real: bool,
    pub phase: bool,
}

impl Atom {
    pub fn symbol(&self) -> Symbol {
        Symbol { name: self.name.clone(), real: self.real }
    }

    /// The unconjugated field atom that carries this atom's value.
    pub fn base(&self) -> Atom {
        Atom { conj: false, phase: false, ..self.clone() }
    }

    fn conjugated(&self) -> Atom {
        if self.real || self.phase {
            self.clone()
        } else {
            Atom { conj: !self.conj, ..self.clone() }
        }
    }
}

impl Ord for Atom {
    fn cmp(&self, o: &Self) -> Ordering {
        (&*self.name, self.conj, self.deriv, self.real, self.phase).cmp(&(&*o.name, o.conj, o.deriv, o.real, o.phase))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase {
            return write!(f, "exp[i*{}]", self.name);
        }
        let mut core = self.name.to_string();
        if self.conj {
            core = format!("conj[{core}]");
        }
        if self.deriv.order() > 0 {
            core = format!("{}[{core}]", self.deriv.label());
        }
        f.write_str(&core)
    }
}

/// Sorted product of atoms with nonzero integer exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct Mono(Vec<(Atom, i32)>);

impl Mono {
    pub fn one() -> Mono {
        Mono(Vec::new())
    }

    pub fn factors(&self) -> &[(Atom, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, o: &Mono) -> Mono {
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            match self.0[i].0.cmp(&o.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(o.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let e = self.0[i].1 + o.0[j].1;
                    if e != 0 {
                        out.push((self.0[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        Mono(out)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (a, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Normalized symbolic scalar field expression.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct SymExpr {
    terms: BTreeMap<Mono, Cq>,
}

impl SymExpr {
    pub fn zero() -> SymExpr {
        SymExpr::default()
    }

    pub fn one() -> SymExpr {
        SymExpr::constant(Cq::one())
    }

    pub fn constant(c: Cq) -> SymExpr {
        SymExpr::from_terms([(Mono::one(), c)])
    }

    pub fn int(v: i128) -> SymExpr {
        SymExpr::constant(Cq::from(v))
    }

    /// The imaginary unit as an expression.
    pub fn i() -> SymExpr {
        SymExpr::constant(Cq::i())
    }

    /// Complex-valued field symbol.
    pub fn sym(name: &str) -> SymExpr {
        Symbol::complex(name).expr()
    }

    /// Real-valued field symbol.
    pub fn real(name: &str) -> SymExpr {
        Symbol::real(name).expr()
    }

    /// Unitary phase `exp(iθ)` of the real symbol `θ`.
    pub fn phase(theta: &str) -> SymExpr {
        SymExpr::phase_pow(theta, 1)
    }

    /// `exp(ikθ)`.
    pub fn phase_pow(theta: &str, k: i32) -> SymExpr {
        if k == 0 {
            return SymExpr::one();
        }
        let a = Atom { name: Arc::from(theta), conj: false, deriv: Deriv::NONE, real: true, phase: true };
        SymExpr::from_terms([(Mono(vec![(a, k)]), Cq::one())])
    }

    pub fn atom(a: Atom) -> SymExpr {
        SymExpr::from_terms([(Mono(vec![(a, 1)]), Cq::one())])
    }

    /// Collects terms, merging equal monomials and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Mono, Cq)>>(it: I) -> SymExpr {
        let mut terms: BTreeMap<Mono, Cq> = BTreeMap::new();
        for (m, c) in it {
            if c.is_zero() {
                continue;
            }
            let slot = terms.entry(m).or_insert_with(Cq::zero);
            *slot += c;
        }
        terms.retain(|_, c| !c.is_zero());
        SymExpr { terms }
    }

    /// Re-collects the terms; expressions are always normal so this is a
    /// structural identity, kept for API completeness.
    pub fn normalize(&self) -> SymExpr {
        SymExpr::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), *c)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Cq)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the expression is a constant.
    pub fn as_constant(&self) -> Option<Cq> {
        match self.terms.len() {
            0 => Some(Cq::zero()),
            1 => self.terms.get(&Mono::one()).copied(),
            _ => None,
        }
    }

    pub fn scale(&self, c: Cq) -> SymExpr {
        if c.is_zero() {
            return SymExpr::zero();
        }
        SymExpr { terms: self.terms.iter().map(|(m, v)| (m.clone(), *v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> SymExpr {
        let mut out = SymExpr::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Complex conjugation: antilinear ring involution.
    pub fn conj(&self) -> SymExpr {
        SymExpr::from_terms(self.terms.iter().map(|(m, c)| {
            let mono = m.0.iter().fold(Mono::one(), |acc, (a, e)| {
                let (a2, e2) = if a.phase { (a.clone(), -*e) } else { (a.conjugated(), *e) };
                acc.mul(&Mono(vec![(a2, e2)]))
            });
            (mono, c.conj())
        }))
    }

    /// `½(e + ē)`.
    pub fn re(&self) -> SymExpr {
        (self + &self.conj()).scale(Cq::frac(1, 2))
    }

    /// `(e − ē)/(2i)`.
    pub fn im(&self) -> SymExpr {
        (self - &self.conj()).scale(Cq::from_parts(0.into(), num_rational::Ratio::new(-1, 2)))
    }

    /// Partial derivative `∂_μ`, by the Leibniz rule.
    pub fn derive(&self, mu: usize) -> Result<SymExpr, SymError> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            for (k, (a, e)) in m.0.iter().enumerate() {
                let rest = Mono(m.0.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p.clone()).collect());
                if a.phase {
                    // ∂ exp(ieθ) = ie(∂θ) exp(ieθ)
                    let dtheta = Atom { phase: false, deriv: Deriv::single(mu), ..a.clone() };
                    let mono = rest.mul(&Mono(vec![(a.clone(), *e)])).mul(&Mono(vec![(dtheta, 1)]));
                    out.push((mono, *c * Cq::new(0, *e as i128)));
                    continue;
                }
                let deriv = a.deriv.push(mu).ok_or_else(|| SymError::OrderOverflow(a.to_string()))?;
                let da = Atom { deriv, ..a.clone() };
                let mut mono = rest.mul(&Mono(vec![(da, 1)]));
                if *e > 1 {
                    mono = mono.mul(&Mono(vec![(a.clone(), *e - 1)]));
                }
                out.push((mono, *c * Cq::from(*e as i128)));
            }
        }
        Ok(SymExpr::from_terms(out))
    }

    /// Derivative along a whole multi-index.
    pub fn derive_multi(&self, d: Deriv) -> Result<SymExpr, SymError> {
        let mut e = self.clone();
        for &m in d.indices() {
            e = e.derive(m as usize)?;
        }
        Ok(e)
    }

    /// Every atom occurring in the expression.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(a, _)| a.clone())).collect()
    }

    /// Base symbols (names with reality flag) occurring anywhere.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.atoms().iter().map(Atom::symbol).collect()
    }

    /// Highest derivative order over all atoms.
    pub fn max_order(&self) -> usize {
        self.atoms().iter().map(|a| a.deriv.order()).max().unwrap_or(0)
    }

    /// True if some atom is built on the named symbol.
    pub fn mentions(&self, name: &str) -> bool {
        self.atoms().iter().any(|a| &*a.name == name)
    }

    /// Simultaneous substitution of field symbols by expressions. Derivative
    /// and conjugate atoms of a replaced symbol become the corresponding
    /// derivatives and conjugates of its replacement.
    pub fn substitute(&self, subs: &[(&str, SymExpr)]) -> Result<SymExpr, SymError> {
        let map: HashMap<&str, &SymExpr> = subs.iter().map(|(n, e)| (*n, e)).collect();
        let mut cache: HashMap<Atom, SymExpr> = HashMap::new();
        let mut out = SymExpr::zero();
        for (m, c) in &self.terms {
            let mut prod = SymExpr::constant(*c);
            for (a, e) in &m.0 {
                let Some(rep) = map.get(&*a.name) else {
                    prod = &prod * &SymExpr::from_terms([(Mono(vec![(a.clone(), *e)]), Cq::one())]);
                    continue;
                };
                if a.phase {
                    return Err(SymError::PhaseSubstitution(a.name.to_string()));
                }
                let val = match cache.get(a) {
                    Some(v) => v.clone(),
                    None => {
                        let mut v = rep.derive_multi(a.deriv)?;
                        if a.conj {
                            v = v.conj();
                        }
                        cache.insert(a.clone(), v.clone());
                        v
                    }
                };
                prod = &prod * &val.pow(*e as u32);
            }
            out += prod;
        }
        Ok(out)
    }

    /// Numeric evaluation at an assignment of atom values.
    pub fn eval(&self, asg: &Assignment) -> Result<Complex64, SymError> {
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.to_c64();
            for (a, e) in &m.0 {
                v *= asg.atom_value(a)?.powi(*e);
            }
            total += v;
        }
        Ok(total)
    }

    /// Canonical text form, e.g. `(2+0i)*d0[f]*conj[g]`.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

impl From<Cq> for SymExpr {
    fn from(c: Cq) -> Self {
        SymExpr::constant(c)
    }
}

impl Add<&SymExpr> for &SymExpr {
    type Output = SymExpr;
    fn add(self, o: &SymExpr) -> SymExpr {
        let mut out = self.clone();
        out += o.clone();
        out
    }
}

impl Add for SymExpr {
    type Output = SymExpr;
    fn add(mut self, o: SymExpr) -> SymExpr {
        self += o;
        self
    }
}

impl AddAssign for SymExpr {
    fn add_assign(&mut self, o: SymExpr) {
        for (m, c) in o.terms {
            match self.terms.get_mut(&m) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        self.terms.remove(&m);
                    }
                }
                None => {
                    self.terms.insert(m, c);
                }
            }
        }
    }
}

impl Sub<&SymExpr> for &SymExpr {
    type Output = SymExpr;
    fn sub(self, o: &SymExpr) -> SymExpr {
        self + &(-o)
    }
}

impl Sub for SymExpr {
    type Output = SymExpr;
    fn sub(self, o: SymExpr) -> SymExpr {
        self + (-o)
    }
}

impl Neg for &SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        self.scale(-Cq::one())
    }
}

impl Neg for SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        -&self
    }
}

impl Mul<&SymExpr> for &SymExpr {
    type Output = SymExpr;
    fn mul(self, o: &SymExpr) -> SymExpr {
        if self.is_zero() || o.is_zero() {
            return SymExpr::zero();
        }
        let mut acc: BTreeMap<Mono, Cq> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let slot = acc.entry(m1.mul(m2)).or_insert_with(Cq::zero);
                *slot += *c1 * *c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        SymExpr { terms: acc }
    }
}

impl Mul for SymExpr {
    type Output = SymExpr;
    fn mul(self, o: SymExpr) -> SymExpr {
        &self * &o
    }
}

/// Values for atoms. Only unconjugated field atoms are stored; conjugate
/// atoms read the conjugate of their base and phases read `exp(iθ)`.
#[derive(Clone, Debug, Default)]
pub struct Assignment {
    values: HashMap<Atom, Complex64>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    /// Sets the value of an atom's base; real symbols are forced real.
    pub fn set(&mut self, atom: &Atom, v: Complex64) {
        let base = atom.base();
        let v = if base.real { Complex64::new(v.re, 0.0) } else { v };
        self.values.insert(base, v);
    }

    pub fn get(&self, atom: &Atom) -> Option<Complex64> {
        self.values.get(&atom.base()).copied()
    }

    /// Value seen by an atom inside an expression.
    pub fn atom_value(&self, a: &Atom) -> Result<Complex64, SymError> {
        let v = self.get(a).ok_or_else(|| SymError::MissingAtom(a.to_string()))?;
        if a.phase {
            return Ok(Complex64::new(0.0, v.re).exp());
        }
        Ok(if a.conj { v.conj() } else { v })
    }

    /// Assigns random values (components in `[-1, 1]`) to the whole 2-jet
    /// of every symbol occurring in `exprs` that is not yet assigned.
    pub fn cover<R: Rng>(&mut self, exprs: &[&SymExpr], rng: &mut R) {
        let syms: BTreeSet<Symbol> = exprs.iter().flat_map(|e| e.symbols()).collect();
        for s in syms {
            self.cover_symbol(&s, rng);
        }
    }

    /// Assigns random values to the 2-jet of one symbol.
    pub fn cover_symbol<R: Rng>(&mut self, s: &Symbol, rng: &mut R) {
        for d in Deriv::all() {
            let a = Atom { deriv: d, ..s.atom() };
            if self.values.contains_key(&a) {
                continue;
            }
            let v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            self.set(&a, v);
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.values.keys().map(Atom::symbol).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f() -> Symbol {
        Symbol::complex("f")
    }
    fn g() -> Symbol {
        Symbol::complex("g")
    }

    #[test]
    fn canonical_text_form() {
        let e = (&f().d(0) * &g().expr().conj()).scale(Cq::new(2, 0));
        assert_eq!(e.canonical(), "(2+0i)*d0[f]*conj[g]");
        assert_eq!(SymExpr::zero().canonical(), "0");
        assert_eq!(SymExpr::int(3).canonical(), "(3+0i)");
    }

    #[test]
    fn leibniz_on_product() {
        let e = &f().expr() * &g().expr();
        let want = &(&f().d(0) * &g().expr()) + &(&f().expr() * &g().d(0));
        assert_eq!(e.derive(0).unwrap(), want);
        assert!(SymExpr::int(5).derive(1).unwrap().is_zero());
    }

    #[test]
    fn derivative_commutes_with_conjugation() {
        let e = f().expr().conj();
        assert_eq!(e.derive(2).unwrap(), f().d(2).conj());
    }

    #[test]
    fn third_derivative_overflows() {
        let e = f().expr().derive(0).unwrap().derive(1).unwrap();
        assert!(matches!(e.derive(2), Err(SymError::OrderOverflow(_))));
    }

    #[test]
    fn conjugation_is_antilinear_involution() {
        let e = &SymExpr::i() * &f().expr();
        assert_eq!(e.conj(), &SymExpr::constant(Cq::new(0, -1)) * &f().expr().conj());
        assert_eq!(e.conj().conj(), e);
        let r = SymExpr::real("r");
        assert_eq!(r.conj(), r);
    }

    #[test]
    fn real_part_is_self_conjugate() {
        let h = SymExpr::sym("h");
        assert_eq!(h.re().conj(), h.re());
        assert_eq!(&h.re() + &(&SymExpr::i() * &h.im()), h);
    }

    #[test]
    fn phases_cancel_and_differentiate() {
        let u = SymExpr::phase("t");
        assert_eq!(&u * &u.conj(), SymExpr::one());
        let du = u.derive(1).unwrap();
        let want = &(&SymExpr::i() * &Symbol::real("t").d(1)) * &u;
        assert_eq!(du, want);
    }

    #[test]
    fn eval_examples() {
        let mut asg = Assignment::new();
        asg.set(&f().atom(), Complex64::new(1.0, 2.0));
        let e = &f().expr() + &f().expr().conj();
        assert!((e.eval(&asg).unwrap() - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        asg.set(&f().atom(), Complex64::new(2.0, 0.0));
        asg.set(&g().atom(), Complex64::new(3.0, 0.0));
        let p = &f().expr() * &g().expr();
        assert!((p.eval(&asg).unwrap() - Complex64::new(6.0, 0.0)).norm() < 1e-15);
        assert!(matches!(SymExpr::sym("q").eval(&asg), Err(SymError::MissingAtom(_))));
    }

    #[test]
    fn substitution_follows_derivatives() {
        // f ↦ g², then ∂₀f ↦ 2g∂₀g and conj f ↦ ḡ²
        let e = &f().d(0) + &f().expr().conj();
        let s = e.substitute(&[("f", g().expr().pow(2))]).unwrap();
        let want = &(&g().expr() * &g().d(0)).scale(Cq::new(2, 0)) + &g().expr().conj().pow(2);
        assert_eq!(s, want);
    }

    #[test]
    fn cover_assigns_full_jet() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut asg = Assignment::new();
        asg.cover(&[&f().expr()], &mut rng);
        let e = f().expr().derive(0).unwrap().derive(3).unwrap();
        assert!(e.eval(&asg).is_ok());
    }
}
