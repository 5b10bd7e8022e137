//! Independent numeric oracle for symbolic operator identities.
//!
//! Fields are replaced by truncated Taylor jets at a point, built from the
//! random values an [`Assignment`] gives to derivative atoms. Operators are
//! applied to random spinor jets by direct numeric differentiation and
//! multiplication, never through the symbolic composition code, so an
//! identity that holds symbolically must also hold numerically.

use crate::coeff::Cq;
use crate::grassmann::{euler_operator, GrassmannExpr};
use crate::operator::{AntilinearOp, GenOp, MatDiffOp, OpError, SymMatrix};
use crate::symfield::{Assignment, Atom, Deriv, SymError, SymExpr, Symbol, DIM};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use thiserror::Error;

/// Highest Taylor order a jet can hold.
pub const JET_ORDER: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("jet exhausted: a derivative was requested beyond the known order")]
    Exhausted,
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Op(#[from] OpError),
    #[error("oracle input: {0}")]
    Shape(String),
}

type Expo = [u8; DIM];

fn exponents() -> &'static Vec<Expo> {
    static E: OnceLock<Vec<Expo>> = OnceLock::new();
    E.get_or_init(|| {
        let mut v = Vec::new();
        for a in 0..=JET_ORDER as u8 {
            for b in 0..=JET_ORDER as u8 - a {
                for c in 0..=JET_ORDER as u8 - a - b {
                    for d in 0..=JET_ORDER as u8 - a - b - c {
                        v.push([a, b, c, d]);
                    }
                }
            }
        }
        v.sort_by_key(|e| e.iter().map(|x| *x as usize).sum::<usize>());
        v
    })
}

fn index_of(e: &Expo) -> usize {
    exponents().iter().position(|x| x == e).expect("exponent within jet order")
}

fn total(e: &Expo) -> usize {
    e.iter().map(|x| *x as usize).sum()
}

fn factorial(e: &Expo) -> f64 {
    e.iter().map(|&k| (1..=k as u32).product::<u32>() as f64).product()
}

fn expo_of(d: Deriv) -> Expo {
    let mut e = [0u8; DIM];
    for &m in d.indices() {
        e[m as usize] += 1;
    }
    e
}

/// Truncated Taylor expansion `Σ t_e (x−x₀)^e` valid up to `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    order: usize,
    t: Vec<Complex64>,
}

impl Jet {
    pub fn constant(c: Complex64) -> Jet {
        let mut t = vec![Complex64::new(0.0, 0.0); exponents().len()];
        t[0] = c;
        Jet { order: JET_ORDER, t }
    }

    pub fn zero() -> Jet {
        Jet::constant(Complex64::new(0.0, 0.0))
    }

    /// Random jet known to full order.
    pub fn random<R: Rng>(rng: &mut R) -> Jet {
        let t = exponents().iter().map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        Jet { order: JET_ORDER, t }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> Complex64 {
        self.t[0]
    }

    /// `∂^e` at the base point.
    pub fn partial_value(&self, d: Deriv) -> Result<Complex64, OracleError> {
        let e = expo_of(d);
        if total(&e) > self.order {
            return Err(OracleError::Exhausted);
        }
        Ok(self.t[index_of(&e)] * factorial(&e))
    }

    fn truncate(mut self, order: usize) -> Jet {
        for (k, e) in exponents().iter().enumerate() {
            if total(e) > order {
                self.t[k] = Complex64::new(0.0, 0.0);
            }
        }
        self.order = order;
        self
    }

    pub fn add(&self, o: &Jet) -> Jet {
        let order = self.order.min(o.order);
        Jet { order, t: self.t.iter().zip(&o.t).map(|(a, b)| a + b).collect() }.truncate(order)
    }

    pub fn scale(&self, c: Complex64) -> Jet {
        Jet { order: self.order, t: self.t.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let order = self.order.min(o.order);
        let ex = exponents();
        let mut t = vec![Complex64::new(0.0, 0.0); ex.len()];
        for (i, a) in ex.iter().enumerate() {
            if total(a) > order || self.t[i] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in ex.iter().enumerate() {
                if total(a) + total(b) > order {
                    continue;
                }
                let s = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
                t[index_of(&s)] += self.t[i] * o.t[j];
            }
        }
        Jet { order, t }
    }

    pub fn conj(&self) -> Jet {
        Jet { order: self.order, t: self.t.iter().map(|a| a.conj()).collect() }
    }

    /// `∂_μ`, lowering the known order by one.
    pub fn derive(&self, mu: usize) -> Result<Jet, OracleError> {
        if self.order == 0 {
            return Err(OracleError::Exhausted);
        }
        let ex = exponents();
        let mut t = vec![Complex64::new(0.0, 0.0); ex.len()];
        for (k, e) in ex.iter().enumerate() {
            if total(e) + 1 > self.order {
                continue;
            }
            let mut up = *e;
            up[mu] += 1;
            t[k] = self.t[index_of(&up)] * f64::from(up[mu]);
        }
        Ok(Jet { order: self.order - 1, t })
    }

    pub fn derive_multi(&self, d: Deriv) -> Result<Jet, OracleError> {
        let mut j = self.clone();
        for &m in d.indices() {
            j = j.derive(m as usize)?;
        }
        Ok(j)
    }

    /// `exp(i·self)` by the truncated power series of the nilpotent part.
    pub fn exp_i(&self) -> Jet {
        let base = (Complex64::new(0.0, 1.0) * self.t[0]).exp();
        let mut nil = self.scale(Complex64::new(0.0, 1.0));
        nil.t[0] = Complex64::new(0.0, 0.0);
        let mut acc = Jet::constant(Complex64::new(1.0, 0.0)).truncate(self.order);
        let mut pow = acc.clone();
        for k in 1..=JET_ORDER {
            pow = pow.mul(&nil).scale(Complex64::new(1.0 / k as f64, 0.0));
            acc = acc.add(&pow);
        }
        acc.scale(base)
    }

    pub fn powi(&self, k: i32) -> Jet {
        assert!(k >= 0, "negative powers are only defined for phases");
        let mut acc = Jet::constant(Complex64::new(1.0, 0.0)).truncate(self.order);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Jet of one field symbol built from the values of its 2-jet atoms.
pub fn symbol_jet(s: &Symbol, asg: &Assignment) -> Result<Jet, OracleError> {
    let mut j = Jet::zero().truncate(2);
    for d in Deriv::all() {
        let a = Atom { deriv: d, ..s.atom() };
        let v = asg.get(&a).ok_or_else(|| SymError::MissingAtom(a.to_string()))?;
        let e = expo_of(d);
        j.t[index_of(&e)] = v / factorial(&e);
    }
    Ok(j)
}

fn atom_jet(a: &Atom, asg: &Assignment) -> Result<Jet, OracleError> {
    let base = symbol_jet(&a.symbol(), asg)?;
    if a.phase {
        return Ok(base.exp_i());
    }
    let j = base.derive_multi(a.deriv)?;
    Ok(if a.conj { j.conj() } else { j })
}

/// Jet of a symbolic expression, computed by numeric jet arithmetic.
pub fn expr_jet(e: &SymExpr, asg: &Assignment) -> Result<Jet, OracleError> {
    let mut acc = Jet::zero();
    for (m, c) in e.terms() {
        let mut term = Jet::constant(c.to_c64());
        for (a, k) in m.factors() {
            let j = atom_jet(a, asg)?;
            let p = if a.phase && *k < 0 { j.conj().powi(-k) } else { j.powi(*k) };
            term = term.mul(&p);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

fn matrix_jets(m: &SymMatrix, asg: &Assignment) -> Result<Vec<Jet>, OracleError> {
    m.entries().iter().map(|e| expr_jet(e, asg)).collect()
}

/// Numeric action of a differential operator on spinor jets.
pub fn apply_op(op: &MatDiffOp, psi: &[Jet], asg: &Assignment) -> Result<Vec<Jet>, OracleError> {
    let n = op.dim();
    if psi.len() != n {
        return Err(OpError::Dimension(n, psi.len()).into());
    }
    let mut out = vec![Jet::zero(); n];
    for (d, m) in op.coeffs() {
        let mj = matrix_jets(m, asg)?;
        let dpsi: Vec<Jet> = psi.iter().map(|p| p.derive_multi(*d)).collect::<Result<_, _>>()?;
        for i in 0..n {
            for j in 0..n {
                if m.get(i, j).is_zero() {
                    continue;
                }
                out[i] = out[i].add(&mj[i * n + j].mul(&dpsi[j]));
            }
        }
    }
    Ok(out)
}

/// Numeric action of `M∘cc`.
pub fn apply_anti(j: &AntilinearOp, psi: &[Jet]) -> Vec<Jet> {
    let m = j.matrix();
    let n = m.dim();
    (0..n)
        .map(|i| {
            (0..n).fold(Jet::zero(), |acc, k| {
                let c = m.get(i, k).as_constant().expect("constant antilinear matrix");
                if c.is_zero() {
                    acc
                } else {
                    acc.add(&psi[k].conj().scale(c.to_c64()))
                }
            })
        })
        .collect()
}

/// An operator expression that can be folded symbolically or applied
/// numerically.
#[derive(Clone, Debug)]
pub enum OpTerm {
    Op(MatDiffOp),
    Anti(AntilinearOp),
    /// `Compose([A, B, C])` is `A∘B∘C`.
    Compose(Vec<OpTerm>),
    Sum(Vec<(Cq, OpTerm)>),
}

impl OpTerm {
    pub fn op(a: &MatDiffOp) -> OpTerm {
        OpTerm::Op(a.clone())
    }

    pub fn compose(parts: Vec<OpTerm>) -> OpTerm {
        OpTerm::Compose(parts)
    }

    /// `A − B`.
    pub fn diff(a: OpTerm, b: OpTerm) -> OpTerm {
        OpTerm::Sum(vec![(Cq::one(), a), (-Cq::one(), b)])
    }

    /// Symbolic value through the operator algebra.
    pub fn fold(&self) -> Result<GenOp, OpError> {
        match self {
            OpTerm::Op(a) => Ok(GenOp::Linear(a.clone())),
            OpTerm::Anti(j) => Ok(j.as_gen()),
            OpTerm::Compose(parts) => {
                let mut it = parts.iter().rev();
                let mut acc = it.next().expect("non-empty composition").fold()?;
                for p in it {
                    acc = p.fold()?.compose(&acc)?;
                }
                Ok(acc)
            }
            OpTerm::Sum(items) => {
                let mut acc: Option<GenOp> = None;
                for (c, t) in items {
                    let v = t.fold()?.scale(*c);
                    acc = Some(match acc {
                        None => v,
                        Some(a) => a.add(&v)?,
                    });
                }
                acc.ok_or(OpError::Dimension(0, 0))
            }
        }
    }

    /// Numeric action on spinor jets.
    pub fn apply(&self, psi: &[Jet], asg: &Assignment) -> Result<Vec<Jet>, OracleError> {
        match self {
            OpTerm::Op(a) => apply_op(a, psi, asg),
            OpTerm::Anti(j) => Ok(apply_anti(j, psi)),
            OpTerm::Compose(parts) => {
                let mut v = psi.to_vec();
                for p in parts.iter().rev() {
                    v = p.apply(&v, asg)?;
                }
                Ok(v)
            }
            OpTerm::Sum(items) => {
                let mut acc: Option<Vec<Jet>> = None;
                for (c, t) in items {
                    let v: Vec<Jet> = t.apply(psi, asg)?.iter().map(|j| j.scale(c.to_c64())).collect();
                    acc = Some(match acc {
                        None => v,
                        Some(a) => a.iter().zip(&v).map(|(x, y)| x.add(y)).collect(),
                    });
                }
                Ok(acc.unwrap_or_default())
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            OpTerm::Op(a) => a.dim(),
            OpTerm::Anti(j) => j.dim(),
            OpTerm::Compose(p) => p[0].dim(),
            OpTerm::Sum(p) => p[0].1.dim(),
        }
    }

    /// Every field symbol in the coefficients.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            OpTerm::Op(a) => {
                for (_, m) in a.coeffs() {
                    for e in m.entries() {
                        out.extend(e.symbols());
                    }
                }
            }
            OpTerm::Anti(_) => {}
            OpTerm::Compose(p) => p.iter().for_each(|t| t.collect_symbols(out)),
            OpTerm::Sum(p) => p.iter().for_each(|(_, t)| t.collect_symbols(out)),
        }
    }
}

impl From<GenOp> for OpTerm {
    fn from(g: GenOp) -> Self {
        match g {
            GenOp::Linear(a) => OpTerm::Op(a),
            GenOp::Anti { lin, m } => {
                OpTerm::Compose(vec![OpTerm::Op(lin), OpTerm::Anti(AntilinearOp::new(m).expect("constant antilinear matrix"))])
            }
        }
    }
}

/// Outcome of a numeric comparison.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct OracleVerdict {
    pub trials: usize,
    pub max_delta: f64,
}

impl OracleVerdict {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_delta < tol
    }
}

/// Default tolerance of the oracle.
pub const ORACLE_TOL: f64 = 1e-10;

/// Default number of random assignments.
pub const ORACLE_TRIALS: usize = 20;

/// Applies both sides to random spinor jets under random field values and
/// reports the largest absolute difference of the resulting values.
pub fn compare_ops(lhs: &OpTerm, rhs: &OpTerm, trials: usize, seed: u64) -> Result<OracleVerdict, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let syms: BTreeSet<Symbol> = lhs.symbols().union(&rhs.symbols()).cloned().collect();
    let n = lhs.dim();
    let mut max_delta: f64 = 0.0;
    for _ in 0..trials {
        let mut asg = Assignment::new();
        for s in &syms {
            asg.cover_symbol(s, &mut rng);
        }
        let psi: Vec<Jet> = (0..n).map(|_| Jet::random(&mut rng)).collect();
        let a = lhs.apply(&psi, &asg)?;
        let b = rhs.apply(&psi, &asg)?;
        for (x, y) in a.iter().zip(&b) {
            max_delta = max_delta.max((x.value() - y.value()).norm());
        }
    }
    Ok(OracleVerdict { trials, max_delta })
}

/// Compares two scalar expressions by jet evaluation at random points.
pub fn compare_exprs(lhs: &SymExpr, rhs: &SymExpr, trials: usize, seed: u64) -> Result<OracleVerdict, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_delta: f64 = 0.0;
    for _ in 0..trials {
        let mut asg = Assignment::new();
        asg.cover(&[lhs, rhs], &mut rng);
        let a = lhs.eval(&asg)?;
        let b = rhs.eval(&asg)?;
        max_delta = max_delta.max((a - b).norm());
    }
    Ok(OracleVerdict { trials, max_delta })
}

/// Numeric formal transpose `Σ_α (−∂)^α (A_αᵀ ψ)`, the operator with
/// `φᵀAψ − (Aᵀφ)ᵀψ` a total derivative.
pub fn apply_transpose(op: &MatDiffOp, psi: &[Jet], asg: &Assignment) -> Result<Vec<Jet>, OracleError> {
    let n = op.dim();
    if psi.len() != n {
        return Err(OpError::Dimension(n, psi.len()).into());
    }
    let mut out = vec![Jet::zero(); n];
    for (d, m) in op.coeffs() {
        let mj = matrix_jets(m, asg)?;
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = Jet::zero();
            for (j, p) in psi.iter().enumerate() {
                if !m.get(j, i).is_zero() {
                    acc = acc.add(&mj[j * n + i].mul(p));
                }
            }
            let mut t = acc.derive_multi(*d)?;
            if d.order() % 2 == 1 {
                t = t.scale(Complex64::new(-1.0, 0.0));
            }
            *o = o.add(&t);
        }
    }
    Ok(out)
}

/// Operator data of the bilinear form `⟨Jφ, R D ψ⟩` (`R = I` when absent),
/// i.e. `φᵀ K ψ` with `K = C† R D` for `J = C∘cc`.
#[derive(Clone, Debug)]
pub struct BilinearKernel {
    pub dirac: MatDiffOp,
    pub real: AntilinearOp,
    pub r: Option<SymMatrix>,
}

impl BilinearKernel {
    fn left(&self) -> SymMatrix {
        let c = self.real.matrix().adjoint();
        match &self.r {
            Some(r) => c.mul(r),
            None => c,
        }
    }

    /// `Kψ`, numerically.
    pub fn apply(&self, psi: &[Jet], asg: &Assignment) -> Result<Vec<Jet>, OracleError> {
        let dpsi = apply_op(&self.dirac, psi, asg)?;
        apply_op(&MatDiffOp::mult(self.left()), &dpsi, asg)
    }

    /// `Kᵗψ = Dᵗ(Lᵀψ)` with `L = C†R` constant.
    pub fn apply_transpose(&self, psi: &[Jet], asg: &Assignment) -> Result<Vec<Jet>, OracleError> {
        let lt = apply_op(&MatDiffOp::mult(self.left().transpose()), psi, asg)?;
        apply_transpose(&self.dirac, &lt, asg)
    }

    fn symbols(&self) -> BTreeSet<Symbol> {
        OpTerm::op(&self.dirac).symbols()
    }
}

/// Underived generator carried by each spinor slot (`None` for a zero slot).
fn spinor_slots(psi: &[GrassmannExpr]) -> Result<Vec<Option<(String, bool)>>, OracleError> {
    psi.iter()
        .map(|p| {
            if p.is_zero() {
                return Ok(None);
            }
            let mut terms = p.terms();
            match (terms.next(), terms.next()) {
                (Some((m, c)), None) if *c == SymExpr::one() => match m.factors() {
                    [(g, 1)] if !g.bar && g.deriv == Deriv::NONE => Ok(Some((g.name.to_string(), g.odd))),
                    _ => Err(OracleError::Shape(format!("slot {p} is not a bare generator"))),
                },
                _ => Err(OracleError::Shape(format!("slot {p} is not a bare generator"))),
            }
        })
        .collect()
}

/// Numeric value of a Grassmann expression linear in the generators, with
/// each generator replaced by the value of its jet.
fn linear_value(e: &GrassmannExpr, jets: &BTreeMap<String, Jet>, asg: &Assignment) -> Result<Complex64, OracleError> {
    let mut v = Complex64::new(0.0, 0.0);
    for (m, c) in e.terms() {
        let [(g, 1)] = m.factors() else {
            return Err(OracleError::Shape(format!("non-linear term {m:?}")));
        };
        if g.bar {
            return Err(OracleError::Shape(format!("barred generator {g}")));
        }
        let j = jets.get(&*g.name).ok_or_else(|| OracleError::Shape(format!("unknown generator {g}")))?;
        v += expr_jet(c, asg)?.value() * j.partial_value(g.deriv)?;
    }
    Ok(v)
}

/// Checks a symbolic density `𝔄(ψ, ψ)` against its operator: for every
/// generator `η`, the Euler–Lagrange derivative of the density must equal
/// `Σ_{slots of η} (Kψ ∓ Kᵗψ)` (minus for odd generators, plus for even).
/// Neither side uses integration by parts, so the density may be in any
/// form equivalent modulo total derivatives.
pub fn compare_density(
    density: &GrassmannExpr,
    kernel: &BilinearKernel,
    psi: &[GrassmannExpr],
    trials: usize,
    seed: u64,
) -> Result<OracleVerdict, OracleError> {
    let slots = spinor_slots(psi)?;
    let euler = euler_operator(density).map_err(|e| OracleError::Shape(e.to_string()))?;
    let names: BTreeSet<(String, bool)> = slots.iter().flatten().cloned().collect();
    let mut syms = kernel.symbols();
    for (_, c) in density.terms() {
        syms.extend(c.symbols());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_delta: f64 = 0.0;
    for _ in 0..trials {
        let mut asg = Assignment::new();
        for s in &syms {
            asg.cover_symbol(s, &mut rng);
        }
        let jets: BTreeMap<String, Jet> = names.iter().map(|(n, _)| (n.clone(), Jet::random(&mut rng))).collect();
        let field: Vec<Jet> = slots.iter().map(|s| s.as_ref().map_or_else(Jet::zero, |(n, _)| jets[n].clone())).collect();
        let k = kernel.apply(&field, &asg)?;
        let kt = kernel.apply_transpose(&field, &asg)?;
        for (name, odd) in &names {
            let sign = if *odd { -1.0 } else { 1.0 };
            let want = slots
                .iter()
                .enumerate()
                .filter(|(_, s)| s.as_ref().is_some_and(|(n, _)| n == name))
                .fold(Complex64::new(0.0, 0.0), |acc, (i, _)| acc + k[i].value() + kt[i].value() * sign);
            let got = match euler.iter().find(|(g, _)| &*g.name == name.as_str() && !g.bar) {
                Some((_, e)) => linear_value(e, &jets, &asg)?,
                None => Complex64::new(0.0, 0.0),
            };
            max_delta = max_delta.max((got - want).norm());
        }
    }
    Ok(OracleVerdict { trials, max_delta })
}

/// Checks `K = s·Kᵗ` numerically, the operator form of
/// `⟨Jφ, Dψ⟩ = s⟨Jψ, Dφ⟩` modulo total derivatives.
pub fn compare_transpose_symmetry(
    kernel: &BilinearKernel,
    sign: i8,
    trials: usize,
    seed: u64,
) -> Result<OracleVerdict, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let syms = kernel.symbols();
    let n = kernel.dirac.dim();
    let mut max_delta: f64 = 0.0;
    for _ in 0..trials {
        let mut asg = Assignment::new();
        for s in &syms {
            asg.cover_symbol(s, &mut rng);
        }
        let psi: Vec<Jet> = (0..n).map(|_| Jet::random(&mut rng)).collect();
        let k = kernel.apply(&psi, &asg)?;
        let kt = kernel.apply_transpose(&psi, &asg)?;
        for (a, b) in k.iter().zip(&kt) {
            max_delta = max_delta.max((a.value() - b.value() * f64::from(sign)).norm());
        }
    }
    Ok(OracleVerdict { trials, max_delta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expr_jet_agrees_with_symbolic_derivative() {
        let f = SymExpr::sym("f");
        let g = SymExpr::real("g");
        let e = &(&f * &g.conj()) + &SymExpr::phase("t").scale(Cq::new(0, 2));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut asg = Assignment::new();
        asg.cover(&[&e], &mut rng);
        let j = expr_jet(&e, &asg).unwrap();
        for mu in 0..DIM {
            let de = e.derive(mu).unwrap();
            let want = de.eval(&asg).unwrap();
            assert!((j.partial_value(Deriv::single(mu)).unwrap() - want).norm() < 1e-12);
        }
        assert!((j.value() - e.eval(&asg).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn exhausted_jets_are_reported() {
        let j = Jet::zero().truncate(0);
        assert_eq!(j.derive(0), Err(OracleError::Exhausted));
    }

    #[test]
    fn compose_matches_sequential_application() {
        let f = SymExpr::sym("f");
        let a = MatDiffOp::partial(2, 1);
        let b = MatDiffOp::mult(SymMatrix::scalar(1, f));
        let lhs = OpTerm::compose(vec![OpTerm::op(&a), OpTerm::op(&b)]);
        let rhs = OpTerm::op(&a.compose(&b).unwrap());
        let v = compare_ops(&lhs, &rhs, 10, 1).unwrap();
        assert!(v.passes(1e-12), "{v:?}");
    }
}
