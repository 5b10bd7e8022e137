//! Lorentz boosts in the Dirac representation, checked numerically.
//!
//! `S = diag(Λ₊, Λ₋)`, `Λ± = exp(±a·σ)`, `a = b/2`. Exact arithmetic is out of
//! reach here (cosh and sinh), so every statement carries a tolerance.

use crate::gammarep::{charge_conjugation, euclidean_gammas, pauli};
use crate::operator::SymMatrix;
use crate::report::{Check, Report};
use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;
use twofloat::TwoFloat;

pub type C2 = Matrix2<Complex64>;
pub type C4 = Matrix4<Complex64>;

/// Base tolerance for matrix identities.
pub const BOOST_TOL: f64 = 1e-10;
/// Tolerance for `Λ_e² − Λ_o² = I`.
pub const HYPERBOLIC_TOL: f64 = 1e-12;
/// Default cap on the rapidity of random boosts.
pub const MAX_RAPIDITY: f64 = 5.0;

#[derive(Debug, Error, PartialEq)]
pub enum BoostError {
    #[error("boost parameter must be finite, got {0:?}")]
    NotFinite([f64; 3]),
}

/// Boost parameter `b ∈ ℝ³`; the rapidity is `|b|/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoostParams {
    b: [f64; 3],
}

impl BoostParams {
    pub fn new(b: [f64; 3]) -> Result<Self, BoostError> {
        if b.iter().all(|x| x.is_finite()) {
            Ok(BoostParams { b })
        } else {
            Err(BoostError::NotFinite(b))
        }
    }

    /// Rapidity `r` along the unit vector `n` (normalized here).
    pub fn along(n: [f64; 3], rapidity: f64) -> Result<Self, BoostError> {
        let len = n.iter().map(|x| x * x).sum::<f64>().sqrt();
        BoostParams::new(n.map(|x| 2.0 * rapidity * x / len))
    }

    pub fn b(&self) -> [f64; 3] {
        self.b
    }

    /// `|a| = |b|/2`.
    pub fn rapidity(&self) -> f64 {
        0.5 * self.b.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Unit direction, `None` for the trivial boost.
    pub fn direction(&self) -> Option<[f64; 3]> {
        let r = self.rapidity();
        (r > 0.0).then(|| self.b.map(|x| 0.5 * x / r))
    }

    /// Identity tolerance, widened once entries reach `e^{|b|}` beyond `e^{10}`.
    pub fn tolerance(&self) -> f64 {
        let growth = (2.0 * self.rapidity() - 10.0).max(0.0).exp();
        BOOST_TOL * growth
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Numeric copy of a constant symbolic matrix.
pub fn numeric4(m: &SymMatrix) -> C4 {
    C4::from_fn(|i, j| m.get(i, j).as_constant().expect("constant matrix").to_c64())
}

fn numeric2(m: &SymMatrix) -> C2 {
    C2::from_fn(|i, j| m.get(i, j).as_constant().expect("constant matrix").to_c64())
}

/// `n·σ`.
fn n_dot_sigma(n: [f64; 3]) -> C2 {
    (1..=3).fold(C2::zeros(), |acc, k| acc + numeric2(&pauli(k)) * c(n[k - 1]))
}

/// Even and odd parts `(cosh|a| I, sinh|a| n·σ)`.
pub fn lambda_parts(p: &BoostParams) -> (C2, C2) {
    let r = p.rapidity();
    let even = C2::identity() * c(r.cosh());
    let odd = p.direction().map_or_else(C2::zeros, |n| n_dot_sigma(n) * c(r.sinh()));
    (even, odd)
}

/// `(Λ₊, Λ₋)`.
pub fn lambdas(p: &BoostParams) -> (C2, C2) {
    let (e, o) = lambda_parts(p);
    (e + o, e - o)
}

fn block_diag(a: &C2, b: &C2) -> C4 {
    let mut m = C4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
    m
}

/// `S[Λ] = diag(Λ₊, Λ₋)`.
pub fn boost_matrix(p: &BoostParams) -> C4 {
    let (lp, lm) = lambdas(p);
    block_diag(&lp, &lm)
}

/// `S⁻¹ = diag(Λ₋, Λ₊)`, from the closed form.
pub fn boost_inverse(p: &BoostParams) -> C4 {
    let (lp, lm) = lambdas(p);
    block_diag(&lm, &lp)
}

/// `R = γ⁰` as a numeric matrix.
pub fn gamma0() -> C4 {
    numeric4(&euclidean_gammas().gamma[0])
}

/// `ρ(S) = γ⁰ S γ⁰`.
pub fn rho(s: &C4) -> C4 {
    let g0 = gamma0();
    g0 * s * g0
}

/// Matrix part `C` of `𝒥 = C∘cc`.
pub fn j_matrix() -> C4 {
    numeric4(charge_conjugation().matrix())
}

fn apply_j(jm: &C4, v: &Vector4<Complex64>) -> Vector4<Complex64> {
    jm * v.map(|z| z.conj())
}

/// Largest `‖(𝒥S − S⁻¹𝒥)ψ‖ / ‖ψ‖` over random spinors `ψ`, together with
/// the operator-level defect `‖C S̄ − S⁻¹ C‖`.
pub fn jboost_defect<R: Rng>(p: &BoostParams, rng: &mut R, probes: usize) -> (f64, f64) {
    let s = boost_matrix(p);
    let si = boost_inverse(p);
    let jm = j_matrix();
    let op = (jm * s.map(|z| z.conj()) - si * jm).norm();
    let mut worst: f64 = 0.0;
    for _ in 0..probes {
        let psi = Vector4::from_fn(|_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let lhs = apply_j(&jm, &(s * psi));
        let rhs = si * apply_j(&jm, &psi);
        worst = worst.max((lhs - rhs).norm() / psi.norm());
    }
    (worst, op)
}

/// Defects of the ρ-product statements for one boost.
#[derive(Clone, Copy, Debug)]
pub struct RhoDefects {
    /// `‖S†γ⁰S − γ⁰‖`.
    pub krein: f64,
    /// `‖(S⁻¹)†γ⁰S⁻¹ − γ⁰‖`.
    pub krein_inverse: f64,
    /// `‖ρ(S) − S⁻¹‖`.
    pub rho_is_inverse: f64,
    /// `‖S S⁻¹ − I‖`.
    pub inverse: f64,
    /// `‖S†S − I‖`, positive for any nontrivial boost.
    pub non_unitarity: f64,
}

pub fn rho_defects(p: &BoostParams) -> RhoDefects {
    let s = boost_matrix(p);
    let si = boost_inverse(p);
    let g0 = gamma0();
    RhoDefects {
        krein: (s.adjoint() * g0 * s - g0).norm(),
        krein_inverse: (si.adjoint() * g0 * si - g0).norm(),
        rho_is_inverse: (rho(&s) - si).norm(),
        inverse: (s * si - C4::identity()).norm(),
        non_unitarity: (s.adjoint() * s - C4::identity()).norm(),
    }
}

/// `‖Λ_e² − Λ_o² − I‖` in double precision. Cancellation leaves about
/// `cosh²|a|·ε`, roughly `1e−12` at rapidity 5.
pub fn hyperbolic_defect_f64(p: &BoostParams) -> f64 {
    let (e, o) = lambda_parts(p);
    (e * e - o * o - C2::identity()).norm()
}

#[derive(Clone, Copy)]
struct Dc(TwoFloat, TwoFloat);

impl Dc {
    fn mul(self, o: Dc) -> Dc {
        Dc(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn add(self, o: Dc) -> Dc {
        Dc(self.0 + o.0, self.1 + o.1)
    }
}

/// Quotient with one correction step; twofloat's own division stops near
/// `f64` accuracy.
fn dd_div(x: TwoFloat, y: TwoFloat) -> TwoFloat {
    let q = x / y;
    q + (x - q * y) / y
}

/// `(cosh|a|, sinh|a|, n·σ)` in double-double arithmetic from the `f64`
/// parameter `b`; `None` for the trivial boost.
fn dd_parts(p: &BoostParams) -> Option<(TwoFloat, TwoFloat, [[Dc; 2]; 2])> {
    let zero = TwoFloat::from(0.0);
    let b = p.b.map(TwoFloat::from);
    let len = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    if len == zero {
        return None;
    }
    let n = b.map(|x| dd_div(x, len));
    let e = (len / 2.0).exp();
    let ei = dd_div(TwoFloat::from(1.0), e);
    let m = [[Dc(n[2], zero), Dc(n[0], -n[1])], [Dc(n[0], n[1]), Dc(-n[2], zero)]];
    Some(((e + ei) / 2.0, (e - ei) / 2.0, m))
}

/// `‖Λ_e² − Λ_o² − I‖` evaluated in double-double arithmetic.
pub fn hyperbolic_defect(p: &BoostParams) -> f64 {
    let Some((ch, sh, m)) = dd_parts(p) else { return 0.0 };
    let (one, zero) = (TwoFloat::from(1.0), TwoFloat::from(0.0));
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let sq = m[i][0].mul(m[0][j]).add(m[i][1].mul(m[1][j]));
            let diag = if i == j { ch * ch - one } else { zero };
            let (re, im) = (diag - sh * sh * sq.0, -(sh * sh * sq.1));
            worst = worst.max(f64::from(re).hypot(f64::from(im)));
        }
    }
    worst
}

/// Largest entry gap between the `f64` parts `(Λ_e, Λ_o)` and their
/// double-double counterparts, relative to `cosh|a|`.
pub fn parts_agreement(p: &BoostParams) -> f64 {
    let (e, o) = lambda_parts(p);
    let Some((ch, sh, m)) = dd_parts(p) else { return (e - C2::identity()).norm() + o.norm() };
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let de = if i == j { f64::from(ch - e[(i, j)].re) } else { e[(i, j)].norm() };
            let od = m[i][j];
            let (re, im) = (f64::from(sh * od.0 - o[(i, j)].re), f64::from(sh * od.1 - o[(i, j)].im));
            worst = worst.max(de.abs()).max(re.hypot(im));
        }
    }
    worst / f64::from(ch)
}

/// Distance of `Λ±` from the matrix exponential of `±a·σ`.
pub fn exponential_defect(p: &BoostParams) -> f64 {
    let a = n_dot_sigma(p.b.map(|x| 0.5 * x));
    let (lp, lm) = lambdas(p);
    let scale = p.rapidity().cosh();
    ((lp - a.exp()).norm() + (lm - (-a).exp()).norm()) / scale
}

/// Boost of uniform direction and rapidity in `[0, max_rapidity]`.
pub fn random_boost<R: Rng>(rng: &mut R, max_rapidity: f64) -> BoostParams {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    let r = rng.random_range(0.0..=max_rapidity);
    BoostParams::along([s * phi.cos(), s * phi.sin(), z], r).expect("finite direction")
}

/// Worst defects over a batch of random boosts.
#[derive(Clone, Copy, Debug, Default)]
pub struct BoostSummary {
    pub trials: usize,
    pub jboost: f64,
    pub jboost_operator: f64,
    pub krein: f64,
    pub krein_inverse: f64,
    pub rho_is_inverse: f64,
    pub hyperbolic: f64,
    pub hyperbolic_f64: f64,
    pub exponential: f64,
    pub parts: f64,
    /// Smallest `‖S†S − I‖` among boosts with rapidity above `1e−3`.
    pub min_non_unitarity: f64,
}

pub fn run_trials(seed: u64, trials: usize, max_rapidity: f64) -> BoostSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BoostSummary { trials, min_non_unitarity: f64::INFINITY, ..Default::default() };
    for _ in 0..trials {
        let p = random_boost(&mut rng, max_rapidity);
        let tol_scale = BOOST_TOL / p.tolerance();
        let (j, jop) = jboost_defect(&p, &mut rng, 4);
        let d = rho_defects(&p);
        out.jboost = out.jboost.max(j * tol_scale);
        out.jboost_operator = out.jboost_operator.max(jop * tol_scale);
        out.krein = out.krein.max(d.krein * tol_scale);
        out.krein_inverse = out.krein_inverse.max(d.krein_inverse * tol_scale);
        out.rho_is_inverse = out.rho_is_inverse.max(d.rho_is_inverse * tol_scale);
        out.hyperbolic = out.hyperbolic.max(hyperbolic_defect(&p));
        out.hyperbolic_f64 = out.hyperbolic_f64.max(hyperbolic_defect_f64(&p));
        out.exponential = out.exponential.max(exponential_defect(&p));
        out.parts = out.parts.max(parts_agreement(&p));
        if p.rapidity() > 1e-3 {
            out.min_non_unitarity = out.min_non_unitarity.min(d.non_unitarity);
        }
    }
    out
}

fn below(anchor: &str, value: f64, tol: f64) -> Check {
    Check::from_bool(anchor, value < tol, format!("max {value:.3e} (tol {tol:.0e})"))
}

/// Report over `trials` seeded random boosts with rapidity at most `max_rapidity`.
pub fn boost_report(seed: u64, trials: usize, max_rapidity: f64) -> Report {
    let s = run_trials(seed, trials, max_rapidity);
    let mut r = Report::new("boost");
    r.push(Check::from_bool("random boosts sampled", s.trials > 0, format!("{} trials, seed {seed}", s.trials)));
    r.push(below("boosts twist-commute with the real structure", s.jboost, BOOST_TOL));
    r.push(below("𝒥S = S⁻¹𝒥 at operator level", s.jboost_operator, BOOST_TOL));
    r.push(below("ρ(S) = γ⁰Sγ⁰ = S⁻¹", s.rho_is_inverse, BOOST_TOL));
    r.push(below("ρ-product invariant under boosts (S†γ⁰S = γ⁰)", s.krein, BOOST_TOL));
    r.push(below("fermionic action boost invariant ((S⁻¹)†γ⁰S⁻¹ = γ⁰)", s.krein_inverse, BOOST_TOL));
    r.push(Check::from_bool(
        "even/odd split: Λ_e² − Λ_o² = I",
        s.hyperbolic < HYPERBOLIC_TOL,
        format!("max {:.3e} in double-double, {:.3e} in f64 (tol {HYPERBOLIC_TOL:.0e})", s.hyperbolic, s.hyperbolic_f64),
    ));
    r.push(below("Λ± = exp(±a·σ)", s.exponential, 1e-12));
    r.push(below("f64 parts agree with the double-double parts", s.parts, 1e-14));
    let nontrivial = s.min_non_unitarity.is_finite();
    r.push(Check::from_bool(
        "nontrivial boosts are not unitary",
        !nontrivial || s.min_non_unitarity > 1e-6,
        if nontrivial {
            format!("min ‖S†S − I‖ = {:.3e}", s.min_non_unitarity)
        } else {
            "no nontrivial boost drawn".into()
        },
    ));
    r
}
