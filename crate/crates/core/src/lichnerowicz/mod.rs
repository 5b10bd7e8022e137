//! Lichnerowicz formula for the twisted-covariant Dirac operator
//! `ð_X = −iγ^μ(∂_μ + ω^X_μ)`, `ω^X_μ = ω^S_μ + X_μ`.
//!
//! The flat case is computed here on explicit matrices; the curved case is
//! rewritten symbolically in [`ncpoly`] and proved in [`lemmas`].

pub mod lemmas;
pub mod ncpoly;

use crate::coeff::Cq;
use crate::gammarep::euclidean_gammas;
use crate::operator::{MatDiffOp, OpError, SymMatrix};
use crate::report::{Check, Report};
use crate::symfield::{Deriv, SymError, SymExpr, DIM};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LichError {
    #[error("leading symbol is not −g^{{μν}}∂_μ∂_ν")]
    LeadingSymbol,
    #[error(transparent)]
    Op(#[from] OpError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Rewrite(#[from] ncpoly::NcError),
}

/// Flat-space data: spin part `ω^S_μ` and twist part `X_μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatData {
    pub omega_s: [SymMatrix; 4],
    pub x: [SymMatrix; 4],
}

impl FlatData {
    /// `ω^S_μ = s_μ·I` and `X_μ = f_μγ⁵` with complex functions `s_μ`, `f_μ`.
    pub fn generic() -> Self {
        let g5 = euclidean_gammas().gamma5;
        FlatData {
            omega_s: std::array::from_fn(|mu| SymMatrix::scalar(4, SymExpr::sym(&format!("s{mu}")))),
            x: std::array::from_fn(|mu| g5.scale_expr(&SymExpr::sym(&format!("f{mu}")))),
        }
    }

    /// `ω^S = 0`, `X_μ = f_μγ⁵`.
    pub fn twist_only() -> Self {
        FlatData { omega_s: std::array::from_fn(|_| SymMatrix::zero(4)), ..FlatData::generic() }
    }

    /// `X = 0`, `ω^S_μ = s_μ·I`.
    pub fn spin_only() -> Self {
        FlatData { x: std::array::from_fn(|_| SymMatrix::zero(4)), ..FlatData::generic() }
    }

    /// Arbitrary matrix connection `(ω^S_μ)_{ij} = w{μ}_{ij}`. Off the scalars
    /// it fails `[ω^S_μ, γ^ν] = 0`, the flat form of the spin-connection axiom.
    pub fn matrix_connection() -> Self {
        let w =
            |mu: usize| SymMatrix::from_rows(4, (0..16).map(|k| SymExpr::sym(&format!("w{mu}_{}{}", k / 4, k % 4))).collect());
        FlatData { omega_s: std::array::from_fn(w), ..FlatData::generic() }
    }

    pub fn omega_x(&self, mu: usize) -> SymMatrix {
        self.omega_s[mu].add(&self.x[mu])
    }

    /// `ð_X = −iγ^μ(∂_μ + ω^X_μ)`.
    pub fn dirac(&self) -> MatDiffOp {
        let g = euclidean_gammas();
        let mut terms = Vec::new();
        let mut zeroth = SymMatrix::zero(4);
        for mu in 0..DIM {
            let c = g.gamma[mu].scale(-Cq::i());
            zeroth = zeroth.add(&c.mul(&self.omega_x(mu)));
            terms.push((Deriv::single(mu), c));
        }
        terms.push((Deriv::NONE, zeroth));
        MatDiffOp::from_coeffs(4, terms)
    }

    /// `𝝎_X = −iγ^μω^X_μ`.
    pub fn bold_omega_x(&self) -> SymMatrix {
        gamma_contract(&|mu| self.omega_x(mu))
    }

    /// `𝐗 = −iγ^μX_μ`.
    pub fn bold_x(&self) -> SymMatrix {
        gamma_contract(&|mu| self.x[mu].clone())
    }

    /// `χ_μ = γ^νγ_μX_ν` with `g = δ`.
    pub fn chi(&self, mu: usize) -> SymMatrix {
        let g = euclidean_gammas();
        (0..DIM).fold(SymMatrix::zero(4), |acc, nu| acc.add(&g.gamma[nu].mul(&g.gamma[mu]).mul(&self.x[nu])))
    }

    /// `𝔇^X_μ A = ∂_μA + [ω^X_μ, A]`.
    pub fn covariant(&self, mu: usize, a: &SymMatrix) -> Result<SymMatrix, SymError> {
        Ok(a.derive(mu)?.add(&self.omega_x(mu).commutator(a)))
    }

    /// `F^X_{μν} = ∂_μω^X_ν − ∂_νω^X_μ + [ω^X_μ, ω^X_ν]`.
    pub fn field_strength(&self, mu: usize, nu: usize) -> Result<SymMatrix, SymError> {
        let (a, b) = (self.omega_x(mu), self.omega_x(nu));
        Ok(b.derive(mu)?.sub(&a.derive(nu)?).add(&a.commutator(&b)))
    }
}

fn gamma_contract(f: &dyn Fn(usize) -> SymMatrix) -> SymMatrix {
    let g = euclidean_gammas();
    (0..DIM).fold(SymMatrix::zero(4), |acc, mu| acc.add(&g.gamma[mu].mul(&f(mu)))).scale(-Cq::i())
}

/// `D = −(g^{μν}∂_μ∂_ν + α^ν∂_ν + β)` together with the Gilkey data
/// `∇_μ = ∂_μ + ω_μ` and `E`, so that `D = ∇*∇ − E`.
#[derive(Clone, Debug, PartialEq)]
pub struct GilkeyForm {
    pub alpha: [SymMatrix; 4],
    pub beta: SymMatrix,
    pub omega: [SymMatrix; 4],
    pub e: SymMatrix,
}

impl GilkeyForm {
    /// Flat Gilkey decomposition of a laplace-type operator.
    pub fn from_operator(d: &MatDiffOp) -> Result<Self, LichError> {
        let n = d.dim();
        for mu in 0..DIM {
            for nu in mu..DIM {
                let want = if mu == nu { SymMatrix::identity(n).scale(-Cq::one()) } else { SymMatrix::zero(n) };
                if d.coeff(Deriv::pair(mu, nu)) != want {
                    return Err(LichError::LeadingSymbol);
                }
            }
        }
        let alpha: [SymMatrix; 4] = std::array::from_fn(|nu| d.coeff(Deriv::single(nu)).scale(-Cq::one()));
        let beta = d.coeff(Deriv::NONE).scale(-Cq::one());
        let omega: [SymMatrix; 4] = std::array::from_fn(|mu| alpha[mu].scale(Cq::frac(1, 2)));
        // E = B − δ^{μν}(∂_μω_ν + ω_μω_ν)
        let mut e = beta.clone();
        for (mu, w) in omega.iter().enumerate() {
            e = e.sub(&w.derive(mu)?).sub(&w.mul(w));
        }
        Ok(GilkeyForm { alpha, beta, omega, e })
    }

    /// `∇*∇ − E = −δ^{μν}(∂_μ + ω_μ)(∂_ν + ω_ν) − E`.
    pub fn reassemble(&self) -> Result<MatDiffOp, OpError> {
        let n = self.e.dim();
        let mut out = MatDiffOp::mult(self.e.scale(-Cq::one()));
        for mu in 0..DIM {
            let nabla = MatDiffOp::partial(mu, n).add(&MatDiffOp::mult(self.omega[mu].clone()))?;
            out = out.sub(&nabla.compose(&nabla)?)?;
        }
        Ok(out)
    }
}

/// `ð_X²` in Gilkey form.
pub fn square_dirac_flat(data: &FlatData) -> Result<GilkeyForm, LichError> {
    let d = data.dirac();
    GilkeyForm::from_operator(&d.compose(&d)?)
}

/// `E = ½γ^μγ^ν(F^X_{μν} + 2𝔇^X_νX_μ + 4X_μX_ν)`.
pub fn endomorphism_flat(data: &FlatData) -> Result<SymMatrix, LichError> {
    let g = euclidean_gammas();
    let mut e = SymMatrix::zero(4);
    for mu in 0..DIM {
        for nu in 0..DIM {
            let inner = data
                .field_strength(mu, nu)?
                .add(&data.covariant(nu, &data.x[mu])?.scale(Cq::from(2)))
                .add(&data.x[mu].mul(&data.x[nu]).scale(Cq::from(4)));
            e = e.add(&g.gamma[mu].mul(&g.gamma[nu]).mul(&inner));
        }
    }
    Ok(e.scale(Cq::frac(1, 2)))
}

/// `α^ν = i(ðγ^ν) + i{𝝎_X, γ^ν}` and `β = −(ð𝝎_X) − 𝝎_X²`, with `ðγ^ν = 0`.
pub fn alpha_beta_from_definitions(data: &FlatData) -> Result<([SymMatrix; 4], SymMatrix), SymError> {
    let g = euclidean_gammas();
    let w = data.bold_omega_x();
    let alpha = std::array::from_fn(|nu| w.anticommutator(&g.gamma[nu]).scale(Cq::i()));
    // (ð𝝎_X) = −iγ^μ∂_μ𝝎_X
    let mut d_w = SymMatrix::zero(4);
    for mu in 0..DIM {
        d_w = d_w.add(&g.gamma[mu].mul(&w.derive(mu)?));
    }
    let beta = d_w.scale(Cq::i()).sub(&w.mul(&w));
    Ok((alpha, beta))
}

/// Every flat statement, evaluated on `data`.
pub fn flat_report(label: &str, data: &FlatData) -> Result<Report, LichError> {
    let mut r = Report::new(format!("lichnerowicz/flat/{label}"));
    let g = euclidean_gammas();
    let d = data.dirac();
    let sq = d.compose(&d)?;
    let gf = GilkeyForm::from_operator(&sq)?;
    r.push(Check::from_bool(format!("{label}: ∇*∇ − E reassembles ð_X²"), gf.reassemble()? == sq, "operator equality"));
    let (alpha, beta) = alpha_beta_from_definitions(data)?;
    r.push(Check::from_bool(
        format!("{label}: α, β from the squared operator match their definitions"),
        alpha == gf.alpha && beta == gf.beta,
        "α^ν = i{𝝎_X, γ^ν}, β = −(ð𝝎_X) − 𝝎_X²",
    ));
    let alpha_closed: [SymMatrix; 4] = std::array::from_fn(|nu| {
        (0..DIM).fold(data.omega_x(nu).scale(Cq::from(2)), |acc, mu| {
            acc.sub(&g.gamma[mu].mul(&g.gamma[nu]).mul(&data.x[mu]).scale(Cq::from(2)))
        })
    });
    r.push(Check::from_bool(
        format!("{label}: α^ν = 2ω^X_ν − 2γ^μγ^νX_μ"),
        alpha_closed == gf.alpha,
        "flat connection coefficients",
    ));
    let conn_ok = (0..DIM).all(|mu| gf.omega[mu] == data.omega_x(mu).sub(&data.chi(mu)));
    r.push(Check::from_bool(format!("{label}: ω_μ = ω^X_μ − χ_μ"), conn_ok, "Gilkey connection"));
    let bold = gamma_contract(&|mu| gf.omega[mu].clone());
    r.push(Check::from_bool(
        format!("{label}: 𝝎 = 𝝎_X + 2𝐗"),
        bold == data.bold_omega_x().add(&data.bold_x().scale(Cq::from(2))),
        "slashed connection",
    ));
    let e_closed = endomorphism_flat(data)?;
    let diff = gf.e.sub(&e_closed);
    r.push(Check::from_bool(
        format!("{label}: Gilkey E equals ½γ^μγ^ν(F^X_{{μν}} + 2𝔇^X_νX_μ + 4X_μX_ν)"),
        diff.is_zero(),
        if diff.is_zero() { "exact".to_string() } else { format!("first nonzero entry {}", first_nonzero(&diff)) },
    ));
    Ok(r)
}

fn first_nonzero(m: &SymMatrix) -> String {
    let n = m.dim();
    (0..n * n).find(|&k| !m.get(k / n, k % n).is_zero()).map_or_else(
        || "none".into(),
        |k| {
            let entry = m.get(k / n, k % n).to_string();
            let short: String = entry.chars().take(160).collect();
            let more = if short.len() < entry.len() { " …" } else { "" };
            format!("({}, {}) = {short}{more}", k / n, k % n)
        },
    )
}

/// Curved normal forms at `Γ = 0`, `g = δ` against the flat computation.
pub fn specialization_report(data: &FlatData) -> Result<Report, LichError> {
    let mut r = Report::new("lichnerowicz/specialization");
    let gf = square_dirac_flat(data)?;
    let pairs = [
        ("β", lemmas::beta_def()?, gf.beta.clone()),
        ("E (Gilkey route)", lemmas::endomorphism_gilkey()?, gf.e.clone()),
        ("E (closed form)", lemmas::endomorphism_closed()?, endomorphism_flat(data)?),
    ];
    for (label, curved, flat) in pairs {
        let diff = lemmas::eval_flat(&curved.normalize()?, data)?.sub(&flat);
        r.push(Check::from_bool(
            format!("flat specialization of curved {label}"),
            diff.is_zero(),
            if diff.is_zero() { "exact".to_string() } else { format!("first nonzero entry {}", first_nonzero(&diff)) },
        ));
    }
    Ok(r)
}

/// Flat routes on three data sets, the curved identities, and the specialization.
pub fn lichnerowicz_report() -> Result<Report, LichError> {
    let mut r = Report::new("lichnerowicz");
    for (label, data) in
        [("generic", FlatData::generic()), ("twist only", FlatData::twist_only()), ("spin only", FlatData::spin_only())]
    {
        r.extend(flat_report(label, &data)?);
    }
    r.extend(lemmas::curved_report()?);
    r.extend(specialization_report(&FlatData::generic())?);
    Ok(r)
}
