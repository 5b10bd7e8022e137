//! Built-in geometries: the flat four-manifold, the two-point space `F₂`,
//! the electrodynamics finite triple `F_ED`, their products and minimal
//! twists.

use crate::gammarep::{charge_conjugation, dirac_flat, euclidean_gammas};
use crate::operator::{AntilinearOp, SymMatrix};
use crate::symfield::SymExpr;
use crate::triple::{product_triple, FiniteTripleData, Representation, SpectralTripleData};
use crate::twist::{minimal_twist, TwistedTripleData};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("unknown model `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Twist(#[from] crate::twist::TwistError),
}

/// Names accepted by [`build`].
pub const MODEL_NAMES: [&str; 8] =
    ["manifold", "F2", "F_ED", "MxF2", "MxF_ED", "manifold-twisted", "MxF2-twisted", "MxF_ED-twisted"];

/// Mass parameter of `F_ED`.
pub const MASS: &str = "d";

fn ints(v: &[i128]) -> Vec<SymExpr> {
    v.iter().map(|&x| SymExpr::int(x)).collect()
}

fn projector(n: usize, on: &[usize]) -> SymMatrix {
    SymMatrix::diag((0..n).map(|i| SymExpr::int(i128::from(on.contains(&i)))).collect())
}

/// `(C∞(M), L²(M, S), ð; 𝒥, γ⁵)`, KO-dimension 4.
pub fn manifold() -> SpectralTripleData {
    SpectralTripleData {
        name: "manifold".into(),
        rep: Representation::new(vec!["f".into()], vec![SymMatrix::identity(4)]).expect("valid"),
        dirac: dirac_flat(),
        grading: euclidean_gammas().gamma5,
        real: charge_conjugation(),
        ko_dim: 4,
    }
}

/// Two-point space: `A = ℂ²`, `D_F = 0`, KO-dimension 6.
pub fn two_point() -> FiniteTripleData {
    FiniteTripleData {
        name: "F2".into(),
        basis: vec!["e".into(), "ebar".into()],
        rep: Representation::new(vec!["f".into(), "g".into()], vec![projector(2, &[0]), projector(2, &[1])]).expect("valid"),
        dirac: SymMatrix::zero(2),
        grading: SymMatrix::diag(ints(&[1, -1])),
        real: AntilinearOp::new(SymMatrix::from_rows(2, ints(&[0, 1, 1, 0]))).expect("constant"),
        ko_dim: 6,
    }
}

/// `D_F` of the electrodynamics triple in the basis `{e_L, e_R, ē_L, ē_R}`.
pub fn ed_dirac(d: &SymExpr) -> SymMatrix {
    let z = SymExpr::zero();
    let db = d.conj();
    SymMatrix::from_rows(
        4,
        vec![
            z.clone(),
            d.clone(),
            z.clone(),
            z.clone(),
            db.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            db,
            z.clone(),
            z.clone(),
            d.clone(),
            z,
        ],
    )
}

/// Electrodynamics finite triple, KO-dimension 6.
pub fn ed_finite() -> FiniteTripleData {
    FiniteTripleData {
        name: "F_ED".into(),
        basis: ["e_L", "e_R", "ebar_L", "ebar_R"].map(String::from).to_vec(),
        rep: Representation::new(vec!["f".into(), "g".into()], vec![projector(4, &[0, 1]), projector(4, &[2, 3])])
            .expect("valid"),
        dirac: ed_dirac(&SymExpr::sym(MASS)),
        grading: SymMatrix::diag(ints(&[1, -1, -1, 1])),
        real: AntilinearOp::new(SymMatrix::from_rows(4, ints(&[0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0])))
            .expect("constant"),
        ko_dim: 6,
    }
}

/// The same triple as [`ed_finite`], as its declarative JSON description.
pub const ED_FINITE_JSON: &str = r#"{
  "name": "F_ED",
  "ko_dim": 6,
  "basis": ["e_L", "e_R", "ebar_L", "ebar_R"],
  "slots": [{"name": "f", "diag": [1, 1, 0, 0]}, {"name": "g", "diag": [0, 0, 1, 1]}],
  "dirac": [["0", "d", "0", "0"], ["conj[d]", "0", "0", "0"], ["0", "0", "0", "conj[d]"], ["0", "0", "d", "0"]],
  "grading": [1, -1, -1, 1],
  "real": [["0", "0", "1", "0"], ["0", "0", "0", "1"], ["1", "0", "0", "0"], ["0", "1", "0", "0"]]
}"#;

pub fn manifold_x_two_point() -> SpectralTripleData {
    product_triple(&manifold(), &two_point())
}

pub fn manifold_x_ed() -> SpectralTripleData {
    product_triple(&manifold(), &ed_finite())
}

pub fn manifold_twisted() -> TwistedTripleData {
    minimal_twist(&manifold()).expect("manifold restrictions are faithful")
}

pub fn two_point_twisted() -> TwistedTripleData {
    minimal_twist(&manifold_x_two_point()).expect("faithful")
}

pub fn ed_twisted() -> TwistedTripleData {
    minimal_twist(&manifold_x_ed()).expect("faithful")
}

/// The five untwisted triples.
pub fn untwisted_models() -> Vec<SpectralTripleData> {
    vec![manifold(), two_point().as_triple(), ed_finite().as_triple(), manifold_x_two_point(), manifold_x_ed()]
}

/// The three minimally twisted triples.
pub fn twisted_models() -> Vec<TwistedTripleData> {
    vec![manifold_twisted(), two_point_twisted(), ed_twisted()]
}

/// A built model.
#[derive(Clone, Debug)]
pub enum Model {
    Plain(SpectralTripleData),
    Twisted(Box<TwistedTripleData>),
}

pub fn build(name: &str) -> Result<Model, ModelError> {
    Ok(match name {
        "manifold" => Model::Plain(manifold()),
        "F2" => Model::Plain(two_point().as_triple()),
        "F_ED" => Model::Plain(ed_finite().as_triple()),
        "MxF2" => Model::Plain(manifold_x_two_point()),
        "MxF_ED" => Model::Plain(manifold_x_ed()),
        "manifold-twisted" => Model::Twisted(Box::new(manifold_twisted())),
        "MxF2-twisted" => Model::Twisted(Box::new(two_point_twisted())),
        "MxF_ED-twisted" => Model::Twisted(Box::new(ed_twisted())),
        other => return Err(ModelError::Unknown(other.to_string())),
    })
}
pub use crate::scenario::{scenario, ScenarioReport, SCENARIOS};
