//! Chiral-representation gamma matrices, Pauli matrices and charge
//! conjugation.
//!
//! Index convention: `μ ∈ {0,1,2,3}` and the chirality matrix is
//! `γ⁵ = γ¹γ²γ³γ⁰` (note the position of `γ⁰`), which equals
//! `diag(I₂, −I₂)` in the euclidean set. The euclidean blocks are
//! `σ^μ = (I, −iσ_j)` and `σ̃^μ = (I, iσ_j)` with
//! `γ^μ = [[0, σ^μ], [σ̃^μ, 0]]`; the minkowskian ones are
//! `σ_M = (I, σ_j)`, `σ̄_M = (I, −σ_j)`.

use crate::coeff::Cq;
use crate::operator::{AntilinearOp, MatDiffOp, SymMatrix};
use crate::symfield::{Deriv, DIM};

/// Metric signature of a gamma set.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Signature {
    Euclidean,
    Minkowskian,
}

/// Four gamma matrices with their 2×2 blocks and chirality matrix.
#[derive(Clone, Debug)]
pub struct GammaSet {
    pub signature: Signature,
    pub gamma: [SymMatrix; 4],
    pub gamma5: SymMatrix,
    /// Upper-right blocks (`σ^μ` or `σ^μ_M`).
    pub sigma: [SymMatrix; 4],
    /// Lower-left blocks (`σ̃^μ` or `σ̄^μ_M`).
    pub sigma_tilde: [SymMatrix; 4],
}

fn m2(a: Cq, b: Cq, c: Cq, d: Cq) -> SymMatrix {
    SymMatrix::from_cq(2, &[a, b, c, d])
}

/// Pauli matrix `σ_j` for `j ∈ {1, 2, 3}`; `σ_0 = I₂`.
pub fn pauli(j: usize) -> SymMatrix {
    let (z, o, i) = (Cq::zero(), Cq::one(), Cq::i());
    match j {
        0 => SymMatrix::identity(2),
        1 => m2(z, o, o, z),
        2 => m2(z, -i, i, z),
        3 => m2(o, z, z, -o),
        _ => panic!("Pauli index {j} out of range"),
    }
}

fn chiral(upper: &SymMatrix, lower: &SymMatrix) -> SymMatrix {
    let z = SymMatrix::zero(2);
    SymMatrix::from_blocks(&[vec![z.clone(), upper.clone()], vec![lower.clone(), z]])
}

fn assemble(signature: Signature, sigma: [SymMatrix; 4], sigma_tilde: [SymMatrix; 4]) -> GammaSet {
    let gamma: [SymMatrix; 4] = std::array::from_fn(|mu| chiral(&sigma[mu], &sigma_tilde[mu]));
    let gamma5 = gamma[1].mul(&gamma[2]).mul(&gamma[3]).mul(&gamma[0]);
    GammaSet { signature, gamma, gamma5, sigma, sigma_tilde }
}

/// Euclidean chiral set: hermitian, `{γ^μ, γ^ν} = 2δ^{μν}`.
pub fn euclidean_gammas() -> GammaSet {
    let sigma = std::array::from_fn(|mu| if mu == 0 { pauli(0) } else { pauli(mu).scale(-Cq::i()) });
    let sigma_tilde = std::array::from_fn(|mu| if mu == 0 { pauli(0) } else { pauli(mu).scale(Cq::i()) });
    assemble(Signature::Euclidean, sigma, sigma_tilde)
}

/// Minkowskian chiral set with `γ⁵_M = −iγ⁵`.
pub fn minkowski_gammas() -> GammaSet {
    let sigma = std::array::from_fn(pauli);
    let sigma_tilde = std::array::from_fn(|mu| if mu == 0 { pauli(0) } else { pauli(mu).scale(-Cq::one()) });
    assemble(Signature::Minkowskian, sigma, sigma_tilde)
}

/// Charge conjugation `𝒥 = iγ⁰γ²∘cc` on euclidean spinors.
pub fn charge_conjugation() -> AntilinearOp {
    let g = euclidean_gammas();
    AntilinearOp::new(g.gamma[0].mul(&g.gamma[2]).scale(Cq::i())).expect("constant matrix")
}

/// Flat Dirac operator `ð = −iγ^μ∂_μ` on 4-spinors.
pub fn dirac_flat() -> MatDiffOp {
    let g = euclidean_gammas();
    MatDiffOp::from_coeffs(4, (0..DIM).map(|mu| (Deriv::single(mu), g.gamma[mu].scale(-Cq::i()))))
}

/// Chirality projectors `½(I ± γ⁵)`.
pub fn chirality_projectors() -> (SymMatrix, SymMatrix) {
    let g5 = euclidean_gammas().gamma5;
    let id = SymMatrix::identity(4);
    (id.add(&g5).scale(Cq::frac(1, 2)), id.sub(&g5).scale(Cq::frac(1, 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfield::SymExpr;

    fn delta(mu: usize, nu: usize) -> i128 {
        i128::from(mu == nu)
    }

    #[test]
    fn euclidean_clifford_and_hermitian() {
        let g = euclidean_gammas();
        for mu in 0..4 {
            assert_eq!(g.gamma[mu].adjoint(), g.gamma[mu]);
            for nu in 0..4 {
                let ac = g.gamma[mu].anticommutator(&g.gamma[nu]);
                assert_eq!(ac, SymMatrix::identity(4).scale(Cq::from(2 * delta(mu, nu))));
            }
        }
    }

    #[test]
    fn gamma5_is_diagonal_and_anticommutes() {
        let g = euclidean_gammas();
        let one = SymExpr::one();
        assert_eq!(g.gamma5, SymMatrix::diag(vec![one.clone(), one.clone(), -&one, -&one]));
        for mu in 0..4 {
            assert!(g.gamma5.anticommutator(&g.gamma[mu]).is_zero());
        }
    }

    #[test]
    fn gamma0_is_offdiagonal_identity() {
        let g = euclidean_gammas();
        let want = SymMatrix::from_blocks(&[
            vec![SymMatrix::zero(2), SymMatrix::identity(2)],
            vec![SymMatrix::identity(2), SymMatrix::zero(2)],
        ]);
        assert_eq!(g.gamma[0], want);
    }

    #[test]
    fn sigma_sum_identities() {
        let g = euclidean_gammas();
        for mu in 0..4 {
            let s = g.sigma[mu].add(&g.sigma_tilde[mu]);
            assert_eq!(s, SymMatrix::identity(2).scale(Cq::from(2 * delta(mu, 0))));
            let d = g.sigma[mu].sub(&g.sigma_tilde[mu]);
            let want = if mu == 0 { SymMatrix::zero(2) } else { pauli(mu).scale(Cq::new(0, -2)) };
            assert_eq!(d, want);
        }
    }

    #[test]
    fn trace_pairing_of_blocks() {
        // Tr(σ̃^λ σ^μ) = 2δ; the plain Tr(σ^λσ^μ) is −2 on spatial indices.
        let g = euclidean_gammas();
        for l in 0..4 {
            for m in 0..4 {
                let t = g.sigma_tilde[l].mul(&g.sigma[m]).trace();
                assert_eq!(t, SymExpr::int(2 * delta(l, m)));
            }
        }
        assert_eq!(g.sigma[1].mul(&g.sigma[1]).trace(), SymExpr::int(-2));
    }

    #[test]
    fn minkowski_relations() {
        let m = minkowski_gammas();
        let e = euclidean_gammas();
        assert_eq!(m.sigma[2], pauli(2));
        assert_eq!(m.gamma5, e.gamma5.scale(-Cq::i()));
        assert_eq!(m.gamma[0].mul(&m.gamma[0]), SymMatrix::identity(4));
        for mu in 0..4 {
            for nu in 0..4 {
                let eta = if mu != nu {
                    0
                } else if mu == 0 {
                    2
                } else {
                    -2
                };
                assert_eq!(m.gamma[mu].anticommutator(&m.gamma[nu]), SymMatrix::identity(4).scale(Cq::from(eta)));
            }
        }
    }

    #[test]
    fn charge_conjugation_signs() {
        let j = charge_conjugation();
        let g = euclidean_gammas();
        assert_eq!(j.square(), SymMatrix::identity(4).scale(-Cq::one()));
        // matrix part i·diag(σ̃², σ²)
        let want = SymMatrix::block_diag(&[g.sigma_tilde[2].clone(), g.sigma[2].clone()]).scale(Cq::i());
        assert_eq!(j.matrix(), &want);
        // 𝒥 A 𝒥⁻¹ for A = γ^μ, γ⁵ and ð
        for mu in 0..4 {
            let s = crate::operator::sandwich_antilinear(&j, &MatDiffOp::mult(g.gamma[mu].clone())).unwrap();
            assert_eq!(s.as_matrix().unwrap(), g.gamma[mu].scale(-Cq::one()));
        }
        let s5 = crate::operator::sandwich_antilinear(&j, &MatDiffOp::mult(g.gamma5.clone())).unwrap();
        assert_eq!(s5.as_matrix().unwrap(), g.gamma5);
        let d = dirac_flat();
        assert_eq!(crate::operator::sandwich_antilinear(&j, &d).unwrap(), d);
    }

    #[test]
    fn projectors_split_identity() {
        let (p, m) = chirality_projectors();
        assert_eq!(p.mul(&p), p);
        assert!(p.mul(&m).is_zero());
        assert_eq!(p.add(&m), SymMatrix::identity(4));
    }

    #[test]
    fn dirac_is_formally_selfadjoint() {
        let d = dirac_flat();
        assert_eq!(d.formal_adjoint().unwrap(), d);
    }
}
