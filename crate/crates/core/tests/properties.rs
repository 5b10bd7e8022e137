//! Algebraic invariants of the symbolic layers, fuzzed.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tncg::clifford::{monomial_product, CliffordElt, CliffordTag, Sign};
use tncg::grassmann::GrassmannExpr;
use tncg::{sandwich_antilinear, AntilinearOp, Assignment, Cq, Deriv, MatDiffOp, SymExpr, SymMatrix};

/// Atoms used to build random expressions; none carries a derivative, so
/// two further derivatives stay inside the 2-jet.
fn atom(k: u8) -> SymExpr {
    match k % 6 {
        0 => SymExpr::sym("u"),
        1 => SymExpr::sym("u").conj(),
        2 => SymExpr::real("v"),
        3 => SymExpr::sym("w"),
        4 => SymExpr::phase("t"),
        _ => SymExpr::phase("t").conj(),
    }
}

/// A sum of monomials `(re + i·im)·Π atoms`.
fn expr_strategy() -> impl Strategy<Value = SymExpr> {
    prop::collection::vec((-3i128..=3, -3i128..=3, prop::collection::vec(any::<u8>(), 0..3)), 1..4).prop_map(|terms| {
        terms.into_iter().fold(SymExpr::zero(), |acc, (re, im, atoms)| {
            let m = atoms.iter().fold(SymExpr::constant(Cq::new(re, im)), |p, k| &p * &atom(*k));
            &acc + &m
        })
    })
}

fn op_strategy() -> impl Strategy<Value = MatDiffOp> {
    prop::collection::vec(expr_strategy(), 8).prop_map(|e| {
        let m0 = SymMatrix::from_rows(2, e[..4].to_vec());
        let m1 = SymMatrix::from_rows(2, e[4..].to_vec());
        MatDiffOp::from_coeffs(2, [(Deriv::NONE, m0), (Deriv::single(1), m1)])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_commute(a in expr_strategy(), b in expr_strategy()) {
        prop_assert!((&(&a * &b) - &(&b * &a)).is_zero());
    }

    #[test]
    fn mixed_partials_commute(e in expr_strategy(), mu in 0usize..4, nu in 0usize..4) {
        let l = e.derive(mu).and_then(|x| x.derive(nu)).unwrap();
        let r = e.derive(nu).and_then(|x| x.derive(mu)).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn evaluation_respects_normal_form(a in expr_strategy(), b in expr_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let prod = &(&a + &b) * &a;
        let mut asg = Assignment::new();
        asg.cover(&[&a, &b], &mut rng);
        let (va, vb) = (a.eval(&asg).unwrap(), b.eval(&asg).unwrap());
        let got = prod.eval(&asg).unwrap();
        prop_assert!((got - (va + vb) * va).norm() < 1e-9 * (1.0 + got.norm()));
    }

    #[test]
    fn adjoint_is_an_involutive_antihomomorphism(a in op_strategy(), b in op_strategy()) {
        let ab = a.compose(&b).unwrap();
        let lhs = ab.formal_adjoint().unwrap();
        let rhs = b.formal_adjoint().unwrap().compose(&a.formal_adjoint().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.formal_adjoint().unwrap().formal_adjoint().unwrap(), a);
    }

    #[test]
    fn antilinear_sandwich_is_multiplicative(a in op_strategy(), b in op_strategy(), k in 0usize..3) {
        let (o, z, i) = (SymExpr::one(), SymExpr::zero(), SymExpr::i());
        let m = match k {
            0 => SymMatrix::identity(2),
            1 => SymMatrix::from_rows(2, vec![z.clone(), o.clone(), -&o, z]),
            _ => SymMatrix::from_rows(2, vec![z.clone(), -&i, i, z]),
        };
        let j = AntilinearOp::new(m).unwrap();
        let whole = sandwich_antilinear(&j, &a.compose(&b).unwrap()).unwrap();
        let parts = sandwich_antilinear(&j, &a).unwrap().compose(&sandwich_antilinear(&j, &b).unwrap()).unwrap();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn clifford_product_is_associative(n in 1u32..=8, x in any::<u32>(), y in any::<u32>(), z in any::<u32>(), minus in any::<bool>()) {
        let sign = if minus { Sign::Minus } else { Sign::Plus };
        let mask = (1u32 << n) - 1;
        let (x, y, z) = (x & mask, y & mask, z & mask);
        let (s1, xy) = monomial_product(x, y, sign);
        let (s2, l) = monomial_product(xy, z, sign);
        let (t1, yz) = monomial_product(y, z, sign);
        let (t2, r) = monomial_product(x, yz, sign);
        prop_assert_eq!((s1 * s2, l), (t1 * t2, r));
    }

    #[test]
    fn grassmann_product_is_associative_and_graded(
        xs in prop::collection::vec((0u8..4, any::<bool>()), 3),
    ) {
        let g = |(k, odd): (u8, bool)| GrassmannExpr::gen(&format!("{}{k}", if odd { "th" } else { "x" }), odd);
        let (a, b, c) = (g(xs[0]), g(xs[1]), g(xs[2]));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        let sign = if xs[0].1 && xs[1].1 { -Cq::one() } else { Cq::one() };
        prop_assert_eq!(a.mul(&b), b.mul(&a).scale_c(sign));
        if xs[0].1 {
            prop_assert!(a.mul(&a).is_zero());
        }
    }
}

/// `Φ(e_i) = e_{n+1}e_i` reproduces the products of `Cl⁻_n` inside the
/// even part of `Cl±_{n+1}`, on every pair of basis monomials.
#[test]
fn even_part_carries_the_negative_signature() {
    for n in 1..=4u32 {
        for sign in [Sign::Plus, Sign::Minus] {
            let big = CliffordTag::new(n + 1, sign, false).unwrap();
            let small = CliffordTag::new(n, Sign::Minus, false).unwrap();
            let last = CliffordElt::generator(big, n + 1).unwrap();
            let phi = |mask: u32| -> CliffordElt {
                (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).fold(CliffordElt::one(big), |acc, i| {
                    acc.mul(&last.mul(&CliffordElt::generator(big, i).unwrap()).unwrap()).unwrap()
                })
            };
            for a in small.basis() {
                for b in small.basis() {
                    let (s, c) = monomial_product(a, b, Sign::Minus);
                    let lhs = phi(a).mul(&phi(b)).unwrap();
                    let rhs = phi(c).scale(Cq::from(s)).unwrap();
                    assert_eq!(lhs, rhs, "n = {n}, {sign:?}, e_{a:b}·e_{b:b}");
                    let (_, odd) = lhs.split_parity();
                    assert!(odd.is_zero());
                }
            }
        }
    }
}
