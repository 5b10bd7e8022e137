use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tncg::gammarep::euclidean_gammas;
use tncg::lichnerowicz::lemmas::{self, prove_curved, CURVED_IDENTITIES};
use tncg::lichnerowicz::ncpoly::{Ix, NCPoly, NcError};
use tncg::lichnerowicz::*;
use tncg::{Cq, SymExpr, SymMatrix};

#[test]
fn flat_routes_agree_on_every_admissible_data_set() {
    for (label, data) in [("generic", FlatData::generic()), ("twist", FlatData::twist_only()), ("spin", FlatData::spin_only())] {
        let r = flat_report(label, &data).unwrap();
        let bad: Vec<_> = r.failures().map(|c| c.anchor.clone()).collect();
        assert!(bad.is_empty(), "{label}: {bad:?}");
    }
}

#[test]
fn free_dirac_squares_to_the_laplacian() {
    let zero = FlatData { omega_s: std::array::from_fn(|_| SymMatrix::zero(4)), x: std::array::from_fn(|_| SymMatrix::zero(4)) };
    let gf = square_dirac_flat(&zero).unwrap();
    assert!(gf.alpha.iter().all(SymMatrix::is_zero));
    assert!(gf.beta.is_zero());
    assert!(gf.e.is_zero());
}

#[test]
fn twist_only_endomorphism_matches_hand_computation() {
    // X_μ = f_μγ⁵, ω^S = 0: E = (Σ∂_μf_μ)γ⁵ + 2(Σf_μ²)·I
    let g5 = euclidean_gammas().gamma5;
    let f = |mu: usize| SymExpr::sym(&format!("f{mu}"));
    let div = (0..4).fold(SymExpr::zero(), |acc, mu| &acc + &f(mu).derive(mu).unwrap());
    let sq = (0..4).fold(SymExpr::zero(), |acc, mu| &acc + &(&f(mu) * &f(mu)));
    let expected = g5.scale_expr(&div).add(&SymMatrix::scalar(4, sq.scale(Cq::from(2))));
    let data = FlatData::twist_only();
    assert_eq!(square_dirac_flat(&data).unwrap().e, expected);
    assert_eq!(endomorphism_flat(&data).unwrap(), expected);
}

#[test]
fn spin_only_endomorphism_is_the_curvature_term() {
    // ω^S_μ = s_μ·I: E = ½γ^μγ^ν(∂_μs_ν − ∂_νs_μ)
    let g = euclidean_gammas();
    let s = |mu: usize| SymExpr::sym(&format!("s{mu}"));
    let mut expected = SymMatrix::zero(4);
    for mu in 0..4 {
        for nu in 0..4 {
            let fmn = &s(nu).derive(mu).unwrap() - &s(mu).derive(nu).unwrap();
            expected = expected.add(&g.gamma[mu].mul(&g.gamma[nu]).scale_expr(&fmn));
        }
    }
    let expected = expected.scale(Cq::frac(1, 2));
    assert_eq!(square_dirac_flat(&FlatData::spin_only()).unwrap().e, expected);
}

#[test]
fn non_scalar_connection_breaks_the_closed_form() {
    let r = flat_report("matrix", &FlatData::matrix_connection()).unwrap();
    let failed: Vec<_> = r.failures().map(|c| c.anchor.clone()).collect();
    // the Gilkey decomposition itself is valid for any connection
    assert!(r.checks.iter().any(|c| c.anchor.contains("reassembles") && c.passed));
    assert!(failed.iter().any(|a| a.contains("Gilkey E equals")), "{failed:?}");
}

#[test]
fn every_curved_identity_holds() {
    for id in CURVED_IDENTITIES {
        let d = prove_curved(id, false).unwrap().unwrap();
        assert!(d.holds(), "{d}");
        assert!(d.trace.is_empty());
    }
    assert!(prove_curved("no-such-identity", false).unwrap().is_none());
}

#[test]
fn trace_records_rule_firings() {
    let d = prove_curved("slashed-gamma-derivative", true).unwrap().unwrap();
    assert!(d.trace.iter().any(|l| l.starts_with("Clifford")));
    assert!(d.trace.iter().any(|l| l.starts_with("Christoffel trace")));
}

#[test]
fn curvature_coupling_term_is_required() {
    let gilkey = lemmas::endomorphism_gilkey().unwrap().normalize().unwrap();
    let closed = lemmas::endomorphism_closed().unwrap();
    let without = closed.add(&NCPoly::christoffel_trace("k").mul(&NCPoly::x(Ix::lo("k"))));
    let residual = gilkey.sub(&without.normalize().unwrap());
    let expected = NCPoly::christoffel_trace("k").mul(&NCPoly::x(Ix::lo("k"))).scale(-Cq::one()).normalize().unwrap();
    assert_eq!(residual, expected);
}

#[test]
fn curved_forms_specialize_to_flat_results() {
    let r = specialization_report(&FlatData::generic()).unwrap();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
}

#[test]
fn whole_module_report_passes() {
    assert!(lichnerowicz_report().unwrap().passed());
}

#[test]
fn three_repeated_indices_are_rejected() {
    let p = NCPoly::product(&[NCPoly::gamma(Ix::up("a")), NCPoly::x(Ix::lo("b")), NCPoly::omega_s(Ix::lo("c"))])
        .rename("b", "a")
        .rename("c", "a");
    assert!(matches!(p.normalize(), Err(NcError::IllFormed(..))));
}

/// Random well-formed factors: every index name is used once or as an up/down pair.
fn random_factors(kinds: &[u8], seed: u64) -> (Vec<NCPoly>, Vec<Vec<String>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // slot positions per factor kind
    let slots: Vec<Vec<bool>> = kinds
        .iter()
        .map(|k| match k % 8 {
            0 | 1 => vec![true],
            2 => vec![false],
            3 => vec![false],
            4 => vec![false],
            5 => vec![true, true],
            6 => vec![true, false, false],
            _ => vec![false, false],
        })
        .collect();
    let mut ups = Vec::new();
    let mut los = Vec::new();
    for (i, s) in slots.iter().enumerate() {
        for (j, &u) in s.iter().enumerate() {
            if u {
                ups.push((i, j))
            } else {
                los.push((i, j))
            }
        }
    }
    ups.shuffle(&mut rng);
    los.shuffle(&mut rng);
    let mut names: Vec<Vec<String>> = slots.iter().map(|s| vec![String::new(); s.len()]).collect();
    let mut n = 0;
    for (k, &(i, j)) in ups.iter().enumerate() {
        names[i][j] = format!("p{n}");
        if let Some(&(a, b)) = los.get(k) {
            if k % 3 != 2 {
                names[a][b] = format!("p{n}");
            } else {
                names[a][b] = format!("q{n}");
            }
        }
        n += 1;
    }
    for &(a, b) in los.iter().skip(ups.len()) {
        names[a][b] = format!("q{n}");
        n += 1;
    }
    let fs: Vec<NCPoly> = kinds
        .iter()
        .zip(&names)
        .map(|(k, nm)| match k % 8 {
            0 | 1 => NCPoly::gamma(Ix::up(&nm[0])),
            2 => NCPoly::x(Ix::lo(&nm[0])),
            3 => NCPoly::omega_s(Ix::lo(&nm[0])),
            4 => NCPoly::gamma(Ix::lo(&nm[0])),
            5 => NCPoly::metric(Ix::up(&nm[0]), Ix::up(&nm[1])),
            6 => NCPoly::christoffel(&nm[0], &nm[1], &nm[2]),
            _ => NCPoly::metric(Ix::lo(&nm[0]), Ix::lo(&nm[1])),
        })
        .collect();
    (fs, names)
}

fn random_word(kinds: &[u8], seed: u64) -> NCPoly {
    NCPoly::product(&random_factors(kinds, seed).0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn rewriting_terminates_and_is_idempotent(kinds in prop::collection::vec(0u8..8, 1..8), seed in any::<u64>()) {
        let p = random_word(&kinds, seed);
        let nf = p.normalize().unwrap();
        prop_assert_eq!(nf.to_poly().normalize().unwrap(), nf.clone());
        // normalization is linear
        let doubled = p.add(&p).normalize().unwrap();
        prop_assert_eq!(doubled, p.scale(Cq::from(2)).normalize().unwrap());
    }

    #[test]
    fn normal_form_ignores_dummy_names(kinds in prop::collection::vec(0u8..8, 1..8), seed in any::<u64>()) {
        // products rename summed indices freshly on every call
        prop_assert_eq!(random_word(&kinds, seed).normalize().unwrap(), random_word(&kinds, seed).normalize().unwrap());
    }

    #[test]
    fn anticommuting_any_adjacent_pair_preserves_the_normal_form(
        kinds in prop::collection::vec(0u8..8, 2..8),
        seed in any::<u64>(),
        at in any::<prop::sample::Index>(),
    ) {
        let i = at.index(kinds.len() + 1);
        let mut kinds = kinds;
        kinds.splice(i..i, [0u8, 1u8]);
        let (fs, names) = random_factors(&kinds, seed);
        let (a, b) = (Ix::up(&names[i][0]), Ix::up(&names[i + 1][0]));
        // γ^aγ^b = −γ^bγ^a + 2g^{ab}
        let swapped = NCPoly::gamma(b.clone()).mul(&NCPoly::gamma(a.clone())).scale(-Cq::one())
            .add(&NCPoly::metric(a, b).scale(Cq::from(2)));
        let mut gs = fs[..i].to_vec();
        gs.push(swapped);
        gs.extend(fs[i + 2..].iter().cloned());
        prop_assert_eq!(NCPoly::product(&fs).normalize().unwrap(), NCPoly::product(&gs).normalize().unwrap());
    }

    #[test]
    fn normalization_preserves_the_flat_value(kinds in prop::collection::vec(prop::sample::select(vec![0u8, 2, 3, 4, 5, 7]), 1..5), seed in any::<u64>()) {
        let p = random_word(&kinds, seed);
        let data = FlatData::generic();
        let raw = lemmas::eval_flat_terms(p.terms(), &data).unwrap();
        prop_assert_eq!(lemmas::eval_flat(&p.normalize().unwrap(), &data).unwrap(), raw);
    }

    #[test]
    fn clifford_relation_in_normal_form(a in 0usize..3, b in 0usize..3) {
        let names = ["a", "b", "c"];
        let (x, y) = (Ix::up(names[a]), Ix::up(&format!("{}'", names[b])));
        let anti = NCPoly::gamma(x.clone()).mul(&NCPoly::gamma(y.clone()))
            .add(&NCPoly::gamma(y.clone()).mul(&NCPoly::gamma(x.clone())));
        let metric = NCPoly::metric(x, y).scale(Cq::from(2));
        prop_assert!(anti.sub(&metric).normalize().unwrap().is_zero());
    }
}
