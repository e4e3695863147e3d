use metaplectic::braid::BraidWord;
use metaplectic::dense::{represent_braid, RMatrixKind};
use metaplectic::heisenberg::{
    braid_commutant_generators, conjugate_by_braid, conjugate_by_generator, evolve_tableau, init_pair_tableau,
    measure_monomial, push_forward_by_braid, u_generator, QuditMonomial, StabilizerTableau, TableauRowJson,
};
use metaplectic::{DenseOperatorF64, Error};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn braid(n: usize, letters: &[i32]) -> BraidWord {
    BraidWord::new(n, letters.to_vec()).unwrap()
}

fn dense_pullback(a: &QuditMonomial, b: &BraidWord) -> DenseOperatorF64 {
    let rho: DenseOperatorF64 = represent_braid(b, RMatrixKind::GaussianXe(a.m())).unwrap();
    rho.adjoint().mul(&a.dense()).mul(&rho)
}

#[test]
fn x_rule_for_three() {
    let (n, m) = (2, 3);
    let x1 = QuditMonomial::shift(n, m, 0);
    let got = conjugate_by_generator(&x1, 1, 1).unwrap();
    let want = dense_pullback(&x1, &braid(n, &[1]));
    assert!(got.dense::<f64>().sub(&want).max_abs() < 1e-12);
    assert!(!got.same_support(&x1));
}

#[test]
fn identity_braid_leaves_monomials_alone() {
    let a = QuditMonomial::new(5, 4, vec![1, 2, 3], vec![4, 0, 1]).unwrap();
    assert_eq!(conjugate_by_braid(&a, &BraidWord::identity(3).unwrap()).unwrap(), a);
    let back = conjugate_by_braid(&a, &braid(3, &[2, 1, -1, -2])).unwrap();
    assert_eq!(back, a);
}

#[test]
fn u_generators_are_fixed_by_their_own_braid() {
    for m in [3, 5, 7] {
        let u = u_generator(4, m, 2).unwrap();
        assert_eq!(conjugate_by_generator(&u, 2, 1).unwrap(), u);
        assert_eq!(conjugate_by_generator(&u, 2, -1).unwrap(), u);
    }
}

#[test]
fn commutant_is_braid_invariant() {
    let b = braid(4, &[1, 2, -3, 2, 1, 3, -1]);
    for m in [3, 5, 9] {
        for g in braid_commutant_generators(4, m).unwrap() {
            assert_eq!(conjugate_by_braid(&g, &b).unwrap(), g);
        }
    }
}

#[test]
fn mismatched_sizes() {
    let a = QuditMonomial::identity(3, 3);
    assert!(matches!(conjugate_by_braid(&a, &braid(2, &[1])), Err(Error::Mismatch(_))));
    assert!(matches!(u_generator(3, 3, 3), Err(Error::MalformedGenerator { .. })));
    assert!(QuditMonomial::new(4, 0, vec![0], vec![0]).is_err());
    assert!(QuditMonomial::new(3, 0, vec![0, 1], vec![0]).is_err());
}

#[test]
fn measuring_z_on_zero_state() {
    let t = StabilizerTableau::all_z(3, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..3 {
        let r = measure_monomial(&t, &QuditMonomial::clock(3, 3, i), &mut rng).unwrap();
        assert!(r.deterministic);
        assert_eq!(r.outcome_exp, 0);
    }
    // Z_1^2 Z_2 is also fixed
    let zz = QuditMonomial::new(3, 0, vec![0; 3], vec![2, 1, 0]).unwrap();
    assert_eq!(measure_monomial(&t, &zz, &mut rng).unwrap().outcome_exp, 0);
}

#[test]
fn measuring_x_is_uniform() {
    let t = StabilizerTableau::all_z(2, 3).unwrap();
    let x1 = QuditMonomial::shift(2, 3, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let shots = 30_000;
    let mut counts = [0usize; 3];
    for _ in 0..shots {
        let r = measure_monomial(&t, &x1, &mut rng).unwrap();
        assert!(!r.deterministic);
        assert!(r.updated.rows().iter().any(|(row, e)| row == &x1 && *e == r.outcome_exp));
        counts[r.outcome_exp as usize] += 1;
    }
    let sigma = (shots as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
    for c in counts {
        assert!((c as f64 - shots as f64 / 3.0).abs() < 4.0 * sigma, "{counts:?}");
    }
    // a repeated measurement now agrees with the first
    let first = measure_monomial(&t, &x1, &mut rng).unwrap();
    let again = measure_monomial(&first.updated, &x1, &mut rng).unwrap();
    assert!(again.deterministic);
    assert_eq!(again.outcome_exp, first.outcome_exp);
}

#[test]
fn incomplete_and_invalid_tableaus() {
    let t = StabilizerTableau::new(2, 3, vec![(QuditMonomial::clock(2, 3, 0), 0)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert_eq!(measure_monomial(&t, &QuditMonomial::clock(2, 3, 1), &mut rng).unwrap_err(), Error::IncompleteTableau);
    let rows = vec![(QuditMonomial::clock(1, 3, 0), 0), (QuditMonomial::shift(1, 3, 0), 0)];
    assert!(StabilizerTableau::new(1, 3, rows).is_err());
    let z = QuditMonomial::clock(1, 3, 0);
    assert!(StabilizerTableau::new(1, 3, vec![(z.clone(), 0), (z, 1)]).is_err());
    assert!(init_pair_tableau(3, 3).is_err());
    assert!(init_pair_tableau(4, 9).is_err());
}

#[test]
fn tableau_json_round_trip() {
    let t = evolve_tableau(&init_pair_tableau(4, 5).unwrap(), &braid(4, &[2, 1, -3])).unwrap();
    let json = serde_json::to_string(&t.to_json()).unwrap();
    let rows: Vec<TableauRowJson> = serde_json::from_str(&json).unwrap();
    assert_eq!(StabilizerTableau::from_json(4, 5, &rows).unwrap(), t);
    let mono = QuditMonomial::new(7, 6, vec![1, 0, 3], vec![2, 5, 6]).unwrap();
    let back: QuditMonomial = serde_json::from_str(&serde_json::to_string(&mono).unwrap()).unwrap();
    assert_eq!(back, mono);
}

#[test]
fn evolved_tableau_stabilizes_evolved_state() {
    let m = 3;
    let b = braid(3, &[1, 2, 2, -1]);
    let t = StabilizerTableau::all_z(3, m).unwrap();
    let evolved = evolve_tableau(&t, &b).unwrap();
    assert!(evolved.is_complete());
    let rho: DenseOperatorF64 = represent_braid(&b, RMatrixKind::GaussianXe(m)).unwrap();
    let want = rho.mul(&t.dense_projector()).mul(&rho.adjoint());
    assert!(evolved.dense_projector::<f64>().sub(&want).max_abs() < 1e-10);
}

fn monomial(n: usize, m: u32) -> impl Strategy<Value = QuditMonomial> {
    let r = m as i64;
    (prop::collection::vec(0..r, n), prop::collection::vec(0..r, n), 0..r)
        .prop_map(move |(x, z, c)| QuditMonomial::new(m, 2 * c, x, z).unwrap())
}

fn word(n: usize, len: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec((1..n as i32, any::<bool>()), 0..=len)
        .prop_map(move |v| BraidWord::new(n, v.into_iter().map(|(g, s)| if s { g } else { -g }).collect()).unwrap())
}

fn case() -> impl Strategy<Value = (QuditMonomial, BraidWord)> {
    prop::sample::select(vec![(3u32, 3usize), (5, 3), (3, 4), (7, 2)])
        .prop_flat_map(|(m, n)| (monomial(n, m), word(n, 10)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn conjugation_matches_dense((a, b) in case()) {
        let got = conjugate_by_braid(&a, &b).unwrap();
        prop_assert!(got.dense::<f64>().sub(&dense_pullback(&a, &b)).max_abs() < 1e-9);
    }

    #[test]
    fn push_forward_inverts_pullback((a, b) in case()) {
        let there = conjugate_by_braid(&a, &b).unwrap();
        prop_assert_eq!(push_forward_by_braid(&there, &b).unwrap(), a);
    }

    #[test]
    fn conjugation_is_multiplicative((a, b) in case(), k in 0i64..5) {
        let c = a.pow(k + 1);
        let lhs = conjugate_by_braid(&a.mul(&c).unwrap(), &b).unwrap();
        let rhs = conjugate_by_braid(&a, &b).unwrap().mul(&conjugate_by_braid(&c, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
