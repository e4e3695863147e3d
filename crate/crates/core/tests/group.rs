use metaplectic::braid::BraidWord;
use metaplectic::dense::{represent_braid, RMatrixKind};
use metaplectic::group::{CliffordElement, GroupElementJson, GroupSpace};
use metaplectic::pauli::PauliString;
use metaplectic::{DenseOperatorF64, Error};
use proptest::prelude::*;

fn braid(n: usize, letters: &[i32]) -> BraidWord {
    BraidWord::new(n, letters.to_vec()).unwrap()
}

#[test]
fn identity_word() {
    let space = GroupSpace::new(3, 3).unwrap();
    let g = space.braid_to_element(&"n=2\n1 -1".parse().unwrap()).unwrap();
    assert!(g.is_identity());
    assert_eq!(g.to_json().sign, 1);
    assert!(g.to_json().exps.is_empty());
}

#[test]
fn braid_relations_hold_exactly() {
    for m in [3, 5, 7, 9] {
        let space = GroupSpace::new(6, m).unwrap();
        let n = 5;
        let yb_l = space.braid_to_element(&braid(n, &[2, 3, 2])).unwrap();
        let yb_r = space.braid_to_element(&braid(n, &[3, 2, 3])).unwrap();
        assert_eq!(yb_l, yb_r, "m = {m}");
        let far_l = space.braid_to_element(&braid(n, &[1, 4])).unwrap();
        let far_r = space.braid_to_element(&braid(n, &[4, 1])).unwrap();
        assert_eq!(far_l, far_r);
        assert!(space.braid_to_element(&braid(n, &[3, 1, -3, -1])).unwrap().is_identity());
    }
}

#[test]
fn generator_order() {
    // sigma^{2m} is a pure phase for the qubit representation
    for m in [3, 5, 7] {
        let space = GroupSpace::new(3, m).unwrap();
        let letters = vec![1; 4 * m as usize];
        let g = space.braid_to_element(&braid(2, &letters)).unwrap();
        assert!(g.clifford().is_identity());
        assert!(g.abelian().exps().is_empty());
    }
}

#[test]
fn invalid_spaces_and_words() {
    assert!(GroupSpace::new(2, 3).is_err());
    assert!(matches!(GroupSpace::new(4, 4), Err(Error::InvalidModulus(4))));
    let space = GroupSpace::new(4, 5).unwrap();
    assert!(matches!(space.braid_to_element(&braid(2, &[1])), Err(Error::Mismatch(_))));
    assert!(matches!(space.generator(3), Err(Error::MalformedGenerator { .. })));
    assert!(space.s_operator(2, 1).is_err());
    let other = GroupSpace::new(4, 7).unwrap();
    assert!(space.multiply(&space.identity(), &other.identity()).is_err());
}

#[test]
fn interval_products() {
    let space = GroupSpace::new(5, 5).unwrap();
    let s = space.s_operator(1, 3).unwrap();
    let direct = space.h(1).mul(&space.h(2)).mul(&space.h(3));
    assert_eq!(s, direct);
    assert_eq!(space.identify(&s.negate()).unwrap(), ((1, 3), true));
    assert!(space.identify(&PauliString::single_z(5, 2)).is_err());
}

#[test]
fn json_shape() {
    let space = GroupSpace::new(4, 5).unwrap();
    let g = space.braid_to_element(&braid(3, &[1, 2, -1])).unwrap();
    let json = serde_json::to_string(&g.to_json()).unwrap();
    let back: GroupElementJson = serde_json::from_str(&json).unwrap();
    assert_eq!(back, g.to_json());
    assert_eq!(back.qubits, 4);
    assert_eq!(back.tableau.len(), 4);
    assert!(back.exps.iter().all(|&[k, l, e]| 1 <= k && k <= l && l <= 2 && e < 5));
}

#[test]
fn clifford_parts() {
    let c = CliffordElement::xor_not(3, 1);
    assert_eq!(c.act(0b001), (false, 0b011));
    assert!(c.compose(&c).is_identity());
    let z = CliffordElement::z_signs(3, 0b101);
    assert_eq!(z.act(0b100), (true, 0b100));
}

fn word(n: usize, len: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec((1..n as i32, any::<bool>()), 0..=len)
        .prop_map(move |v| BraidWord::new(n, v.into_iter().map(|(g, s)| if s { g } else { -g }).collect()).unwrap())
}

fn case() -> impl Strategy<Value = (u32, BraidWord)> {
    (prop::sample::select(vec![3u32, 5, 7]), 2usize..=4).prop_flat_map(|(m, n)| (Just(m), word(n, 16)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn agrees_with_dense((m, b) in case()) {
        let space = GroupSpace::new(b.strands() + 1, m).unwrap();
        let g = space.braid_to_element(&b).unwrap();
        let want: DenseOperatorF64 = represent_braid(&b, RMatrixKind::Y1(m)).unwrap();
        prop_assert!(space.dense::<f64>(&g).sub(&want).max_abs() < 1e-9);
    }

    #[test]
    fn pullback_matches_dense((m, b) in case(), k in 1usize..4, len in 0usize..3) {
        let space = GroupSpace::new(b.strands() + 1, m).unwrap();
        let top = b.strands() - 1;
        let k = (k - 1) % top + 1;
        let l = (k + len).min(top);
        let g = space.braid_to_element(&b).unwrap();
        let ((k2, l2), sign) = space.pullback_s(&g, k, l).unwrap();
        let gd = space.dense::<f64>(&g);
        let lhs = gd.adjoint().mul(&space.s_operator(k, l).unwrap().dense()).mul(&gd);
        let rhs = space.s_operator(k2, l2).unwrap().dense::<f64>().scale((sign as f64).into());
        prop_assert!(lhs.sub(&rhs).max_abs() < 1e-9);
    }

    #[test]
    fn inverse_and_product((m, a) in case(), tail in prop::collection::vec(any::<bool>(), 0..8)) {
        let n = a.strands();
        let space = GroupSpace::new(n + 1, m).unwrap();
        let b = BraidWord::new(n, tail.iter().enumerate().map(|(i, &s)| {
            let g = (i % (n - 1)) as i32 + 1;
            if s { g } else { -g }
        }).collect()).unwrap();
        let ga = space.braid_to_element(&a).unwrap();
        let gb = space.braid_to_element(&b).unwrap();
        prop_assert_eq!(space.multiply(&ga, &gb).unwrap(), space.braid_to_element(&a.concat(&b).unwrap()).unwrap());
        prop_assert!(space.multiply(&ga, &space.inverse(&ga).unwrap()).unwrap().is_identity());
    }
}
