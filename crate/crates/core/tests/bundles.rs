use ncbundle_core::bundles::{
    compare_rkk, induced_conjugator, is_k_trivial, k_bundle, lambda2_image_member, lambda2_matrix, twist,
    BundleDescriptor, Lambda2Membership, RkkOptions, RkkVerdictKind, RkkWitness, RANK3_GAP_CAVEAT,
};
use ncbundle_core::exterior::BasisOrder;
use ncbundle_core::intmat::IntMatrix;
use ncbundle_core::monodromy::representation;
use ncbundle_core::pairs::pair_count;
use ncbundle_core::BigInt;
use proptest::prelude::*;

fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec((0..n, 0..n, -2i64..=2, 0..3u8), 0..10).prop_map(move |ops| {
        let mut m = IntMatrix::identity(n).to_rows();
        for (a, b, k, kind) in ops {
            match kind {
                0 if a != b => {
                    let src = m[b].clone();
                    m[a].iter_mut().zip(&src).for_each(|(x, y)| *x += y * k);
                }
                1 => m.swap(a, b),
                _ => m[a].iter_mut().for_each(|x| *x = -x.clone()),
            }
        }
        IntMatrix::from_rows(&m).unwrap()
    })
}

fn descriptor(n: usize) -> impl Strategy<Value = BundleDescriptor> {
    (1usize..=3).prop_flat_map(move |b| {
        proptest::collection::vec(-5i64..=5, pair_count(n) * b).prop_map(move |data| {
            BundleDescriptor::from_winding(n, IntMatrix::from_i64(pair_count(n), b, &data)).unwrap()
        })
    })
}

fn loop_coords(b: usize) -> impl Strategy<Value = Vec<BigInt>> {
    proptest::collection::vec((-3i64..=3).prop_map(BigInt::from), b)
}

fn conjugator_case() -> impl Strategy<Value = (usize, IntMatrix, Vec<i64>)> {
    (2usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            unimodular(n),
            proptest::collection::vec(-3i64..=3, 2 * pair_count(n)),
        )
    })
}

#[test]
fn rank3_orientation_reversal_only_identifies_k_bundles() {
    let d = BundleDescriptor::from_winding(3, IntMatrix::from_i64(3, 1, &[1, 0, 0])).unwrap();
    let e = BundleDescriptor::from_winding(3, IntMatrix::from_i64(3, 1, &[-1, 0, 0])).unwrap();
    // a single column has a determinant -1 stabilizer, so the sign can be fixed
    let v = compare_rkk(&d, &e, &RkkOptions::default()).unwrap();
    assert_eq!(v.kind, RkkVerdictKind::RkkEquivalentViaTwist);

    // -I on a full-rank winding matrix has determinant -1 and nothing to absorb it
    let d = BundleDescriptor::from_winding(3, IntMatrix::from_i64(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1])).unwrap();
    let e = BundleDescriptor::from_winding(3, IntMatrix::from_i64(3, 3, &[-1, 0, 0, 0, -1, 0, 0, 0, -1])).unwrap();
    let v = compare_rkk(&d, &e, &RkkOptions::default()).unwrap();
    assert_eq!(v.kind, RkkVerdictKind::IsomorphicKBundlesOnly);
    assert_eq!(v.caveat, Some(RANK3_GAP_CAVEAT));
    assert!(v.gl_orbit_equal);
    assert_eq!(
        lambda2_image_member(3, &IntMatrix::identity(3).neg()).unwrap(),
        Lambda2Membership::NotMember
    );
}

#[test]
fn reflected_identity_is_a_gap_case_with_an_intertwiner() {
    let d = BundleDescriptor::from_winding(3, IntMatrix::identity(3)).unwrap();
    let e = BundleDescriptor::from_winding(3, IntMatrix::diagonal(&[1, 1, -1])).unwrap();
    let v = compare_rkk(&d, &e, &RkkOptions::default()).unwrap();
    assert_eq!(v.kind, RkkVerdictKind::IsomorphicKBundlesOnly);
    let RkkWitness::Transform { a, psi: None } = v.witness else {
        panic!("expected a bare transform")
    };
    assert_intertwines(&d, &e, &a);
}

fn assert_intertwines(d: &BundleDescriptor, e: &BundleDescriptor, a: &IntMatrix) {
    let t = induced_conjugator(d.rank(), a).unwrap();
    for k in 0..d.base().rank() {
        let gamma: Vec<BigInt> = (0..d.base().rank()).map(|j| BigInt::from(i64::from(j == k))).collect();
        let m1 = representation(d.rank(), d.winding(), &gamma, BasisOrder::Lex).unwrap();
        let m2 = representation(e.rank(), e.winding(), &gamma, BasisOrder::Lex).unwrap();
        assert_eq!(m2.matmul(&t).unwrap(), t.matmul(&m1).unwrap(), "loop {k}");
    }
}

#[test]
fn rank4_falls_back_to_search() {
    let w = IntMatrix::from_i64(6, 1, &[1, 0, 0, 0, 0, 0]);
    let d = BundleDescriptor::from_winding(4, w.clone()).unwrap();
    let near = BundleDescriptor::from_winding(4, IntMatrix::from_i64(6, 1, &[1, 1, 0, 0, 0, 0])).unwrap();
    let v = compare_rkk(&d, &near, &RkkOptions::default()).unwrap();
    assert_eq!(v.kind, RkkVerdictKind::RkkEquivalentViaTwist);
    let far = BundleDescriptor::from_winding(4, IntMatrix::from_i64(6, 1, &[2, 0, 0, 0, 0, 0])).unwrap();
    let v = compare_rkk(&d, &far, &RkkOptions::default()).unwrap();
    assert_eq!(v.kind, RkkVerdictKind::Undetermined);
    assert!(!v.gl_orbit_equal);
    assert_eq!(v.witness, RkkWitness::None);
}

#[test]
fn rank4_uses_the_supplied_twist() {
    let psi = IntMatrix::from_i64(4, 4, &[1, 3, 0, 0, 0, 1, 0, 2, 0, 0, 1, -1, 0, 0, 0, 1]);
    assert!(psi.is_unimodular());
    let d =
        BundleDescriptor::from_winding(4, IntMatrix::from_i64(6, 2, &[1, 0, 2, 1, 0, 0, -1, 3, 0, 0, 4, 1])).unwrap();
    let e = twist(&d, &psi).unwrap();
    let opts = RkkOptions {
        psi: Some(psi.clone()),
        search_depth: 0,
    };
    let v = compare_rkk(&d, &e, &opts).unwrap();
    assert_eq!(v.kind, RkkVerdictKind::RkkEquivalentViaTwist);
    assert_eq!(
        v.witness,
        RkkWitness::Transform {
            a: lambda2_matrix(&psi).unwrap(),
            psi: Some(psi)
        }
    );
}

proptest! {
    #[test]
    fn triviality_is_twist_invariant(d in descriptor(3), psi in unimodular(3)) {
        prop_assert_eq!(is_k_trivial(&d), is_k_trivial(&twist(&d, &psi).unwrap()));
    }

    #[test]
    fn verdicts_are_symmetric(d in descriptor(3), e in descriptor(3)) {
        prop_assume!(d.base().rank() == e.base().rank());
        let x = compare_rkk(&d, &e, &RkkOptions::default()).unwrap();
        let y = compare_rkk(&e, &d, &RkkOptions::default()).unwrap();
        prop_assert_eq!(x.kind, y.kind);
        prop_assert_eq!(x.gl_orbit_equal, y.gl_orbit_equal);
    }

    #[test]
    fn rank3_twists_are_recognized_with_a_witness(d in descriptor(3), psi in unimodular(3)) {
        let e = twist(&d, &psi).unwrap();
        let v = compare_rkk(&d, &e, &RkkOptions::default()).unwrap();
        prop_assert_eq!(v.kind, RkkVerdictKind::RkkEquivalentViaTwist);
        match v.witness {
            RkkWitness::Transform { a, psi: Some(found) } => {
                prop_assert_eq!(a.matmul(d.winding()).unwrap(), e.winding().clone());
                prop_assert_eq!(lambda2_matrix(&found).unwrap(), a);
            }
            other => prop_assert!(false, "unexpected witness {:?}", other),
        }
    }

    /// The conjugator built from a transform intertwines the two monodromy
    /// representations.
    #[test]
    fn conjugator_intertwines((n, psi, data) in conjugator_case(), gamma in loop_coords(2)) {
        let k = pair_count(n);
        let d = BundleDescriptor::from_winding(n, IntMatrix::from_i64(k, 2, &data)).unwrap();
        let e = twist(&d, &psi).unwrap();
        let t = induced_conjugator(n, &lambda2_matrix(&psi).unwrap()).unwrap();
        let m1 = representation(n, d.winding(), &gamma, BasisOrder::Lex).unwrap();
        let m2 = representation(n, e.winding(), &gamma, BasisOrder::Lex).unwrap();
        prop_assert_eq!(m2.matmul(&t).unwrap(), t.matmul(&m1).unwrap());
    }

    /// Every transform witness, including those of gap verdicts, yields an
    /// intertwiner on the basis loops.
    #[test]
    fn verdict_witnesses_intertwine(d in descriptor(3), diag in proptest::collection::vec(prop_oneof![Just(1i64), Just(-1)], 3), psi in unimodular(3)) {
        let a = IntMatrix::diagonal(&diag).matmul(&lambda2_matrix(&psi).unwrap()).unwrap();
        let w = a.matmul(d.winding()).unwrap();
        let e = BundleDescriptor::from_winding(3, w).unwrap();
        let v = compare_rkk(&d, &e, &RkkOptions::default()).unwrap();
        prop_assert_ne!(v.kind, RkkVerdictKind::NotEquivalent);
        if let RkkWitness::Transform { a, .. } = &v.witness {
            assert_intertwines(&d, &e, a);
        } else {
            prop_assert!(false, "missing witness");
        }
    }

    #[test]
    fn constant_identity_matches_triviality(d in descriptor(2)) {
        prop_assert_eq!(k_bundle(&d).is_constant_identity().unwrap(), is_k_trivial(&d));
    }
}
