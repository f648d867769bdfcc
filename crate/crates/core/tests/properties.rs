use itertools::Itertools;
use proptest::prelude::*;
use proptest::sample::subsequence;

use regen_core::matrix::{congruence, FieldMatrix, SkewSymmetric};
use regen_core::mbr::{Backend, MbrCode};
use regen_core::psrs::{PsrsCode, PsrsGenPoly, PsrsMessage};
use regen_core::rbt::{sign_fix, RbtCode};
use regen_core::shah::ShahCode;
use regen_core::{Field, OpCounter, Scheme};

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::prime(13).unwrap()),
        Just(Field::prime(11).unwrap()),
        Just(Field::binary(3).unwrap()),
        Just(Field::binary(4).unwrap()),
        Just(Field::fermat()),
    ]
}

fn symbols(f: Field, len: usize) -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(0..f.order(), len)
}

/// (field, n, k, d) with k ≤ d < n ≤ 8.
fn mbr_params() -> impl Strategy<Value = (Field, usize, usize, usize)> {
    (fields(), 2usize..=8)
        .prop_flat_map(|(f, n)| (Just(f), Just(n), 1..n))
        .prop_flat_map(|(f, n, d)| (Just(f), Just(n), 1..=d, Just(d)))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn inverse_is_two_sided(f in fields(), n in 1usize..8, seed in proptest::collection::vec(any::<u32>(), 64)) {
        let m = FieldMatrix::from_fn(f, n, n, |r, c| seed[(r * 8 + c) % 64] % f.order());
        let ops = OpCounter::new();
        if let Ok(inv) = m.inverse(&ops) {
            prop_assert_eq!(inv.mul(&m, &ops).unwrap(), FieldMatrix::identity(f, n));
            prop_assert_eq!(m.mul(&inv, &ops).unwrap(), FieldMatrix::identity(f, n));
        }
    }

    #[test]
    fn congruence_keeps_skew_symmetry(
        f in fields(),
        upper in proptest::collection::vec(any::<u32>(), 15),
        p in proptest::collection::vec(any::<u32>(), 36),
    ) {
        let upper: Vec<u32> = upper.iter().map(|x| x % f.order()).collect();
        let m = SkewSymmetric::from_strict_upper(f, 6, &upper).unwrap();
        let p = FieldMatrix::from_fn(f, 6, 6, |r, c| p[r * 6 + c] % f.order());
        let c = congruence(&p, m.as_matrix(), &OpCounter::new()).unwrap();
        prop_assert!(SkewSymmetric::try_from(c).is_ok());
    }

    #[test]
    fn sign_fix_twice_is_identity(f in fields(), cells in proptest::collection::vec(any::<u32>(), 25)) {
        let m = FieldMatrix::from_fn(f, 5, 5, |r, c| cells[r * 5 + c] % f.order());
        let ops = OpCounter::new();
        prop_assert_eq!(sign_fix(&sign_fix(&m, &ops), &ops), m);
    }

    #[test]
    fn rbt_any_k_nodes_and_both_download_modes(
        (f, n, k, u, nodes) in (fields(), 2usize..=9)
            .prop_flat_map(|(f, n)| (Just(f), Just(n), 1..n))
            .prop_flat_map(|(f, n, k)| {
                let b = (n - 1) * k - k * (k - 1) / 2;
                (Just(f), Just(n), Just(k), symbols(f, b), subsequence((0..n).collect::<Vec<_>>(), k).prop_shuffle())
            }),
        systematic in any::<bool>(),
    ) {
        let code = if systematic { RbtCode::systematic(f, n, k) } else { RbtCode::new(f, n, k) }.unwrap();
        let ops = OpCounter::new();
        let cw = if systematic { code.encode_systematic(&u, &ops) } else { code.encode(&u, &ops) }.unwrap();
        let frags = cw.fragments();
        let sel = nodes.iter().map(|&i| frags[i].clone()).collect_vec();
        prop_assert_eq!(&code.reconstruct_full(&sel, &ops).unwrap(), &u);
        let plan = code.partial_plan(&nodes).unwrap();
        prop_assert_eq!(plan.total_symbols(), code.params().b);
        let payloads = plan.extract(&frags).unwrap();
        prop_assert_eq!(code.reconstruct_partial(&plan, &payloads, &ops).unwrap(), u);
    }

    #[test]
    fn mbr_partial_equals_full(
        ((f, n, k, d), seed) in (mbr_params(), any::<u64>()),
        vandermonde in any::<bool>(),
    ) {
        use rand::{Rng, SeedableRng};
        use rand::seq::SliceRandom;
        let backend = if vandermonde { Backend::Vandermonde } else { Backend::Psrs };
        let code = MbrCode::new(f, n, k, d, backend).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let u: Vec<u32> = (0..code.params().b).map(|_| rng.gen_range(0..f.order())).collect();
        let mut nodes: Vec<usize> = (0..n).collect();
        nodes.shuffle(&mut rng);
        nodes.truncate(k);
        let ops = OpCounter::new();
        let frags = code.encode(&u, &ops).unwrap();
        let sel = nodes.iter().map(|&i| frags[i].clone()).collect_vec();
        let full = code.reconstruct_full(&sel, &ops).unwrap();
        prop_assert_eq!(&full, &u);
        let mut schemes = vec![Scheme::Lower, Scheme::Upper];
        if vandermonde {
            schemes.push(Scheme::Gong);
        }
        for scheme in schemes {
            let plan = code.partial_plan(&nodes, scheme).unwrap();
            prop_assert_eq!(plan.total_symbols(), code.params().b);
            let payloads = plan.extract(&frags).unwrap();
            prop_assert_eq!(&code.reconstruct_partial(&plan, &payloads, &ops).unwrap(), &full);
        }
    }

    #[test]
    fn psrs_eval_decoders_agree(
        ((f, n, k, d), seed) in (mbr_params(), any::<u64>()),
    ) {
        use rand::{Rng, SeedableRng};
        use rand::seq::SliceRandom;
        let code = PsrsCode::new(f, n, k, d).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let msg = PsrsMessage::new(
            (0..k).map(|_| rng.gen_range(0..f.order())).collect(),
            (0..d - k).map(|_| rng.gen_range(0..f.order())).collect(),
        );
        let ops = OpCounter::new();
        let cw = code.encode(&msg, &ops).unwrap();
        prop_assert_eq!(&cw[..k], &msg.a[..]);
        let mut pos: Vec<usize> = (0..n).collect();
        pos.shuffle(&mut rng);
        let sym = pos.iter().map(|&p| (p, cw[p])).collect_vec();
        let full = code.decode_full(&sym[..d], &ops).unwrap();
        prop_assert_eq!(&full, &msg);
        prop_assert_eq!(code.decode_partial(&sym[..k], &full.b, &ops).unwrap(), full.a);
    }

    #[test]
    fn forney_matches_linear_solver(seed in any::<u64>(), binary in any::<bool>()) {
        use rand::{Rng, SeedableRng};
        use rand::seq::SliceRandom;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = if binary { Field::binary(4).unwrap() } else { Field::prime(17).unwrap() };
        let n = rng.gen_range(2..(f.order() as usize));
        let d = rng.gen_range(1..n);
        let k = rng.gen_range(1..=d);
        let code = PsrsGenPoly::new(f, n, k, d).unwrap();
        let msg = PsrsMessage::new(
            (0..k).map(|_| rng.gen_range(0..f.order())).collect(),
            (0..d - k).map(|_| rng.gen_range(0..f.order())).collect(),
        );
        let ops = OpCounter::new();
        let c = code.encode(&msg, &ops).unwrap();
        prop_assert_eq!(&c[n - k..], &msg.a[..]);
        let mut pos: Vec<usize> = (0..n).collect();
        pos.shuffle(&mut rng);
        let known = pos[..d].iter().map(|&p| (p, c[p])).collect_vec();
        let linear = code.decode_full_linear(&known, &ops).unwrap();
        prop_assert_eq!(&code.decode_full(&known, &ops).unwrap(), &linear);
        prop_assert_eq!(&linear, &msg);
        let partial = pos[..k].iter().map(|&p| (p, c[p])).collect_vec();
        prop_assert_eq!(code.decode_partial(&partial, &msg.b, &ops).unwrap(), msg.a);
    }

    #[test]
    fn shah_any_k_nodes(
        (n, k, u, nodes) in (2usize..=8)
            .prop_flat_map(|n| (Just(n), 1..n))
            .prop_flat_map(|(n, k)| {
                let b = (n - 1) * k - k * (k - 1) / 2;
                (Just(n), Just(k), symbols(Field::binary(5).unwrap(), b), subsequence((0..n).collect::<Vec<_>>(), k))
            }),
    ) {
        let f = Field::binary(5).unwrap();
        let code = ShahCode::new(f, n, k).unwrap();
        let ops = OpCounter::new();
        let frags = code.encode(&u, &ops).unwrap();
        let sel = nodes.iter().map(|&i| frags[i].clone()).collect_vec();
        prop_assert_eq!(code.reconstruct(&sel, &ops).unwrap(), u);
    }
}
