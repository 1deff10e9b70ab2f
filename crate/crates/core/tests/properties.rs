mod common;

use circmaj_core::circulant::{diagonal_positions, sigma};
use circmaj_core::exact::{
    format_rational, frac, full_rank_factorization, int, inverse, null_space, parse_rational, rank, solve,
};
use circmaj_core::format::{matrix_to_json, operator_to_json, parse_matrix, parse_operator};
use circmaj_core::majorization::{verify_h_witness, verify_hc_witness};
use circmaj_core::preserver::{diagonal_profile, fails_at, random_preserver, search_counterexample};
use circmaj_core::random::trial_rng;
use circmaj_core::{
    circulant_perm, decide_h, decide_hc, decide_hc_preserver, diag_index, CirculantCombination, Mat, OperatorRep,
    Subspace,
};
use common::{compose_maps, diagonal_pattern, is_permutation, label};
use proptest::prelude::*;

fn mat(rows: usize, cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = Mat> {
    prop::collection::vec(lo..=hi, rows * cols)
        .prop_map(move |v| Mat::new(rows, cols, v.into_iter().map(int).collect()).unwrap())
}

fn square(max: usize) -> impl Strategy<Value = Mat> {
    (1..=max).prop_flat_map(|n| mat(n, n, -3, 3))
}

fn operator(max: usize) -> impl Strategy<Value = OperatorRep> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(prop_oneof![3 => Just(0i64), 1 => -2i64..=2], n.pow(4))
            .prop_map(move |v| OperatorRep::new(n, Mat::new(n * n, n * n, v.into_iter().map(int).collect()).unwrap()).unwrap())
    })
}

fn weights(n: usize) -> impl Strategy<Value = CirculantCombination> {
    prop::collection::vec(0i64..=4, n).prop_map(|mut w| {
        if w.iter().all(|&x| x == 0) {
            w[0] = 1;
        }
        let total: i64 = w.iter().sum();
        CirculantCombination::new(w.iter().map(|&x| frac(x, total)).collect()).unwrap()
    })
}

fn identity_map(n: usize) -> Vec<usize> {
    (1..=n).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let r = frac(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn full_rank_factorization_reproduces(a in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| mat(r, c, -2, 2))) {
        let (f, g) = full_rank_factorization(&a);
        let r = rank(&a);
        prop_assert_eq!(f.cols(), r);
        prop_assert_eq!(g.rows(), r);
        prop_assert_eq!(rank(&f), r);
        prop_assert_eq!(rank(&g), r);
        if r > 0 {
            prop_assert_eq!(f.mul(&g).unwrap(), a);
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn rank_of_product_is_bounded(
        (a, b) in (1usize..5, 1usize..5, 1usize..5)
            .prop_flat_map(|(r, m, c)| (mat(r, m, -2, 2), mat(m, c, -2, 2)))
    ) {
        let ab = a.mul(&b).unwrap();
        prop_assert!(rank(&ab) <= rank(&a).min(rank(&b)));
    }

    #[test]
    fn rank_nullity_and_kernel(a in (1usize..5, 1usize..6).prop_flat_map(|(r, c)| mat(r, c, -2, 2))) {
        let kernel = null_space(&a);
        prop_assert_eq!(kernel.len() + rank(&a), a.cols());
        for v in kernel {
            prop_assert!(a.mul(&Mat::column(v)).unwrap().is_zero());
        }
    }

    #[test]
    fn solve_and_inverse_are_exact(a in square(4), b in prop::collection::vec(-3i64..=3, 4)) {
        let n = a.rows();
        let b = Mat::column(b[..n].iter().map(|&x| int(x)).collect());
        match solve(&a, &b).unwrap() {
            Some(x) => prop_assert_eq!(a.mul(&x).unwrap(), b.clone()),
            None => prop_assert!(rank(&a) < n),
        }
        match inverse(&a) {
            Ok(inv) => {
                prop_assert_eq!(a.mul(&inv).unwrap(), Mat::identity(n));
                prop_assert_eq!(inv.mul(&a).unwrap(), Mat::identity(n));
            }
            Err(_) => prop_assert!(rank(&a) < n),
        }
    }

    #[test]
    fn diagonals_partition_positions(n in 1usize..=8) {
        let mut count = vec![0; n * n];
        for j in 1..=n {
            let c = circulant_perm(n, j).unwrap();
            prop_assert_eq!(&c, &diagonal_pattern(n, j));
            for (h, k) in diagonal_positions(n, j) {
                prop_assert_eq!(k, sigma(n, j, h));
                prop_assert_eq!(diag_index(n, h, k).unwrap(), j);
                prop_assert_eq!(label(n, h, k), j);
                count[h * n + k] += 1;
            }
        }
        prop_assert!(count.iter().all(|&c| c == 1));
    }

    #[test]
    fn combination_matrix_round_trip(w in (1usize..=6).prop_flat_map(weights)) {
        let m = w.to_matrix();
        prop_assert!(common::is_doubly_stochastic(&m));
        prop_assert_eq!(CirculantCombination::from_matrix(&m), Some(w));
    }

    #[test]
    fn hc_decisions_are_sound_and_monotone(y in square(5), k in 1usize..=5, pick in 0usize..3, w in weights(5)) {
        let n = y.rows();
        let k = (k - 1) % n + 1;
        let ck = circulant_perm(n, k).unwrap();
        let x = ck.hadamard(&y).unwrap();
        let got = decide_hc(&x, &y).unwrap();
        prop_assert!(got.as_ref().is_some_and(|w| verify_hc_witness(&x, &y, w)));
        let x2 = match pick {
            0 => y.clone(),
            1 => y.scale(&frac(1, 2)),
            _ => {
                let w = CirculantCombination::new(w.coeffs()[..n].to_vec()).ok();
                match w {
                    Some(w) => w.to_matrix().hadamard(&y).unwrap(),
                    None => Mat::zeros(n, n),
                }
            }
        };
        if let Some(w) = decide_hc(&x2, &y).unwrap() {
            prop_assert!(verify_hc_witness(&x2, &y, &w));
            let h = decide_h(&x2, &y).unwrap();
            prop_assert!(h.is_some_and(|d| verify_h_witness(&x2, &y, &d)));
        }
    }

    #[test]
    fn h_witness_is_doubly_stochastic(y in square(4), x in square(4)) {
        if x.shape() == y.shape() {
            if let Some(w) = decide_h(&x, &y).unwrap() {
                prop_assert!(common::is_doubly_stochastic(&w.d));
                prop_assert_eq!(w.d.hadamard(&y).unwrap(), x);
            }
        }
    }

    #[test]
    fn hadamard_inner_product_identity(
        (x, y, z) in (1usize..=5).prop_flat_map(|n| (mat(n, n, -5, 5), mat(n, n, -5, 5), mat(n, n, -5, 5)))
    ) {
        let lhs = x.hadamard(&y).unwrap().trace_inner(&z).unwrap();
        let rhs = x.trace_inner(&y.hadamard(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjoint_satisfies_inner_product_identity(t in operator(3), seed in any::<u64>()) {
        let n = t.n();
        let mut rng = trial_rng(seed, 0);
        let x = circmaj_core::random::int_matrix(&mut rng, n, -3, 3);
        let y = circmaj_core::random::int_matrix(&mut rng, n, -3, 3);
        let lhs = t.apply(&x).unwrap().trace_inner(&y).unwrap();
        let rhs = x.trace_inner(&t.adjoint().apply(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(t.adjoint().adjoint(), t);
    }

    #[test]
    fn subspaces_are_consistent(t in operator(3)) {
        let n = t.n();
        let kernel = t.subspace(Subspace::Kernel);
        let range = t.subspace(Subspace::Range);
        prop_assert_eq!(kernel.dim() + range.dim(), n * n);
        prop_assert_eq!(range.dim(), t.rank());
        for v in kernel.vectors() {
            prop_assert!(t.apply(&v).unwrap().is_zero());
        }
        // R(T)^⊥ = N(T*), and N(T)^⊥ = R(T*).
        prop_assert!(t.subspace(Subspace::RangePerp).same_span(&t.adjoint().subspace(Subspace::Kernel)));
        prop_assert!(t.subspace(Subspace::KernelPerp).same_span(&t.adjoint().subspace(Subspace::Range)));
        for v in t.subspace(Subspace::RangePerp).vectors() {
            for w in range.vectors() {
                prop_assert_eq!(v.trace_inner(&w).unwrap(), int(0));
            }
        }
    }

    #[test]
    fn composition_matches_application(s in operator(2), seed in any::<u64>()) {
        let n = s.n();
        let mut rng = trial_rng(seed, 1);
        let t = circmaj_core::random::dense_operator(&mut rng, n, -2, 2);
        let x = circmaj_core::random::int_matrix(&mut rng, n, -3, 3);
        let st = s.compose(&t).unwrap();
        prop_assert_eq!(st.apply(&x).unwrap(), s.apply(&t.apply(&x).unwrap()).unwrap());
    }

    #[test]
    fn serialization_round_trips(m in square(4), t in operator(3)) {
        prop_assert_eq!(parse_matrix(&matrix_to_json(&m)).unwrap(), m);
        prop_assert_eq!(parse_operator(&operator_to_json(&t)).unwrap(), t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_preservers_are_accepted_with_their_map(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let p = circmaj_core::random::permutation(&mut rng, n);
        let t = random_preserver(&mut rng, n, Some(&p)).unwrap();
        let cert = decide_hc_preserver(&t).certificate().cloned();
        prop_assert!(cert.is_some());
        let cert = cert.unwrap();
        let completion = cert.permutation_completion();
        prop_assert!(is_permutation(&completion));
        for j in 1..=n {
            if cert.is_forced(j) {
                prop_assert_eq!(cert.p(j), p[j - 1]);
                prop_assert_eq!(completion[j - 1], p[j - 1]);
            }
        }
        // T(C_j ⊙ E) = C_{P(j)} ⊙ T(E) on every matrix unit and every j.
        for j in 1..=n {
            let cj = circulant_perm(n, j).unwrap();
            let cp = circulant_perm(n, cert.p(j)).unwrap();
            for h in 0..n {
                for k in 0..n {
                    let e = Mat::unit(n, h, k);
                    let lhs = t.apply(&cj.hadamard(&e).unwrap()).unwrap();
                    let rhs = cp.hadamard(&t.apply(&e).unwrap()).unwrap();
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
        prop_assert!(search_counterexample(&t, 4, seed).is_none());
    }

    #[test]
    fn composite_maps_compose(n in 2usize..=4, seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let s = random_preserver(&mut rng, n, None).unwrap();
        let t = random_preserver(&mut rng, n, None).unwrap();
        let sc = decide_hc_preserver(&s).certificate().unwrap().clone();
        let tc = decide_hc_preserver(&t).certificate().unwrap().clone();
        let st = s.compose(&t).unwrap();
        let c = decide_hc_preserver(&st).certificate().cloned();
        prop_assert!(c.is_some());
        let c = c.unwrap();
        let expected = compose_maps(&sc.p, &tc.p);
        for j in 1..=n {
            if c.is_forced(j) {
                prop_assert_eq!(c.p(j), expected[j - 1]);
            }
        }
    }

    #[test]
    fn acceptance_matches_the_profile_rule(t in operator(3)) {
        let profile = diagonal_profile(&t);
        let n = t.n();
        let sets: Vec<Vec<usize>> = (1..=n).map(|j| profile.touched(j)).collect();
        let singletons = sets.iter().all(|s| s.len() <= 1);
        let mut targets: Vec<usize> = sets.iter().flatten().copied().collect();
        let total = targets.len();
        targets.sort_unstable();
        targets.dedup();
        let rule = singletons && targets.len() == total;
        let decision = decide_hc_preserver(&t);
        prop_assert_eq!(decision.is_preserver(), rule);
        if let Some(r) = decision.refutation() {
            if let Some(c) = &r.counterexample {
                prop_assert!(fails_at(&t, c.k, &c.b).unwrap());
            }
        }
    }

    #[test]
    fn rejections_are_confirmed(t in operator(3)) {
        if let Some(r) = decide_hc_preserver(&t).refutation() {
            prop_assert!(r.counterexample.is_some(), "unconfirmed: {:?}", r.violation);
        }
    }

    #[test]
    fn identity_and_zero_maps(n in 1usize..=5) {
        let id = decide_hc_preserver(&OperatorRep::identity(n));
        prop_assert_eq!(&id.certificate().unwrap().p, &identity_map(n));
        let zero = decide_hc_preserver(&OperatorRep::zero(n));
        let cert = zero.certificate().unwrap();
        prop_assert_eq!(cert.p.clone(), vec![1; n]);
        prop_assert_eq!(cert.permutation_completion(), identity_map(n));
    }
}
