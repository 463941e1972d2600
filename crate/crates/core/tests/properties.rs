use mpcomm_core::distributed::{
    brute_force_distributed, certify_perfect_exclusion, classical_bound, gram_summary, pbr_antidist, pbr_optimal_ratio,
    pbr_ratio, pbr_states, pbr_theta_range, product_gram_frob_sq, DistributedTask,
};
use mpcomm_core::quantum::mat::{c, CVec};
use mpcomm_core::quantum::{antidistinguishability, helstrom_antidist_two, DensityMatrix};
use mpcomm_core::Rational;
use proptest::prelude::*;

fn resource(n_inputs: i64) -> impl Strategy<Value = Rational> {
    (1i64..=48).prop_flat_map(move |den| {
        let lo = den * (n_inputs - 1);
        let den = den * n_inputs;
        (lo..=den).prop_map(move |num| Rational::new(num.into(), den.into()))
    })
}

fn unit_ket(dim: usize) -> impl Strategy<Value = CVec> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let k = CVec::from_iterator(v.len(), v.iter().map(|&(a, b)| c(a, b)));
            let n = k.norm();
            k.unscale(n)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn brute_force_never_beats_product_bound(a in prop::collection::vec(resource(2), 2)) {
        let task = DistributedTask::uniform(2, 2).unwrap();
        let brute = brute_force_distributed(&task, &a).unwrap();
        let bound = classical_bound(&task, &a).unwrap();
        prop_assert!(brute <= bound);
        prop_assert_eq!(brute, bound);
    }

    #[test]
    fn product_gram_norm_factorises(states in prop::collection::vec(unit_ket(2), 2..4), n in 1usize..4) {
        let direct = product_gram_frob_sq(&states, n).unwrap();
        let summary = gram_summary(&states, n).unwrap();
        prop_assert!((direct - summary.frob_sq).abs() <= 1e-9 * direct);
    }

    #[test]
    fn pbr_ratio_is_largest_at_threshold(n in 2u32..12, t in 0.0f64..1.0) {
        let (lo, hi) = pbr_theta_range(n).unwrap();
        let opt = pbr_optimal_ratio(n).unwrap();
        prop_assert!((pbr_ratio(lo, n).unwrap() - opt).abs() <= 1e-9 * opt);
        prop_assert!(pbr_ratio(lo + t * (hi - lo), n).unwrap() <= opt * (1.0 + 1e-12));
        prop_assert!(pbr_ratio(lo - 1e-3, n).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pbr_pair_closed_form_matches_sdp(theta in 0.05f64..1.5) {
        let [a, b] = pbr_states(theta);
        let sdp = antidistinguishability(&[DensityMatrix::pure(&a).unwrap(), DensityMatrix::pure(&b).unwrap()], &[0.5, 0.5]).unwrap();
        prop_assert!((sdp.value - pbr_antidist(theta)).abs() < 1e-7);
        prop_assert!((helstrom_antidist_two(&a, &b).unwrap() - pbr_antidist(theta)).abs() < 1e-12);
    }
}

#[test]
fn perfect_exclusion_threshold_matches_formula() {
    for n in [2u32, 3] {
        let (lo, hi) = pbr_theta_range(n).unwrap();
        for k in 0..=4 {
            let theta = lo + (hi - lo) * k as f64 / 4.0;
            assert!(certify_perfect_exclusion(theta, n as usize).unwrap().excluded, "N={n} theta={theta}");
        }
        assert!(!certify_perfect_exclusion(lo * 0.9, n as usize).unwrap().excluded);
    }
}

#[test]
fn three_input_brute_force_within_bound() {
    let task = DistributedTask::uniform(2, 3).unwrap();
    for (a, b) in [((2, 3), (2, 3)), ((5, 6), (3, 4)), ((1, 1), (7, 9))] {
        let a = [Rational::new(a.0.into(), a.1.into()), Rational::new(b.0.into(), b.1.into())];
        let brute = brute_force_distributed(&task, &a).unwrap();
        assert!(brute <= classical_bound(&task, &a).unwrap(), "{a:?}");
    }
}
