use proptest::prelude::*;
use rug::Rational;
use star_mops::constructors::{determinant_construct, determinant_tolerance, explicit, float_distance, rodrigues};
use star_mops::recurrence::recurrence_residual;
use star_mops::{CharlierParams, Coeff, ExactScalar, FamilyParams, MeixnerParams, MultiIndex, PrecisionConfig};

fn gaussian(max: i64, den: i64) -> impl Strategy<Value = ExactScalar> {
    (-max..=max, -max..=max, 1..=den).prop_map(|(re, im, d)| ExactScalar::new(Rational::from((re, d)), Rational::from((im, d))))
}

fn distinct(values: &[ExactScalar]) -> bool {
    values.iter().enumerate().all(|(i, v)| !values[..i].contains(v))
}

fn charlier() -> impl Strategy<Value = FamilyParams<ExactScalar>> {
    (1usize..=3)
        .prop_flat_map(|r| proptest::collection::vec(gaussian(6, 4), r))
        .prop_filter("distinct nonzero", |a| distinct(a) && a.iter().all(|v| !v.is_zero()))
        .prop_map(|a| FamilyParams::Charlier(CharlierParams::new(a).unwrap()))
}

fn unit_disc() -> impl Strategy<Value = ExactScalar> {
    gaussian(3, 5).prop_filter("inside the unit disc", |c| !c.is_zero() && c.modulus_below_one())
}

fn meixner() -> impl Strategy<Value = FamilyParams<ExactScalar>> {
    (1usize..=3, gaussian(8, 3))
        .prop_flat_map(|(r, beta)| (proptest::collection::vec(unit_disc(), r), Just(beta)))
        .prop_filter("admissible", |(c, beta)| distinct(c) && !beta.is_nonpositive_integer())
        .prop_map(|(c, beta)| FamilyParams::Meixner(MeixnerParams::new(beta, c).unwrap()))
}

fn family() -> impl Strategy<Value = FamilyParams<ExactScalar>> {
    prop_oneof![charlier(), meixner()]
}

fn index_for(r: usize, max_total: u32) -> impl Strategy<Value = MultiIndex> {
    proptest::collection::vec(0u32..=max_total, r)
        .prop_filter("bounded total", move |v| v.iter().sum::<u32>() <= max_total)
        .prop_map(|v| MultiIndex::new(v).unwrap())
}

fn with_index(max_total: u32) -> impl Strategy<Value = (FamilyParams<ExactScalar>, MultiIndex)> {
    family().prop_flat_map(move |p| {
        let r = p.r();
        (Just(p), index_for(r, max_total))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn explicit_and_rodrigues_agree_for_complex_parameters((params, n) in with_index(5)) {
        let e = explicit(&params, &n).unwrap();
        prop_assert_eq!(e.degree(), Some(n.total() as usize));
        prop_assert!(e.leading().unwrap().is_one());
        prop_assert_eq!(e, rodrigues(&params, &n).unwrap());
    }

    #[test]
    fn recurrence_holds_for_complex_parameters((params, n) in with_index(4), leg in 0usize..3) {
        let k = leg % params.r();
        prop_assert!(recurrence_residual(&params, &n, k).unwrap().is_zero());
    }

    #[test]
    fn determinant_matches_for_complex_charlier(params in charlier(), raw in proptest::collection::vec(0u32..=2, 3)) {
        let n = MultiIndex::new(raw[..params.r()].to_vec()).unwrap();
        let config = PrecisionConfig::new(256).unwrap();
        let det = determinant_construct(&params.to_scalar(256), &n, 1e-96, &config).unwrap();
        let e = explicit(&params, &n).unwrap();
        let delta = float_distance(&e, &det.polynomial, 256);
        prop_assert!(delta <= determinant_tolerance(det.condition_estimate.unwrap(), 256), "{delta:e}");
    }
}
