//! Cross-module invariants: series vs. brute force, reciprocal correctness,
//! run-statistic identities, and pole-solver guarantees.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use composition_runs::asymptotics::{first_iterate, solve_rho};
use composition_runs::hp::NumCtx;
use composition_runs::oracle;
use composition_runs::series::{self, TruncatedSeries};

proptest! {
    #[test]
    fn reciprocal_times_series_is_one(
        tail in prop::collection::vec(-9i64..=9, 0..=64),
    ) {
        let mut coeffs = vec![BigInt::one()];
        coeffs.extend(tail.iter().map(|&c| BigInt::from(c)));
        let d = TruncatedSeries::from_coeffs(coeffs).unwrap();
        let s = series::series_reciprocal(&d).unwrap();
        let prod = d.mul(&s);
        prop_assert!(prod.coeff(0).is_one());
        for i in 1..=prod.order() {
            prop_assert_eq!(prod.coeff(i), &BigInt::from(0), "at z^{}", i);
        }
    }

    #[test]
    fn longest_run_is_max_over_values(
        parts in prop::collection::vec(1u64..=6, 1..=40),
    ) {
        let c = oracle::Composition::new(parts).unwrap();
        let by_value = (1..=c.largest_part())
            .map(|r| c.longest_run_of(r))
            .max()
            .unwrap();
        prop_assert_eq!(c.longest_run(), by_value);
        prop_assert_eq!(c.longest_run_of(c.largest_part() + 1), 0);
        let profile = c.run_profile(c.largest_part());
        prop_assert_eq!(profile.iter().copied().max().unwrap(), c.longest_run());
    }

    #[test]
    fn pmf_sums_to_one_and_counts_are_monotone(n in 1usize..=40) {
        let dist = series::exact_distribution(n).unwrap();
        let total: BigRational = dist.pmf_all().into_iter().sum();
        prop_assert_eq!(total, BigRational::one());
        let t = dist.table();
        for k in 1..=n {
            prop_assert!(t.count_below(k) <= t.count_below(k + 1));
        }
        prop_assert_eq!(t.count_below(n + 1), t.total());
    }
}

#[test]
fn series_counts_equal_brute_force() {
    for n in 1..=14u32 {
        let brute = oracle::brute_counts_below(n, n as usize + 1).unwrap();
        let table = series::count_table(n as usize).unwrap();
        for (k, count) in brute.iter().enumerate().skip(1) {
            assert_eq!(
                table.count_below(k),
                &BigInt::from(*count),
                "n = {n}, k = {k}"
            );
        }
    }
}

#[test]
fn pole_residuals_and_monotone_decrease() {
    let ctx = NumCtx::new(50);
    let mut prev: Option<astro_float::BigFloat> = None;
    for k in 2..=64u32 {
        let pole = solve_rho(&ctx, k, 1e-30).unwrap();
        assert!(
            ctx.to_f64(&pole.residual) <= 1e-30,
            "k = {k}: residual too large"
        );
        assert_eq!(pole.isolation_proven, k >= 4);
        if let Some(p) = prev {
            assert!(ctx.lt(&pole.rho, &p), "rho not decreasing at k = {k}");
        }
        prev = Some(pole.rho);
    }
}

#[test]
fn fixed_point_iterates_increase_strictly() {
    // z0 = 1/2 < z1 < z2 < ... toward the pole
    let ctx = NumCtx::new(50);
    for k in [2u32, 3, 5, 9] {
        let mut z = ctx.from_f64(0.5);
        for step in 0..6 {
            let g = composition_runs::asymptotics::g_eval(&ctx, &z, k, 1e-45)
                .unwrap()
                .value;
            let one = ctx.from_u64(1);
            let next = ctx.div(&ctx.add(&one, &g), &ctx.add(&ctx.from_u64(2), &g));
            assert!(ctx.lt(&z, &next), "k = {k}, iterate {step} did not increase");
            z = next;
        }
        let z1 = first_iterate(&ctx, k).unwrap();
        let rho = solve_rho(&ctx, k, 1e-35).unwrap().rho;
        assert!(ctx.lt(&z1, &rho));
    }
}

#[test]
fn count_ratio_converges_to_carlitz_growth_rate() {
    // C_{n+1}^<2> / C_n^<2> -> 1/rho_2
    let ctx = NumCtx::new(60);
    let rho = solve_rho(&ctx, 2, 1e-45).unwrap().rho;
    let growth = ctx.recip(&rho);
    let d = series::denominator_series(2, 401).unwrap();
    let s = series::series_reciprocal(&d).unwrap();
    let ratio = BigRational::new(s.coeff(401).clone(), s.coeff(400).clone());
    let diff = ctx.abs(&ctx.sub(&ctx.from_ratio(&ratio), &growth));
    assert!(
        ctx.to_f64(&diff) < 1e-10,
        "ratio off by {}",
        ctx.to_f64(&diff)
    );
}
