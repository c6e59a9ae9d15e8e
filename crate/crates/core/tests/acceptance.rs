//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//!
//! Criteria 7 and 8 are knowingly red: the quantities they pin converge
//! like polylog(n)/sqrt(n) and are genuinely outside their tolerances at
//! the sizes they fix. The failure messages carry the exactly-computed
//! values; see README "Verification status".

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;

use composition_runs::asymptotics::{
    self, law_probability, mean_constant, phi_fluctuation, q_fluctuation_direct, residue_count,
    rouche_witness, solve_rho, variance_constant, variance_fluctuation, FluctuationSeries,
};
use composition_runs::hp::NumCtx;
use composition_runs::oracle::{self, Composition};
use composition_runs::series;

fn pass(n: u32, msg: &str) {
    println!("ACCEPTANCE PASS: criterion {n} — {msg}");
}

#[test]
fn criterion_01_oracle_equivalence() {
    let t0 = Instant::now();
    for n in 1..=16u32 {
        let brute = oracle::brute_counts_below(n, n as usize + 1).unwrap();
        let table = series::count_table(n as usize).unwrap();
        for (k, count) in brute.iter().enumerate().skip(1) {
            assert_eq!(
                table.count_below(k),
                &BigInt::from(*count),
                "ACCEPTANCE FAIL: criterion 1 — series vs brute at n = {n}, k = {k}"
            );
        }
    }
    // Carlitz counts (L < 2). The stated run 1, 1, 3, 4, 7, 14, 23, 39 is
    // what the oracle derives at n = 1..8 (cross-checked against the series
    // elsewhere too: 124 at n = 10).
    let carlitz: Vec<u64> = (1..=8u32)
        .map(|n| oracle::brute_counts_below(n, 2).unwrap()[2])
        .collect();
    assert_eq!(carlitz, vec![1, 1, 3, 4, 7, 14, 23, 39]);
    for (i, &c) in carlitz.iter().enumerate() {
        let n = i + 1;
        assert_eq!(
            series::count_below(n, 2).unwrap(),
            BigInt::from(c),
            "Carlitz series mismatch at n = {n}"
        );
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 60, "runtime {elapsed:?} exceeds 60 s");
    pass(1, &format!("exact oracle equivalence n <= 16 in {elapsed:.2?}"));
}

#[test]
fn criterion_02_reference_composition() {
    let c = Composition::new(vec![3, 2, 1, 4, 4, 4, 4, 4, 7, 3, 5, 5, 4, 2]).unwrap();
    assert_eq!(c.longest_run(), 5);
    assert_eq!(c.longest_run_of(4), 5);
    pass(2, "reference composition has L = 5 with the run of 4's");
}

#[test]
fn criterion_03_pole_law() {
    let t0 = Instant::now();
    let ctx = NumCtx::new(50);
    let mut sup = 0f64;
    for k in 8..=40u32 {
        let pole = solve_rho(&ctx, k, 1e-31).unwrap();
        assert!(
            ctx.to_f64(&pole.residual) <= 1e-30,
            "ACCEPTANCE FAIL: criterion 3 — residual at k = {k}"
        );
        // |rho - (1 + 2^{-k-2})/2| / (k 2^{-2k})
        let dev = ctx.abs(&ctx.sub(&pole.rho, &pole.first_order));
        let scale = ctx.mul_u64(&ctx.pow2(-2 * k as i32), k as u64);
        sup = sup.max(ctx.to_f64(&ctx.div(&dev, &scale)));
    }
    assert!(
        sup < 0.5,
        "ACCEPTANCE FAIL: criterion 3 — ratio unbounded, sup = {sup}"
    );
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 10, "runtime {elapsed:?} exceeds 10 s");
    pass(
        3,
        &format!("pole law ratio sup = {sup:.4} over k = 8..40, residuals <= 1e-30, in {elapsed:.2?}"),
    );
}

#[test]
fn criterion_04_rouche_witness() {
    let ctx = NumCtx::new(40);
    let w = rouche_witness(&ctx, 4, 4096).unwrap();
    let analytic = ctx.to_f64(&w.analytic_g_bound);
    assert!(
        (analytic - 0.2737).abs() <= 1e-4,
        "ACCEPTANCE FAIL: criterion 4 — analytic bound {analytic}"
    );
    let max_g = ctx.to_f64(&w.max_g_sampled);
    assert!(
        max_g + ctx.to_f64(&w.g_tail_bound) < analytic,
        "ACCEPTANCE FAIL: criterion 4 — sampled max |g| = {max_g}"
    );
    let min_f = ctx.to_f64(&w.min_f_sampled);
    assert!(
        min_f >= 0.5 - 1e-9,
        "ACCEPTANCE FAIL: criterion 4 — min |f| = {min_f}"
    );
    assert!(w.verdict);
    pass(
        4,
        &format!("max|g| = {max_g:.5} < 0.2737, min|f| = {min_f:.9} >= 0.5 on |z| = 3/5"),
    );
}

#[test]
fn criterion_05_residue_accuracy() {
    // The true relative errors shrink double-exponentially (1e-19 at n = 64
    // down to ~1e-143 at n = 512), so the trend is only observable at very
    // high working precision.
    let ctx = NumCtx::new(170);
    let mut prev: Option<f64> = None;
    let mut report = String::new();
    for n in [64u64, 128, 256, 512] {
        let k = 64 - (n - 1).leading_zeros(); // ceil(lg n)
        let pole = solve_rho(&ctx, k, 1e-150).unwrap();
        let res = residue_count(&ctx, n, &pole);
        let exact = ctx.from_bigint(&series::count_below(n as usize, k as usize).unwrap());
        let rel = ctx.to_f64(&ctx.div(&ctx.abs(&ctx.sub(&res, &exact)), &exact));
        report.push_str(&format!("n={n},k={k}: {rel:.2e}; "));
        if n == 512 {
            assert!(
                rel < 1e-2,
                "ACCEPTANCE FAIL: criterion 5 — rel err {rel:e} at n = 512"
            );
        }
        if let Some(p) = prev {
            assert!(
                rel < p,
                "ACCEPTANCE FAIL: criterion 5 — error not decreasing at n = {n} ({rel:e} >= {p:e})"
            );
        }
        prev = Some(rel);
    }
    pass(5, &format!("residue relative errors decrease: {report}"));
}

#[test]
fn criterion_06_law_envelope() {
    let t0 = Instant::now();
    let ctx = NumCtx::new(60);
    let mut prev: Option<f64> = None;
    let mut report = String::new();
    for m in 6..=11u32 {
        let n = 1u64 << m;
        let lo = (3 * m).div_ceil(4); // ceil((3/4) lg n)
        let hi = 2 * m;
        let mut worst = ctx.zero();
        for k in lo..=hi {
            let exact = ctx.from_ratio(&series::probability_below(n as usize, k as usize).unwrap());
            let law = law_probability(&ctx, n, k).unwrap().probability;
            worst = ctx.max(worst, ctx.abs(&ctx.sub(&exact, &law)));
        }
        let e = ctx.to_f64(&worst) * (n as f64).sqrt() / m as f64;
        report.push_str(&format!("m={m}: {e:.3e}; "));
        if let Some(p) = prev {
            assert!(
                e <= 2.0 * p,
                "ACCEPTANCE FAIL: criterion 6 — envelope grew past slack 2 at m = {m} ({e:e} > 2*{p:e})"
            );
        }
        prev = Some(e);
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 300, "runtime {elapsed:?} exceeds 5 min");
    pass(
        6,
        &format!("scaled envelope E(2^m) sqrt(2^m)/m within slack 2: {report}in {elapsed:.2?}"),
    );
}

#[test]
fn criterion_07_tails() {
    // Exact tails at n = 2048 against the stated thresholds.
    let n = 2048usize;
    // floor((3/4) lg 2048) = floor(8.25) = 8
    let k_left = 8usize;
    let p_left = series::probability_below(n, k_left).unwrap();
    let left = ratio_to_f64(&p_left);
    // right tail: P(L >= 22) = 1 - P(L < 22)
    let p_right = ratio_to_f64(&series::probability_below(n, 22).unwrap());
    let right = 1.0 - p_right;
    let right_bound = 10.0 / 2048.0;
    println!("criterion 7: exact P_2048(L < 8) = {left:.6e} (required < 1e-3)");
    println!("criterion 7: exact P_2048(L >= 22) = {right:.6e} (required < {right_bound:.4e})");
    assert!(
        right < right_bound,
        "ACCEPTANCE FAIL: criterion 7 — right tail {right:e} >= {right_bound:e}"
    );
    assert!(
        left < 1e-3,
        "ACCEPTANCE FAIL: criterion 7 — left tail: exact P_2048(L < 8) = {left:.6} is not < 1e-3. \
         The double-exponential value at this point is e^-2 ~ 0.135 and the left-tail envelope \
         e^(-n^(1/4)/4) ~ 0.186 at n = 2048; a sub-1e-3 left tail first occurs near n ~ 2^20, \
         out of reach of exact coefficient extraction. The right-tail half passes."
    );
    pass(7, "tails at n = 2048 inside stated bounds");
}

#[test]
fn criterion_08_moments() {
    // Mean trend: |exact mean - (lg n + gamma/log 2 - 5/2)| decreasing for
    // n = 2^6..2^10; variance at n = 1024 within 0.05 of the constant.
    let ctx = NumCtx::new(60);
    let mc = mean_constant(&ctx);
    let vc = variance_constant(&ctx);
    let mut prev: Option<f64> = None;
    let mut var_1024 = None;
    let mut report = String::new();
    for m in 6..=10u32 {
        let n = 1usize << m;
        let moments = series::exact_moments(n, 40).unwrap();
        let exact_mean = ctx.from_ratio(&moments.mean);
        let asym = ctx.add(&ctx.from_u64(m as u64), &mc);
        let gap = ctx.to_f64(&ctx.abs(&ctx.sub(&exact_mean, &asym)));
        report.push_str(&format!("m={m}: |mean gap| = {gap:.5}; "));
        if let Some(p) = prev {
            assert!(
                gap < p,
                "ACCEPTANCE FAIL: criterion 8 — mean gap not decreasing at m = {m}"
            );
        }
        prev = Some(gap);
        if n == 1024 {
            var_1024 = Some(ctx.to_f64(&ctx.from_ratio(&moments.variance)));
        }
    }
    let var = var_1024.unwrap();
    let constant = ctx.to_f64(&vc);
    println!("criterion 8: {report}");
    println!(
        "criterion 8: exact variance at n = 1024 is {var:.6}, constant is {constant:.6}, |diff| = {:.6}",
        (var - constant).abs()
    );
    assert!(
        (var - constant).abs() < 0.05,
        "ACCEPTANCE FAIL: criterion 8 — exact variance at n = 1024 is {var:.6}; it differs from \
         1/12 + pi^2/(6 log^2 2) = {constant:.6} by {:.4}, outside 0.05. The variance approaches \
         its constant like O(log^4 n / sqrt n); the gap first drops under 0.05 near n = 2048. \
         The mean-trend half passes.",
        (var - constant).abs()
    );
    pass(8, "moment asymptotics at desk scale");
}

#[test]
fn criterion_09_fluctuations() {
    let ctx = NumCtx::new(50);
    let tol = 1e-44;

    // peak fluctuation amplitudes over one period (256-point scan of lg x)
    let mut phi_peak = 0f64;
    let mut var_peak = 0f64;
    for i in 0..256u32 {
        let w = 12.0 + i as f64 / 256.0;
        let x = ctx.exp(&ctx.mul(&ctx.from_f64(w), &ctx.ln2()));
        let pf = phi_fluctuation(&ctx, &x, tol).unwrap();
        phi_peak = phi_peak.max(ctx.to_f64(&pf).abs());
        let vf = variance_fluctuation(&ctx, &x, tol).unwrap();
        var_peak = var_peak.max(ctx.to_f64(&vf).abs());
    }
    println!("criterion 9: Phi fluctuation peak = {phi_peak:.4e}, variance fluctuation peak = {var_peak:.4e}");
    assert!(
        (1e-6..=3e-6).contains(&phi_peak),
        "ACCEPTANCE FAIL: criterion 9 — Phi fluctuation peak {phi_peak:e} outside [1e-6, 3e-6]"
    );
    assert!(
        (5e-6..=5e-5).contains(&var_peak),
        "ACCEPTANCE FAIL: criterion 9 — variance fluctuation peak {var_peak:e} outside [5e-6, 5e-5]"
    );

    // Fourier representations vs direct sums, pointwise at K = 16
    let series16 = FluctuationSeries::new(&ctx, 16);
    let mut worst_p = 0f64;
    let mut worst_q = 0f64;
    for i in 0..=8u32 {
        let w = ctx.from_f64(10.0 + i as f64 * 0.25);
        let x = ctx.exp(&ctx.mul(&w, &ctx.ln2()));
        let p_direct = phi_fluctuation(&ctx, &x, tol).unwrap();
        let p_fourier = series16.p_at(&ctx, &w);
        worst_p = worst_p.max(ctx.to_f64(&ctx.abs(&ctx.sub(&p_direct, &p_fourier))));
        let q_direct = q_fluctuation_direct(&ctx, &x, tol).unwrap();
        let q_fourier = series16.q_at(&ctx, &w);
        worst_q = worst_q.max(ctx.to_f64(&ctx.abs(&ctx.sub(&q_direct, &q_fourier))));
    }
    assert!(
        worst_p < 1e-8,
        "ACCEPTANCE FAIL: criterion 9 — P series vs direct sum differ by {worst_p:e}"
    );
    assert!(
        worst_q < 1e-8,
        "ACCEPTANCE FAIL: criterion 9 — Q series vs direct sum differ by {worst_q:e}"
    );
    pass(
        9,
        &format!(
            "peaks {phi_peak:.3e} / {var_peak:.3e} in brackets; Fourier vs direct sums within {:.1e} / {:.1e}",
            worst_p.max(1e-99), worst_q.max(1e-99)
        ),
    );
}

#[test]
fn criterion_10_simulation() {
    let t0 = Instant::now();
    let n = 100_000u64;
    let lg_n = (n as f64).log2();

    let report = oracle::simulate(n, 200, 42, None);
    let report_again = oracle::simulate(n, 200, 42, None);
    assert_eq!(report, report_again, "simulation must be deterministic");
    let l1 = report.per_value_runs[0];
    let l2 = report.per_value_runs[1];
    assert!(
        (l1 - lg_n).abs() <= 3.0,
        "ACCEPTANCE FAIL: criterion 10 — mean L_1 = {l1} not within lg n +- 3"
    );
    let ratio = l1 / l2;
    assert!(
        (1.7..=2.3).contains(&ratio),
        "ACCEPTANCE FAIL: criterion 10 — L_1/L_2 ratio = {ratio}"
    );
    // the (1/r) lg n prediction band holds uniformly for r <= 5
    for r in 1..=5u32 {
        let pred = asymptotics::expected_run_of_r(n, r).unwrap();
        let observed = report.per_value_runs[(r - 1) as usize];
        assert!(
            (observed - pred.leading).abs() <= pred.band_halfwidth,
            "ACCEPTANCE FAIL: criterion 10 — mean L_{r} = {observed} vs predicted {}",
            pred.leading
        );
    }

    // four single-composition dumps
    let r_max = oracle::default_r_max(n);
    for seed in 1..=4u64 {
        let p = oracle::sample_profile(n, seed, r_max);
        let p_again = oracle::sample_profile(n, seed, r_max);
        assert_eq!(p, p_again);
        for r in 1..=(lg_n.floor() as u64 - 2) {
            assert!(
                p.runs[(r - 1) as usize] > 0,
                "ACCEPTANCE FAIL: criterion 10 — seed {seed}: L_{r} = 0"
            );
        }
        let r_hi = (2.0 * lg_n).ceil() as u64;
        for r in r_hi..=(r_max as u64) {
            assert_eq!(
                p.runs[(r - 1) as usize],
                0,
                "ACCEPTANCE FAIL: criterion 10 — seed {seed}: L_{r} > 0"
            );
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 120, "runtime {elapsed:?} exceeds 2 min");
    pass(
        10,
        &format!(
            "mean L_1 = {l1:.2} in lg n +- 3, L_1/L_2 = {ratio:.2}, four dumps well-shaped, in {elapsed:.2?}"
        ),
    );
}

// criterion 11 (CLI determinism and schema validation) lives in the CLI
// crate's own acceptance suite, next to the binary it exercises.

fn ratio_to_f64(r: &BigRational) -> f64 {
    let ctx = NumCtx::new(40);
    ctx.to_f64(&ctx.from_ratio(r))
}

#[test]
fn asymptotics_crosscheck_direct_sum_routes_vs_exact_moments() {
    // Phi(n/4) - 1 tracks the exact mean and Psi(n/4) + 1 the exact second
    // moment along n = 2^m (trend checks backing the moment report fields).
    let ctx = NumCtx::new(60);
    let mut prev_mean: Option<f64> = None;
    let mut prev_second: Option<f64> = None;
    for m in [6u32, 8, 10] {
        let n = 1usize << m;
        let moments = series::exact_moments(n, 30).unwrap();
        let exact_mean = ctx.from_ratio(&moments.mean);
        let exact_second =
            ctx.from_ratio(&(&moments.variance + &moments.mean * &moments.mean));
        let rep = asymptotics::moment_report(&ctx, n as u64, 16).unwrap();
        let mean_gap = ctx.to_f64(&ctx.abs(&ctx.sub(&exact_mean, &rep.phi_mean)));
        let second_gap =
            ctx.to_f64(&ctx.abs(&ctx.sub(&exact_second, &rep.psi_second_moment)));
        if let Some(p) = prev_mean {
            assert!(mean_gap < p, "phi-route gap not shrinking at m = {m}");
        }
        if let Some(p) = prev_second {
            assert!(second_gap < p, "psi-route gap not shrinking at m = {m}");
        }
        prev_mean = Some(mean_gap);
        prev_second = Some(second_gap);
    }
}
