//! Row builders behind each subcommand.

use std::collections::BTreeMap;

use composition_runs::asymptotics::{
    law_probability, moment_report_with, phi, psi_big, residue_count, rouche_witness, solve_rho,
    FluctuationSeries,
};
use composition_runs::hp::NumCtx;
use composition_runs::oracle;
use composition_runs::series;

use crate::output::OutputRecord;
use crate::CliError;

pub struct Settings {
    pub digits: u32,
    pub series_cap: usize,
    pub timestamp: Option<String>,
}

impl Settings {
    fn record(&self, command: &str, params: BTreeMap<String, String>, columns: &[&str]) -> OutputRecord {
        OutputRecord::new(command, params, self.digits, self.timestamp.clone(), columns)
    }

    fn check_cap(&self, n: usize) -> Result<(), CliError> {
        if n > self.series_cap {
            return Err(CliError::SeriesCap {
                n,
                cap: self.series_cap,
            });
        }
        Ok(())
    }
}

fn p(params: &mut BTreeMap<String, String>, k: &str, v: impl ToString) {
    params.insert(k.to_string(), v.to_string());
}

pub fn cmd_exact(
    st: &Settings,
    ns: Vec<usize>,
    k_max: Option<usize>,
    sweep_label: Option<String>,
) -> Result<OutputRecord, CliError> {
    let mut params = BTreeMap::new();
    if let Some(s) = &sweep_label {
        p(&mut params, "sweep", s);
    } else {
        p(&mut params, "n", ns[0]);
    }
    if let Some(k) = k_max {
        p(&mut params, "k_max", k);
    }
    let mut rec = st.record(
        "exact",
        params,
        &["n", "k", "count", "pmf_exact", "pmf", "cdf_exact", "cdf"],
    );
    for n in ns {
        if n == 0 {
            return Err(CliError::Core(composition_runs::Error::ZeroSize));
        }
        st.check_cap(n)?;
        let dist = series::exact_distribution(n)?;
        let hi = k_max.unwrap_or(n).min(n);
        for k in 1..=hi {
            let count = dist.count_eq(k);
            let pmf = dist.pmf(k);
            let cdf = dist.cdf_below(k + 1);
            rec.push_row(vec![
                n.to_string(),
                k.to_string(),
                count.to_string(),
                pmf.to_string(),
                series::decimal_string(&pmf, st.digits),
                cdf.to_string(),
                series::decimal_string(&cdf, st.digits),
            ]);
        }
    }
    Ok(rec)
}

pub fn cmd_rho(st: &Settings, ks: (u32, u32), tol: f64) -> Result<OutputRecord, CliError> {
    let mut params = BTreeMap::new();
    p(&mut params, "k", format!("{}..{}", ks.0, ks.1));
    p(&mut params, "tol", format!("{tol:e}"));
    let mut rec = st.record(
        "rho",
        params,
        &["k", "rho", "first_order", "residual", "isolation_proven"],
    );
    let ctx = NumCtx::new(st.digits);
    for k in ks.0..=ks.1 {
        let pole = solve_rho(&ctx, k, tol)?;
        rec.push_row(vec![
            k.to_string(),
            ctx.decimal(&pole.rho, st.digits),
            ctx.decimal(&pole.first_order, st.digits),
            ctx.decimal(&pole.residual, 3),
            pole.isolation_proven.to_string(),
        ]);
    }
    Ok(rec)
}

pub fn cmd_compare(st: &Settings, n: usize) -> Result<OutputRecord, CliError> {
    if n < 2 {
        return Err(CliError::Usage("compare needs --n >= 2".into()));
    }
    st.check_cap(n)?;
    let mut params = BTreeMap::new();
    p(&mut params, "n", n);
    let mut rec = st.record(
        "compare",
        params,
        &[
            "k",
            "exact",
            "double_exponential",
            "residue_based",
            "abs_err",
            "region",
        ],
    );
    let ctx = NumCtx::new(st.digits);
    let lg_n = (n as f64).log2();
    let k_hi = (n + 1).min((2.0 * lg_n).ceil() as usize + 8);
    let tol = 10f64.powi(-(st.digits as i32 - 12));
    let total = ctx.pow2(n as i32 - 1);
    for k in 1..=k_hi {
        let exact_rational = series::probability_below(n, k)?;
        let exact = ctx.from_ratio(&exact_rational);
        let law = law_probability(&ctx, n as u64, k as u32)?;
        let abs_err = ctx.abs(&ctx.sub(&exact, &law.probability));
        let residue_cell = if k >= 2 {
            let pole = solve_rho(&ctx, k as u32, tol)?;
            let approx = residue_count(&ctx, n as u64, &pole);
            ctx.decimal(&ctx.div(&approx, &total), st.digits)
        } else {
            String::new()
        };
        rec.push_row(vec![
            k.to_string(),
            ctx.decimal(&exact, st.digits),
            ctx.decimal(&law.probability, st.digits),
            residue_cell,
            ctx.decimal(&abs_err, 3),
            law.region.label().to_string(),
        ]);
    }
    Ok(rec)
}

pub fn cmd_moments(st: &Settings, ns: Vec<usize>, terms: u32) -> Result<OutputRecord, CliError> {
    let mut params = BTreeMap::new();
    p(
        &mut params,
        "n",
        ns.iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    );
    p(&mut params, "terms", terms);
    let mut rec = st.record(
        "moments",
        params,
        &[
            "n",
            "exact_mean",
            "phi_mean",
            "mean_asym",
            "exact_var",
            "var_asym",
            "p_lg_n",
            "q_lg_n",
        ],
    );
    let ctx = NumCtx::new(st.digits);
    let series_cache = FluctuationSeries::new(&ctx, terms);
    for n in ns {
        if n < 2 {
            return Err(CliError::Usage("moments needs n >= 2".into()));
        }
        st.check_cap(n)?;
        let exact = series::exact_moments(n, st.digits)?;
        let rep = moment_report_with(&ctx, n as u64, terms, &series_cache)?;
        rec.push_row(vec![
            n.to_string(),
            exact.mean_decimal,
            ctx.decimal(&rep.phi_mean, st.digits),
            ctx.decimal(&rep.mean_asym, st.digits),
            exact.variance_decimal,
            ctx.decimal(&rep.var_asym, st.digits),
            ctx.decimal(&rep.fluctuation_p, 8),
            ctx.decimal(&rep.fluctuation_q, 8),
        ]);
    }
    Ok(rec)
}

/// Sweeps the two fluctuation curves: `Phi(x/4) - lg x - 1` (constant part
/// of the mean) and `Psi(x/4) + 1 - (Phi(x/4) - 1)^2` (constant part of the
/// variance) over `w = lg x` in `[from, to]`.
pub fn cmd_moments_figure2(
    st: &Settings,
    from: f64,
    to: f64,
    step: f64,
) -> Result<OutputRecord, CliError> {
    if step.is_nan() || step <= 0.0 || to < from {
        return Err(CliError::Usage(
            "--figure2 needs --from <= --to and --step > 0".into(),
        ));
    }
    let mut params = BTreeMap::new();
    p(&mut params, "from", from);
    p(&mut params, "to", to);
    p(&mut params, "step", step);
    let mut rec = st.record("moments", params, &["w", "mean_part", "var_part"]);
    let ctx = NumCtx::new(st.digits);
    let tol = 10f64.powi(-(st.digits as i32 + 6));
    let steps = ((to - from) / step).floor() as usize;
    let one = ctx.from_u64(1);
    for i in 0..=steps {
        let w = from + i as f64 * step;
        // x/4 at lg x = w
        let x4 = ctx.exp(&ctx.mul(&ctx.from_f64(w - 2.0), &ctx.ln2()));
        let phi_v = phi(&ctx, &x4, tol)?.value;
        let psi_v = psi_big(&ctx, &x4, tol)?.value;
        let mean_part = ctx.sub(&ctx.sub(&phi_v, &ctx.from_f64(w)), &one);
        let phi_m1 = ctx.sub(&phi_v, &one);
        let var_part = ctx.sub(&ctx.add(&psi_v, &one), &ctx.mul(&phi_m1, &phi_m1));
        rec.push_row(vec![
            format!("{w}"),
            ctx.decimal(&mean_part, st.digits),
            ctx.decimal(&var_part, st.digits),
        ]);
    }
    Ok(rec)
}

pub fn cmd_simulate(
    st: &Settings,
    n: u64,
    trials: u64,
    seeds: (u64, u64),
    r_max: Option<u32>,
    single: bool,
) -> Result<OutputRecord, CliError> {
    if n == 0 {
        return Err(CliError::Core(composition_runs::Error::ZeroSize));
    }
    let r_max = r_max.unwrap_or_else(|| oracle::default_r_max(n));
    let mut params = BTreeMap::new();
    p(&mut params, "n", n);
    p(&mut params, "r_max", r_max);
    p(
        &mut params,
        "seed",
        if seeds.0 == seeds.1 {
            seeds.0.to_string()
        } else {
            format!("{}..{}", seeds.0, seeds.1)
        },
    );
    if single {
        p(&mut params, "mode", "single");
        let mut rec = st.record(
            "simulate",
            params,
            &["seed", "r", "run_length"],
        );
        for seed in seeds.0..=seeds.1 {
            let profile = oracle::sample_profile(n, seed, r_max);
            for r in 1..=r_max {
                rec.push_row(vec![
                    seed.to_string(),
                    r.to_string(),
                    profile.runs[(r - 1) as usize].to_string(),
                ]);
            }
        }
        Ok(rec)
    } else {
        if trials == 0 {
            return Err(CliError::Usage("simulate needs --trials >= 1".into()));
        }
        if seeds.0 != seeds.1 {
            return Err(CliError::Usage(
                "seed ranges only apply to --single mode".into(),
            ));
        }
        p(&mut params, "mode", "aggregate");
        p(&mut params, "trials", trials);
        let mut rec = st.record("simulate", params, &["stat", "r", "value"]);
        let report = oracle::simulate(n, trials, seeds.0, Some(r_max));
        rec.push_row(vec![
            "longest_run_mean".into(),
            String::new(),
            format!("{}", report.longest_run_mean),
        ]);
        rec.push_row(vec![
            "largest_part_mean".into(),
            String::new(),
            format!("{}", report.largest_part_mean),
        ]);
        for (i, mean) in report.per_value_runs.iter().enumerate() {
            rec.push_row(vec![
                "run_of_r_mean".into(),
                (i + 1).to_string(),
                format!("{mean}"),
            ]);
        }
        Ok(rec)
    }
}

pub fn cmd_rouche(st: &Settings, k: u32, samples: u32) -> Result<OutputRecord, CliError> {
    let mut params = BTreeMap::new();
    p(&mut params, "k", k);
    p(&mut params, "samples", samples);
    let mut rec = st.record(
        "rouche",
        params,
        &[
            "k",
            "samples",
            "max_g_sampled",
            "g_tail_bound",
            "analytic_g_bound",
            "min_f_sampled",
            "analytic_f_min",
            "verdict",
        ],
    );
    let ctx = NumCtx::new(st.digits);
    let w = rouche_witness(&ctx, k, samples)?;
    rec.push_row(vec![
        k.to_string(),
        samples.to_string(),
        ctx.decimal(&w.max_g_sampled, st.digits),
        ctx.decimal(&w.g_tail_bound, 3),
        ctx.decimal(&w.analytic_g_bound, st.digits),
        ctx.decimal(&w.min_f_sampled, st.digits),
        "0.5".to_string(),
        w.verdict.to_string(),
    ]);
    Ok(rec)
}
