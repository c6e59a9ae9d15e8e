//! Numeric asymptotics of the longest-run distribution.
//!
//! The generating function `C^<k>(z) = 1/D_k(z)` has a simple dominant pole
//! `rho_k` in `(1/2, 3/5)`, the unique solution of `h(z) - g(z) = 1` with
//! `h(z) = z/(1-z)` and `g(z) = sum_{j>=1} z^{jk} (1-z^j)/(1-z^{jk})`.
//! From it:
//!
//! - `C_n^<k> ~ -rho_k^{-n-1} / D_k'(rho_k)` (residue approximation),
//! - `P_n(L < k) ~ exp(-n / 2^{k+2})` in the central window
//!   `(3/4) lg n <= k <= 2 lg n`, a double-exponential family indexed by the
//!   fractional part of `lg n`,
//! - `E_n(L) = lg n + gamma/log 2 - 5/2 + P(lg n) + o(1)` and
//!   `V_n(L) = 1/12 + pi^2/(6 log^2 2) + [Q - (2 gamma/log 2) P - P^2](lg n) + o(1)`,
//!   where `P`, `Q` are period-1 Fourier fluctuation series with amplitudes
//!   near 1e-6 and 1e-5 (hence the high-precision arithmetic).
//!
//! Truncated infinite sums here (`g`, `g'`, `Phi`, `Psi`) all carry certified
//! geometric tail bounds rather than the looser expansions used in the
//! source analysis.

use astro_float::BigFloat;
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::hp::{Complex, NumCtx};
use crate::special::{digamma, gamma};

/// Default Fourier truncation. `Gamma(2 i k pi / log 2)` decays like
/// `e^{-pi^2 k / log 2}` (about 1e-27 per step), so 16 terms exceed any
/// precision this crate runs at.
pub const DEFAULT_FOURIER_TERMS: u32 = 16;

/// A tail-bounded partial sum: `value` plus an unconditional bound on the
/// discarded tail.
#[derive(Debug, Clone)]
pub struct SumEval {
    pub value: BigFloat,
    pub tail_bound: BigFloat,
    pub terms: usize,
}

/// Evaluates `g(z) = sum_{j>=1} z^{jk} (1-z^j)/(1-z^{jk})` for real
/// `z` in `(0, 1)`, stopping once the geometric tail bound
/// `(1+z) z^{(J+1)k} / (1-z^k)^2` drops below `tol`.
pub fn g_eval(ctx: &NumCtx, z: &BigFloat, k: u32, tol: f64) -> Result<SumEval> {
    let one = ctx.from_u64(1);
    if z.is_zero() || !z.is_positive() || !ctx.lt(z, &one) {
        return Err(Error::OutOfDomain {
            what: "g(z) needs 0 < z < 1".into(),
        });
    }
    if k < 2 {
        return Err(Error::InvalidRunBound { k, min: 2 });
    }
    let tol = ctx.from_f64(tol);
    let q = ctx.powi(z, k as usize); // z^k
    let one_minus_q = ctx.sub(&one, &q);
    let head = ctx.div(&ctx.add(&one, z), &ctx.mul(&one_minus_q, &one_minus_q));

    let mut value = ctx.zero();
    let mut zj = one.clone(); // z^j
    let mut zjk = one.clone(); // z^{jk}
    let mut terms = 0usize;
    loop {
        zj = ctx.mul(&zj, z);
        zjk = ctx.mul(&zjk, &q);
        let term = ctx.div(
            &ctx.mul(&zjk, &ctx.sub(&one, &zj)),
            &ctx.sub(&one, &zjk),
        );
        value = ctx.add(&value, &term);
        terms += 1;
        // tail after J terms: sum_{j>J} <= (1+z)/(1-z^k) * z^{(J+1)k}/(1-z^k)
        let tail_bound = ctx.mul(&head, &ctx.mul(&zjk, &q));
        if ctx.lt(&tail_bound, &tol) {
            return Ok(SumEval {
                value,
                tail_bound,
                terms,
            });
        }
    }
}

/// `g` at a complex point (used on the circle |z| = 3/5), with the same
/// tail bound taken at `|z|`.
fn g_eval_complex(ctx: &NumCtx, z: &Complex, k: u32, tol: f64) -> (Complex, BigFloat) {
    let one = ctx.c_real(ctx.from_u64(1));
    let tol = ctx.from_f64(tol);
    let r = ctx.cabs(z);
    let q_abs = ctx.powi(&r, k as usize);
    let one_minus_q = ctx.sub(&ctx.from_u64(1), &q_abs);
    let head = ctx.div(
        &ctx.add(&ctx.from_u64(1), &r),
        &ctx.mul(&one_minus_q, &one_minus_q),
    );

    let q = {
        // z^k by repeated squaring through cmul
        let mut acc = one.clone();
        let mut base = z.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = ctx.cmul(&acc, &base);
            }
            base = ctx.cmul(&base, &base);
            e >>= 1;
        }
        acc
    };
    let mut value = ctx.c_real(ctx.zero());
    let mut zj = one.clone();
    let mut zjk = one.clone();
    let mut qa = ctx.from_u64(1);
    loop {
        zj = ctx.cmul(&zj, z);
        zjk = ctx.cmul(&zjk, &q);
        qa = ctx.mul(&qa, &q_abs);
        let term = ctx.cdiv(
            &ctx.cmul(&zjk, &ctx.csub(&one, &zj)),
            &ctx.csub(&one, &zjk),
        );
        value = ctx.cadd(&value, &term);
        let tail_bound = ctx.mul(&head, &ctx.mul(&qa, &q_abs));
        if ctx.lt(&tail_bound, &tol) {
            return (value, tail_bound);
        }
    }
}

/// Term-wise derivative `g'(z)` for real `z` in `(0, 1)`, tail-bounded.
fn g_prime(ctx: &NumCtx, z: &BigFloat, k: u32, tol: f64) -> BigFloat {
    let one = ctx.from_u64(1);
    let tol = ctx.from_f64(tol);
    let kk = ctx.from_u64(k as u64);
    let q = ctx.powi(z, k as usize);
    let one_minus_q = ctx.sub(&one, &q);
    let omq2 = ctx.mul(&one_minus_q, &one_minus_q);
    // |t_j'| <= j z^{jk-1} [ (k+1)/(1-q) + k/(1-q)^2 ]
    let c1 = ctx.add(
        &ctx.div(&ctx.add(&kk, &one), &one_minus_q),
        &ctx.div(&kk, &omq2),
    );

    let mut sum = ctx.zero();
    let mut zj = one.clone();
    let mut zjk = one.clone();
    let mut j = 0u64;
    loop {
        j += 1;
        zj = ctx.mul(&zj, z);
        zjk = ctx.mul(&zjk, &q);
        let jk = j * k as u64;
        let a = ctx.mul(&zjk, &ctx.sub(&one, &zj)); // z^{jk}(1-z^j)
        let b = ctx.sub(&one, &zjk); // 1 - z^{jk}
        let zjk_over_z = ctx.div(&zjk, z);
        // da = jk z^{jk-1}(1-z^j) - j z^{jk+j-1}
        let da = ctx.sub(
            &ctx.mul_u64(&ctx.mul(&zjk_over_z, &ctx.sub(&one, &zj)), jk),
            &ctx.mul_u64(&ctx.div(&ctx.mul(&zjk, &zj), z), j),
        );
        // db = -jk z^{jk-1}
        let db = ctx.mul_u64(&zjk_over_z, jk).neg();
        let term = ctx.div(
            &ctx.sub(&ctx.mul(&da, &b), &ctx.mul(&a, &db)),
            &ctx.mul(&b, &b),
        );
        sum = ctx.add(&sum, &term);
        // tail <= c1/z * q^{J+1} (J+1) / (1-q)^2
        let tail = ctx.mul(
            &ctx.div(&c1, z),
            &ctx.div(&ctx.mul_u64(&ctx.mul(&zjk, &q), j + 1), &omq2),
        );
        if ctx.lt(&tail, &tol) {
            return sum;
        }
    }
}

/// `D_k'(z) = -1/(1-z)^2 + g'(z)`, evaluated by tail-bounded summation.
pub fn d_prime(ctx: &NumCtx, z: &BigFloat, k: u32, tol: f64) -> BigFloat {
    let one = ctx.from_u64(1);
    let one_minus = ctx.sub(&one, z);
    let lead = ctx.recip(&ctx.mul(&one_minus, &one_minus)).neg();
    ctx.add(&lead, &g_prime(ctx, z, k, tol))
}

/// Dominant pole estimate for `C^<k>(z)`.
#[derive(Debug, Clone)]
pub struct PoleEstimate {
    pub k: u32,
    /// The pole `rho_k`.
    pub rho: BigFloat,
    /// Certified enclosing bracket from the bisection polish.
    pub bracket: (BigFloat, BigFloat),
    /// `|D_k(rho)| = |h(rho) - g(rho) - 1|` at the returned point.
    pub residual: BigFloat,
    /// First-order estimate `(1 + 2^{-k-2}) / 2`.
    pub first_order: BigFloat,
    /// Tail bound of the truncated `g` sum at `rho`.
    pub tail_bound: BigFloat,
    /// Pole isolation inside |z| < 3/5 is only established for k >= 4;
    /// smaller k still solve but carry this flag as false.
    pub isolation_proven: bool,
    /// Fixed-point iterations taken before the bisection polish.
    pub iterations: usize,
}

/// `h(z) - g(z) - 1 = -D_k(z)`; negative below the pole, positive above.
fn pole_equation(ctx: &NumCtx, z: &BigFloat, k: u32, tol: f64) -> BigFloat {
    let one = ctx.from_u64(1);
    let h = ctx.div(z, &ctx.sub(&one, z));
    let g = g_eval(ctx, z, k, tol).expect("z inside (0,1)").value;
    ctx.sub(&ctx.sub(&h, &g), &one)
}

/// Solves for the dominant pole `rho_k` in `(1/2, 3/5)`.
///
/// Runs the fixed-point iteration `z <- (1 + g(z))/(2 + g(z))` from
/// `z_0 = 1/2` (iterates increase monotonically toward the pole), then
/// polishes with bisection on the sign of `h - g - 1` for a certified
/// bracket. `tol` bounds the accepted residual `|D_k(rho)|`.
pub fn solve_rho(ctx: &NumCtx, k: u32, tol: f64) -> Result<PoleEstimate> {
    if k < 2 {
        return Err(Error::InvalidRunBound { k, min: 2 });
    }
    let feasible = 10f64.powi(-(ctx.digits() as i32 - 10));
    if tol < feasible {
        return Err(Error::ToleranceInfeasible {
            requested: tol,
            digits: ctx.digits(),
        });
    }
    let sum_tol = tol * 2f64.powi(-16);
    let tol_bf = ctx.from_f64(tol);
    let one = ctx.from_u64(1);
    let two = ctx.from_u64(2);

    // fixed-point stage
    let mut z = ctx.from_f64(0.5);
    let rounding_slack = ctx.pow2(-(ctx.precision_bits() as i32 - 16));
    let mut iterations = 0usize;
    let mut step;
    const MAX_FP_ITERATIONS: usize = 200_000;
    loop {
        let g = g_eval(ctx, &z, k, sum_tol)?.value;
        let next = ctx.div(&ctx.add(&one, &g), &ctx.add(&two, &g));
        step = ctx.sub(&next, &z);
        // monotone increase up to rounding
        assert!(
            !ctx.lt(&step, &rounding_slack.neg()),
            "fixed-point iterate decreased at k = {k}"
        );
        z = next;
        iterations += 1;
        if ctx.lt(&step, &tol_bf) {
            break;
        }
        if iterations >= MAX_FP_ITERATIONS {
            return Err(Error::NonConvergence { iterations });
        }
    }

    // bisection polish: find a sign-changing bracket around z
    let widen = ctx.max(step.abs(), ctx.from_f64(tol));
    let mut lo = ctx.sub(&z, &widen);
    let mut hi = ctx.add(&z, &ctx.mul(&widen, &ctx.from_u64(16)));
    if !ctx.lt(&pole_equation(ctx, &lo, k, sum_tol), &ctx.zero()) || !lo.is_positive() {
        lo = ctx.from_f64(0.5);
    }
    let mut tries = 0;
    while !ctx.lt(&ctx.zero(), &pole_equation(ctx, &hi, k, sum_tol)) {
        hi = ctx.add(&z, &ctx.mul(&ctx.sub(&hi, &z), &two));
        tries += 1;
        if tries > 64 || ctx.lt(&ctx.from_f64(0.6), &hi) {
            hi = ctx.from_f64(0.6); // h(0.6) - g(0.6) > 1 for every k >= 2
            break;
        }
    }

    let width_target = ctx.from_f64(tol / 32.0);
    let half = ctx.from_f64(0.5);
    let mut mid = ctx.mul(&ctx.add(&lo, &hi), &half);
    const MAX_BISECTIONS: usize = 4096;
    for _ in 0..MAX_BISECTIONS {
        let f = pole_equation(ctx, &mid, k, sum_tol);
        if ctx.lt(&f, &ctx.zero()) {
            lo = mid.clone();
        } else {
            hi = mid.clone();
        }
        mid = ctx.mul(&ctx.add(&lo, &hi), &half);
        if ctx.lt(&ctx.sub(&hi, &lo), &width_target) {
            break;
        }
    }

    let g_final = g_eval(ctx, &mid, k, sum_tol)?;
    let h = ctx.div(&mid, &ctx.sub(&one, &mid));
    let residual = ctx.sub(&ctx.sub(&h, &g_final.value), &one).abs();
    if !ctx.le(&residual, &tol_bf) {
        return Err(Error::NonConvergence { iterations });
    }
    let first_order = ctx.mul(&ctx.add(&one, &ctx.pow2(-(k as i32) - 2)), &half);
    Ok(PoleEstimate {
        k,
        rho: mid,
        bracket: (lo, hi),
        residual,
        first_order,
        tail_bound: g_final.tail_bound,
        isolation_proven: k >= 4,
        iterations,
    })
}

/// First fixed-point iterate `z_1 = (1 + g(1/2))/(2 + g(1/2))`, which should
/// match `1/2 + 2^{-k-3} + O(2^{-2k})`.
pub fn first_iterate(ctx: &NumCtx, k: u32) -> Result<BigFloat> {
    let g = g_eval(ctx, &ctx.from_f64(0.5), k, 1e-60)?.value;
    let one = ctx.from_u64(1);
    Ok(ctx.div(&ctx.add(&one, &g), &ctx.add(&ctx.from_u64(2), &g)))
}

/// Numeric witness of the pole-isolation bound on the circle |z| = 3/5.
#[derive(Debug, Clone)]
pub struct RoucheWitness {
    pub k: u32,
    pub samples: u32,
    /// Largest sampled `|g(z)|` over the circle.
    pub max_g_sampled: BigFloat,
    /// Tail bound covering the truncation of each `g` evaluation.
    pub g_tail_bound: BigFloat,
    /// Analytic bound `1.6 (0.6)^k / (1 - 0.6^k)^2`.
    pub analytic_g_bound: BigFloat,
    /// Smallest sampled `|f(z)| = |1 - z/(1-z)|`; analytically >= 1/2.
    pub min_f_sampled: BigFloat,
    /// True iff `max|g| + tail < min|f|` over the samples.
    pub verdict: bool,
}

/// Samples `|g|` and `|f|` on `|z| = 3/5` to witness `|g| < |f|` there.
///
/// The isolation argument is only made for `k >= 4` (the analytic `g` bound
/// 0.2737 needs it), so smaller `k` are refused; `samples` must be at least
/// 1024 equally spaced points.
pub fn rouche_witness(ctx: &NumCtx, k: u32, samples: u32) -> Result<RoucheWitness> {
    if k < 4 {
        return Err(Error::InvalidRunBound { k, min: 4 });
    }
    if samples < 1024 {
        return Err(Error::InsufficientSamples {
            got: samples,
            need: 1024,
        });
    }
    let tol = 1e-40f64.max(10f64.powi(-(ctx.digits() as i32)));
    let one = ctx.from_u64(1);
    let radius = ctx.div(&ctx.from_u64(3), &ctx.from_u64(5));
    let two_pi = ctx.mul(&ctx.from_u64(2), &ctx.pi());

    let mut max_g = ctx.zero();
    let mut g_tail = ctx.zero();
    let mut min_f: Option<BigFloat> = None;
    for t in 0..samples {
        let theta = ctx.div(
            &ctx.mul_u64(&two_pi, t as u64),
            &ctx.from_u64(samples as u64),
        );
        let z = ctx.cscale(&ctx.cis(&theta), &radius);
        let (g, tail) = g_eval_complex(ctx, &z, k, tol);
        let g_abs = ctx.cabs(&g);
        max_g = ctx.max(max_g, g_abs);
        g_tail = ctx.max(g_tail, tail);
        // f(z) = 1 - z/(1-z)
        let f = ctx.csub(
            &ctx.c_real(one.clone()),
            &ctx.cdiv(&z, &ctx.csub(&ctx.c_real(one.clone()), &z)),
        );
        let f_abs = ctx.cabs(&f);
        min_f = Some(match min_f {
            None => f_abs,
            Some(m) => ctx.min(m, f_abs),
        });
    }
    let min_f = min_f.expect("samples >= 1024");

    // 1.6 * 0.6^k / (1 - 0.6^k)^2
    let point6 = ctx.div(&ctx.from_u64(3), &ctx.from_u64(5));
    let p6k = ctx.powi(&point6, k as usize);
    let denom = ctx.sub(&one, &p6k);
    let analytic_g_bound = ctx.div(
        &ctx.mul(&ctx.from_f64(1.6), &p6k),
        &ctx.mul(&denom, &denom),
    );
    let verdict = ctx.lt(&ctx.add(&max_g, &g_tail), &min_f);
    Ok(RoucheWitness {
        k,
        samples,
        max_g_sampled: max_g,
        g_tail_bound: g_tail,
        analytic_g_bound,
        min_f_sampled: min_f,
        verdict,
    })
}

/// Residue approximation `C_n^<k> ~ -rho^{-n-1} / D_k'(rho)`.
pub fn residue_count(ctx: &NumCtx, n: u64, pole: &PoleEstimate) -> BigFloat {
    let tol = 10f64.powi(-(ctx.digits() as i32 + 6));
    let dp = d_prime(ctx, &pole.rho, pole.k, tol);
    let rho_pow = ctx.powi(&ctx.recip(&pole.rho), (n + 1) as usize);
    ctx.div(&rho_pow, &dp).neg()
}

/// Where an evaluation point `(n, k)` falls relative to the central window
/// `(3/4) lg n <= k <= 2 lg n` of the double-exponential law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Inside the window: the law holds with relative error O(log n / sqrt n).
    Central,
    /// `k < (3/4) lg n`: probability bounded by O(e^{-n^{1/4}/4}).
    LeftTail,
    /// `k > 2 lg n`: `P(L >= k)` bounded by O(2^{-y}/n), `y = k - 2 lg n`.
    RightTail,
}

impl Region {
    pub fn label(&self) -> &'static str {
        match self {
            Region::Central => "central",
            Region::LeftTail => "left-tail",
            Region::RightTail => "right-tail",
        }
    }
}

/// The double-exponential law `P_n(L < k) ~ e^{-n/2^{k+2}}` at one point.
#[derive(Debug, Clone)]
pub struct AsymptoticLaw {
    pub n: u64,
    pub k: u32,
    /// `h = k - floor(lg n)`, the offset used by the `h`-form of the law.
    pub h: i64,
    /// `omega(n) = 2^{lg n - floor(lg n)}`.
    pub omega: BigFloat,
    /// `e^{-n/2^{k+2}}`, identically `e^{-omega(n) 2^{-h-2}}`.
    pub probability: BigFloat,
    pub region: Region,
    /// The applicable tail bound expression outside the central window.
    pub tail_bound: Option<BigFloat>,
}

fn floor_lg(n: u64) -> u32 {
    63 - n.leading_zeros()
}

/// Classifies `(n, k)` against the central window with exact integer
/// comparisons: `(3/4) lg n <= k  <=>  n^3 <= 2^{4k}` and
/// `k <= 2 lg n  <=>  2^k <= n^2`.
fn classify(n: u64, k: u32) -> Region {
    let n = BigInt::from(n);
    let n3 = &n * &n * &n;
    if n3 > (BigInt::from(1) << (4 * k as usize)) {
        Region::LeftTail
    } else if (BigInt::from(1) << (k as usize)) > &n * &n {
        Region::RightTail
    } else {
        Region::Central
    }
}

/// Evaluates the double-exponential law at `(n, k)`.
///
/// Outside the central window the value is still returned; `region` and
/// `tail_bound` flag which tail estimate applies instead.
pub fn law_probability(ctx: &NumCtx, n: u64, k: u32) -> Result<AsymptoticLaw> {
    if n < 2 || k < 1 {
        return Err(Error::OutOfDomain {
            what: format!("law needs n >= 2 and k >= 1, got n = {n}, k = {k}"),
        });
    }
    let flg = floor_lg(n);
    let h = k as i64 - flg as i64;
    let omega = ctx.mul(&ctx.from_u64(n), &ctx.pow2(-(flg as i32)));
    // exponent n / 2^{k+2}, exact in binary
    let x = ctx.mul(&ctx.from_u64(n), &ctx.pow2(-(k as i32) - 2));
    let probability = ctx.exp(&x.neg());
    let region = classify(n, k);
    let tail_bound = match region {
        Region::Central => None,
        Region::LeftTail => {
            // e^{-n^{1/4}/4}
            let root4 = ctx.sqrt(&ctx.sqrt(&ctx.from_u64(n)));
            Some(ctx.exp(&ctx.div(&root4, &ctx.from_u64(4)).neg()))
        }
        Region::RightTail => {
            // 2^{-y}/n with y = k - 2 lg n
            let y = ctx.sub(
                &ctx.from_u64(k as u64),
                &ctx.mul_u64(&ctx.log2(&ctx.from_u64(n)), 2),
            );
            let two_pow = ctx.exp(&ctx.mul(&y, &ctx.ln2()).neg());
            Some(ctx.div(&two_pow, &ctx.from_u64(n)))
        }
    };
    Ok(AsymptoticLaw {
        n,
        k,
        h,
        omega,
        probability,
        region,
        tail_bound,
    })
}

/// `Phi(x) = sum_{h>=0} (1 - e^{-x/2^h})`, stopping once the geometric
/// tail bound `2 x / 2^h` is below `tol`.
pub fn phi(ctx: &NumCtx, x: &BigFloat, tol: f64) -> Result<SumEval> {
    if !x.is_positive() {
        return Err(Error::OutOfDomain {
            what: "Phi(x) needs x > 0".into(),
        });
    }
    let tol = ctx.from_f64(tol);
    let one = ctx.from_u64(1);
    let half = ctx.from_f64(0.5);
    let mut u = x.clone();
    let mut value = ctx.zero();
    let mut terms = 0usize;
    loop {
        // tail from h on: sum_{i>=h} (1 - e^{-u_i}) <= sum u_i = 2u
        let tail_bound = ctx.mul_u64(&u, 2);
        if terms > 0 && ctx.lt(&tail_bound, &tol) {
            return Ok(SumEval {
                value,
                tail_bound,
                terms,
            });
        }
        value = ctx.add(&value, &ctx.sub(&one, &ctx.exp(&u.neg())));
        u = ctx.mul(&u, &half);
        terms += 1;
    }
}

/// `Psi(x) = sum_{h>=0} (2h - 1)(1 - e^{-x/2^h})`, tail-bounded by
/// `sum_{i>=h} (2i-1) x/2^i = (4h + 2) x / 2^h`.
pub fn psi_big(ctx: &NumCtx, x: &BigFloat, tol: f64) -> Result<SumEval> {
    if !x.is_positive() {
        return Err(Error::OutOfDomain {
            what: "Psi(x) needs x > 0".into(),
        });
    }
    let tol = ctx.from_f64(tol);
    let one = ctx.from_u64(1);
    let half = ctx.from_f64(0.5);
    let mut u = x.clone();
    let mut value = ctx.zero();
    let mut h = 0u64;
    loop {
        let tail_bound = ctx.mul_u64(&u, 4 * h + 2);
        if h > 0 && ctx.lt(&tail_bound, &tol) {
            return Ok(SumEval {
                value,
                tail_bound,
                terms: h as usize,
            });
        }
        let t = ctx.sub(&one, &ctx.exp(&u.neg()));
        let w = ctx.from_i64(2 * h as i64 - 1);
        value = ctx.add(&value, &ctx.mul(&w, &t));
        u = ctx.mul(&u, &half);
        h += 1;
    }
}

/// The Fourier fluctuation series
///
/// ```text
/// P(w) = -(1/log 2) sum_{k != 0} Gamma(chi_k) e^{-2 i k pi w},
/// Q(w) = (2/log^2 2) sum_{k != 0} psi(chi_k) Gamma(chi_k) e^{-2 i k pi w},
/// ```
///
/// with `chi_k = 2 i k pi / log 2`. Coefficients are cached so period scans
/// only pay for the gamma/digamma evaluations once.
pub struct FluctuationSeries {
    terms: u32,
    /// `Gamma(chi_k)` and `Gamma(chi_{-k})` for k = 1..=terms.
    gamma_pos: Vec<Complex>,
    gamma_neg: Vec<Complex>,
    /// `psi(chi_k) Gamma(chi_k)` and the mirror.
    psi_gamma_pos: Vec<Complex>,
    psi_gamma_neg: Vec<Complex>,
}

impl FluctuationSeries {
    pub fn new(ctx: &NumCtx, terms: u32) -> Self {
        assert!(terms >= 1, "need at least one Fourier term");
        let base = ctx.div(&ctx.mul(&ctx.from_u64(2), &ctx.pi()), &ctx.ln2());
        let mut gamma_pos = Vec::new();
        let mut gamma_neg = Vec::new();
        let mut psi_gamma_pos = Vec::new();
        let mut psi_gamma_neg = Vec::new();
        for k in 1..=terms {
            let y = ctx.mul_u64(&base, k as u64);
            let chi = ctx.c(ctx.zero(), y.clone());
            let chi_neg = ctx.c(ctx.zero(), y.neg());
            let g_pos = gamma(ctx, &chi);
            let g_neg = gamma(ctx, &chi_neg);
            psi_gamma_pos.push(ctx.cmul(&digamma(ctx, &chi), &g_pos));
            psi_gamma_neg.push(ctx.cmul(&digamma(ctx, &chi_neg), &g_neg));
            gamma_pos.push(g_pos);
            gamma_neg.push(g_neg);
        }
        FluctuationSeries {
            terms,
            gamma_pos,
            gamma_neg,
            psi_gamma_pos,
            psi_gamma_neg,
        }
    }

    pub fn terms(&self) -> u32 {
        self.terms
    }

    fn sum(&self, ctx: &NumCtx, w: &BigFloat, pos: &[Complex], neg: &[Complex]) -> Complex {
        let two_pi_w = ctx.mul(&ctx.mul(&ctx.from_u64(2), &ctx.pi()), w);
        let mut acc = ctx.c_real(ctx.zero());
        for k in 1..=self.terms {
            let theta = ctx.mul_u64(&two_pi_w, k as u64);
            // e^{-2 i k pi w} and its conjugate
            let e_neg = ctx.conj(&ctx.cis(&theta));
            let e_pos = ctx.cis(&theta);
            acc = ctx.cadd(&acc, &ctx.cmul(&pos[(k - 1) as usize], &e_neg));
            acc = ctx.cadd(&acc, &ctx.cmul(&neg[(k - 1) as usize], &e_pos));
        }
        acc
    }

    /// `P(w)`; the conjugate pairing cancels imaginary parts, which is
    /// asserted to below 1e-12 as a numerical self-check.
    pub fn p_at(&self, ctx: &NumCtx, w: &BigFloat) -> BigFloat {
        let s = self.sum(ctx, w, &self.gamma_pos, &self.gamma_neg);
        let val = ctx.div(&s.re, &ctx.ln2()).neg();
        let residual_im = ctx.to_f64(&ctx.abs(&ctx.div(&s.im, &ctx.ln2())));
        assert!(
            residual_im < 1e-12,
            "imaginary residual {residual_im:e} in P(w)"
        );
        val
    }

    /// `Q(w)` with the same imaginary-cancellation check.
    pub fn q_at(&self, ctx: &NumCtx, w: &BigFloat) -> BigFloat {
        let s = self.sum(ctx, w, &self.psi_gamma_pos, &self.psi_gamma_neg);
        let ln2 = ctx.ln2();
        let scale = ctx.div(&ctx.from_u64(2), &ctx.mul(&ln2, &ln2));
        let val = ctx.mul(&s.re, &scale);
        let residual_im = ctx.to_f64(&ctx.abs(&ctx.mul(&s.im, &scale)));
        assert!(
            residual_im < 1e-12,
            "imaginary residual {residual_im:e} in Q(w)"
        );
        val
    }
}

/// One-shot `P(w)` with `terms` Fourier terms.
pub fn fourier_p(ctx: &NumCtx, w: &BigFloat, terms: u32) -> BigFloat {
    FluctuationSeries::new(ctx, terms).p_at(ctx, w)
}

/// One-shot `Q(w)` with `terms` Fourier terms.
pub fn fourier_q(ctx: &NumCtx, w: &BigFloat, terms: u32) -> BigFloat {
    FluctuationSeries::new(ctx, terms).q_at(ctx, w)
}

/// `gamma/log 2 - 5/2`, the constant in the mean asymptotics.
pub fn mean_constant(ctx: &NumCtx) -> BigFloat {
    ctx.sub(
        &ctx.div(&ctx.euler_gamma(), &ctx.ln2()),
        &ctx.from_f64(2.5),
    )
}

/// `1/12 + pi^2/(6 log^2 2)`, the constant in the variance asymptotics.
pub fn variance_constant(ctx: &NumCtx) -> BigFloat {
    let ln2 = ctx.ln2();
    let pi = ctx.pi();
    let t = ctx.div(
        &ctx.mul(&pi, &pi),
        &ctx.mul_u64(&ctx.mul(&ln2, &ln2), 6),
    );
    ctx.add(&t, &ctx.div(&ctx.from_u64(1), &ctx.from_u64(12)))
}

/// Direct-sum fluctuation of the mean scale:
/// `Phi(x) - lg x - gamma/log 2 - 1/2`, which equals `P(lg x)` up to
/// exponentially small terms.
pub fn phi_fluctuation(ctx: &NumCtx, x: &BigFloat, tol: f64) -> Result<BigFloat> {
    let p = phi(ctx, x, tol)?.value;
    let smooth = ctx.add(
        &ctx.log2(x),
        &ctx.add(
            &ctx.div(&ctx.euler_gamma(), &ctx.ln2()),
            &ctx.from_f64(0.5),
        ),
    );
    Ok(ctx.sub(&p, &smooth))
}

/// Direct-sum fluctuation of the variance scale:
/// `Psi(x) + 1 - (Phi(x) - 1)^2 - (1/12 + pi^2/(6 log^2 2))`, equal to
/// `Q - (2 gamma/log 2) P - P^2` at `lg x` up to vanishing terms.
pub fn variance_fluctuation(ctx: &NumCtx, x: &BigFloat, tol: f64) -> Result<BigFloat> {
    let one = ctx.from_u64(1);
    let phi_v = phi(ctx, x, tol)?.value;
    let psi_v = psi_big(ctx, x, tol)?.value;
    let mean = ctx.sub(&phi_v, &one);
    let second = ctx.add(&psi_v, &one);
    let var = ctx.sub(&second, &ctx.mul(&mean, &mean));
    Ok(ctx.sub(&var, &variance_constant(ctx)))
}

/// `Q(lg x)` recovered from the direct sums alone: `Psi(x)` minus its smooth
/// expansion, with `P(lg x)` itself taken from `Phi` (no Fourier series
/// involved, so this is an independent oracle for [`fourier_q`]).
pub fn q_fluctuation_direct(ctx: &NumCtx, x: &BigFloat, tol: f64) -> Result<BigFloat> {
    let p_num = phi_fluctuation(ctx, x, tol)?;
    let psi_v = psi_big(ctx, x, tol)?.value;
    let lgx = ctx.log2(x);
    let ln2 = ctx.ln2();
    let gam = ctx.euler_gamma();
    let pi = ctx.pi();

    // lg^2 x + lg x (2 gamma/log 2 - 1 + 2 P)
    let lin = ctx.add(
        &ctx.sub(&ctx.mul_u64(&ctx.div(&gam, &ln2), 2), &ctx.from_u64(1)),
        &ctx.mul_u64(&p_num, 2),
    );
    let mut smooth = ctx.add(&ctx.mul(&lgx, &lgx), &ctx.mul(&lgx, &lin));
    // - 2/3 + (pi^2 + 6 gamma^2)/(6 log^2 2) - gamma/log 2 - P
    smooth = ctx.sub(
        &smooth,
        &ctx.div(&ctx.from_u64(2), &ctx.from_u64(3)),
    );
    let num = ctx.add(&ctx.mul(&pi, &pi), &ctx.mul_u64(&ctx.mul(&gam, &gam), 6));
    smooth = ctx.add(&smooth, &ctx.div(&num, &ctx.mul_u64(&ctx.mul(&ln2, &ln2), 6)));
    smooth = ctx.sub(&smooth, &ctx.div(&gam, &ln2));
    smooth = ctx.sub(&smooth, &p_num);

    Ok(ctx.sub(&psi_v, &smooth))
}

/// Asymptotic mean/variance report at size `n`.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub n: u64,
    /// `lg n + gamma/log 2 - 5/2 + P(lg n)`.
    pub mean_asym: BigFloat,
    /// `1/12 + pi^2/(6 log^2 2) + Q(lg n) - (2 gamma/log 2) P(lg n) - P(lg n)^2`.
    pub var_asym: BigFloat,
    /// `Phi(n/4) - 1`, the direct-sum route to the mean.
    pub phi_mean: BigFloat,
    /// `Psi(n/4) + 1`, the direct-sum route to the second moment.
    pub psi_second_moment: BigFloat,
    pub fluctuation_p: BigFloat,
    pub fluctuation_q: BigFloat,
    pub fourier_terms: u32,
}

/// Assembles the asymptotic moment report for size `n` with `terms`
/// Fourier terms.
pub fn moment_report(ctx: &NumCtx, n: u64, terms: u32) -> Result<MomentReport> {
    moment_report_with(ctx, n, terms, &FluctuationSeries::new(ctx, terms))
}

/// Like [`moment_report`] but reusing a prebuilt coefficient cache.
pub fn moment_report_with(
    ctx: &NumCtx,
    n: u64,
    terms: u32,
    series: &FluctuationSeries,
) -> Result<MomentReport> {
    if n < 2 {
        return Err(Error::OutOfDomain {
            what: format!("moment report needs n >= 2, got {n}"),
        });
    }
    let tol = 10f64.powi(-(ctx.digits() as i32 + 6));
    let lgn = ctx.log2(&ctx.from_u64(n));
    let p = series.p_at(ctx, &lgn);
    let q = series.q_at(ctx, &lgn);
    let mean_asym = ctx.add(&ctx.add(&lgn, &mean_constant(ctx)), &p);
    let gam_term = ctx.mul_u64(&ctx.div(&ctx.euler_gamma(), &ctx.ln2()), 2);
    let var_asym = ctx.sub(
        &ctx.sub(
            &ctx.add(&variance_constant(ctx), &q),
            &ctx.mul(&gam_term, &p),
        ),
        &ctx.mul(&p, &p),
    );
    let x = ctx.div(&ctx.from_u64(n), &ctx.from_u64(4));
    let phi_v = phi(ctx, &x, tol)?.value;
    let psi_v = psi_big(ctx, &x, tol)?.value;
    let one = ctx.from_u64(1);
    Ok(MomentReport {
        n,
        mean_asym,
        var_asym,
        phi_mean: ctx.sub(&phi_v, &one),
        psi_second_moment: ctx.add(&psi_v, &one),
        fluctuation_p: p,
        fluctuation_q: q,
        fourier_terms: terms,
    })
}

/// Leading-order prediction for the longest run of the specific part `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOfRPrediction {
    /// `(1/r) lg n`.
    pub leading: f64,
    /// Half-width of the O(1) prediction band (the constant term is not
    /// pinned by the analysis; this is an empirical envelope).
    pub band_halfwidth: f64,
}

/// `E_n(L_r) = (1/r) lg n + O(1)`, reported as a band around the leading
/// term rather than a point value.
pub fn expected_run_of_r(n: u64, r: u32) -> Result<RunOfRPrediction> {
    if n < 2 || r < 1 {
        return Err(Error::OutOfDomain {
            what: format!("run-of-r prediction needs n >= 2, r >= 1, got n = {n}, r = {r}"),
        });
    }
    Ok(RunOfRPrediction {
        leading: (n as f64).log2() / r as f64,
        band_halfwidth: 3.0,
    })
}
