//! Complex gamma and digamma at arbitrary precision.
//!
//! Both use the same scheme: shift the argument up the real axis with the
//! recurrences Gamma(z+1) = z Gamma(z) and psi(z+1) = psi(z) + 1/z until
//! |argument| is large enough, then evaluate the Stirling asymptotic series
//! with exact Bernoulli-number coefficients. The shift radius grows with the
//! requested precision so the truncated series bottoms out below the target
//! tolerance. Arguments with negative real part go through the reflection
//! formula.
//!
//! Validated against Gamma(z+1) = z Gamma(z), |Gamma(iy)|^2 = pi/(y sinh(pi y)),
//! and psi(1) = -gamma (see tests).

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::hp::{Complex, NumCtx};

/// Even Bernoulli numbers B_2, B_4, ..., available up to this many entries.
const MAX_EVEN_BERNOULLI: usize = 130;

static BERNOULLI_EVEN: OnceLock<Vec<BigRational>> = OnceLock::new();

/// `bernoulli_even()[i]` is B_{2(i+1)} as an exact rational.
pub(crate) fn bernoulli_even() -> &'static [BigRational] {
    BERNOULLI_EVEN.get_or_init(|| {
        // B_m = -(1/(m+1)) sum_{j<m} C(m+1, j) B_j
        let top = 2 * MAX_EVEN_BERNOULLI;
        let mut all: Vec<BigRational> = Vec::with_capacity(top + 1);
        all.push(BigRational::one());
        for m in 1..=top {
            if m > 1 && m % 2 == 1 {
                all.push(BigRational::zero());
                continue;
            }
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one(); // C(m+1, 0)
            for (j, b) in all.iter().enumerate() {
                if !b.is_zero() {
                    acc += b * BigRational::from_integer(binom.clone());
                }
                // C(m+1, j+1) from C(m+1, j)
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            all.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        (1..=MAX_EVEN_BERNOULLI).map(|i| all[2 * i].clone()).collect()
    })
}

/// Shift radius: Stirling's series at |w| >= this bottoms out below the
/// working tolerance.
fn stirling_radius(ctx: &NumCtx) -> u32 {
    (0.62 * ctx.digits() as f64 + 12.0).ceil() as u32
}

fn working_tol(ctx: &NumCtx) -> astro_float::BigFloat {
    ctx.pow2(-(ctx.precision_bits() as i32 - 24))
}

/// Stirling series for ln Gamma(w), valid once Re(w) >= stirling_radius.
fn ln_gamma_stirling(ctx: &NumCtx, w: &Complex) -> Complex {
    let tol = working_tol(ctx);
    let half = ctx.from_f64(0.5);
    let ln_w = ctx.cln(w);
    // (w - 1/2) ln w - w + ln(2 pi)/2
    let mut res = ctx.cmul(&ctx.csub(w, &ctx.c_real(half.clone())), &ln_w);
    res = ctx.csub(&res, w);
    let ln_two_pi = ctx.ln(&ctx.mul(&ctx.from_u64(2), &ctx.pi()));
    res = ctx.cadd(&res, &ctx.c_real(ctx.mul(&ln_two_pi, &half)));

    // + sum_j B_{2j} / ((2j)(2j-1) w^{2j-1})
    let inv_w = ctx.cdiv(&ctx.c_real(ctx.from_u64(1)), w);
    let inv_w2 = ctx.cmul(&inv_w, &inv_w);
    let mut wpow = inv_w; // 1/w^{2j-1}
    for (i, b) in bernoulli_even().iter().enumerate() {
        let j = (i + 1) as u64;
        let coeff = ctx.div(
            &ctx.from_ratio(b),
            &ctx.from_u64(2 * j * (2 * j - 1)),
        );
        let term = ctx.cscale(&wpow, &coeff);
        res = ctx.cadd(&res, &term);
        if ctx.lt(&ctx.cabs(&term), &tol) {
            return res;
        }
        wpow = ctx.cmul(&wpow, &inv_w2);
    }
    panic!("Stirling series did not converge; radius too small for precision");
}

/// ln Gamma(z) for Re(z) >= 0 (z not a pole), via upward shift.
fn ln_gamma_shifted(ctx: &NumCtx, z: &Complex) -> Complex {
    let r = stirling_radius(ctx);
    let re = ctx.to_f64(&z.re);
    let shift = if re >= r as f64 { 0 } else { (r as f64 - re).ceil() as u32 };
    let w = ctx.cadd(z, &ctx.c_real(ctx.from_u64(shift as u64)));
    let mut res = ln_gamma_stirling(ctx, &w);
    // Gamma(z) = Gamma(z + m) / (z (z+1) ... (z+m-1))
    let mut prod = ctx.c_real(ctx.from_u64(1));
    for i in 0..shift {
        let zi = ctx.cadd(z, &ctx.c_real(ctx.from_u64(i as u64)));
        prod = ctx.cmul(&prod, &zi);
    }
    if shift > 0 {
        res = ctx.csub(&res, &ctx.cln(&prod));
    }
    res
}

/// Complex gamma function.
///
/// Not defined at the poles 0, -1, -2, ...; callers here stay away from them.
pub fn gamma(ctx: &NumCtx, z: &Complex) -> Complex {
    if ctx.to_f64(&z.re) >= 0.0 {
        ctx.cexp(&ln_gamma_shifted(ctx, z))
    } else {
        // reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
        let pi = ctx.pi();
        let pz = ctx.cscale(z, &pi);
        let sin_pz = complex_sin(ctx, &pz);
        let one_minus = ctx.csub(&ctx.c_real(ctx.from_u64(1)), z);
        let g = ctx.cexp(&ln_gamma_shifted(ctx, &one_minus));
        ctx.cdiv(&ctx.c_real(pi), &ctx.cmul(&sin_pz, &g))
    }
}

/// Complex digamma function psi(z) = Gamma'(z)/Gamma(z).
pub fn digamma(ctx: &NumCtx, z: &Complex) -> Complex {
    if ctx.to_f64(&z.re) < 0.0 {
        // psi(z) = psi(1 - z) - pi cot(pi z)
        let pi = ctx.pi();
        let pz = ctx.cscale(z, &pi);
        let cot = ctx.cdiv(&complex_cos(ctx, &pz), &complex_sin(ctx, &pz));
        let one_minus = ctx.csub(&ctx.c_real(ctx.from_u64(1)), z);
        return ctx.csub(&digamma(ctx, &one_minus), &ctx.cscale(&cot, &pi));
    }
    let r = stirling_radius(ctx);
    let re = ctx.to_f64(&z.re);
    let shift = if re >= r as f64 { 0 } else { (r as f64 - re).ceil() as u32 };
    let w = ctx.cadd(z, &ctx.c_real(ctx.from_u64(shift as u64)));

    // psi(w) = ln w - 1/(2w) - sum_j B_{2j} / (2j w^{2j})
    let tol = working_tol(ctx);
    let inv_w = ctx.cdiv(&ctx.c_real(ctx.from_u64(1)), &w);
    let inv_w2 = ctx.cmul(&inv_w, &inv_w);
    let mut res = ctx.cln(&w);
    res = ctx.csub(&res, &ctx.cscale(&inv_w, &ctx.from_f64(0.5)));
    let mut wpow = inv_w2.clone(); // 1/w^{2j}
    let mut converged = false;
    for (i, b) in bernoulli_even().iter().enumerate() {
        let j = (i + 1) as u64;
        let coeff = ctx.div(&ctx.from_ratio(b), &ctx.from_u64(2 * j));
        let term = ctx.cscale(&wpow, &coeff);
        res = ctx.csub(&res, &term);
        if ctx.lt(&ctx.cabs(&term), &tol) {
            converged = true;
            break;
        }
        wpow = ctx.cmul(&wpow, &inv_w2);
    }
    assert!(converged, "digamma series did not converge");

    // psi(z) = psi(z + m) - sum_{i=0}^{m-1} 1/(z + i)
    for i in 0..shift {
        let zi = ctx.cadd(z, &ctx.c_real(ctx.from_u64(i as u64)));
        res = ctx.csub(&res, &ctx.cdiv(&ctx.c_real(ctx.from_u64(1)), &zi));
    }
    res
}

fn complex_sin(ctx: &NumCtx, z: &Complex) -> Complex {
    // sin(a + bi) = sin a cosh b + i cos a sinh b
    let cosh_b = {
        let e = ctx.exp(&z.im);
        let em = ctx.recip(&e);
        ctx.mul(&ctx.add(&e, &em), &ctx.from_f64(0.5))
    };
    Complex {
        re: ctx.mul(&ctx.sin(&z.re), &cosh_b),
        im: ctx.mul(&ctx.cos(&z.re), &ctx.sinh(&z.im)),
    }
}

fn complex_cos(ctx: &NumCtx, z: &Complex) -> Complex {
    let cosh_b = {
        let e = ctx.exp(&z.im);
        let em = ctx.recip(&e);
        ctx.mul(&ctx.add(&e, &em), &ctx.from_f64(0.5))
    };
    Complex {
        re: ctx.mul(&ctx.cos(&z.re), &cosh_b),
        im: ctx.mul(&ctx.sin(&z.re), &ctx.sinh(&z.im)).neg(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(ctx: &NumCtx, got: &astro_float::BigFloat, want: &str, tol: f64) {
        let w = ctx.parse(want);
        let d = ctx.to_f64(&ctx.abs(&ctx.sub(got, &w)));
        assert!(d < tol, "got {got:?}, want {want}, |diff| = {d:e}");
    }

    #[test]
    fn bernoulli_first_values() {
        let b = bernoulli_even();
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(b[0], r(1, 6)); // B_2
        assert_eq!(b[1], r(-1, 30)); // B_4
        assert_eq!(b[2], r(1, 42)); // B_6
        assert_eq!(b[4], r(5, 66)); // B_10
    }

    #[test]
    fn gamma_small_integers_and_half() {
        let ctx = NumCtx::new(60);
        let g5 = gamma(&ctx, &ctx.c_from_f64(5.0, 0.0));
        close(&ctx, &g5.re, "24", 1e-55);
        assert!(ctx.to_f64(&ctx.abs(&g5.im)) < 1e-55);
        // Gamma(1/2)^2 = pi
        let gh = gamma(&ctx, &ctx.c_from_f64(0.5, 0.0));
        let sq = ctx.mul(&gh.re, &gh.re);
        let d = ctx.to_f64(&ctx.abs(&ctx.sub(&sq, &ctx.pi())));
        assert!(d < 1e-55);
    }

    #[test]
    fn gamma_complex_spot_value() {
        // Gamma(4 + 10i), reference value from an independent evaluation
        let ctx = NumCtx::new(60);
        let g = gamma(&ctx, &ctx.c_from_f64(4.0, 10.0));
        close(&ctx, &g.re, "7.7153429423996626027e-4", 1e-22);
        close(&ctx, &g.im, "-1.0190827990417123694e-3", 1e-22);
    }

    #[test]
    fn gamma_recurrence_on_imaginary_axis() {
        // Gamma(z + 1) = z Gamma(z) at z = i * 2 pi / ln 2
        let ctx = NumCtx::new(60);
        let y = ctx.div(&ctx.mul(&ctx.from_u64(2), &ctx.pi()), &ctx.ln2());
        let z = ctx.c(ctx.zero(), y);
        let g = gamma(&ctx, &z);
        let g1 = gamma(&ctx, &ctx.cadd(&z, &ctx.c_real(ctx.from_u64(1))));
        let zg = ctx.cmul(&z, &g);
        let d = ctx.cabs(&ctx.csub(&g1, &zg));
        // values are ~5e-7 in magnitude; demand ~50 correct digits
        assert!(ctx.to_f64(&d) < 1e-55, "diff = {}", ctx.to_f64(&d));
    }

    #[test]
    fn gamma_modulus_identity_imaginary_axis() {
        // |Gamma(iy)|^2 = pi / (y sinh(pi y))
        let ctx = NumCtx::new(60);
        for yv in [9.064720283654388f64, 18.129440567308775, 2.0] {
            let y = ctx.from_f64(yv);
            let g = gamma(&ctx, &ctx.c(ctx.zero(), y.clone()));
            let lhs = ctx.add(&ctx.mul(&g.re, &g.re), &ctx.mul(&g.im, &g.im));
            let rhs = ctx.div(&ctx.pi(), &ctx.mul(&y, &ctx.sinh(&ctx.mul(&y, &ctx.pi()))));
            let rel = ctx.to_f64(&ctx.div(&ctx.sub(&lhs, &rhs), &rhs)).abs();
            assert!(rel < 1e-50, "y = {yv}, rel = {rel:e}");
        }
    }

    #[test]
    fn gamma_spot_value_imaginary_axis() {
        // Gamma(i * 2 pi / ln 2), frozen from an independent evaluation
        let ctx = NumCtx::new(60);
        let y = ctx.div(&ctx.mul(&ctx.from_u64(2), &ctx.pi()), &ctx.ln2());
        let g = gamma(&ctx, &ctx.c(ctx.zero(), y));
        close(&ctx, &g.re, "-4.176751052530520559830616e-7", 1e-28);
        close(&ctx, &g.im, "-3.504380218927985665836777e-7", 1e-28);
    }

    #[test]
    fn gamma_reflection_negative_half() {
        let ctx = NumCtx::new(60);
        let g = gamma(&ctx, &ctx.c_from_f64(-0.5, 0.0));
        // Gamma(-1/2) = -2 sqrt(pi)
        let want = ctx.mul(&ctx.from_i64(-2), &ctx.sqrt(&ctx.pi()));
        let d = ctx.to_f64(&ctx.abs(&ctx.sub(&g.re, &want)));
        assert!(d < 1e-50);
    }

    #[test]
    fn digamma_at_one_is_minus_gamma() {
        let ctx = NumCtx::new(60);
        let d = digamma(&ctx, &ctx.c_from_f64(1.0, 0.0));
        let diff = ctx.to_f64(&ctx.abs(&ctx.add(&d.re, &ctx.euler_gamma())));
        assert!(diff < 1e-55, "psi(1) + gamma = {diff:e}");
        assert!(ctx.to_f64(&ctx.abs(&d.im)) < 1e-55);
    }

    #[test]
    fn digamma_spot_value_imaginary_axis() {
        // psi(i * 2 pi / ln 2), frozen from an independent evaluation
        let ctx = NumCtx::new(60);
        let y = ctx.div(&ctx.mul(&ctx.from_u64(2), &ctx.pi()), &ctx.ln2());
        let d = digamma(&ctx, &ctx.c(ctx.zero(), y));
        close(&ctx, &d.re, "2.205405396566012996616427", 1e-22);
        close(&ctx, &d.im, "1.625955226833059517580436", 1e-22);
    }

    #[test]
    fn digamma_recurrence() {
        // psi(z + 1) = psi(z) + 1/z
        let ctx = NumCtx::new(50);
        let z = ctx.c_from_f64(0.75, 2.5);
        let lhs = digamma(&ctx, &ctx.cadd(&z, &ctx.c_real(ctx.from_u64(1))));
        let rhs = ctx.cadd(
            &digamma(&ctx, &z),
            &ctx.cdiv(&ctx.c_real(ctx.from_u64(1)), &z),
        );
        assert!(ctx.to_f64(&ctx.cabs(&ctx.csub(&lhs, &rhs))) < 1e-45);
    }

    #[test]
    fn high_precision_context_still_converges() {
        let ctx = NumCtx::new(170);
        let g = gamma(&ctx, &ctx.c_from_f64(5.0, 0.0));
        let d = ctx.to_f64(&ctx.abs(&ctx.sub(&g.re, &ctx.from_u64(24))));
        assert!(d < 1e-160);
    }
}
