//! Exact truncated power-series engine.
//!
//! Compositions of `n` with no run of `k` equal parts are counted by
//!
//! ```text
//! C^<k>(z) = 1 / D_k(z),    D_k(z) = 1 - sum_{j>=1} z^j (1 - z^{j(k-1)}) / (1 - z^{jk}),
//! ```
//!
//! and this module extracts the coefficients `C_n^<k> = [z^n] 1/D_k(z)` with
//! arbitrary-precision integer arithmetic. Truncating the `j`-sum at the
//! series order is exact, not approximate: the `j`-th term starts at `z^j`.
//!
//! Probabilities and moments derived here are exact rationals over the total
//! count `C_n = 2^(n-1)`; they are rendered to decimals only at the reporting
//! boundary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense exact-integer power series truncated at `z^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// Builds a series from coefficients `c[0], ..., c[order]`.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::OutOfDomain {
                what: "series needs at least a constant term".into(),
            });
        }
        Ok(TruncatedSeries { coeffs })
    }

    /// Truncation degree `N`; the series carries `N + 1` coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Schoolbook product, truncated to the shorter order.
    pub fn mul(&self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (b, o) in rhs.coeffs[..=order - i].iter().zip(out[i..].iter_mut()) {
                *o += a * b;
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

/// Expands `D_k(z)` to the given order.
///
/// Each `j`-term is expanded as `z^j (1 - z^{j(k-1)}) * sum_{m>=0} z^{mjk}`,
/// i.e. monomials `-z^{j(mk+1)} + z^{jk(m+1)}`, so every coefficient is an
/// exact (small) integer. `k = 0` and `k = 1` are rejected: the formula
/// degenerates, and Carlitz compositions are the `k = 2` column.
pub fn denominator_series(k: u32, order: usize) -> Result<TruncatedSeries> {
    if k < 2 {
        return Err(Error::InvalidRunBound { k, min: 2 });
    }
    let k = k as usize;
    let mut coeffs = vec![BigInt::zero(); order + 1];
    coeffs[0] = BigInt::one();
    for j in 1..=order {
        let stride = j * k;
        let mut e = j;
        while e <= order {
            coeffs[e] -= 1;
            e += stride;
        }
        let mut e = stride;
        while e <= order {
            coeffs[e] += 1;
            e += stride;
        }
    }
    Ok(TruncatedSeries { coeffs })
}

/// Formal reciprocal: returns `s` with `d * s = 1 mod z^(order+1)`.
///
/// Requires `d[0] = 1`, which keeps every coefficient an exact integer.
pub fn series_reciprocal(d: &TruncatedSeries) -> Result<TruncatedSeries> {
    if !d.coeffs[0].is_one() {
        return Err(Error::NonUnitConstantTerm {
            got: d.coeffs[0].to_string(),
        });
    }
    let order = d.order();
    let mut s = vec![BigInt::zero(); order + 1];
    s[0] = BigInt::one();
    for m in 1..=order {
        let mut acc = BigInt::zero();
        for i in 1..=m {
            if !d.coeffs[i].is_zero() {
                acc += &d.coeffs[i] * &s[m - i];
            }
        }
        s[m] = -acc;
    }
    Ok(TruncatedSeries { coeffs: s })
}

/// Coefficients of `1/D_k(z)` up to `z^order` without materializing the
/// dense denominator.
///
/// `D_k = 1 - sum_j z^j + corr(z)` where `corr` is sparse (its monomials
/// start at `z^k`), so the reciprocal recurrence collapses to a running
/// prefix sum plus a sparse correction pass:
///
/// ```text
/// s[m] = s[0] + ... + s[m-1] - sum_{(e,c) in corr, e <= m} c * s[m-e].
/// ```
///
/// Same exact integer arithmetic as [`series_reciprocal`]; this is just the
/// reciprocal specialized to the known shape of `D_k`.
pub(crate) fn reciprocal_coefficients(k: u32, order: usize) -> Vec<BigInt> {
    debug_assert!(k >= 2);
    let k = k as usize;
    // corrections: (exponent, coefficient) of D_k with the -z^j ladder removed
    let mut corr_map = std::collections::BTreeMap::<usize, i64>::new();
    for j in 1..=order / k {
        let stride = j * k;
        let mut e = j + stride;
        while e <= order {
            *corr_map.entry(e).or_insert(0) -= 1;
            e += stride;
        }
        let mut e = stride;
        while e <= order {
            *corr_map.entry(e).or_insert(0) += 1;
            e += stride;
        }
    }
    let corr: Vec<(usize, i64)> = corr_map.into_iter().filter(|&(_, c)| c != 0).collect();

    let mut s = vec![BigInt::zero(); order + 1];
    s[0] = BigInt::one();
    let mut prefix = BigInt::one();
    for m in 1..=order {
        let mut acc = prefix.clone();
        for &(e, c) in corr.iter().take_while(|&&(e, _)| e <= m) {
            match c {
                1 => acc -= &s[m - e],
                -1 => acc += &s[m - e],
                _ => acc -= &s[m - e] * c,
            }
        }
        prefix += &acc;
        s[m] = acc;
    }
    s
}

/// Exact counts `C_n^<k>` of compositions of `n` with longest run `< k`.
#[derive(Debug, Clone)]
pub struct RunCountTable {
    n: usize,
    k_max: usize,
    /// `counts[k]` for `k = 0..=k_max`; entries 0 and 1 are zero.
    counts: Vec<BigInt>,
    total: BigInt,
}

impl RunCountTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// `C_n^<k>`, the number of compositions with `L < k` (`k <= k_max`).
    pub fn count_below(&self, k: usize) -> &BigInt {
        &self.counts[k]
    }

    /// Total number of compositions, `2^(n-1)`.
    pub fn total(&self) -> &BigInt {
        &self.total
    }

    /// Exact `P_n(L < k)`.
    pub fn probability_below(&self, k: usize) -> BigRational {
        BigRational::new(self.counts[k].clone(), self.total.clone())
    }
}

/// Builds the count table with the default `k_max = n + 1`, the saturation
/// point: a run of `k` equal parts needs size >= `k`, so `counts[k] = 2^(n-1)`
/// for every `k > n` and the table is closed under pmf extraction.
pub fn count_table(n: usize) -> Result<RunCountTable> {
    count_table_with(n, n + 1)
}

/// Builds the count table for `k = 1..=k_max` (`k_max >= n + 1`).
pub fn count_table_with(n: usize, k_max: usize) -> Result<RunCountTable> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    if k_max < n + 1 {
        return Err(Error::OutOfDomain {
            what: format!("k_max = {k_max} must be >= n + 1 = {}", n + 1),
        });
    }
    let total = BigInt::one() << (n - 1);
    let mut counts = vec![BigInt::zero(); k_max + 1];
    let top = (n + 1).min(k_max);
    for (k, slot) in counts.iter_mut().enumerate().take(top + 1).skip(2) {
        *slot = reciprocal_coefficients(k as u32, n)[n].clone();
    }
    for slot in counts.iter_mut().skip(n + 2) {
        *slot = total.clone();
    }
    Ok(RunCountTable {
        n,
        k_max,
        counts,
        total,
    })
}

/// Exact `C_n^<k>` for a single `(n, k)` pair.
///
/// Cheaper than a full table when only a few `k` are needed. Saturates to
/// `2^(n-1)` for `k > n`; `k <= 1` yields 0 (every nonempty composition has
/// a run of length >= 1).
pub fn count_below(n: usize, k: usize) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    if k <= 1 {
        return Ok(BigInt::zero());
    }
    if k > n {
        return Ok(BigInt::one() << (n - 1));
    }
    Ok(reciprocal_coefficients(k as u32, n).swap_remove(n))
}

/// Exact `P_n(L < k)` as a rational.
pub fn probability_below(n: usize, k: usize) -> Result<BigRational> {
    let c = count_below(n, k)?;
    Ok(BigRational::new(c, BigInt::one() << (n - 1)))
}

/// Exact distribution of the longest run `L` for compositions of size `n`.
#[derive(Debug, Clone)]
pub struct ExactDistribution {
    n: usize,
    table: RunCountTable,
}

impl ExactDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &RunCountTable {
        &self.table
    }

    /// `P_n(L < k)` for `k = 1..=n+1`.
    pub fn cdf_below(&self, k: usize) -> BigRational {
        self.table.probability_below(k)
    }

    /// `P_n(L = k)` for `k = 1..=n`.
    pub fn pmf(&self, k: usize) -> BigRational {
        let num = self.table.count_below(k + 1) - self.table.count_below(k);
        BigRational::new(num, self.table.total().clone())
    }

    /// Number of compositions with `L = k` exactly.
    pub fn count_eq(&self, k: usize) -> BigInt {
        self.table.count_below(k + 1) - self.table.count_below(k)
    }

    /// The pmf over its full support `k = 1..=n`; sums to exactly 1.
    pub fn pmf_all(&self) -> Vec<BigRational> {
        (1..=self.n).map(|k| self.pmf(k)).collect()
    }
}

/// Computes the exact distribution of `L` at size `n`.
pub fn exact_distribution(n: usize) -> Result<ExactDistribution> {
    Ok(ExactDistribution {
        n,
        table: count_table(n)?,
    })
}

/// Exact mean and variance of `L`, with decimal renderings.
#[derive(Debug, Clone)]
pub struct ExactMoments {
    pub mean: BigRational,
    pub variance: BigRational,
    pub mean_decimal: String,
    pub variance_decimal: String,
    pub precision: u32,
}

/// Exact moments of the longest-run distribution at size `n`.
///
/// `E_n(L) = sum_k P_n(L >= k)` and `V_n(L) = E_n(L^2) - E_n(L)^2`, summed in
/// exact rational arithmetic and rendered to `precision` significant decimal
/// digits (`precision >= 10`).
pub fn exact_moments(n: usize, precision: u32) -> Result<ExactMoments> {
    if precision < 10 {
        return Err(Error::OutOfDomain {
            what: format!("precision = {precision} must be >= 10"),
        });
    }
    let dist = exact_distribution(n)?;
    let total = dist.table.total().clone();
    let mut mean_num = BigInt::zero();
    let mut second_num = BigInt::zero();
    for k in 1..=n {
        let diff = dist.table.count_below(k + 1) - dist.table.count_below(k);
        mean_num += &diff * BigInt::from(k);
        second_num += diff * BigInt::from(k * k);
    }
    let mean = BigRational::new(mean_num, total.clone());
    let second = BigRational::new(second_num, total);
    let variance = &second - &mean * &mean;
    Ok(ExactMoments {
        mean_decimal: decimal_string(&mean, precision),
        variance_decimal: decimal_string(&variance, precision),
        mean,
        variance,
        precision,
    })
}

fn pow10(e: usize) -> BigInt {
    BigInt::from(10u32).pow(e as u32)
}

/// Renders an exact rational to `digits` significant decimal digits.
///
/// Rounding is half-away-from-zero. Values with decimal exponent in
/// `[-4, digits)` print in plain positional form, everything else in
/// scientific form; trailing zeros are kept so the precision is explicit.
pub fn decimal_string(r: &BigRational, digits: u32) -> String {
    let digits = digits.max(1) as usize;
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.numer().abs();
    let b = r.denom().abs();

    // exponent e with 10^e <= a/b < 10^(e+1)
    let mut e = a.to_string().len() as i64 - b.to_string().len() as i64;
    loop {
        let ge = if e >= 0 {
            a >= &b * pow10(e as usize)
        } else {
            &a * pow10((-e) as usize) >= b
        };
        if !ge {
            e -= 1;
            continue;
        }
        let lt_next = if e + 1 >= 0 {
            a < &b * pow10((e + 1) as usize)
        } else {
            &a * pow10((-(e + 1)) as usize) < b
        };
        if !lt_next {
            e += 1;
            continue;
        }
        break;
    }

    // mantissa = round(a/b * 10^(digits-1-e)), half away from zero
    let s = digits as i64 - 1 - e;
    let (num, den) = if s >= 0 {
        (&a * pow10(s as usize), b.clone())
    } else {
        (a.clone(), &b * pow10((-s) as usize))
    };
    let mut m: BigInt = (BigInt::from(2) * num + &den) / (BigInt::from(2) * den);
    if m == pow10(digits) {
        m /= BigInt::from(10u32);
        e += 1;
    }
    let ms = m.to_string();
    debug_assert_eq!(ms.len(), digits);

    let sign = if neg { "-" } else { "" };
    if e >= -4 && e < digits as i64 {
        if e >= 0 {
            let (int_part, frac_part) = ms.split_at(e as usize + 1);
            if frac_part.is_empty() {
                format!("{sign}{int_part}")
            } else {
                format!("{sign}{int_part}.{frac_part}")
            }
        } else {
            format!("{sign}0.{}{}", "0".repeat((-e - 1) as usize), ms)
        }
    } else {
        let (first, rest) = ms.split_at(1);
        if rest.is_empty() {
            format!("{sign}{first}e{e}")
        } else {
            format!("{sign}{first}.{rest}e{e}")
        }
    }
}
