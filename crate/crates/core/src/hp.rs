//! High-precision real and complex arithmetic for the asymptotics module.
//!
//! Thin layer over `astro-float`: a [`NumCtx`] carries the working precision
//! (in bits, derived from a decimal digit count) and the constants cache, so
//! call sites read like ordinary arithmetic. Fluctuation amplitudes near
//! 1e-6 cancel out of quantities of size ~lg^2 n, which is why everything
//! here runs at >= 50 significant decimal digits rather than in f64.

use std::cell::{OnceCell, RefCell};
use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, Exponent, Radix, RoundingMode, Sign, WORD_BIT_SIZE};
use num_bigint::BigInt;
use num_rational::BigRational;

// Euler's constant to 105 decimal digits.
const EULER_GAMMA: &str = "5.77215664901532860606512090082402431042159335939923598805767234884867726777664670936947063291746749514631e-1";

const RM: RoundingMode = RoundingMode::ToEven;

/// Working-precision context: all operations round to `precision_bits()`.
pub struct NumCtx {
    digits: u32,
    p: usize,
    cc: RefCell<Consts>,
    euler: OnceCell<BigFloat>,
}

impl NumCtx {
    /// A context carrying `digits` significant decimal digits (plus guard
    /// bits). The default for the crate's asymptotics is 60.
    pub fn new(digits: u32) -> Self {
        let digits = digits.max(30);
        let p = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 128;
        NumCtx {
            digits,
            p,
            cc: RefCell::new(Consts::new().expect("constants cache")),
            euler: OnceCell::new(),
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn precision_bits(&self) -> usize {
        self.p
    }

    fn ok(&self, x: BigFloat) -> BigFloat {
        assert!(!x.is_nan(), "high-precision operation produced NaN");
        x
    }

    // -- constructors --------------------------------------------------

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_i64(0, self.p)
    }

    pub fn from_f64(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    pub fn from_u64(&self, x: u64) -> BigFloat {
        BigFloat::from_u64(x, self.p)
    }

    pub fn from_i64(&self, x: i64) -> BigFloat {
        BigFloat::from_i64(x, self.p)
    }

    /// `2^e`, exactly.
    pub fn pow2(&self, e: i32) -> BigFloat {
        let mut x = BigFloat::from_i64(1, self.p);
        x.set_exponent(1 + e as Exponent);
        x
    }

    /// Exact conversion of a big integer (value keeps all its bits).
    pub fn from_bigint(&self, x: &BigInt) -> BigFloat {
        let (sign, words) = x.to_u64_digits();
        if words.is_empty() {
            return self.zero();
        }
        debug_assert_eq!(WORD_BIT_SIZE, 64);
        let bits = words.len() * WORD_BIT_SIZE;
        let s = if sign == num_bigint::Sign::Minus {
            Sign::Neg
        } else {
            Sign::Pos
        };
        self.ok(BigFloat::from_words(&words, s, bits as Exponent))
    }

    /// Rational converted at working precision (correctly rounded quotient
    /// of the exact numerator and denominator).
    pub fn from_ratio(&self, x: &BigRational) -> BigFloat {
        let n = self.from_bigint(x.numer());
        let d = self.from_bigint(x.denom());
        self.div(&n, &d)
    }

    pub fn parse(&self, s: &str) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        self.ok(BigFloat::parse(s, Radix::Dec, self.p, RM, &mut cc))
    }

    // -- constants ------------------------------------------------------

    pub fn pi(&self) -> BigFloat {
        self.cc.borrow_mut().pi(self.p, RM)
    }

    pub fn ln2(&self) -> BigFloat {
        self.cc.borrow_mut().ln_2(self.p, RM)
    }

    pub fn euler_gamma(&self) -> BigFloat {
        self.euler.get_or_init(|| self.parse(EULER_GAMMA)).clone()
    }

    // -- arithmetic -----------------------------------------------------

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        self.ok(a.add(b, self.p, RM))
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        self.ok(a.sub(b, self.p, RM))
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        self.ok(a.mul(b, self.p, RM))
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        self.ok(a.div(b, self.p, RM))
    }

    pub fn recip(&self, a: &BigFloat) -> BigFloat {
        self.ok(a.reciprocal(self.p, RM))
    }

    pub fn neg(&self, a: &BigFloat) -> BigFloat {
        a.neg()
    }

    pub fn abs(&self, a: &BigFloat) -> BigFloat {
        a.abs()
    }

    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        self.ok(a.powi(n, self.p, RM))
    }

    pub fn mul_u64(&self, a: &BigFloat, b: u64) -> BigFloat {
        self.mul(a, &self.from_u64(b))
    }

    // -- elementary functions --------------------------------------------

    pub fn exp(&self, a: &BigFloat) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        self.ok(a.exp(self.p, RM, &mut cc))
    }

    pub fn ln(&self, a: &BigFloat) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        self.ok(a.ln(self.p, RM, &mut cc))
    }

    pub fn log2(&self, a: &BigFloat) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        self.ok(a.log2(self.p, RM, &mut cc))
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        self.ok(a.sqrt(self.p, RM))
    }

    pub fn sin(&self, a: &BigFloat) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        self.ok(a.sin(self.p, RM, &mut cc))
    }

    pub fn cos(&self, a: &BigFloat) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        self.ok(a.cos(self.p, RM, &mut cc))
    }

    pub fn sinh(&self, a: &BigFloat) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        self.ok(a.sinh(self.p, RM, &mut cc))
    }

    pub fn atan(&self, a: &BigFloat) -> BigFloat {
        let mut cc = self.cc.borrow_mut();
        self.ok(a.atan(self.p, RM, &mut cc))
    }

    /// Principal-value `atan2(y, x)` for `(x, y) != (0, 0)`.
    pub fn atan2(&self, y: &BigFloat, x: &BigFloat) -> BigFloat {
        let pi = self.pi();
        if x.is_zero() {
            assert!(!y.is_zero(), "atan2 at the origin");
            let half_pi = self.mul(&pi, &self.from_f64(0.5));
            return if y.is_positive() { half_pi } else { half_pi.neg() };
        }
        let base = self.atan(&self.div(y, x));
        if x.is_positive() {
            base
        } else if y.is_negative() {
            self.sub(&base, &pi)
        } else {
            self.add(&base, &pi)
        }
    }

    // -- comparisons ------------------------------------------------------

    pub fn cmp(&self, a: &BigFloat, b: &BigFloat) -> Ordering {
        match a.cmp(b) {
            Some(v) if v < 0 => Ordering::Less,
            Some(v) if v > 0 => Ordering::Greater,
            Some(_) => Ordering::Equal,
            None => panic!("comparison with NaN"),
        }
    }

    pub fn lt(&self, a: &BigFloat, b: &BigFloat) -> bool {
        self.cmp(a, b) == Ordering::Less
    }

    pub fn le(&self, a: &BigFloat, b: &BigFloat) -> bool {
        self.cmp(a, b) != Ordering::Greater
    }

    pub fn max(&self, a: BigFloat, b: BigFloat) -> BigFloat {
        if self.lt(&a, &b) {
            b
        } else {
            a
        }
    }

    pub fn min(&self, a: BigFloat, b: BigFloat) -> BigFloat {
        if self.lt(&a, &b) {
            a
        } else {
            b
        }
    }

    // -- conversions out ---------------------------------------------------

    /// Nearest-enough `f64` (two mantissa words), for reporting and
    /// coarse comparisons.
    pub fn to_f64(&self, x: &BigFloat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        if x.is_nan() {
            return f64::NAN;
        }
        if x.is_inf_pos() {
            return f64::INFINITY;
        }
        if x.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let (words, _, sign, e, _) = x.as_raw_parts().expect("finite");
        let len = words.len();
        let mut mant = words[len - 1] as f64 / 2f64.powi(WORD_BIT_SIZE as i32);
        if len >= 2 {
            mant += words[len - 2] as f64 / 2f64.powi(2 * WORD_BIT_SIZE as i32);
        }
        let v = mant * 2f64.powi(e);
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// Decimal rendering with `digits` significant digits (same layout
    /// rules as [`crate::series::decimal_string`]).
    pub fn decimal(&self, x: &BigFloat, digits: u32) -> String {
        let digits = digits.max(1) as usize;
        if x.is_zero() {
            return "0".to_string();
        }
        assert!(!x.is_nan() && !x.is_inf(), "cannot render {x:?}");
        let mut cc = self.cc.borrow_mut();
        let (sign, mut ds, e10) = x
            .convert_to_radix(Radix::Dec, RM, &mut cc)
            .expect("finite value");
        // value = 0.d1 d2 ... * 10^e10
        let mut e = e10 as i64 - 1;
        while ds.len() < digits + 1 {
            ds.push(0);
        }
        // round to `digits` digits, half away from zero
        if ds[digits] >= 5 {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    e += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
        ds.truncate(digits);
        let ms: String = ds.iter().map(|d| char::from(b'0' + d)).collect();
        let sign = if sign == Sign::Neg { "-" } else { "" };
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

    // -- complex arithmetic -------------------------------------------------

    pub fn c(&self, re: BigFloat, im: BigFloat) -> Complex {
        Complex { re, im }
    }

    pub fn c_from_f64(&self, re: f64, im: f64) -> Complex {
        Complex {
            re: self.from_f64(re),
            im: self.from_f64(im),
        }
    }

    pub fn c_real(&self, re: BigFloat) -> Complex {
        Complex {
            re,
            im: self.zero(),
        }
    }

    pub fn cadd(&self, a: &Complex, b: &Complex) -> Complex {
        Complex {
            re: self.add(&a.re, &b.re),
            im: self.add(&a.im, &b.im),
        }
    }

    pub fn csub(&self, a: &Complex, b: &Complex) -> Complex {
        Complex {
            re: self.sub(&a.re, &b.re),
            im: self.sub(&a.im, &b.im),
        }
    }

    pub fn cmul(&self, a: &Complex, b: &Complex) -> Complex {
        Complex {
            re: self.sub(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im)),
            im: self.add(&self.mul(&a.re, &b.im), &self.mul(&a.im, &b.re)),
        }
    }

    pub fn cdiv(&self, a: &Complex, b: &Complex) -> Complex {
        let den = self.add(&self.mul(&b.re, &b.re), &self.mul(&b.im, &b.im));
        let re = self.add(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im));
        let im = self.sub(&self.mul(&a.im, &b.re), &self.mul(&a.re, &b.im));
        Complex {
            re: self.div(&re, &den),
            im: self.div(&im, &den),
        }
    }

    pub fn cneg(&self, a: &Complex) -> Complex {
        Complex {
            re: a.re.neg(),
            im: a.im.neg(),
        }
    }

    pub fn conj(&self, a: &Complex) -> Complex {
        Complex {
            re: a.re.clone(),
            im: a.im.neg(),
        }
    }

    pub fn cscale(&self, a: &Complex, s: &BigFloat) -> Complex {
        Complex {
            re: self.mul(&a.re, s),
            im: self.mul(&a.im, s),
        }
    }

    pub fn cabs(&self, a: &Complex) -> BigFloat {
        self.sqrt(&self.add(&self.mul(&a.re, &a.re), &self.mul(&a.im, &a.im)))
    }

    pub fn cexp(&self, a: &Complex) -> Complex {
        let r = self.exp(&a.re);
        Complex {
            re: self.mul(&r, &self.cos(&a.im)),
            im: self.mul(&r, &self.sin(&a.im)),
        }
    }

    /// Principal branch logarithm.
    pub fn cln(&self, a: &Complex) -> Complex {
        let norm2 = self.add(&self.mul(&a.re, &a.re), &self.mul(&a.im, &a.im));
        Complex {
            re: self.mul(&self.ln(&norm2), &self.from_f64(0.5)),
            im: self.atan2(&a.im, &a.re),
        }
    }

    /// `e^{i theta}` on the unit circle.
    pub fn cis(&self, theta: &BigFloat) -> Complex {
        Complex {
            re: self.cos(theta),
            im: self.sin(theta),
        }
    }
}

/// A complex number over [`BigFloat`] parts.
#[derive(Debug, Clone)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}
