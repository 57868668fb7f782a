//! Scalar regimes shared by every other module.
//!
//! [`Scalar`] is a rectangular complex number whose two components are MPFR
//! floats. Values built from integers are exact at the smallest precision
//! that holds them, and binary operations round to the larger of the two
//! operand precisions, so the working precision is carried by the data
//! (parameters) rather than by global state.
//!
//! [`ExactScalar`] is a Gaussian rational used whenever an identity has to
//! be checked bit for bit.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

pub const DEFAULT_BITS: u32 = 256;
pub const MIN_BITS: u32 = 64;
pub const MAX_BITS: u32 = 2048;

/// Environment variable overriding [`DEFAULT_BITS`].
pub const PRECISION_ENV: &str = "MOP_PRECISION_BITS";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionConfig {
    bits: u32,
    equality_tolerance: f64,
}

impl PrecisionConfig {
    pub fn new(bits: u32) -> Result<Self> {
        if !(MIN_BITS..=MAX_BITS).contains(&bits) {
            return Err(Error::InvalidPrecision(bits));
        }
        Ok(Self {
            bits,
            equality_tolerance: 2f64.powi(-(bits as i32) / 2),
        })
    }

    /// Reads `MOP_PRECISION_BITS`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(PRECISION_ENV) {
            Ok(raw) => {
                let bits = raw.trim().parse::<u32>().map_err(|e| Error::Parse {
                    input: raw.clone(),
                    reason: e.to_string(),
                })?;
                Self::new(bits)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
        }
        self.equality_tolerance = tol;
        Ok(self)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn equality_tolerance(&self) -> f64 {
        self.equality_tolerance
    }

    /// Separation below which two roots are reported as coincident.
    pub fn root_separation(&self) -> f64 {
        2f64.powi(-(self.bits as i32) / 4)
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self::new(DEFAULT_BITS).expect("default precision is in range")
    }
}

/// Coefficient field shared by the exact and floating regimes.
///
/// Constructors from integers are exact. `checked_div` is the only fallible
/// ring-adjacent operation: dividing by an exact zero is an error.
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;
    fn from_integer(n: &Integer) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn checked_div(&self, rhs: &Self) -> Result<Self>;
    /// Modulus rounded to `f64`; used for bounds and reports only.
    fn abs_f64(&self) -> f64;
    fn to_scalar(&self, bits: u32) -> Scalar;
    /// Equality for exact values, hybrid relative-absolute test otherwise.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
    /// True iff the value is real and lies in {0, -1, -2, ...}.
    fn is_nonpositive_integer(&self) -> bool;
    /// Strict `|self| < 1`, decided exactly where the regime allows.
    fn modulus_below_one(&self) -> bool;

    fn zero() -> Self {
        Self::from_i64(0)
    }

    fn one() -> Self {
        Self::from_i64(1)
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

fn int_prec(n: &Integer) -> u32 {
    n.significant_bits().max(MIN_BITS)
}

#[derive(Clone, PartialEq)]
pub struct Scalar {
    re: Float,
    im: Float,
}

impl Scalar {
    pub fn new(re: Float, im: Float) -> Self {
        let p = re.prec().max(im.prec());
        Self {
            re: Float::with_val(p, re),
            im: Float::with_val(p, im),
        }
    }

    pub fn real(re: Float) -> Self {
        let p = re.prec();
        Self { re, im: Float::new(p) }
    }

    pub fn zero_with_prec(bits: u32) -> Self {
        Self {
            re: Float::new(bits),
            im: Float::new(bits),
        }
    }

    pub fn from_f64(x: f64, bits: u32) -> Self {
        Self::real(Float::with_val(bits, x))
    }

    pub fn from_parts(re: &Rational, im: &Rational, bits: u32) -> Self {
        Self {
            re: Float::with_val(bits, re),
            im: Float::with_val(bits, im),
        }
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// Rounds (or widens) both components to `bits`.
    pub fn with_prec(&self, bits: u32) -> Self {
        Self {
            re: Float::with_val(bits, &self.re),
            im: Float::with_val(bits, &self.im),
        }
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Principal argument in (-pi, pi]. A zero imaginary part is read as +0.
    pub fn arg(&self) -> Float {
        let p = self.prec();
        if self.im.is_zero() {
            if self.re.is_sign_negative() && !self.re.is_zero() {
                return Float::with_val(p, Constant::Pi);
            }
            return Float::new(p);
        }
        Float::with_val(p, self.im.atan2_ref(&self.re))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    pub fn powu(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one().with_prec(self.prec());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// `exp(2 pi i j / r)` at `bits` of precision.
    pub fn root_of_unity(r: usize, j: usize, bits: u32) -> Self {
        if j.is_multiple_of(r) {
            return Scalar::one().with_prec(bits);
        }
        let angle = Float::with_val(bits, Constant::Pi) * 2u32 * (j as u32) / (r as u32);
        let (s, c) = angle.sin_cos(Float::new(bits));
        Self { re: c, im: s }
    }

    pub fn scale_f(&self, x: &Float) -> Self {
        let p = self.prec().max(x.prec());
        Self {
            re: Float::with_val(p, &self.re * x),
            im: Float::with_val(p, &self.im * x),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} {} {}i)",
            self.re.to_string_radix(10, Some(20)),
            if self.im.is_sign_negative() { '-' } else { '+' },
            Float::with_val(self.im.prec(), self.im.abs_ref()).to_string_radix(10, Some(20))
        )
    }
}

/// Bits needed to hold an integer-valued component exactly.
fn int_bits(x: &Float) -> Option<u32> {
    if x.is_zero() {
        Some(0)
    } else if x.is_integer() {
        x.get_exp().map(|e| e.max(0) as u32)
    } else {
        None
    }
}

impl Scalar {
    fn int_bits(&self) -> Option<u32> {
        Some(int_bits(&self.re)?.max(int_bits(&self.im)?))
    }

    /// `max(prec)`, widened so that integer operands combine exactly.
    fn op_prec(&self, rhs: &Scalar, product: bool) -> u32 {
        let p = self.prec().max(rhs.prec());
        match (self.int_bits(), rhs.int_bits()) {
            (Some(a), Some(b)) => {
                let need = if product { a + b + 2 } else { a.max(b) + 1 };
                p.max(need)
            }
            _ => p,
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        let p = self.op_prec(&rhs, false);
        Scalar {
            re: Float::with_val(p, &self.re + &rhs.re),
            im: Float::with_val(p, &self.im + &rhs.im),
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        let p = self.op_prec(&rhs, false);
        Scalar {
            re: Float::with_val(p, &self.re - &rhs.re),
            im: Float::with_val(p, &self.im - &rhs.im),
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        let p = self.op_prec(&rhs, true);
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar {
                re: Float::with_val(p, &self.re * &rhs.re),
                im: Float::new(p),
            };
        }
        let ac = Float::with_val(p, &self.re * &rhs.re);
        let bd = Float::with_val(p, &self.im * &rhs.im);
        let ad = Float::with_val(p, &self.re * &rhs.im);
        let bc = Float::with_val(p, &self.im * &rhs.re);
        Scalar {
            re: ac - bd,
            im: ad + bc,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Coeff for Scalar {
    fn from_i64(n: i64) -> Self {
        Scalar::real(Float::with_val(MIN_BITS, n))
    }

    fn from_integer(n: &Integer) -> Self {
        Scalar::real(Float::with_val(int_prec(n), n))
    }

    fn from_rational(q: &Rational) -> Self {
        Scalar::real(Float::with_val(DEFAULT_BITS, q))
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec().max(rhs.prec());
        if rhs.im.is_zero() {
            return Ok(Scalar {
                re: Float::with_val(p, &self.re / &rhs.re),
                im: Float::with_val(p, &self.im / &rhs.re),
            });
        }
        let wide = p + 16;
        let denom = Float::with_val(wide, rhs.re.square_ref()) + Float::with_val(wide, rhs.im.square_ref());
        let num_re = Float::with_val(wide, &self.re * &rhs.re) + Float::with_val(wide, &self.im * &rhs.im);
        let num_im = Float::with_val(wide, &self.im * &rhs.re) - Float::with_val(wide, &self.re * &rhs.im);
        Ok(Scalar {
            re: Float::with_val(p, num_re / &denom),
            im: Float::with_val(p, num_im / &denom),
        })
    }

    fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    fn to_scalar(&self, bits: u32) -> Scalar {
        self.with_prec(bits)
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        approx_equal(self, other, tol)
    }

    fn is_nonpositive_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer() && self.re <= 0
    }

    fn modulus_below_one(&self) -> bool {
        self.abs() < 1
    }
}

/// Gaussian rational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    re: Rational,
    im: Rational,
}

impl ExactScalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self {
            re,
            im: Rational::new(),
        }
    }

    /// `num / den` on the real axis. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(Rational::from((num, den)))
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn norm_sqr(&self) -> Rational {
        Rational::from(self.re.square_ref()) + Rational::from(self.im.square_ref())
    }

    pub fn is_real(&self) -> bool {
        self.im == 0
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({} + {}i)", self.re, self.im)
        }
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        ExactScalar {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: ExactScalar) -> ExactScalar {
        ExactScalar {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        if self.im == 0 && rhs.im == 0 {
            return ExactScalar::real(self.re * rhs.re);
        }
        let ac = Rational::from(&self.re * &rhs.re);
        let bd = Rational::from(&self.im * &rhs.im);
        let ad = Rational::from(&self.re * &rhs.im);
        let bc = Rational::from(&self.im * &rhs.re);
        ExactScalar {
            re: ac - bd,
            im: ad + bc,
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Coeff for ExactScalar {
    fn from_i64(n: i64) -> Self {
        Self::real(Rational::from(n))
    }

    fn from_integer(n: &Integer) -> Self {
        Self::real(Rational::from(n))
    }

    fn from_rational(q: &Rational) -> Self {
        Self::real(q.clone())
    }

    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if rhs.im == 0 {
            return Ok(ExactScalar {
                re: Rational::from(&self.re / &rhs.re),
                im: Rational::from(&self.im / &rhs.re),
            });
        }
        let denom = rhs.norm_sqr();
        let num_re = Rational::from(&self.re * &rhs.re) + Rational::from(&self.im * &rhs.im);
        let num_im = Rational::from(&self.im * &rhs.re) - Rational::from(&self.re * &rhs.im);
        Ok(ExactScalar {
            re: num_re / &denom,
            im: num_im / denom,
        })
    }

    fn abs_f64(&self) -> f64 {
        Float::with_val(64, &self.norm_sqr()).sqrt().to_f64()
    }

    fn to_scalar(&self, bits: u32) -> Scalar {
        Scalar::from_parts(&self.re, &self.im, bits)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn is_nonpositive_integer(&self) -> bool {
        self.im == 0 && *self.re.denom() == 1 && self.re <= 0
    }

    fn modulus_below_one(&self) -> bool {
        self.norm_sqr() < 1
    }
}

/// Rising factorial `x (x+1) ... (x+n-1)`; the empty product is one.
pub fn pochhammer_value<S: Coeff>(x: &S, n: u32) -> S {
    let mut acc = S::one();
    for i in 0..n {
        acc = acc * (x.clone() + S::from_i64(i as i64));
    }
    acc
}

/// `|u - v| <= tol * max(1, |u|, |v|)`.
pub fn approx_equal(u: &Scalar, v: &Scalar, tol: f64) -> bool {
    debug_assert!(tol > 0.0);
    let p = u.prec().max(v.prec());
    let diff = (u.clone() - v.clone()).abs();
    let mut scale = Float::with_val(p, 1);
    for m in [u.abs(), v.abs()] {
        if m.partial_cmp(&scale) == Some(Ordering::Greater) {
            scale = m;
        }
    }
    diff <= scale * Float::with_val(p, tol)
}

/// Parses a decimal literal (`-1.25`, `3e-2`, `.5`) or a fraction (`1/3`) exactly.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    let err = |reason: &str| Error::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(err("empty number"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_rational(num)?;
        let d = parse_rational(den)?;
        if d == 0 {
            return Err(err("zero denominator"));
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e = s[pos + 1..].parse::<i32>().map_err(|_| err("bad exponent"))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err("not a decimal number"));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from(all_digits.parse::<Integer>().map_err(|_| err("bad digits"))?);
    let scale = exponent - frac_part.len() as i32;
    let pow = Integer::from(Integer::u_pow_u(10, scale.unsigned_abs()));
    if scale >= 0 {
        value *= pow;
    } else {
        value /= pow;
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Parses `re`, `re+imi`, `re-imi` or `imi` into a Gaussian rational.
pub fn parse_complex(input: &str) -> Result<ExactScalar> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if !s.ends_with('i') {
        return Ok(ExactScalar::real(parse_rational(&s)?));
    }
    let body = &s[..s.len() - 1];
    // split at the last sign that is not the leading one and not part of an exponent
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        if (bytes[idx] == b'+' || bytes[idx] == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let imag = |t: &str| -> Result<Rational> {
        match t {
            "" | "+" => Ok(Rational::from(1)),
            "-" => Ok(Rational::from(-1)),
            other => parse_rational(other),
        }
    };
    match split {
        Some(idx) => Ok(ExactScalar::new(parse_rational(&body[..idx])?, imag(&body[idx..])?)),
        None => Ok(ExactScalar::new(Rational::new(), imag(body)?)),
    }
}

/// Decimal rendering used in every serialized output: integers print
/// without a fraction, everything else with `digits` significant digits.
pub fn format_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if x.is_integer() {
        if let Some(i) = x.to_integer() {
            if i.significant_bits() <= x.prec() {
                return i.to_string();
            }
        }
    }
    x.to_string_radix(10, Some(digits))
}

/// Significant decimal digits carried by `bits` binary digits.
pub fn decimal_digits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::ratio(n, d)
    }

    #[test]
    fn pochhammer_examples() {
        let x = Scalar::from_f64(1.75, 256);
        assert_eq!(pochhammer_value(&x, 0), Scalar::one());
        assert_eq!(pochhammer_value(&q(-3, 1), 2), q(6, 1));
        let beta = q(7, 3);
        assert_eq!(pochhammer_value(&beta, 1), beta);
        // a factor hits zero
        assert!(pochhammer_value(&q(-2, 1), 4).is_zero());
    }

    #[test]
    fn approx_equal_examples() {
        let one = Scalar::one().with_prec(256);
        assert!(approx_equal(&one, &one, 1e-30));
        let tiny = Scalar::real(Float::with_val(256, Float::i_exp(1, -200)));
        let cfg = PrecisionConfig::default();
        assert_eq!(cfg.equality_tolerance(), 2f64.powi(-128));
        assert!(approx_equal(&Scalar::zero_with_prec(256), &tiny, cfg.equality_tolerance()));
        let two = Scalar::from_i64(2).with_prec(256);
        assert!(!approx_equal(&one, &two, 1e-10));
    }

    #[test]
    fn division_by_exact_zero_is_an_error() {
        let one = Scalar::one();
        assert!(matches!(one.checked_div(&Scalar::zero()), Err(Error::DivisionByZero)));
        assert!(matches!(q(1, 2).checked_div(&ExactScalar::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn complex_division_matches_exact() {
        let u = ExactScalar::new(Rational::from((3, 2)), Rational::from(-2));
        let v = ExactScalar::new(Rational::from((1, 4)), Rational::from((5, 3)));
        let exact = u.checked_div(&v).unwrap().to_scalar(256);
        let float = u.to_scalar(256).checked_div(&v.to_scalar(256)).unwrap();
        assert!(approx_equal(&exact, &float, 2f64.powi(-250)));
    }

    #[test]
    fn precision_bounds() {
        assert!(PrecisionConfig::new(63).is_err());
        assert!(PrecisionConfig::new(64).is_ok());
        assert!(PrecisionConfig::new(MAX_BITS + 1).is_err());
    }

    #[test]
    fn arg_uses_principal_branch() {
        let minus_one = Scalar::new(Float::with_val(64, -1), -Float::new(64));
        let pi = Float::with_val(64, Constant::Pi);
        assert_eq!(minus_one.arg(), pi);
        let i = Scalar::new(Float::new(64), Float::with_val(64, 1));
        assert_eq!(i.arg(), pi / 2u32);
    }

    #[test]
    fn roots_of_unity_cycle() {
        let w = Scalar::root_of_unity(3, 1, 256);
        let cube = w.powu(3);
        assert!(approx_equal(&cube, &Scalar::one(), 2f64.powi(-250)));
    }

    #[test]
    fn parse_numbers() {
        assert_eq!(parse_rational("0.25").unwrap(), Rational::from((1, 4)));
        assert_eq!(parse_rational("-1.5e2").unwrap(), Rational::from(-150));
        assert_eq!(parse_rational("1/3").unwrap(), Rational::from((1, 3)));
        assert_eq!(parse_rational("2E-1").unwrap(), Rational::from((1, 5)));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(parse_complex("1+2i").unwrap(), ExactScalar::new(Rational::from(1), Rational::from(2)));
        assert_eq!(parse_complex("-0.5-i").unwrap(), ExactScalar::new(Rational::from((-1, 2)), Rational::from(-1)));
        assert_eq!(parse_complex("3i").unwrap(), ExactScalar::new(Rational::new(), Rational::from(3)));
        assert_eq!(parse_complex("1e-1+1e+1i").unwrap(), ExactScalar::new(Rational::from((1, 10)), Rational::from(10)));
        assert_eq!(parse_complex("7").unwrap(), q(7, 1));
    }

    #[test]
    fn formatting() {
        assert_eq!(format_float(&Float::with_val(256, -2), 10), "-2");
        assert_eq!(format_float(&Float::new(256), 10), "0");
        let third = Float::with_val(256, &Rational::from((1, 3)));
        assert!(format_float(&third, 20).starts_with("3.333333333333333333"));
    }

    #[derive(Debug, Clone)]
    enum Op {
        Add,
        Mul,
        Div,
    }

    fn leaf() -> impl Strategy<Value = (i64, i64)> {
        // exactly representable leaves: integers and dyadic fractions
        (1i64..1000, 0u32..6).prop_map(|(n, e)| (n, 1i64 << e))
    }

    proptest! {
        #[test]
        fn float_tracks_exact_on_rational_expression_chains(
            first in leaf(),
            steps in proptest::collection::vec((prop_oneof![Just(Op::Add), Just(Op::Mul), Just(Op::Div)], leaf()), 1..64),
            bits in prop_oneof![Just(64u32), Just(256u32)],
        ) {
            let mut exact = q(first.0, first.1);
            let mut float = exact.to_scalar(bits);
            for (op, (n, d)) in steps {
                let e = q(n, d);
                let f = e.to_scalar(bits);
                match op {
                    Op::Add => { exact = exact + e; float = float + f; }
                    Op::Mul => { exact = exact * e; float = float * f; }
                    Op::Div => {
                        exact = exact.checked_div(&e).unwrap();
                        float = float.checked_div(&f).unwrap();
                    }
                }
            }
            let reference = exact.to_scalar(bits + 64);
            let err = (float.with_prec(bits + 64) - reference.clone()).abs();
            let bound = reference.abs() * Float::with_val(bits + 64, Float::i_exp(1, 4 - bits as i32));
            prop_assert!(err <= bound);
        }

        #[test]
        fn integer_scalars_combine_exactly(
            first in any::<i64>(),
            steps in proptest::collection::vec((0u8..3, any::<i64>()), 1..24),
        ) {
            let mut exact = Integer::from(first);
            let mut float = Scalar::from_i64(first);
            for (op, v) in steps {
                let f = Scalar::from_i64(v);
                match op {
                    0 => { exact += v; float = float + f; }
                    1 => { exact -= v; float = float - f; }
                    _ => { exact *= v; float = float * f; }
                }
            }
            prop_assert!(float.im().is_zero());
            prop_assert_eq!(float.re().to_integer().unwrap(), exact);
        }

        #[test]
        fn pochhammer_splits(num in -20i64..20, den in 1i64..7, m in 0u32..8, n in 0u32..8) {
            let x = q(num, den);
            let lhs = pochhammer_value(&x, m + n);
            let rhs = pochhammer_value(&x, m) * pochhammer_value(&(x.clone() + ExactScalar::from_i64(m as i64)), n);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
