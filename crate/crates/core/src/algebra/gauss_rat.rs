//! Gaussian rationals `a + b i` with `a, b` arbitrary-precision rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::AlgebraError;

pub type Rational = BigRational;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRat {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRat { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::real(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat::new(int(re), int(im))
    }

    /// `num/den` as a real Gaussian rational. Panics on `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        GaussRat::real(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn i() -> Self {
        GaussRat::new(Rational::zero(), Rational::one())
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussRat::one(),
            1 => GaussRat::i(),
            2 => -GaussRat::one(),
            _ => -GaussRat::i(),
        }
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(GaussRat::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GaussRat::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, k: &Rational) -> Self {
        GaussRat::new(&self.re * k, &self.im * k)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Nearest Gaussian rational with each part within `tol` (relative to
    /// `max(1, |part|)`) of the float input.
    pub fn rationalize(c: Complex64, tol: f64) -> Self {
        GaussRat::new(rationalize_f64(c.re, tol), rationalize_f64(c.im, tol))
    }
}

pub(crate) fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // numerator/denominator can individually overflow f64
    let shift = r.numer().bits().max(r.denom().bits()) as i64 - 900;
    if shift <= 0 {
        return f64::NAN;
    }
    let n = (r.numer() >> shift as usize).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift as usize).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Continued-fraction approximation of `x` with `|x - p/q| <= tol * max(1, |x|)`.
pub fn rationalize_f64(x: f64, tol: f64) -> Rational {
    if x == 0.0 || !x.is_finite() {
        return Rational::zero();
    }
    let target = tol * x.abs().max(1.0);
    let neg = x < 0.0;
    let ax = x.abs();
    // convergents h/k
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut frac = ax;
    let exact = Rational::from_float(ax).unwrap_or_else(Rational::zero);
    for _ in 0..64 {
        let a = frac.floor();
        let ai = BigInt::from(a as u64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let approx = Rational::new(h1.clone(), k1.clone());
        let err = rat_to_f64(&(&approx - &exact)).abs();
        if err <= target {
            return if neg { -approx } else { approx };
        }
        let rem = frac - a;
        if rem <= 0.0 {
            break;
        }
        frac = 1.0 / rem;
    }
    if neg {
        -exact
    } else {
        exact
    }
}

/// Parses `"p/q"`, `"p"`, or an exact decimal such as `"-0.49"` / `"1.5e-3"`.
pub fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    let s = s.trim();
    let bad = || AlgebraError::Parse(s.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat::new(Rational::zero(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat::new(Rational::one(), Rational::zero())
    }
}

impl From<i64> for GaussRat {
    fn from(n: i64) -> Self {
        GaussRat::from_int(n)
    }
}

impl From<Rational> for GaussRat {
    fn from(r: Rational) -> Self {
        GaussRat::real(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: GaussRat) -> GaussRat {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: &'a GaussRat) -> GaussRat {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<GaussRat> for &'a GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: GaussRat) -> GaussRat {
                self.$method(&rhs)
            }
        }
    };
}

impl<'b> Add<&'b GaussRat> for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &'b GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'b> Sub<&'b GaussRat> for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &'b GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'b> Mul<&'b GaussRat> for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &'b GaussRat) -> GaussRat {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::real(&self.re * &rhs.re);
        }
        GaussRat::new(&self.re * &rhs.re - &self.im * &rhs.im, &self.re * &rhs.im + &self.im * &rhs.re)
    }
}

/// Panics on division by zero, like the rational type underneath.
impl<'b> Div<&'b GaussRat> for &GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: &'b GaussRat) -> GaussRat {
        #[allow(clippy::suspicious_arithmetic_impl)]
        let q = self * &rhs.inv().expect("division by zero Gaussian rational");
        q
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, rhs: &GaussRat) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussRat> for GaussRat {
    fn mul_assign(&mut self, rhs: &GaussRat) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}i", self.re, -self.im.clone())
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GaussRat {
    type Err = AlgebraError;
    /// Accepts the `Display` forms `a`, `bi` and `a±bi`, with `a`, `b`
    /// written as `p/q` or decimals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let Some(body) = s.strip_suffix('i') else {
            return parse_rational(s).map(GaussRat::real);
        };
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E' | b'/'));
        let imag = |t: &str| match t.strip_prefix('+').unwrap_or(t) {
            "" => Ok(Rational::one()),
            "-" => Ok(-Rational::one()),
            t => parse_rational(t),
        };
        match split {
            Some(k) => Ok(GaussRat::new(parse_rational(&body[..k])?, imag(&body[k..])?)),
            None => Ok(GaussRat::new(Rational::zero(), imag(body)?)),
        }
    }
}

impl Serialize for GaussRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.re.to_string(), self.im.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        gauss_from_json(&v).map_err(D::Error::custom)
    }
}

/// Real scalar from a JSON string (exact) or number (rationalized at 1e-13).
pub fn rational_from_json(v: &serde_json::Value) -> Result<Rational, AlgebraError> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(int)
            .or_else(|| n.as_f64().map(|x| rationalize_f64(x, super::FLOAT_RATIONALIZE_TOL)))
            .ok_or_else(|| AlgebraError::Parse(n.to_string())),
        other => Err(AlgebraError::Parse(other.to_string())),
    }
}

/// Complex scalar from `["re","im"]`, or a bare real scalar.
pub fn gauss_from_json(v: &serde_json::Value) -> Result<GaussRat, AlgebraError> {
    match v {
        serde_json::Value::Array(items) if items.len() == 2 => {
            Ok(GaussRat::new(rational_from_json(&items[0])?, rational_from_json(&items[1])?))
        }
        serde_json::Value::Array(_) => Err(AlgebraError::Parse(v.to_string())),
        other => rational_from_json(other).map(GaussRat::real),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let a = GaussRat::new(Rational::new(1.into(), 3.into()), int(2));
        let b = GaussRat::from_ints(0, 1);
        assert_eq!(&a * &b, GaussRat::new(int(-2), Rational::new(1.into(), 3.into())));
        assert_eq!(&(&a / &a), &GaussRat::one());
        assert_eq!(GaussRat::i().pow(2), -GaussRat::one());
        assert_eq!(GaussRat::i_pow(-1), -GaussRat::i());
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/8").unwrap(), Rational::new(1.into(), 8.into()));
        assert_eq!(parse_rational("-0.49").unwrap(), Rational::new((-49).into(), 100.into()));
        assert_eq!(parse_rational("1.5e-3").unwrap(), Rational::new(3.into(), 2000.into()));
        assert_eq!(parse_rational("2").unwrap(), int(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize_f64(0.125, 1e-13), Rational::new(1.into(), 8.into()));
        assert_eq!(rationalize_f64(-1.0 / 3.0, 1e-13), Rational::new((-1).into(), 3.into()));
        let x = std::f64::consts::PI;
        assert!((rat_to_f64(&rationalize_f64(x, 1e-13)) - x).abs() <= 1e-13 * x);
    }

    #[test]
    fn serializes_as_string_pair() {
        let g = GaussRat::new(Rational::new(1.into(), 8.into()), int(0));
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"["1/8","0"]"#);
        let back: GaussRat = serde_json::from_str(r#"["1/8","0"]"#).unwrap();
        assert_eq!(back, g);
        let real: GaussRat = serde_json::from_str(r#""-3/2""#).unwrap();
        assert_eq!(real, GaussRat::ratio(-3, 2));
    }
}
