//! Multiprecision real and complex scalars.
//!
//! Thin value types over `astro_float::BigFloat`. Every value carries its own
//! mantissa length in bits; binary operations run at the larger of the two
//! operand precisions and round to nearest-even.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign, WORD_BIT_SIZE};
use num_bigint::{BigInt, Sign as BigSign};
use num_complex::Complex64;
use num_rational::BigRational;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Working precision in bits for a requested number of decimal digits,
/// including guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64;
    bits.div_ceil(WORD_BIT_SIZE) * WORD_BIT_SIZE
}

/// A real number at a fixed binary precision.
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        Real { v, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Real::wrap(BigFloat::new(prec), prec)
    }

    pub fn one(prec: usize) -> Self {
        Real::from_i64(1, prec)
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        Real::wrap(BigFloat::from_f64(x, prec), prec)
    }

    pub fn from_i64(x: i64, prec: usize) -> Self {
        Real::wrap(BigFloat::from_i64(x, prec), prec)
    }

    pub fn from_bigint(x: &BigInt, prec: usize) -> Self {
        let (sign, digits) = x.to_u64_digits();
        let half_word = BigFloat::from_u64(1u64 << 32, prec);
        let base = half_word.mul(&half_word, prec, RM);
        let mut acc = BigFloat::new(prec);
        for d in digits.iter().rev() {
            acc = acc.mul(&base, prec, RM).add(&BigFloat::from_u64(*d, prec), prec, RM);
        }
        if sign == BigSign::Minus {
            acc = BigFloat::neg(&acc);
        }
        Real::wrap(acc, prec)
    }

    pub fn from_rational(x: &BigRational, prec: usize) -> Self {
        Real::from_bigint(x.numer(), prec) / Real::from_bigint(x.denom(), prec)
    }

    /// Parses a decimal literal such as `"-0.125"` or `"1.5e-3"`, rounded to `prec` bits.
    pub fn parse_decimal(s: &str, prec: usize) -> Option<Self> {
        let t = s.trim();
        let ok = !t.is_empty()
            && t.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E'))
            && t.bytes().any(|b| b.is_ascii_digit());
        if !ok {
            return None;
        }
        let v = with_consts(|cc| BigFloat::parse(t, astro_float::Radix::Dec, prec, RM, cc));
        (!v.is_nan() && !v.is_inf()).then(|| Real::wrap(v, prec))
    }

    pub fn pi(prec: usize) -> Self {
        Real::wrap(with_consts(|cc| cc.pi(prec, RM)), prec)
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Re-rounds to a new precision.
    pub fn with_prec(&self, prec: usize) -> Self {
        let mut v = self.v.clone();
        v.set_precision(prec, RM).expect("valid precision");
        Real::wrap(v, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn abs(&self) -> Self {
        Real::wrap(self.v.abs(), self.prec)
    }

    pub fn sqrt(&self) -> Self {
        Real::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec;
        Real::wrap(with_consts(|cc| self.v.exp(p, RM, cc)), p)
    }

    pub fn ln(&self) -> Self {
        let p = self.prec;
        Real::wrap(with_consts(|cc| self.v.ln(p, RM, cc)), p)
    }

    pub fn sin(&self) -> Self {
        let p = self.prec;
        Real::wrap(with_consts(|cc| self.v.sin(p, RM, cc)), p)
    }

    pub fn cos(&self) -> Self {
        let p = self.prec;
        Real::wrap(with_consts(|cc| self.v.cos(p, RM, cc)), p)
    }

    /// Multiplication by `2^k`.
    pub fn ldexp(&self, k: i32) -> Self {
        if self.v.is_zero() {
            return self.clone();
        }
        let mut v = self.v.clone();
        let e = v.exponent().expect("finite value");
        v.set_exponent(e + k);
        Real::wrap(v, self.prec)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self * &Real::from_i64(k, self.prec)
    }

    pub fn div_i64(&self, k: i64) -> Self {
        self / &Real::from_i64(k, self.prec)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Nearest integer as `i64`, ties broken toward zero.
    pub fn round_half_to_zero(&self) -> i64 {
        let fl = self.v.floor();
        let frac = self.v.sub(&fl, self.prec, RM);
        let base = Real::wrap(fl, self.prec).to_f64() as i64;
        match frac.cmp(&BigFloat::from_f64(0.5, self.prec)) {
            Some(c) if c > 0 => base + 1,
            Some(0) if base < 0 => base + 1,
            _ => base,
        }
    }

    /// Closest `f64`, truncating the mantissa beyond 64 bits.
    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.v.is_zero() {
            return 0.0;
        }
        let Some((words, _, sign, exp, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        let mut m = 0.0f64;
        let mut scale = 1.0f64;
        for w in words.iter().rev().take(128 / WORD_BIT_SIZE) {
            scale *= 2f64.powi(-(WORD_BIT_SIZE as i32));
            m += *w as f64 * scale;
        }
        let v = m * 2f64.powi(exp);
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    pub fn max(&self, other: &Real) -> Real {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Real {
    /// Scientific notation rounded to `digits` significant digits, e.g.
    /// `"-1.2346e+3"`; zero is `"0"`.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let full = self.v.to_string();
        let Some((mant, exp)) = full.split_once('e') else {
            return full;
        };
        let (neg, mant) = match mant.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, mant),
        };
        let Ok(mut exp) = exp.parse::<i64>() else {
            return full;
        };
        let mut ds: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
        let digits = digits.max(1);
        if ds.len() > digits {
            let up = ds[digits] >= 5;
            ds.truncate(digits);
            if up {
                let mut i = digits;
                loop {
                    if i == 0 {
                        ds.insert(0, 1);
                        ds.pop();
                        exp += 1;
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
        }
        while ds.len() > 1 && ds.last() == Some(&0) {
            ds.pop();
        }
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push((b'0' + ds[0]) as char);
        if ds.len() > 1 {
            s.push('.');
            s.extend(ds[1..].iter().map(|d| (b'0' + d) as char));
        }
        s.push_str(&format!("e{}{}", if exp < 0 { '-' } else { '+' }, exp.abs()));
        s
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.prec.max(rhs.prec);
                Real::wrap(self.v.$m(&rhs.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

/// A complex number with multiprecision parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: usize) -> Self {
        Complex::new(Real::zero(prec), Real::zero(prec))
    }

    pub fn one(prec: usize) -> Self {
        Complex::new(Real::one(prec), Real::zero(prec))
    }

    pub fn i(prec: usize) -> Self {
        Complex::new(Real::zero(prec), Real::one(prec))
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.prec();
        Complex::new(re, Real::zero(p))
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        Complex::new(Real::from_f64(re, prec), Real::from_f64(im, prec))
    }

    pub fn from_c64(z: Complex64, prec: usize) -> Self {
        Complex::from_f64(z.re, z.im, prec)
    }

    pub fn from_i64(re: i64, im: i64, prec: usize) -> Self {
        Complex::new(Real::from_i64(re, prec), Real::from_i64(im, prec))
    }

    pub fn prec(&self) -> usize {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: usize) -> Self {
        Complex::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: &Real) -> Self {
        Complex::new(&self.re * k, &self.im * k)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        Complex::new(self.re.mul_i64(k), self.im.mul_i64(k))
    }

    pub fn div_i64(&self, k: i64) -> Self {
        Complex::new(self.re.div_i64(k), self.im.div_i64(k))
    }

    pub fn ldexp(&self, k: i32) -> Self {
        Complex::new(self.re.ldexp(k), self.im.ldexp(k))
    }

    pub fn mul_i(&self) -> Self {
        Complex::new(-&self.im, self.re.clone())
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Complex::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Complex::one(self.prec());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// `exp(self)`.
    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        Complex::new(&m * self.im.cos(), &m * self.im.sin())
    }

    /// Principal square root (branch cut on the negative real axis).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return Complex::zero(p);
        }
        let r = self.abs();
        let half = Real::from_f64(0.5, p);
        let a = ((&r + &self.re) * &half).sqrt();
        let b = ((&r - &self.re) * &half).sqrt();
        if self.im.is_negative() {
            Complex::new(a, -b)
        } else {
            Complex::new(a, b)
        }
    }
}

macro_rules! cx_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Complex> for &Complex {
            type Output = Complex;
            fn $m(self, rhs: &Complex) -> Complex {
                let f: fn(&Complex, &Complex) -> Complex = $body;
                f(self, rhs)
            }
        }
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: &Complex) -> Complex {
                (&self).$m(rhs)
            }
        }
        impl $tr<Complex> for &Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex {
                self.$m(&rhs)
            }
        }
    };
}

cx_binop!(Add, add, |a, b| Complex::new(&a.re + &b.re, &a.im + &b.im));
cx_binop!(Sub, sub, |a, b| Complex::new(&a.re - &b.re, &a.im - &b.im));
cx_binop!(Mul, mul, |a, b| Complex::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re
));
cx_binop!(Div, div, |a, b| {
    let n = b.norm_sqr();
    Complex::new(
        (&a.re * &b.re + &a.im * &b.im) / &n,
        (&a.im * &b.re - &a.re * &b.im) / &n,
    )
});

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip() {
        for x in [1.0, -3.25, 1e-300, 6.02e23, std::f64::consts::PI] {
            assert_eq!(Real::from_f64(x, 192).to_f64(), x);
        }
        assert_eq!(Real::zero(128).to_f64(), 0.0);
    }

    #[test]
    fn bigint_conversion() {
        let big: BigInt = "-123456789012345678901234567890".parse().unwrap();
        let r = Real::from_bigint(&big, 256);
        assert!((r.to_f64() + 1.2345678901234568e29).abs() < 1e14);
        let q = BigRational::new(1.into(), 3.into());
        let third = Real::from_rational(&q, 256);
        let err = (third.mul_i64(3) - Real::one(256)).abs();
        assert!(err.to_f64() < 1e-70);
    }

    #[test]
    fn decimal_parsing() {
        let p = 256;
        let x = Real::parse_decimal("0.1", p).unwrap();
        let tenth = Real::one(p) / Real::from_i64(10, p);
        assert!((&x - &tenth).abs().to_f64() < 1e-75);
        assert_eq!(Real::parse_decimal("-1.5e-3", p).unwrap().to_f64(), -0.0015);
        assert_eq!(Real::parse_decimal(" 2 ", p).unwrap().to_f64(), 2.0);
        for bad in ["", "abc", "1.2.3x", "e", "inf"] {
            assert!(Real::parse_decimal(bad, p).is_none(), "{bad}");
        }
    }

    #[test]
    fn scientific_strings() {
        let p = 256;
        assert_eq!(Real::pi(p).to_sci_string(5), "3.1416e+0");
        assert_eq!((-Real::from_i64(12345, p)).to_sci_string(3), "-1.23e+4");
        assert_eq!(Real::from_f64(9.9996, p).to_sci_string(4), "1e+1");
        assert_eq!(Real::from_f64(0.25, p).to_sci_string(40), "2.5e-1");
        assert_eq!(Real::zero(p).to_sci_string(10), "0");
        let x = Real::pi(p) / Real::from_i64(1000, p);
        let back: f64 = x.to_sci_string(17).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI / 1000.0);
    }

    #[test]
    fn rounding_ties_toward_zero() {
        let p = 128;
        assert_eq!(Real::from_f64(2.5, p).round_half_to_zero(), 2);
        assert_eq!(Real::from_f64(-2.5, p).round_half_to_zero(), -2);
        assert_eq!(Real::from_f64(2.51, p).round_half_to_zero(), 3);
        assert_eq!(Real::from_f64(-2.51, p).round_half_to_zero(), -3);
        assert_eq!(Real::from_f64(-0.2, p).round_half_to_zero(), 0);
    }

    #[test]
    fn complex_field_identities() {
        let p = bits_for_digits(40);
        let a = Complex::from_f64(0.3, -1.7, p);
        let b = Complex::from_f64(-2.2, 0.9, p);
        let q = &(&a * &b) / &b;
        assert!((&q - &a).abs().to_f64() < 1e-45);
        let s = a.sqrt();
        assert!((&s.square() - &a).abs().to_f64() < 1e-45);
        assert!(s.re.to_f64() > 0.0);
        let e = Complex::from_f64(0.0, std::f64::consts::PI, p).exp();
        assert!((e.re.to_f64() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn ldexp_scales_by_powers_of_two() {
        let x = Real::from_f64(3.0, 128);
        assert_eq!(x.ldexp(-2).to_f64(), 0.75);
        assert_eq!(x.ldexp(5).to_f64(), 96.0);
    }
}
