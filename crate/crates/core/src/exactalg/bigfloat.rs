//! Arbitrary-precision binary floating point and complex numbers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Rat;

/// `m * 2^e`, rounded to a caller-supplied number of mantissa bits.
#[derive(Clone, PartialEq, Eq)]
pub struct BigFloat {
    m: BigInt,
    e: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat {
            m: BigInt::zero(),
            e: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        BigFloat {
            m: BigInt::from(n),
            e: 0,
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        BigFloat { m: n, e: 0 }
    }

    pub fn from_parts(m: BigInt, e: i64) -> Self {
        BigFloat { m, e }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        BigFloat {
            m: BigInt::from(mant) * sign,
            e,
        }
    }

    pub fn from_rational(r: &Rat, prec: u32) -> Self {
        BigFloat::from_bigint(r.numer().clone()).div(&BigFloat::from_bigint(r.denom().clone()), prec)
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// `(m, e)` with value `m * 2^e` and `m` odd (or zero).
    pub fn mantissa_exponent(&self) -> (BigInt, i64) {
        if self.m.is_zero() {
            return (BigInt::zero(), 0);
        }
        let tz = self.m.trailing_zeros().unwrap_or(0);
        (&self.m >> tz as usize, self.e + tz as i64)
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    fn bits(&self) -> u64 {
        self.m.bits()
    }

    /// Binary exponent of the most significant bit, `None` for zero.
    pub fn magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.e + self.bits() as i64)
        }
    }

    /// Rounds the mantissa to `prec` bits, ties away from zero.
    pub fn round(mut self, prec: u32) -> Self {
        let b = self.bits();
        if b > prec as u64 {
            let sh = b - prec as u64;
            let neg = self.m.is_negative();
            let mag = self.m.magnitude().clone();
            let half = num_bigint::BigUint::one() << (sh - 1);
            let r = (mag + half) >> sh;
            self.m = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, r);
            self.e += sh as i64;
        }
        if self.m.is_zero() {
            self.e = 0;
        }
        self
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            m: -&self.m,
            e: self.e,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            m: self.m.abs(),
            e: self.e,
        }
    }

    pub fn ldexp(&self, k: i64) -> Self {
        BigFloat {
            m: self.m.clone(),
            e: self.e + k,
        }
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        if self.is_zero() {
            return o.clone().round(prec);
        }
        if o.is_zero() {
            return self.clone().round(prec);
        }
        let ta = self.magnitude().unwrap();
        let tb = o.magnitude().unwrap();
        let guard = prec as i64 + 4;
        if ta - tb > guard && ta - tb > 0 {
            return self.clone().round(prec);
        }
        if tb - ta > guard {
            return o.clone().round(prec);
        }
        let (m, e) = match self.e.cmp(&o.e) {
            Ordering::Equal => (&self.m + &o.m, self.e),
            Ordering::Greater => ((&self.m << (self.e - o.e) as usize) + &o.m, o.e),
            Ordering::Less => (&self.m + (&o.m << (o.e - self.e) as usize), self.e),
        };
        BigFloat { m, e }.round(prec)
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        BigFloat {
            m: &self.m * &o.m,
            e: self.e + o.e,
        }
        .round(prec)
    }

    /// Panics on division by zero.
    pub fn div(&self, o: &Self, prec: u32) -> Self {
        assert!(!o.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let want = prec as i64 + 2 + o.bits() as i64 - self.bits() as i64;
        let sh = want.max(0);
        let m = (&self.m << sh as usize) / &o.m;
        BigFloat {
            m,
            e: self.e - sh - o.e,
        }
        .round(prec)
    }

    /// Square root of a nonnegative value.
    pub fn sqrt(&self, prec: u32) -> Self {
        assert!(!self.is_negative(), "square root of a negative BigFloat");
        if self.is_zero() {
            return Self::zero();
        }
        let target = 2 * prec as i64 + 4;
        let mut sh = (target - self.bits() as i64).max(0);
        if (self.e - sh) % 2 != 0 {
            sh += 1;
        }
        let m = (&self.m << sh as usize).sqrt();
        BigFloat {
            m,
            e: (self.e - sh) / 2,
        }
        .round(prec)
    }

    pub fn cmp_value(&self, o: &Self) -> Ordering {
        let d = self.sub(o, 64);
        if d.is_zero() {
            Ordering::Equal
        } else if d.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.bits() as i64;
        let sh = (b - 62).max(0);
        let top = (&self.m >> sh as usize).to_i64().unwrap() as f64;
        let exp = self.e + sh;
        if exp > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if exp < -2200 {
            return 0.0;
        }
        top * 2f64.powi(exp as i32)
    }

    /// Nearest integer, ties away from zero.
    pub fn round_to_int(&self) -> BigInt {
        if self.e >= 0 {
            return &self.m << self.e as usize;
        }
        let sh = (-self.e) as usize;
        let neg = self.m.is_negative();
        let mag = self.m.abs();
        let half = BigInt::one() << (sh - 1);
        let r = (mag + half) >> sh;
        if neg {
            -r
        } else {
            r
        }
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(30))
    }
}

impl BigFloat {
    /// Decimal rendering with `digits` significant fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10).pow(digits as u32);
        let scaled = BigFloat::from_bigint(scale)
            .mul(self, self.bits().max(64) as u32 + 8 + 4 * digits as u32)
            .round_to_int();
        let neg = scaled.is_negative();
        let s = scaled.abs().to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (ip, fp) = s.split_at(s.len() - digits);
        let fp = fp.trim_end_matches('0');
        let body = if fp.is_empty() {
            ip.to_string()
        } else {
            format!("{ip}.{fp}")
        };
        if neg && body != "0" {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Parses a decimal string such as `-1.25e-3`.
    pub fn parse_decimal(s: &str, prec: u32) -> Option<Self> {
        let s = s.trim();
        let (mant, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
            None => (s, 0),
        };
        let (neg, mant) = match mant.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, mant.strip_prefix('+').unwrap_or(mant)),
        };
        let (ip, fp) = match mant.find('.') {
            Some(i) => (&mant[..i], &mant[i + 1..]),
            None => (mant, ""),
        };
        if ip.is_empty() && fp.is_empty() {
            return None;
        }
        if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{ip}{fp}").parse().ok()?;
        let digits = if neg { -digits } else { digits };
        let e10 = exp - fp.len() as i64;
        let ten = BigInt::from(10);
        let r = if e10 >= 0 {
            Rat::from_integer(digits * ten.pow(e10 as u32))
        } else {
            Rat::new(digits, ten.pow((-e10) as u32))
        };
        Some(BigFloat::from_rational(&r, prec))
    }
}

/// Complex number with [`BigFloat`] parts and an explicit precision.
#[derive(Clone, PartialEq, Eq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    pub prec: u32,
}

pub const MIN_PRECISION: u32 = 64;

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat, prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION);
        BigComplex {
            re: re.round(prec),
            im: im.round(prec),
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(BigFloat::zero(), BigFloat::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::new(BigFloat::from_int(1), BigFloat::zero(), prec)
    }

    pub fn from_rational(r: &Rat, prec: u32) -> Self {
        Self::new(BigFloat::from_rational(r, prec), BigFloat::zero(), prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self::new(BigFloat::from_f64(re), BigFloat::from_f64(im), prec)
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self::new(self.re.clone(), self.im.clone(), prec)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn p(&self, o: &Self) -> u32 {
        self.prec.min(o.prec)
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.p(o);
        BigComplex {
            re: self.re.add(&o.re, p),
            im: self.im.add(&o.im, p),
            prec: p,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.p(o);
        BigComplex {
            re: self.re.sub(&o.re, p),
            im: self.im.sub(&o.im, p),
            prec: p,
        }
    }

    pub fn neg(&self) -> Self {
        BigComplex {
            re: self.re.neg(),
            im: self.im.neg(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.p(o);
        let w = p + 8;
        let re = self.re.mul(&o.re, w).sub(&self.im.mul(&o.im, w), p);
        let im = self.re.mul(&o.im, w).add(&self.im.mul(&o.re, w), p);
        BigComplex { re, im, prec: p }
    }

    pub fn scale(&self, k: &BigFloat) -> Self {
        BigComplex {
            re: self.re.mul(k, self.prec),
            im: self.im.mul(k, self.prec),
            prec: self.prec,
        }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let w = self.prec + 8;
        self.re
            .mul(&self.re, w)
            .add(&self.im.mul(&self.im, w), self.prec)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.prec)
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: self.im.neg(),
            prec: self.prec,
        }
    }

    /// Panics on zero.
    pub fn recip(&self) -> Self {
        let w = self.prec + 8;
        let n = self.norm_sqr();
        BigComplex {
            re: self.re.div(&n, w).round(self.prec),
            im: self.im.neg().div(&n, w).round(self.prec),
            prec: self.prec,
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    pub fn powi(&self, e: i32) -> Self {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = BigComplex::one(self.prec);
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// `exp(2 pi i * num / den)`.
    pub fn root_of_unity(num: i64, den: i64, prec: u32) -> Self {
        let w = prec + 16;
        let angle = pi(w)
            .ldexp(1)
            .mul(&BigFloat::from_int(num), w)
            .div(&BigFloat::from_int(den), w);
        Self::cis(&angle, prec)
    }

    /// `cos(theta) + i sin(theta)`.
    pub fn cis(theta: &BigFloat, prec: u32) -> Self {
        let (c, s) = cos_sin(theta, prec);
        Self::new(c, s, prec)
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        write!(f, "({re:e} {im:+e}i)")
    }
}

fn atan_inv_fixed(n: u64, bits: u64) -> BigInt {
    let one = BigInt::one() << bits as usize;
    let n2 = BigInt::from(n * n);
    let mut power = one / BigInt::from(n);
    let mut sum = power.clone();
    let mut k: u64 = 1;
    loop {
        power /= &n2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// Pi to `prec` bits.
pub fn pi(prec: u32) -> BigFloat {
    let bits = prec as u64 + 32;
    let v = atan_inv_fixed(5, bits) * 16 - atan_inv_fixed(239, bits) * 4;
    BigFloat::from_parts(v, -(bits as i64)).round(prec)
}

/// `(cos x, sin x)` to `prec` bits.
pub fn cos_sin(x: &BigFloat, prec: u32) -> (BigFloat, BigFloat) {
    let mag = x.magnitude().unwrap_or(0).max(0) as u32;
    let w = prec + 64 + mag;
    let two_pi = pi(w).ldexp(1);
    let k = x.div(&two_pi, w).round_to_int();
    let r = x.sub(&two_pi.mul(&BigFloat::from_bigint(k), w), w);
    let bits = (prec + 64) as usize;
    let xf = {
        let shifted = r.ldexp(bits as i64);
        shifted.round_to_int()
    };
    let one = BigInt::one() << bits;
    let x2 = (&xf * &xf) >> bits;
    let mut s = xf.clone();
    let mut t = xf;
    let mut n: i64 = 1;
    loop {
        t = -((&t * &x2) >> bits) / BigInt::from((n + 1) * (n + 2));
        if t.is_zero() {
            break;
        }
        s += &t;
        n += 2;
    }
    let mut c = one.clone();
    let mut t = one;
    let mut n: i64 = 0;
    loop {
        t = -((&t * &x2) >> bits) / BigInt::from((n + 1) * (n + 2));
        if t.is_zero() {
            break;
        }
        c += &t;
        n += 2;
    }
    (
        BigFloat::from_parts(c, -(bits as i64)).round(prec),
        BigFloat::from_parts(s, -(bits as i64)).round(prec),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        assert_eq!(
            pi(200).to_decimal(40),
            "3.1415926535897932384626433832795028841972"
        );
    }

    #[test]
    fn sqrt_two_squared() {
        let two = BigFloat::from_int(2);
        let r = two.sqrt(256);
        let back = r.mul(&r, 256);
        let err = back.sub(&two, 256).abs();
        assert!(err.magnitude().unwrap() < -250);
    }

    #[test]
    fn cos_sin_identities() {
        let x = BigFloat::from_f64(2.5);
        let (c, s) = cos_sin(&x, 200);
        assert!((c.to_f64() - 2.5f64.cos()).abs() < 1e-15);
        assert!((s.to_f64() - 2.5f64.sin()).abs() < 1e-15);
        let one = c.mul(&c, 220).add(&s.mul(&s, 220), 220);
        let err = one.sub(&BigFloat::from_int(1), 220).abs();
        assert!(err.is_zero() || err.magnitude().unwrap() < -190);
    }

    #[test]
    fn fifth_root_of_unity() {
        let z = BigComplex::root_of_unity(1, 5, 200);
        let w = z.powi(5);
        let err = w.sub(&BigComplex::one(200)).abs();
        assert!(err.is_zero() || err.magnitude().unwrap() < -180);
    }

    #[test]
    fn decimal_round_trip() {
        let x = BigFloat::parse_decimal("-12.375e-1", 128).unwrap();
        assert_eq!(x.to_decimal(10), "-1.2375");
        assert_eq!(BigFloat::zero().to_decimal(5), "0");
    }
}
