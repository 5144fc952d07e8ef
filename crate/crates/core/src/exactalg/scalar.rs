use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use super::bigfloat::{BigComplex, BigFloat};
use super::poly::{LaurentPoly, Rat};
use super::var::Var;
use crate::error::{Error, Result};

/// A coefficient-level value: exact rational, a named indeterminate, or an
/// arbitrary-precision complex number.
#[derive(Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(Rat),
    Symbol(Var),
    Complex(BigComplex),
}

pub const DEFAULT_PRECISION: u32 = 128;

/// Parses `p`, `-p` or `p/q` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

pub fn format_rational(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact decimal expansion of a dyadic value.
fn exact_decimal(x: &BigFloat) -> String {
    let (m, e) = x.mantissa_exponent();
    if e >= 0 {
        return (m << e as usize).to_string();
    }
    let k = (-e) as u32;
    let scaled = m * BigInt::from(5).pow(k);
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let k = k as usize;
    let padded = if digits.len() <= k {
        format!("{}{}", "0".repeat(k + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (ip, fp) = padded.split_at(padded.len() - k);
    let fp = fp.trim_end_matches('0');
    let body = if fp.is_empty() {
        ip.to_string()
    } else {
        format!("{ip}.{fp}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl Scalar {
    /// Rational literal, else identifier.
    pub fn parse_str(s: &str) -> Result<Scalar> {
        if let Some(r) = parse_rational(s) {
            return Ok(Scalar::Rational(r));
        }
        let s = s.trim();
        if Var::is_valid_name(s) {
            return Ok(Scalar::Symbol(Var::new(s)));
        }
        Err(Error::parse("scalar", format!("`{s}` is neither a rational nor a symbol")))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Symbol(_) => false,
            Scalar::Complex(z) => z.is_zero(),
        }
    }

    /// Exact value as a Laurent polynomial; `None` for complex scalars.
    pub fn to_poly(&self) -> Option<LaurentPoly> {
        match self {
            Scalar::Rational(r) => Some(LaurentPoly::constant(r.clone())),
            Scalar::Symbol(v) => Some(LaurentPoly::var(v.name())),
            Scalar::Complex(_) => None,
        }
    }

    /// Numeric value; `None` for symbols.
    pub fn to_complex(&self, prec: u32) -> Option<BigComplex> {
        match self {
            Scalar::Rational(r) => Some(BigComplex::from_rational(r, prec)),
            Scalar::Symbol(_) => None,
            Scalar::Complex(z) => Some(z.with_precision(prec)),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", format_rational(r)),
            Scalar::Symbol(v) => write!(f, "{v}"),
            Scalar::Complex(z) => write!(f, "{z:?}"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Complex(z) => {
                let (re, im) = z.to_f64();
                write!(f, "{re}{im:+}i")
            }
            other => write!(f, "{other:?}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Rational(r) => s.serialize_str(&format_rational(r)),
            Scalar::Symbol(v) => s.serialize_str(v.name()),
            Scalar::Complex(z) => {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("re", &exact_decimal(&z.re))?;
                m.serialize_entry("im", &exact_decimal(&z.im))?;
                m.serialize_entry("prec", &z.prec)?;
                m.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexWire {
    re: String,
    im: String,
    #[serde(default)]
    prec: Option<u32>,
}

impl ComplexWire {
    fn build<E: de::Error>(self) -> std::result::Result<BigComplex, E> {
        let prec = self.prec.unwrap_or(DEFAULT_PRECISION).max(64);
        let work = prec + 64 + 4 * (self.re.len() + self.im.len()) as u32;
        let re = BigFloat::parse_decimal(&self.re, work)
            .ok_or_else(|| E::custom(format!("re: `{}` is not a decimal", self.re)))?;
        let im = BigFloat::parse_decimal(&self.im, work)
            .ok_or_else(|| E::custom(format!("im: `{}` is not a decimal", self.im)))?;
        Ok(BigComplex::new(re, im, prec))
    }
}

/// Raw JSON forms shared by scalars and Satake values.
pub(crate) enum ScalarWire {
    Text(String),
    Int(i64),
    Complex(BigComplex),
}

struct WireVisitor;

impl<'de> de::Visitor<'de> for WireVisitor {
    type Value = ScalarWire;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer, a string such as \"a\" or \"7/2\", or {\"re\": ..., \"im\": ...}")
    }

    fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<ScalarWire, E> {
        Ok(ScalarWire::Text(s.to_string()))
    }

    fn visit_i64<E: de::Error>(self, n: i64) -> std::result::Result<ScalarWire, E> {
        Ok(ScalarWire::Int(n))
    }

    fn visit_u64<E: de::Error>(self, n: u64) -> std::result::Result<ScalarWire, E> {
        i64::try_from(n)
            .map(ScalarWire::Int)
            .map_err(|_| E::custom(format!("{n} is out of range; pass it as a string")))
    }

    fn visit_f64<E: de::Error>(self, x: f64) -> std::result::Result<ScalarWire, E> {
        Err(E::custom(format!(
            "{x} is a floating-point number; write exact values as strings such as \"7/2\" and complex values as {{\"re\": ..., \"im\": ...}}"
        )))
    }

    fn visit_map<A: de::MapAccess<'de>>(self, map: A) -> std::result::Result<ScalarWire, A::Error> {
        let w = ComplexWire::deserialize(de::value::MapAccessDeserializer::new(map))?;
        Ok(ScalarWire::Complex(w.build()?))
    }
}

pub(crate) fn deserialize_wire<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<ScalarWire, D::Error> {
    d.deserialize_any(WireVisitor)
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match deserialize_wire(d)? {
            ScalarWire::Text(s) => Scalar::parse_str(&s).map_err(de::Error::custom),
            ScalarWire::Int(n) => Ok(Scalar::Rational(Rat::from_integer(BigInt::from(n)))),
            ScalarWire::Complex(z) => Ok(Scalar::Complex(z)),
        }
    }
}
