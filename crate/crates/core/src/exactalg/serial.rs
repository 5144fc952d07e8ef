//! JSON wire format.
//!
//! A polynomial is `{"vars": [...], "terms": [[coeff, [exps]], ...]}` and a
//! rational function is `{"vars": [...], "num": [...], "den": [...]}` with
//! exponent vectors over the shared variable list. Coefficients are strings
//! `"p"` or `"p/q"`.

use std::collections::BTreeSet;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use super::poly::{LaurentPoly, Rat};
use super::ratfunc::{rf_reduce, RationalFunction};
use super::scalar::{format_rational, parse_rational};
use super::var::Var;
use crate::error::{Error, Result};

type WireTerm = (String, Vec<i32>);

fn encode_terms(p: &LaurentPoly, vars: &[Var]) -> Vec<WireTerm> {
    let pos: Vec<usize> = p
        .vars()
        .iter()
        .map(|v| vars.iter().position(|w| w == v).expect("shared variable list"))
        .collect();
    p.terms()
        .map(|(m, c)| {
            let mut e = vec![0; vars.len()];
            for (x, &k) in m.iter().zip(&pos) {
                e[k] = *x;
            }
            (format_rational(c), e)
        })
        .collect()
}

fn decode_terms(field: &str, vars: &[Var], terms: Vec<WireTerm>) -> Result<LaurentPoly> {
    let mut out = Vec::with_capacity(terms.len());
    for (k, (c, e)) in terms.into_iter().enumerate() {
        let c: Rat = parse_rational(&c).ok_or_else(|| {
            Error::parse(format!("{field}[{k}]"), format!("`{c}` is not a rational"))
        })?;
        if e.len() != vars.len() {
            return Err(Error::parse(
                format!("{field}[{k}]"),
                format!("expected {} exponents, found {}", vars.len(), e.len()),
            ));
        }
        out.push((e, c));
    }
    Ok(LaurentPoly::from_terms(vars.to_vec(), out))
}

fn decode_vars(names: Vec<String>) -> Result<Vec<Var>> {
    let mut seen = BTreeSet::new();
    names
        .into_iter()
        .map(|n| {
            if !Var::is_valid_name(&n) {
                return Err(Error::parse("vars", format!("`{n}` is not a valid symbol")));
            }
            if !seen.insert(n.clone()) {
                return Err(Error::parse("vars", format!("duplicate symbol `{n}`")));
            }
            Ok(Var::new(&n))
        })
        .collect()
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let names: Vec<&str> = self.vars().iter().map(|v| v.name()).collect();
        let mut st = s.serialize_struct("LaurentPoly", 2)?;
        st.serialize_field("vars", &names)?;
        st.serialize_field("terms", &encode_terms(self, self.vars()))?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyWire {
    vars: Vec<String>,
    terms: Vec<WireTerm>,
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = PolyWire::deserialize(d)?;
        let vars = decode_vars(w.vars).map_err(de::Error::custom)?;
        decode_terms("terms", &vars, w.terms).map_err(de::Error::custom)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let vars = self.vars();
        let names: Vec<&str> = vars.iter().map(|v| v.name()).collect();
        let mut st = s.serialize_struct("RationalFunction", 3)?;
        st.serialize_field("vars", &names)?;
        st.serialize_field("num", &encode_terms(self.numerator(), &vars))?;
        st.serialize_field("den", &encode_terms(self.denominator(), &vars))?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RfWire {
    vars: Vec<String>,
    num: Vec<WireTerm>,
    den: Vec<WireTerm>,
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = RfWire::deserialize(d)?;
        let decode = || -> Result<RationalFunction> {
            let vars = decode_vars(w.vars)?;
            let num = decode_terms("num", &vars, w.num)?;
            let den = decode_terms("den", &vars, w.den)?;
            if den.is_zero() {
                return Err(Error::parse("den", "denominator is zero"));
            }
            rf_reduce(&num, &den)
        };
        decode().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::parse_rf;

    #[test]
    fn rational_function_wire_shape() {
        let f = parse_rf("(1 - 1/2*a*t)/(1 - b*t^2)").unwrap();
        let v: serde_json::Value = serde_json::to_value(&f).unwrap();
        assert_eq!(v["vars"], serde_json::json!(["t", "a", "b"]));
        let back: RationalFunction = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn non_canonical_input_is_reduced() {
        let json = r#"{"vars":["t"],"num":[["1",[0]],["-1",[2]]],"den":[["2",[0]],["-2",[1]]]}"#;
        let f: RationalFunction = serde_json::from_str(json).unwrap();
        assert_eq!(f, parse_rf("(1 + t)/2").unwrap());
    }

    #[test]
    fn malformed_terms_name_the_field() {
        let json = r#"{"vars":["t"],"num":[["x",[0]]],"den":[["1",[0]]]}"#;
        let err = serde_json::from_str::<RationalFunction>(json).unwrap_err();
        assert!(err.to_string().contains("num[0]"), "{err}");
        let json = r#"{"vars":["t","t"],"terms":[]}"#;
        assert!(serde_json::from_str::<LaurentPoly>(json).is_err());
        let json = r#"{"vars":["t"],"num":[["1",[0]]],"den":[]}"#;
        assert!(serde_json::from_str::<RationalFunction>(json).is_err());
    }
}
