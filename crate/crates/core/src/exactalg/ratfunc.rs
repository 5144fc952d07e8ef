use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{LaurentPoly, Rat};
use super::var::Var;
use crate::error::{Error, Result};

/// Quotient of Laurent polynomials in canonical form.
///
/// The denominator is a polynomial divisible by no variable, its graded-lex
/// leading coefficient is 1, and it shares no nonunit factor with the
/// numerator. Every monomial unit lives in the numerator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

/// Reduces `num / den` to canonical form.
pub fn rf_reduce(num: &LaurentPoly, den: &LaurentPoly) -> Result<RationalFunction> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if num.is_zero() {
        return Ok(RationalFunction::zero());
    }
    let g = gcd(num, den);
    let (n, d) = if g.is_one() {
        (num.clone(), den.clone())
    } else {
        (
            num.exact_div(&g).expect("gcd divides numerator"),
            den.exact_div(&g).expect("gcd divides denominator"),
        )
    };
    Ok(RationalFunction::from_coprime(n, d))
}

/// Canonical form of `f` after substituting Laurent polynomials for
/// variables.
pub fn rf_substitute(
    f: &RationalFunction,
    map: &BTreeMap<Var, LaurentPoly>,
) -> Result<RationalFunction> {
    let num = substitute_poly(&f.num, map)?;
    let den = substitute_poly(&f.den, map)?;
    num.div(&den)
}

fn substitute_poly(p: &LaurentPoly, map: &BTreeMap<Var, LaurentPoly>) -> Result<RationalFunction> {
    let relevant: BTreeMap<Var, LaurentPoly> = map
        .iter()
        .filter(|(v, _)| p.contains_var(v))
        .map(|(v, e)| (v.clone(), e.clone()))
        .collect();
    if relevant.is_empty() {
        return Ok(RationalFunction::from_poly(p.clone()));
    }
    if let Some(r) = p.substitute_monomials(&relevant) {
        return Ok(RationalFunction::from_poly(r));
    }
    let mut acc = RationalFunction::zero();
    for (m, c) in p.terms() {
        let mut term = RationalFunction::from_poly(LaurentPoly::constant(c.clone()));
        for (v, &e) in p.vars().iter().zip(m) {
            if e == 0 {
                continue;
            }
            let base = match relevant.get(v) {
                Some(img) => {
                    if img.is_zero() && e < 0 {
                        return Err(Error::DivisionByZero);
                    }
                    RationalFunction::from_poly(img.clone())
                }
                None => RationalFunction::from_poly(LaurentPoly::var(v.name())),
            };
            term = term.mul(&base.powi(e)?);
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction {
            num: LaurentPoly::one(),
            den: LaurentPoly::one(),
        }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunction {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    /// Normalizes a pair already known to be coprime: moves the monomial
    /// content of the denominator upstairs and makes it monic.
    pub(crate) fn from_coprime(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (mono, d) = den.split_monomial_content();
        let lc = d.leading_coefficient().expect("nonzero denominator").clone();
        let inv = lc.recip();
        let (mc, mm) = mono.as_monomial().expect("monomial");
        let neg: Vec<i32> = mm.iter().map(|e| -e).collect();
        let mono_inv =
            LaurentPoly::from_terms(mono.vars().to_vec(), vec![(neg, mc.recip())]);
        let num = num.mul(&mono_inv).scale(&inv);
        let den = if inv.is_one() { d } else { d.scale(&inv) };
        RationalFunction { num, den }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The Laurent polynomial when the denominator is 1.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    /// `c * x^m` when the function is a single monomial.
    pub fn is_monomial(&self) -> bool {
        self.den.is_one() && self.num.as_monomial().is_some()
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let cut = |p: &LaurentPoly, g: &LaurentPoly| {
            if g.is_one() {
                p.clone()
            } else {
                p.exact_div(g).expect("gcd divides")
            }
        };
        let num = cut(&self.num, &g1).mul(&cut(&other.num, &g2));
        let den = cut(&self.den, &g2).mul(&cut(&other.den, &g1));
        Self::from_coprime(num, den)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.den == other.den {
            return rf_reduce(&self.num.add(&other.num), &self.den);
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        rf_reduce(&num, &self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn powi(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let n = e.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(n),
            den: base.den.pow(n),
        })
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn substitute(&self, map: &BTreeMap<Var, LaurentPoly>) -> Result<Self> {
        rf_substitute(self, map)
    }

    /// Every variable occurring in numerator or denominator, sorted.
    pub fn vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self
            .num
            .vars()
            .iter()
            .chain(self.den.vars())
            .cloned()
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn product<'a>(items: impl IntoIterator<Item = &'a RationalFunction>) -> Self {
        items.into_iter().fold(Self::one(), |acc, f| acc.mul(f))
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &LaurentPoly| {
            if p.len() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl From<LaurentPoly> for RationalFunction {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::{parse_poly, parse_rf};

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    fn r(s: &str) -> RationalFunction {
        parse_rf(s).unwrap()
    }

    #[test]
    fn reduce_cancels_common_factor() {
        let f = rf_reduce(&p("1 - t^2"), &p("1 - t")).unwrap();
        assert_eq!(f, RationalFunction::from_poly(p("1 + t")));
    }

    #[test]
    fn reduce_cancels_monomial() {
        let f = rf_reduce(&p("a1*t - a1*t^2"), &p("t")).unwrap();
        assert_eq!(f.as_poly().unwrap(), &p("a1 - a1*t"));
    }

    #[test]
    fn reduce_three_factor_example() {
        let c = p("1 - a1*a2*t^2");
        let den = p("(1 - a1*t)*(1 - a2*t)").mul(&c);
        let f = rf_reduce(&c, &den).unwrap();
        let expect = rf_reduce(&LaurentPoly::one(), &p("(1 - a1*t)*(1 - a2*t)")).unwrap();
        assert_eq!(f, expect);
        assert!(f.numerator().is_one());
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(
            rf_reduce(&p("1"), &LaurentPoly::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn substitution_examples() {
        let f = r("1/(1 - a*t)");
        let mut m = BTreeMap::new();
        m.insert(Var::t(), p("t^2"));
        assert_eq!(f.substitute(&m).unwrap(), r("1/(1 - a*t^2)"));

        let mut m = BTreeMap::new();
        m.insert(Var::t(), p("q^-1*t^-1"));
        let g = f.substitute(&m).unwrap();
        assert_eq!(g, r("t/(t - a*q^-1)"));
        assert_eq!(g.denominator(), &p("q*t - a"));

        let h = r("(1 - a*t)/(1 - b*t)");
        let mut m = BTreeMap::new();
        m.insert(Var::new("a"), p("b"));
        assert!(h.substitute(&m).unwrap().is_one());
    }

    #[test]
    fn non_monomial_substitution() {
        let f = r("1/(1 - a*t)");
        let mut m = BTreeMap::new();
        m.insert(Var::new("a"), p("1 + b"));
        assert_eq!(f.substitute(&m).unwrap(), r("1/(1 - t - b*t)"));
        let g = r("a^-1 + t");
        assert_eq!(g.substitute(&m).unwrap(), r("(1 + t + b*t)/(1 + b)"));
    }

    #[test]
    fn canonical_denominator_is_monic_polynomial() {
        let f = r("3/(2*t^-1 - 4)");
        assert!(f.denominator().is_polynomial());
        assert!(f.denominator().leading_coefficient().unwrap().is_one());
        assert_eq!(f, r("(-3/4*t)/(t - 1/2)"));
    }
}
