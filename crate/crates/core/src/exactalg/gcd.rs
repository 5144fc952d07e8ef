//! Multivariate gcd over the rationals.
//!
//! The driver tries cheap certificates first (divisibility, then a modular
//! coprimality proof per variable) and falls back to a recursive
//! primitive remainder sequence, one variable at a time.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::{LaurentPoly, Rat};
use super::var::Var;

const P: u64 = (1 << 61) - 1;

#[inline]
fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

#[inline]
fn addm(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
fn subm(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn powm(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b);
        }
        b = mulm(b, b);
        e >>= 1;
    }
    r
}

fn invm(a: u64) -> u64 {
    powm(a, P - 2)
}

fn bigint_mod(n: &BigInt) -> u64 {
    let p = BigInt::from(P);
    let r = n.mod_floor(&p);
    r.to_u64().unwrap()
}

fn rat_mod(c: &Rat) -> Option<u64> {
    let d = bigint_mod(c.denom());
    if d == 0 {
        return None;
    }
    Some(mulm(bigint_mod(c.numer()), invm(d)))
}

/// Image of `a` in F_p[x] after evaluating every other variable; the
/// exponents of `x` are shifted to start at zero.
fn univariate_image(a: &LaurentPoly, x: &Var, point: &BTreeMap<Var, u64>) -> Option<Vec<u64>> {
    let xi = a.var_index(x);
    let (lo, hi) = a.degree_range(x);
    let mut out = vec![0u64; (hi - lo + 1) as usize];
    let vals: Vec<Option<(u64, u64)>> = a
        .vars()
        .iter()
        .map(|v| point.get(v).map(|&p| (p, invm(p))))
        .collect();
    for (m, c) in a.terms() {
        let mut acc = rat_mod(c)?;
        for (k, &e) in m.iter().enumerate() {
            if Some(k) == xi || e == 0 {
                continue;
            }
            let (val, inv) = vals[k].unwrap();
            acc = if e > 0 {
                mulm(acc, powm(val, e as u64))
            } else {
                mulm(acc, powm(inv, (-e) as u64))
            };
        }
        let ex = xi.map(|k| m[k]).unwrap_or(0);
        let slot = (ex - lo) as usize;
        out[slot] = addm(out[slot], acc);
    }
    Some(out)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn gcd_modp(mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = invm(*b.last().unwrap());
        while a.len() >= b.len() {
            let c = mulm(*a.last().unwrap(), inv);
            let shift = a.len() - b.len();
            for (i, &bv) in b.iter().enumerate() {
                a[shift + i] = subm(a[shift + i], mulm(c, bv));
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Proves `gcd(a, b)` is constant, with both inputs free of monomial
/// content. `false` means "not proven", never "not coprime".
fn coprime_certificate(a: &LaurentPoly, b: &LaurentPoly, common: &[Var]) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ca11);
    let all: BTreeSet<Var> = a.vars().iter().chain(b.vars()).cloned().collect();
    'vars: for x in common {
        let (_, da) = a.degree_range(x);
        let (_, db) = b.degree_range(x);
        for _attempt in 0..4 {
            let point: BTreeMap<Var, u64> = all
                .iter()
                .filter(|v| *v != x)
                .map(|v| (v.clone(), rng.gen_range(2..P - 1)))
                .collect();
            let (Some(ua), Some(ub)) = (
                univariate_image(a, x, &point),
                univariate_image(b, x, &point),
            ) else {
                return false;
            };
            if ua.len() != (da + 1) as usize
                || ub.len() != (db + 1) as usize
                || ua[da as usize] == 0
                || ub[db as usize] == 0
            {
                continue;
            }
            if gcd_modp(ua, ub).len() == 1 {
                continue 'vars;
            }
            return false;
        }
        return false;
    }
    true
}

/// Normalized gcd: integer primitive, positive graded-lex leading
/// coefficient, and divisible by no variable. `gcd(0, 0) = 0`.
pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return b.split_monomial_content().1.primitive();
    }
    if b.is_zero() {
        return a.split_monomial_content().1.primitive();
    }
    let (_, pa) = a.split_monomial_content();
    let (_, pb) = b.split_monomial_content();
    gcd_poly(&pa, &pb).primitive()
}

fn common_vars(a: &LaurentPoly, b: &LaurentPoly) -> Vec<Var> {
    a.vars()
        .iter()
        .filter(|v| b.contains_var(v))
        .cloned()
        .collect()
}

/// Gcd of polynomials without monomial content, up to a rational unit.
fn gcd_poly(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return LaurentPoly::one();
    }
    let common = common_vars(a, b);
    if common.is_empty() {
        return LaurentPoly::one();
    }
    if a.len() <= b.len() {
        if b.exact_div(a).is_some() {
            return a.clone();
        }
    } else if a.exact_div(b).is_some() {
        return b.clone();
    }
    if coprime_certificate(a, b, &common) {
        return LaurentPoly::one();
    }
    let x = &common[0];
    let ca = content_in(a, x);
    let cb = content_in(b, x);
    let c = gcd_poly(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let g = prs(&pa, &pb, x);
    c.mul(&g)
}

/// Gcd of the coefficients of `a` viewed as a polynomial in `x`.
fn content_in(a: &LaurentPoly, x: &Var) -> LaurentPoly {
    let coeffs = a.coefficients_in(x);
    let mut it = coeffs.values();
    let mut g = it.next().cloned().unwrap_or_else(LaurentPoly::zero);
    for c in it {
        if g.is_constant() {
            return LaurentPoly::one();
        }
        g = gcd_poly(&g.split_monomial_content().1, &c.split_monomial_content().1);
    }
    if g.is_constant() {
        LaurentPoly::one()
    } else {
        g.split_monomial_content().1.primitive()
    }
}

fn primitive_in(a: &LaurentPoly, x: &Var) -> LaurentPoly {
    let c = content_in(a, x);
    a.exact_div(&c)
        .expect("content divides")
        .split_monomial_content()
        .1
        .primitive()
}

/// Primitive remainder sequence in `x` for primitive inputs.
fn prs(a: &LaurentPoly, b: &LaurentPoly, x: &Var) -> LaurentPoly {
    let (mut f, mut g) = (a.clone(), b.clone());
    if f.degree_range(x).1 < g.degree_range(x).1 {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        if g.is_zero() {
            return primitive_in(&f, x);
        }
        if g.degree_range(x).1 == 0 {
            return LaurentPoly::one();
        }
        let r = pseudo_remainder(&f, &g, x);
        f = g;
        g = if r.is_zero() { r } else { primitive_in(&r, x) };
    }
}

/// `lc(g)^(deg f - deg g + 1) * f mod g` in `x`.
fn pseudo_remainder(f: &LaurentPoly, g: &LaurentPoly, x: &Var) -> LaurentPoly {
    let gc = g.coefficients_in(x);
    let dg = *gc.keys().next_back().unwrap();
    let lg = gc[&dg].clone();
    let mut r = f.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let rc = r.coefficients_in(x);
        let dr = *rc.keys().next_back().unwrap();
        if dr < dg {
            return r;
        }
        let lr = &rc[&dr];
        let xs = LaurentPoly::monomial(Rat::one(), &[(x.clone(), dr - dg)]);
        r = r.mul(&lg).sub(&g.mul(lr).mul(&xs));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::parse_poly;

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn univariate_common_factor() {
        let g = gcd(&p("1 - t^2"), &p("1 - t"));
        assert_eq!(g, p("t - 1").primitive());
    }

    #[test]
    fn multivariate_common_factor_found_by_prs() {
        let c = p("1 - a*b*t^2");
        let x = p("1 - a*t").mul(&c);
        let y = p("1 - b*t").mul(&c).mul(&p("2 + a"));
        assert_eq!(gcd(&x, &y), c.primitive());
    }

    #[test]
    fn coprime_inputs_are_certified() {
        let x = p("(1 - a*t)*(1 - b*t)");
        let y = p("(q*t - a)*(q*t - b)");
        assert!(gcd(&x, &y).is_one());
    }

    #[test]
    fn monomial_content_is_ignored() {
        let g = gcd(&p("a*t - a*t^2"), &p("t^3 - t^4"));
        assert_eq!(g, p("t - 1").primitive());
    }

    #[test]
    fn modular_gcd_of_coprime_univariates() {
        assert_eq!(gcd_modp(vec![1, P - 1], vec![1, 1]).len(), 1);
        assert_eq!(gcd_modp(vec![P - 1, 0, 1], vec![P - 1, 1]).len(), 2);
    }
}
