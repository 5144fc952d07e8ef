//! Places of the rational function field `F_q(T)`, their splitting in the
//! constant-field quadratic extension, and truncated Euler products.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{specialize_in, BigComplex, Var, DEFAULT_PRECISION};
use crate::lgroup::{stretch_t, twisted_det, Algebra};
use crate::localfactors::{check_temperedness, UnramifiedRep};

/// `(p, k)` with `n = p^k`, for `n >= 2`.
pub fn prime_power_parts(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        p = n;
    }
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

pub fn is_prime_power(n: u64) -> bool {
    prime_power_parts(n).is_some()
}

fn mobius(n: u32) -> i64 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Monic irreducible polynomials of degree `d` over `F_q`.
pub fn necklace_count(q: u64, d: u32) -> BigInt {
    let q = BigInt::from(q);
    let total: BigInt = (1..=d)
        .filter(|e| d.is_multiple_of(*e))
        .map(|e| mobius(e) * num_traits::pow(q.clone(), (d / e) as usize))
        .sum();
    total / d
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceTable {
    pub q: u64,
    pub max_degree: u32,
    /// `counts[d - 1]` places of degree `d`, the place at infinity included
    /// in degree 1.
    #[serde(serialize_with = "as_strings")]
    pub counts: Vec<BigInt>,
    /// Behaviour in the constant-field quadratic extension by degree.
    pub splitting: Vec<Algebra>,
    /// `sum_d d * count_d` against `q^D`.
    #[serde(serialize_with = "as_strings")]
    pub degree_mass: Vec<BigInt>,
}

fn as_strings<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn build_place_table(q: u64, max_degree: u32) -> Result<PlaceTable> {
    if !is_prime_power(q) {
        return Err(Error::InvalidFieldSize(q));
    }
    if max_degree == 0 {
        return Err(Error::DimensionError("place tables need degree >= 1".into()));
    }
    let counts: Vec<BigInt> = (1..=max_degree)
        .map(|d| necklace_count(q, d) + if d == 1 { 1 } else { 0 })
        .collect();
    let splitting = (1..=max_degree)
        .map(|d| if d % 2 == 0 { Algebra::Split } else { Algebra::Inert })
        .collect();
    let degree_mass = counts
        .iter()
        .enumerate()
        .map(|(k, c)| c * (k + 1))
        .scan(BigInt::zero(), |acc, x| {
            *acc += x;
            Some(acc.clone())
        })
        .collect();
    Ok(PlaceTable {
        q,
        max_degree,
        counts,
        splitting,
        degree_mass,
    })
}

fn binomial(n: &BigInt, k: u32) -> BigInt {
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// Coefficients of `prod_{deg v <= depth} (1 - t^{deg v})^{-1}` through
/// `t^depth`.
pub fn partial_zeta(table: &PlaceTable, depth: u32) -> Result<Vec<BigInt>> {
    if depth > table.max_degree {
        return Err(Error::TableTooShallow {
            have: table.max_degree,
            want: depth,
        });
    }
    let len = depth as usize + 1;
    let mut series = vec![BigInt::zero(); len];
    series[0] = BigInt::one();
    for d in 1..=depth as usize {
        let c = &table.counts[d - 1];
        // (1 - t^d)^{-c} = sum_k binom(c + k - 1, k) t^{dk}
        let factor: Vec<(usize, BigInt)> = (0..=depth as usize / d)
            .map(|k| (d * k, binomial(&(c + k - 1), k as u32)))
            .collect();
        let mut next = vec![BigInt::zero(); len];
        for (i, a) in series.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (e, b) in &factor {
                if i + e < len {
                    next[i + e] += a * b;
                }
            }
        }
        series = next;
    }
    Ok(series)
}

/// Coefficients of `1 / ((1 - t)(1 - q t))`, that is `(q^{n+1} - 1)/(q - 1)`.
pub fn zeta_closed_form(q: u64, depth: u32) -> Vec<BigInt> {
    let q = BigInt::from(q);
    (0..=depth)
        .map(|n| (num_traits::pow(q.clone(), n as usize + 1) - 1) / (&q - 1))
        .collect()
}

/// Synthetic everywhere-unramified data: one representation per place,
/// keyed by `(degree, index)`.
#[derive(Clone, Debug, Default)]
pub struct ToyGlobalDatum {
    pub q: u64,
    pub max_degree: u32,
    pub places: BTreeMap<(u32, u64), UnramifiedRep>,
}

impl ToyGlobalDatum {
    pub fn new(q: u64, max_degree: u32) -> Self {
        ToyGlobalDatum {
            q,
            max_degree,
            places: BTreeMap::new(),
        }
    }

    /// Assigns `rep_for(degree, splitting)` to every place of degree at most
    /// `max_degree`.
    pub fn fill(
        table: &PlaceTable,
        max_degree: u32,
        mut rep_for: impl FnMut(u32, u64, Algebra) -> UnramifiedRep,
    ) -> Result<Self> {
        let mut out = ToyGlobalDatum::new(table.q, max_degree);
        for d in 1..=max_degree.min(table.max_degree) {
            let count: u64 = (&table.counts[d as usize - 1])
                .try_into()
                .map_err(|_| Error::DimensionError("too many places".into()))?;
            for k in 0..count {
                let split = table.splitting[d as usize - 1];
                out.places.insert((d, k), rep_for(d, k, split));
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaceReport {
    pub degree: u32,
    pub index: u64,
    pub max_deviation: f64,
    pub tempered: bool,
}

#[derive(Clone, Debug)]
pub struct PartialLProduct {
    pub coefficients: Vec<BigComplex>,
    pub places: Vec<PlaceReport>,
    pub all_tempered: bool,
}

impl PartialLProduct {
    /// Places whose local poles leave the unit circle.
    pub fn flagged(&self) -> Vec<(u32, u64)> {
        self.places
            .iter()
            .filter(|p| !p.tempered)
            .map(|p| (p.degree, p.index))
            .collect()
    }
}

fn series_mul(a: &[BigComplex], b: &[BigComplex]) -> Vec<BigComplex> {
    let prec = DEFAULT_PRECISION;
    let mut out = vec![BigComplex::zero(prec); a.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(a.len() - i) {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// Inverse of a power series with unit constant term, truncated.
fn series_inverse(p: &[BigComplex]) -> Vec<BigComplex> {
    let prec = DEFAULT_PRECISION;
    let inv0 = p[0].recip();
    let mut out = vec![BigComplex::zero(prec); p.len()];
    out[0] = inv0.clone();
    for n in 1..p.len() {
        let mut acc = BigComplex::zero(prec);
        for k in 1..=n {
            acc = acc.add(&p[k].mul(&out[n - k]));
        }
        out[n] = acc.mul(&inv0).neg();
    }
    out
}

/// Truncated product over places of degree at most `depth` of the local
/// L-factors at `level`, each in the variable `t^{deg v}`.
pub fn partial_l_product(
    datum: &ToyGlobalDatum,
    table: &PlaceTable,
    level: u32,
    depth: u32,
    tol: f64,
) -> Result<PartialLProduct> {
    if depth > table.max_degree {
        return Err(Error::TableTooShallow {
            have: table.max_degree,
            want: depth,
        });
    }
    let prec = DEFAULT_PRECISION;
    let len = depth as usize + 1;
    let mut series = vec![BigComplex::zero(prec); len];
    series[0] = BigComplex::one(prec);
    let mut places = Vec::new();
    for d in 1..=depth {
        let count: u64 = (&table.counts[d as usize - 1])
            .try_into()
            .map_err(|_| Error::DimensionError("too many places".into()))?;
        for k in 0..count {
            let rep = datum.places.get(&(d, k)).ok_or_else(|| {
                Error::IncompleteDatum(format!("no data at place {k} of degree {d}"))
            })?;
            let (_, point) = rep.params()?;
            let blocks = rep.blocks()?;
            let block = blocks.get(level as usize - 1).ok_or(Error::InvalidLevel {
                level,
                min: 1,
                max: blocks.len() as u32,
            })?;
            let det = stretch_t(&twisted_det(block), d);
            let coeffs = specialize_in(&det, &Var::t(), &point, prec)?;
            let mut local = vec![BigComplex::zero(prec); len];
            for (e, c) in coeffs {
                if (e as usize) < len {
                    local[e as usize] = c;
                }
            }
            series = series_mul(&series, &series_inverse(&local));
            let report = check_temperedness(rep, level, tol)?;
            places.push(PlaceReport {
                degree: d,
                index: k,
                max_deviation: report.max_deviation,
                tempered: report.tempered,
            });
        }
    }
    Ok(PartialLProduct {
        coefficients: series,
        all_tempered: places.iter().all(|p| p.tempered),
        places,
    })
}
