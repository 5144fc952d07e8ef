//! Numeric evaluation and certified root isolation.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;

use super::bigfloat::{BigComplex, BigFloat};
use super::poly::{LaurentPoly, Rat};
use super::ratfunc::RationalFunction;
use super::var::Var;
use crate::error::{Error, Result};

/// Numeric values for symbols.
#[derive(Clone, Debug, Default)]
pub struct Specialization {
    values: BTreeMap<Var, BigComplex>,
}

impl Specialization {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: &str, value: BigComplex) -> &mut Self {
        self.values.insert(Var::new(name), value);
        self
    }

    pub fn with(mut self, name: &str, value: BigComplex) -> Self {
        self.set(name, value);
        self
    }

    pub fn get(&self, v: &Var) -> Option<&BigComplex> {
        self.values.get(v)
    }
}

/// A root approximation and a radius of a disk guaranteed to contain a
/// true root.
#[derive(Clone, Debug)]
pub struct CertifiedRoot {
    pub value: BigComplex,
    pub radius: f64,
}

impl CertifiedRoot {
    pub fn modulus(&self) -> f64 {
        let (re, im) = self.value.to_f64();
        re.hypot(im)
    }
}

fn var_value<'a>(spec: &'a Specialization, v: &Var) -> Result<&'a BigComplex> {
    spec.get(v)
        .ok_or_else(|| Error::UnresolvedSymbol(v.name().to_string()))
}

fn eval_monomial_terms<'a>(
    vars: &[Var],
    terms: impl Iterator<Item = (&'a [i32], &'a Rat)>,
    skip: Option<usize>,
    spec: &Specialization,
    prec: u32,
) -> Result<BTreeMap<i32, BigComplex>> {
    let vals: Vec<Option<&BigComplex>> = vars
        .iter()
        .enumerate()
        .map(|(k, v)| {
            if Some(k) == skip {
                Ok(None)
            } else {
                var_value(spec, v).map(Some)
            }
        })
        .collect::<Result<_>>()?;
    let mut out: BTreeMap<i32, BigComplex> = BTreeMap::new();
    for (m, c) in terms {
        let mut acc = BigComplex::from_rational(c, prec);
        for (k, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if let Some(x) = vals[k] {
                acc = acc.mul(&x.with_precision(prec).powi(e));
            }
        }
        let slot = skip.map(|k| m[k]).unwrap_or(0);
        out.entry(slot)
            .and_modify(|z| *z = z.add(&acc))
            .or_insert(acc);
    }
    Ok(out)
}

/// Value of `p` at a point assigning every variable.
pub fn eval_poly(p: &LaurentPoly, spec: &Specialization, prec: u32) -> Result<BigComplex> {
    let parts = eval_monomial_terms(p.vars(), p.terms(), None, spec, prec)?;
    Ok(parts
        .into_values()
        .next()
        .unwrap_or_else(|| BigComplex::zero(prec)))
}

/// Value of `f` at a point; a vanishing denominator is a division by zero.
pub fn eval_rf(f: &RationalFunction, spec: &Specialization, prec: u32) -> Result<BigComplex> {
    let n = eval_poly(f.numerator(), spec, prec)?;
    let d = eval_poly(f.denominator(), spec, prec)?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(n.div(&d))
}

/// Coefficients of `p` in `x` after specializing every other variable.
pub fn specialize_in(
    p: &LaurentPoly,
    x: &Var,
    spec: &Specialization,
    prec: u32,
) -> Result<BTreeMap<i32, BigComplex>> {
    eval_monomial_terms(p.vars(), p.terms(), p.var_index(x), spec, prec)
}

fn to_c64(z: &BigComplex) -> Complex64 {
    let (re, im) = z.to_f64();
    Complex64::new(re, im)
}

fn horner_c64(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn horner_big(c: &[BigComplex], z: &BigComplex) -> (BigComplex, BigComplex) {
    let prec = z.prec;
    let mut p = BigComplex::zero(prec);
    let mut dp = BigComplex::zero(prec);
    for a in c.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(a);
    }
    (p, dp)
}

/// Aberth iteration in double precision from points on a circle.
fn aberth_f64(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n].norm();
    let mut radius: f64 = 0.0;
    for (k, a) in c.iter().enumerate().take(n) {
        radius = radius.max((a.norm() / lead).powf(1.0 / (n - k) as f64));
    }
    if !(radius.is_finite() && radius > 0.0) {
        radius = 1.0;
    }
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius, ang)
        })
        .collect();
    for _ in 0..400 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner_c64(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn polish(c: &[BigComplex], start: Vec<Complex64>, prec: u32) -> Vec<BigComplex> {
    let n = start.len();
    let mut z: Vec<BigComplex> = start
        .into_iter()
        .map(|w| BigComplex::from_f64(w.re, w.im, prec))
        .collect();
    let stop = -(prec as i64) + 8;
    for _ in 0..80 {
        let mut done = true;
        for i in 0..n {
            let (p, dp) = horner_big(c, &z[i]);
            if p.is_zero() || dp.is_zero() {
                continue;
            }
            let ratio = p.div(&dp);
            let mut s = BigComplex::zero(prec);
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(&z[j]);
                    if !d.is_zero() {
                        s = s.add(&d.recip());
                    }
                }
            }
            let denom = BigComplex::one(prec).sub(&ratio.mul(&s));
            if denom.is_zero() {
                continue;
            }
            let step = ratio.div(&denom);
            let rel = match (step.abs().magnitude(), z[i].abs().magnitude()) {
                (None, _) => i64::MIN,
                (Some(a), Some(b)) => a - b,
                (Some(a), None) => a,
            };
            if rel > stop {
                done = false;
            }
            z[i] = z[i].sub(&step);
        }
        if done {
            break;
        }
    }
    z
}

fn abs_f64(z: &BigComplex) -> f64 {
    let (re, im) = z.to_f64();
    re.hypot(im)
}

/// Weierstrass inclusion radii, merged over overlapping clusters.
fn certify(c: &[BigComplex], z: &[BigComplex], prec: u32) -> Vec<f64> {
    let n = z.len();
    let unit = 2f64.powi(-(prec as i32) + 2);
    let lead = abs_f64(&c[n]);
    let mut r = vec![0.0f64; n];
    for i in 0..n {
        let (p, _) = horner_big(c, &z[i]);
        let zi = abs_f64(&z[i]);
        let scale: f64 = c
            .iter()
            .enumerate()
            .map(|(k, a)| abs_f64(a) * zi.powi(k as i32))
            .sum();
        let err = abs_f64(&p) + (4 * n + 16) as f64 * unit * scale;
        let mut prod = lead;
        for j in 0..n {
            if j != i {
                prod *= abs_f64(&z[i].sub(&z[j]));
            }
        }
        r[i] = if prod > 0.0 {
            n as f64 * err / prod * (1.0 + 1e-6)
        } else {
            f64::INFINITY
        };
    }
    let centers: Vec<Complex64> = z.iter().map(to_c64).collect();
    let mut comp: Vec<usize> = (0..n).collect();
    fn root(comp: &mut [usize], i: usize) -> usize {
        let mut k = i;
        while comp[k] != k {
            comp[k] = comp[comp[k]];
            k = comp[k];
        }
        k
    }
    for i in 0..n {
        for j in i + 1..n {
            if (centers[i] - centers[j]).norm() <= r[i] + r[j] {
                let (a, b) = (root(&mut comp, i), root(&mut comp, j));
                comp[a] = b;
            }
        }
    }
    (0..n)
        .map(|i| {
            let ci = root(&mut comp, i);
            (0..n)
                .filter(|&j| root(&mut comp, j) == ci)
                .map(|j| (centers[i] - centers[j]).norm() + r[j])
                .fold(r[i], f64::max)
        })
        .collect()
}

/// All roots in `t` of `p` after specializing every other variable,
/// counted with multiplicity. The count equals the span between the lowest
/// and highest power of `t`.
pub fn poly_roots_numeric(
    p: &LaurentPoly,
    spec: &Specialization,
    prec: u32,
) -> Result<Vec<CertifiedRoot>> {
    let t = Var::t();
    let prec = prec.max(super::bigfloat::MIN_PRECISION);
    let work = prec + 32;
    let coeffs = specialize_in(p, &t, spec, work)?;
    let (Some(&lo), Some(&hi)) = (coeffs.keys().next(), coeffs.keys().next_back()) else {
        return Err(Error::DegenerateLeadingCoefficient);
    };
    let n = (hi - lo) as usize;
    let mut c: Vec<BigComplex> = vec![BigComplex::zero(work); n + 1];
    for (k, v) in coeffs {
        c[(k - lo) as usize] = v;
    }
    let size = c.iter().map(abs_f64).fold(0.0, f64::max);
    let tiny = size * 2f64.powi(-(prec as i32) / 2);
    if abs_f64(&c[n]) <= tiny || abs_f64(&c[0]) <= tiny {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let approx = aberth_f64(&c.iter().map(to_c64).collect::<Vec<_>>());
    let z = polish(&c, approx, work);
    let radii = certify(&c, &z, work);
    Ok(z
        .into_iter()
        .zip(radii)
        .map(|(value, radius)| CertifiedRoot {
            value: value.with_precision(prec),
            radius: radius + 2f64.powi(-(prec as i32)) * abs_f64(&value),
        })
        .collect())
}

/// Rational `x` as a complex number at the given precision.
pub fn rational_point(x: &Rat, prec: u32) -> BigComplex {
    BigComplex::new(BigFloat::from_rational(x, prec), BigFloat::zero(), prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::parse_poly;

    fn close_to(r: &CertifiedRoot, re: f64, im: f64) -> bool {
        let z = to_c64(&r.value);
        (z - Complex64::new(re, im)).norm() < 1e-12
    }

    #[test]
    fn linear_and_quadratic() {
        let roots = poly_roots_numeric(&parse_poly("1 - t").unwrap(), &Specialization::new(), 128)
            .unwrap();
        assert_eq!(roots.len(), 1);
        assert!(close_to(&roots[0], 1.0, 0.0));
        assert!(roots[0].radius < 1e-30);

        let roots =
            poly_roots_numeric(&parse_poly("1 - t^2").unwrap(), &Specialization::new(), 128)
                .unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().any(|r| close_to(r, 1.0, 0.0)));
        assert!(roots.iter().any(|r| close_to(r, -1.0, 0.0)));
    }

    #[test]
    fn laurent_span_counts_roots() {
        let p = parse_poly("t^-1 - 2 + t").unwrap();
        let roots = poly_roots_numeric(&p, &Specialization::new(), 128).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(close_to(r, 1.0, 0.0) || r.radius > 0.0);
            assert!((r.modulus() - 1.0).abs() <= r.radius + 1e-15);
        }
    }

    #[test]
    fn free_symbol_is_reported() {
        let p = parse_poly("1 - a*t").unwrap();
        assert_eq!(
            poly_roots_numeric(&p, &Specialization::new(), 128).unwrap_err(),
            Error::UnresolvedSymbol("a".into())
        );
    }

    #[test]
    fn specialized_top_coefficient_vanishing_is_degenerate() {
        let p = parse_poly("1 - (a - 1)*t").unwrap();
        let spec = Specialization::new().with("a", BigComplex::one(128));
        assert_eq!(
            poly_roots_numeric(&p, &spec, 128).unwrap_err(),
            Error::DegenerateLeadingCoefficient
        );
    }
}
