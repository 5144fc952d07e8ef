use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::var::Var;

pub type Rat = BigRational;
pub type Mono = SmallVec<[i32; 8]>;

/// Sparse multivariate Laurent polynomial with exact rational coefficients.
///
/// Canonical by construction: the variable list is sorted and contains only
/// variables that occur, terms are sorted by exponent vector and carry
/// nonzero coefficients. Structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    vars: Arc<[Var]>,
    terms: Vec<(Mono, Rat)>,
}

pub(crate) fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[inline]
pub(crate) fn rmul(a: &Rat, b: &Rat) -> Rat {
    if a.denom().is_one() && b.denom().is_one() {
        Rat::new_raw(a.numer() * b.numer(), BigInt::one())
    } else {
        a * b
    }
}

#[inline]
pub(crate) fn radd_assign(a: &mut Rat, b: Rat) {
    if a.denom().is_one() && b.denom().is_one() {
        let n = a.numer() + b.numer();
        *a = Rat::new_raw(n, BigInt::one());
    } else {
        *a += b;
    }
}

pub(crate) fn rpow(base: &Rat, e: i32) -> Rat {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

fn total_degree(m: &[i32]) -> i64 {
    m.iter().map(|&e| e as i64).sum()
}

/// Graded lexicographic comparison on exponent vectors over a shared
/// variable list.
pub fn grlex_cmp(a: &[i32], b: &[i32]) -> Ordering {
    total_degree(a)
        .cmp(&total_degree(b))
        .then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq, Eq)]
struct GrKey(i64, Mono);

impl Ord for GrKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0).then_with(|| self.1.cmp(&other.1))
    }
}

impl PartialOrd for GrKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn merge_vars(a: &[Var], b: &[Var]) -> Vec<Var> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn positions(own: &[Var], merged: &[Var]) -> Vec<usize> {
    let mut pos = Vec::with_capacity(own.len());
    let mut k = 0;
    for v in own {
        while merged[k] != *v {
            k += 1;
        }
        pos.push(k);
    }
    pos
}

fn embed(m: &[i32], pos: &[usize], width: usize) -> Mono {
    let mut out: Mono = SmallVec::from_elem(0, width);
    for (e, &p) in m.iter().zip(pos) {
        out[p] = *e;
    }
    out
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            vars: Arc::from(Vec::new()),
            terms: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            vars: Arc::from(Vec::new()),
            terms: vec![(SmallVec::new(), c)],
        }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat_int(n))
    }

    /// The polynomial `name`.
    pub fn var(name: &str) -> Self {
        Self::monomial(Rat::one(), &[(Var::new(name), 1)])
    }

    /// `c * prod(v^e)`; repeated variables have their exponents added.
    pub fn monomial(c: Rat, powers: &[(Var, i32)]) -> Self {
        let mut acc: BTreeMap<Var, i32> = BTreeMap::new();
        for (v, e) in powers {
            *acc.entry(v.clone()).or_insert(0) += e;
        }
        let vars: Vec<Var> = acc.keys().cloned().collect();
        let m: Mono = acc.values().copied().collect();
        Self::from_terms(vars, vec![(m.to_vec(), c)])
    }

    /// Builds a polynomial from terms over an arbitrary duplicate-free
    /// variable list; duplicate exponent vectors are summed.
    pub fn from_terms(vars: Vec<Var>, terms: Vec<(Vec<i32>, Rat)>) -> Self {
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by(|&a, &b| vars[a].cmp(&vars[b]));
        let sorted_vars: Vec<Var> = order.iter().map(|&i| vars[i].clone()).collect();
        let mut acc: FxHashMap<Mono, Rat> = FxHashMap::default();
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "exponent vector length mismatch");
            if c.is_zero() {
                continue;
            }
            let key: Mono = order.iter().map(|&i| m[i]).collect();
            match acc.get_mut(&key) {
                Some(x) => radd_assign(x, c),
                None => {
                    acc.insert(key, c);
                }
            }
        }
        Self::finish(sorted_vars, acc.into_iter().collect())
    }

    /// Sorts, drops zeros and unused variables.
    fn finish(vars: Vec<Var>, mut terms: Vec<(Mono, Rat)>) -> Self {
        terms.retain(|(_, c)| !c.is_zero());
        let width = vars.len();
        let used: Vec<bool> = (0..width)
            .map(|k| terms.iter().any(|(m, _)| m[k] != 0))
            .collect();
        if used.iter().all(|&u| u) {
            terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            return LaurentPoly {
                vars: Arc::from(vars),
                terms,
            };
        }
        let keep: Vec<usize> = (0..width).filter(|&k| used[k]).collect();
        let vars: Vec<Var> = keep.iter().map(|&k| vars[k].clone()).collect();
        let mut terms: Vec<(Mono, Rat)> = terms
            .into_iter()
            .map(|(m, c)| (keep.iter().map(|&k| m[k]).collect(), c))
            .collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        LaurentPoly {
            vars: Arc::from(vars),
            terms,
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &Rat)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<&Rat> {
        match self.terms.as_slice() {
            [] => None,
            [(m, c)] if m.is_empty() => Some(c),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || self.as_constant().is_some()
    }

    /// `(coefficient, exponents)` when the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(&Rat, &[i32])> {
        match self.terms.as_slice() {
            [(m, c)] => Some((c, m.as_slice())),
            _ => None,
        }
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.vars.binary_search(v).is_ok()
    }

    pub fn var_index(&self, v: &Var) -> Option<usize> {
        self.vars.binary_search(v).ok()
    }

    fn align<'a>(&'a self, other: &'a Self) -> (Vec<Var>, Vec<Mono>, Vec<Mono>) {
        let merged = merge_vars(&self.vars, &other.vars);
        let w = merged.len();
        let pa = positions(&self.vars, &merged);
        let pb = positions(&other.vars, &merged);
        let a = self.terms.iter().map(|(m, _)| embed(m, &pa, w)).collect();
        let b = other.terms.iter().map(|(m, _)| embed(m, &pb, w)).collect();
        (merged, a, b)
    }

    fn same_vars(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), rmul(c, k)))
                .collect(),
        }
    }

    fn add_signed(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { other.neg() } else { other.clone() };
        }
        let (vars, ma, mb) = if self.same_vars(other) {
            (
                self.vars.to_vec(),
                self.terms.iter().map(|t| t.0.clone()).collect::<Vec<_>>(),
                other.terms.iter().map(|t| t.0.clone()).collect::<Vec<_>>(),
            )
        } else {
            self.align(other)
        };
        let mut out = Vec::with_capacity(ma.len() + mb.len());
        let (mut i, mut j) = (0, 0);
        while i < ma.len() || j < mb.len() {
            let ord = if i == ma.len() {
                Ordering::Greater
            } else if j == mb.len() {
                Ordering::Less
            } else {
                ma[i].cmp(&mb[j])
            };
            match ord {
                Ordering::Less => {
                    out.push((ma[i].clone(), self.terms[i].1.clone()));
                    i += 1;
                }
                Ordering::Greater => {
                    let c = &other.terms[j].1;
                    out.push((mb[j].clone(), if negate { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &other.terms[j].1;
                    let mut s = self.terms[i].1.clone();
                    radd_assign(&mut s, if negate { -c } else { c.clone() });
                    if !s.is_zero() {
                        out.push((ma[i].clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Self::finish(vars, out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_signed(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_signed(other, true)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(c);
        }
        let (vars, ma, mb) = self.align(other);
        let mut acc: FxHashMap<Mono, Rat> = FxHashMap::default();
        acc.reserve((ma.len() * mb.len()).min(1 << 20));
        for (ea, (_, ca)) in ma.iter().zip(&self.terms) {
            for (eb, (_, cb)) in mb.iter().zip(&other.terms) {
                let key: Mono = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                let p = rmul(ca, cb);
                match acc.get_mut(&key) {
                    Some(x) => radd_assign(x, p),
                    None => {
                        acc.insert(key, p);
                    }
                }
            }
        }
        Self::finish(vars, acc.into_iter().collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn product<'a>(items: impl IntoIterator<Item = &'a LaurentPoly>) -> Self {
        items.into_iter().fold(Self::one(), |acc, p| acc.mul(p))
    }

    /// `(min, max)` exponent of `v` over the terms, `(0, 0)` when absent.
    pub fn degree_range(&self, v: &Var) -> (i32, i32) {
        match self.var_index(v) {
            None => (0, 0),
            Some(k) => {
                let lo = self.terms.iter().map(|(m, _)| m[k]).min().unwrap_or(0);
                let hi = self.terms.iter().map(|(m, _)| m[k]).max().unwrap_or(0);
                (lo, hi)
            }
        }
    }

    /// Component-wise minimum exponent vector.
    pub fn min_exponents(&self) -> Vec<i32> {
        let w = self.vars.len();
        let mut out = vec![i32::MAX; w];
        for (m, _) in &self.terms {
            for k in 0..w {
                out[k] = out[k].min(m[k]);
            }
        }
        if self.terms.is_empty() {
            out.iter_mut().for_each(|x| *x = 0);
        }
        out
    }

    /// Multiplies by the monomial with exponents `shift` over this
    /// polynomial's own variable list.
    pub fn shift(&self, shift: &[i32]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        Self::finish(self.vars.to_vec(), terms)
    }

    /// Splits off the largest monomial factor: returns `(m, p)` with
    /// `self = x^m * p` and `p` a polynomial divisible by no variable.
    pub fn split_monomial_content(&self) -> (LaurentPoly, LaurentPoly) {
        let lo = self.min_exponents();
        let neg: Vec<i32> = lo.iter().map(|x| -x).collect();
        let mono = LaurentPoly::from_terms(self.vars.to_vec(), vec![(lo, Rat::one())]);
        (mono, self.shift(&neg))
    }

    /// True when every exponent is nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.iter().all(|&e| e >= 0))
    }

    /// Leading term in graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&[i32], &Rat)> {
        self.terms
            .iter()
            .max_by(|a, b| grlex_cmp(&a.0, &b.0))
            .map(|(m, c)| (m.as_slice(), c))
    }

    pub fn leading_coefficient(&self) -> Option<&Rat> {
        self.leading_term().map(|(_, c)| c)
    }

    /// Least common multiple of the coefficient denominators and gcd of the
    /// numerators: `self = (g / l) * primitive`.
    pub fn rational_content(&self) -> Rat {
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        if g.is_zero() {
            return Rat::one();
        }
        Rat::new(g, l)
    }

    /// Integer-coefficient primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.rational_content();
        if self.leading_coefficient().unwrap().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Exact quotient `self / d` when `d` divides `self` in the Laurent ring.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((c, m)) = d.as_monomial() {
            let neg: Vec<i32> = m.iter().map(|x| -x).collect();
            let inv = LaurentPoly::from_terms(d.vars.to_vec(), vec![(neg, c.recip())]);
            return Some(self.mul(&inv));
        }
        let (ma, pa) = self.split_monomial_content();
        let (md, pd) = d.split_monomial_content();
        if !pd.vars.iter().all(|v| pa.contains_var(v)) {
            return None;
        }
        for v in pd.vars.iter() {
            if pd.degree_range(v).1 > pa.degree_range(v).1 {
                return None;
            }
        }
        let q = poly_div_exact(&pa, &pd)?;
        let mono = ma.exact_div(&md)?;
        Some(q.mul(&mono))
    }

    /// Groups terms by the exponent of `x`; coefficients lie in the
    /// remaining variables.
    pub fn coefficients_in(&self, x: &Var) -> BTreeMap<i32, LaurentPoly> {
        let mut out = BTreeMap::new();
        let Some(k) = self.var_index(x) else {
            if !self.is_zero() {
                out.insert(0, self.clone());
            }
            return out;
        };
        let rest: Vec<Var> = self
            .vars
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, v)| v.clone())
            .collect();
        let mut groups: BTreeMap<i32, Vec<(Mono, Rat)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut r = m.clone();
            let e = r.remove(k);
            groups.entry(e).or_default().push((r, c.clone()));
        }
        for (e, ts) in groups {
            out.insert(e, Self::finish(rest.clone(), ts));
        }
        out
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(x: &Var, coeffs: &BTreeMap<i32, LaurentPoly>) -> Self {
        let mut acc = Self::zero();
        for (e, c) in coeffs {
            let xe = LaurentPoly::monomial(Rat::one(), &[(x.clone(), *e)]);
            acc = acc.add(&c.mul(&xe));
        }
        acc
    }

    /// Substitutes monomials for variables. Every image must be a single
    /// nonzero term; returns `None` otherwise.
    pub fn substitute_monomials(&self, map: &BTreeMap<Var, LaurentPoly>) -> Option<Self> {
        if map.is_empty() || self.is_zero() {
            return Some(self.clone());
        }
        let mut all_vars: BTreeSet<Var> = BTreeSet::new();
        let mut images: Vec<Option<(Rat, Vec<(Var, i32)>)>> = Vec::new();
        for v in self.vars.iter() {
            match map.get(v) {
                Some(img) => {
                    let (c, m) = img.as_monomial()?;
                    let pw: Vec<(Var, i32)> = img
                        .vars
                        .iter()
                        .cloned()
                        .zip(m.iter().copied())
                        .collect();
                    for (w, _) in &pw {
                        all_vars.insert(w.clone());
                    }
                    images.push(Some((c.clone(), pw)));
                }
                None => {
                    all_vars.insert(v.clone());
                    images.push(None);
                }
            }
        }
        let out_vars: Vec<Var> = all_vars.into_iter().collect();
        let index = |v: &Var| out_vars.binary_search(v).unwrap();
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = vec![0i32; out_vars.len()];
            let mut coeff = c.clone();
            for (k, img) in images.iter().enumerate() {
                if m[k] == 0 {
                    continue;
                }
                match img {
                    None => e[index(&self.vars[k])] += m[k],
                    Some((ic, pw)) => {
                        if !ic.is_one() {
                            coeff *= rpow(ic, m[k]);
                        }
                        for (w, we) in pw {
                            e[index(w)] += we * m[k];
                        }
                    }
                }
            }
            out.push((e, coeff));
        }
        Some(Self::from_terms(out_vars, out))
    }

    /// Renames variables; the map must be injective on this polynomial's
    /// variables.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Self {
        let vars: Vec<Var> = self
            .vars
            .iter()
            .map(|v| map.get(v).cloned().unwrap_or_else(|| v.clone()))
            .collect();
        let terms = self.terms.iter().map(|(m, c)| (m.to_vec(), c.clone())).collect();
        Self::from_terms(vars, terms)
    }

    /// Coefficients by exponent when `x` is the only variable.
    pub fn univariate_coefficients(&self, x: &Var) -> Option<BTreeMap<i32, Rat>> {
        if self.vars.iter().any(|v| v != x) {
            return None;
        }
        Some(
            self.terms
                .iter()
                .map(|(m, c)| (m.first().copied().unwrap_or(0), c.clone()))
                .collect(),
        )
    }
}

/// Division of polynomials with nonnegative exponents; `None` when the
/// division leaves a remainder.
fn poly_div_exact(a: &LaurentPoly, d: &LaurentPoly) -> Option<LaurentPoly> {
    let vars = a.vars.to_vec();
    let w = vars.len();
    let pd = positions(&d.vars, &vars);
    let dterms: Vec<(Mono, Rat)> = d
        .terms
        .iter()
        .map(|(m, c)| (embed(m, &pd, w), c.clone()))
        .collect();
    let (lt_m, lt_c) = dterms
        .iter()
        .max_by(|x, y| grlex_cmp(&x.0, &y.0))
        .cloned()
        .unwrap();
    let lt_inv = lt_c.recip();
    let mut rem: BTreeMap<GrKey, Rat> = a
        .terms
        .iter()
        .map(|(m, c)| (GrKey(total_degree(m), m.clone()), c.clone()))
        .collect();
    let mut quot: Vec<(Vec<i32>, Rat)> = Vec::new();
    while let Some((key, c)) = rem.pop_last() {
        let m = &key.1;
        if m.iter().zip(lt_m.iter()).any(|(x, y)| x < y) {
            return None;
        }
        let qm: Mono = m.iter().zip(lt_m.iter()).map(|(x, y)| x - y).collect();
        let qc = rmul(&c, &lt_inv);
        for (dm, dc) in &dterms {
            if *dm == lt_m {
                continue;
            }
            let km: Mono = qm.iter().zip(dm.iter()).map(|(x, y)| x + y).collect();
            let k = GrKey(total_degree(&km), km);
            let delta = -rmul(&qc, dc);
            match rem.get_mut(&k) {
                Some(x) => {
                    radd_assign(x, delta);
                    if x.is_zero() {
                        rem.remove(&k);
                    }
                }
                None => {
                    rem.insert(k, delta);
                }
            }
        }
        quot.push((qm.to_vec(), qc));
    }
    Some(LaurentPoly::from_terms(vars, quot))
}

fn fmt_rat(c: &Rat) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl LaurentPoly {
    pub(crate) fn fmt_monomial(vars: &[Var], m: &[i32]) -> String {
        let mut parts = Vec::new();
        let t_first = vars.first().is_some_and(|v| v.name() == super::var::T);
        let order = vars.iter().zip(m).skip(t_first as usize);
        let tail = vars.iter().zip(m).take(t_first as usize);
        for (v, &e) in order.chain(tail) {
            match e {
                0 => {}
                1 => parts.push(v.to_string()),
                _ => parts.push(format!("{v}^{e}")),
            }
        }
        parts.join("*")
    }

    /// Terms in display order: ascending degree in the first variable (`t`
    /// when present), then graded lexicographic.
    fn display_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.terms.len()).collect();
        let tk = self.var_index(&Var::t());
        idx.sort_by(|&a, &b| {
            let (ma, mb) = (&self.terms[a].0, &self.terms[b].0);
            let ta = tk.map(|k| ma[k]).unwrap_or(0);
            let tb = tk.map(|k| mb[k]).unwrap_or(0);
            ta.cmp(&tb).then_with(|| grlex_cmp(ma, mb))
        });
        idx
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, &i) in self.display_order().iter().enumerate() {
            let (m, c) = &self.terms[i];
            let mono = Self::fmt_monomial(&self.vars, m);
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{}", fmt_rat(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", fmt_rat(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        super::super::parse::parse_poly(s).unwrap()
    }

    #[test]
    fn unused_variables_are_dropped() {
        let a = p("t*a + b");
        let b = p("b");
        let d = a.sub(&b);
        assert_eq!(d.vars().len(), 2);
        assert_eq!(d, p("a*t"));
    }

    #[test]
    fn exact_division_detects_remainders() {
        let a = p("1 - t^2");
        assert_eq!(a.exact_div(&p("1 - t")).unwrap(), p("1 + t"));
        assert!(a.exact_div(&p("1 - 2*t")).is_none());
        let b = p("a*t^-1 - a");
        assert_eq!(b.exact_div(&p("t^-3")).unwrap(), p("a*t^2 - a*t^3"));
    }

    #[test]
    fn monomial_substitution_handles_negative_powers() {
        let f = p("1 - a*t");
        let mut map = BTreeMap::new();
        map.insert(Var::t(), p("q^-1*t^-1"));
        assert_eq!(f.substitute_monomials(&map).unwrap(), p("1 - a*q^-1*t^-1"));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p("1 - a*t - 3/2*b*t^2").to_string(), "1 - a*t - 3/2*b*t^2");
        assert_eq!(p("-t^-1").to_string(), "-t^-1");
    }
}
