//! Unramified representations, their L-, gamma- and epsilon-factors, the
//! rank-one Tate factors, the unramified local coefficient, and the
//! identity checks built on them.
//!
//! Factors are rational functions in `t = q^{-s}`. The `(1 - s)` side is
//! the substitution `t -> q^{-1} t^{-1}`. Half-integral powers of `q` are
//! written with a separate symbol `sqrt_q`; see [`BaseSize`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::basechange::bc_inert_parameters;
use crate::error::{Error, Result};
use crate::exactalg::{
    poly_roots_numeric, rational_point, BigComplex, BigFloat, LaurentPoly, Rat, RationalFunction,
    Scalar, Specialization, Var, DEFAULT_PRECISION,
};
use crate::globalfield::is_prime_power;
use crate::lgroup::{
    asai_model, inverse, rank_one_group, root_multiplicity, rs_model, twisted_det,
    twisted_det_factors,
    AdjointBlock, Algebra, Over, RankOneGroup, SatakeClass, SatakeValue,
};
use crate::rootdata::{build_root_datum, dot, Family, GroupDescriptor, RelativeRootDatum};

/// Residue field size: a free symbol or a numeric prime power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseSize {
    Symbol(Var),
    Value(u64),
}

impl Default for BaseSize {
    fn default() -> Self {
        BaseSize::Symbol(Var::q())
    }
}

impl BaseSize {
    pub fn from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Symbol(v) => Ok(BaseSize::Symbol(v.clone())),
            Scalar::Rational(r) if r.is_integer() => {
                let n: u64 = r
                    .to_integer()
                    .try_into()
                    .map_err(|_| Error::parse("q", "not a positive machine integer"))?;
                if !is_prime_power(n) {
                    return Err(Error::parse("q", format!("{n} is not a prime power")));
                }
                Ok(BaseSize::Value(n))
            }
            other => Err(Error::parse(
                "q",
                format!("`{other}` is neither a symbol nor a prime power"),
            )),
        }
    }

    pub fn to_scalar(&self) -> Scalar {
        match self {
            BaseSize::Symbol(v) => Scalar::Symbol(v.clone()),
            BaseSize::Value(n) => Scalar::Rational(Rat::from_integer(BigInt::from(*n))),
        }
    }

    /// Symbol standing for `q^{1/2}`.
    pub fn sqrt_var(&self) -> Var {
        match self {
            BaseSize::Symbol(v) if *v != Var::q() => Var::new(&format!("sqrt_{}", v.name())),
            _ => Var::sqrt_q(),
        }
    }

    fn exact_sqrt(&self) -> Option<u64> {
        match self {
            BaseSize::Value(n) => {
                let r = n.sqrt();
                (r * r == *n).then_some(r)
            }
            BaseSize::Symbol(_) => None,
        }
    }

    fn rat(&self) -> Option<Rat> {
        match self {
            BaseSize::Value(n) => Some(Rat::from_integer(BigInt::from(*n))),
            BaseSize::Symbol(_) => None,
        }
    }

    /// `q^k`.
    pub fn power(&self, k: i32) -> LaurentPoly {
        match self {
            BaseSize::Symbol(v) => LaurentPoly::monomial(Rat::one(), &[(v.clone(), k)]),
            BaseSize::Value(_) => LaurentPoly::constant(rat_pow(&self.rat().unwrap(), k)),
        }
    }

    /// `q^{k/2}`.
    pub fn half_power(&self, k: i32) -> LaurentPoly {
        if k % 2 == 0 {
            return self.power(k / 2);
        }
        if let Some(r) = self.exact_sqrt() {
            return LaurentPoly::constant(rat_pow(&Rat::from_integer(BigInt::from(r)), k));
        }
        LaurentPoly::monomial(Rat::one(), &[(self.sqrt_var(), k)])
    }

    /// Eliminates `q` in favour of `sqrt_q^2` when `sqrt_q` occurs.
    pub fn normalize(&self, f: &RationalFunction) -> Result<RationalFunction> {
        let s = self.sqrt_var();
        if f.vars().contains(&s) {
            self.canonical(f)
        } else {
            Ok(f.clone())
        }
    }

    /// Form used for comparisons: with a symbolic `q` every occurrence is
    /// rewritten through `sqrt_q`; with a numeric non-square `q` the
    /// exponents of `sqrt_q` are reduced modulo 2.
    pub fn canonical(&self, f: &RationalFunction) -> Result<RationalFunction> {
        match self {
            BaseSize::Symbol(v) => {
                let mut map = BTreeMap::new();
                map.insert(
                    v.clone(),
                    LaurentPoly::monomial(Rat::one(), &[(self.sqrt_var(), 2)]),
                );
                f.substitute(&map)
            }
            BaseSize::Value(_) => {
                let s = self.sqrt_var();
                if !f.vars().contains(&s) {
                    return Ok(f.clone());
                }
                let q = self.rat().unwrap();
                let fold = |p: &LaurentPoly| -> LaurentPoly {
                    let Some(pos) = p.var_index(&s) else {
                        return p.clone();
                    };
                    let terms = p
                        .terms()
                        .map(|(m, c)| {
                            let mut e = m.to_vec();
                            let r = e[pos].rem_euclid(2);
                            let c = c * rat_pow(&q, (e[pos] - r) / 2);
                            e[pos] = r;
                            (e, c)
                        })
                        .collect();
                    LaurentPoly::from_terms(p.vars().to_vec(), terms)
                };
                let num = fold(f.numerator());
                let den = fold(f.denominator());
                RationalFunction::from_poly(num).div(&RationalFunction::from_poly(den))
            }
        }
    }

    pub fn agree(&self, a: &RationalFunction, b: &RationalFunction) -> Result<bool> {
        Ok(self.canonical(a)? == self.canonical(b)?)
    }

    /// The substitution `t -> q^{-1} t^{-1}`.
    fn reflect_map(&self) -> BTreeMap<Var, LaurentPoly> {
        BTreeMap::from([(Var::t(), self.power(-1).mul(&t_mono(Rat::one(), -1)))])
    }

    /// Numeric values of `q` and `sqrt_q`.
    pub fn specialization(&self, prec: u32) -> Specialization {
        let mut s = Specialization::new();
        if let BaseSize::Value(n) = self {
            let q = Rat::from_integer(BigInt::from(*n));
            s.set(Var::q().name(), rational_point(&q, prec));
            let root = BigFloat::from_rational(&q, prec).sqrt(prec);
            s.set(self.sqrt_var().name(), BigComplex::new(root, BigFloat::zero(), prec));
        }
        s
    }
}

fn rat_pow(r: &Rat, k: i32) -> Rat {
    let p = num_traits::pow(r.clone(), k.unsigned_abs() as usize);
    if k < 0 {
        p.recip()
    } else {
        p
    }
}

fn t_mono(c: Rat, k: i32) -> LaurentPoly {
    LaurentPoly::monomial(c, &[(Var::t(), k)])
}

/// Substitutes `t -> t^k` in a rational function.
pub fn stretch_rf(f: &RationalFunction, k: u32) -> Result<RationalFunction> {
    if k == 1 {
        return Ok(f.clone());
    }
    f.substitute(&BTreeMap::from([(Var::t(), t_mono(Rat::one(), k as i32))]))
}

/// Additive character data: the conductor exponent `c`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditiveCharData {
    pub conductor_exponent: i32,
}

/// An unramified representation, optionally viewed as inducing data on the
/// maximal Levi subgroup given by `theta` (0-based simple-root indices).
/// Without `theta` the single factor is the standard L-function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RepWire", into = "RepWire")]
pub struct UnramifiedRep {
    pub group: GroupDescriptor,
    pub place: Algebra,
    pub satake: SatakeClass,
    pub q: BaseSize,
    pub psi: AdditiveCharData,
    pub theta: Option<Vec<usize>>,
}

fn default_place() -> Algebra {
    Algebra::Inert
}

fn default_q() -> Scalar {
    Scalar::Symbol(Var::q())
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepWire {
    group: GroupDescriptor,
    #[serde(default = "default_place")]
    place: Algebra,
    satake: Vec<SatakeValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    second: Option<Vec<SatakeValue>>,
    #[serde(default, skip_serializing_if = "is_false")]
    quadratic_twist: bool,
    #[serde(default = "default_q")]
    q: Scalar,
    #[serde(default)]
    psi_conductor: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<Vec<usize>>,
}

impl TryFrom<RepWire> for UnramifiedRep {
    type Error = Error;

    fn try_from(w: RepWire) -> Result<Self> {
        let theta = match w.theta {
            Some(th) => Some(
                th.iter()
                    .enumerate()
                    .map(|(k, &j)| {
                        j.checked_sub(1).ok_or_else(|| {
                            Error::parse(format!("theta[{k}]"), "indices start at 1")
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        let satake = SatakeClass {
            values: w.satake,
            second: w.second,
            quadratic_twist: w.quadratic_twist,
        };
        Ok(UnramifiedRep::new(w.group, w.place, satake, theta)?
            .with_q(BaseSize::from_scalar(&w.q)?)
            .with_conductor(w.psi_conductor))
    }
}

impl From<UnramifiedRep> for RepWire {
    fn from(r: UnramifiedRep) -> Self {
        RepWire {
            group: r.group,
            place: r.place,
            satake: r.satake.values,
            second: r.satake.second,
            quadratic_twist: r.satake.quadratic_twist,
            q: r.q.to_scalar(),
            psi_conductor: r.psi.conductor_exponent,
            theta: r.theta.map(|th| th.into_iter().map(|j| j + 1).collect()),
        }
    }
}

/// Satake images as Laurent polynomials.
#[derive(Clone, Debug)]
pub(crate) struct Params {
    pub vals: Vec<LaurentPoly>,
    pub second: Option<Vec<LaurentPoly>>,
}

impl Params {
    fn inverted(&self) -> Result<Self> {
        let inv = |v: &[LaurentPoly]| v.iter().map(inverse).collect::<Result<Vec<_>>>();
        Ok(Params {
            vals: inv(&self.vals)?,
            second: match &self.second {
                Some(s) => Some(inv(s)?),
                None => None,
            },
        })
    }
}

/// Number of Satake values expected in the first list.
pub fn expected_parameter_count(group: GroupDescriptor, place: Algebra) -> usize {
    match (group, place) {
        (GroupDescriptor::Unitary(n), Algebra::Split) => n as usize,
        (g, _) => g.torus_rank(),
    }
}

impl UnramifiedRep {
    pub fn new(
        group: GroupDescriptor,
        place: Algebra,
        satake: SatakeClass,
        theta: Option<Vec<usize>>,
    ) -> Result<Self> {
        let datum = build_root_datum(group)?;
        if matches!(group, GroupDescriptor::Unitary(_)) && place == Algebra::Base {
            return Err(Error::parse(
                "place",
                "unitary groups need an inert or split place",
            ));
        }
        let want = expected_parameter_count(group, place);
        if satake.values.len() != want {
            return Err(Error::parse(
                "satake",
                format!("{group} at a {place} place needs {want} values, found {}", satake.values.len()),
            ));
        }
        let needs_second = matches!(group, GroupDescriptor::ResGl(_)) && place == Algebra::Split;
        match (&satake.second, needs_second) {
            (Some(s), true) if s.len() != want => {
                return Err(Error::parse(
                    "second",
                    format!("needs {want} values, found {}", s.len()),
                ))
            }
            (None, true) => {
                return Err(Error::parse("second", "split algebras need a second list"))
            }
            (Some(_), false) => {
                return Err(Error::parse("second", "only split resGL data carry a second list"))
            }
            _ => {}
        }
        if satake.quadratic_twist && place != Algebra::Inert {
            return Err(Error::parse(
                "quadratic_twist",
                "the quadratic character is nontrivial only at inert places",
            ));
        }
        satake.symbolic()?;
        if let Some(th) = &theta {
            datum.removed_root(th)?;
        }
        Ok(UnramifiedRep {
            group,
            place,
            satake,
            q: BaseSize::default(),
            psi: AdditiveCharData::default(),
            theta,
        })
    }

    /// Representation with Satake values parsed from strings such as `a1`
    /// or `a1^-1`.
    pub fn symbolic(
        group: GroupDescriptor,
        place: Algebra,
        names: &[&str],
        theta: Option<Vec<usize>>,
    ) -> Result<Self> {
        Self::new(group, place, SatakeClass::parse_list(names)?, theta)
    }

    pub fn with_q(mut self, q: BaseSize) -> Self {
        self.q = q;
        self
    }

    pub fn with_conductor(mut self, c: i32) -> Self {
        self.psi = AdditiveCharData {
            conductor_exponent: c,
        };
        self
    }

    pub fn with_theta(mut self, theta: Option<Vec<usize>>) -> Result<Self> {
        if let Some(th) = &theta {
            build_root_datum(self.group)?.removed_root(th)?;
        }
        self.theta = theta;
        Ok(self)
    }

    /// Replaces complex Satake values by symbols `%{tag}{k}` (second list:
    /// `%{tag}w{k}`), returning the renamed copy and the symbol table.
    pub fn symbolize(&self, tag: &str) -> (UnramifiedRep, Vec<(String, SatakeValue)>) {
        let mut table = Vec::new();
        let mut rename = |list: &[SatakeValue], prefix: String| -> Vec<SatakeValue> {
            list.iter()
                .enumerate()
                .map(|(k, v)| match v {
                    SatakeValue::Numeric(_) => {
                        let name = format!("{prefix}{k}");
                        table.push((name.clone(), v.clone()));
                        SatakeValue::symbol(&name)
                    }
                    exact => exact.clone(),
                })
                .collect()
        };
        let mut out = self.clone();
        out.satake.values = rename(&self.satake.values, format!("%{tag}"));
        if let Some(second) = &self.satake.second {
            out.satake.second = Some(rename(second, format!("%{tag}w")));
        }
        (out, table)
    }

    pub fn datum(&self) -> RelativeRootDatum {
        build_root_datum(self.group).expect("validated group")
    }

    pub(crate) fn params(&self) -> Result<(Params, Specialization)> {
        let sym = self.satake.symbolic()?;
        let mut vals = sym.values;
        if self.satake.quadratic_twist {
            vals = vals.iter().map(LaurentPoly::neg).collect();
        }
        Ok((
            Params {
                vals,
                second: sym.second,
            },
            sym.point,
        ))
    }

    /// The constituents `r_1, ..., r_{m_r}` in order of level.
    pub fn blocks(&self) -> Result<Vec<AdjointBlock>> {
        let (p, _) = self.params()?;
        blocks_from(self.group, self.place, self.theta.as_deref(), &p)
    }

    fn dual_blocks(&self) -> Result<Vec<AdjointBlock>> {
        let (p, _) = self.params()?;
        blocks_from(self.group, self.place, self.theta.as_deref(), &p.inverted()?)
    }

    /// Number of constituents.
    pub fn level_count(&self) -> Result<u32> {
        Ok(self.blocks()?.len() as u32)
    }
}

fn labelled(prefix: &str, v: &[LaurentPoly]) -> Vec<(String, LaurentPoly)> {
    v.iter()
        .enumerate()
        .map(|(k, x)| (format!("{prefix}{}", k + 1), x.clone()))
        .collect()
}

fn ratio_pairs(
    left: &[(String, LaurentPoly)],
    right: &[(String, LaurentPoly)],
) -> Result<Vec<(String, LaurentPoly)>> {
    let mut out = Vec::new();
    for (a, x) in left {
        for (b, y) in right {
            out.push((format!("{a}/{b}"), x.mul(&inverse(y)?)));
        }
    }
    Ok(out)
}

fn diagonal(level: u32, entries: Vec<(String, LaurentPoly)>, weight: u32) -> AdjointBlock {
    let (labels, eigen) = entries.into_iter().unzip();
    AdjointBlock::diagonal(level, labels, eigen, weight)
}

fn with_level(mut b: AdjointBlock, level: u32) -> AdjointBlock {
    b.level = level;
    b
}

pub(crate) fn blocks_from(
    group: GroupDescriptor,
    place: Algebra,
    theta: Option<&[usize]>,
    p: &Params,
) -> Result<Vec<AdjointBlock>> {
    let weight = |place: Algebra| if place == Algebra::Inert { 2 } else { 1 };
    let Some(theta) = theta else {
        let entries = match (group, place) {
            (GroupDescriptor::ResGl(_), Algebra::Split) => {
                let mut e = labelled("a", &p.vals);
                e.extend(labelled("b", p.second.as_deref().unwrap_or_default()));
                e
            }
            (GroupDescriptor::Unitary(n), Algebra::Inert) => {
                labelled("a", &bc_inert_parameters(&p.vals, n % 2 == 1)?)
            }
            _ => labelled("a", &p.vals),
        };
        return Ok(vec![diagonal(1, entries, weight(place))]);
    };
    let datum = build_root_datum(group)?;
    let m = datum.removed_root(theta)? + 1;
    match group {
        GroupDescriptor::ResGl(_) => {
            let shifted = |prefix: &str, v: &[LaurentPoly], from: usize| -> Vec<(String, LaurentPoly)> {
                v.iter()
                    .enumerate()
                    .map(|(k, x)| (format!("{prefix}{}", k + from + 1), x.clone()))
                    .collect()
            };
            let (tau, rest) = p.vals.split_at(m);
            let mut e = ratio_pairs(&shifted("a", tau, 0), &shifted("a", rest, m))?;
            if place == Algebra::Split {
                let second = p.second.as_deref().unwrap_or_default();
                let (tau2, rest2) = second.split_at(m);
                e.extend(ratio_pairs(&shifted("b", tau2, 0), &shifted("b", rest2, m))?);
            }
            Ok(vec![diagonal(1, e, weight(place))])
        }
        GroupDescriptor::Unitary(big_n) => {
            let big_n = big_n as usize;
            if place == Algebra::Split {
                let v = &p.vals;
                let b1 = labelled("a", &v[..m]);
                let b2: Vec<_> = labelled("a", v)[m..big_n - m].to_vec();
                let b3: Vec<_> = labelled("a", v)[big_n - m..].to_vec();
                if b2.is_empty() {
                    return Ok(vec![diagonal(1, ratio_pairs(&b1, &b3)?, 1)]);
                }
                let mut r1 = ratio_pairs(&b1, &b2)?;
                r1.extend(ratio_pairs(&b2, &b3)?);
                return Ok(vec![diagonal(1, r1, 1), diagonal(2, ratio_pairs(&b1, &b3)?, 1)]);
            }
            let n = big_n / 2;
            let odd = big_n % 2 == 1;
            let (tau, pi) = p.vals.split_at(m);
            if !odd && m == n {
                return Ok(vec![asai_model(m, tau, false)?]);
            }
            let bc = bc_inert_parameters(pi, odd)?;
            let r1 = rs_model(m, bc.len(), tau, &bc, Over::E)?;
            let r2 = with_level(asai_model(m, tau, odd)?, 2);
            Ok(vec![r1, r2])
        }
    }
}

/// gamma, L and epsilon at one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFactorTriple {
    pub gamma: RationalFunction,
    pub l: RationalFunction,
    pub epsilon: RationalFunction,
    pub level: u32,
    /// Degree in `t` of the L-denominator, and the exponent of the central
    /// character in the conductor dependence when known.
    pub dims: (usize, Option<u32>),
}

fn block_at(blocks: &[AdjointBlock], level: u32) -> Result<&AdjointBlock> {
    if level == 0 || level as usize > blocks.len() {
        return Err(Error::InvalidLevel {
            level,
            min: 1,
            max: blocks.len() as u32,
        });
    }
    Ok(&blocks[level as usize - 1])
}

fn triple(
    block: &AdjointBlock,
    dual: &AdjointBlock,
    q: &BaseSize,
    c: i32,
) -> Result<LocalFactorTriple> {
    let p = twisted_det(block);
    let pd = RationalFunction::from_poly(twisted_det(dual)).substitute(&q.reflect_map())?;
    let deg = block.t_degree() as i32;
    let eps = RationalFunction::from_poly(block.eigen_product())
        .powi(c)?
        .mul(&RationalFunction::from_poly(
            q.half_power(c * deg).mul(&t_mono(Rat::one(), c * deg)),
        ));
    let p = RationalFunction::from_poly(p);
    let gamma = eps.mul(&p).div(&pd)?;
    Ok(LocalFactorTriple {
        gamma: q.normalize(&gamma)?,
        l: p.recip()?,
        epsilon: q.normalize(&eps)?,
        level: block.level,
        dims: (
            block.t_degree(),
            (block.dim() == 1).then_some(1),
        ),
    })
}

/// gamma, L and epsilon with the determinants left unexpanded:
/// `L = 1 / (l_unit * prod l_factors)` and
/// `gamma = epsilon * L^{-1} / (dual_unit * prod dual_factors)`, each factor
/// a polynomial divisible by no variable with leading coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactoredTriple {
    pub level: u32,
    pub epsilon: RationalFunction,
    pub l_unit: RationalFunction,
    pub l_factors: Vec<(LaurentPoly, u32)>,
    pub dual_unit: RationalFunction,
    pub dual_factors: Vec<(LaurentPoly, u32)>,
}

#[derive(Default)]
struct FactorBag {
    unit: Option<RationalFunction>,
    factors: Vec<(LaurentPoly, u32)>,
}

fn add_factor(bag: &mut Vec<(LaurentPoly, u32)>, p: LaurentPoly, k: u32) {
    match bag.iter_mut().find(|(f, _)| *f == p) {
        Some((_, n)) => *n += k,
        None => bag.push((p, k)),
    }
}

fn sorted(mut bag: Vec<(LaurentPoly, u32)>) -> Vec<(LaurentPoly, u32)> {
    bag.sort_by_cached_key(|(f, _)| f.to_string());
    bag
}

impl FactorBag {
    fn push(&mut self, q: &BaseSize, f: RationalFunction) -> Result<()> {
        let inv = q.canonical(&f)?.recip()?;
        let unit = RationalFunction::from_poly(inv.numerator().clone()).recip()?;
        self.unit = Some(match self.unit.take() {
            Some(u) => u.mul(&unit),
            None => unit,
        });
        let p = inv.denominator().clone();
        if !p.is_one() {
            add_factor(&mut self.factors, p, 1);
        }
        Ok(())
    }

    fn finish(self) -> (RationalFunction, Vec<(LaurentPoly, u32)>) {
        (
            self.unit.unwrap_or_else(RationalFunction::one),
            sorted(self.factors),
        )
    }
}

/// Splits `prod polys` into a monomial unit and a multiset of normalized
/// factors, the form used by [`FactoredTriple`].
pub fn factor_multiset(
    q: &BaseSize,
    polys: impl IntoIterator<Item = LaurentPoly>,
) -> Result<(RationalFunction, Vec<(LaurentPoly, u32)>)> {
    let mut bag = FactorBag::default();
    for p in polys {
        bag.push(q, RationalFunction::from_poly(p))?;
    }
    Ok(bag.finish())
}

impl FactoredTriple {
    /// Product of two triples at the same level.
    pub fn mul(&self, other: &Self) -> Self {
        let merge = |a: &[(LaurentPoly, u32)], b: &[(LaurentPoly, u32)]| {
            let mut m = a.to_vec();
            for (p, k) in b {
                add_factor(&mut m, p.clone(), *k);
            }
            sorted(m)
        };
        FactoredTriple {
            level: self.level,
            epsilon: self.epsilon.mul(&other.epsilon),
            l_unit: self.l_unit.mul(&other.l_unit),
            l_factors: merge(&self.l_factors, &other.l_factors),
            dual_unit: self.dual_unit.mul(&other.dual_unit),
            dual_factors: merge(&self.dual_factors, &other.dual_factors),
        }
    }

    /// `1 / (l_unit * prod l_factors)`, expanded.
    pub fn l(&self) -> Result<RationalFunction> {
        expand(&self.l_unit, &self.l_factors).recip()
    }

    /// The gamma factor, expanded.
    pub fn gamma(&self) -> Result<RationalFunction> {
        let num = expand(&self.l_unit, &self.l_factors);
        let den = expand(&self.dual_unit, &self.dual_factors);
        self.epsilon.mul(&num).div(&den)
    }
}

fn expand(unit: &RationalFunction, factors: &[(LaurentPoly, u32)]) -> RationalFunction {
    let p = factors
        .iter()
        .fold(LaurentPoly::one(), |acc, (f, k)| acc.mul(&f.pow(*k)));
    unit.mul(&RationalFunction::from_poly(p))
}

/// [`gamma_factor`] with unexpanded determinants. Two representations with
/// equal triples have equal gamma, L and epsilon.
pub fn factored_gamma(rep: &UnramifiedRep, level: u32) -> Result<FactoredTriple> {
    let blocks = rep.blocks()?;
    let dual = rep.dual_blocks()?;
    let block = block_at(&blocks, level)?;
    let q = &rep.q;
    let c = rep.psi.conductor_exponent;
    let mut l = FactorBag::default();
    for f in twisted_det_factors(block) {
        l.push(q, RationalFunction::from_poly(f))?;
    }
    let mut d = FactorBag::default();
    for f in twisted_det_factors(&dual[level as usize - 1]) {
        d.push(q, RationalFunction::from_poly(f).substitute(&q.reflect_map())?)?;
    }
    let deg = block.t_degree() as i32;
    let epsilon = RationalFunction::from_poly(block.eigen_product())
        .powi(c)?
        .mul(&RationalFunction::from_poly(
            q.half_power(c * deg).mul(&t_mono(Rat::one(), c * deg)),
        ));
    let (l_unit, l_factors) = l.finish();
    let (dual_unit, dual_factors) = d.finish();
    Ok(FactoredTriple {
        level,
        epsilon: q.canonical(&epsilon)?,
        l_unit,
        l_factors,
        dual_unit,
        dual_factors,
    })
}

/// `1 / det(I - r_i t)` at the given level.
pub fn l_factor(rep: &UnramifiedRep, level: u32) -> Result<RationalFunction> {
    let blocks = rep.blocks()?;
    RationalFunction::from_poly(twisted_det(block_at(&blocks, level)?)).recip()
}

/// gamma, L and epsilon at the given level, for the additive character
/// carried by `rep`.
pub fn gamma_factor(rep: &UnramifiedRep, level: u32) -> Result<LocalFactorTriple> {
    let blocks = rep.blocks()?;
    let dual = rep.dual_blocks()?;
    let b = block_at(&blocks, level)?;
    triple(b, &dual[level as usize - 1], &rep.q, rep.psi.conductor_exponent)
}

/// Gamma factors of the dual representation.
pub fn dual_gamma_factor(rep: &UnramifiedRep, level: u32) -> Result<LocalFactorTriple> {
    let blocks = rep.blocks()?;
    let dual = rep.dual_blocks()?;
    let d = block_at(&dual, level)?;
    triple(d, &blocks[level as usize - 1], &rep.q, rep.psi.conductor_exponent)
}

/// `prod_i gamma(i s, r_i)` with the Weyl-group lambda factor equal to 1.
pub fn local_coefficient(rep: &UnramifiedRep) -> Result<RationalFunction> {
    if rep.theta.is_none() {
        return Err(Error::NotMaximalLevi);
    }
    let mut out = RationalFunction::one();
    for i in 1..=rep.level_count()? {
        out = out.mul(&stretch_rf(&gamma_factor(rep, i)?.gamma, i)?);
    }
    rep.q.normalize(&out)
}

/// An unramified character given by its value at a uniformizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramifiedCharacter {
    pub value: LaurentPoly,
    pub conductor: u32,
}

impl UnramifiedCharacter {
    pub fn new(value: LaurentPoly) -> Self {
        UnramifiedCharacter {
            value,
            conductor: 0,
        }
    }
}

/// Tate gamma factor over the unramified extension of degree `f`, written
/// in `t^{f * stretch}`.
pub fn tate_gamma(
    value: &LaurentPoly,
    degree: u32,
    stretch: u32,
    q: &BaseSize,
    c: i32,
) -> Result<RationalFunction> {
    let f = degree as i32;
    let k = f * stretch as i32;
    let eps = RationalFunction::from_poly(value.clone())
        .powi(c)?
        .mul(&RationalFunction::from_poly(
            q.half_power(f * c).mul(&t_mono(Rat::one(), k * c)),
        ));
    let num = LaurentPoly::one().sub(&value.mul(&t_mono(Rat::one(), k)));
    let den = LaurentPoly::one().sub(
        &inverse(value)?
            .mul(&q.power(-f))
            .mul(&t_mono(Rat::one(), -k)),
    );
    let g = eps.mul(&RationalFunction::from_poly(num).div(&RationalFunction::from_poly(den))?);
    q.normalize(&g)
}

/// Level multipliers of the factors returned by [`rank_one_gamma`].
pub fn rank_one_levels(case: RankOneGroup) -> &'static [u32] {
    match case {
        RankOneGroup::Sl2 { .. } => &[1],
        RankOneGroup::Sl2Pair => &[1, 1],
        RankOneGroup::Su3 => &[1, 2],
    }
}

/// Gamma factors of a rank-one group, lambda factors set to 1. The second
/// `SU_3` factor is the quadratic-character twist over the base field and
/// is already written in `t^2`.
pub fn rank_one_gamma(
    case: RankOneGroup,
    chars: &[UnramifiedCharacter],
    q: &BaseSize,
    psi: AdditiveCharData,
) -> Result<Vec<RationalFunction>> {
    if chars.iter().any(|c| c.conductor > 0) {
        return Err(Error::UnsupportedRamified);
    }
    let want = match case {
        RankOneGroup::Sl2Pair => 2,
        _ => 1,
    };
    if chars.len() != want {
        return Err(Error::DimensionError(format!(
            "{case:?} takes {want} characters, found {}",
            chars.len()
        )));
    }
    let c = psi.conductor_exponent;
    match case {
        RankOneGroup::Sl2 { degree } => Ok(vec![tate_gamma(&chars[0].value, degree, 1, q, c)?]),
        RankOneGroup::Sl2Pair => chars
            .iter()
            .map(|ch| tate_gamma(&ch.value, 1, 1, q, c))
            .collect(),
        RankOneGroup::Su3 => Ok(vec![
            tate_gamma(&chars[0].value, 2, 1, q, c)?,
            tate_gamma(&chars[0].value.neg(), 1, 2, q, c)?,
        ]),
    }
}

/// Character values attached to root `k`: `chi(beta^vee(uniformizer))`
/// through the primitive vector of the root, with the quadratic sign on
/// the doubled roots of a non-reduced system.
pub(crate) fn root_characters(
    datum: &RelativeRootDatum,
    k: usize,
    place: Algebra,
    p: &Params,
) -> Result<Vec<LaurentPoly>> {
    let r = datum.root(k);
    let g = r.iter().fold(0i32, |g, x| g.gcd(x));
    let eval = |vals: &[LaurentPoly]| -> Result<LaurentPoly> {
        let mut out = LaurentPoly::one();
        for (x, e) in vals.iter().zip(r) {
            let e = e / g;
            let base = if e < 0 { inverse(x)? } else { x.clone() };
            out = out.mul(&base.pow(e.unsigned_abs()));
        }
        Ok(out)
    };
    let mut value = eval(&p.vals)?;
    let single = r.iter().filter(|x| **x != 0).count() == 1;
    if datum.family() == Family::BC && single && dot(r, r) == 4 {
        value = value.neg();
    }
    let mut out = vec![value];
    if datum.family() == Family::A && place == Algebra::Split {
        out.push(eval(p.second.as_deref().unwrap_or_default())?);
    }
    Ok(out)
}

/// Determinant side and rank-one side at one level.
#[derive(Clone, Debug, Serialize)]
pub struct LevelComparison {
    pub level: u32,
    pub determinant_side: RationalFunction,
    pub rank_one_side: RationalFunction,
    pub roots: Vec<Vec<i32>>,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicativityReport {
    pub group: String,
    pub theta: Vec<usize>,
    pub levels: Vec<LevelComparison>,
    pub local_coefficient: RationalFunction,
    pub ratio_form: RationalFunction,
    pub ratio_form_agrees: bool,
    pub holds: bool,
}

/// Compares `gamma(i s, r_i)` with the product of rank-one factors over the
/// reduced roots of level `i`, and the trivial-conductor local coefficient
/// with the product over all roots of the c-function ratios.
pub fn check_multiplicativity(rep: &UnramifiedRep) -> Result<MultiplicativityReport> {
    let theta = rep.theta.clone().ok_or(Error::NotMaximalLevi)?;
    if matches!(rep.group, GroupDescriptor::Unitary(_)) && rep.place == Algebra::Split {
        return Err(Error::UnsupportedConstituent(
            "rank-one data for unitary groups at split places".into(),
        ));
    }
    let datum = rep.datum();
    let removed = datum.removed_root(&theta)?;
    let (p, _) = rep.params()?;
    let q = &rep.q;
    let m_r = rep.level_count()?;

    let mut sides: BTreeMap<u32, (RationalFunction, Vec<Vec<i32>>)> = (1..=m_r)
        .map(|i| (i, (RationalFunction::one(), Vec::new())))
        .collect();
    let mut ratio = RationalFunction::one();
    for k in datum.positive_roots() {
        let level = datum.level(k, removed);
        if level <= 0 {
            continue;
        }
        let level = level as u32;
        let chars = root_characters(&datum, k, rep.place, &p)?;
        let mult = root_multiplicity(&datum, k, rep.place);
        let f = if chars.len() == 2 { 1 } else { mult };
        for x in &chars {
            ratio = ratio.mul(&tate_gamma(x, f, level, q, 0)?);
        }
        if !datum.is_reduced(k) {
            continue;
        }
        let case = rank_one_group(&datum, k, rep.place);
        let chars: Vec<UnramifiedCharacter> =
            chars.into_iter().map(UnramifiedCharacter::new).collect();
        let factors = rank_one_gamma(case, &chars, q, rep.psi)?;
        for (g, m) in factors.iter().zip(rank_one_levels(case)) {
            let entry = sides.get_mut(&(level * m)).ok_or_else(|| {
                Error::UnsupportedConstituent(format!("no constituent at level {}", level * m))
            })?;
            entry.0 = entry.0.mul(&stretch_rf(g, level)?);
            if *m == 1 {
                entry.1.push(datum.root(k).to_vec());
            }
        }
    }

    let mut levels = Vec::new();
    for (i, (rank_one, roots)) in sides {
        let det = stretch_rf(&gamma_factor(rep, i)?.gamma, i)?;
        levels.push(LevelComparison {
            level: i,
            agree: q.agree(&det, &rank_one)?,
            determinant_side: det,
            rank_one_side: q.normalize(&rank_one)?,
            roots,
        });
    }
    let lc = local_coefficient(&rep.clone().with_conductor(0))?;
    let ratio = q.normalize(&ratio)?;
    let ratio_form_agrees = q.agree(&lc, &ratio)?;
    Ok(MultiplicativityReport {
        group: rep.group.to_string(),
        theta: theta.iter().map(|j| j + 1).collect(),
        holds: ratio_form_agrees && levels.iter().all(|l| l.agree),
        levels,
        local_coefficient: lc,
        ratio_form: ratio,
        ratio_form_agrees,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctionalEquationReport {
    pub level: u32,
    pub holds: bool,
    /// The product when it is not 1.
    pub witness: Option<RationalFunction>,
}

/// `gamma(s) * gamma_dual(1 - s)` in canonical form.
pub fn functional_equation_product(
    q: &BaseSize,
    gamma: &RationalFunction,
    dual_gamma: &RationalFunction,
) -> Result<RationalFunction> {
    let reflected = q.canonical(dual_gamma)?.substitute(&q.reflect_map())?;
    q.canonical(&q.canonical(gamma)?.mul(&reflected))
}

pub fn check_functional_equation(
    rep: &UnramifiedRep,
    level: u32,
) -> Result<FunctionalEquationReport> {
    let g = gamma_factor(rep, level)?;
    let d = dual_gamma_factor(rep, level)?;
    let prod = functional_equation_product(&rep.q, &g.gamma, &d.gamma)?;
    let holds = prod.is_one();
    Ok(FunctionalEquationReport {
        level,
        holds,
        witness: (!holds).then_some(prod),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TemperednessReport {
    pub level: u32,
    pub moduli: Vec<f64>,
    pub max_deviation: f64,
    pub tol: f64,
    pub tempered: bool,
}

/// Root moduli of the L-denominator in `t`; all equal 1 for unit-modulus
/// Satake parameters.
pub fn check_temperedness(rep: &UnramifiedRep, level: u32, tol: f64) -> Result<TemperednessReport> {
    if !rep.satake.is_numeric() {
        return Err(Error::RequiresNumeric);
    }
    let (_, point) = rep.params()?;
    let blocks = rep.blocks()?;
    let p = twisted_det(block_at(&blocks, level)?);
    let roots = poly_roots_numeric(&p, &point, DEFAULT_PRECISION)?;
    let moduli: Vec<f64> = roots.iter().map(|r| r.modulus()).collect();
    let max_deviation = moduli.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max);
    Ok(TemperednessReport {
        level,
        tempered: max_deviation <= tol,
        moduli,
        max_deviation,
        tol,
    })
}
