//! Verification suites shared by the command line and the acceptance tests.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::basechange::{bc_inert, isobaric_l, rs_asai_factorization, verify_bc_preserves};
use crate::error::{Error, Result};
use crate::exactalg::{
    rf_reduce, BigComplex, LaurentPoly, Rat, RationalFunction, Var, DEFAULT_PRECISION,
};
use crate::globalfield::{
    build_place_table, necklace_count, partial_l_product, partial_zeta, zeta_closed_form,
    ToyGlobalDatum,
};
use crate::lgroup::{
    asai_model, orbit_product, rs_model, twisted_det, Algebra, Over, SatakeClass, SatakeValue,
};
use crate::localfactors::{
    check_functional_equation, check_multiplicativity, check_temperedness,
    expected_parameter_count, functional_equation_product, gamma_factor,
    UnramifiedRep,
};
use crate::rootdata::{build_root_datum, GroupDescriptor};
use crate::weyl::{check_chain, image_in_base, langlands_decompose, weyl_group};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Langlands,
    DetOrbit,
    Asai,
    Multiplicativity,
    FunctionalEquation,
    BaseChange,
    Temperedness,
    ToyGlobal,
    Isobaric,
    RoundTrip,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Langlands,
        Suite::DetOrbit,
        Suite::Asai,
        Suite::Multiplicativity,
        Suite::FunctionalEquation,
        Suite::BaseChange,
        Suite::Temperedness,
        Suite::ToyGlobal,
        Suite::Isobaric,
        Suite::RoundTrip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Langlands => "langlands",
            Suite::DetOrbit => "det-orbit",
            Suite::Asai => "asai",
            Suite::Multiplicativity => "multiplicativity",
            Suite::FunctionalEquation => "functional-equation",
            Suite::BaseChange => "base-change",
            Suite::Temperedness => "temperedness",
            Suite::ToyGlobal => "toy-global",
            Suite::Isobaric => "isobaric",
            Suite::RoundTrip => "round-trip",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::parse("suite", format!("`{s}` is not one of {}", names.join(", ")))
            })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Restricts group-indexed suites to one group.
    pub group: Option<GroupDescriptor>,
    pub trials: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 20240607,
            group: None,
            trials: 100,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: Vec<Value>,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

const MAX_RECORDED: usize = 20;

struct Tally {
    cases: usize,
    failed: usize,
    failures: Vec<Value>,
    details: Value,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failed: 0,
            failures: Vec::new(),
            details: Value::Null,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_RECORDED {
                self.failures.push(witness());
            }
        }
    }

    fn result(&mut self, r: Result<bool>, witness: impl FnOnce() -> Value) {
        match r {
            Ok(ok) => self.check(ok, witness),
            Err(e) => {
                let w = witness();
                self.check(false, || json!({ "case": w, "error": e.to_string() }))
            }
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> SuiteReport {
    let start = Instant::now();
    let mut t = Tally::new();
    match suite {
        Suite::Langlands => langlands(&mut t, opts),
        Suite::DetOrbit => det_orbit(&mut t),
        Suite::Asai => asai(&mut t),
        Suite::Multiplicativity => multiplicativity(&mut t, opts),
        Suite::FunctionalEquation => functional_equation(&mut t, opts),
        Suite::BaseChange => base_change(&mut t, opts),
        Suite::Temperedness => temperedness(&mut t, opts),
        Suite::ToyGlobal => toy_global(&mut t, opts),
        Suite::Isobaric => isobaric(&mut t),
        Suite::RoundTrip => round_trip(&mut t, opts),
    }
    SuiteReport {
        suite: suite.name().to_string(),
        passed: t.failed == 0 && t.cases > 0,
        cases: t.cases,
        failures: t.failures,
        elapsed_ms: start.elapsed().as_millis(),
        details: t.details,
    }
}

/// Runs the suites concurrently; reports come back in the given order.
pub fn run_suites(suites: &[Suite], opts: &VerifyOptions) -> Vec<SuiteReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = suites
            .iter()
            .map(|&suite| s.spawn(move || run_suite(suite, opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread"))
            .collect()
    })
}

fn group_filter(opts: &VerifyOptions, g: GroupDescriptor) -> bool {
    opts.group.is_none_or(|x| x == g)
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

fn symbols(prefix: &str, n: usize) -> Vec<LaurentPoly> {
    names(prefix, n).iter().map(|s| LaurentPoly::var(s)).collect()
}

fn symbolic_class(prefix: &str, n: usize) -> SatakeClass {
    SatakeClass::new(names(prefix, n).iter().map(|s| SatakeValue::symbol(s)).collect())
}

/// Fully symbolic representation of `group` at `place`.
pub fn symbolic_rep(
    group: GroupDescriptor,
    place: Algebra,
    theta: Option<Vec<usize>>,
) -> Result<UnramifiedRep> {
    let n = expected_parameter_count(group, place);
    let mut satake = symbolic_class("a", n);
    if place == Algebra::Split && matches!(group, GroupDescriptor::ResGl(_)) {
        satake.second = Some(symbolic_class("b", n).values);
    }
    UnramifiedRep::new(group, place, satake, theta)
}

fn maximal_thetas(group: GroupDescriptor) -> Vec<Vec<usize>> {
    let d = build_root_datum(group).expect("valid group");
    (0..d.rank()).map(|r| d.maximal_theta(r)).collect()
}

fn one_based(theta: &[usize]) -> Vec<usize> {
    theta.iter().map(|j| j + 1).collect()
}

fn langlands(t: &mut Tally, opts: &VerifyOptions) {
    let groups = [
        GroupDescriptor::ResGl(2),
        GroupDescriptor::ResGl(3),
        GroupDescriptor::ResGl(4),
        GroupDescriptor::Unitary(4),
        GroupDescriptor::Unitary(6),
        GroupDescriptor::Unitary(3),
        GroupDescriptor::Unitary(5),
    ];
    for g in groups.into_iter().filter(|&g| group_filter(opts, g)) {
        let datum = build_root_datum(g).expect("valid group");
        let rank = datum.rank();
        let elements = weyl_group(&datum);
        for mask in 0u32..(1 << rank) {
            let theta: Vec<usize> = (0..rank).filter(|j| mask >> j & 1 == 1).collect();
            for w in &elements {
                let Some(theta_prime) = image_in_base(&datum, w, &theta) else {
                    continue;
                };
                let outcome = langlands_decompose(&datum, &theta, &theta_prime, w)
                    .map_err(|e| e.to_string())
                    .and_then(|chain| check_chain(&datum, &theta, &theta_prime, w, &chain));
                t.check(outcome.is_ok(), || {
                    json!({
                        "group": g.to_string(),
                        "theta": one_based(&theta),
                        "theta_prime": one_based(&theta_prime),
                        "w": w.matrix,
                        "error": outcome.clone().err(),
                    })
                });
            }
        }
    }
}

fn det_orbit(t: &mut Tally) {
    for n in 1..=4 {
        for twist in [false, true] {
            let b = asai_model(n, &symbols("a", n), twist).expect("sizes match");
            let ok = orbit_product(&b).map(|o| o == twisted_det(&b));
            t.result(ok, || json!({ "model": "asai", "n": n, "twist": twist }));
        }
    }
    for m in 1..=4 {
        for n in 1..=4 {
            for over in [Over::F, Over::E] {
                let b = rs_model(m, n, &symbols("a", m), &symbols("b", n), over)
                    .expect("sizes match");
                let ok = orbit_product(&b).map(|o| o == twisted_det(&b));
                t.result(ok, || json!({ "model": "rankin-selberg", "m": m, "n": n, "over": format!("{over:?}") }));
            }
        }
    }
    for (g, place) in all_families() {
        let mut thetas: Vec<Option<Vec<usize>>> =
            maximal_thetas(g).into_iter().map(Some).collect();
        thetas.push(None);
        for theta in thetas {
            let blocks = symbolic_rep(g, place, theta.clone()).and_then(|r| r.blocks());
            let ok = blocks.and_then(|bs| {
                bs.iter()
                    .map(|b| orbit_product(b).map(|o| o == twisted_det(b)))
                    .try_fold(true, |acc, x| x.map(|x| acc && x))
            });
            t.result(ok, || {
                json!({ "group": g.to_string(), "place": place.to_string(), "theta": theta.as_deref().map(one_based) })
            });
        }
    }
}

fn all_families() -> Vec<(GroupDescriptor, Algebra)> {
    let mut out = Vec::new();
    for n in 2..=5 {
        out.push((GroupDescriptor::Unitary(n), Algebra::Inert));
        out.push((GroupDescriptor::Unitary(n), Algebra::Split));
    }
    for n in 1..=4 {
        for place in [Algebra::Base, Algebra::Inert, Algebra::Split] {
            out.push((GroupDescriptor::ResGl(n), place));
        }
    }
    out
}

fn asai(t: &mut Tally) {
    for n in 1..=4u32 {
        let r = symbolic_rep(GroupDescriptor::ResGl(n), Algebra::Inert, None);
        let f = r.and_then(|r| rs_asai_factorization(&r));
        let ok = f.as_ref().map(|f| f.holds).map_err(Clone::clone);
        t.result(ok, || json!({ "n": n, "factors": f.ok().map(|f| json!(f)) }));
    }
    let a = LaurentPoly::var("a1");
    let t2 = LaurentPoly::monomial(Rat::from_integer(1.into()), &[(Var::t(), 2)]);
    let t1 = LaurentPoly::var("t");
    let expect_rs = RationalFunction::from_poly(LaurentPoly::one().sub(&a.mul(&a).mul(&t2)))
        .recip()
        .expect("nonzero");
    let expect_asai = RationalFunction::from_poly(LaurentPoly::one().sub(&a.mul(&t1)))
        .recip()
        .expect("nonzero");
    let expect_twisted = RationalFunction::from_poly(LaurentPoly::one().add(&a.mul(&t1)))
        .recip()
        .expect("nonzero");
    let r = symbolic_rep(GroupDescriptor::ResGl(1), Algebra::Inert, None).expect("valid");
    let f = rs_asai_factorization(&r).expect("valid");
    t.check(
        f.rankin_selberg == expect_rs && f.asai == expect_asai && f.twisted_asai == expect_twisted,
        || json!({ "n": 1, "factors": f }),
    );
}

fn borel_families(opts: &VerifyOptions) -> Vec<(GroupDescriptor, Algebra)> {
    let mut out = Vec::new();
    for n in 2..=5 {
        out.push((GroupDescriptor::Unitary(n), Algebra::Inert));
    }
    for n in 2..=4 {
        for place in [Algebra::Base, Algebra::Inert, Algebra::Split] {
            out.push((GroupDescriptor::ResGl(n), place));
        }
    }
    out.retain(|(g, _)| group_filter(opts, *g));
    out
}

fn multiplicativity(t: &mut Tally, opts: &VerifyOptions) {
    let mut details = Vec::new();
    for (g, place) in borel_families(opts) {
        for theta in maximal_thetas(g) {
            for c in [0, 1] {
                let report = symbolic_rep(g, place, Some(theta.clone()))
                    .and_then(|r| check_multiplicativity(&r.with_conductor(c)));
                let ok = report.as_ref().map(|r| r.holds).map_err(Clone::clone);
                t.result(ok, || {
                    json!({ "group": g.to_string(), "place": place.to_string(), "theta": one_based(&theta), "conductor": c, "report": report.as_ref().ok() })
                });
                if opts.group.is_some() {
                    if let Ok(r) = report {
                        details.push(json!({ "place": place.to_string(), "conductor": c, "report": r }));
                    }
                }
            }
        }
    }
    if opts.group.is_some() {
        t.details = Value::Array(details);
    }
}

fn functional_equation(t: &mut Tally, opts: &VerifyOptions) {
    for (g, place) in all_families()
        .into_iter()
        .filter(|(g, _)| group_filter(opts, *g))
    {
        let mut thetas: Vec<Option<Vec<usize>>> =
            maximal_thetas(g).into_iter().map(Some).collect();
        thetas.push(None);
        for theta in thetas {
            for c in [0, 1, -2] {
                let Ok(rep) = symbolic_rep(g, place, theta.clone()) else {
                    t.check(false, || json!({ "group": g.to_string(), "error": "construction" }));
                    continue;
                };
                let rep = rep.with_conductor(c);
                for i in 1..=rep.level_count().unwrap_or(0) {
                    let r = check_functional_equation(&rep, i);
                    let ok = r.as_ref().map(|r| r.holds).map_err(Clone::clone);
                    t.result(ok, || {
                        json!({ "group": g.to_string(), "place": place.to_string(), "theta": theta.as_deref().map(one_based), "level": i, "conductor": c, "witness": r.ok().and_then(|r| r.witness) })
                    });
                }
            }
        }
    }
    // Conductor dependence at rank one: gamma(psi^a) / gamma(psi) = chi^k q^{k(1/2 - s)}.
    let base = symbolic_rep(GroupDescriptor::ResGl(1), Algebra::Base, None).expect("valid");
    let g0 = gamma_factor(&base, 1).expect("valid");
    for k in -3..=3 {
        let gk = gamma_factor(&base.clone().with_conductor(k), 1).expect("valid");
        let expect = RationalFunction::from_poly(LaurentPoly::monomial(
            Rat::from_integer(1.into()),
            &[(Var::new("a1"), k), (Var::sqrt_q(), k), (Var::t(), k)],
        ));
        let ratio = gk.gamma.div(&g0.gamma).expect("nonzero");
        let ok = base.q.agree(&ratio, &expect);
        t.result(ok, || json!({ "conductor": k, "ratio": ratio }));
    }
    // A perturbed gamma must fail with a non-unit witness.
    let d = crate::localfactors::dual_gamma_factor(&base, 1).expect("valid");
    let corrupted = g0
        .gamma
        .mul(&RationalFunction::from_poly(LaurentPoly::one().add(&LaurentPoly::var("t"))));
    let prod = functional_equation_product(&base.q, &corrupted, &d.gamma);
    let ok = prod.map(|p| !p.is_one());
    t.result(ok, || json!({ "negative_control": "perturbed gamma accepted" }));
}

fn base_change(t: &mut Tally, opts: &VerifyOptions) {
    for big_n in 2..=5u32 {
        let g = GroupDescriptor::Unitary(big_n);
        if !group_filter(opts, g) {
            continue;
        }
        for m in 1..=3u32 {
            for place in [Algebra::Inert, Algebra::Split] {
                for c in [0, 1] {
                    let pi = symbolic_rep(g, place, None).map(|r| r.with_conductor(c));
                    let n = expected_parameter_count(GroupDescriptor::ResGl(m), place);
                    let mut satake = symbolic_class("c", n);
                    if place == Algebra::Split {
                        satake.second = Some(symbolic_class("d", n).values);
                    }
                    let tau = UnramifiedRep::new(GroupDescriptor::ResGl(m), place, satake, None);
                    let report = pi.and_then(|pi| tau.and_then(|tau| verify_bc_preserves(&pi, &tau)));
                    let ok = report.as_ref().map(|r| r.holds).map_err(Clone::clone);
                    t.result(ok, || {
                        json!({ "group": g.to_string(), "m": m, "place": place.to_string(), "conductor": c, "report": report.as_ref().ok() })
                    });
                }
            }
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> SatakeValue {
    let den = rng.gen_range(2..=997i64);
    let num = rng.gen_range(0..den);
    SatakeValue::Numeric(BigComplex::root_of_unity(num, den, DEFAULT_PRECISION))
}

/// Families for the randomized temperedness trials: group, place, theta,
/// levels.
fn tempered_families() -> Vec<(&'static str, GroupDescriptor, Algebra, Option<Vec<usize>>)> {
    vec![
        ("resGL1 standard", GroupDescriptor::ResGl(1), Algebra::Base, None),
        ("resGL3 inert standard", GroupDescriptor::ResGl(3), Algebra::Inert, None),
        ("Asai n=3 (U6 Siegel)", GroupDescriptor::Unitary(6), Algebra::Inert, Some(vec![0, 1])),
        ("U3 Borel", GroupDescriptor::Unitary(3), Algebra::Inert, Some(vec![])),
        ("U5, GL1 x U3", GroupDescriptor::Unitary(5), Algebra::Inert, Some(vec![1])),
        ("U4 split, GL1 x GL1 x GL2", GroupDescriptor::Unitary(4), Algebra::Split, Some(vec![1])),
        ("resGL4 split, GL2 x GL2", GroupDescriptor::ResGl(4), Algebra::Split, Some(vec![0, 2])),
        ("U5 standard", GroupDescriptor::Unitary(5), Algebra::Inert, None),
    ]
}

fn temperedness(t: &mut Tally, opts: &VerifyOptions) {
    let tol = 1e-9;
    let families = tempered_families();
    let results: Vec<(usize, Vec<(bool, Value)>)> = std::thread::scope(|s| {
        let handles: Vec<_> = families
            .iter()
            .enumerate()
            .map(|(k, (name, g, place, theta))| {
                let seed = opts.seed.wrapping_add(k as u64);
                let trials = opts.trials;
                s.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let mut out = Vec::new();
                    for trial in 0..trials {
                        let n = expected_parameter_count(*g, *place);
                        let mut satake = SatakeClass::new((0..n).map(|_| random_unit(&mut rng)).collect());
                        if *place == Algebra::Split && matches!(g, GroupDescriptor::ResGl(_)) {
                            satake.second = Some((0..n).map(|_| random_unit(&mut rng)).collect());
                        }
                        let rep = UnramifiedRep::new(*g, *place, satake, theta.clone());
                        let levels = rep.as_ref().map(|r| r.level_count().unwrap_or(0)).unwrap_or(0);
                        for i in 1..=levels.max(1) {
                            let r = rep.as_ref().map_err(Clone::clone).and_then(|r| check_temperedness(r, i, tol));
                            let ok = r.as_ref().map(|r| r.tempered).unwrap_or(false);
                            let w = json!({ "family": name, "trial": trial, "level": i, "report": r.as_ref().ok(), "error": r.as_ref().err().map(|e| e.to_string()) });
                            out.push((ok, w));
                        }
                    }
                    (k, out)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("trial thread")).collect()
    });
    for (_, cases) in results {
        for (ok, w) in cases {
            t.check(ok, || w);
        }
    }
    let counter = UnramifiedRep::new(
        GroupDescriptor::ResGl(1),
        Algebra::Base,
        SatakeClass::new(vec![SatakeValue::rational(Rat::from_integer(2.into()))]),
        None,
    )
    .and_then(|r| check_temperedness(&r, 1, tol));
    let ok = counter.as_ref().map(|r| !r.tempered).map_err(Clone::clone);
    t.result(ok, || json!({ "negative_control": "alpha = 2 not flagged" }));
}

fn toy_global(t: &mut Tally, opts: &VerifyOptions) {
    for q in [2u64, 3, 4, 5] {
        let table = build_place_table(q, 12).expect("prime power");
        let got = partial_zeta(&table, 12).expect("deep enough");
        let want = zeta_closed_form(q, 12);
        t.check(got == want, || json!({ "q": q, "partial_zeta": got.iter().map(|x| x.to_string()).collect::<Vec<_>>() }));
        for n in 1..=8u32 {
            // sum_{d | n} d N_d = q^n
            let total: num_bigint::BigInt = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| necklace_count(q, d) * d)
                .sum();
            let ok = total == num_traits::pow(num_bigint::BigInt::from(q), n as usize);
            t.check(ok, || json!({ "q": q, "degree": n, "necklace_sum": total.to_string() }));
        }
    }
    let q = 2;
    let depth = 4;
    let table = build_place_table(q, depth).expect("prime power");
    let trivial = |_d: u32, _k: u64, _s: Algebra| {
        UnramifiedRep::new(
            GroupDescriptor::ResGl(1),
            Algebra::Base,
            SatakeClass::new(vec![SatakeValue::rational(Rat::from_integer(1.into()))]),
            None,
        )
        .expect("valid")
    };
    let datum = ToyGlobalDatum::fill(&table, depth, trivial).expect("fits");
    let product = partial_l_product(&datum, &table, 1, depth, 1e-9);
    let zeta = partial_zeta(&table, depth).expect("deep enough");
    let ok = product.as_ref().map(|p| {
        p.coefficients.iter().zip(&zeta).all(|(c, z)| {
            let (re, im) = c.to_f64();
            let z: f64 = z.to_string().parse().unwrap_or(f64::NAN);
            (re - z).abs() < 1e-9 && im.abs() < 1e-9
        })
    });
    t.result(ok.map_err(Clone::clone), || json!({ "trivial_datum": "does not reduce to the partial zeta function" }));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let alpha = random_unit(&mut rng);
    let u3 = move |_d: u32, _k: u64, s: Algebra| {
        let values = match s {
            Algebra::Split => vec![SatakeValue::rational(Rat::from_integer(1.into())); 3],
            _ => vec![alpha.clone()],
        };
        UnramifiedRep::new(GroupDescriptor::Unitary(3), s, SatakeClass::new(values), None)
            .expect("valid")
    };
    let datum = ToyGlobalDatum::fill(&table, depth, u3).expect("fits");
    let report = partial_l_product(&datum, &table, 1, depth, 1e-9);
    let ok = report.as_ref().map(|r| r.all_tempered).map_err(Clone::clone);
    t.result(ok, || json!({ "unitary_datum": "a local pole left the unit circle" }));

    let mut bad = datum.clone();
    let nontempered = UnramifiedRep::new(
        GroupDescriptor::Unitary(3),
        Algebra::Inert,
        SatakeClass::new(vec![SatakeValue::rational(Rat::from_integer(2.into()))]),
        None,
    )
    .expect("valid");
    bad.places.insert((1, 0), nontempered);
    let report = partial_l_product(&bad, &table, 1, depth, 1e-9);
    let ok = report.as_ref().map(|r| r.flagged() == vec![(1, 0)]).map_err(Clone::clone);
    t.result(ok, || json!({ "negative_control": "non-tempered place not flagged" }));
}

fn isobaric(t: &mut Tally) {
    for place in [Algebra::Base, Algebra::Inert, Algebra::Split] {
        for sizes in [vec![1], vec![1, 1], vec![2, 1], vec![1, 2, 1], vec![3, 2]] {
            for m in 1..=2u32 {
                let mut next = 1;
                let mut comps = Vec::new();
                let mut all_a = Vec::new();
                let mut all_b = Vec::new();
                for &s in &sizes {
                    let a: Vec<SatakeValue> = (next..next + s).map(|k| SatakeValue::symbol(&format!("a{k}"))).collect();
                    let b: Vec<SatakeValue> = (next..next + s).map(|k| SatakeValue::symbol(&format!("b{k}"))).collect();
                    next += s;
                    all_a.extend(a.clone());
                    all_b.extend(b.clone());
                    let mut satake = SatakeClass::new(a);
                    if place == Algebra::Split {
                        satake.second = Some(b);
                    }
                    comps.push(UnramifiedRep::new(GroupDescriptor::ResGl(s as u32), place, satake, None).expect("valid"));
                }
                let mut whole = SatakeClass::new(all_a);
                if place == Algebra::Split {
                    whole.second = Some(all_b);
                }
                let whole = UnramifiedRep::new(GroupDescriptor::ResGl(next as u32 - 1), place, whole, None).expect("valid");
                let n = m as usize;
                let mut ts = symbolic_class("c", n);
                if place == Algebra::Split {
                    ts.second = Some(symbolic_class("d", n).values);
                }
                let tau = UnramifiedRep::new(GroupDescriptor::ResGl(m), place, ts, None).expect("valid");
                let ok = (|| -> Result<bool> {
                    let joint = isobaric_l(&comps, &tau)?;
                    let concat = isobaric_l(std::slice::from_ref(&whole), &tau)?;
                    let mut singles = RationalFunction::one();
                    for c in &comps {
                        singles = singles.mul(&isobaric_l(std::slice::from_ref(c), &tau)?);
                    }
                    Ok(joint == concat && joint == singles)
                })();
                t.result(ok, || json!({ "place": place.to_string(), "sizes": sizes, "m": m }));
            }
        }
    }
    let ok = (|| -> Result<bool> {
        let a = SatakeValue::symbol("a");
        let one = SatakeValue::rational(Rat::from_integer(1.into()));
        let comps = [
            UnramifiedRep::new(GroupDescriptor::ResGl(2), Algebra::Inert, SatakeClass::new(vec![a.clone(), a.inverse()?]), None)?,
            UnramifiedRep::new(GroupDescriptor::ResGl(1), Algebra::Inert, SatakeClass::new(vec![one.clone()]), None)?,
        ];
        let tau = UnramifiedRep::new(GroupDescriptor::ResGl(1), Algebra::Inert, SatakeClass::new(vec![one]), None)?;
        let u3 = UnramifiedRep::new(GroupDescriptor::Unitary(3), Algebra::Inert, SatakeClass::new(vec![a]), None)?;
        let lift = bc_inert(&u3)?.lift;
        let iso = isobaric_l(&comps, &tau)?;
        Ok(iso == crate::localfactors::l_factor(&lift, 1)? && iso == crate::localfactors::l_factor(&u3, 1)?)
    })();
    t.result(ok, || json!({ "example": "U3 base change lift" }));
}

fn random_poly(rng: &mut ChaCha8Rng, vars: &[Var], terms: usize) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for _ in 0..terms {
        let num: i64 = rng.gen_range(-9..=9);
        let den: i64 = rng.gen_range(1..=5);
        let powers: Vec<(Var, i32)> = vars
            .iter()
            .map(|v| (v.clone(), rng.gen_range(-1..=3)))
            .collect();
        out = out.add(&LaurentPoly::monomial(Rat::new(num.into(), den.into()), &powers));
    }
    out
}

fn random_nonzero_poly(rng: &mut ChaCha8Rng, vars: &[Var], terms: usize) -> LaurentPoly {
    loop {
        let p = random_poly(rng, vars, terms);
        if !p.is_zero() {
            return p;
        }
    }
}

fn round_trip(t: &mut Tally, opts: &VerifyOptions) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let pool = [Var::t(), Var::q(), Var::new("a"), Var::new("b")];
    for trial in 0..1000 {
        let k = rng.gen_range(1..=pool.len());
        let vars = &pool[..k];
        let num = { let k = rng.gen_range(0..=3); random_poly(&mut rng, vars, k) };
        let den = { let k = rng.gen_range(1..=3); random_nonzero_poly(&mut rng, vars, k) };
        let f = rf_reduce(&num, &den).expect("nonzero denominator");
        let text = serde_json::to_string(&f).expect("serializable");
        let back: std::result::Result<RationalFunction, _> = serde_json::from_str(&text);
        t.check(back.as_ref().ok() == Some(&f), || json!({ "trial": trial, "json": text }));
    }
    for trial in 0..200 {
        let vars = &pool[..rng.gen_range(1..=3)];
        let num = { let k = rng.gen_range(1..=3); random_poly(&mut rng, vars, k) };
        let den = { let k = rng.gen_range(1..=3); random_nonzero_poly(&mut rng, vars, k) };
        let f = rf_reduce(&num, &den).expect("nonzero denominator");
        let again = rf_reduce(f.numerator(), f.denominator()).expect("nonzero denominator");
        t.check(again == f, || json!({ "trial": trial, "idempotence": f.to_string() }));
        let c = random_nonzero_poly(&mut rng, vars, 1);
        let g = random_nonzero_poly(&mut rng, vars, 2);
        let scaled = rf_reduce(&num.mul(&c).mul(&g), &den.mul(&c).mul(&g)).expect("nonzero");
        t.check(scaled == f, || {
            json!({ "trial": trial, "scale_invariance": f.to_string(), "scaled": scaled.to_string() })
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn group_restricted_multiplicativity_lists_both_sides() {
        let opts = VerifyOptions {
            group: Some(GroupDescriptor::Unitary(3)),
            ..VerifyOptions::default()
        };
        let r = run_suite(Suite::Multiplicativity, &opts);
        assert!(r.passed, "{r:#?}");
        let first = &r.details[0]["report"]["levels"][0];
        assert!(first.get("determinant_side").is_some());
        assert!(first.get("rank_one_side").is_some());
    }
}
