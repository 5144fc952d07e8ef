use std::collections::BTreeMap;

use lsfactors::exactalg::{
    gcd, parse_poly, parse_rf, rf_reduce, LaurentPoly, Rat, RationalFunction, Var,
};
use num_bigint::BigInt;
use proptest::prelude::*;

const VARS: [&str; 3] = ["a", "b", "t"];

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn poly_strategy(max_terms: usize, lo: i32) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(
        (
            prop::array::uniform3(lo..3i32),
            (-5i64..=5).prop_filter("nonzero", |c| *c != 0),
            1i64..4,
        ),
        1..=max_terms,
    )
    .prop_map(|terms| {
        let vars: Vec<Var> = VARS.iter().map(|v| Var::new(v)).collect();
        let terms = terms
            .into_iter()
            .map(|(e, n, d)| (e.to_vec(), rat(n, d)))
            .collect();
        LaurentPoly::from_terms(vars, terms)
    })
}

fn nonzero_poly(max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    poly_strategy(max_terms, -2).prop_filter("nonzero", |p| !p.is_zero())
}

fn polynomial(max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    poly_strategy(max_terms, 0).prop_filter("nonzero", |p| !p.is_zero())
}

fn is_monomial(p: &LaurentPoly) -> bool {
    p.as_monomial().is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_laws(p in poly_strategy(4, -2), q in poly_strategy(4, -2), r in poly_strategy(3, -2)) {
        prop_assert_eq!(p.add(&q), q.add(&p));
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert!(p.sub(&p).is_zero());
        prop_assert_eq!(p.pow(2), p.mul(&p));
    }

    #[test]
    fn exact_division_inverts_multiplication(p in poly_strategy(4, -2), q in nonzero_poly(3)) {
        let prod = p.mul(&q);
        prop_assert_eq!(prod.exact_div(&q), Some(p.clone()));
        if !is_monomial(&q) && !p.is_zero() {
            let off = prod.add(&LaurentPoly::var("c"));
            prop_assert_eq!(off.exact_div(&q), None);
        }
    }

    #[test]
    fn gcd_contains_common_factor(p in polynomial(3), q in polynomial(3), r in polynomial(3)) {
        let g = gcd(&p.mul(&r), &q.mul(&r));
        prop_assert!(g.exact_div(&r).is_some(), "gcd {} misses {}", g, r);
        prop_assert!(p.mul(&r).exact_div(&g).is_some());
        prop_assert!(q.mul(&r).exact_div(&g).is_some());
    }

    #[test]
    fn reduction_is_canonical(p in nonzero_poly(3), q in nonzero_poly(3), r in nonzero_poly(2),
                              k in (-7i64..=7).prop_filter("nonzero", |k| *k != 0)) {
        let f = rf_reduce(&p, &q).unwrap();
        let g = rf_reduce(&p.mul(&r), &q.mul(&r)).unwrap();
        prop_assert_eq!(&f, &g);
        let c = rat(k, 3);
        let h = rf_reduce(&p.scale(&c), &q.scale(&c)).unwrap();
        prop_assert_eq!(&f, &h);
        let again = rf_reduce(f.numerator(), f.denominator()).unwrap();
        prop_assert_eq!(&f, &again);
        prop_assert_eq!(f.denominator().leading_coefficient(), Some(&rat(1, 1)));
        prop_assert!(f.denominator().is_polynomial());
        let lone = f.denominator().min_exponents();
        prop_assert!(lone.iter().all(|e| *e == 0), "denominator {} has a monomial factor", f.denominator());
    }

    #[test]
    fn field_operations(p in nonzero_poly(3), q in nonzero_poly(3), r in nonzero_poly(3), s in nonzero_poly(2)) {
        let f = rf_reduce(&p, &q).unwrap();
        let g = rf_reduce(&r, &s).unwrap();
        prop_assert_eq!(f.add(&g).unwrap().sub(&g).unwrap(), f.clone());
        prop_assert_eq!(f.mul(&g).div(&g).unwrap(), f.clone());
        prop_assert!(f.mul(&f.recip().unwrap()).is_one());
        prop_assert_eq!(f.powi(-2).unwrap(), f.mul(&f).recip().unwrap());
    }

    #[test]
    fn text_and_json_round_trip(p in nonzero_poly(4), q in nonzero_poly(3)) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p.clone());
        let f = rf_reduce(&p, &q).unwrap();
        prop_assert_eq!(parse_rf(&f.to_string()).unwrap(), f.clone());
        let json = serde_json::to_string(&f).unwrap();
        let back: RationalFunction = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn substitution_is_a_homomorphism(p in nonzero_poly(3), q in nonzero_poly(3), e in -2i32..3) {
        let mut map = BTreeMap::new();
        map.insert(Var::new("a"), LaurentPoly::monomial(rat(-2, 1), &[(Var::new("b"), e), (Var::t(), 1)]));
        let sp = p.substitute_monomials(&map).unwrap();
        let sq = q.substitute_monomials(&map).unwrap();
        prop_assert_eq!(p.mul(&q).substitute_monomials(&map).unwrap(), sp.mul(&sq));
        prop_assert_eq!(p.add(&q).substitute_monomials(&map).unwrap(), sp.add(&sq));
    }
}

#[test]
fn canonical_form_examples() {
    let f = parse_rf("(2*a*t - 2*a^2*t^2)/(4 - 4*a^2*t^2)").unwrap();
    assert_eq!(f, parse_rf("a*t/(2*(1 + a*t))").unwrap());
    let g = parse_rf("t^-3/(t^-1 - a)").unwrap();
    assert_eq!(g, parse_rf("t^-2/(1 - a*t)").unwrap());
    assert_eq!(g.denominator(), &parse_poly("a*t - 1").unwrap());
    assert!(rf_reduce(&LaurentPoly::one(), &LaurentPoly::zero()).is_err());
    assert!(parse_rf("1/(a - a)").is_err());
    assert!(parse_rf("a + ").is_err());
}
