//! Human-readable rendering of rational functions in `t`.

use lsfactors::exactalg::{LaurentPoly, Rat, RationalFunction, Var};
use num_traits::{One, Signed, ToPrimitive};

/// `p = unit * prod (1 - m_i t^{k_i})^{e_i}` with monomial `unit` and `m_i`.
struct Split {
    unit: LaurentPoly,
    factors: Vec<(LaurentPoly, i32, u32)>,
}

fn t_mono(k: i32) -> LaurentPoly {
    LaurentPoly::monomial(Rat::one(), &[(Var::t(), k)])
}

fn binomial(m: &LaurentPoly, k: i32) -> LaurentPoly {
    LaurentPoly::one().sub(&m.mul(&t_mono(k)))
}

fn split(p: &LaurentPoly) -> Option<Split> {
    let t = Var::t();
    let coeffs = p.coefficients_in(&t);
    let (&lo, c0) = coeffs.iter().next()?;
    c0.as_monomial()?;
    let unit = c0.mul(&t_mono(lo));
    let mut rest = p.exact_div(&unit)?;
    let mut factors: Vec<(LaurentPoly, i32, u32)> = Vec::new();
    while !rest.is_one() {
        let coeffs = rest.coefficients_in(&t);
        let (&k, c) = coeffs.iter().find(|(&k, _)| k > 0)?;
        let found = c.terms().find_map(|(exps, coef)| {
            let mono = LaurentPoly::from_terms(c.vars().to_vec(), vec![(exps.to_vec(), coef.clone())]);
            let reps = coef.abs().to_integer().to_u32().unwrap_or(1).clamp(1, 8);
            (1..=reps).find_map(|j| {
                let m = mono.neg().scale(&Rat::new(1.into(), (j as i64).into()));
                rest.exact_div(&binomial(&m, k)).map(|q| (m, q))
            })
        });
        let (m, quotient) = found?;
        rest = quotient;
        match factors.iter_mut().find(|(f, e, _)| *f == m && *e == k) {
            Some((_, _, n)) => *n += 1,
            None => factors.push((m, k, 1)),
        }
    }
    Some(Split { unit, factors })
}

fn show_binomial(m: &LaurentPoly, k: i32) -> String {
    let tk = if k == 1 { "t".to_string() } else { format!("t^{k}") };
    let ms = m.to_string();
    let (sign, body) = match ms.strip_prefix('-') {
        Some(rest) => ("+", rest.to_string()),
        None => ("-", ms),
    };
    if body == "1" {
        format!("(1 {sign} {tk})")
    } else {
        format!("(1 {sign} {body}*{tk})")
    }
}

fn show_product(unit: &LaurentPoly, factors: &[(LaurentPoly, i32, u32)]) -> (String, usize) {
    let mut parts = Vec::new();
    for (m, k, e) in factors {
        let b = show_binomial(m, *k);
        parts.push(if *e == 1 { b } else { format!("{b}^{e}") });
    }
    let body = parts.join("*");
    let count = parts.len() + usize::from(!unit.is_one());
    let us = unit.to_string();
    let text = match (us.as_str(), body.is_empty()) {
        (_, true) => us,
        ("1", false) => body,
        ("-1", false) => format!("-{body}"),
        (_, false) => format!("{us}*{body}"),
    };
    (text, count)
}

/// Products of `(1 - m t^k)` when numerator and denominator split over
/// monomials, else the expanded form.
pub fn rational(f: &RationalFunction) -> String {
    let (num, den) = (split(f.numerator()), split(f.denominator()));
    let (num_text, den_text, den_count) = match (num, den) {
        (Some(n), Some(d)) => {
            let unit = n.unit.exact_div(&d.unit).expect("monomials divide");
            let (nt, _) = show_product(&unit, &n.factors);
            let (dt, dc) = show_product(&LaurentPoly::one(), &d.factors);
            (nt, dt, dc)
        }
        (Some(n), None) => {
            let (nt, _) = show_product(&n.unit, &n.factors);
            (nt, format!("({})", f.denominator()), 1)
        }
        (None, Some(d)) => {
            let (dt, dc) = show_product(&d.unit, &d.factors);
            (format!("({})", f.numerator()), dt, dc)
        }
        (None, None) => (
            format!("({})", f.numerator()),
            format!("({})", f.denominator()),
            1,
        ),
    };
    match (den_text.as_str(), den_count) {
        ("1", _) => num_text,
        (_, 0 | 1) => format!("{num_text} / {den_text}"),
        _ => format!("{num_text} / ({den_text})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lsfactors::exactalg::parse_rf;

    #[test]
    fn factored_forms() {
        let f = parse_rf("1/((1 - a*t)*(1 + b*t^2))").unwrap();
        let s = rational(&f);
        assert!(s.starts_with("1 / ("), "{s}");
        assert!(s.contains("(1 - a*t)") && s.contains("(1 + b*t^2)"), "{s}");
        let g = parse_rf("1/(1 - a*t)^2").unwrap();
        assert_eq!(rational(&g), "1 / (1 - a*t)^2");
        let h = parse_rf("1/(1 - a*t - b*t^2)").unwrap();
        assert!(rational(&h).contains("a*t"), "{}", rational(&h));
    }
}
