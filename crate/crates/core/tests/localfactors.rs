use lsfactors::lgroup::{Algebra, SatakeClass};
use lsfactors::localfactors::{
    check_functional_equation, check_multiplicativity, gamma_factor, local_coefficient,
    expected_parameter_count, BaseSize, UnramifiedRep,
};
use lsfactors::rootdata::{build_root_datum, GroupDescriptor};

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

fn rep(group: GroupDescriptor, place: Algebra, theta: Option<Vec<usize>>) -> UnramifiedRep {
    let n = expected_parameter_count(group, place);
    let list = |prefix: &str| {
        let v = names(prefix, n);
        SatakeClass::parse_list(&v.iter().map(String::as_str).collect::<Vec<_>>()).unwrap()
    };
    let mut satake = list("a");
    if place == Algebra::Split && matches!(group, GroupDescriptor::ResGl(_)) {
        satake.second = Some(list("b").values);
    }
    UnramifiedRep::new(group, place, satake, theta).unwrap()
}

fn maximal_thetas(group: GroupDescriptor) -> Vec<Vec<usize>> {
    let d = build_root_datum(group).unwrap();
    (0..d.rank()).map(|r| d.maximal_theta(r)).collect()
}

fn borel_data() -> Vec<(GroupDescriptor, Algebra)> {
    let mut out = Vec::new();
    for n in 2..=5 {
        out.push((GroupDescriptor::Unitary(n), Algebra::Inert));
    }
    for n in 2..=4 {
        for place in [Algebra::Base, Algebra::Inert, Algebra::Split] {
            out.push((GroupDescriptor::ResGl(n), place));
        }
    }
    out
}

#[test]
fn multiplicativity_on_every_maximal_levi() {
    for (group, place) in borel_data() {
        for theta in maximal_thetas(group) {
            for c in [0, 1] {
                let r = rep(group, place, Some(theta.clone())).with_conductor(c);
                let report = check_multiplicativity(&r).unwrap();
                assert!(report.holds, "{group} {place} {theta:?} c={c}: {report:#?}");
            }
        }
    }
}

#[test]
fn functional_equation_for_every_constituent() {
    let mut data = borel_data();
    for n in 2..=5 {
        data.push((GroupDescriptor::Unitary(n), Algebra::Split));
    }
    for (group, place) in data {
        let mut thetas: Vec<Option<Vec<usize>>> =
            maximal_thetas(group).into_iter().map(Some).collect();
        thetas.push(None);
        for theta in thetas {
            for c in [0, 1, -2] {
                let r = rep(group, place, theta.clone()).with_conductor(c);
                for i in 1..=r.level_count().unwrap() {
                    let fe = check_functional_equation(&r, i).unwrap();
                    assert!(fe.holds, "{group} {place} {theta:?} level {i} c={c}: {fe:?}");
                }
            }
        }
    }
}

#[test]
fn numeric_base_sizes() {
    for q in [2u64, 4, 9] {
        let r = rep(GroupDescriptor::Unitary(3), Algebra::Inert, Some(vec![]))
            .with_q(BaseSize::Value(q))
            .with_conductor(1);
        assert!(check_multiplicativity(&r).unwrap().holds);
        assert!(check_functional_equation(&r, 2).unwrap().holds);
        local_coefficient(&r).unwrap();
        gamma_factor(&r, 1).unwrap();
    }
}
