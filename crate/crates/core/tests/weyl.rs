use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use lsfactors::rootdata::{build_root_datum, dot, Family, GroupDescriptor, RelativeRootDatum};
use lsfactors::weyl::{
    check_chain, image_in_base, langlands_decompose, level_partition, longest_element,
    w_zero, weyl_group, WeylElement,
};

use GroupDescriptor::{ResGl, Unitary};

fn subsets(rank: usize) -> Vec<Vec<usize>> {
    (0..1u32 << rank)
        .map(|mask| (0..rank).filter(|j| mask >> j & 1 == 1).collect())
        .collect()
}

/// Word length by breadth-first search over simple reflections.
fn word_lengths(datum: &RelativeRootDatum) -> HashMap<WeylElement, usize> {
    let id = WeylElement::identity(datum.dim());
    let gens: Vec<WeylElement> = (0..datum.rank())
        .map(|j| WeylElement::reflection(datum, j))
        .collect();
    let mut dist = HashMap::from([(id.clone(), 0usize)]);
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        let d = dist[&w];
        for g in &gens {
            let next = g.compose(&w);
            if !dist.contains_key(&next) {
                dist.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
        }
    }
    dist
}

fn negative(datum: &RelativeRootDatum, v: &[i32]) -> bool {
    !datum.is_positive_vector(v)
}

#[test]
fn root_system_shapes() {
    // (group, family, rank, number of roots, Weyl group order)
    let cases = [
        (ResGl(2), Family::A, 1, 2, 2),
        (ResGl(3), Family::A, 2, 6, 6),
        (ResGl(4), Family::A, 3, 12, 24),
        (Unitary(2), Family::C, 1, 2, 2),
        (Unitary(3), Family::BC, 1, 4, 2),
        (Unitary(4), Family::C, 2, 8, 8),
        (Unitary(5), Family::BC, 2, 12, 8),
        (Unitary(6), Family::C, 3, 18, 48),
        (Unitary(7), Family::BC, 3, 24, 48),
    ];
    for (g, fam, rank, nroots, order) in cases {
        let d = build_root_datum(g).unwrap();
        assert_eq!(d.family(), fam, "{g}");
        assert_eq!(d.rank(), rank, "{g}");
        assert_eq!(d.roots().len(), nroots, "{g}");
        assert_eq!(weyl_group(&d).len(), order, "{g}");
        assert_eq!(word_lengths(&d).len(), order, "{g}");
    }
    assert!(build_root_datum(Unitary(1)).is_err());
    assert!(build_root_datum(ResGl(1)).is_err() || build_root_datum(ResGl(1)).unwrap().rank() == 0);
}

#[test]
fn root_axioms() {
    for g in [ResGl(2), ResGl(3), ResGl(4), Unitary(2), Unitary(3), Unitary(4), Unitary(5), Unitary(6), Unitary(7)] {
        let d = build_root_datum(g).unwrap();
        let roots: BTreeSet<Vec<i32>> = d.roots().iter().cloned().collect();
        for k in 0..d.roots().len() {
            let r = d.root(k);
            assert_eq!(dot(r, d.coroot(k)), 2, "{g} {r:?}");
            let neg: Vec<i32> = r.iter().map(|x| -x).collect();
            assert!(roots.contains(&neg));
            // Integrality and closure under reflections.
            for l in 0..d.roots().len() {
                assert!(roots.contains(&reflect(r, d.coroot(k), d.root(l))));
            }
            // Coordinates in the base reproduce the root and have one sign.
            let c = d.coords(k);
            let mut sum = vec![0; d.dim()];
            for (j, cj) in c.iter().enumerate() {
                for (s, x) in sum.iter_mut().zip(d.simple_root(j)) {
                    *s += cj * x;
                }
            }
            assert_eq!(sum.as_slice(), r);
            assert!(c.iter().all(|x| *x >= 0) || c.iter().all(|x| *x <= 0));
        }
        assert_eq!(d.positive_roots().len() * 2, d.roots().len());
    }
}

fn reflect(alpha: &[i32], coroot: &[i32], v: &[i32]) -> Vec<i32> {
    let c = dot(v, coroot);
    v.iter().zip(alpha).map(|(x, a)| x - c * a).collect()
}

#[test]
fn descriptor_text_and_json() {
    for g in [ResGl(3), Unitary(5)] {
        let s = g.to_string();
        assert_eq!(s.parse::<GroupDescriptor>().unwrap(), g);
        let json = serde_json::to_value(g).unwrap();
        assert_eq!(serde_json::from_value::<GroupDescriptor>(json).unwrap(), g);
        let from_str: GroupDescriptor = serde_json::from_value(serde_json::Value::String(s)).unwrap();
        assert_eq!(from_str, g);
    }
    assert!("SO5".parse::<GroupDescriptor>().is_err());
    assert!("U".parse::<GroupDescriptor>().is_err());
}

#[test]
fn lengths_count_inversions() {
    for g in [ResGl(4), Unitary(5), Unitary(6)] {
        let d = build_root_datum(g).unwrap();
        let lengths = word_lengths(&d);
        let full: Vec<usize> = (0..d.rank()).collect();
        let longest = longest_element(&d, &full).unwrap();
        for w in weyl_group(&d) {
            let inversions = d
                .positive_roots()
                .into_iter()
                .filter(|&k| d.is_reduced(k) && negative(&d, &w.apply(d.root(k))))
                .count();
            assert_eq!(w.length(&d), inversions);
            assert_eq!(lengths[&w], inversions, "{g}");
            assert!(w.permutes_roots(&d));
            assert!(w.compose(&w.inverse()).is_identity());
            assert!(w.word_is_consistent(&d));
            assert!(lengths[&w] <= lengths[&longest]);
        }
        let indivisible = d.positive_roots().into_iter().filter(|&k| d.is_reduced(k)).count();
        assert_eq!(lengths[&longest], indivisible);
    }
}

#[test]
fn longest_elements_of_parabolics() {
    for g in [ResGl(4), Unitary(6), Unitary(7)] {
        let d = build_root_datum(g).unwrap();
        for theta in subsets(d.rank()) {
            let wl = longest_element(&d, &theta).unwrap();
            // Sends every positive root of the span negative and fixes
            // positivity outside it.
            for k in d.positive_roots() {
                let img_neg = negative(&d, &wl.apply(d.root(k)));
                assert_eq!(img_neg, d.in_span(k, &theta), "{g} {theta:?}");
            }
            let w0 = w_zero(&d, &theta).unwrap();
            for &j in &theta {
                let img = w0.apply(d.simple_root(j));
                assert!(d.is_positive_vector(&img));
            }
        }
    }
    let d = build_root_datum(Unitary(4)).unwrap();
    assert!(longest_element(&d, &[2]).is_err());
    assert!(longest_element(&d, &[0, 0]).is_err());
}

/// Positive roots outside `theta` inverted by `w`, grouped by the ray of
/// their coordinates on the simple roots outside `theta`; within a ray, by
/// the multiple of the primitive vector.
fn inverted_classes(
    d: &RelativeRootDatum,
    theta: &[usize],
    w: &WeylElement,
) -> BTreeMap<Vec<i32>, BTreeMap<i32, BTreeSet<Vec<i32>>>> {
    let mut out: BTreeMap<Vec<i32>, BTreeMap<i32, BTreeSet<Vec<i32>>>> = BTreeMap::new();
    for k in d.positive_roots() {
        if d.in_span(k, theta) || !negative(d, &w.apply(d.root(k))) {
            continue;
        }
        let key: Vec<i32> = d
            .coords(k)
            .iter()
            .enumerate()
            .filter(|(j, _)| !theta.contains(j))
            .map(|(_, c)| *c)
            .collect();
        let g = key.iter().fold(0, |a, &b| gcd(a, b));
        let ray = key.iter().map(|c| c / g).collect();
        out.entry(ray)
            .or_default()
            .entry(g)
            .or_default()
            .insert(d.root(k).to_vec());
    }
    out
}

fn gcd(a: i32, b: i32) -> i32 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn langlands_lemma_exhaustive() {
    let groups = [ResGl(2), ResGl(3), ResGl(4), Unitary(3), Unitary(4), Unitary(5), Unitary(6)];
    let mut total = 0;
    for g in groups {
        let d = build_root_datum(g).unwrap();
        let lengths = word_lengths(&d);
        let elements = weyl_group(&d);
        for theta in subsets(d.rank()) {
            for w in &elements {
                let Some(theta_prime) = image_in_base(&d, w, &theta) else {
                    continue;
                };
                total += 1;
                let chain = langlands_decompose(&d, &theta, &theta_prime, w).unwrap();
                check_chain(&d, &theta, &theta_prime, w, &chain)
                    .unwrap_or_else(|e| panic!("{g} {theta:?} {w:?}: {e}"));

                assert_eq!(&chain.recompose(d.dim()), w);
                assert_eq!(chain.thetas.first().unwrap(), &theta);
                assert_eq!(chain.thetas.last().unwrap(), &theta_prime);
                let sum: usize = chain.factors.iter().map(|f| lengths[f]).sum();
                assert_eq!(sum, lengths[w], "lengths add up");
                for (j, f) in chain.factors.iter().enumerate() {
                    let cur = &chain.thetas[j];
                    assert!(!cur.contains(&chain.alphas[j]));
                    let mut omega = cur.clone();
                    omega.push(chain.alphas[j]);
                    omega.sort_unstable();
                    let expect = longest_element(&d, &omega)
                        .unwrap()
                        .compose(&longest_element(&d, cur).unwrap());
                    assert_eq!(f, &expect);
                    assert_eq!(image_in_base(&d, f, cur).as_ref(), Some(&chain.thetas[j + 1]));
                }

                let classes = inverted_classes(&d, &theta, w);
                assert_eq!(chain.blocks.len(), classes.len(), "{g} {theta:?}");
                let mut seen = BTreeSet::new();
                for b in &chain.blocks {
                    let members: BTreeSet<Vec<i32>> = b.members.iter().cloned().collect();
                    let ray = classes
                        .iter()
                        .find(|(_, by_mult)| by_mult.values().next() == Some(&members))
                        .map(|(ray, _)| ray.clone())
                        .unwrap_or_else(|| panic!("{g} {theta:?}: block {members:?} is not a class"));
                    assert!(seen.insert(ray), "classes are distinct");
                }
            }
        }
    }
    assert_eq!(total, 171);
}

#[test]
fn non_associate_input_is_rejected() {
    let d = build_root_datum(Unitary(4)).unwrap();
    let id = WeylElement::identity(d.dim());
    assert!(langlands_decompose(&d, &[0], &[1], &id).is_err());
    let s1 = WeylElement::reflection(&d, 1);
    assert!(langlands_decompose(&d, &[0], &[0], &s1).is_err());
}

#[test]
fn level_sets_of_maximal_levis() {
    // U3 Borel: e1 at level 1, 2e1 at level 2.
    let d = build_root_datum(Unitary(3)).unwrap();
    let lp = level_partition(&d, &[], &[]).unwrap();
    assert_eq!(lp.m_r, 2);
    assert_eq!(lp.sets[&1].len(), 1);
    assert_eq!(lp.sets[&2].len(), 1);
    assert!(!lp.sets[&2][0].reduced);

    // Siegel Levi of U4: one level.
    let d = build_root_datum(Unitary(4)).unwrap();
    let lp = level_partition(&d, &[0], &[0]).unwrap();
    assert_eq!(lp.m_r, 1);

    // Every maximal Levi: levels are the removed-root coefficients and
    // cover 1..=m_r.
    for g in [ResGl(4), Unitary(5), Unitary(6), Unitary(7)] {
        let d = build_root_datum(g).unwrap();
        for r in 0..d.rank() {
            let theta = d.maximal_theta(r);
            let lp = level_partition(&d, &theta, &theta).unwrap();
            let max_coef = d
                .positive_roots()
                .into_iter()
                .map(|k| d.coords(k)[r])
                .max()
                .unwrap();
            assert_eq!(lp.m_r as i32, max_coef, "{g} r={r}");
            let levels: Vec<u32> = lp.sets.keys().copied().collect();
            assert_eq!(levels, (1..=lp.m_r).collect::<Vec<_>>());
        }
    }
    assert!(level_partition(&d, &[], &[]).is_err());
}
