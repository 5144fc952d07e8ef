//! Weyl group elements, Langlands' decomposition of `w` into rank-one
//! steps, block classes, level partitions, and the induction subgroup.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::Rat;
use crate::rootdata::{check_subset, dot, gram_coefficients, Family, RelativeRootDatum};

/// An orthogonal integer matrix permuting the roots, with an optional word
/// in the simple reflections (applied right to left).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeylElement {
    pub matrix: Vec<Vec<i32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<usize>>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

impl std::hash::Hash for WeylElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.matrix.hash(state);
    }
}

impl WeylElement {
    pub fn identity(dim: usize) -> Self {
        let matrix = (0..dim)
            .map(|i| (0..dim).map(|j| (i == j) as i32).collect())
            .collect();
        WeylElement {
            matrix,
            word: Some(Vec::new()),
        }
    }

    pub fn reflection(datum: &RelativeRootDatum, j: usize) -> Self {
        let dim = datum.dim();
        let cols: Vec<Vec<i32>> = (0..dim)
            .map(|c| {
                let mut e = vec![0; dim];
                e[c] = 1;
                datum.reflect(j, &e)
            })
            .collect();
        let matrix = (0..dim)
            .map(|i| (0..dim).map(|c| cols[c][i]).collect())
            .collect();
        WeylElement {
            matrix,
            word: Some(vec![j]),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, v: &[i32]) -> Vec<i32> {
        self.matrix.iter().map(|row| dot(row, v)).collect()
    }

    /// `self * other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.dim();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        let word = match (&self.word, &other.word) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        WeylElement { matrix, word }
    }

    /// Transpose, which is the inverse for orthogonal matrices.
    pub fn inverse(&self) -> Self {
        let n = self.dim();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| self.matrix[j][i]).collect())
            .collect();
        let word = self.word.as_ref().map(|w| w.iter().rev().copied().collect());
        WeylElement { matrix, word }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, x)| *x == (i == j) as i32))
    }

    /// Product of the simple reflections in `word`, applied right to left.
    pub fn from_word(datum: &RelativeRootDatum, word: &[usize]) -> Self {
        word.iter().fold(WeylElement::identity(datum.dim()), |acc, &j| {
            acc.compose(&WeylElement::reflection(datum, j))
        })
    }

    /// Whether the matrix sends roots to roots.
    pub fn permutes_roots(&self, datum: &RelativeRootDatum) -> bool {
        datum
            .roots()
            .iter()
            .all(|r| datum.index_of(&self.apply(r)).is_some())
    }

    /// Whether `word`, when present, evaluates to `matrix`.
    pub fn word_is_consistent(&self, datum: &RelativeRootDatum) -> bool {
        match &self.word {
            Some(w) => WeylElement::from_word(datum, w) == *self,
            None => true,
        }
    }

    fn sends_positive(&self, datum: &RelativeRootDatum, k: usize) -> bool {
        datum.is_positive_vector(&self.apply(datum.root(k)))
    }

    /// Number of positive reduced roots sent to negative roots.
    pub fn length(&self, datum: &RelativeRootDatum) -> usize {
        datum
            .positive_roots()
            .into_iter()
            .filter(|&k| datum.is_reduced(k) && !self.sends_positive(datum, k))
            .count()
    }
}

/// Every element of the Weyl group, by breadth-first search; words are
/// reduced.
pub fn weyl_group(datum: &RelativeRootDatum) -> Vec<WeylElement> {
    let gens: Vec<WeylElement> = (0..datum.rank())
        .map(|j| WeylElement::reflection(datum, j))
        .collect();
    let start = WeylElement::identity(datum.dim());
    let mut seen: HashSet<Vec<Vec<i32>>> = HashSet::new();
    seen.insert(start.matrix.clone());
    let mut out = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for g in &gens {
            let next = w.compose(g);
            if seen.insert(next.matrix.clone()) {
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    out
}

/// Longest element of the parabolic subgroup generated by `theta`.
pub fn longest_element(datum: &RelativeRootDatum, theta: &[usize]) -> Result<WeylElement> {
    check_subset(datum, theta)?;
    Ok(longest_unchecked(datum, theta))
}

fn longest_unchecked(datum: &RelativeRootDatum, theta: &[usize]) -> WeylElement {
    let mut w = WeylElement::identity(datum.dim());
    loop {
        let next = theta
            .iter()
            .copied()
            .find(|&j| w.sends_positive(datum, datum.simple()[j]));
        match next {
            Some(j) => w = w.compose(&WeylElement::reflection(datum, j)),
            None => return w,
        }
    }
}

/// `w_l * w_{l,theta}`.
pub fn w_zero(datum: &RelativeRootDatum, theta: &[usize]) -> Result<WeylElement> {
    let full: Vec<usize> = (0..datum.rank()).collect();
    Ok(longest_element(datum, &full)?.compose(&longest_element(datum, theta)?))
}

/// Image of a subset of the base, when it stays inside the base.
pub fn image_in_base(
    datum: &RelativeRootDatum,
    w: &WeylElement,
    theta: &[usize],
) -> Option<Vec<usize>> {
    let mut out: Vec<usize> = theta
        .iter()
        .map(|&j| datum.simple_index_of(&w.apply(datum.simple_root(j))))
        .collect::<Option<_>>()?;
    out.sort_unstable();
    Some(out)
}

/// Orthogonal projection away from the span of a set of simple roots, used
/// to compare restrictions to the split center of a Levi subgroup.
#[derive(Clone, Debug)]
pub struct Restriction {
    basis: Vec<Vec<i32>>,
}

impl Restriction {
    pub fn new(datum: &RelativeRootDatum, theta: &[usize]) -> Self {
        Restriction {
            basis: theta.iter().map(|&j| datum.simple_root(j).to_vec()).collect(),
        }
    }

    /// Component of `v` orthogonal to the span of the Levi roots.
    pub fn project(&self, v: &[i32]) -> Vec<Rat> {
        let mut out: Vec<Rat> = v.iter().map(|x| Rat::from_integer((*x).into())).collect();
        for (ck, b) in gram_coefficients(&self.basis, v).iter().zip(&self.basis) {
            for (x, bi) in out.iter_mut().zip(b) {
                *x -= ck * Rat::from_integer((*bi).into());
            }
        }
        out
    }
}

/// Positive roots with a common restriction to the split center of
/// `M_{theta0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockClass {
    pub members: Vec<Vec<i32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin_index: Option<usize>,
    pub reduced: bool,
    #[serde(skip)]
    pub restriction: Vec<Rat>,
}

/// Groups positive roots outside the span of `theta0` that `w` makes
/// negative; all classes are kept, reduced or not.
pub fn block_classes(
    datum: &RelativeRootDatum,
    theta0: &[usize],
    w: &WeylElement,
) -> Vec<BlockClass> {
    let res = Restriction::new(datum, theta0);
    let outside: Vec<usize> = datum
        .positive_roots()
        .into_iter()
        .filter(|&k| !datum.in_span(k, theta0))
        .collect();
    let all_restrictions: Vec<Vec<Rat>> =
        outside.iter().map(|&k| res.project(datum.root(k))).collect();
    let mut classes: Vec<BlockClass> = Vec::new();
    for (&k, proj) in outside.iter().zip(&all_restrictions) {
        if w.sends_positive(datum, k) {
            continue;
        }
        match classes.iter_mut().find(|c| c.restriction == *proj) {
            Some(c) => c.members.push(datum.root(k).to_vec()),
            None => {
                let two = Rat::from_integer(2.into());
                let half: Vec<Rat> = proj.iter().map(|x| x / &two).collect();
                classes.push(BlockClass {
                    members: vec![datum.root(k).to_vec()],
                    level: None,
                    origin_index: None,
                    reduced: !all_restrictions.contains(&half),
                    restriction: proj.clone(),
                });
            }
        }
    }
    classes
}

/// Output of Langlands' lemma.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionChain {
    pub thetas: Vec<Vec<usize>>,
    pub alphas: Vec<usize>,
    pub factors: Vec<WeylElement>,
    pub blocks: Vec<BlockClass>,
}

impl DecompositionChain {
    /// `w_{d-1} ... w_1`.
    pub fn recompose(&self, dim: usize) -> WeylElement {
        self.factors
            .iter()
            .fold(WeylElement::identity(dim), |acc, f| f.compose(&acc))
    }
}

fn check_associate(
    datum: &RelativeRootDatum,
    theta: &[usize],
    theta_prime: &[usize],
    w: &WeylElement,
) -> Result<()> {
    check_subset(datum, theta)?;
    check_subset(datum, theta_prime)?;
    if !w.permutes_roots(datum) {
        return Err(Error::NotAssociate("matrix does not permute the roots".into()));
    }
    let mut tp = theta_prime.to_vec();
    tp.sort_unstable();
    match image_in_base(datum, w, theta) {
        Some(img) if img == tp => Ok(()),
        _ => Err(Error::NotAssociate(format!(
            "w(theta) is not theta' = {theta_prime:?}"
        ))),
    }
}

/// Langlands' lemma: factors `w` in `W(theta, theta')` as `w_{d-1} ... w_1`
/// with `w_j = w_{l,Omega_j} w_{l,theta_j}`. At each step the smallest
/// simple root outside `theta_j` made negative by the remaining element is
/// chosen.
pub fn langlands_decompose(
    datum: &RelativeRootDatum,
    theta: &[usize],
    theta_prime: &[usize],
    w: &WeylElement,
) -> Result<DecompositionChain> {
    check_associate(datum, theta, theta_prime, w)?;
    let mut cur_theta = theta.to_vec();
    cur_theta.sort_unstable();
    let mut rest = w.clone();
    let mut prefix = WeylElement::identity(datum.dim());
    let mut chain = DecompositionChain {
        thetas: vec![cur_theta.clone()],
        alphas: Vec::new(),
        factors: Vec::new(),
        blocks: Vec::new(),
    };
    let res = Restriction::new(datum, &cur_theta);
    let max_steps = datum.positive_roots().len() + 1;
    while !rest.is_identity() {
        if chain.factors.len() > max_steps {
            return Err(Error::NotAssociate("decomposition did not terminate".into()));
        }
        let alpha = (0..datum.rank())
            .filter(|j| !cur_theta.contains(j))
            .find(|&j| !rest.sends_positive(datum, datum.simple()[j]))
            .ok_or_else(|| Error::NotAssociate("no simple root is made negative".into()))?;
        let mut omega = cur_theta.clone();
        omega.push(alpha);
        omega.sort_unstable();
        let wj = longest_unchecked(datum, &omega).compose(&longest_unchecked(datum, &cur_theta));
        let next_theta = image_in_base(datum, &wj, &cur_theta)
            .ok_or_else(|| Error::NotAssociate("w_j(theta_j) left the base".into()))?;
        let beta = prefix.inverse().apply(datum.simple_root(alpha));
        let k = datum.index_of(&beta).expect("image of a root");
        chain.blocks.push(BlockClass {
            members: vec![beta.clone()],
            level: None,
            origin_index: Some(chain.factors.len() + 1),
            reduced: datum.is_reduced(k),
            restriction: res.project(&beta),
        });
        rest = rest.compose(&wj.inverse());
        prefix = wj.compose(&prefix);
        chain.alphas.push(alpha);
        chain.factors.push(wj);
        chain.thetas.push(next_theta.clone());
        cur_theta = next_theta;
    }
    let classes = block_classes(datum, theta, w);
    for b in chain.blocks.iter_mut() {
        if let Some(c) = classes.iter().find(|c| c.restriction == b.restriction) {
            b.members = c.members.clone();
            b.reduced = c.reduced;
        }
    }
    Ok(chain)
}

/// Checks every clause of Langlands' lemma and the distinctness and
/// exhaustion of the classes `[beta_j]`; the error names the first failure.
pub fn check_chain(
    datum: &RelativeRootDatum,
    theta: &[usize],
    theta_prime: &[usize],
    w: &WeylElement,
    chain: &DecompositionChain,
) -> std::result::Result<(), String> {
    let sorted = |t: &[usize]| {
        let mut v = t.to_vec();
        v.sort_unstable();
        v
    };
    let d = chain.thetas.len();
    if chain.thetas[0] != sorted(theta) || chain.thetas[d - 1] != sorted(theta_prime) {
        return Err("endpoints of the chain are not theta and theta'".into());
    }
    if chain.factors.len() != d - 1 || chain.alphas.len() != d - 1 {
        return Err("chain lengths disagree".into());
    }
    if chain.recompose(datum.dim()) != *w {
        return Err("w != w_{d-1} ... w_1".into());
    }
    let mut dot_w = w.clone();
    for j in 0..d - 1 {
        let tj = &chain.thetas[j];
        let aj = chain.alphas[j];
        if tj.contains(&aj) {
            return Err(format!("alpha_{} lies in theta_{}", j + 1, j + 1));
        }
        let mut omega = tj.clone();
        omega.push(aj);
        let expect = longest_unchecked(datum, &omega).compose(&longest_unchecked(datum, tj));
        if chain.factors[j] != expect {
            return Err(format!("w_{} is not w_(l,Omega) w_(l,theta)", j + 1));
        }
        if image_in_base(datum, &chain.factors[j], tj).as_ref() != Some(&chain.thetas[j + 1]) {
            return Err(format!("theta_{} != w_{}(theta_{})", j + 2, j + 1, j + 1));
        }
        dot_w = dot_w.compose(&chain.factors[j].inverse());
    }
    if !dot_w.is_identity() {
        return Err("the final remaining element is not 1".into());
    }
    let classes = block_classes(datum, theta, w);
    let reduced: Vec<&BlockClass> = classes.iter().filter(|c| c.reduced).collect();
    let mut seen: Vec<&Vec<Rat>> = Vec::new();
    for b in &chain.blocks {
        if seen.contains(&&b.restriction) {
            return Err("classes [beta_j] are not distinct".into());
        }
        if !reduced.iter().any(|c| c.restriction == b.restriction) {
            return Err("a class [beta_j] is outside the reduced block set".into());
        }
        seen.push(&b.restriction);
    }
    if seen.len() != reduced.len() {
        return Err(format!(
            "{} classes [beta_j] against {} reduced blocks",
            seen.len(),
            reduced.len()
        ));
    }
    Ok(())
}

/// Block classes of `w_0` beneath `theta0`, grouped by level.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelPartition {
    pub sets: BTreeMap<u32, Vec<BlockClass>>,
    /// For each reduced class, in order, the least level among the classes
    /// whose restriction is a positive multiple of it.
    pub a_values: Vec<u32>,
    pub m_r: u32,
}

impl LevelPartition {
    pub fn classes(&self) -> impl Iterator<Item = &BlockClass> {
        self.sets.values().flatten()
    }

    pub fn reduced_classes(&self) -> Vec<&BlockClass> {
        self.classes().filter(|c| c.reduced).collect()
    }
}

/// Partitions the block classes of `w_0 = w_l w_{l,theta}` beneath
/// `theta0` by their level, the coefficient of the removed simple root.
pub fn level_partition(
    datum: &RelativeRootDatum,
    theta: &[usize],
    theta0: &[usize],
) -> Result<LevelPartition> {
    let removed = datum.removed_root(theta)?;
    check_subset(datum, theta0)?;
    if let Some(j) = theta0.iter().find(|j| !theta.contains(j)) {
        return Err(Error::InvalidSubset(format!(
            "theta0 contains {j}, which is not in theta"
        )));
    }
    let w0 = w_zero(datum, theta)?;
    let mut classes = block_classes(datum, theta0, &w0);
    for c in classes.iter_mut() {
        let k = datum.index_of(&c.members[0]).expect("root");
        c.level = Some(datum.level(k, removed) as u32);
    }
    if let Some(tp) = image_in_base(datum, &w0, theta0) {
        let chain = langlands_decompose(datum, theta0, &tp, &w0)?;
        for c in classes.iter_mut() {
            c.origin_index = chain
                .blocks
                .iter()
                .find(|b| b.restriction == c.restriction)
                .and_then(|b| b.origin_index);
        }
    }
    let mut a_values = Vec::new();
    for c in classes.iter().filter(|c| c.reduced) {
        let a = classes
            .iter()
            .filter(|o| positive_multiple(&o.restriction, &c.restriction))
            .filter_map(|o| o.level)
            .min()
            .expect("class is a multiple of itself");
        a_values.push(a);
    }
    let m_r = classes.iter().filter_map(|c| c.level).max().unwrap_or(0);
    let mut sets: BTreeMap<u32, Vec<BlockClass>> = BTreeMap::new();
    for c in classes {
        sets.entry(c.level.expect("level")).or_default().push(c);
    }
    Ok(LevelPartition {
        sets,
        a_values,
        m_r,
    })
}

fn positive_multiple(a: &[Rat], b: &[Rat]) -> bool {
    use num_traits::{Signed, Zero};
    let Some(k) = b.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    let r = &a[k] / &b[k];
    r.is_positive() && a.iter().zip(b).all(|(x, y)| *x == &r * y)
}

/// The pair `(G_i, theta_i)` spanned by the roots whose level is a multiple
/// of `i`; its level-one roots are the level-`i` roots of the input.
pub fn induction_subgroup(
    datum: &RelativeRootDatum,
    theta: &[usize],
    i: u32,
) -> Result<(RelativeRootDatum, Vec<usize>)> {
    let removed = datum.removed_root(theta)?;
    let m_r = (0..datum.roots().len())
        .map(|k| datum.level(k, removed))
        .max()
        .unwrap_or(0) as u32;
    if i < 2 || i > m_r {
        return Err(Error::InvalidLevel {
            level: i,
            min: 2,
            max: m_r,
        });
    }
    let keep: Vec<usize> = (0..datum.roots().len())
        .filter(|&k| datum.level(k, removed) % i as i32 == 0)
        .collect();
    let roots: Vec<Vec<i32>> = keep.iter().map(|&k| datum.root(k).to_vec()).collect();
    let coroots: Vec<Vec<i32>> = keep.iter().map(|&k| datum.coroot(k).to_vec()).collect();
    let has_double = roots.iter().any(|r| {
        let d: Vec<i32> = r.iter().map(|x| 2 * x).collect();
        roots.contains(&d)
    });
    let family = if has_double {
        Family::BC
    } else if roots.iter().any(|r| dot(r, r) == 4) {
        Family::C
    } else {
        Family::A
    };
    let sub = RelativeRootDatum::from_roots(family, None, datum.dim(), roots, coroots);
    let sub_theta: Vec<usize> = (0..sub.rank())
        .filter(|&j| {
            let k = datum.index_of(sub.simple_root(j)).expect("root");
            datum.level(k, removed) == 0
        })
        .collect();
    Ok((sub, sub_theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::build_root_datum;

    fn datum(g: &str) -> RelativeRootDatum {
        build_root_datum(g.parse().unwrap()).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(weyl_group(&datum("resGL3")).len(), 6);
        assert_eq!(weyl_group(&datum("resGL4")).len(), 24);
        assert_eq!(weyl_group(&datum("U4")).len(), 8);
        assert_eq!(weyl_group(&datum("U5")).len(), 8);
        assert_eq!(weyl_group(&datum("U6")).len(), 48);
        assert_eq!(weyl_group(&datum("U3")).len(), 2);
    }

    #[test]
    fn longest_elements() {
        let a1 = datum("resGL2");
        assert_eq!(longest_element(&a1, &[0]).unwrap(), WeylElement::reflection(&a1, 0));

        let c2 = datum("U4");
        let w = longest_element(&c2, &[0, 1]).unwrap();
        assert_eq!(w.matrix, vec![vec![-1, 0], vec![0, -1]]);

        let a2 = datum("resGL3");
        let wl = longest_element(&a2, &[0, 1]).unwrap();
        assert_eq!(wl.length(&a2), 3);
        assert!(wl.compose(&wl).is_identity());
        let brute = weyl_group(&a2)
            .into_iter()
            .max_by_key(|w| w.length(&a2))
            .unwrap();
        assert_eq!(brute, wl);
    }

    #[test]
    fn a1_and_a2_chains() {
        let a1 = datum("resGL2");
        let s = WeylElement::reflection(&a1, 0);
        let ch = langlands_decompose(&a1, &[], &[], &s).unwrap();
        assert_eq!(ch.thetas.len(), 2);
        assert_eq!(ch.factors, vec![s.clone()]);
        check_chain(&a1, &[], &[], &s, &ch).unwrap();

        let a2 = datum("resGL3");
        let wl = longest_element(&a2, &[0, 1]).unwrap();
        let ch = langlands_decompose(&a2, &[], &[], &wl).unwrap();
        assert_eq!(ch.thetas.len(), 4);
        assert_eq!(ch.recompose(3), wl);
        check_chain(&a2, &[], &[], &wl, &ch).unwrap();
    }

    #[test]
    fn c2_w0_chain_has_small_steps() {
        let c2 = datum("U4");
        let theta = vec![1];
        let w0 = w_zero(&c2, &theta).unwrap();
        let tp = image_in_base(&c2, &w0, &theta).unwrap();
        assert_eq!(tp, theta);
        let ch = langlands_decompose(&c2, &theta, &tp, &w0).unwrap();
        check_chain(&c2, &theta, &tp, &w0, &ch).unwrap();
        for (t, a) in ch.thetas.iter().zip(&ch.alphas) {
            assert!(t.len() < 2 && !t.contains(a));
        }
    }

    #[test]
    fn non_associate_input_is_rejected() {
        let a2 = datum("resGL3");
        let s0 = WeylElement::reflection(&a2, 0);
        assert!(matches!(
            langlands_decompose(&a2, &[0], &[0], &s0),
            Err(Error::NotAssociate(_))
        ));
    }

    #[test]
    fn level_partition_examples() {
        let u4 = datum("U4");
        let siegel = u4.maximal_theta(1);
        let lp = level_partition(&u4, &siegel, &siegel).unwrap();
        assert_eq!(lp.m_r, 1);
        assert_eq!(lp.sets.keys().copied().collect::<Vec<_>>(), vec![1]);

        let u3 = datum("U3");
        let lp = level_partition(&u3, &[], &[]).unwrap();
        assert_eq!(lp.m_r, 2);
        assert_eq!(lp.sets.keys().copied().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(lp.reduced_classes().len(), 1);
        assert_eq!(lp.a_values, vec![1]);

        let gl5 = datum("resGL5");
        for r in 0..4 {
            let th = gl5.maximal_theta(r);
            let lp = level_partition(&gl5, &th, &th).unwrap();
            assert_eq!(lp.m_r, 1);
            let lp = level_partition(&gl5, &th, &[]).unwrap();
            assert!(lp.classes().all(|c| c.level == Some(1)));
        }
        assert_eq!(level_partition(&u4, &[], &[]).unwrap_err(), Error::NotMaximalLevi);
    }

    #[test]
    fn induction_subgroups() {
        let u3 = datum("U3");
        let (sub, th) = induction_subgroup(&u3, &[], 2).unwrap();
        assert_eq!(sub.rank(), 1);
        let lp = level_partition(&sub, &th, &th).unwrap();
        assert_eq!(lp.m_r, 1);
        let old = level_partition(&u3, &[], &[]).unwrap();
        assert_eq!(lp.sets[&1][0].members, old.sets[&2][0].members);

        let u5 = datum("U5");
        let siegel = u5.maximal_theta(1);
        let (sub, th) = induction_subgroup(&u5, &siegel, 2).unwrap();
        assert_eq!(sub.family(), Family::C);
        assert_eq!(level_partition(&sub, &th, &th).unwrap().m_r, 1);

        let u4 = datum("U4");
        assert_eq!(
            induction_subgroup(&u4, &u4.maximal_theta(1), 2).unwrap_err(),
            Error::InvalidLevel {
                level: 2,
                min: 2,
                max: 1
            }
        );
    }
}
