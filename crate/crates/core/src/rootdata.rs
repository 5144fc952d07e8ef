//! Relative root data of type A, C and BC in orthonormal coordinates.
//!
//! `resGL n` has roots `e_i - e_j` in `Z^n`. `U 2n` has `±e_i ± e_j` and
//! `±2e_i` in `Z^n`; `U 2n+1` adds `±e_i`, so both `e_i` and `2e_i` are
//! roots. Coroots are integer vectors and the pairing is the dot product.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::Rat;

/// Quasi-split group whose relative roots are modeled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupDescriptor {
    /// Quasi-split unitary group in `N` variables.
    Unitary(u32),
    /// Restriction of scalars of `GL_n`.
    ResGl(u32),
}

impl GroupDescriptor {
    /// Number of coordinates of the torus parameters at an inert place.
    pub fn torus_rank(&self) -> usize {
        match *self {
            GroupDescriptor::Unitary(n) => (n / 2) as usize,
            GroupDescriptor::ResGl(n) => n as usize,
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Unitary(n) => write!(f, "U{n}"),
            GroupDescriptor::ResGl(n) => write!(f, "resGL{n}"),
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    /// Accepts `U4`, `U 4`, `resGL3`, `GL3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::parse("group", format!("`{s}` is not of the form U<N> or resGL<n>"));
        let (kind, rest) = if let Some(r) = s.strip_prefix("resGL") {
            ("GL", r)
        } else if let Some(r) = s.strip_prefix("GL") {
            ("GL", r)
        } else if let Some(r) = s.strip_prefix('U') {
            ("U", r)
        } else {
            return Err(bad());
        };
        let n: u32 = rest.trim().parse().map_err(|_| bad())?;
        Ok(if kind == "U" {
            GroupDescriptor::Unitary(n)
        } else {
            GroupDescriptor::ResGl(n)
        })
    }
}

impl Serialize for GroupDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GroupDescriptor", 2)?;
        match *self {
            GroupDescriptor::Unitary(n) => {
                st.serialize_field("kind", "U")?;
                st.serialize_field("N", &n)?;
            }
            GroupDescriptor::ResGl(n) => {
                st.serialize_field("kind", "resGL")?;
                st.serialize_field("n", &n)?;
            }
        }
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupWire {
    kind: String,
    #[serde(rename = "N")]
    big_n: Option<u32>,
    n: Option<u32>,
}

struct GroupVisitor;

impl<'de> de::Visitor<'de> for GroupVisitor {
    type Value = GroupWire;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a group such as \"U4\" or {\"kind\":\"U\",\"N\":4}")
    }

    fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<GroupWire, E> {
        let g: GroupDescriptor = s.parse().map_err(E::custom)?;
        Ok(match g {
            GroupDescriptor::Unitary(n) => GroupWire {
                kind: "U".into(),
                big_n: Some(n),
                n: None,
            },
            GroupDescriptor::ResGl(n) => GroupWire {
                kind: "resGL".into(),
                big_n: None,
                n: Some(n),
            },
        })
    }

    fn visit_map<A: de::MapAccess<'de>>(self, map: A) -> std::result::Result<GroupWire, A::Error> {
        GroupWire::deserialize(de::value::MapAccessDeserializer::new(map))
    }
}

impl<'de> Deserialize<'de> for GroupDescriptor {
    /// Accepts the object form and the short string form.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = d.deserialize_any(GroupVisitor)?;
        match (w.kind.as_str(), w.big_n, w.n) {
            ("U", Some(n), None) => Ok(GroupDescriptor::Unitary(n)),
            ("resGL", None, Some(n)) => Ok(GroupDescriptor::ResGl(n)),
            ("U", _, _) => Err(de::Error::custom("group: kind \"U\" takes exactly the field \"N\"")),
            ("resGL", _, _) => Err(de::Error::custom(
                "group: kind \"resGL\" takes exactly the field \"n\"",
            )),
            (k, _, _) => Err(de::Error::custom(format!(
                "group.kind: expected \"U\" or \"resGL\", found \"{k}\""
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    C,
    BC,
}

/// Roots, coroots and a base of a (possibly non-reduced) root system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeRootDatum {
    family: Family,
    group: Option<GroupDescriptor>,
    dim: usize,
    roots: Vec<Vec<i32>>,
    coroots: Vec<Vec<i32>>,
    simple: Vec<usize>,
    /// Coordinates of every root in the basis of simple roots.
    coords: Vec<Vec<i32>>,
}

pub fn dot(a: &[i32], b: &[i32]) -> i32 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit(dim: usize, i: usize, k: i32) -> Vec<i32> {
    let mut v = vec![0; dim];
    v[i] = k;
    v
}

/// Least-squares coefficients of `v` against independent vectors `b_k`.
pub(crate) fn gram_coefficients(basis: &[Vec<i32>], v: &[i32]) -> Vec<Rat> {
    let k = basis.len();
    let mut m: Vec<Vec<Rat>> = (0..k)
        .map(|i| {
            let mut row: Vec<Rat> = (0..k)
                .map(|j| Rat::from_integer(dot(&basis[i], &basis[j]).into()))
                .collect();
            row.push(Rat::from_integer(dot(&basis[i], v).into()));
            row
        })
        .collect();
    for col in 0..k {
        let piv = (col..k)
            .find(|&r| !m[r][col].is_zero())
            .expect("independent vectors");
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    m.into_iter().map(|row| row[k].clone()).collect()
}

/// Solves `sum c_k b_k = v` over the rationals for independent `b_k`.
pub(crate) fn solve_in_span(basis: &[Vec<i32>], v: &[i32]) -> Option<Vec<Rat>> {
    let c = gram_coefficients(basis, v);
    let exact = (0..v.len()).all(|i| {
        let back: Rat = c
            .iter()
            .zip(basis)
            .map(|(ck, b)| ck * Rat::from_integer(b[i].into()))
            .sum();
        back == Rat::from_integer(v[i].into())
    });
    exact.then_some(c)
}

impl RelativeRootDatum {
    /// Builds a datum from a root list closed under negation; the base is
    /// chosen by the height functional `(dim, dim - 1, ..., 1)`.
    pub fn from_roots(
        family: Family,
        group: Option<GroupDescriptor>,
        dim: usize,
        roots: Vec<Vec<i32>>,
        coroots: Vec<Vec<i32>>,
    ) -> Self {
        let height = |v: &[i32]| -> i32 {
            v.iter()
                .enumerate()
                .map(|(i, x)| (dim - i) as i32 * x)
                .sum()
        };
        let positive: Vec<usize> = (0..roots.len()).filter(|&k| height(&roots[k]) > 0).collect();
        let decomposable = |k: usize| {
            positive.iter().any(|&a| {
                positive.iter().any(|&b| {
                    roots[a]
                        .iter()
                        .zip(&roots[b])
                        .zip(&roots[k])
                        .all(|((x, y), z)| x + y == *z)
                })
            })
        };
        let mut simple: Vec<usize> = positive
            .iter()
            .copied()
            .filter(|&k| !decomposable(k))
            .collect();
        let first_nonzero = |v: &[i32]| v.iter().position(|x| *x != 0).unwrap_or(dim);
        simple.sort_by(|&a, &b| {
            first_nonzero(&roots[a])
                .cmp(&first_nonzero(&roots[b]))
                .then_with(|| roots[b].cmp(&roots[a]))
        });
        let basis: Vec<Vec<i32>> = simple.iter().map(|&k| roots[k].clone()).collect();
        let coords = roots
            .iter()
            .map(|r| {
                solve_in_span(&basis, r)
                    .expect("roots lie in the span of the base")
                    .into_iter()
                    .map(|c| {
                        assert!(c.is_integer(), "root coordinates are integral");
                        c.to_integer().try_into().expect("small coordinate")
                    })
                    .collect()
            })
            .collect();
        RelativeRootDatum {
            family,
            group,
            dim,
            roots,
            coroots,
            simple,
            coords,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn group(&self) -> Option<GroupDescriptor> {
        self.group
    }

    /// Ambient dimension of the coordinate lattice.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of simple roots.
    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn roots(&self) -> &[Vec<i32>] {
        &self.roots
    }

    pub fn root(&self, k: usize) -> &[i32] {
        &self.roots[k]
    }

    pub fn coroot(&self, k: usize) -> &[i32] {
        &self.coroots[k]
    }

    /// Root indices of the simple roots, in base order.
    pub fn simple(&self) -> &[usize] {
        &self.simple
    }

    pub fn simple_root(&self, j: usize) -> &[i32] {
        &self.roots[self.simple[j]]
    }

    /// `<x, coroot_k>`.
    pub fn pairing(&self, x: &[i32], k: usize) -> i32 {
        dot(x, &self.coroots[k])
    }

    pub fn index_of(&self, v: &[i32]) -> Option<usize> {
        self.roots.iter().position(|r| r.as_slice() == v)
    }

    /// Coordinates of root `k` in the simple-root basis.
    pub fn coords(&self, k: usize) -> &[i32] {
        &self.coords[k]
    }

    pub fn is_positive(&self, k: usize) -> bool {
        self.coords[k].iter().any(|c| *c > 0)
    }

    /// Positivity of an arbitrary vector that is known to be a root.
    pub fn is_positive_vector(&self, v: &[i32]) -> bool {
        let k = self.index_of(v).expect("vector is a root");
        self.is_positive(k)
    }

    pub fn positive_roots(&self) -> Vec<usize> {
        (0..self.roots.len()).filter(|&k| self.is_positive(k)).collect()
    }

    /// A root is reduced when its half is not a root.
    pub fn is_reduced(&self, k: usize) -> bool {
        let r = &self.roots[k];
        if r.iter().any(|x| x % 2 != 0) {
            return true;
        }
        let half: Vec<i32> = r.iter().map(|x| x / 2).collect();
        self.index_of(&half).is_none()
    }

    /// Whether root `k` lies in the span of the simple roots in `theta`.
    pub fn in_span(&self, k: usize, theta: &[usize]) -> bool {
        self.coords[k]
            .iter()
            .enumerate()
            .all(|(j, c)| *c == 0 || theta.contains(&j))
    }

    /// Simple reflection `s_j` applied to `v`.
    pub fn reflect(&self, j: usize, v: &[i32]) -> Vec<i32> {
        let k = self.simple[j];
        let c = self.pairing(v, k);
        v.iter().zip(&self.roots[k]).map(|(x, a)| x - c * a).collect()
    }

    /// Index of the simple root equal to `v`, if any.
    pub fn simple_index_of(&self, v: &[i32]) -> Option<usize> {
        self.simple.iter().position(|&k| self.roots[k].as_slice() == v)
    }

    /// `Delta \ {removed}` as a sorted index list.
    pub fn maximal_theta(&self, removed: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&j| j != removed).collect()
    }

    /// The removed simple root when `theta` is maximal.
    pub fn removed_root(&self, theta: &[usize]) -> Result<usize> {
        check_subset(self, theta)?;
        let missing: Vec<usize> = (0..self.rank()).filter(|j| !theta.contains(j)).collect();
        match missing.as_slice() {
            [r] => Ok(*r),
            _ => Err(Error::NotMaximalLevi),
        }
    }

    /// Coefficient of the removed simple root in root `k`.
    pub fn level(&self, k: usize, removed: usize) -> i32 {
        self.coords[k][removed]
    }
}

pub(crate) fn check_subset(datum: &RelativeRootDatum, theta: &[usize]) -> Result<()> {
    for (i, &j) in theta.iter().enumerate() {
        if j >= datum.rank() {
            return Err(Error::InvalidSubset(format!(
                "index {j} is outside a base of size {}",
                datum.rank()
            )));
        }
        if theta[..i].contains(&j) {
            return Err(Error::InvalidSubset(format!("index {j} repeated")));
        }
    }
    Ok(())
}

/// Root datum of the given group.
pub fn build_root_datum(group: GroupDescriptor) -> Result<RelativeRootDatum> {
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    let family;
    let dim;
    match group {
        GroupDescriptor::ResGl(n) => {
            if n < 1 {
                return Err(Error::InvalidRank(format!("resGL needs n >= 1, got {n}")));
            }
            family = Family::A;
            dim = n as usize;
            for i in 0..dim {
                for j in 0..dim {
                    if i != j {
                        let mut v = vec![0; dim];
                        v[i] = 1;
                        v[j] = -1;
                        coroots.push(v.clone());
                        roots.push(v);
                    }
                }
            }
        }
        GroupDescriptor::Unitary(big_n) => {
            if big_n < 2 {
                return Err(Error::InvalidRank(format!("U needs N >= 2, got {big_n}")));
            }
            dim = (big_n / 2) as usize;
            family = if big_n % 2 == 0 { Family::C } else { Family::BC };
            for i in 0..dim {
                for j in i + 1..dim {
                    for (si, sj) in [(1, -1), (-1, 1), (1, 1), (-1, -1)] {
                        let mut v = vec![0; dim];
                        v[i] = si;
                        v[j] = sj;
                        coroots.push(v.clone());
                        roots.push(v);
                    }
                }
                for s in [1, -1] {
                    roots.push(unit(dim, i, 2 * s));
                    coroots.push(unit(dim, i, s));
                    if family == Family::BC {
                        roots.push(unit(dim, i, s));
                        coroots.push(unit(dim, i, 2 * s));
                    }
                }
            }
        }
    }
    Ok(RelativeRootDatum::from_roots(
        family,
        Some(group),
        dim,
        roots,
        coroots,
    ))
}

/// A standard parabolic subset with its half-sum and, when maximal, the
/// normalized fundamental weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicSubset {
    pub theta: Vec<usize>,
    pub rho_theta: Vec<Rat>,
    pub alpha_tilde: Option<Vec<Rat>>,
    pub removed: Option<usize>,
}

/// Half the sum of the positive roots outside the span of `theta`, and
/// `rho_theta / <rho_theta, alpha^vee>` when exactly one simple root is
/// left out.
pub fn parabolic(datum: &RelativeRootDatum, theta: &[usize]) -> Result<ParabolicSubset> {
    check_subset(datum, theta)?;
    let mut theta = theta.to_vec();
    theta.sort_unstable();
    let half = Rat::new(1.into(), 2.into());
    let mut rho = vec![Rat::zero(); datum.dim()];
    for k in datum.positive_roots() {
        if !datum.in_span(k, &theta) {
            for (x, r) in rho.iter_mut().zip(datum.root(k)) {
                *x += &half * Rat::from_integer((*r).into());
            }
        }
    }
    let removed = datum.removed_root(&theta).ok();
    let alpha_tilde = removed.map(|r| {
        let cor = datum.coroot(datum.simple()[r]);
        let p: Rat = rho
            .iter()
            .zip(cor)
            .map(|(x, c)| x * Rat::from_integer((*c).into()))
            .sum();
        rho.iter().map(|x| x / &p).collect()
    });
    Ok(ParabolicSubset {
        theta,
        rho_theta: rho,
        alpha_tilde,
        removed,
    })
}

/// `<v, coroot>` for a rational vector.
pub fn pair_rational(v: &[Rat], coroot: &[i32]) -> Rat {
    v.iter()
        .zip(coroot)
        .map(|(x, c)| x * Rat::from_integer((*c).into()))
        .fold(Rat::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn rat_half() -> Rat {
        Rat::new(One::one(), 2.into())
    }

    fn closed_under_simple_reflections(d: &RelativeRootDatum) -> bool {
        (0..d.rank()).all(|j| d.roots().iter().all(|r| d.index_of(&d.reflect(j, r)).is_some()))
    }

    #[test]
    fn classical_counts() {
        let a2 = build_root_datum(GroupDescriptor::ResGl(3)).unwrap();
        assert_eq!((a2.roots().len(), a2.rank(), a2.family()), (6, 2, Family::A));
        let c2 = build_root_datum(GroupDescriptor::Unitary(4)).unwrap();
        assert_eq!((c2.roots().len(), c2.rank(), c2.family()), (8, 2, Family::C));
        let bc1 = build_root_datum(GroupDescriptor::Unitary(3)).unwrap();
        assert_eq!(bc1.roots().len(), 4);
        assert_eq!(bc1.rank(), 1);
        assert_eq!(bc1.simple_root(0), &[1]);
        assert!(bc1.index_of(&[2]).is_some());
        let bc2 = build_root_datum(GroupDescriptor::Unitary(5)).unwrap();
        assert_eq!(bc2.roots().len(), 4 + 4 + 4);
        assert_eq!(bc2.simple_root(0), &[1, -1]);
        assert_eq!(bc2.simple_root(1), &[0, 1]);
    }

    #[test]
    fn rank_errors() {
        assert!(matches!(
            build_root_datum(GroupDescriptor::Unitary(1)),
            Err(Error::InvalidRank(_))
        ));
        assert!(matches!(
            build_root_datum(GroupDescriptor::ResGl(0)),
            Err(Error::InvalidRank(_))
        ));
    }

    #[test]
    fn pairing_and_closure() {
        for g in [
            GroupDescriptor::ResGl(1),
            GroupDescriptor::ResGl(4),
            GroupDescriptor::Unitary(2),
            GroupDescriptor::Unitary(6),
            GroupDescriptor::Unitary(7),
        ] {
            let d = build_root_datum(g).unwrap();
            for k in 0..d.roots().len() {
                assert_eq!(d.pairing(d.root(k), k), 2, "{g} root {k}");
            }
            assert!(closed_under_simple_reflections(&d), "{g}");
        }
    }

    #[test]
    fn a1_rho_and_alpha_tilde() {
        let d = build_root_datum(GroupDescriptor::ResGl(2)).unwrap();
        let p = parabolic(&d, &[]).unwrap();
        let h = rat_half();
        assert_eq!(p.rho_theta, vec![h.clone(), -h.clone()]);
        assert_eq!(p.alpha_tilde.unwrap(), vec![h.clone(), -h]);
    }

    #[test]
    fn alpha_tilde_pairs_to_one_with_the_removed_root() {
        for g in [
            GroupDescriptor::ResGl(4),
            GroupDescriptor::Unitary(5),
            GroupDescriptor::Unitary(6),
        ] {
            let d = build_root_datum(g).unwrap();
            for r in 0..d.rank() {
                let p = parabolic(&d, &d.maximal_theta(r)).unwrap();
                let at = p.alpha_tilde.unwrap();
                for j in 0..d.rank() {
                    let v = pair_rational(&at, d.coroot(d.simple()[j]));
                    if j == r {
                        assert!(v.is_one());
                    } else {
                        assert!(v.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn subset_errors() {
        let d = build_root_datum(GroupDescriptor::Unitary(4)).unwrap();
        assert!(matches!(parabolic(&d, &[2]), Err(Error::InvalidSubset(_))));
        assert!(matches!(parabolic(&d, &[0, 0]), Err(Error::InvalidSubset(_))));
        assert_eq!(d.removed_root(&[]), Err(Error::NotMaximalLevi));
    }

    #[test]
    fn descriptor_text_and_json() {
        assert_eq!("U4".parse::<GroupDescriptor>().unwrap(), GroupDescriptor::Unitary(4));
        assert_eq!("resGL 3".parse::<GroupDescriptor>().unwrap(), GroupDescriptor::ResGl(3));
        let j = serde_json::to_string(&GroupDescriptor::Unitary(4)).unwrap();
        assert_eq!(j, r#"{"kind":"U","N":4}"#);
        let g: GroupDescriptor = serde_json::from_str(r#"{"kind":"resGL","n":3}"#).unwrap();
        assert_eq!(g, GroupDescriptor::ResGl(3));
        assert!(serde_json::from_str::<GroupDescriptor>(r#"{"kind":"Sp","n":3}"#).is_err());
    }
}
