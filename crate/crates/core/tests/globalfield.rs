use std::collections::HashSet;

use lsfactors::globalfield::{
    build_place_table, is_prime_power, necklace_count, partial_zeta, prime_power_parts,
    zeta_closed_form,
};
use lsfactors::lgroup::Algebra;
use num_bigint::BigInt;

/// A finite field given by addition and multiplication tables on `0..q`.
struct Field {
    add: Vec<Vec<u8>>,
    mul: Vec<Vec<u8>>,
}

impl Field {
    fn prime(p: u8) -> Field {
        let table = |f: fn(u16, u16) -> u16| {
            (0..p as u16)
                .map(|a| (0..p as u16).map(|b| (f(a, b) % p as u16) as u8).collect())
                .collect()
        };
        Field {
            add: table(|a, b| a + b),
            mul: table(|a, b| a * b),
        }
    }

    /// `F_p[x] / (x^2 - c1 x - c0)`, elements `a + b x` encoded as `a + p b`.
    fn quadratic(p: u8, c0: u8, c1: u8) -> Field {
        let q = p as usize * p as usize;
        let split = |e: usize| ((e % p as usize) as u16, (e / p as usize) as u16);
        let enc = |a: u16, b: u16| ((a % p as u16) + p as u16 * (b % p as u16)) as u8;
        let mut add = vec![vec![0; q]; q];
        let mut mul = vec![vec![0; q]; q];
        for x in 0..q {
            for y in 0..q {
                let (a, b) = split(x);
                let (c, d) = split(y);
                add[x][y] = enc(a + c, b + d);
                // (a + b x)(c + d x) with x^2 = c1 x + c0
                let bd = b * d;
                mul[x][y] = enc(a * c + bd * c0 as u16, a * d + b * c + bd * c1 as u16);
            }
        }
        Field { add, mul }
    }

    fn size(&self) -> usize {
        self.add.len()
    }

    /// Product of monic polynomials, coefficients from the constant term up.
    fn poly_mul(&self, f: &[u8], g: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; f.len() + g.len() - 1];
        for (i, &a) in f.iter().enumerate() {
            for (j, &b) in g.iter().enumerate() {
                out[i + j] = self.add[out[i + j] as usize][self.mul[a as usize][b as usize] as usize];
            }
        }
        out
    }

    fn monic(&self, d: usize) -> Vec<Vec<u8>> {
        let q = self.size();
        (0..q.pow(d as u32))
            .map(|mut code| {
                let mut f: Vec<u8> = (0..d)
                    .map(|_| {
                        let c = (code % q) as u8;
                        code /= q;
                        c
                    })
                    .collect();
                f.push(1);
                f
            })
            .collect()
    }

    /// Monic irreducibles of degree `d`: all monic polynomials minus the
    /// products of two monic factors of positive degree.
    fn irreducible_count(&self, d: usize) -> usize {
        let mut reducible = HashSet::new();
        for i in 1..=d / 2 {
            let small = self.monic(i);
            let large = self.monic(d - i);
            for f in &small {
                for g in &large {
                    reducible.insert(self.poly_mul(f, g));
                }
            }
        }
        self.size().pow(d as u32) - reducible.len()
    }

    fn is_field(&self) -> bool {
        (1..self.size()).all(|a| (1..self.size()).any(|b| self.mul[a][b] == 1))
    }
}

#[test]
fn necklace_counts_match_brute_force() {
    let fields = [
        (2u64, Field::prime(2), 8usize),
        (3, Field::prime(3), 6),
        (5, Field::prime(5), 4),
        // x^2 = x + 1 over F_2
        (4, Field::quadratic(2, 1, 1), 4),
        // x^2 = -1 over F_3
        (9, Field::quadratic(3, 2, 0), 3),
    ];
    for (q, field, max_d) in fields {
        assert!(field.is_field(), "q={q}");
        for d in 1..=max_d {
            let brute = field.irreducible_count(d);
            assert_eq!(necklace_count(q, d as u32), BigInt::from(brute), "q={q} d={d}");
        }
    }
}

#[test]
fn necklace_identity() {
    // sum_{e | n} e N_e = q^n
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25] {
        for n in 1..=8u32 {
            let total: BigInt = (1..=n)
                .filter(|e| n % e == 0)
                .map(|e| necklace_count(q, e) * e)
                .sum();
            assert_eq!(total, num_traits::pow(BigInt::from(q), n as usize), "q={q} n={n}");
        }
    }
}

#[test]
fn place_tables() {
    let t = build_place_table(3, 6).unwrap();
    assert_eq!(t.counts[0], BigInt::from(4), "three finite places and infinity");
    assert_eq!(t.counts[1], BigInt::from(3));
    for (d, s) in t.splitting.iter().enumerate() {
        let expect = if (d + 1) % 2 == 0 { Algebra::Split } else { Algebra::Inert };
        assert_eq!(*s, expect);
    }
    assert!(build_place_table(6, 4).is_err());
    assert!(build_place_table(1, 4).is_err());
    assert!(build_place_table(4, 0).is_err());
}

#[test]
fn partial_zeta_is_rational() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let t = build_place_table(q, 12).unwrap();
        assert_eq!(partial_zeta(&t, 12).unwrap(), zeta_closed_form(q, 12), "q={q}");
    }
    let t = build_place_table(2, 4).unwrap();
    assert!(partial_zeta(&t, 5).is_err());
    assert_eq!(zeta_closed_form(2, 3), [1, 3, 7, 15].map(BigInt::from));
}

#[test]
fn prime_powers() {
    let brute = |n: u64| {
        (2..=n).find(|p| n.is_multiple_of(*p)).is_some_and(|p| {
            let mut m = n;
            while m.is_multiple_of(p) {
                m /= p;
            }
            m == 1
        })
    };
    for n in 0..300u64 {
        assert_eq!(is_prime_power(n), brute(n), "n={n}");
    }
    assert_eq!(prime_power_parts(243), Some((3, 5)));
    assert_eq!(prime_power_parts(12), None);
}
