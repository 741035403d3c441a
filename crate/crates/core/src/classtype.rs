//! Integer partitions, similarity class types and canonical operators.
//!
//! A similarity class type records, for every primary part of an
//! operator's `F_q[x]`-module, the degree of its irreducible polynomial and
//! the partition of block sizes. The type grammar is
//! `DEG:P1,P2,...;DEG:...`, e.g. `1:3,1;2:2`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::arith::{mobius, prime_power, prime_powers};
use crate::error::{Error, Result};
use crate::gf::{enumerate_irreducibles, poly, Field, Matrix};

/// Weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Partition> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `i`-th part, zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Column lengths of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let first = self.part(0);
        Partition(
            (1..=first)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    /// Young diagram containment `other ⊆ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// All partitions of `n`, largest first part first.
    pub fn all(n: u32) -> Vec<Partition> {
        fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// All `μ ⊆ λ` with `|μ| = k`, each exactly once.
pub fn subpartitions(lambda: &Partition, k: u32) -> Vec<Partition> {
    fn rec(lambda: &[u32], i: usize, left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if i >= lambda.len() {
            return;
        }
        // remaining capacity check prunes dead branches
        let cap: u32 = lambda[i..].iter().map(|&l| l.min(max)).sum();
        if cap < left {
            return;
        }
        for p in (1..=lambda[i].min(max).min(left)).rev() {
            cur.push(p);
            rec(lambda, i + 1, left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&lambda.0, 0, k, u32::MAX, &mut Vec::new(), &mut out);
    out
}

pub fn conjugate(lambda: &Partition) -> Partition {
    lambda.conjugate()
}

/// Multiset of `(degree, partition)` pairs, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassType {
    components: Vec<(u32, Partition)>,
}

impl ClassType {
    pub fn new(mut components: Vec<(u32, Partition)>) -> Result<ClassType> {
        if components.is_empty() {
            return Err(Error::InvalidParams("class type needs at least one component".into()));
        }
        for (deg, part) in &components {
            if *deg == 0 {
                return Err(Error::InvalidParams("component degree must be positive".into()));
            }
            if part.is_empty() {
                return Err(Error::InvalidPartition("component partition is empty".into()));
            }
        }
        components.sort();
        Ok(ClassType { components })
    }

    /// Single primary component `{(degree, λ)}`.
    pub fn primary(degree: u32, lambda: Partition) -> Result<ClassType> {
        ClassType::new(vec![(degree, lambda)])
    }

    pub fn components(&self) -> &[(u32, Partition)] {
        &self.components
    }

    pub fn is_primary(&self) -> bool {
        self.components.len() == 1
    }

    /// Dimension of the space an operator of this type acts on.
    pub fn size(&self) -> u32 {
        self.components.iter().map(|(d, p)| d * p.size()).sum()
    }

    /// Number of components of each degree.
    pub fn degree_counts(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for (d, _) in &self.components {
            *m.entry(*d).or_insert(0) += 1;
        }
        m
    }

    /// Whether an operator of this type exists over `F_q`.
    pub fn realizable_over(&self, q: u64) -> Result<bool> {
        for (e, count) in self.degree_counts() {
            if beta(q, e)? < BigUint::from(count) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every class type of size `n`.
    pub fn all_of_size(n: u32) -> Vec<ClassType> {
        let mut atoms = Vec::new();
        for e in 1..=n {
            for s in 1..=n / e {
                for p in Partition::all(s) {
                    atoms.push((e, p));
                }
            }
        }
        atoms.sort();
        fn rec(
            atoms: &[(u32, Partition)],
            start: usize,
            left: u32,
            cur: &mut Vec<(u32, Partition)>,
            out: &mut Vec<ClassType>,
        ) {
            if left == 0 {
                out.push(ClassType {
                    components: cur.clone(),
                });
                return;
            }
            for i in start..atoms.len() {
                let w = atoms[i].0 * atoms[i].1.size();
                if w <= left {
                    cur.push(atoms[i].clone());
                    rec(atoms, i, left - w, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(&atoms, 0, n, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl FromStr for ClassType {
    type Err = Error;

    fn from_str(text: &str) -> Result<ClassType> {
        let mut components = Vec::new();
        for comp in text.split(';') {
            let (deg, parts) = comp
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("component {comp:?} lacks ':'")))?;
            let deg: u32 = deg
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree {deg:?}")))?;
            let parts = parts
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad part {p:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if deg == 0 {
                return Err(Error::Parse("degree must be positive".into()));
            }
            components.push((deg, Partition::new(parts)?));
        }
        ClassType::new(components)
    }
}

pub fn parse_type(text: &str) -> Result<ClassType> {
    text.parse()
}

/// Inverse of [`parse_type`], components in sorted order.
impl fmt::Display for ClassType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (d, p)) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{d}:{p}")?;
        }
        Ok(())
    }
}

pub fn format_type(tau: &ClassType) -> String {
    format!("{tau}")
}

/// Number of monic irreducible polynomials of degree `n` over `F_q`:
/// `(1/n) Σ_{d | n} μ(d) q^{n/d}`.
pub fn beta(q: u64, n: u32) -> Result<BigUint> {
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    if n == 0 {
        return Err(Error::InvalidParams("degree must be positive".into()));
    }
    let qb = BigInt::from(q);
    let mut sum = BigInt::zero();
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let mu = mobius(d as u64);
        if mu != 0 {
            sum += BigInt::from(mu) * num_traits::pow(qb.clone(), (n / d) as usize);
        }
    }
    debug_assert!(!sum.is_negative());
    let (quot, rem) = num_integer::Integer::div_rem(&sum, &BigInt::from(n));
    debug_assert!(rem.is_zero());
    Ok(quot.to_biguint().expect("nonnegative"))
}

/// Smallest prime power over which an operator of type `tau` exists.
pub fn q0(tau: &ClassType) -> u64 {
    prime_powers()
        .find(|&q| tau.realizable_over(q).expect("q is a prime power"))
        .expect("every type is realizable over a large enough field")
}

/// Block-diagonal operator of type `tau` over `field`: one companion block
/// of `p^{λ_j}` per part, where the components of each degree receive the
/// lexicographically least distinct irreducibles of that degree.
pub fn canonical_operator(tau: &ClassType, field: &Field) -> Result<Matrix> {
    let q = field.order() as u64;
    if !tau.realizable_over(q)? {
        return Err(Error::FieldTooSmall { q, q0: q0(tau) });
    }
    let mut pools: BTreeMap<u32, Vec<Vec<u32>>> = BTreeMap::new();
    for (e, count) in tau.degree_counts() {
        let mut polys = enumerate_irreducibles(field, e, count)?;
        polys.reverse();
        pools.insert(e, polys);
    }
    let parts: Vec<(Vec<u32>, Partition)> = tau
        .components()
        .iter()
        .map(|(e, lambda)| {
            let p = pools.get_mut(e).and_then(Vec::pop).expect("pool sized by degree_counts");
            (p, lambda.clone())
        })
        .collect();
    Ok(operator_from_primaries(field, &parts))
}

/// Block-diagonal operator with a companion block of `p^{λ_j}` for every
/// given irreducible `p` and every part `λ_j` of its partition.
pub fn operator_from_primaries(field: &Field, parts: &[(Vec<u32>, Partition)]) -> Matrix {
    let blocks: Vec<Matrix> = parts
        .iter()
        .flat_map(|(p, lambda)| {
            lambda
                .parts()
                .iter()
                .map(move |&l| Matrix::companion(field, &poly::pow(field, p, l)))
        })
        .collect();
    Matrix::block_diag(field, &blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn parse_examples() {
        let t: ClassType = "1:3,1;2:2".parse().unwrap();
        assert_eq!(t.components(), &[(1, part(&[3, 1])), (2, part(&[2]))]);
        assert_eq!(t.size(), 8);
        let t: ClassType = "4:1".parse().unwrap();
        assert_eq!(t.size(), 4);
        assert!(matches!("1:1,2".parse::<ClassType>(), Err(Error::InvalidPartition(_))));
        assert!(matches!("1:0".parse::<ClassType>(), Err(Error::InvalidPartition(_))));
        assert!(matches!("1;2".parse::<ClassType>(), Err(Error::Parse(_))));
        assert!(matches!("x:1".parse::<ClassType>(), Err(Error::Parse(_))));
        assert!(matches!("".parse::<ClassType>(), Err(Error::Parse(_))));
    }

    #[test]
    fn format_sorts_and_keeps_duplicates() {
        let t: ClassType = "2:2;1:1;1:1".parse().unwrap();
        assert_eq!(t.to_string(), "1:1;1:1;2:2");
        assert_eq!(t.to_string().parse::<ClassType>().unwrap(), t);
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta(2, 1).unwrap(), BigUint::from(2u32));
        assert_eq!(beta(2, 3).unwrap(), BigUint::from(2u32));
        assert_eq!(beta(3, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(beta(4, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(beta(6, 2), Err(Error::NotPrimePower(6)));
    }

    #[test]
    fn q0_examples() {
        assert_eq!(q0(&"1:5".parse().unwrap()), 2);
        assert_eq!(q0(&"1:1;1:1;1:1".parse().unwrap()), 3);
        let seven = (0..7).map(|_| "2:1").collect::<Vec<_>>().join(";");
        assert_eq!(q0(&seven.parse().unwrap()), 5);
    }

    #[test]
    fn canonical_operator_examples() {
        let f2 = Field::new(2, 1).unwrap();
        let t = canonical_operator(&"1:2".parse().unwrap(), &f2).unwrap();
        assert_eq!(t, Matrix::companion(&f2, &[0, 0, 1]));
        let t = canonical_operator(&"2:1".parse().unwrap(), &f2).unwrap();
        assert_eq!(t, Matrix::companion(&f2, &[1, 1, 1]));
        let t = canonical_operator(&"1:1;1:1".parse().unwrap(), &f2).unwrap();
        assert_eq!(t, Matrix::from_rows(&f2, &[vec![0, 0], vec![0, 1]]));
        assert_eq!(
            canonical_operator(&"1:1;1:1;1:1".parse().unwrap(), &f2),
            Err(Error::FieldTooSmall { q: 2, q0: 3 })
        );
    }

    #[test]
    fn subpartition_examples() {
        assert_eq!(subpartitions(&part(&[2, 1]), 1), vec![part(&[1])]);
        assert_eq!(subpartitions(&part(&[2, 1]), 2), vec![part(&[2]), part(&[1, 1])]);
        assert_eq!(subpartitions(&part(&[2]), 2), vec![part(&[2])]);
        assert_eq!(subpartitions(&part(&[2]), 0), vec![Partition::empty()]);
        assert!(subpartitions(&part(&[2]), 3).is_empty());
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(part(&[3, 1]).conjugate(), part(&[2, 1, 1]));
        assert_eq!(part(&[1, 1, 1]).conjugate(), part(&[3]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..8).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 3, 5, 7, 11, 15]);
    }

    #[test]
    fn class_type_counts() {
        // Sizes 1..4: types are multisets of (degree, partition).
        let counts: Vec<usize> = (1..5).map(|n| ClassType::all_of_size(n).len()).collect();
        assert_eq!(counts, [1, 4, 8, 22]);
    }
}
