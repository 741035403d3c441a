//! Counting the flag sets `[(a_{1,1},a_{1,2}), ..., (a_{r,1},a_{r,2})]_T`.
//!
//! A tuple labels the set of sequences `(W_1, ..., W_r)` of subspaces with
//! `dim W_i = a_{i,1}`, `dim(W_i ∩ T^{-1} W_i) = a_{i,2}` and
//! `W_i ⊇ W_{i+1} + T W_{i+1}`. Diagonal tuples (`a_{i,1} = a_{i,2}` for all
//! `i`) are flags of invariant subspaces; every other tuple is reduced to
//! strictly smaller tuples by an inclusion-exclusion recursion whose
//! coefficients are Gaussian binomials. The recursion is generic over a
//! [`CountBackend`], which supplies the diagonal base cases and the
//! coefficient ring.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::classtype::ClassType;
use crate::error::{Error, Result};
use crate::gf::{enumerate_subspaces, Matrix, Subspace};
use crate::lattice::{brute_invariant_flags, count_chains, PhiEngine, ScaleLimit};
use crate::qpoly::{GaussianTable, IntGaussianTable, QPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagTuple {
    ambient: u32,
    pairs: Vec<(u32, u32)>,
}

impl FlagTuple {
    pub fn new(ambient: u32, pairs: Vec<(u32, u32)>) -> FlagTuple {
        FlagTuple { ambient, pairs }
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_diagonal(&self) -> bool {
        self.pairs.iter().all(|(a, b)| a == b)
    }

    /// Parses `"a11,a12;a21,a22;..."`; the empty string is the empty tuple.
    pub fn parse(text: &str, ambient: u32) -> Result<FlagTuple> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(FlagTuple::new(ambient, Vec::new()));
        }
        let pairs = text
            .split(';')
            .map(|pair| {
                let (a, b) = pair
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("pair {pair:?} lacks ','")))?;
                let num = |s: &str| {
                    s.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad tuple entry {s:?}")))
                };
                Ok((num(a)?, num(b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FlagTuple::new(ambient, pairs))
    }

    /// Every tuple of length `r` over ambient `n` that passes
    /// [`validate_tuple`].
    pub fn all_valid(n: u32, r: usize) -> Vec<FlagTuple> {
        fn rec(n: u32, r: usize, prev: (u32, u32), cur: &mut Vec<(u32, u32)>, out: &mut Vec<FlagTuple>) {
            if cur.len() == r {
                out.push(FlagTuple::new(n, cur.clone()));
                return;
            }
            for a in 0..=prev.1 {
                for b in 0..=a {
                    // a_{i-1,1} >= 2 a_{i,1} - a_{i,2}
                    if prev.0 + b >= 2 * a {
                        cur.push((a, b));
                        rec(n, r, (a, b), cur, out);
                        cur.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        rec(n, r, (n, n), &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for FlagTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{a},{b}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TupleStatus {
    Valid,
    /// The labeled set is empty.
    Empty,
}

pub fn validate_tuple(t: &FlagTuple) -> TupleStatus {
    if pairs_valid(t.ambient, &t.pairs) {
        TupleStatus::Valid
    } else {
        TupleStatus::Empty
    }
}

fn pairs_valid(n: u32, pairs: &[(u32, u32)]) -> bool {
    let mut prev = (n, n);
    for &(a, b) in pairs {
        if !(prev.1 >= a && a >= b) || prev.0 + b < 2 * a {
            return false;
        }
        prev = (a, b);
    }
    true
}

/// `(a, b) ⪰ (a', b')` iff `a > a'`, or `a = a'` and `b <= b'`.
fn pair_cmp(x: (u32, u32), y: (u32, u32)) -> Ordering {
    x.0.cmp(&y.0).then(y.1.cmp(&x.1))
}

fn pairs_cmp(x: &[(u32, u32)], y: &[(u32, u32)]) -> Ordering {
    x.iter()
        .zip(y)
        .map(|(&a, &b)| pair_cmp(a, b))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Lexicographic extension of the pair order, left to right.
pub fn compare_tuples(t1: &FlagTuple, t2: &FlagTuple) -> Result<Ordering> {
    if t1.len() != t2.len() {
        return Err(Error::LengthMismatch {
            left: t1.len(),
            right: t2.len(),
        });
    }
    Ok(pairs_cmp(&t1.pairs, &t2.pairs))
}

/// Ring of count values.
pub trait CountValue: Clone + PartialEq + fmt::Debug + Zero {
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
}

macro_rules! count_value {
    ($t:ty) => {
        impl CountValue for $t {
            fn add_ref(&self, rhs: &Self) -> Self {
                self + rhs
            }
            fn sub_ref(&self, rhs: &Self) -> Self {
                self - rhs
            }
            fn mul_ref(&self, rhs: &Self) -> Self {
                self * rhs
            }
        }
    };
}

count_value!(QPoly);
count_value!(BigInt);

/// Source of base cases and Gaussian binomials for the recursion.
pub trait CountBackend {
    type Value: CountValue;

    /// Dimension of the space the operator acts on.
    fn ambient(&self) -> u32;

    /// Number of flags of invariant subspaces with the given dimensions.
    fn base(&mut self, dims: &[u32]) -> Result<Self::Value>;

    fn gaussian(&mut self, n: i64, k: i64) -> Self::Value;
}

/// Counts as polynomials in `q` for a class type.
pub struct Symbolic {
    tau: ClassType,
    phi: PhiEngine,
    gauss: GaussianTable,
}

impl Symbolic {
    pub fn new(tau: ClassType) -> Symbolic {
        Symbolic {
            tau,
            phi: PhiEngine::new(),
            gauss: GaussianTable::new(),
        }
    }

    pub fn class_type(&self) -> &ClassType {
        &self.tau
    }
}

impl CountBackend for Symbolic {
    type Value = QPoly;

    fn ambient(&self) -> u32 {
        self.tau.size()
    }

    fn base(&mut self, dims: &[u32]) -> Result<QPoly> {
        self.phi.phi(&self.tau, dims)
    }

    fn gaussian(&mut self, n: i64, k: i64) -> QPoly {
        self.gauss.get(n, k).clone()
    }
}

/// Integer counts for a concrete operator; base cases by enumeration.
pub struct Concrete {
    op: Matrix,
    gauss: IntGaussianTable,
    limit: ScaleLimit,
    base_memo: BTreeMap<Vec<u32>, BigInt>,
}

impl Concrete {
    pub fn new(op: Matrix, limit: ScaleLimit) -> Result<Concrete> {
        if !op.is_square() {
            return Err(Error::InvalidBackend("operator must be square".into()));
        }
        let q = BigInt::from(op.field().order());
        Ok(Concrete {
            op,
            gauss: IntGaussianTable::new(q),
            limit,
            base_memo: BTreeMap::new(),
        })
    }

    pub fn operator(&self) -> &Matrix {
        &self.op
    }
}

impl CountBackend for Concrete {
    type Value = BigInt;

    fn ambient(&self) -> u32 {
        self.op.rows() as u32
    }

    fn base(&mut self, dims: &[u32]) -> Result<BigInt> {
        if let Some(v) = self.base_memo.get(dims) {
            return Ok(v.clone());
        }
        let v = BigInt::from(brute_invariant_flags(&self.op, dims, self.limit)?);
        self.base_memo.insert(dims.to_vec(), v.clone());
        Ok(v)
    }

    fn gaussian(&mut self, n: i64, k: i64) -> BigInt {
        self.gauss.get(n, k).clone()
    }
}

/// One term of a recursion sum: a smaller tuple and the Gaussian binomial
/// arguments of its coefficient.
struct Term {
    pairs: Vec<(u32, u32)>,
    binomials: Vec<(i64, i64)>,
}

fn cartesian(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

fn entries(n: u32, pairs: &[(u32, u32)]) -> (Vec<(i64, i64)>, usize) {
    // a[0] = (N, N), a[1..=r] = pairs, a[r+1] = (0, 0)
    let mut a = Vec::with_capacity(pairs.len() + 2);
    a.push((n as i64, n as i64));
    a.extend(pairs.iter().map(|&(x, y)| (x as i64, y as i64)));
    a.push((0, 0));
    (a, pairs.len())
}

/// Terms of the sum over `A`:
/// `j_i` from `max(a_{i+1,2}, 2a_{i,2} - a_{i,1})` to `a_{i,2}`.
fn a_terms(n: u32, pairs: &[(u32, u32)]) -> Vec<Term> {
    let (a, r) = entries(n, pairs);
    let ranges: Vec<(i64, i64)> = (1..=r)
        .map(|i| (a[i + 1].1.max(2 * a[i].1 - a[i].0), a[i].1))
        .collect();
    cartesian(&ranges)
        .into_iter()
        .map(|j| Term {
            pairs: (1..=r).map(|i| (a[i].1 as u32, j[i - 1] as u32)).collect(),
            binomials: (1..=r)
                .map(|i| {
                    let s = 2 * a[i].1 - j[i - 1];
                    (a[i - 1].1 - s, a[i].0 - s)
                })
                .collect(),
        })
        .collect()
}

/// Terms of the sum over `B`: `k_i` from `a_{i,2}` to `a_{i,1}`.
fn b_terms(n: u32, pairs: &[(u32, u32)], include_diagonal: bool) -> Vec<Term> {
    let (a, r) = entries(n, pairs);
    let ranges: Vec<(i64, i64)> = (1..=r).map(|i| (a[i].1, a[i].0)).collect();
    cartesian(&ranges)
        .into_iter()
        .filter(|k| include_diagonal || (1..=r).any(|i| k[i - 1] != a[i].1))
        .map(|k| Term {
            pairs: (1..=r).map(|i| (a[i].0 as u32, k[i - 1] as u32)).collect(),
            binomials: (1..=r)
                .map(|i| (k[i - 1] - a[i + 1].0, a[i].1 - a[i + 1].0))
                .collect(),
        })
        .collect()
}

/// Memoized recursion over one backend. The memo is keyed by tuple only,
/// so a counter must not be shared between backends.
pub struct FlagCounter<B: CountBackend> {
    backend: B,
    memo: BTreeMap<Vec<(u32, u32)>, B::Value>,
}

impl<B: CountBackend> FlagCounter<B> {
    pub fn new(backend: B) -> Self {
        FlagCounter {
            backend,
            memo: BTreeMap::new(),
        }
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    fn check_ambient(&self, t: &FlagTuple) -> Result<()> {
        if t.ambient == self.backend.ambient() {
            Ok(())
        } else {
            Err(Error::InvalidBackend(format!(
                "tuple ambient {} but operator acts on dimension {}",
                t.ambient,
                self.backend.ambient()
            )))
        }
    }

    /// `|[(a_{1,1},a_{1,2}), ..., (a_{r,1},a_{r,2})]|`.
    pub fn count(&mut self, t: &FlagTuple) -> Result<B::Value> {
        self.check_ambient(t)?;
        self.count_pairs(&t.pairs)
    }

    fn coefficient(&mut self, binomials: &[(i64, i64)]) -> B::Value {
        let mut acc: Option<B::Value> = None;
        for &(n, k) in binomials {
            let g = self.backend.gaussian(n, k);
            if g.is_zero() {
                return g;
            }
            acc = Some(match acc {
                None => g,
                Some(a) => a.mul_ref(&g),
            });
        }
        acc.unwrap_or_else(|| self.backend.gaussian(0, 0))
    }

    fn sum_terms(&mut self, terms: Vec<Term>, caller: &[(u32, u32)], strict: bool) -> Result<B::Value> {
        let mut total = B::Value::zero();
        for term in terms {
            if strict {
                debug_assert_eq!(
                    pairs_cmp(&term.pairs, caller),
                    Ordering::Less,
                    "recursion must descend: {:?} from {:?}",
                    term.pairs,
                    caller
                );
            }
            let c = self.coefficient(&term.binomials);
            if c.is_zero() {
                continue;
            }
            let v = self.count_pairs(&term.pairs)?;
            total = total.add_ref(&v.mul_ref(&c));
        }
        Ok(total)
    }

    fn count_pairs(&mut self, pairs: &[(u32, u32)]) -> Result<B::Value> {
        let n = self.backend.ambient();
        if !pairs_valid(n, pairs) {
            return Ok(B::Value::zero());
        }
        if pairs.iter().all(|(a, b)| a == b) {
            let dims: Vec<u32> = pairs.iter().map(|p| p.0).collect();
            return self.backend.base(&dims);
        }
        if let Some(v) = self.memo.get(pairs) {
            return Ok(v.clone());
        }
        let a_sum = self.sum_terms(a_terms(n, pairs), pairs, true)?;
        let b_sum = self.sum_terms(b_terms(n, pairs, false), pairs, true)?;
        let v = a_sum.sub_ref(&b_sum);
        self.memo.insert(pairs.to_vec(), v.clone());
        Ok(v)
    }

    /// Both sides `(L, R)` of the double-counting identity behind the
    /// recursion: the full sum over `A` and the full sum over `B`
    /// including the tuple itself.
    pub fn lr_sides(&mut self, t: &FlagTuple) -> Result<(B::Value, B::Value)> {
        self.check_ambient(t)?;
        if validate_tuple(t) == TupleStatus::Empty {
            return Err(Error::InvalidParams(format!("tuple {t} labels an empty set")));
        }
        let n = t.ambient;
        let l = self.sum_terms(a_terms(n, &t.pairs), &t.pairs, false)?;
        let r = self.sum_terms(b_terms(n, &t.pairs, true), &t.pairs, false)?;
        Ok((l, r))
    }

    pub fn lr_consistency(&mut self, t: &FlagTuple) -> Result<bool> {
        let (l, r) = self.lr_sides(t)?;
        Ok(l == r)
    }
}

/// `flag_count` over a class type.
pub fn flag_count_symbolic(tau: &ClassType, t: &FlagTuple) -> Result<QPoly> {
    FlagCounter::new(Symbolic::new(tau.clone())).count(t)
}

/// `flag_count` over a concrete operator.
pub fn flag_count_concrete(op: &Matrix, t: &FlagTuple, limit: ScaleLimit) -> Result<BigUint> {
    let v = FlagCounter::new(Concrete::new(op.clone(), limit)?).count(t)?;
    Ok(v.to_biguint().expect("counts are nonnegative"))
}

/// Direct enumeration of the flag set labeled by `t`.
pub fn brute_flag_count(op: &Matrix, t: &FlagTuple, limit: ScaleLimit) -> Result<BigUint> {
    if !op.is_square() || op.rows() != t.ambient as usize {
        return Err(Error::DimensionMismatch {
            expected: t.ambient as usize,
            got: op.rows(),
        });
    }
    let n = op.rows();
    let q = op.field().order();
    if t.is_empty() {
        return Ok(BigUint::one());
    }
    // (W, W + TW) for each admissible W at each level
    let mut levels: Vec<Vec<(Subspace, Subspace)>> = Vec::with_capacity(t.len());
    for &(a, b) in &t.pairs {
        let a = a as usize;
        if a > n {
            return Ok(BigUint::zero());
        }
        limit.check_grassmannian(q, n, a)?;
        let level = enumerate_subspaces(op.field(), n, a)
            .filter_map(|w| {
                let back = w.preimage(op).expect("square operator");
                let inner = w.intersect(&back).expect("same ambient").dim();
                if inner != b as usize {
                    return None;
                }
                let grown = w.sum(&w.image(op).expect("square operator")).expect("same ambient");
                Some((w, grown))
            })
            .collect();
        levels.push(level);
    }
    let refs: Vec<&Vec<(Subspace, Subspace)>> = levels.iter().collect();
    count_chains(&refs, |upper, lower| upper.0.contains(&lower.1))
}

/// The same identity as [`FlagCounter::lr_sides`] with every term counted
/// by direct enumeration.
pub fn brute_lr_sides(op: &Matrix, t: &FlagTuple, limit: ScaleLimit) -> Result<(BigInt, BigInt)> {
    if validate_tuple(t) == TupleStatus::Empty {
        return Err(Error::InvalidParams(format!("tuple {t} labels an empty set")));
    }
    let mut gauss = IntGaussianTable::new(BigInt::from(op.field().order()));
    let mut side = |terms: Vec<Term>| -> Result<BigInt> {
        let mut total = BigInt::zero();
        for term in terms {
            let c: BigInt = term
                .binomials
                .iter()
                .map(|&(n, k)| gauss.get(n, k).clone())
                .product();
            if c.is_zero() {
                continue;
            }
            let sub = FlagTuple::new(t.ambient, term.pairs);
            total += BigInt::from(brute_flag_count(op, &sub, limit)?) * c;
        }
        Ok(total)
    };
    let l = side(a_terms(t.ambient, &t.pairs))?;
    let r = side(b_terms(t.ambient, &t.pairs, true))?;
    Ok((l, r))
}
