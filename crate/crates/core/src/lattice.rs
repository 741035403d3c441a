//! Counting invariant subspaces and flags of invariant subspaces.
//!
//! The symbolic side works on class types: [`alpha_poly`] counts invariant
//! subspaces of a primary operator by the type of the restriction, and
//! [`PhiEngine`] combines these into flag counts for arbitrary types,
//! first within each primary part and then across parts. The brute-force
//! side enumerates subspaces of a concrete operator.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::classtype::{subpartitions, ClassType, Partition};
use crate::error::{Error, Result};
use crate::gf::{enumerate_subspaces, Matrix, Subspace};
use crate::qpoly::{GaussianTable, IntGaussianTable, QPoly};

/// Upper bound on brute-force enumeration work.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScaleLimit(pub u128);

impl ScaleLimit {
    pub const DEFAULT: ScaleLimit = ScaleLimit(10_000_000);

    pub fn check(&self, needed: &BigUint) -> Result<()> {
        if *needed > BigUint::from(self.0) {
            Err(Error::ScaleLimit {
                needed: needed.clone(),
                limit: self.0,
            })
        } else {
            Ok(())
        }
    }

    /// Cost of visiting every `k`-subspace of `F_q^n`: `q^n [n k]_q`.
    pub fn check_grassmannian(&self, q: u32, n: usize, k: usize) -> Result<()> {
        let qb = BigInt::from(q);
        let count = IntGaussianTable::new(qb.clone()).get(n as i64, k as i64).clone();
        let cost = num_traits::pow(qb, n) * count;
        self.check(&cost.to_biguint().expect("nonnegative"))
    }
}

impl Default for ScaleLimit {
    fn default() -> Self {
        ScaleLimit::DEFAULT
    }
}

/// Invariant flags query: a class type and a weakly decreasing dimension
/// profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiQuery {
    pub tau: ClassType,
    pub dims: Vec<u32>,
}

impl PhiQuery {
    pub fn new(tau: ClassType, dims: Vec<u32>) -> Result<PhiQuery> {
        check_dims(&dims, tau.size() as usize)?;
        Ok(PhiQuery { tau, dims })
    }
}

fn check_dims(dims: &[u32], n: usize) -> Result<()> {
    if dims.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidDims(format!("{dims:?} is not weakly decreasing")));
    }
    if dims.first().is_some_and(|&a| a as usize > n) {
        return Err(Error::InvalidDims(format!("{dims:?} exceeds ambient dimension {n}")));
    }
    Ok(())
}

/// Number of subgroups of type `μ` in an abelian `p`-group of type `λ`,
/// with `p = q^e`:
/// `Π_i p^{μ'_{i+1}(λ'_i - μ'_i)} [λ'_i - μ'_{i+1}, μ'_i - μ'_{i+1}]_p`.
/// Zero unless `μ ⊆ λ`.
pub fn alpha_poly(lambda: &Partition, mu: &Partition, e: u32) -> QPoly {
    alpha_with(lambda, mu, e, &mut GaussianTable::new())
}

fn alpha_with(lambda: &Partition, mu: &Partition, e: u32, table: &mut GaussianTable) -> QPoly {
    if !lambda.contains(mu) {
        return QPoly::zero();
    }
    let lc = lambda.conjugate();
    let mc = mu.conjugate();
    let mut acc = QPoly::one();
    for i in 0..lc.len() {
        let l = lc.part(i) as i64;
        let m = mc.part(i) as i64;
        let next = mc.part(i + 1) as i64;
        let factor = table.get(l - next, m - next).shift((next * (l - m)) as usize);
        acc = &acc * &factor;
    }
    acc.substitute_power(e as usize)
}

type Components = Vec<(u32, Partition)>;

/// Memoized flag counts `φ_q(a_1, ..., a_r; τ)` as polynomials in `q`.
#[derive(Default)]
pub struct PhiEngine {
    gauss: GaussianTable,
    alpha: BTreeMap<(Partition, Partition, u32), QPoly>,
    primary: BTreeMap<(u32, Partition, Vec<u32>), QPoly>,
    general: BTreeMap<(Components, Vec<u32>), QPoly>,
}

impl PhiEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of flags `W_1 ⊇ ... ⊇ W_r` of invariant subspaces with
    /// `dim W_i = dims[i]`, valid for every `q >= q0(tau)`.
    pub fn phi(&mut self, tau: &ClassType, dims: &[u32]) -> Result<QPoly> {
        check_dims(dims, tau.size() as usize)?;
        Ok(self.components(tau.components(), trim_zeros(dims)))
    }

    fn alpha(&mut self, lambda: &Partition, mu: &Partition, e: u32) -> QPoly {
        let key = (lambda.clone(), mu.clone(), e);
        if let Some(v) = self.alpha.get(&key) {
            return v.clone();
        }
        let v = alpha_with(lambda, mu, e, &mut self.gauss);
        self.alpha.insert(key, v.clone());
        v
    }

    fn components(&mut self, comps: &[(u32, Partition)], dims: &[u32]) -> QPoly {
        if dims.is_empty() {
            return QPoly::one();
        }
        if let [(e, lambda)] = comps {
            return self.primary(*e, lambda, dims);
        }
        let key = (comps.to_vec(), dims.to_vec());
        if let Some(v) = self.general.get(&key) {
            return v.clone();
        }
        let (first, rest) = comps.split_first().expect("at least one component");
        let first_size = first.0 * first.1.size();
        let rest_size: u32 = rest.iter().map(|(e, l)| e * l.size()).sum();
        let mut columns = Vec::new();
        split_columns(dims, first_size, rest_size, &mut Vec::new(), &mut columns);
        let mut total = QPoly::zero();
        for col in columns {
            let restdims: Vec<u32> = dims.iter().zip(&col).map(|(a, c)| a - c).collect();
            let a = self.primary(first.0, &first.1, trim_zeros(&col));
            if a.is_zero() {
                continue;
            }
            let b = self.components(rest, trim_zeros(&restdims));
            total += &(&a * &b);
        }
        self.general.insert(key, total.clone());
        total
    }

    fn primary(&mut self, e: u32, lambda: &Partition, dims: &[u32]) -> QPoly {
        let Some((&a1, tail)) = dims.split_first() else {
            return QPoly::one();
        };
        if a1 > e * lambda.size() || a1 % e != 0 {
            return QPoly::zero();
        }
        let key = (e, lambda.clone(), dims.to_vec());
        if let Some(v) = self.primary.get(&key) {
            return v.clone();
        }
        let mut total = QPoly::zero();
        for mu in subpartitions(lambda, a1 / e) {
            let a = self.alpha(lambda, &mu, e);
            let b = self.primary(e, &mu, trim_zeros(tail));
            total += &(&a * &b);
        }
        self.primary.insert(key, total.clone());
        total
    }
}

fn trim_zeros(dims: &[u32]) -> &[u32] {
    let end = dims.iter().rposition(|&a| a != 0).map_or(0, |i| i + 1);
    &dims[..end]
}

/// Weakly decreasing columns `c` with `c_1 <= first`, leaving a weakly
/// decreasing remainder `dims - c` with first entry at most `rest`.
fn split_columns(dims: &[u32], first: u32, rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let i = cur.len();
    if i == dims.len() {
        out.push(cur.clone());
        return;
    }
    let (hi_prev, rem_prev) = match i {
        0 => (first, rest),
        _ => (cur[i - 1], dims[i - 1] - cur[i - 1]),
    };
    let a = dims[i];
    let lo = a.saturating_sub(rem_prev);
    let hi = hi_prev.min(a);
    for c in lo..=hi {
        cur.push(c);
        split_columns(dims, first, rest, cur, out);
        cur.pop();
    }
}

/// `phi_poly` as a one-shot call.
pub fn phi_poly(query: &PhiQuery) -> Result<QPoly> {
    PhiEngine::new().phi(&query.tau, &query.dims)
}

fn check_square(t: &Matrix) -> Result<usize> {
    if t.is_square() {
        Ok(t.rows())
    } else {
        Err(Error::DimensionMismatch {
            expected: t.rows(),
            got: t.cols(),
        })
    }
}

/// All `k`-dimensional `T`-invariant subspaces, by filtering the
/// Grassmannian.
pub fn invariant_subspaces(t: &Matrix, k: usize, limit: ScaleLimit) -> Result<Vec<Subspace>> {
    let n = check_square(t)?;
    if k > n {
        return Err(Error::InvalidDims(format!("dimension {k} exceeds {n}")));
    }
    limit.check_grassmannian(t.field().order(), n, k)?;
    Ok(enumerate_subspaces(t.field(), n, k)
        .filter(|w| w.is_invariant(t).expect("square operator"))
        .collect())
}

/// Number of `k`-dimensional `T`-invariant subspaces.
pub fn brute_invariant_subspaces(t: &Matrix, k: usize, limit: ScaleLimit) -> Result<BigUint> {
    Ok(BigUint::from(invariant_subspaces(t, k, limit)?.len()))
}

/// Number of nested flags of `T`-invariant subspaces with the given
/// dimensions.
pub fn brute_invariant_flags(t: &Matrix, dims: &[u32], limit: ScaleLimit) -> Result<BigUint> {
    let n = check_square(t)?;
    check_dims(dims, n)?;
    if dims.is_empty() {
        return Ok(BigUint::one());
    }
    let mut by_dim: BTreeMap<u32, Vec<Subspace>> = BTreeMap::new();
    for &a in dims {
        if let alloc::collections::btree_map::Entry::Vacant(e) = by_dim.entry(a) {
            e.insert(invariant_subspaces(t, a as usize, limit)?);
        }
    }
    count_chains(dims.iter().map(|a| &by_dim[a]).collect::<Vec<_>>().as_slice(), |big, small| {
        big.contains(small)
    })
}

/// Counts sequences `(x_1, ..., x_r)` with `x_i` from `levels[i]` and
/// `linked(x_i, x_{i+1})` for every consecutive pair.
pub(crate) fn count_chains<T>(levels: &[&Vec<T>], linked: impl Fn(&T, &T) -> bool) -> Result<BigUint> {
    let Some((last, upper)) = levels.split_last() else {
        return Ok(BigUint::one());
    };
    let mut counts: Vec<BigUint> = vec![BigUint::one(); last.len()];
    let mut below = *last;
    for level in upper.iter().rev() {
        counts = level
            .iter()
            .map(|x| {
                below
                    .iter()
                    .zip(&counts)
                    .filter(|(y, _)| linked(x, y))
                    .map(|(_, c)| c.clone())
                    .sum()
            })
            .collect();
        below = level;
    }
    Ok(counts.into_iter().sum())
}

/// The whole invariant-subspace lattice of `T`, generated from `{0}` by
/// repeatedly adding cyclic subspaces `span{v, Tv, T^2 v, ...}`.
///
/// Work is the number of candidate vectors tried, `Σ_W q^{n - dim W}`.
pub fn invariant_lattice(t: &Matrix, limit: ScaleLimit) -> Result<Vec<Subspace>> {
    let n = check_square(t)?;
    let field = t.field().clone();
    let q = field.order();
    let mut seen: BTreeSet<Subspace> = BTreeSet::new();
    let mut queue = vec![Subspace::zero(&field, n)];
    seen.insert(queue[0].clone());
    let mut work: u128 = 0;
    while let Some(w) = queue.pop() {
        let free: Vec<usize> = (0..n).filter(|c| !w.pivots().contains(c)).collect();
        work += (q as u128).pow(free.len() as u32);
        if work > limit.0 {
            return Err(Error::ScaleLimit {
                needed: BigUint::from(work),
                limit: limit.0,
            });
        }
        let mut digits = vec![0u32; free.len()];
        while crate::gf::odometer(&mut digits, q) {
            let mut v = vec![0u32; n];
            for (&c, &d) in free.iter().zip(&digits) {
                v[c] = d;
            }
            let mut gens: Vec<Vec<u32>> = w.basis_rows().map(<[u32]>::to_vec).collect();
            let mut x = v;
            for _ in 0..n - w.dim() {
                let next = t.apply(&x);
                gens.push(x);
                x = next;
            }
            let bigger = Subspace::from_vectors(&field, n, &gens);
            if !seen.contains(&bigger) {
                seen.insert(bigger.clone());
                queue.push(bigger);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Partition `μ` such that the restriction of a `p`-primary `T` to the
/// invariant subspace `W` has type `{(deg p, μ)}`, read off from
/// `dim (W ∩ ker p(T)^j)`.
pub fn restriction_partition(t: &Matrix, p: &[u32], w: &Subspace) -> Result<Partition> {
    let e = (p.len() - 1) as u32;
    let pt = t.eval_poly(p);
    let mut power = Matrix::identity(t.field(), t.rows());
    let mut prev = 0u32;
    let mut conj = Vec::new();
    while (prev as usize) < w.dim() {
        power = power.mul(&pt)?;
        let d = power.kernel().intersect(w)?.dim() as u32;
        if d == prev {
            return Err(Error::InvalidParams("operator is not p-primary on W".into()));
        }
        if !(d - prev).is_multiple_of(e) {
            return Err(Error::InvalidParams("kernel dimension not a multiple of deg p".into()));
        }
        conj.push((d - prev) / e);
        prev = d;
    }
    Ok(Partition::new(conj)?.conjugate())
}

/// Number of invariant subspaces `W` of the `p`-primary operator `T` on
/// which `T` restricts to type `{(deg p, μ)}`.
pub fn brute_subtype_count(t: &Matrix, p: &[u32], mu: &Partition, limit: ScaleLimit) -> Result<BigUint> {
    let e = (p.len() - 1) as u32;
    let target = (e * mu.size()) as usize;
    let mut count = BigUint::zero();
    for w in invariant_lattice(t, limit)? {
        if w.dim() == target && restriction_partition(t, p, &w)? == *mu {
            count += 1u32;
        }
    }
    Ok(count)
}

/// Number of invariant subspaces of the `p`-primary operator `T` for each
/// restriction type, from one pass over the lattice.
pub fn subtype_census(t: &Matrix, p: &[u32], limit: ScaleLimit) -> Result<BTreeMap<Partition, BigUint>> {
    let mut census: BTreeMap<Partition, BigUint> = BTreeMap::new();
    for w in invariant_lattice(t, limit)? {
        *census.entry(restriction_partition(t, p, &w)?).or_default() += 1u32;
    }
    Ok(census)
}
