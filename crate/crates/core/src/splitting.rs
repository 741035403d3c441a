//! Splitting subspaces.
//!
//! An `m`-dimensional subspace `W` of an `md`-dimensional space `V` is
//! `T`-splitting when `V = W ⊕ TW ⊕ ... ⊕ T^{d-1}W`. Their number
//! `σ(m,d;T)` equals the flag count of the tuple
//! `((d-1)m,(d-2)m), ..., (2m,m), (m,0)`, and depends only on the
//! similarity class type of `T`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::prime_power;
use crate::classtype::{q0, ClassType};
use crate::error::{Error, Result};
use crate::flagrec::{validate_tuple, FlagCounter, FlagTuple, Symbolic, TupleStatus};
use crate::gf::{enumerate_subspaces, odometer, rank_of_rows, Field, Matrix};
use crate::lattice::ScaleLimit;
use crate::qpoly::{gamma_poly, GaussianTable, QPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaQuery {
    m: u32,
    d: u32,
    tau: ClassType,
}

impl SigmaQuery {
    pub fn new(m: u32, d: u32, tau: ClassType) -> Result<SigmaQuery> {
        if m == 0 || d == 0 {
            return Err(Error::InvalidParams("m and d must be positive".into()));
        }
        if m * d != tau.size() {
            return Err(Error::SizeMismatch {
                expected: (m * d) as usize,
                got: tau.size() as usize,
            });
        }
        Ok(SigmaQuery { m, d, tau })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn class_type(&self) -> &ClassType {
        &self.tau
    }
}

/// `((d-1)m,(d-2)m), ..., (2m,m), (m,0)` over ambient `md`.
pub fn splitting_tuple(m: u32, d: u32) -> FlagTuple {
    let pairs = (1..d).rev().map(|i| (i * m, (i - 1) * m)).collect();
    FlagTuple::new(m * d, pairs)
}

/// `σ_q(m,d;τ)` as a polynomial in `q`.
pub fn sigma_poly(query: &SigmaQuery) -> Result<QPoly> {
    if query.d == 1 {
        return Ok(QPoly::one());
    }
    FlagCounter::new(Symbolic::new(query.tau.clone())).count(&splitting_tuple(query.m, query.d))
}

fn check_field(tau: &ClassType, q: u64) -> Result<()> {
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    let least = q0(tau);
    if q < least {
        return Err(Error::FieldTooSmall { q, q0: least });
    }
    Ok(())
}

/// `σ_q(m,d;τ)` at a concrete prime power `q >= q0(τ)`.
pub fn sigma_at(query: &SigmaQuery, q: u64) -> Result<BigUint> {
    check_field(&query.tau, q)?;
    let v = sigma_poly(query)?.eval_u64(q);
    Ok(v.to_biguint().expect("counts are nonnegative"))
}

/// Known closed forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `T` irreducible on `F_q^{md}`.
    Irreducible { m: u32, d: u32 },
    /// `T` cyclic nilpotent on `F_q^{md}`.
    CyclicNilpotent { m: u32, d: u32 },
    /// `m`-dimensional `W` with `W + TW + ... + T^{d-1}W` direct, `T`
    /// cyclic nilpotent on `F_q^n`, `n >= md`.
    DirectKrylov { n: u32, m: u32, d: u32 },
    /// Arbitrary flag count for a cyclic nilpotent operator.
    NilpotentFlags(FlagTuple),
}

pub fn sigma_closed(form: &ClosedForm) -> Result<QPoly> {
    let positive = |m: u32, d: u32| {
        if m == 0 || d == 0 {
            Err(Error::InvalidParams("m and d must be positive".into()))
        } else {
            Ok(())
        }
    };
    match *form {
        ClosedForm::Irreducible { m, d } => {
            positive(m, d)?;
            let (m, d) = (m as usize, d as usize);
            let num = &QPoly::monomial(1, m * d) - &QPoly::one();
            let den = &QPoly::monomial(1, m) - &QPoly::one();
            Ok(num.exact_div(&den)?.shift(m * (m - 1) * (d - 1)))
        }
        ClosedForm::CyclicNilpotent { m, d } => {
            positive(m, d)?;
            Ok(QPoly::monomial(1, (m * m * (d - 1)) as usize))
        }
        ClosedForm::DirectKrylov { n, m, d } => {
            positive(m, d)?;
            if n < m * d {
                return Err(Error::InvalidParams(format!("need n >= md, got n={n}, md={}", m * d)));
            }
            let g = GaussianTable::new().get((n - m * d + m) as i64, m as i64).clone();
            Ok(g.shift((m * m * (d - 1)) as usize))
        }
        ClosedForm::NilpotentFlags(ref t) => {
            if validate_tuple(t) == TupleStatus::Empty {
                return Err(Error::InvalidParams(format!("tuple {t} labels an empty set")));
            }
            let mut a: Vec<(i64, i64)> = Vec::with_capacity(t.len() + 2);
            a.push((t.ambient() as i64, t.ambient() as i64));
            a.extend(t.pairs().iter().map(|&(x, y)| (x as i64, y as i64)));
            a.push((0, 0));
            let mut table = GaussianTable::new();
            let mut acc = QPoly::one();
            for i in 1..=t.len() {
                let g1 = table.get(a[i - 1].0 - a[i].0, a[i].0 - a[i].1).clone();
                let g2 = table.get(a[i].0 - a[i + 1].0, a[i].1 - a[i + 1].0).clone();
                let gap = (a[i].0 - a[i].1) as usize;
                acc = (&(&acc * &g1) * &g2).shift(gap * gap);
            }
            Ok(acc)
        }
    }
}

/// Number of `m`-dimensional `W` for which `W, TW, ..., T^{d-1}W` are
/// independent of total dimension `md`. Works for any `n >= 0`.
pub fn brute_direct_krylov(t: &Matrix, m: u32, d: u32, limit: ScaleLimit) -> Result<BigUint> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch {
            expected: t.rows(),
            got: t.cols(),
        });
    }
    let n = t.rows();
    let (m, d) = (m as usize, d as usize);
    if m * d > n {
        return Ok(BigUint::zero());
    }
    let field = t.field();
    limit.check_grassmannian(field.order(), n, m)?;
    let mut count = 0u64;
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(m * d);
    for w in enumerate_subspaces(field, n, m) {
        rows.clear();
        for b in w.basis_rows() {
            let mut v = b.to_vec();
            for j in 0..d {
                if j > 0 {
                    v = t.apply(&v);
                }
                rows.push(v.clone());
            }
        }
        if rank_of_rows(field, n, &rows) == m * d {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// `σ(m,d;T)` by checking every `m`-dimensional subspace.
pub fn brute_sigma(t: &Matrix, m: u32, d: u32, limit: ScaleLimit) -> Result<BigUint> {
    if m == 0 || d == 0 {
        return Err(Error::InvalidParams("m and d must be positive".into()));
    }
    if !t.is_square() || t.rows() != (m * d) as usize {
        return Err(Error::SizeMismatch {
            expected: (m * d) as usize,
            got: t.rows(),
        });
    }
    brute_direct_krylov(t, m, d, limit)
}

/// Nonnegative rational in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: BigUint,
    den: BigUint,
}

impl Ratio {
    pub fn new(num: BigUint, den: BigUint) -> Result<Ratio> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den);
        Ok(Ratio {
            num: num / &g,
            den: den / &g,
        })
    }

    pub fn numer(&self) -> &BigUint {
        &self.num
    }

    pub fn denom(&self) -> &BigUint {
        &self.den
    }

    pub fn in_unit_interval(&self) -> bool {
        self.num <= self.den
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Probability that `m` uniformly random vectors generate a Krylov
/// subspace of order `d` equal to the whole space:
/// `γ_m(q) σ_q(m,d;τ) / q^{m²d}`.
pub fn kappa(query: &SigmaQuery, q: u64) -> Result<Ratio> {
    let sigma = sigma_at(query, q)?;
    let gamma = gamma_poly(query.m)
        .eval_u64(q)
        .to_biguint()
        .expect("gamma is positive");
    let den = num_traits::pow(BigUint::from(q), (query.m * query.m * query.d) as usize);
    let r = Ratio::new(gamma * sigma, den)?;
    debug_assert!(r.in_unit_interval(), "kappa out of range: {r}");
    Ok(r)
}

/// Number of invertible `md × md` matrices whose column block `j` is the
/// first block shifted down by `j` rows. Equals `γ_m(q) q^{m²(d-1)}`;
/// with `brute` every filling of the first block is tried.
pub fn toeplitz_count(q: u64, m: u32, d: u32, brute: bool, limit: ScaleLimit) -> Result<BigUint> {
    if m == 0 || d == 0 {
        return Err(Error::InvalidParams("m and d must be positive".into()));
    }
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    if !brute {
        let poly = gamma_poly(m).shift((m * m * (d - 1)) as usize);
        return Ok(poly.eval_u64(q).to_biguint().expect("count is nonnegative"));
    }
    let field = Field::with_order(q)?;
    let (m, n) = (m as usize, (m * d) as usize);
    let fillings = num_traits::pow(BigUint::from(q), n * m);
    limit.check(&fillings)?;
    // first[c][i] is entry (i, c) of the first block
    let mut entries = alloc::vec![0u32; n * m];
    let mut count = 0u64;
    let mut cols: Vec<Vec<u32>> = Vec::with_capacity(n);
    loop {
        cols.clear();
        for j in 0..d as usize {
            for c in 0..m {
                let first = &entries[c * n..(c + 1) * n];
                let mut col = alloc::vec![0u32; n];
                col[j..].copy_from_slice(&first[..n - j]);
                cols.push(col);
            }
        }
        if rank_of_rows(&field, n, &cols) == n {
            count += 1;
        }
        if !odometer(&mut entries, field.order()) {
            break;
        }
    }
    Ok(BigUint::from(count))
}
