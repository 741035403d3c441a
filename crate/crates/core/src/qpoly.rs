//! Integer polynomials in a single indeterminate `q`.
//!
//! [`QPoly`] carries the universal answers of the crate: Gaussian binomials,
//! the ordered-basis count `gamma_m(q)`, invariant-flag counts and splitting
//! subspace counts are all elements of `Z[q]`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial with arbitrary-precision integer coefficients, stored in
/// ascending degree with no trailing zeros. The zero polynomial has no
/// coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    /// `c * q^deg`
    pub fn monomial<T: Into<BigInt>>(c: T, deg: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c.into();
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, deg: usize) -> BigInt {
        self.coeffs.get(deg).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Horner evaluation at an integer.
    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn eval_u64(&self, q: u64) -> BigInt {
        self.eval(&BigInt::from(q))
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: usize) -> Self {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); shift];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    /// Substitutes `q^e` for `q`.
    pub fn substitute_power(&self, e: usize) -> Self {
        assert!(e >= 1, "substitution exponent must be positive");
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * e + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * e] = c.clone();
        }
        QPoly { coeffs }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = QPoly::one();
        let mut base = self.clone();
        let mut exp = exp;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient `self / divisor`, required to be exact in `Z[q]`.
    pub fn exact_div(&self, divisor: &QPoly) -> Result<QPoly> {
        let lead = divisor.leading().ok_or(Error::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        if self.is_zero() {
            return Ok(QPoly::zero());
        }
        if self.coeffs.len() < divisor.coeffs.len() {
            return Err(Error::NonExactDivision);
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::NonExactDivision);
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::NonExactDivision);
        }
        Ok(QPoly::from_coeffs(quot))
    }
}

impl Zero for QPoly {
    fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for QPoly {
    fn one() -> Self {
        QPoly::constant(1)
    }
}

impl From<i64> for QPoly {
    fn from(c: i64) -> Self {
        QPoly::constant(c)
    }
}

impl From<BigInt> for QPoly {
    fn from(c: BigInt) -> Self {
        QPoly::constant(c)
    }
}

impl<'a> Add<&'a QPoly> for &'a QPoly {
    type Output = QPoly;

    fn add(self, rhs: &'a QPoly) -> QPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl<'a> Sub<&'a QPoly> for &'a QPoly {
    type Output = QPoly;

    fn sub(self, rhs: &'a QPoly) -> QPoly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < rhs.coeffs.len() {
            coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (c, s) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= s;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl<'a> Mul<&'a QPoly> for &'a QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &'a QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<QPoly> for QPoly {
            type Output = QPoly;
            fn $method(self, rhs: QPoly) -> QPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a QPoly> for QPoly {
            type Output = QPoly;
            fn $method(self, rhs: &'a QPoly) -> QPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        for (c, s) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c += s;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl SubAssign<&QPoly> for QPoly {
    fn sub_assign(&mut self, rhs: &QPoly) {
        *self = &*self - rhs;
    }
}

impl Neg for QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl core::iter::Sum for QPoly {
    fn sum<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

impl core::iter::Product for QPoly {
    fn product<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::one(), |acc, p| &acc * &p)
    }
}

/// Renders in descending degree, e.g. `q^4 + q^3 + 2*q^2 + q + 1`.
impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (deg, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{deg}")?,
                (_, false) => write!(f, "{mag}*q^{deg}")?,
            }
        }
        Ok(())
    }
}

/// Gaussian binomial `[n k]_q`, zero when `n` or `k` is negative or
/// `k` is not between 0 and `n`.
pub fn gaussian_binomial(n: i64, k: i64) -> QPoly {
    GaussianTable::new().get(n, k).clone()
}

/// Memoized Gaussian binomials built by the Pascal rule
/// `[n k] = [n-1 k-1] + q^k [n-1 k]`.
#[derive(Clone, Debug, Default)]
pub struct GaussianTable {
    rows: Vec<Vec<QPoly>>,
    zero: QPoly,
}

impl GaussianTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, n: i64, k: i64) -> &QPoly {
        if n < 0 || k < 0 || k > n {
            return &self.zero;
        }
        let (n, k) = (n as usize, k as usize);
        while self.rows.len() <= n {
            let row = match self.rows.last() {
                None => vec![QPoly::one()],
                Some(prev) => {
                    let len = prev.len() + 1;
                    (0..len)
                        .map(|j| {
                            if j == 0 || j == len - 1 {
                                QPoly::one()
                            } else {
                                &prev[j - 1] + &prev[j].shift(j)
                            }
                        })
                        .collect()
                }
            };
            self.rows.push(row);
        }
        &self.rows[n][k]
    }
}

/// Integer Gaussian binomials at a fixed `q`, by the same Pascal rule.
#[derive(Clone, Debug)]
pub struct IntGaussianTable {
    q: BigInt,
    rows: Vec<Vec<BigInt>>,
    zero: BigInt,
}

impl IntGaussianTable {
    pub fn new(q: BigInt) -> Self {
        IntGaussianTable {
            q,
            rows: Vec::new(),
            zero: BigInt::zero(),
        }
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn get(&mut self, n: i64, k: i64) -> &BigInt {
        if n < 0 || k < 0 || k > n {
            return &self.zero;
        }
        let (n, k) = (n as usize, k as usize);
        while self.rows.len() <= n {
            let row = match self.rows.last() {
                None => vec![BigInt::one()],
                Some(prev) => {
                    let len = prev.len() + 1;
                    let mut qk = BigInt::one();
                    let mut row = Vec::with_capacity(len);
                    for j in 0..len {
                        if j == 0 || j == len - 1 {
                            row.push(BigInt::one());
                        } else {
                            row.push(&prev[j - 1] + &qk * &prev[j]);
                        }
                        qk *= &self.q;
                    }
                    row
                }
            };
            self.rows.push(row);
        }
        &self.rows[n][k]
    }
}

/// `gamma_m(q) = (q^m - 1)(q^m - q)...(q^m - q^{m-1})`, the number of
/// ordered bases of `F_q^m`.
pub fn gamma_poly(m: u32) -> QPoly {
    let m = m as usize;
    (0..m)
        .map(|i| &QPoly::monomial(1, m) - &QPoly::monomial(1, i))
        .product()
}

/// The four q-binomial identities checked by [`check_q_identity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QIdentity {
    /// `[a b][b c] = [a c][a-c b-c]`, parameters `(a, b, c)`.
    Product,
    /// q-Vandermonde `[a+b r] = sum_s [a s][b r-s] q^{s(b-r+s)}`,
    /// parameters `(a, b, r)`.
    Vandermonde,
    /// `sum_s [a-b b-s][b-c s-c][a-2b+s d-2b+s] q^{(b-s)^2}
    ///  = [a-b d-b][d-c b-c]`, parameters `(a, d, b, c)` with
    /// `a >= d >= b >= c >= 0`.
    First,
    /// `sum_s [a-b b-s][b-c s-c][s-c d-c] q^{(b-s)^2}
    ///  = [b-c d-c][a-d b-d]`, parameters `(a, b, d, c)` with
    /// `a >= b >= d >= c >= 0`.
    Second,
}

impl QIdentity {
    pub const ALL: [QIdentity; 4] = [
        QIdentity::Product,
        QIdentity::Vandermonde,
        QIdentity::First,
        QIdentity::Second,
    ];

    pub fn arity(self) -> usize {
        match self {
            QIdentity::Product | QIdentity::Vandermonde => 3,
            QIdentity::First | QIdentity::Second => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QIdentity::Product => "product",
            QIdentity::Vandermonde => "vandermonde",
            QIdentity::First => "first",
            QIdentity::Second => "second",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|i| i.name() == name)
    }

    /// Whether `params` satisfy the hypotheses under which the identity is
    /// claimed.
    pub fn hypotheses_hold(self, params: &[i64]) -> bool {
        if params.len() != self.arity() {
            return false;
        }
        match self {
            QIdentity::Product => true,
            QIdentity::Vandermonde => params.iter().all(|&x| x >= 0),
            QIdentity::First | QIdentity::Second => {
                params.windows(2).all(|w| w[0] >= w[1]) && params[3] >= 0
            }
        }
    }

    /// Both sides of the identity as polynomials.
    pub fn sides(self, params: &[i64], table: &mut GaussianTable) -> Result<(QPoly, QPoly)> {
        if params.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: params.len(),
            });
        }
        // Summation over all integers s; outside this window some factor
        // is an out-of-range binomial.
        let span: i64 = params.iter().map(|x| x.abs()).sum::<i64>() + 1;
        let mut g = |n: i64, k: i64| table.get(n, k).clone();
        let sides = match self {
            QIdentity::Product => {
                let [a, b, c] = [params[0], params[1], params[2]];
                (&g(a, b) * &g(b, c), &g(a, c) * &g(a - c, b - c))
            }
            QIdentity::Vandermonde => {
                let [a, b, r] = [params[0], params[1], params[2]];
                let mut lhs = QPoly::zero();
                for s in -span..=span {
                    let t = &g(a, s) * &g(b, r - s);
                    if t.is_zero() {
                        continue;
                    }
                    let e = s * (b - r + s);
                    debug_assert!(e >= 0);
                    lhs += &t.shift(e as usize);
                }
                (g(a + b, r), lhs)
            }
            QIdentity::First => {
                let [a, d, b, c] = [params[0], params[1], params[2], params[3]];
                let mut lhs = QPoly::zero();
                for s in -span..=span {
                    let t = &(&g(a - b, b - s) * &g(b - c, s - c)) * &g(a - 2 * b + s, d - 2 * b + s);
                    if !t.is_zero() {
                        lhs += &t.shift(((b - s) * (b - s)) as usize);
                    }
                }
                (lhs, &g(a - b, d - b) * &g(d - c, b - c))
            }
            QIdentity::Second => {
                let [a, b, d, c] = [params[0], params[1], params[2], params[3]];
                let mut lhs = QPoly::zero();
                for s in -span..=span {
                    let t = &(&g(a - b, b - s) * &g(b - c, s - c)) * &g(s - c, d - c);
                    if !t.is_zero() {
                        lhs += &t.shift(((b - s) * (b - s)) as usize);
                    }
                }
                (lhs, &g(b - c, d - c) * &g(a - d, b - d))
            }
        };
        Ok(sides)
    }
}

/// True iff both sides of the chosen identity are the same polynomial.
pub fn check_q_identity(which: QIdentity, params: &[i64]) -> Result<bool> {
    let (l, r) = which.sides(params, &mut GaussianTable::new())?;
    Ok(l == r)
}

/// Outcome of checking one identity on every admissible parameter tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentitySweep {
    pub identity: QIdentity,
    pub checked: usize,
    pub failures: Vec<Vec<i64>>,
}

/// Checks each identity for all parameter tuples with entries in
/// `0..=max` that satisfy its hypotheses.
pub fn sweep_identities(max: i64) -> Result<Vec<IdentitySweep>> {
    let mut table = GaussianTable::new();
    let mut out = Vec::new();
    for identity in QIdentity::ALL {
        let mut report = IdentitySweep {
            identity,
            checked: 0,
            failures: Vec::new(),
        };
        let mut params = alloc::vec![0i64; identity.arity()];
        loop {
            if identity.hypotheses_hold(&params) {
                let (l, r) = identity.sides(&params, &mut table)?;
                report.checked += 1;
                if l != r {
                    report.failures.push(params.clone());
                }
            }
            // odometer over 0..=max
            let mut i = 0;
            while i < params.len() && params[i] == max {
                params[i] = 0;
                i += 1;
            }
            if i == params.len() {
                break;
            }
            params[i] += 1;
        }
        out.push(report);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn small_sweep() {
        let reports = sweep_identities(3).unwrap();
        assert_eq!(reports.len(), 4);
        assert_eq!(reports[0].checked, 64);
        assert!(reports.iter().all(|r| r.failures.is_empty()));
    }

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    #[test]
    fn ring_ops() {
        assert_eq!(&p(&[1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 1]));
        let x = p(&[3, 0, 5]);
        assert_eq!(&x + &QPoly::zero(), x);
        let y = p(&[1, 1, 1]);
        let d = &y - &y;
        assert!(d.is_zero());
        assert!(d.coeffs().is_empty());
    }

    #[test]
    fn exact_division() {
        assert_eq!(
            p(&[-1, 0, 0, 0, 1]).exact_div(&p(&[-1, 0, 1])).unwrap(),
            p(&[1, 0, 1])
        );
        assert_eq!(
            p(&[-1, 0, 0, 1]).exact_div(&p(&[-1, 1])).unwrap(),
            p(&[1, 1, 1])
        );
        assert_eq!(
            p(&[1, 0, 1]).exact_div(&p(&[1, 1])),
            Err(Error::NonExactDivision)
        );
        assert_eq!(p(&[1]).exact_div(&QPoly::zero()), Err(Error::DivisionByZero));
        // leading coefficient that does not divide
        assert_eq!(p(&[0, 3]).exact_div(&p(&[0, 2])), Err(Error::NonExactDivision));
    }

    #[test]
    fn evaluation() {
        assert_eq!(p(&[0, 1, 1]).eval_u64(2), BigInt::from(6));
        assert_eq!(QPoly::zero().eval_u64(17), BigInt::from(0));
        assert_eq!(p(&[0, 0, 1, 0, 1]).eval_u64(2), BigInt::from(20));
    }

    #[test]
    fn gaussian_values() {
        assert_eq!(gaussian_binomial(4, 2), p(&[1, 1, 2, 1, 1]));
        assert_eq!(gaussian_binomial(4, 2).eval_u64(2), BigInt::from(35));
        assert_eq!(gaussian_binomial(3, 0), QPoly::one());
        assert!(gaussian_binomial(2, 5).is_zero());
        assert!(gaussian_binomial(-1, 0).is_zero());
        assert!(gaussian_binomial(3, -1).is_zero());
    }

    #[test]
    fn gaussian_matches_product_formula() {
        // [n k] = prod_{i<k} (q^{n-i} - 1) / (q^{i+1} - 1)
        for n in 0..9i64 {
            for k in 0..=n {
                let mut num = QPoly::one();
                let mut den = QPoly::one();
                for i in 0..k {
                    num = &num * &(&QPoly::monomial(1, (n - i) as usize) - &QPoly::one());
                    den = &den * &(&QPoly::monomial(1, (i + 1) as usize) - &QPoly::one());
                }
                assert_eq!(num.exact_div(&den).unwrap(), gaussian_binomial(n, k));
            }
        }
    }

    #[test]
    fn int_table_agrees_with_poly_table() {
        let mut t = GaussianTable::new();
        for q in [2u64, 3, 4, 7] {
            let mut it = IntGaussianTable::new(BigInt::from(q));
            for n in -1..8 {
                for k in -1..9 {
                    assert_eq!(*it.get(n, k), t.get(n, k).eval_u64(q));
                }
            }
        }
    }

    #[test]
    fn gamma() {
        assert_eq!(gamma_poly(1), p(&[-1, 1]));
        let g2 = &p(&[-1, 0, 1]) * &p(&[0, -1, 1]);
        assert_eq!(gamma_poly(2), g2);
        assert_eq!(gamma_poly(2).eval_u64(2), BigInt::from(6));
    }

    #[test]
    fn identity_examples() {
        assert!(check_q_identity(QIdentity::Product, &[4, 3, 1]).unwrap());
        assert!(check_q_identity(QIdentity::Vandermonde, &[2, 2, 2]).unwrap());
        assert!(check_q_identity(QIdentity::First, &[4, 3, 2, 1]).unwrap());
        assert!(check_q_identity(QIdentity::Second, &[5, 3, 2, 1]).unwrap());
        assert_eq!(
            check_q_identity(QIdentity::First, &[1, 2]),
            Err(Error::ArityMismatch { expected: 4, got: 2 })
        );
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 1, 2, 1, 1]).to_string(), "q^4 + q^3 + 2*q^2 + q + 1");
        assert_eq!(p(&[-1, 0, 1]).to_string(), "q^2 - 1");
        assert_eq!(p(&[0, -3]).to_string(), "-3*q");
        assert_eq!(QPoly::zero().to_string(), "0");
        assert_eq!(p(&[0, 0, 0, 0, 1]).to_string(), "q^4");
    }

    #[test]
    fn substitution() {
        assert_eq!(p(&[1, 1]).substitute_power(2), p(&[1, 0, 1]));
        assert_eq!(p(&[2, 0, 3]).pow(2), &p(&[2, 0, 3]) * &p(&[2, 0, 3]));
    }
}
