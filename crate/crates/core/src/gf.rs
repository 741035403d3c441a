//! Linear algebra over finite fields `F_q`, `q = p^k`.
//!
//! Field elements are encoded as integers `0..q`: the residue
//! `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` (with `c_i` in `F_p`) is stored as
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. For prime fields this is the usual
//! residue. Subspaces of `F_q^n` are kept as reduced row echelon bases, so
//! two subspaces are equal iff their representations are.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::arith::{is_prime, prime_power};
use crate::classtype::beta;
use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;
const TABLE_ORDER: u32 = 256;

/// A finite field `F_q` given by its characteristic and a monic irreducible
/// modulus over `F_p`. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

struct FieldInner {
    p: u32,
    k: u32,
    q: u32,
    /// Ascending coefficients over `F_p`, monic, length `k + 1`.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

struct Tables {
    add: Vec<u32>,
    sub: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl Field {
    /// `F_{p^k}` with the lexicographically least monic irreducible modulus
    /// of degree `k`, coefficients compared from `x^{k-1}` down to `x^0`.
    pub fn new(p: u64, k: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidParams("field degree must be positive".into()));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge(p.saturating_pow(k)))?;
        let prime = Field::build(p as u32, 1, vec![0, 1]);
        if k == 1 {
            return Ok(prime);
        }
        let modulus = (0..q)
            .map(|idx| monic_from_index(&prime, k as usize, idx))
            .find(|f| poly::is_irreducible(&prime, f))
            .expect("irreducible polynomials exist in every degree");
        debug_assert_eq!(modulus.len(), k as usize + 1);
        Ok(Field::build(p as u32, k, modulus))
    }

    /// The field of order `q`.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Field::new(p, k)
    }

    fn build(p: u32, k: u32, modulus: Vec<u32>) -> Field {
        let q = p.pow(k);
        let mut inner = FieldInner {
            p,
            k,
            q,
            modulus,
            tables: None,
        };
        if q <= TABLE_ORDER {
            let qs = q as usize;
            let mut t = Tables {
                add: vec![0; qs * qs],
                sub: vec![0; qs * qs],
                mul: vec![0; qs * qs],
                inv: vec![0; qs],
            };
            for a in 0..q {
                for b in 0..q {
                    let i = (a * q + b) as usize;
                    t.add[i] = inner.add_raw(a, b);
                    t.sub[i] = inner.add_raw(a, inner.neg_raw(b));
                    t.mul[i] = inner.mul_raw(a, b);
                    if t.mul[i] == 1 {
                        t.inv[a as usize] = b;
                    }
                }
            }
            inner.tables = Some(t);
        }
        Field(Arc::new(inner))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients over `F_p`, ascending, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.0.tables {
            Some(t) => t.add[(a * self.0.q + b) as usize],
            None => self.0.add_raw(a, b),
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        match &self.0.tables {
            Some(t) => t.sub[(a * self.0.q + b) as usize],
            None => self.0.add_raw(a, self.0.neg_raw(b)),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.0.tables {
            Some(t) => t.mul[(a * self.0.q + b) as usize],
            None => self.0.mul_raw(a, b),
        }
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "zero has no inverse");
        match &self.0.tables {
            Some(t) => t.inv[a as usize],
            None => self.pow(a, (self.0.q - 2) as u64),
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Coefficients of an element over `F_p`, ascending degree, length `k`.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut a = a;
        (0..self.0.k)
            .map(|_| {
                let d = a % self.0.p;
                a /= self.0.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Option<u32> {
        if digits.len() != self.0.k as usize || digits.iter().any(|&d| d >= self.0.p) {
            return None;
        }
        Some(digits.iter().rev().fold(0, |acc, &d| acc * self.0.p + d))
    }

    fn key(&self) -> (u32, u32, &[u32]) {
        (self.0.p, self.0.k, &self.0.modulus)
    }

    /// Renders an element; extension field elements as `[c0 c1 ...]`.
    pub fn format_elem(&self, a: u32) -> String {
        if self.0.k == 1 {
            format!("{a}")
        } else {
            let parts: Vec<String> = self.digits(a).iter().map(|d| format!("{d}")).collect();
            format!("[{}]", parts.join(" "))
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<u32> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad field element {s:?}"));
        if self.0.k == 1 {
            let v: u32 = s.parse().map_err(|_| bad())?;
            return if v < self.0.p { Ok(v) } else { Err(bad()) };
        }
        let inner = s
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(bad)?;
        let digits = inner
            .split_whitespace()
            .map(|d| d.parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        self.from_digits(&digits).ok_or_else(bad)
    }
}

impl FieldInner {
    fn add_raw(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg_raw(&self, a: u32) -> u32 {
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.k == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let k = self.k as usize;
        let digits = |mut x: u32| -> Vec<u64> {
            (0..k)
                .map(|_| {
                    let d = (x % self.p) as u64;
                    x /= self.p;
                    d
                })
                .collect()
        };
        let (da, db) = (digits(a), digits(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, x) in da.iter().enumerate() {
            for (j, y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for deg in (k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..k {
                let m = self.modulus[i] as u64;
                prod[deg - k + i] = (prod[deg - k + i] + (p - c) * m) % p;
            }
        }
        prod[..k].iter().rev().fold(0u32, |acc, &d| acc * self.p + d as u32)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.key() == other.key()
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}(modulus {:?})", self.0.q, self.0.modulus)
    }
}

/// `make_field`: see [`Field::new`].
pub fn make_field(p: u64, k: u32) -> Result<Field> {
    Field::new(p, k)
}

/// The monic polynomial of degree `n` whose lower coefficients are the
/// base-`q` digits of `idx` (so index order is lexicographic order).
fn monic_from_index(field: &Field, n: usize, idx: u64) -> Vec<u32> {
    let q = field.order() as u64;
    let mut idx = idx;
    let mut f: Vec<u32> = (0..n)
        .map(|_| {
            let d = (idx % q) as u32;
            idx /= q;
            d
        })
        .collect();
    f.push(1);
    f
}

/// The `count` lexicographically least monic irreducible polynomials of
/// degree `n` over `field`, as ascending coefficient vectors.
pub fn enumerate_irreducibles(field: &Field, n: u32, count: usize) -> Result<Vec<Vec<u32>>> {
    if n == 0 {
        return Err(Error::InvalidParams("degree must be positive".into()));
    }
    let available = beta(field.order() as u64, n)?;
    if num_bigint::BigUint::from(count) > available {
        return Err(Error::NotEnoughIrreducibles {
            degree: n,
            wanted: count,
            available,
        });
    }
    let mut out = Vec::with_capacity(count);
    let mut idx = 0u64;
    while out.len() < count {
        let f = monic_from_index(field, n as usize, idx);
        if poly::is_irreducible(field, &f) {
            out.push(f);
        }
        idx += 1;
    }
    Ok(out)
}

/// Dense polynomials over a [`Field`], ascending coefficients.
pub mod poly {
    use super::Field;
    use alloc::vec;
    use alloc::vec::Vec;

    pub fn trim(f: &mut Vec<u32>) {
        while f.last() == Some(&0) {
            f.pop();
        }
    }

    pub fn mul(field: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(x, y));
            }
        }
        trim(&mut out);
        out
    }

    pub fn sub(field: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = a.to_vec();
        if out.len() < b.len() {
            out.resize(b.len(), 0);
        }
        for (o, &y) in out.iter_mut().zip(b) {
            *o = field.sub(*o, y);
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo nonzero `m`.
    pub fn rem(field: &Field, a: &[u32], m: &[u32]) -> Vec<u32> {
        let mut m = m.to_vec();
        trim(&mut m);
        assert!(!m.is_empty(), "division by zero polynomial");
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = field.inv(m[dm]);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = field.mul(r[top], lead_inv);
            for (i, &mc) in m.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = field.sub(r[idx], field.mul(c, mc));
            }
            trim(&mut r);
        }
        r
    }

    pub fn gcd(field: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(field, &a, &b);
            a = b;
            b = r;
        }
        if let Some(&lead) = a.last() {
            let inv = field.inv(lead);
            for c in a.iter_mut() {
                *c = field.mul(*c, inv);
            }
        }
        a
    }

    pub fn pow_mod(field: &Field, base: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
        let mut acc = vec![1];
        let mut b = rem(field, base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(field, &mul(field, &acc, &b), m);
            }
            e >>= 1;
            if e > 0 {
                b = rem(field, &mul(field, &b, &b), m);
            }
        }
        acc
    }

    pub fn pow(field: &Field, base: &[u32], e: u32) -> Vec<u32> {
        (0..e).fold(vec![1], |acc, _| mul(field, &acc, base))
    }

    /// Ben-Or test: monic `f` of degree `n` is irreducible iff
    /// `gcd(x^{q^i} - x, f) = 1` for `1 <= i <= n/2`.
    pub fn is_irreducible(field: &Field, f: &[u32]) -> bool {
        let n = f.len().saturating_sub(1);
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let q = field.order() as u64;
        let x = vec![0, 1];
        let mut h = rem(field, &x, f);
        for _ in 0..n / 2 {
            h = pow_mod(field, &h, q, f);
            let g = gcd(field, &sub(field, &h, &x), f);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

/// Dense matrix over a finite field. Operators act on column vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from row-major data; panics if the length or an entry is
    /// out of range.
    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        assert!(data.iter().all(|&x| x < field.order()), "entry outside field");
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix::from_vec(field, rows.len(), cols, rows.concat())
    }

    /// Companion matrix of monic `f` (ascending coefficients): `e_i -> e_{i+1}`
    /// for `i < n`, last column `-f_0, ..., -f_{n-1}`.
    pub fn companion(field: &Field, f: &[u32]) -> Matrix {
        let n = f.len() - 1;
        assert_eq!(f[n], 1, "companion needs a monic polynomial");
        let mut m = Matrix::zeros(field, n, n);
        for i in 1..n {
            m.set(i, i - 1, 1);
        }
        for (i, &c) in f[..n].iter().enumerate() {
            m.set(i, n - 1, field.neg(c));
        }
        m
    }

    pub fn block_diag(field: &Field, blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zeros(field, n, n);
        let mut off = 0;
        for b in blocks {
            assert!(b.is_square());
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, rhs.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: rhs.rows * rhs.cols,
            });
        }
        let f = &self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// `self + c I`.
    pub fn add_scalar(&self, c: u32) -> Matrix {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = self.field.add(m.get(i, i), c);
            m.set(i, i, v);
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn pow(&self, e: u32) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(&self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self).expect("square");
        }
        acc
    }

    /// `f(self)` for a polynomial with ascending coefficients.
    pub fn eval_poly(&self, f: &[u32]) -> Matrix {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = Matrix::zeros(&self.field, n, n);
        for &c in f.iter().rev() {
            acc = acc.mul(self).expect("square").add_scalar(c);
        }
        acc
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(&self.field, &mut m.data, self.rows, self.cols);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        rank_in_place(&self.field, &mut data, self.rows, self.cols)
    }

    /// Right kernel `{v : self * v = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let n = self.cols;
        let f = &self.field;
        let mut gens = Vec::new();
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; n];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            gens.push(v);
        }
        Subspace::from_vectors(f, n, &gens)
    }

    /// Parses `"a,b;c,d"`: entries separated by `,`, rows by `;`.
    pub fn parse(field: &Field, text: &str) -> Result<Matrix> {
        let rows = text
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|e| field.parse_elem(e))
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse("rows have different lengths".into()));
        }
        Ok(Matrix::from_rows(field, &rows))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ";")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.field.format_elem(self.get(i, j)))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{} over F_{}]({})", self.rows, self.cols, self.field.order(), self)
    }
}

fn rref_in_place(f: &Field, data: &mut [u32], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(data[r * cols + c]);
        for j in c..cols {
            data[r * cols + j] = f.mul(data[r * cols + j], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = data[i * cols + c];
            if factor == 0 {
                continue;
            }
            for j in c..cols {
                let v = f.mul(factor, data[r * cols + j]);
                data[i * cols + j] = f.sub(data[i * cols + j], v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Forward elimination only; enough for rank.
fn rank_in_place(f: &Field, data: &mut [u32], rows: usize, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in c..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(data[r * cols + c]);
        for i in r + 1..rows {
            let x = data[i * cols + c];
            if x == 0 {
                continue;
            }
            let factor = f.mul(x, inv);
            for j in c..cols {
                let v = f.mul(factor, data[r * cols + j]);
                data[i * cols + j] = f.sub(data[i * cols + j], v);
            }
        }
        r += 1;
    }
    r
}

/// Rank of the vectors given as rows.
pub fn rank_of_rows(field: &Field, n: usize, rows: &[Vec<u32>]) -> usize {
    let mut data = rows.concat();
    rank_in_place(field, &mut data, rows.len(), n)
}

/// A subspace of `F_q^n` held as its reduced row echelon basis.
#[derive(Clone)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<u32>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: &Field, n: usize) -> Subspace {
        Subspace {
            field: field.clone(),
            ambient: n,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &Field, n: usize) -> Subspace {
        Matrix::identity(field, n).row_space()
    }

    /// Span of the given vectors.
    pub fn from_vectors(field: &Field, n: usize, vectors: &[Vec<u32>]) -> Subspace {
        let mut data = vectors.concat();
        assert_eq!(data.len(), vectors.len() * n, "vector length mismatch");
        let pivots = rref_in_place(field, &mut data, vectors.len(), n);
        data.truncate(pivots.len() * n);
        Subspace {
            field: field.clone(),
            ambient: n,
            basis: data,
            pivots,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_row(&self, i: usize) -> &[u32] {
        &self.basis[i * self.ambient..(i + 1) * self.ambient]
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.dim()).map(move |i| self.basis_row(i))
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix {
            field: self.field.clone(),
            rows: self.dim(),
            cols: self.ambient,
            data: self.basis.clone(),
        }
    }

    /// Reduces `v` against the echelon basis; zero iff `v` lies in `self`.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            for (x, &b) in v.iter_mut().zip(self.basis_row(i)) {
                *x = f.sub(*x, f.mul(c, b));
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        other.ambient == self.ambient
            && other.dim() <= self.dim()
            && other.basis_rows().all(|r| self.contains_vector(r))
    }

    fn check_ambient(&self, n: usize) -> Result<()> {
        if self.ambient == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: n,
            })
        }
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient)?;
        let mut rows: Vec<Vec<u32>> = self.basis_rows().map(<[u32]>::to_vec).collect();
        rows.extend(other.basis_rows().map(<[u32]>::to_vec));
        Ok(Subspace::from_vectors(&self.field, self.ambient, &rows))
    }

    /// Vectors orthogonal to `self` under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        self.basis_matrix().kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient)?;
        let a = self.annihilator();
        let b = other.annihilator();
        let mut rows: Vec<Vec<u32>> = a.basis_rows().map(<[u32]>::to_vec).collect();
        rows.extend(b.basis_rows().map(<[u32]>::to_vec));
        let stacked = Matrix {
            field: self.field.clone(),
            rows: rows.len(),
            cols: self.ambient,
            data: rows.concat(),
        };
        Ok(stacked.kernel())
    }

    /// `T W`.
    pub fn image(&self, t: &Matrix) -> Result<Subspace> {
        check_operator(t, self.ambient)?;
        let rows: Vec<Vec<u32>> = self.basis_rows().map(|r| t.apply(r)).collect();
        Ok(Subspace::from_vectors(&self.field, self.ambient, &rows))
    }

    /// `T^{-1} W = {v : T v ∈ W}`.
    pub fn preimage(&self, t: &Matrix) -> Result<Subspace> {
        check_operator(t, self.ambient)?;
        let c = self.annihilator().basis_matrix();
        Ok(c.mul(t)?.kernel())
    }

    /// `T W ⊆ W`.
    pub fn is_invariant(&self, t: &Matrix) -> Result<bool> {
        check_operator(t, self.ambient)?;
        Ok(self.basis_rows().all(|r| self.contains_vector(&t.apply(r))))
    }

    pub fn to_matrix_string(&self) -> String {
        format!("{}", self.basis_matrix())
    }
}

fn check_operator(t: &Matrix, n: usize) -> Result<()> {
    if t.rows == n && t.cols == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: n,
            got: t.cols,
        })
    }
}

impl Matrix {
    /// Row space as a canonical subspace (`canonicalize`).
    pub fn row_space(&self) -> Subspace {
        let mut data = self.data.clone();
        let pivots = rref_in_place(&self.field, &mut data, self.rows, self.cols);
        data.truncate(pivots.len() * self.cols);
        Subspace {
            field: self.field.clone(),
            ambient: self.cols,
            basis: data,
            pivots,
        }
    }
}

/// Canonical subspace spanned by the rows of `generators`.
pub fn canonicalize(generators: &Matrix) -> Subspace {
    generators.row_space()
}

/// `{v : T v = 0}`.
pub fn kernel(t: &Matrix) -> Subspace {
    t.kernel()
}

pub fn preimage(t: &Matrix, w: &Subspace) -> Result<Subspace> {
    w.preimage(t)
}

pub fn is_invariant(t: &Matrix, w: &Subspace) -> Result<bool> {
    w.is_invariant(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Sum,
    Intersect,
}

pub fn subspace_combine(a: &Subspace, b: &Subspace, op: Combine) -> Result<Subspace> {
    match op {
        Combine::Sum => a.sum(b),
        Combine::Intersect => a.intersect(b),
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Subspace {}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field.key(), self.ambient, self.dim(), &self.basis).cmp(&(
            other.field.key(),
            other.ambient,
            other.dim(),
            &other.basis,
        ))
    }
}

impl core::hash::Hash for Subspace {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.basis.hash(state);
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace[dim {} in F_{}^{}]({})", self.dim(), self.field.order(), self.ambient, self.basis_matrix())
    }
}

/// Every `k`-dimensional subspace of `F_q^n` exactly once, generated as RREF
/// matrices: pivot columns in lexicographic order, then free entries as a
/// base-`q` counter.
pub fn enumerate_subspaces(field: &Field, n: usize, k: usize) -> SubspaceIter {
    SubspaceIter::new(field, n, k)
}

pub struct SubspaceIter {
    field: Field,
    n: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    counter: Vec<u32>,
    done: bool,
}

impl SubspaceIter {
    fn new(field: &Field, n: usize, k: usize) -> Self {
        let mut it = SubspaceIter {
            field: field.clone(),
            n,
            pivots: (0..k).collect(),
            free: Vec::new(),
            counter: Vec::new(),
            done: k > n,
        };
        if !it.done {
            it.reset_free();
        }
        it
    }

    fn reset_free(&mut self) {
        self.free.clear();
        for (i, &p) in self.pivots.iter().enumerate() {
            for c in p + 1..self.n {
                if !self.pivots.contains(&c) {
                    self.free.push((i, c));
                }
            }
        }
        self.counter = vec![0; self.free.len()];
    }

    fn next_combination(&mut self) -> bool {
        let k = self.pivots.len();
        let n = self.n;
        let Some(i) = (0..k).rev().find(|&i| self.pivots[i] < n - k + i) else {
            return false;
        };
        self.pivots[i] += 1;
        for j in i + 1..k {
            self.pivots[j] = self.pivots[j - 1] + 1;
        }
        true
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let n = self.n;
        let k = self.pivots.len();
        let mut basis = vec![0; k * n];
        for (i, &p) in self.pivots.iter().enumerate() {
            basis[i * n + p] = 1;
        }
        for (&(i, c), &v) in self.free.iter().zip(&self.counter) {
            basis[i * n + c] = v;
        }
        let out = Subspace {
            field: self.field.clone(),
            ambient: n,
            basis,
            pivots: self.pivots.clone(),
        };
        if !odometer(&mut self.counter, self.field.order()) {
            if self.next_combination() {
                self.reset_free();
            } else {
                self.done = true;
            }
        }
        Some(out)
    }
}

/// Advances a base-`q` counter; false once it wraps to all zeros.
pub(crate) fn odometer(counter: &mut [u32], q: u32) -> bool {
    for d in counter.iter_mut() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

/// All vectors of `F_q^n`, in base-`q` counter order starting from zero.
pub fn enumerate_vectors(field: &Field, n: usize) -> impl Iterator<Item = Vec<u32>> {
    let q = field.order();
    let mut cur = Some(vec![0u32; n]);
    core::iter::from_fn(move || {
        let out = cur.take()?;
        let mut next = out.clone();
        if odometer(&mut next, q) {
            cur = Some(next);
        }
        Some(out)
    })
}
