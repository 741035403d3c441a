//! Algebraic invariants of the building blocks, mostly as property tests.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use splitcount_core::classtype::{beta, canonical_operator, subpartitions};
use splitcount_core::gf::{enumerate_irreducibles, enumerate_subspaces, poly};
use splitcount_core::qpoly::{check_q_identity, gaussian_binomial, GaussianTable, QIdentity};
use splitcount_core::{ClassType, Field, Matrix, Partition, QPoly, Subspace};

fn small_poly() -> impl Strategy<Value = QPoly> {
    prop::collection::vec(-5i64..=5, 0..6).prop_map(|c| QPoly::from_i64s(&c))
}

fn field_strategy() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u64, 3, 4, 5]).prop_map(|q| Field::with_order(q).unwrap())
}

/// A field, a square operator and two lists of vectors over it.
fn operator_and_vectors() -> impl Strategy<Value = (Field, Matrix, Vec<Vec<u32>>, Vec<Vec<u32>>)> {
    (field_strategy(), 1usize..=5).prop_flat_map(|(field, n)| {
        let q = field.order();
        let entry = 0..q;
        let vecs = prop::collection::vec(prop::collection::vec(entry.clone(), n), 0..=n);
        (
            Just(field),
            prop::collection::vec(entry, n * n),
            vecs.clone(),
            vecs,
        )
            .prop_map(move |(f, data, a, b)| {
                let t = Matrix::from_vec(&f, n, n, data);
                (f, t, a, b)
            })
    })
}

proptest! {
    #[test]
    fn exact_division_inverts_multiplication(a in small_poly(), b in small_poly()) {
        prop_assume!(!num_traits::Zero::is_zero(&b));
        let prod = &a * &b;
        prop_assert_eq!(prod.exact_div(&b).unwrap(), a);
    }

    #[test]
    fn gaussian_symmetry_and_pascal(n in 1i64..12, k in 0i64..12) {
        prop_assume!(k <= n);
        prop_assert_eq!(gaussian_binomial(n, k), gaussian_binomial(n, n - k));
        if k >= 1 {
            let rhs = &gaussian_binomial(n - 1, k - 1) + &gaussian_binomial(n - 1, k).shift(k as usize);
            prop_assert_eq!(gaussian_binomial(n, k), rhs);
        }
    }

    #[test]
    fn q_identities_hold(which in prop::sample::select(QIdentity::ALL.to_vec()), params in prop::collection::vec(0i64..=5, 4)) {
        let params = &params[..which.arity()];
        if which.hypotheses_hold(params) {
            prop_assert!(check_q_identity(which, params).unwrap());
        }
    }

    #[test]
    fn krylov_dimension_formula((field, t, vecs, _) in operator_and_vectors()) {
        let n = t.rows();
        let w = Subspace::from_vectors(&field, n, &vecs);
        let tw = w.image(&t).unwrap();
        let inner = w.intersect(&w.preimage(&t).unwrap()).unwrap();
        prop_assert_eq!(w.sum(&tw).unwrap().dim(), 2 * w.dim() - inner.dim());
    }

    #[test]
    fn modular_law((field, t, a, b) in operator_and_vectors()) {
        let n = t.rows();
        // U ⊆ W by construction
        let w = Subspace::from_vectors(&field, n, &a);
        let u = Subspace::from_vectors(&field, n, &a[..a.len() / 2]);
        let x = Subspace::from_vectors(&field, n, &b);
        let left = w.intersect(&u.sum(&x).unwrap()).unwrap();
        let right = u.sum(&w.intersect(&x).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn canonical_form_is_idempotent((field, t, vecs, _) in operator_and_vectors()) {
        let n = t.rows();
        let w = Subspace::from_vectors(&field, n, &vecs);
        let rows: Vec<Vec<u32>> = w.basis_rows().map(<[u32]>::to_vec).collect();
        let again = Subspace::from_vectors(&field, n, &rows);
        prop_assert_eq!(&again, &w);
        for v in &vecs {
            prop_assert!(w.contains_vector(v));
        }
    }

    #[test]
    fn annihilator_is_orthogonal_complement((field, t, vecs, _) in operator_and_vectors()) {
        let n = t.rows();
        let w = Subspace::from_vectors(&field, n, &vecs);
        let ann = w.annihilator();
        prop_assert_eq!(ann.dim() + w.dim(), n);
        prop_assert_eq!(ann.annihilator(), w);
    }
}

#[test]
fn subspace_enumeration_matches_gaussian_counts() {
    for q in [2u64, 3, 4] {
        let field = Field::with_order(q).unwrap();
        for n in 0..=4 {
            for k in 0..=n {
                let all: Vec<Subspace> = enumerate_subspaces(&field, n, k).collect();
                let distinct: BTreeSet<&Subspace> = all.iter().collect();
                let expected = gaussian_binomial(n as i64, k as i64).eval_u64(q);
                assert_eq!(BigInt::from(all.len()), expected, "q={q} n={n} k={k}");
                assert_eq!(distinct.len(), all.len());
                assert!(all.iter().all(|w| w.dim() == k));
            }
        }
    }
}

/// Irreducibles of degree `n` by sieving out all products of lower-degree
/// monic polynomials.
fn sieve_irreducibles(field: &Field, n: usize) -> usize {
    let q = field.order();
    let monic = |deg: usize| -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let total = (q as usize).pow(deg as u32);
        for idx in 0..total {
            let mut c = Vec::with_capacity(deg + 1);
            let mut x = idx;
            for _ in 0..deg {
                c.push((x % q as usize) as u32);
                x /= q as usize;
            }
            c.push(1);
            out.push(c);
        }
        out
    };
    let mut reducible = BTreeSet::new();
    for a in 1..n {
        for f in monic(a) {
            for g in monic(n - a) {
                reducible.insert(poly::mul(field, &f, &g));
            }
        }
    }
    monic(n).len() - reducible.len()
}

#[test]
fn beta_matches_sieve_and_ben_or() {
    for q in [2u64, 3, 4, 5, 7] {
        let field = Field::with_order(q).unwrap();
        for n in 1..=4u32 {
            if q > 4 && n > 3 {
                continue;
            }
            let b = beta(q, n).unwrap();
            assert_eq!(b, BigUint::from(sieve_irreducibles(&field, n as usize)), "q={q} n={n}");
            let count: usize = b.try_into().unwrap();
            let listed = enumerate_irreducibles(&field, n, count).unwrap();
            assert!(listed.iter().all(|f| poly::is_irreducible(&field, f)));
            assert!(enumerate_irreducibles(&field, n, count + 1).is_err());
        }
    }
}

#[test]
fn beta_increases_with_q() {
    let qs = [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16];
    for n in 1..=6 {
        for w in qs.windows(2) {
            assert!(beta(w[0], n).unwrap() < beta(w[1], n).unwrap());
        }
    }
}

#[test]
fn conjugation_is_an_involution() {
    for n in 0..=10 {
        for lambda in Partition::all(n) {
            let c = lambda.conjugate();
            assert_eq!(c.size(), n);
            assert_eq!(c.conjugate(), lambda);
        }
    }
}

#[test]
fn subpartitions_match_filtered_partitions() {
    for n in 0..=7 {
        for lambda in Partition::all(n) {
            for k in 0..=n {
                let subs = subpartitions(&lambda, k);
                let expected: Vec<Partition> =
                    Partition::all(k).into_iter().filter(|mu| lambda.contains(mu)).collect();
                let a: BTreeSet<_> = subs.iter().cloned().collect();
                let b: BTreeSet<_> = expected.into_iter().collect();
                assert_eq!(a.len(), subs.len());
                assert_eq!(a, b, "lambda={lambda} k={k}");
            }
        }
    }
}

/// Reads the class type back from kernel dimensions of `p(T)^j` for every
/// irreducible `p` of the relevant degrees.
fn recovered_type(t: &Matrix, degrees: &BTreeSet<u32>) -> ClassType {
    let field = t.field();
    let n = t.rows();
    let mut comps = Vec::new();
    for &e in degrees {
        let count: usize = beta(field.order() as u64, e).unwrap().try_into().unwrap();
        for p in enumerate_irreducibles(field, e, count).unwrap() {
            let pt = t.eval_poly(&p);
            let mut conj = Vec::new();
            let mut power = Matrix::identity(field, n);
            let mut prev = 0;
            loop {
                power = power.mul(&pt).unwrap();
                let k = power.kernel().dim();
                if k == prev {
                    break;
                }
                conj.push(((k - prev) / e as usize) as u32);
                prev = k;
            }
            if !conj.is_empty() {
                let lambda = Partition::new(conj).unwrap().conjugate();
                comps.push((e, lambda));
            }
        }
    }
    ClassType::new(comps).unwrap()
}

#[test]
fn canonical_operator_has_requested_type() {
    for q in [2u64, 3, 4] {
        let field = Field::with_order(q).unwrap();
        for size in 1..=5 {
            for tau in ClassType::all_of_size(size) {
                if !tau.realizable_over(q).unwrap() {
                    assert!(canonical_operator(&tau, &field).is_err());
                    continue;
                }
                let t = canonical_operator(&tau, &field).unwrap();
                assert_eq!(t.rows(), size as usize);
                let degrees: BTreeSet<u32> = tau.components().iter().map(|c| c.0).collect();
                assert_eq!(recovered_type(&t, &degrees), tau, "q={q}");
            }
        }
    }
}

#[test]
fn integer_and_polynomial_gaussians_agree() {
    let mut table = GaussianTable::new();
    let mut ints = splitcount_core::qpoly::IntGaussianTable::new(BigInt::from(3));
    for n in -1..10 {
        for k in -1..=n + 1 {
            assert_eq!(table.get(n, k).eval_u64(3), *ints.get(n, k));
        }
    }
}
