//! Acceptance suite: one PASS/FAIL line per criterion, exact equality only.
//!
//! Runs without the libtest harness so the lines show up in plain
//! `cargo test` output. Exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splitcount_core::arith::prime_powers;
use splitcount_core::classtype::{canonical_operator, operator_from_primaries};
use splitcount_core::flagrec::{brute_flag_count, brute_lr_sides, Concrete, Symbolic};
use splitcount_core::gf::{enumerate_irreducibles, enumerate_subspaces};
use splitcount_core::lattice::{alpha_poly, brute_invariant_subspaces, subtype_census};
use splitcount_core::qpoly::sweep_identities;
use splitcount_core::splitting::{
    brute_direct_krylov, brute_sigma, kappa, sigma_closed, sigma_poly, toeplitz_count, ClosedForm,
};
use splitcount_core::{
    ClassType, Field, FlagCounter, FlagTuple, Matrix, Partition, QPoly, ScaleLimit, SigmaQuery,
};

const LIMIT: ScaleLimit = ScaleLimit::DEFAULT;

fn int(n: u64) -> BigUint {
    BigUint::from(n)
}

fn ty(s: &str) -> ClassType {
    s.parse().unwrap()
}

fn primary(e: u32, parts: &[u32]) -> ClassType {
    ClassType::primary(e, Partition::new(parts.to_vec()).unwrap()).unwrap()
}

fn shift(field: &Field, n: usize) -> Matrix {
    let mut f = vec![0u32; n];
    f.push(1);
    Matrix::companion(field, &f)
}

fn factorizations(n: u32) -> impl Iterator<Item = (u32, u32)> {
    (1..=n).filter(move |m| n.is_multiple_of(*m)).map(move |m| (m, n / m))
}

fn irreducible_type() {
    for md in 1..=8 {
        for (m, d) in factorizations(md) {
            let got = sigma_poly(&SigmaQuery::new(m, d, primary(md, &[1])).unwrap()).unwrap();
            let num = &QPoly::monomial(1, (m * d) as usize) - &QPoly::from(1);
            let den = &QPoly::monomial(1, m as usize) - &QPoly::from(1);
            let want = num.exact_div(&den).unwrap().shift((m * (m - 1) * (d - 1)) as usize);
            assert_eq!(got, want, "m={m} d={d}");
            assert_eq!(got, sigma_closed(&ClosedForm::Irreducible { m, d }).unwrap());
        }
    }
    let f2 = Field::with_order(2).unwrap();
    assert_eq!(enumerate_subspaces(&f2, 4, 2).count(), 35);
    let t = canonical_operator(&primary(4, &[1]), &f2).unwrap();
    assert_eq!(brute_sigma(&t, 2, 2, LIMIT).unwrap(), int(20));
}

fn cyclic_nilpotent_type() {
    for md in 1..=8 {
        for (m, d) in factorizations(md) {
            let got = sigma_poly(&SigmaQuery::new(m, d, primary(1, &[md])).unwrap()).unwrap();
            assert_eq!(got, QPoly::monomial(1, (m * m * (d - 1)) as usize), "m={m} d={d}");
        }
    }
    let f2 = Field::with_order(2).unwrap();
    assert_eq!(brute_sigma(&shift(&f2, 4), 2, 2, LIMIT).unwrap(), int(16));
    assert_eq!(brute_sigma(&shift(&f2, 2), 1, 2, LIMIT).unwrap(), int(2));
}

fn direct_sum_under_long_shift() {
    let f2 = Field::with_order(2).unwrap();
    assert_eq!(enumerate_subspaces(&f2, 5, 2).count(), 155);
    let brute = brute_direct_krylov(&shift(&f2, 5), 2, 2, LIMIT).unwrap();
    let closed = sigma_closed(&ClosedForm::DirectKrylov { n: 5, m: 2, d: 2 }).unwrap();
    let g32 = &QPoly::from_i64s(&[1, 1, 1]) * &QPoly::monomial(1, 4);
    assert_eq!(closed, g32);
    assert_eq!(BigInt::from(brute.clone()), closed.eval_u64(2));
    assert_eq!(brute, int(112));
}

fn nilpotent_flag_product() {
    let f2 = Field::with_order(2).unwrap();
    for n in 1..=6u32 {
        let tau = primary(1, &[n]);
        let mut counter = FlagCounter::new(Symbolic::new(tau));
        for r in 1..=3 {
            for t in FlagTuple::all_valid(n, r) {
                let sym = counter.count(&t).unwrap();
                assert_eq!(sym, sigma_closed(&ClosedForm::NilpotentFlags(t.clone())).unwrap(), "{t}");
                if n <= 5 {
                    let brute = brute_flag_count(&shift(&f2, n as usize), &t, LIMIT).unwrap();
                    assert_eq!(sym.eval_u64(2), BigInt::from(brute), "{t}");
                }
            }
        }
    }
}

fn recursion_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let f2 = Field::with_order(2).unwrap();
    let types: Vec<ClassType> = (2..=6)
        .flat_map(ClassType::all_of_size)
        .filter(|t| t.realizable_over(2).unwrap())
        .collect();
    let mut sampled = 0;
    while sampled < 50 {
        let tau = &types[rng.gen_range(0..types.len())];
        let n = tau.size();
        let r = rng.gen_range(1..=3);
        let tuples: Vec<FlagTuple> = FlagTuple::all_valid(n, r).into_iter().filter(|t| !t.is_diagonal()).collect();
        if tuples.is_empty() {
            continue;
        }
        let t = &tuples[rng.gen_range(0..tuples.len())];
        let op = canonical_operator(tau, &f2).unwrap();
        let mut sym = FlagCounter::new(Symbolic::new(tau.clone()));
        let mut conc = FlagCounter::new(Concrete::new(op.clone(), LIMIT).unwrap());
        assert!(sym.lr_consistency(t).unwrap(), "symbolic {tau} {t}");
        assert!(conc.lr_consistency(t).unwrap(), "concrete {tau} {t}");
        // every term enumerated directly, independent of the recursion
        let (l, r) = brute_lr_sides(&op, t, LIMIT).unwrap();
        assert_eq!(l, r, "enumerated {tau} {t}");
        let (sl, _) = sym.lr_sides(t).unwrap();
        assert_eq!(sl.eval_u64(2), l, "{tau} {t}");
        sampled += 1;
    }
}

fn q_identities() {
    let sweeps = sweep_identities(6).unwrap();
    let total: usize = sweeps.iter().map(|s| s.checked).sum();
    assert!(total >= 300, "only {total} instances");
    for s in sweeps {
        assert!(s.checked > 0);
        assert!(s.failures.is_empty(), "{} fails at {:?}", s.identity.name(), s.failures);
    }
}

fn hall_polynomials() {
    for q in [2u64, 3] {
        let field = Field::with_order(q).unwrap();
        for e in [1u32, 2] {
            let p = enumerate_irreducibles(&field, e, 1).unwrap().remove(0);
            for n in 1..=4 {
                for lambda in Partition::all(n) {
                    let t = operator_from_primaries(&field, &[(p.clone(), lambda.clone())]);
                    let census = subtype_census(&t, &p, ScaleLimit(100_000_000)).unwrap();
                    let mut seen = 0;
                    for k in 0..=n {
                        for mu in Partition::all(k) {
                            let got = census.get(&mu).cloned().unwrap_or_default();
                            let want = alpha_poly(&lambda, &mu, e).eval_u64(q);
                            assert_eq!(BigInt::from(got.clone()), want, "lambda={lambda} mu={mu} e={e} q={q}");
                            if lambda.contains(&mu) {
                                seen += 1;
                            }
                        }
                    }
                    assert!(census.keys().all(|mu| lambda.contains(mu)));
                    assert!(census.len() <= seen);
                }
            }
        }
    }
}

fn type_invariance() {
    let f3 = Field::with_order(3).unwrap();
    let quadratics = enumerate_irreducibles(&f3, 2, 3).unwrap();
    let lambda = Partition::new(vec![1, 1]).unwrap();
    let a = operator_from_primaries(&f3, &[(quadratics[0].clone(), lambda.clone())]);
    let b = operator_from_primaries(&f3, &[(quadratics[2].clone(), lambda)]);
    assert_ne!(a, b);
    for (m, d) in factorizations(4) {
        assert_eq!(brute_sigma(&a, m, d, LIMIT).unwrap(), brute_sigma(&b, m, d, LIMIT).unwrap());
    }
    for k in 0..=4 {
        assert_eq!(
            brute_invariant_subspaces(&a, k, LIMIT).unwrap(),
            brute_invariant_subspaces(&b, k, LIMIT).unwrap(),
            "k={k}"
        );
    }
}

fn scalar_shift_invariance() {
    let f3 = Field::with_order(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(38);
    for _ in 0..10 {
        let data = (0..16).map(|_| rng.gen_range(0..3)).collect();
        let t = Matrix::from_vec(&f3, 4, 4, data);
        for (m, d) in [(1, 4), (2, 2)] {
            let base = brute_sigma(&t, m, d, LIMIT).unwrap();
            for c in 0..3 {
                assert_eq!(brute_sigma(&t.add_scalar(c), m, d, LIMIT).unwrap(), base, "c={c}");
            }
        }
    }
}

fn polynomiality() {
    let tau = ty("1:2;1:1,1");
    let poly = sigma_poly(&SigmaQuery::new(2, 2, tau.clone()).unwrap()).unwrap();
    for q in [2u64, 3, 4] {
        let field = Field::with_order(q).unwrap();
        let t = canonical_operator(&tau, &field).unwrap();
        assert_eq!(poly.eval_u64(q), BigInt::from(brute_sigma(&t, 2, 2, LIMIT).unwrap()), "q={q}");
    }
}

fn shifted_block_matrices() {
    for (q, m, d, want) in [(2u64, 1u32, 2u32, 2u64), (2, 2, 2, 96)] {
        let brute = toeplitz_count(q, m, d, true, LIMIT).unwrap();
        let formula = toeplitz_count(q, m, d, false, LIMIT).unwrap();
        assert_eq!(brute, int(want));
        assert_eq!(formula, int(want));
    }
}

fn krylov_probability() {
    let r = kappa(&SigmaQuery::new(1, 2, ty("2:1")).unwrap(), 2).unwrap();
    assert_eq!((r.numer().clone(), r.denom().clone()), (int(3), int(4)));
    for size in 1..=6 {
        for tau in ClassType::all_of_size(size) {
            for q in prime_powers().take_while(|&q| q <= 3) {
                if !tau.realizable_over(q).unwrap() {
                    continue;
                }
                for (m, d) in factorizations(size) {
                    let r = kappa(&SigmaQuery::new(m, d, tau.clone()).unwrap(), q).unwrap();
                    assert!(r.in_unit_interval(), "{tau} m={m} d={d} q={q}: {r}");
                }
            }
        }
    }
}

fn grand_sweep() {
    let out = Command::new(env!("CARGO_BIN_EXE_splitcount"))
        .args(["verify", "--max-size", "6", "--max-q", "3"])
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains(" 0 mismatches"), "{stdout}");
}

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 13] = [
        ("irreducible type closed form and brute count 20", irreducible_type),
        ("cyclic nilpotent type closed form", cyclic_nilpotent_type),
        ("direct Krylov sums under the 5-step shift", direct_sum_under_long_shift),
        ("nilpotent flag product formula", nilpotent_flag_product),
        ("recursion identity on sampled tuples", recursion_identity),
        ("q-binomial identity sweep", q_identities),
        ("Hall polynomials against subspace census", hall_polynomials),
        ("type invariance", type_invariance),
        ("scalar shift invariance", scalar_shift_invariance),
        ("polynomiality across q = 2, 3, 4", polynomiality),
        ("shifted block matrix count", shifted_block_matrices),
        ("Krylov probability", krylov_probability),
        ("verify sweep up to size 6, q <= 3", grand_sweep),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run));
        match result {
            Ok(()) => println!("criterion {:>2}: PASS  {name}", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {:>2}: FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
