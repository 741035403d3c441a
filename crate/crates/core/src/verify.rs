//! Sweep comparing symbolic `σ` against brute-force enumeration.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::arith::prime_powers;
use crate::classtype::{canonical_operator, ClassType};
use crate::error::Result;
use crate::flagrec::FlagTuple;
use crate::gf::Field;
use crate::lattice::ScaleLimit;
use crate::splitting::{brute_sigma, sigma_poly, splitting_tuple, SigmaQuery};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub tau: ClassType,
    pub tuple: FlagTuple,
    pub q: u64,
    pub symbolic: BigUint,
    pub brute: BigUint,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "type {} tuple [{}] q={}: symbolic {} brute {}",
            self.tau, self.tuple, self.q, self.symbolic, self.brute
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Every class type of size at most `max_size`, every prime power
/// `q <= max_q` it is realizable over and every factorization `m·d` of its
/// size.
pub fn verify_sweep(max_size: u32, max_q: u64, limit: ScaleLimit) -> Result<VerifyReport> {
    let qs: Vec<u64> = prime_powers().take_while(|&q| q <= max_q).collect();
    let fields = qs.iter().map(|&q| Field::with_order(q)).collect::<Result<Vec<_>>>()?;
    let mut report = VerifyReport::default();
    for size in 1..=max_size {
        for tau in ClassType::all_of_size(size) {
            let realizable: Vec<&Field> = fields
                .iter()
                .filter(|f| tau.realizable_over(f.order() as u64).unwrap_or(false))
                .collect();
            if realizable.is_empty() {
                continue;
            }
            for m in (1..=size).filter(|m| size % m == 0) {
                let d = size / m;
                let query = SigmaQuery::new(m, d, tau.clone())?;
                let poly = sigma_poly(&query)?;
                for field in &realizable {
                    let q = field.order() as u64;
                    let op = canonical_operator(&tau, field)?;
                    let brute = brute_sigma(&op, m, d, limit)?;
                    let symbolic = poly.eval_u64(q).to_biguint().unwrap_or_default();
                    report.checks += 1;
                    if symbolic != brute {
                        report.mismatches.push(Mismatch {
                            tau: tau.clone(),
                            tuple: splitting_tuple(m, d),
                            q,
                            symbolic,
                            brute,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_passes() {
        let report = verify_sweep(3, 3, ScaleLimit::DEFAULT).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches);
        assert!(report.checks > 10);
    }
}
