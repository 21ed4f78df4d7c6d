use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{GroupError, InvariantFactors};

/// Trial division stops here. Whatever remains above it must already be prime.
pub const TRIAL_DIVISION_BOUND: u64 = 10_000_000;

/// `multiplicity` copies of the cyclic group of order `prime^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimaryFactor {
    pub prime: u64,
    pub exponent: u32,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryDecomposition(Vec<PrimaryFactor>);

fn factorize(d: &BigInt) -> Result<Vec<(u64, u32)>, GroupError> {
    let mut m = d.clone();
    let mut out = Vec::new();
    let mut p = 2u64;
    while BigInt::from(p) * p <= m {
        if p > TRIAL_DIVISION_BOUND {
            return Err(GroupError::FactorBound(d.to_string()));
        }
        let mut e = 0;
        while (&m % p).is_zero() {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let q = m.to_u64().ok_or_else(|| GroupError::FactorBound(d.to_string()))?;
        match out.iter_mut().find(|(p, _)| *p == q) {
            Some((_, e)) => *e += 1,
            None => out.push((q, 1)),
        }
    }
    out.sort_unstable();
    Ok(out)
}

impl PrimaryDecomposition {
    pub fn of(f: &InvariantFactors) -> Result<Self, GroupError> {
        let mut count: BTreeMap<(u64, u32), usize> = BTreeMap::new();
        for d in f.all() {
            for pe in factorize(d)? {
                *count.entry(pe).or_default() += 1;
            }
        }
        Ok(PrimaryDecomposition(
            count.into_iter().map(|((prime, exponent), multiplicity)| PrimaryFactor { prime, exponent, multiplicity }).collect(),
        ))
    }

    /// Sorted by prime, then exponent.
    pub fn factors(&self) -> &[PrimaryFactor] {
        &self.0
    }

    /// Recombines the prime powers into the nontrivial invariant factors.
    pub fn reassemble(&self) -> Vec<BigInt> {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for f in &self.0 {
            by_prime.entry(f.prime).or_default().extend(std::iter::repeat(f.exponent).take(f.multiplicity));
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![BigInt::one(); len];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (i, e) in exps.into_iter().enumerate() {
                out[len - 1 - i] *= BigInt::from(p).pow(e);
            }
        }
        out
    }
}

impl fmt::Display for PrimaryDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|x| {
                let q = BigInt::from(x.prime).pow(x.exponent);
                if x.multiplicity == 1 {
                    format!("Z{q}")
                } else {
                    format!("(Z{q})^{}", x.multiplicity)
                }
            })
            .collect();
        f.write_str(&parts.join(" × "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[u64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(&BigInt::from(2250)).unwrap(), vec![(2, 1), (3, 2), (5, 3)]);
        assert_eq!(factorize(&BigInt::from(1)).unwrap(), vec![]);
        assert_eq!(factorize(&BigInt::from(9_999_991u64)).unwrap(), vec![(9_999_991, 1)]);
    }

    #[test]
    fn above_the_bound_fails() {
        let big = BigInt::from(10_000_019u64) * BigInt::from(10_000_079u64);
        assert!(matches!(factorize(&big), Err(GroupError::FactorBound(_))));
    }

    #[test]
    fn reassembles() {
        let f = InvariantFactors::new(ints(&[1, 2, 30, 150, 150])).unwrap();
        let p = PrimaryDecomposition::of(&f).unwrap();
        assert_eq!(p.reassemble(), f.nontrivial());
        assert_eq!(p.to_string(), "(Z2)^4 × (Z3)^3 × Z5 × (Z25)^2");
    }
}
