//! Exact sandpile-group structure: Smith normal form, primary
//! decomposition and spanning-tree counts over arbitrary-precision integers.

mod matrix;
mod primary;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, SinkedGraph};

pub use matrix::IntegerMatrix;
pub use primary::{PrimaryDecomposition, PrimaryFactor, TRIAL_DIVISION_BOUND};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("matrix is singular; there is no finite sandpile group")]
    Singular,
    #[error("matrix dimensions do not match: {0}")]
    Shape(String),
    #[error("invariant factor {0} has a prime factor above the trial division bound")]
    FactorBound(String),
    #[error("conjectured exponents are not integral at n = {0}")]
    NonIntegral(u32),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Diagonal of the Smith normal form, all entries positive, each dividing the
/// next. Entries equal to 1 are kept; [`fmt::Display`] hides them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantFactors(Vec<BigInt>);

impl InvariantFactors {
    pub fn new(mut d: Vec<BigInt>) -> Result<Self, GroupError> {
        if d.iter().any(|x| x.is_zero()) {
            return Err(GroupError::Singular);
        }
        for x in d.iter_mut() {
            *x = x.abs();
        }
        // (a, b) ↦ (gcd, lcm) until the chain divides
        let m = d.len();
        for i in 0..m {
            for j in i + 1..m {
                if !(&d[j] % &d[i]).is_zero() {
                    let g = num_integer::Integer::gcd(&d[i], &d[j]);
                    let l = &d[i] / &g * &d[j];
                    d[i] = g;
                    d[j] = l;
                }
            }
        }
        Ok(InvariantFactors(d))
    }

    pub fn all(&self) -> &[BigInt] {
        &self.0
    }

    /// Factors greater than 1.
    pub fn nontrivial(&self) -> Vec<BigInt> {
        self.0.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn order(&self) -> BigInt {
        self.0.iter().product()
    }

    pub fn is_chain(&self) -> bool {
        self.0.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.nontrivial();
        if parts.is_empty() {
            return f.write_str("0");
        }
        let s: Vec<String> = parts.iter().map(|d| format!("Z{d}")).collect();
        f.write_str(&s.join(" × "))
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> Result<InvariantFactors, GroupError> {
    InvariantFactors::new(m.clone().diagonalize()?)
}

pub fn sandpile_group(g: &SinkedGraph) -> Result<(InvariantFactors, PrimaryDecomposition), GroupError> {
    let f = smith_normal_form(&g.reduced_laplacian()?)?;
    let p = PrimaryDecomposition::of(&f)?;
    Ok((f, p))
}

/// Number of spanning trees of the graph with all sinks merged, computed as
/// the determinant of the reduced Laplacian.
pub fn group_order(g: &SinkedGraph) -> Result<BigInt, GroupError> {
    Ok(g.reduced_laplacian()?.determinant().abs())
}

/// `2^f 3^g 5^h` with `f = (3^n−1)/2`, `g = (3^{n+1}−6n−3)/4`,
/// `h = (3^n+6n−1)/4`.
pub fn conjectured_order_sg(n: u32) -> Result<BigInt, GroupError> {
    if n == 0 {
        return Err(GroupError::NonIntegral(0));
    }
    let p = BigInt::from(3).pow(n);
    let nn = BigInt::from(6 * u64::from(n));
    let exact = |num: BigInt, den: u32| -> Result<u32, GroupError> {
        if num.is_negative() || !(&num % den).is_zero() {
            return Err(GroupError::NonIntegral(n));
        }
        u32::try_from(num / den).map_err(|_| GroupError::NonIntegral(n))
    };
    let f = exact(&p - 1, 2)?;
    let g = exact(&p * 3 - &nn - 3, 4)?;
    let h = exact(&p + &nn - 1, 4)?;
    Ok(BigInt::from(2).pow(f) * BigInt::from(3).pow(g) * BigInt::from(5).pow(h))
}

/// Serializable summary `{invariant_factors, primary, order}` with big
/// integers as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub invariant_factors: Vec<String>,
    pub primary: Vec<(u64, u32, usize)>,
    pub order: String,
}

impl GroupReport {
    pub fn new(f: &InvariantFactors, p: &PrimaryDecomposition) -> Self {
        GroupReport {
            invariant_factors: f.nontrivial().iter().map(|d| d.to_string()).collect(),
            primary: p.factors().iter().map(|x| (x.prime, x.exponent, x.multiplicity)).collect(),
            order: f.order().to_string(),
        }
    }
}
