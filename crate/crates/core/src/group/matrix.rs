use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::GroupError;

/// Dense square matrix of arbitrary-precision integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    n: usize,
    a: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(n: usize) -> Self {
        IntegerMatrix { n, a: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, GroupError> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::Shape(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.a[i * self.n + j] = BigInt::from(x);
    }

    pub fn add(&mut self, i: usize, j: usize, x: i64) {
        self.a[i * self.n + j] += x;
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.a.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix, GroupError> {
        if self.n != other.n {
            return Err(GroupError::Shape(format!("{}×{} times {}×{}", self.n, self.n, other.n, other.n)));
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = other.get(k, j);
                    if !y.is_zero() {
                        out.a[i * n + j] += x * y;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.n {
                self.a.swap(i * self.n + c, j * self.n + c);
            }
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.n {
                self.a.swap(r * self.n + i, r * self.n + j);
            }
        }
    }

    /// `row[dst] += k · row[src]`
    pub fn add_row_multiple(&mut self, src: usize, dst: usize, k: &BigInt) {
        let n = self.n;
        for c in 0..n {
            if !self.a[src * n + c].is_zero() {
                let d = &self.a[src * n + c] * k;
                self.a[dst * n + c] += d;
            }
        }
    }

    /// `col[dst] += k · col[src]`
    pub fn add_col_multiple(&mut self, src: usize, dst: usize, k: &BigInt) {
        let n = self.n;
        for r in 0..n {
            if !self.a[r * n + src].is_zero() {
                let d = &self.a[r * n + src] * k;
                self.a[r * n + dst] += d;
            }
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for c in 0..self.n {
            let x = std::mem::take(&mut self.a[i * self.n + c]);
            self.a[i * self.n + c] = -x;
        }
    }

    fn min_abs_in(&self, t: usize) -> Option<(usize, usize)> {
        let n = self.n;
        let mut best: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..n {
                let x = &self.a[i * n + j];
                if x.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| x.abs() < self.a[bi * n + bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Reduces to diagonal form by unimodular row and column operations,
    /// always pivoting on an entry of least absolute value. Returns the
    /// diagonal (not yet normalized into a divisibility chain).
    pub(crate) fn diagonalize(mut self) -> Result<Vec<BigInt>, GroupError> {
        let n = self.n;
        let mut diag = Vec::with_capacity(n);
        for t in 0..n {
            loop {
                let (pi, pj) = self.min_abs_in(t).ok_or(GroupError::Singular)?;
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let pivot = self.a[t * n + t].clone();
                let mut clean = true;
                for i in t + 1..n {
                    let x = &self.a[i * n + t];
                    if x.is_zero() {
                        continue;
                    }
                    let (q, r) = x.div_mod_floor(&pivot);
                    self.add_row_multiple(t, i, &-q);
                    clean &= r.is_zero();
                }
                for j in t + 1..n {
                    let x = &self.a[t * n + j];
                    if x.is_zero() {
                        continue;
                    }
                    let (q, r) = x.div_mod_floor(&pivot);
                    self.add_col_multiple(t, j, &-q);
                    clean &= r.is_zero();
                }
                if clean {
                    diag.push(pivot);
                    break;
                }
            }
        }
        Ok(diag)
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.a[k * n + k].is_zero() {
                match (k + 1..n).find(|&i| !m.a[i * n + k].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            let pivot = m.a[k * n + k].clone();
            for i in k + 1..n {
                let lead = m.a[i * n + k].clone();
                for j in k + 1..n {
                    let v = &pivot * &m.a[i * n + j] - &lead * &m.a[k * n + j];
                    m.a[i * n + j] = v / &prev;
                }
                m.a[i * n + k] = BigInt::zero();
            }
            prev = pivot;
        }
        sign * &m.a[n * n - 1]
    }
}
