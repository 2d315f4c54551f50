//! Exact counting formulas: binomials, ballot numbers, generalized Fine counts,
//! Catalan and Fine numbers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::words::FineParams;

/// `C(n, k)` by the multiplicative formula; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn binomial_signed(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 {
        return BigInt::zero();
    }
    BigInt::from(binomial(n as u64, k as u64))
}

/// Dyck paths of semilength `n` whose first rise is exactly `k`:
/// `C(2n-k-1, n-1) - C(2n-k-1, n)`.
pub fn ballot(n: u32, k: u32) -> BigUint {
    if n == 0 {
        return if k == 0 { BigUint::one() } else { BigUint::zero() };
    }
    if k > n {
        return BigUint::zero();
    }
    let (n, k) = (n as i64, k as i64);
    let top = 2 * n - k - 1;
    let v = binomial_signed(top, n - 1) - binomial_signed(top, n);
    v.to_biguint().expect("ballot numbers are non-negative")
}

/// Number of generalized Fine words of length `n`:
/// the sum of `ballot(n, kq+p)` for `k = 0..=floor((n-p)/q)`.
pub fn count_formula(n: u32, params: FineParams) -> BigUint {
    let (p, q) = (params.p(), params.q());
    if n < p {
        return BigUint::zero();
    }
    (0..=(n - p) / q).map(|k| ballot(n, k * q + p)).sum()
}

pub fn catalan(n: u32) -> BigUint {
    binomial(2 * n as u64, n as u64) / BigUint::from(n + 1)
}

/// Fine numbers indexed so that `fine(1..=8)` is 1, 2, 6, 18, 57, 186, 622, 2120.
/// Equal to `count_formula(n + 1, 0, 2)`.
pub fn fine(n: u32) -> BigUint {
    count_formula(n + 1, FineParams::NONSINGULAR)
}

/// One checked instance of `2 F_n + F_{n-1} = C_{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapiroRow {
    pub n: u32,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapiroReport {
    pub rows: Vec<ShapiroRow>,
    pub first_failure: Option<u32>,
}

impl ShapiroReport {
    pub fn is_clean(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub fn check_shapiro(n_max: u32) -> ShapiroReport {
    let rows: Vec<ShapiroRow> = (2..=n_max)
        .map(|n| {
            let lhs = BigUint::from(2u32) * fine(n) + fine(n - 1);
            let rhs = catalan(n + 1);
            ShapiroRow { n, holds: lhs == rhs, lhs: lhs.to_string(), rhs: rhs.to_string() }
        })
        .collect();
    let first_failure = rows.iter().find(|r| !r.holds).map(|r| r.n);
    ShapiroReport { rows, first_failure }
}
