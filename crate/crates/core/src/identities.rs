//! Exact integer combinatorics behind the thermal expectation formula.
//!
//! `bracket(n, wt, m)` is the signed count of weight-`m` phase-flip
//! patterns: patterns with even overlap on a fixed weight-`wt` support
//! count +1, odd overlap -1. Everything here is arbitrary precision and
//! compared with exact equality.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Row `[C(n,0), ..., C(n,n)]`.
pub fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 1..=n {
        c = c * BigInt::from(n + 1 - k) / BigInt::from(k);
        row.push(c.clone());
    }
    row
}

/// `C(n, k)` with `C(0, a) = 1` for every `a >= 0` and `C(n, k) = 0` for `k > n >= 1`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

fn row_get(row: &[BigInt], k: usize) -> BigInt {
    // row.len() == 1 is the n = 0 row, where C(0, a) = 1
    if row.len() == 1 {
        BigInt::one()
    } else {
        row.get(k).cloned().unwrap_or_default()
    }
}

/// Summation limits `(w, f)` for the odd-overlap sum; empty when `f < w`.
fn odd_overlap_range(n: usize, wt: usize, m: usize) -> (i64, i64) {
    let (n, wt, m) = (n as i64, wt as i64, m as i64);
    let lower = (wt + m - n - 1).max(0);
    let w = (lower + 1).div_euclid(2);
    let f = (wt.min(m) - 1).div_euclid(2);
    (w, f)
}

fn bracket_with_rows(
    n: usize,
    wt: usize,
    m: usize,
    row_n: &[BigInt],
    row_wt: &[BigInt],
    row_rest: &[BigInt],
) -> BigInt {
    let (w, f) = odd_overlap_range(n, wt, m);
    let mut odd = BigInt::zero();
    let mut j = w;
    while j <= f {
        let odd_errors = (2 * j + 1) as usize;
        odd += row_get(row_wt, odd_errors) * row_get(row_rest, m - odd_errors);
        j += 1;
    }
    row_get(row_n, m) - odd * 2
}

/// `C(n,m) - 2 * sum_{j=w}^{f} C(wt, 2j+1) C(n-wt, m-2j-1)`.
pub fn bracket(n: usize, wt: usize, m: usize) -> Result<BigInt> {
    if wt > n {
        return Err(Error::WeightOutOfRange { wt, n });
    }
    if m > n {
        return Err(Error::OutOfRange {
            name: "m",
            value: m as f64,
            range: "[0, n]",
        });
    }
    Ok(bracket_with_rows(
        n,
        wt,
        m,
        &binomial_row(n),
        &binomial_row(wt),
        &binomial_row(n - wt),
    ))
}

/// `[bracket(n, wt, 0), ..., bracket(n, wt, n)]`.
pub fn bracket_row(n: usize, wt: usize) -> Result<Vec<BigInt>> {
    if wt > n {
        return Err(Error::WeightOutOfRange { wt, n });
    }
    let row_n = binomial_row(n);
    let row_wt = binomial_row(wt);
    let row_rest = binomial_row(n - wt);
    Ok((0..=n)
        .map(|m| bracket_with_rows(n, wt, m, &row_n, &row_wt, &row_rest))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `bracket(2k, k, m) = 0` for odd `m`.
    OddVanishes,
    /// `bracket(2k, k, m) = (-1)^{m/2} C(k, m/2)` for even `m`.
    EvenAlternates,
    /// `sum_j (-1)^j C(k,j) C(k,2m-j) = (-1)^m C(k,m)`.
    AlternatingConvolution,
    /// `sum_m bracket(2k, k, m) x^m = (1 - x^2)^k`.
    GeneratingPolynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub identity: Identity,
    pub k: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub k_max: usize,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(mut self, other: IdentityReport) -> Self {
        self.failures.extend(other.failures);
        self
    }
}

fn sign_pow(e: usize) -> BigInt {
    if e % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn require_k(k_max: usize) -> Result<()> {
    if k_max == 0 {
        Err(Error::OutOfRange {
            name: "k_max",
            value: 0.0,
            range: ">= 1",
        })
    } else {
        Ok(())
    }
}

pub fn check_odd(k_max: usize) -> Result<IdentityReport> {
    require_k(k_max)?;
    let mut failures = Vec::new();
    for k in 1..=k_max {
        let row = bracket_row(2 * k, k)?;
        for m in (1..=2 * k).step_by(2) {
            if !row[m].is_zero() {
                failures.push(IdentityFailure {
                    identity: Identity::OddVanishes,
                    k,
                    m,
                });
            }
        }
    }
    Ok(IdentityReport { k_max, failures })
}

pub fn check_even(k_max: usize) -> Result<IdentityReport> {
    require_k(k_max)?;
    let mut failures = Vec::new();
    for k in 1..=k_max {
        let row = bracket_row(2 * k, k)?;
        let row_k = binomial_row(k);
        for m in (0..=2 * k).step_by(2) {
            if row[m] != sign_pow(m / 2) * &row_k[m / 2] {
                failures.push(IdentityFailure {
                    identity: Identity::EvenAlternates,
                    k,
                    m,
                });
            }
        }
    }
    Ok(IdentityReport { k_max, failures })
}

pub fn check_alternating(k_max: usize) -> Result<IdentityReport> {
    require_k(k_max)?;
    let mut failures = Vec::new();
    for k in 1..=k_max {
        let row_k = binomial_row(k);
        for m in 0..=k {
            let lo = (2 * m).saturating_sub(k);
            let hi = k.min(2 * m);
            let lhs: BigInt = (lo..=hi)
                .map(|j| sign_pow(j) * &row_k[j] * &row_k[2 * m - j])
                .sum();
            if lhs != sign_pow(m) * &row_k[m] {
                failures.push(IdentityFailure {
                    identity: Identity::AlternatingConvolution,
                    k,
                    m,
                });
            }
        }
    }
    Ok(IdentityReport { k_max, failures })
}

/// Coefficients of `(1 - x^2)^k` by repeated polynomial multiplication.
fn one_minus_x2_pow(k: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::one()];
    for _ in 0..k {
        let mut next = vec![BigInt::zero(); poly.len() + 2];
        for (i, c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + 2] -= c;
        }
        poly = next;
    }
    poly
}

/// Checks `sum_m bracket(2k, k, m) x^m = (1 - x^2)^k` coefficient by coefficient.
pub fn check_generating_polynomial(k_max: usize) -> Result<IdentityReport> {
    require_k(k_max)?;
    let mut failures = Vec::new();
    for k in 1..=k_max {
        let lhs = bracket_row(2 * k, k)?;
        let rhs = one_minus_x2_pow(k);
        for m in 0..=2 * k {
            if lhs[m] != rhs[m] {
                failures.push(IdentityFailure {
                    identity: Identity::GeneratingPolynomial,
                    k,
                    m,
                });
            }
        }
    }
    Ok(IdentityReport { k_max, failures })
}

/// Every identity above for `k <= k_max`.
pub fn check_all(k_max: usize) -> Result<IdentityReport> {
    Ok(check_odd(k_max)?
        .merge(check_even(k_max)?)
        .merge(check_alternating(k_max)?)
        .merge(check_generating_polynomial(k_max)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Signed count over all weight-m masks, support = first `wt` sites.
    fn brute_bracket(n: usize, wt: usize, m: usize) -> i64 {
        let support: u32 = (1u32 << wt) - 1;
        (0u32..(1 << n))
            .filter(|mask| mask.count_ones() as usize == m)
            .map(|mask| if (mask & support).count_ones() % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    #[test]
    fn small_examples() {
        assert_eq!(bracket(4, 2, 0).unwrap(), BigInt::from(1));
        assert_eq!(bracket(4, 2, 1).unwrap(), BigInt::from(0));
        assert_eq!(bracket(4, 2, 2).unwrap(), BigInt::from(-2));
        assert_eq!(bracket(4, 2, 3).unwrap(), BigInt::from(0));
        assert_eq!(bracket(6, 3, 6).unwrap(), BigInt::from(-1));
        assert_eq!(bracket(7, 0, 3).unwrap(), BigInt::from(35));
        assert!(bracket(3, 4, 0).is_err());
        assert!(bracket(3, 1, 4).is_err());
    }

    #[test]
    fn matches_enumeration() {
        for n in 0..=10 {
            for wt in 0..=n {
                let row = bracket_row(n, wt).unwrap();
                for m in 0..=n {
                    assert_eq!(row[m], BigInt::from(brute_bracket(n, wt, m)), "n={n} wt={wt} m={m}");
                }
            }
        }
    }

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(0, 5), BigInt::one());
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(80, 40).to_string(), "107507208733336176461620");
        assert_eq!(binomial_row(80)[40], binomial(80, 40));
    }

    #[test]
    fn identities_small_k() {
        assert!(check_all(12).unwrap().passed());
        assert!(check_odd(0).is_err());
    }

    #[test]
    fn alternating_k2_m1() {
        // 1 - 4 + 1 = -2 = (-1)^1 C(2,1)
        let r = binomial_row(2);
        let lhs: BigInt = (0..=2).map(|j| sign_pow(j) * &r[j] * &r[2 - j]).sum();
        assert_eq!(lhs, BigInt::from(-2));
    }
}
