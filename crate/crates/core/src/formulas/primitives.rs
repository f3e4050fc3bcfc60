use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::Rational;

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    // Each partial product is itself a binomial, so the division is exact.
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Shortened multinomial `n! / (m_1! ⋯ m_k! (n − Σ m_i)!)`.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<BigUint> {
    let total: u64 = parts.iter().sum();
    if total > n {
        return Err(Error::usage(format!(
            "multinomial parts sum to {total} > {n}"
        )));
    }
    let mut acc = BigUint::one();
    let mut remaining = n;
    for &m in parts {
        acc *= binomial(remaining, m as i64);
        remaining -= m;
    }
    Ok(acc)
}

/// `(n)_k = n (n−1) ⋯ (n−k+1)`.
pub fn falling_factorial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (n - k + 1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `(2n − 1)!! = 1 · 3 ⋯ (2n − 1)`.
pub fn double_factorial_odd(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * (2 * i - 1))
}

pub fn catalan(n: u64) -> BigUint {
    binomial(2 * n, n as i64) / (n + 1)
}

pub(crate) fn big(n: &BigUint) -> Rational {
    BigRational::from_integer(n.clone().into())
}

/// Converts an exact count to an integer, failing loudly on a fractional value.
pub(crate) fn integral(r: Rational, what: &str) -> Result<BigUint> {
    if !r.denom().is_one() {
        return Err(Error::consistency(format!("{what} is not an integer: {r}")));
    }
    r.numer()
        .to_biguint()
        .ok_or_else(|| Error::consistency(format!("{what} is negative: {r}")))
}

/// Exact division of naturals; a remainder is a consistency failure.
pub(crate) fn exact_div(a: &BigUint, b: &BigUint, what: &str) -> Result<BigUint> {
    let (q, r) = a.div_rem(b);
    if !r.is_zero() {
        return Err(Error::consistency(format!("{what}: {a} not divisible by {b}")));
    }
    Ok(q)
}
