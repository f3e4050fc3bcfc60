//! Closed-form counts for families of tableaux with walls.
//!
//! Every rational prefactor is evaluated exactly and every final count must
//! come out integral; a fractional result is reported as a consistency
//! failure because it points at a convention mismatch (heights, orientation).

pub(crate) mod paths;
mod primitives;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::shapes::families::TwoColumnPattern;

pub use paths::{
    count_coloured_paths, path_to_tableau, tableau_to_coloured_path, vertical_walls_count_fixed,
    ColouredPath, Step,
};
pub use primitives::{
    binomial, catalan, double_factorial_odd, factorial, falling_factorial, multinomial,
};

use primitives::{big, exact_div, integral};

/// Count for the five elementary `n × 2` patterns.
pub fn two_col_intro_count(n: u64, pattern: TwoColumnPattern) -> BigUint {
    match pattern {
        TwoColumnPattern::WallsEverywhere => factorial(2 * n),
        TwoColumnPattern::HorizontalEverywhere => factorial(2 * n) >> n,
        TwoColumnPattern::OneColumnHorizontal => double_factorial_odd(n),
        TwoColumnPattern::VerticalEverywhere => binomial(2 * n, n as i64),
        TwoColumnPattern::NoWalls => catalan(n),
    }
}

fn check_k(n: u64, k: u64) -> Result<()> {
    if k > n {
        return Err(Error::usage(format!("k = {k} outside 0..={n}")));
    }
    Ok(())
}

/// `v_{n,k} = C(n,k) C(2n,n) / (n+1−k)`: the number of `n × 2` tableaux with
/// exactly `k` vertical walls, summed over the `C(n,k)` choices of wall rows.
///
/// For the count with the wall rows fixed see [`vertical_walls_count_fixed`].
pub fn vertical_walls_count(n: u64, k: u64) -> Result<BigUint> {
    check_k(n, k)?;
    let num = binomial(n, k as i64) * binomial(2 * n, n as i64);
    exact_div(&num, &BigUint::from(n + 1 - k), "v(n,k)")
}

/// Mean number of fillings over the `C(n,k)` placements of `k` vertical walls:
/// `C(2n,n) / (n+1−k)`.
pub fn avg_extensions_random_walls(n: u64, k: u64) -> Result<Rational> {
    check_k(n, k)?;
    Ok(BigRational::new(
        binomial(2 * n, n as i64).into(),
        BigUint::from(n + 1 - k).into(),
    ))
}

/// `P(X_n = k) = C(n+1,k) / (2^{n+1} − 1)` for `k = 0..=n`, where `X_n` is the
/// number of vertical walls of a uniform `n × 2` tableau with walls.
pub fn wall_count_pmf(n: u64) -> Result<Vec<Rational>> {
    if n == 0 {
        return Err(Error::usage("n must be at least 1"));
    }
    let total: BigUint = (BigUint::one() << (n + 1)) - 1u32;
    Ok((0..=n)
        .map(|k| BigRational::new(binomial(n + 1, k as i64).into(), total.clone().into()))
        .collect())
}

/// `C(2n,λ) − C(2n,λ−1)`.
pub fn lemma_fillings_count(n: u64, lambda: u64) -> Result<BigUint> {
    if lambda == 0 || lambda > n {
        return Err(Error::usage(format!("λ = {lambda} outside 1..={n}")));
    }
    Ok(binomial(2 * n, lambda as i64) - binomial(2 * n, lambda as i64 - 1))
}

/// The same count written as `(2(n−λ)+1)/(2n+1) · C(2n+1,λ)`.
pub fn lemma_fillings_rewritten(n: u64, lambda: u64) -> Result<Rational> {
    if lambda == 0 || lambda > n {
        return Err(Error::usage(format!("λ = {lambda} outside 1..={n}")));
    }
    Ok(BigRational::new(
        BigUint::from(2 * (n - lambda) + 1).into(),
        BigUint::from(2 * n + 1).into(),
    ) * big(&binomial(2 * n + 1, lambda as i64)))
}

/// Wall heights `0 < h_1 < … < h_k < n` of an `n`-row tableau.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightList {
    n: u64,
    heights: Vec<u64>,
}

impl HeightList {
    pub fn new(n: u64, heights: Vec<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage("n must be at least 1"));
        }
        let mut prev = 0;
        for &h in &heights {
            if h <= prev || h >= n {
                return Err(Error::usage(format!(
                    "heights {heights:?} must be strictly increasing within 1..{n}"
                )));
            }
            prev = h;
        }
        Ok(HeightList { n, heights })
    }

    /// Every height list of an `n`-row tableau (all subsets of `1..n`).
    pub fn all(n: u64) -> Vec<HeightList> {
        let inner = n.saturating_sub(1);
        (0u64..1 << inner)
            .map(|mask| HeightList {
                n,
                heights: (1..n).filter(|h| mask >> (h - 1) & 1 == 1).collect(),
            })
            .collect()
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn heights(&self) -> &[u64] {
        &self.heights
    }

    /// `h_1..h_{k+1}` with `h_{k+1} = n`.
    fn closed(&self) -> impl Iterator<Item = u64> + '_ {
        self.heights.iter().copied().chain(std::iter::once(self.n))
    }

    /// Gaps `λ_i = h_i − h_{i−1}`, `i = 1..=k+1`, with `h_0 = 0`, `h_{k+1} = n`.
    pub fn gaps(&self) -> Vec<u64> {
        let mut prev = 0;
        self.closed()
            .map(|h| {
                let g = h - prev;
                prev = h;
                g
            })
            .collect()
    }
}

/// `n × 2` tableaux with horizontal walls in the first column at the given heights:
/// `1/(2n+1) · Π C(2h_i+1, h_i − h_{i−1})`.
pub fn first_column_walls_count(heights: &HeightList) -> Result<BigUint> {
    let mut prev = 0;
    let mut acc = BigUint::one();
    for h in heights.closed() {
        acc *= binomial(2 * h + 1, (h - prev) as i64);
        prev = h;
    }
    exact_div(&acc, &BigUint::from(2 * heights.n + 1), "first-column count")
}

/// `n × m` tableaux with walls spanning columns `1..m−1` at the given heights.
pub fn multi_column_walls_count(m: u64, heights: &HeightList) -> Result<BigUint> {
    if m < 2 {
        return Err(Error::usage("the multi-column formula needs m ≥ 2"));
    }
    let n = heights.n;
    let mut value = BigRational::new(
        factorial(m - 1).into(),
        falling_factorial(m * n + m - 1, m - 1).into(),
    );
    let mut h = 0;
    for lambda in heights.gaps() {
        h += lambda;
        for j in 1..=m.saturating_sub(2) {
            value /= big(&binomial(lambda + j, j as i64));
        }
        let parts = vec![lambda; (m - 1) as usize];
        value *= big(&multinomial(m * h + m - 1, &parts)?);
    }
    integral(value, "multi-column count")
}

/// The explicit `n × 4` specialisation.
pub fn four_column_walls_count(heights: &HeightList) -> Result<BigUint> {
    let n = heights.n;
    let mut value = BigRational::new(
        BigUint::from(6u32).into(),
        BigUint::from((4 * n + 3) * (4 * n + 2) * (4 * n + 1)).into(),
    );
    let mut h = 0;
    for lambda in heights.gaps() {
        h += lambda;
        value *= BigRational::new(
            BigUint::from(2u32).into(),
            BigUint::from((lambda + 1) * (lambda + 1) * (lambda + 2)).into(),
        );
        value *= big(&multinomial(4 * h + 3, &[lambda, lambda, lambda])?);
    }
    integral(value, "four-column count")
}

/// Walls between every pair of rows (columns `1..m−1`): `(mn)! / (n! (m!)^n)`.
///
/// For `m = 1` there are no walls and the single column admits one filling,
/// which the formula also returns.
pub fn every_row_walls_count(n: u64, m: u64) -> BigUint {
    factorial(m * n) / (factorial(n) * factorial(m).pow(n as u32))
}

/// A Young diagram given by weakly decreasing positive row lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::usage("partition parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::usage("partition parts must be weakly decreasing"));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        Partition {
            parts: (0..width)
                .map(|j| self.parts.iter().filter(|&&r| r > j).count() as u64)
                .collect(),
        }
    }
}

/// Standard Young tableaux of the given shape: `N! / Π hooks`.
pub fn hook_length_count(shape: &Partition) -> BigUint {
    let cols = shape.conjugate();
    let mut hooks = BigUint::one();
    for (i, &r) in shape.parts.iter().enumerate() {
        for j in 0..r {
            let hook = (r - j) + (cols.parts[j as usize] - i as u64) - 1;
            hooks *= hook;
        }
    }
    factorial(shape.size()) / hooks
}

/// Fillings of a shape cut by walls into independent wall-free pieces:
/// `multinomial(n; sizes) · Π hook_length_count(piece)`.
pub fn split_product_count(n: u64, parts: &[Partition]) -> Result<BigUint> {
    let sizes: Vec<u64> = parts.iter().map(Partition::size).collect();
    if sizes.iter().sum::<u64>() != n {
        return Err(Error::usage(format!(
            "piece sizes {sizes:?} do not add up to {n}"
        )));
    }
    let mut acc = multinomial(n, &sizes)?;
    for p in parts {
        acc *= hook_length_count(p);
    }
    Ok(acc)
}

/// `Σ_k v_{n,k}` in closed form: `Cat_n (2^{n+1} − 1)`.
pub fn total_walled_two_column(n: u64) -> BigUint {
    catalan(n) * ((BigUint::one() << (n + 1)) - 1u32)
}

/// Mean and variance of a pmf on `0..len`.
pub fn pmf_moments(pmf: &[Rational]) -> (Rational, Rational) {
    let mut mean = Rational::zero();
    let mut second = Rational::zero();
    for (k, p) in pmf.iter().enumerate() {
        let k = Rational::from_integer((k as i64).into());
        mean += &k * p;
        second += &k * &k * p;
    }
    let var = second - &mean * &mean;
    (mean, var)
}
