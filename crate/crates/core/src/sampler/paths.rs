use num_bigint::{BigUint, RandBigInt};

use super::RngState;
use crate::formulas::paths::{bridge_table, colour_weight};
use crate::formulas::{ColouredPath, Step};

/// Uniform coloured bridge of half-length `n`, i.e. a uniform pair (filling,
/// vertical wall set) of the `n × 2` shape. Built backwards through the
/// counting table with exact integer weights.
pub fn sample_coloured_path(n: usize, rng: &mut RngState) -> ColouredPath {
    let table = bridge_table(n, |_, alt| BigUint::from(colour_weight(alt)));
    let (mut u, mut d) = (n, n);
    let mut steps = Vec::with_capacity(2 * n);
    while u + d > 0 {
        let up = if u > 0 { table[u - 1][d].clone() } else { BigUint::default() };
        let alt = u as i64 - (d as i64 - 1);
        let down = if d > 0 {
            &table[u][d - 1] * colour_weight(alt)
        } else {
            BigUint::default()
        };
        let pick = rng.inner().gen_biguint_below(&(&up + &down));
        if pick < up {
            steps.push(Step::Up);
            u -= 1;
        } else {
            let blue = alt > 0 && rng.below(2) == 1;
            steps.push(if blue { Step::DownBlue } else { Step::DownRed });
            d -= 1;
        }
    }
    steps.reverse();
    ColouredPath::new(steps).expect("table only admits valid bridges")
}
