//! Two-column tableaux with vertical walls as coloured bridges.
//!
//! Entry `m` in the left column gives an up step, in the right column a down
//! step. The `j`-th down step belongs to row `j` of the right column and is red
//! exactly when that row carries a wall. A down step starting at altitude ≤ 0
//! needs the wall, so below the axis every down step is red.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::shapes::{Cell, Filling, ShapeSpec, Wall, WallDir};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Up,
    DownRed,
    DownBlue,
}

/// A bridge of length `2n` (starts and ends at altitude 0) with coloured down steps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColouredPath {
    steps: Vec<Step>,
}

impl ColouredPath {
    /// Fails unless the path ends at 0 and every down step below the axis is red.
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let mut alt: i64 = 0;
        for s in &steps {
            match s {
                Step::Up => alt += 1,
                Step::DownRed => alt -= 1,
                Step::DownBlue => {
                    if alt <= 0 {
                        return Err(Error::usage("blue down step below the axis"));
                    }
                    alt -= 1;
                }
            }
        }
        if alt != 0 {
            return Err(Error::usage("path does not end on the axis"));
        }
        Ok(ColouredPath { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn half_length(&self) -> usize {
        self.steps.len() / 2
    }

    pub fn red_count(&self) -> usize {
        self.steps.iter().filter(|&&s| s == Step::DownRed).count()
    }

    /// Down steps that start at altitude ≤ 0.
    pub fn below_axis_count(&self) -> usize {
        let mut alt = 0i64;
        let mut below = 0;
        for s in &self.steps {
            match s {
                Step::Up => alt += 1,
                _ => {
                    if alt <= 0 {
                        below += 1;
                    }
                    alt -= 1;
                }
            }
        }
        below
    }
}

fn two_column_rows(shape: &ShapeSpec) -> Result<usize> {
    if shape.cols() != 2 || !shape.extra_cells().is_empty() {
        return Err(Error::usage("expected an n × 2 shape"));
    }
    if shape.walls().iter().any(|w| w.dir != WallDir::Right) {
        return Err(Error::usage("only vertical walls are supported"));
    }
    Ok(shape.rows())
}

/// Maps a filling of an `n × 2` shape with vertical walls to its coloured path.
pub fn tableau_to_coloured_path(shape: &ShapeSpec, filling: &Filling) -> Result<ColouredPath> {
    let n = two_column_rows(shape)?;
    if !crate::shapes::is_valid_filling(shape, filling)? {
        return Err(Error::usage("filling violates the shape's constraints"));
    }
    let mut steps = Vec::with_capacity(2 * n);
    for e in filling.order() {
        let cell = shape.cells()[e];
        steps.push(match cell.col {
            0 => Step::Up,
            _ if shape.has_wall(Cell::new(cell.row, 0), WallDir::Right) => Step::DownRed,
            _ => Step::DownBlue,
        });
    }
    ColouredPath::new(steps)
}

/// Inverse of [`tableau_to_coloured_path`]: rebuilds the shape (walls from red
/// steps) and the filling (columns filled bottom to top in step order).
pub fn path_to_tableau(path: &ColouredPath) -> Result<(ShapeSpec, Filling)> {
    let n = path.half_length();
    if n == 0 {
        return Err(Error::usage("empty path"));
    }
    let mut walls = Vec::new();
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for (m, s) in path.steps.iter().enumerate() {
        let label = m as u32 + 1;
        match s {
            Step::Up => left.push(label),
            Step::DownRed => {
                walls.push(Wall::right(right.len() as i32, 0));
                right.push(label);
            }
            Step::DownBlue => right.push(label),
        }
    }
    if left.len() != n || right.len() != n {
        return Err(Error::usage("unbalanced path"));
    }
    let shape = ShapeSpec::new(n, 2, Vec::new(), walls)?;
    // Cells are ordered by row then column: (r,0), (r,1), ...
    let labels = (0..n).flat_map(|r| [left[r], right[r]]).collect();
    Ok((shape, Filling::new(labels)?))
}

/// Fillings of the `n × 2` shape with vertical walls exactly in `wall_rows`
/// (0 = bottom), counted as bridges whose below-axis down steps all sit in wall rows.
pub fn vertical_walls_count_fixed(n: usize, wall_rows: &[usize]) -> Result<BigUint> {
    if let Some(&r) = wall_rows.iter().find(|&&r| r >= n) {
        return Err(Error::usage(format!("wall row {r} outside 0..{n}")));
    }
    let mut wall = vec![false; n];
    for &r in wall_rows {
        wall[r] = true;
    }
    Ok(bridge_dp(n, |row, alt| {
        if alt > 0 || wall[row] {
            BigUint::one()
        } else {
            BigUint::zero()
        }
    }))
}

/// All `(filling, vertical wall set)` pairs of the `n × 2` shape: above the
/// axis a down step may be red or blue, below it must be red.
pub fn count_coloured_paths(n: usize) -> BigUint {
    bridge_dp(n, |_, alt| BigUint::from(colour_weight(alt)))
}

/// Weighted bridge count; `down_weight(row, altitude_before)` weights the down step of `row`.
fn bridge_dp(n: usize, down_weight: impl Fn(usize, i64) -> BigUint) -> BigUint {
    bridge_table(n, down_weight)[n][n].clone()
}

/// `table[u][d]`: weighted prefixes with `u` up steps and `d` down steps.
pub(crate) fn bridge_table(n: usize, down_weight: impl Fn(usize, i64) -> BigUint) -> Vec<Vec<BigUint>> {
    let mut table = vec![vec![BigUint::zero(); n + 1]; n + 1];
    table[0][0] = BigUint::one();
    for u in 0..=n {
        for d in 0..=n {
            if u == 0 && d == 0 {
                continue;
            }
            let mut acc = BigUint::zero();
            if u > 0 {
                acc += &table[u - 1][d];
            }
            if d > 0 {
                let alt = u as i64 - (d as i64 - 1);
                acc += &table[u][d - 1] * down_weight(d - 1, alt);
            }
            table[u][d] = acc;
        }
    }
    table
}

/// Weight of a down step of the coloured count: two colours above the axis, red only below.
pub(crate) fn colour_weight(alt: i64) -> u32 {
    if alt > 0 {
        2
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{catalan, total_walled_two_column};
    use crate::shapes::families::two_column_vertical;
    use crate::shapes::{build_poset, count_linear_extensions, enumerate_fillings};

    #[test]
    fn single_row() {
        let shape = two_column_vertical(1, &[]).unwrap();
        let f = Filling::new(vec![1, 2]).unwrap();
        let p = tableau_to_coloured_path(&shape, &f).unwrap();
        assert_eq!(p.steps(), &[Step::Up, Step::DownBlue]);
        let (s2, f2) = path_to_tableau(&p).unwrap();
        assert_eq!((s2, f2), (shape, f));
    }

    #[test]
    fn blue_below_axis_is_rejected() {
        assert!(ColouredPath::new(vec![Step::DownBlue, Step::Up]).is_err());
        assert!(ColouredPath::new(vec![Step::DownRed, Step::Up]).is_ok());
        assert!(ColouredPath::new(vec![Step::Up, Step::Up]).is_err());
    }

    #[test]
    fn fixed_rows_match_oracle() {
        for n in 1..=5usize {
            for mask in 0u32..1 << n {
                let rows: Vec<usize> = (0..n).filter(|r| mask >> r & 1 == 1).collect();
                let shape = two_column_vertical(n, &rows).unwrap();
                let oracle = count_linear_extensions(&build_poset(&shape)).unwrap();
                assert_eq!(vertical_walls_count_fixed(n, &rows).unwrap(), oracle);
            }
        }
    }

    #[test]
    fn total_count() {
        for n in 1..=12 {
            assert_eq!(count_coloured_paths(n), total_walled_two_column(n as u64));
        }
    }

    #[test]
    fn chung_feller_uniformity() {
        // Bridges of length 2n with i down steps below the axis: Cat_n for every i.
        for n in 1..=4usize {
            let mut by_below = vec![0u64; n + 1];
            for mask in 0u32..1 << (2 * n) {
                if mask.count_ones() as usize != n {
                    continue;
                }
                let steps = (0..2 * n)
                    .map(|i| if mask >> i & 1 == 1 { Step::Up } else { Step::DownRed })
                    .collect();
                let p = ColouredPath::new(steps).unwrap();
                by_below[p.below_axis_count()] += 1;
            }
            for c in by_below {
                assert_eq!(BigUint::from(c), catalan(n as u64));
            }
        }
    }

    #[test]
    fn bijection_roundtrip() {
        for n in 1..=3usize {
            for mask in 0u32..1 << n {
                let rows: Vec<usize> = (0..n).filter(|r| mask >> r & 1 == 1).collect();
                let shape = two_column_vertical(n, &rows).unwrap();
                for f in enumerate_fillings(&build_poset(&shape), usize::MAX).unwrap() {
                    let p = tableau_to_coloured_path(&shape, &f).unwrap();
                    assert_eq!(p.red_count(), rows.len());
                    assert_eq!(path_to_tableau(&p).unwrap(), (shape.clone(), f));
                }
            }
        }
    }
}
