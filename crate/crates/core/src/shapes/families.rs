//! Builders for the wall patterns used throughout the crate.

use super::{Cell, ShapeSpec, Wall};
use crate::error::{Error, Result};

/// The five `n × 2` wall patterns with elementary closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwoColumnPattern {
    WallsEverywhere,
    HorizontalEverywhere,
    /// Horizontal walls in the left column only.
    OneColumnHorizontal,
    VerticalEverywhere,
    NoWalls,
}

impl TwoColumnPattern {
    pub const ALL: [TwoColumnPattern; 5] = [
        TwoColumnPattern::WallsEverywhere,
        TwoColumnPattern::HorizontalEverywhere,
        TwoColumnPattern::OneColumnHorizontal,
        TwoColumnPattern::VerticalEverywhere,
        TwoColumnPattern::NoWalls,
    ];
}

fn need_rows(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::usage("n must be at least 1"));
    }
    Ok(())
}

pub fn two_column(n: usize, pattern: TwoColumnPattern) -> Result<ShapeSpec> {
    need_rows(n)?;
    let rows = n as i32;
    let mut walls = Vec::new();
    let (vertical, left_up, right_up) = match pattern {
        TwoColumnPattern::WallsEverywhere => (true, true, true),
        TwoColumnPattern::HorizontalEverywhere => (false, true, true),
        TwoColumnPattern::OneColumnHorizontal => (false, true, false),
        TwoColumnPattern::VerticalEverywhere => (true, false, false),
        TwoColumnPattern::NoWalls => (false, false, false),
    };
    for r in 0..rows {
        if vertical {
            walls.push(Wall::right(r, 0));
        }
        if r + 1 < rows {
            if left_up {
                walls.push(Wall::up(r, 0));
            }
            if right_up {
                walls.push(Wall::up(r, 1));
            }
        }
    }
    ShapeSpec::new(n, 2, Vec::new(), walls)
}

/// `n × 2` with a vertical wall (between the two columns) in each listed row (0 = bottom).
pub fn two_column_vertical(n: usize, wall_rows: &[usize]) -> Result<ShapeSpec> {
    need_rows(n)?;
    if let Some(&r) = wall_rows.iter().find(|&&r| r >= n) {
        return Err(Error::usage(format!("wall row {r} outside 0..{n}")));
    }
    ShapeSpec::new(
        n,
        2,
        Vec::new(),
        wall_rows.iter().map(|&r| Wall::right(r as i32, 0)),
    )
}

/// `n × m` with horizontal walls spanning columns `1..m-1` at each height.
///
/// Height `h` puts the wall between row `h` and row `h + 1`, rows counted from 1
/// at the bottom; column `m` keeps its constraint (the hole).
pub fn multi_column_walls(n: usize, m: usize, heights: &[usize]) -> Result<ShapeSpec> {
    need_rows(n)?;
    if m == 0 {
        return Err(Error::usage("m must be at least 1"));
    }
    if let Some(&h) = heights.iter().find(|&&h| h == 0 || h >= n) {
        return Err(Error::usage(format!("height {h} outside 1..{n}")));
    }
    let walls = heights
        .iter()
        .flat_map(|&h| (0..m.saturating_sub(1)).map(move |c| Wall::up(h as i32 - 1, c as i32)));
    ShapeSpec::new(n, m, Vec::new(), walls)
}

/// `n × m` with walls between every pair of consecutive rows in columns `1..m-1`.
pub fn every_row_walls(n: usize, m: usize) -> Result<ShapeSpec> {
    let heights: Vec<usize> = (1..n).collect();
    multi_column_walls(n, m, &heights)
}

fn wall_rows_2nx3(n: usize) -> impl Iterator<Item = Wall> {
    (1..n as i32).flat_map(|k| [Wall::up(2 * k - 1, 0), Wall::up(2 * k - 1, 2)])
}

/// The `2n × 3` tableau with walls in the outer columns at heights `2k`, `1 ≤ k < n`.
pub fn tableau_2nx3(n: usize) -> Result<ShapeSpec> {
    need_rows(n)?;
    ShapeSpec::new(2 * n, 3, Vec::new(), wall_rows_2nx3(n))
}

/// The extra cell below the middle column of [`polyomino`].
pub const POLYOMINO_BOTTOM: Cell = Cell::new(-1, 1);

/// `tableau_2nx3(n)` plus one cell below the middle column: `6n + 1` cells.
/// For `n = 0` this is the single bottom cell.
pub fn polyomino(n: usize) -> Result<ShapeSpec> {
    let cols = if n == 0 { 0 } else { 3 };
    ShapeSpec::new(2 * n, cols, vec![POLYOMINO_BOTTOM], wall_rows_2nx3(n))
}
