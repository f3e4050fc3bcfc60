//! Named models shared by the CLI and the verification suites.

use num_bigint::BigUint;

use crate::density::models::polyo_block;
use crate::density::BlockSpec;
use crate::error::{Error, Result};
use crate::formulas::{every_row_walls_count, two_col_intro_count};
use crate::shapes::families::{every_row_walls, polyomino, two_column, TwoColumnPattern};
use crate::shapes::ShapeSpec;

pub const MODEL_NAMES: [&str; 7] = [
    "polyo-2nx3",
    "nx2-no-walls",
    "nx2-vertical-all",
    "nx2-horizontal-all",
    "nx2-left-col",
    "nx2-walls-all",
    "nxm-rowwalls",
];

/// Default column count of `nxm-rowwalls`.
pub const DEFAULT_COLUMNS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// `2n × 3` with outer-column walls at even heights plus the bottom cell.
    Polyomino,
    TwoColumn(TwoColumnPattern),
    /// `n × m` with walls between all consecutive rows in columns `1..m−1`.
    RowWalls,
}

impl Model {
    pub fn from_name(name: &str) -> Result<Model> {
        Ok(match name {
            "polyo-2nx3" => Model::Polyomino,
            "nx2-no-walls" => Model::TwoColumn(TwoColumnPattern::NoWalls),
            "nx2-vertical-all" => Model::TwoColumn(TwoColumnPattern::VerticalEverywhere),
            "nx2-horizontal-all" => Model::TwoColumn(TwoColumnPattern::HorizontalEverywhere),
            "nx2-left-col" => Model::TwoColumn(TwoColumnPattern::OneColumnHorizontal),
            "nx2-walls-all" => Model::TwoColumn(TwoColumnPattern::WallsEverywhere),
            "nxm-rowwalls" => Model::RowWalls,
            _ => {
                return Err(Error::usage(format!(
                    "unknown model {name:?}; known: {}",
                    MODEL_NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Polyomino => "polyo-2nx3",
            Model::TwoColumn(TwoColumnPattern::NoWalls) => "nx2-no-walls",
            Model::TwoColumn(TwoColumnPattern::VerticalEverywhere) => "nx2-vertical-all",
            Model::TwoColumn(TwoColumnPattern::HorizontalEverywhere) => "nx2-horizontal-all",
            Model::TwoColumn(TwoColumnPattern::OneColumnHorizontal) => "nx2-left-col",
            Model::TwoColumn(TwoColumnPattern::WallsEverywhere) => "nx2-walls-all",
            Model::RowWalls => "nxm-rowwalls",
        }
    }

    /// The shape for `n`; `m` is only read by `nxm-rowwalls`.
    pub fn shape(self, n: usize, m: usize) -> Result<ShapeSpec> {
        match self {
            Model::Polyomino => polyomino(n),
            Model::TwoColumn(p) => two_column(n, p),
            Model::RowWalls => every_row_walls(n, m),
        }
    }

    pub fn formula(self, n: usize, m: usize) -> Result<BigUint> {
        match self {
            Model::Polyomino => Err(Error::usage(
                "polyo-2nx3 has no closed form; use --method density",
            )),
            Model::TwoColumn(p) => {
                if n == 0 {
                    return Err(Error::usage("n must be at least 1"));
                }
                Ok(two_col_intro_count(n as u64, p))
            }
            Model::RowWalls => {
                if n == 0 || m == 0 {
                    return Err(Error::usage("n and m must be at least 1"));
                }
                Ok(every_row_walls_count(n as u64, m as u64))
            }
        }
    }

    /// The density-method block, where one exists.
    pub fn block(self) -> Result<BlockSpec> {
        match self {
            Model::Polyomino => Ok(polyo_block()),
            _ => Err(Error::usage(format!(
                "{} has no density-method block",
                self.name()
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for name in MODEL_NAMES {
            assert_eq!(Model::from_name(name).unwrap().name(), name);
        }
        assert!(matches!(Model::from_name("nope"), Err(Error::Usage(_))));
    }

    #[test]
    fn catalan_model() {
        let m = Model::from_name("nx2-no-walls").unwrap();
        assert_eq!(m.formula(4, 0).unwrap(), BigUint::from(14u32));
        assert!(Model::Polyomino.formula(1, 0).is_err());
        assert!(Model::RowWalls.block().is_err());
    }
}
