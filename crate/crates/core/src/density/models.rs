use std::collections::BTreeMap;

use super::block::{BlockSpec, BlockVar, Geometry};
use crate::exactmath::Bound;

fn v(name: &str) -> Bound {
    Bound::Var(name.to_string())
}

/// The seven-cell block of the `2n × 3` polyomino.
///
/// In block `k` (rows `2k`, `2k + 1`) the cells are `x = (2k−1, 1)`,
/// `y = (2k, 1)`, `z = (2k+1, 1)`, `r = (2k, 0)`, `s = (2k+1, 0)`,
/// `v = (2k, 2)` and `w = (2k+1, 2)`. The chain variable is `x`, which is the
/// `z` of the block below.
pub fn polyo_block() -> BlockSpec {
    let vars = vec![
        BlockVar::new("x", Bound::Zero, v("z")),
        BlockVar::new("y", v("x"), v("z")),
        BlockVar::new("r", Bound::Zero, v("y")),
        BlockVar::new("s", v("r"), v("z")),
        BlockVar::new("w", v("z"), Bound::One),
        BlockVar::new("v", v("y"), v("w")),
    ];
    let cells: BTreeMap<String, [i32; 2]> = [
        ("x", [-1, 1]),
        ("y", [0, 1]),
        ("z", [1, 1]),
        ("r", [0, 0]),
        ("s", [1, 0]),
        ("v", [0, 2]),
        ("w", [1, 2]),
    ]
    .into_iter()
    .map(|(k, c)| (k.to_string(), c))
    .collect();
    BlockSpec::new(
        vars,
        "z",
        "x",
        Some(Geometry {
            row_period: 2,
            cells,
        }),
    )
    .expect("built-in block is valid")
}

/// The same bounds with `v` as the chain variable, read literally.
/// Valid as a block, but its tower does not count the polyomino.
pub fn polyo_block_chain_v() -> BlockSpec {
    BlockSpec::new(polyo_block().vars().to_vec(), "z", "v", None).expect("valid block")
}
