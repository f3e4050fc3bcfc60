//! The density method: a block specification language, the polynomial tower
//! `p_0, p_1, …` obtained by nested integration through the block, exact
//! counts `N(n)! · ∫₀¹ p_n`, kernel extraction and a tower cache.

mod block;
mod cache;
mod kernel;
pub mod models;
mod tower;

pub use block::{validate_block, BlockSpec, BlockVar, Element, Geometry, Layout};
pub use cache::{load_tower, save_tower, tower_from_json, tower_to_json, CACHE_VERSION};
pub use kernel::{derive_kernel, Kernel};
pub use tower::{count_fillings, iterate_recurrence, CountResult, DensityTower};
pub(crate) use tower::IntPoly;
