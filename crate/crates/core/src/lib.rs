//! Counting and uniform random generation of rectangular Young tableaux with
//! walls (edges where the increase constraint is dropped).
//!
//! * [`exactmath`]: exact rationals and polynomials with layered integration.
//! * [`shapes`]: grid shapes, their posets, and the downset-DP oracle.
//! * [`formulas`]: closed forms and the coloured-path bijection.
//! * [`density`]: block specifications, the polynomial tower and kernels.
//! * [`sampler`]: inverse-CDF sampling of fillings from a tower.
//! * [`stats`]: chi-square tests and cross-method reconciliation.

pub mod error;
pub mod exactmath;
pub mod formulas;
pub mod shapes;
pub mod density;
pub mod models;
pub mod sampler;
pub mod stats;

pub use error::{Error, Result};
