//! Uniform random fillings by the density method.
//!
//! The top interface value is drawn from `p_n`, then each block from the top
//! down is sampled layer by layer (outermost variable first) from the
//! conditional density given by the tower's partial integrals, and the chain
//! value becomes the interface of the block below. Ranking the `N(n)` real
//! values gives a uniform linear extension.

mod bernstein;
mod inverse;
mod paths;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density::{DensityTower, IntPoly, Layout};
use crate::error::{Error, Result};
use crate::exactmath::{Bound, MultiPoly, Polynomial, Rational};
use crate::shapes::{Cell, Filling, ShapeSpec};
use bernstein::{ln_factorials, LogBernstein, Scaled};
pub use inverse::{polynomial_quantile, sample_from_polynomial_density};
pub use paths::sample_coloured_path;
use inverse::{bisect, checked, sample_exact, sample_power_basis, TOLERANCE};

/// Default cap on rejection attempts in [`Sampler::sample_tableau`].
pub const DEFAULT_REJECTION_CAP: u64 = 1_000_000;

const MAX_TIE_RETRIES: usize = 1000;

/// Seedable random source: ChaCha with 8 rounds (`rand_chacha::ChaCha8Rng`),
/// seeded through `seed_from_u64`. The stream depends only on the seed.
#[derive(Clone, Debug)]
pub struct RngState {
    rng: ChaCha8Rng,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        RngState {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub(crate) fn inner(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: u64) -> u64 {
        self.rng.gen_range(0..n)
    }
}

/// Real values for every element of the unrolled structure and the filling
/// they induce, both in layout order.
#[derive(Clone, Debug, PartialEq)]
pub struct CellAssignment {
    pub values: Vec<f64>,
    pub filling: Filling,
    /// Log of the joint density at `values`, the product of all conditional densities.
    pub ln_density: f64,
}

/// A tableau obtained by rejection: the bottom element removed, labels shifted down.
#[derive(Clone, Debug, PartialEq)]
pub struct TableauSample {
    /// Labels `1..N−1` for the layout elements other than the bottom one, in layout order.
    pub labels: Vec<u32>,
    pub attempts: u64,
}

struct LevelTables {
    density: LogBernstein,
    /// `∫₀^t x^a p_k(x) dx` for `a = 0..=chain degree`.
    moments: Vec<LogBernstein>,
}

/// Precomputed evaluation tables over a shared tower; cheap to sample from repeatedly.
pub struct Sampler<'a> {
    tower: &'a DensityTower,
    n: usize,
    layout: Layout,
    levels: Vec<LevelTables>,
    /// `inner[j]` terms in double precision.
    inner: Vec<Vec<(Vec<u32>, f64)>>,
    /// Exact partials of the layers outside the chain, per level.
    outer: Vec<Vec<MultiPoly>>,
}

fn bound_value(b: &Bound, block: &crate::density::BlockSpec, point: &[f64]) -> f64 {
    match b {
        Bound::Zero => 0.0,
        Bound::One => 1.0,
        Bound::Var(name) if name == block.interface() => point[0],
        Bound::Var(name) => point[1 + block.var_index(name).expect("validated")],
    }
}

/// Coefficients in the variable at `vi` after substituting `point` for the others.
fn collect_f64(terms: &[(Vec<u32>, f64)], vi: usize, point: &[f64]) -> Vec<f64> {
    let deg = terms.iter().map(|(e, _)| e[vi] as usize).max().unwrap_or(0);
    let mut g = vec![0.0; deg + 1];
    for (exp, c) in terms {
        let mut t = *c;
        for (i, &k) in exp.iter().enumerate() {
            if i != vi && k > 0 {
                t *= point[i].powi(k as i32);
            }
        }
        g[exp[vi] as usize] += t;
    }
    g
}

fn horner(g: &[f64], t: f64) -> f64 {
    g.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

impl<'a> Sampler<'a> {
    /// Prepares sampling of `n`-block structures; needs `tower.depth() ≥ n`.
    pub fn new(tower: &'a DensityTower, n: usize) -> Result<Self> {
        if tower.depth() < n {
            return Err(Error::usage(format!(
                "tower depth {} is below the requested n = {n}",
                tower.depth()
            )));
        }
        let block = tower.block();
        let c = block.chain_index();
        let images = tower.images();
        let chain_degree = images.inner[c].degree_in(block.chain())? as usize;
        let max_degree = tower.levels()[..=n].iter().map(IntPoly::degree).max().unwrap_or(0);
        let ln_fact = ln_factorials(max_degree + chain_degree + 2);
        let levels = tower.levels()[..=n]
            .iter()
            .map(|p| {
                let density = LogBernstein::from_int_poly(p);
                let moments = (0..=chain_degree)
                    .map(|a| density.moment_antiderivative(a, &ln_fact))
                    .collect();
                LevelTables { density, moments }
            })
            .collect();
        let inner = images
            .inner
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(e, c)| (e.clone(), c.to_f64().unwrap_or(f64::NAN)))
                    .collect()
            })
            .collect();
        let mut outer = Vec::new();
        if c > 0 {
            let vars = block.poly_vars();
            for k in 0..n {
                let p = tower.poly(k);
                let mut per_layer = Vec::with_capacity(c);
                for j in 0..c {
                    let mut acc = MultiPoly::zero(&vars);
                    for (e, a) in p.coeffs().iter().enumerate() {
                        if !a.is_zero() {
                            acc = acc.try_add(&images.outer[e][j].scale(a))?;
                        }
                    }
                    per_layer.push(acc);
                }
                outer.push(per_layer);
            }
        }
        Ok(Sampler {
            tower,
            n,
            layout: block.layout(n),
            levels,
            inner,
            outer,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Draws from `g(t) · p_k(t)` on `[lo, hi]` (`g` in the power basis, low degree).
    /// Returns the value and the log of the normalized density there.
    fn sample_chain(&self, k: usize, g: &[f64], lo: f64, hi: f64, rng: &mut RngState) -> Result<(f64, f64)> {
        let tables = &self.levels[k];
        if hi < lo - TOLERANCE {
            return Err(Error::numeric(format!("empty interval [{lo}, {hi}]")));
        }
        let parts = |t: f64| -> Vec<Scaled> {
            tables.moments[..g.len()].iter().map(|m| m.eval(t)).collect()
        };
        let at_lo = parts(lo);
        let at_hi = parts(hi);
        let reference = at_hi
            .iter()
            .chain(&at_lo)
            .map(|s| s.scale)
            .fold(f64::NEG_INFINITY, f64::max);
        let combine = |v: &[Scaled]| -> f64 {
            g.iter()
                .zip(v)
                .map(|(ga, s)| ga * s.relative_to(reference))
                .sum()
        };
        let base = combine(&at_lo);
        let total = combine(&at_hi) - base;
        if !(total > 0.0) || reference == f64::NEG_INFINITY {
            return Err(Error::numeric(format!(
                "chain density has no positive mass on [{lo}, {hi}]"
            )));
        }
        let target = rng.uniform() * total;
        let t = bisect(lo, hi, |t| combine(&parts(t)) - base, target);
        let density = horner(g, t) * tables.density.eval(t).relative_to(reference) / total;
        checked(t, density)
    }

    /// Samples the variables of block `k` given its interface value `z`,
    /// outermost first. Returns the values and the log of their joint conditional density.
    pub fn sample_block(&self, k: usize, z: f64, rng: &mut RngState) -> Result<(Vec<f64>, f64)> {
        if k >= self.n {
            return Err(Error::usage(format!("block {k} outside 0..{}", self.n)));
        }
        if !(0.0..=1.0).contains(&z) {
            return Err(Error::usage(format!("interface value {z} outside [0, 1]")));
        }
        let block = self.tower.block();
        let c = block.chain_index();
        let mut point = vec![0.0; block.vars().len() + 1];
        point[0] = z;
        let mut ln_density = 0.0;
        for (j, var) in block.vars().iter().enumerate() {
            let lo = bound_value(&var.lower, block, &point);
            let hi = bound_value(&var.upper, block, &point);
            let vi = j + 1;
            let (t, ln_f) = if j == c {
                let g = collect_f64(&self.inner[j], vi, &point);
                self.sample_chain(k, &g, lo, hi, rng)?
            } else if j > c {
                let g = collect_f64(&self.inner[j], vi, &point);
                sample_power_basis(&g, lo, hi, rng)?
            } else {
                let mut p = self.outer[k][j].clone();
                for (i, name) in block.poly_vars().iter().enumerate().take(vi) {
                    let value = Rational::from_float(point[i])
                        .ok_or_else(|| Error::numeric("non-finite value"))?;
                    p = p.substitute(name, &value)?;
                }
                let uni: Polynomial = p.to_univariate(&var.name)?;
                sample_exact(&uni, lo, hi, rng)?
            };
            point[vi] = t;
            ln_density += ln_f;
        }
        Ok((point[1..].to_vec(), ln_density))
    }

    fn sample_values(&self, rng: &mut RngState) -> Result<(Vec<f64>, f64)> {
        let (z, mut ln_density) = self.sample_chain(self.n, &[1.0], 0.0, 1.0, rng)?;
        let c = self.tower.block().chain_index();
        let mut values = Vec::with_capacity(self.layout.elements().len());
        values.push(z);
        let mut interface = z;
        for k in (0..self.n).rev() {
            let (vals, ln_f) = self.sample_block(k, interface, rng)?;
            interface = vals[c];
            ln_density += ln_f;
            values.extend(vals);
        }
        Ok((values, ln_density))
    }

    /// One uniform filling of the unrolled structure. Exact ties between
    /// sampled reals cause the whole structure to be drawn again.
    pub fn sample_polyomino(&self, rng: &mut RngState) -> Result<CellAssignment> {
        for _ in 0..MAX_TIE_RETRIES {
            let (values, ln_density) = self.sample_values(rng)?;
            if let Ok(filling) = Filling::from_values(&values) {
                return Ok(CellAssignment {
                    values,
                    filling,
                    ln_density,
                });
            }
        }
        Err(Error::numeric("sampled values keep colliding"))
    }

    /// Samples until the bottom element carries label 1, then drops it.
    pub fn sample_tableau(&self, rng: &mut RngState, cap: u64) -> Result<TableauSample> {
        if self.n == 0 {
            return Err(Error::usage("a tableau needs n ≥ 1"));
        }
        let bottom = self.layout.bottom();
        for attempt in 1..=cap {
            let s = self.sample_polyomino(rng)?;
            if s.filling.label(bottom) == 1 {
                let labels = s
                    .filling
                    .labels()
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != bottom)
                    .map(|(_, &l)| l - 1)
                    .collect();
                return Ok(TableauSample {
                    labels,
                    attempts: attempt,
                });
            }
        }
        Err(Error::capacity(format!(
            "no sample with the bottom cell smallest after {cap} attempts"
        )))
    }

    /// Moves labels given in layout order (optionally without the bottom
    /// element) onto the cells of `shape`, using the block's geometry.
    pub fn filling_on_shape(&self, labels: &[u32], skip_bottom: bool, shape: &ShapeSpec) -> Result<Filling> {
        let cells: Vec<Cell> = self
            .layout
            .cells()
            .ok_or_else(|| Error::usage("block has no geometry"))?
            .iter()
            .enumerate()
            .filter(|&(i, _)| !(skip_bottom && i == self.layout.bottom()))
            .map(|(_, &c)| c)
            .collect();
        if cells.len() != labels.len() || cells.len() != shape.len() {
            return Err(Error::usage("labels do not match the shape"));
        }
        let mut out = vec![0; shape.len()];
        for (cell, &l) in cells.iter().zip(labels) {
            let i = shape
                .index_of(*cell)
                .ok_or_else(|| Error::usage(format!("cell {cell:?} not in the shape")))?;
            out[i] = l;
        }
        Filling::new(out)
    }
}

/// One-shot form of [`Sampler::sample_block`].
pub fn sample_block(tower: &DensityTower, k: usize, z: f64, rng: &mut RngState) -> Result<Vec<f64>> {
    Ok(Sampler::new(tower, k + 1)?.sample_block(k, z, rng)?.0)
}

/// One-shot form of [`Sampler::sample_polyomino`].
pub fn sample_polyomino(tower: &DensityTower, n: usize, rng: &mut RngState) -> Result<CellAssignment> {
    Sampler::new(tower, n)?.sample_polyomino(rng)
}

/// One-shot form of [`Sampler::sample_tableau`] with the default cap.
pub fn sample_tableau_rejection(tower: &DensityTower, n: usize, rng: &mut RngState) -> Result<TableauSample> {
    Sampler::new(tower, n)?.sample_tableau(rng, DEFAULT_REJECTION_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::models::polyo_block;
    use crate::density::{count_fillings, iterate_recurrence};
    use crate::formulas::factorial;
    use crate::shapes::families::{polyomino, tableau_2nx3};
    use crate::shapes::is_valid_filling;

    #[test]
    fn seeds_reproduce() {
        let mut a = RngState::new(42);
        let mut b = RngState::new(42);
        let mut c = RngState::new(43);
        let xs: Vec<f64> = (0..5).map(|_| a.uniform()).collect();
        let ys: Vec<f64> = (0..5).map(|_| b.uniform()).collect();
        let zs: Vec<f64> = (0..5).map(|_| c.uniform()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
    }

    #[test]
    fn single_cell() {
        let tower = iterate_recurrence(&polyo_block(), 0).unwrap();
        let s = sample_polyomino(&tower, 0, &mut RngState::new(1)).unwrap();
        assert_eq!(s.filling.labels(), &[1]);
    }

    #[test]
    fn samples_are_valid_and_blocks_respect_bounds() {
        let block = polyo_block();
        let tower = iterate_recurrence(&block, 5).unwrap();
        let mut rng = RngState::new(9);
        for n in 1..=5 {
            let sampler = Sampler::new(&tower, n).unwrap();
            let shape = polyomino(n).unwrap();
            for _ in 0..200 {
                let s = sampler.sample_polyomino(&mut rng).unwrap();
                assert!(s.filling.satisfies(sampler.layout().poset()));
                let f = sampler.filling_on_shape(s.filling.labels(), false, &shape).unwrap();
                assert!(is_valid_filling(&shape, &f).unwrap());
            }
            for _ in 0..200 {
                let z = rng.uniform();
                let (v, _) = sampler.sample_block(n - 1, z, &mut rng).unwrap();
                let (x, y, r, s, w, vv) = (v[0], v[1], v[2], v[3], v[4], v[5]);
                assert!(0.0 <= x && x <= y && y <= z && r <= y && r <= s && s <= z);
                assert!(z <= w && w <= 1.0 && y <= vv && vv <= w);
            }
        }
    }

    #[test]
    fn joint_density_is_constant() {
        // Uniform on the order polytope: every sample has density N! / f_n.
        let tower = iterate_recurrence(&polyo_block(), 4).unwrap();
        let mut rng = RngState::new(5);
        for n in 1..=4 {
            let c = count_fillings(&tower, n).unwrap();
            let want = (factorial(c.cells as u64).to_f64().unwrap() / c.count.to_f64().unwrap()).ln();
            let sampler = Sampler::new(&tower, n).unwrap();
            for _ in 0..100 {
                let s = sampler.sample_polyomino(&mut rng).unwrap();
                assert!((s.ln_density - want).abs() < 1e-6, "n={n}: {} vs {want}", s.ln_density);
            }
        }
    }

    #[test]
    fn tableau_samples_are_valid() {
        let tower = iterate_recurrence(&polyo_block(), 3).unwrap();
        let mut rng = RngState::new(3);
        for n in 1..=3 {
            let sampler = Sampler::new(&tower, n).unwrap();
            let shape = tableau_2nx3(n).unwrap();
            for _ in 0..100 {
                let t = sampler.sample_tableau(&mut rng, DEFAULT_REJECTION_CAP).unwrap();
                let f = sampler.filling_on_shape(&t.labels, true, &shape).unwrap();
                assert!(is_valid_filling(&shape, &f).unwrap());
            }
        }
        let sampler = Sampler::new(&tower, 3).unwrap();
        assert!(matches!(sampler.sample_tableau(&mut rng, 0), Err(Error::Capacity(_))));
    }

    #[test]
    fn high_levels_stay_finite() {
        let tower = iterate_recurrence(&polyo_block(), 40).unwrap();
        let sampler = Sampler::new(&tower, 40).unwrap();
        let mut rng = RngState::new(11);
        let s = sampler.sample_polyomino(&mut rng).unwrap();
        assert!(s.values.iter().all(|v| (0.0..=1.0).contains(v)));
        assert!(s.filling.satisfies(sampler.layout().poset()));
    }

    #[test]
    fn outer_layer_before_chain() {
        use crate::density::{BlockSpec, BlockVar};
        // Chain b sits inside a; the a layer is sampled from exact partials.
        let vars = vec![
            BlockVar::new("a", Bound::Zero, Bound::Var("z".into())),
            BlockVar::new("b", Bound::Var("a".into()), Bound::Var("z".into())),
        ];
        let block = BlockSpec::new(vars, "z", "b", None).unwrap();
        let tower = iterate_recurrence(&block, 3).unwrap();
        let sampler = Sampler::new(&tower, 3).unwrap();
        let mut rng = RngState::new(2);
        let c = count_fillings(&tower, 3).unwrap();
        let want = (factorial(c.cells as u64).to_f64().unwrap() / c.count.to_f64().unwrap()).ln();
        for _ in 0..50 {
            let s = sampler.sample_polyomino(&mut rng).unwrap();
            assert!(s.filling.satisfies(sampler.layout().poset()));
            assert!((s.ln_density - want).abs() < 1e-6);
        }
    }
}
