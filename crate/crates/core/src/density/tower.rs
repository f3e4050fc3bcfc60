use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::block::BlockSpec;
use crate::error::{Error, Result};
use crate::exactmath::{MultiPoly, Polynomial, Rational};
use crate::formulas::factorial;

/// A polynomial `num / den` with integer numerators over one common denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntPoly {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl IntPoly {
    pub fn one() -> Self {
        IntPoly {
            num: vec![BigInt::one()],
            den: BigInt::one(),
        }
    }

    pub fn from_poly(p: &Polynomial) -> Self {
        let den = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = p
            .coeffs()
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        IntPoly { num, den }
    }

    pub fn to_poly(&self, var: &str) -> Polynomial {
        Polynomial::new(
            var,
            self.num
                .iter()
                .map(|a| BigRational::new(a.clone(), self.den.clone()))
                .collect(),
        )
    }

    fn reduce(&mut self) {
        while self.num.last().is_some_and(Zero::is_zero) {
            self.num.pop();
        }
        let mut g = self.den.clone();
        for a in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(a);
        }
        if !g.is_one() && !g.is_zero() {
            for a in &mut self.num {
                *a /= &g;
            }
            self.den /= &g;
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            for a in &mut self.num {
                *a = -&*a;
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.num.len().saturating_sub(1)
    }
}

/// Images of the monomial inputs `chain^e` under the block integration.
///
/// `inner[j]` is the integrand just before layer `j` is integrated when the
/// input is 1. For `j ≥ chain` the image of `chain^e` is `chain^e · inner[j]`,
/// so only the layers outside the chain (`j < chain`) are stored per exponent.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Images {
    pub inner: Vec<MultiPoly>,
    pub outer: Vec<Vec<MultiPoly>>,
    pub results: Vec<Polynomial>,
    /// `results` over per-image common denominators.
    pub scaled: Vec<IntPoly>,
}

impl Images {
    pub fn new(block: &BlockSpec) -> Result<Self> {
        let vars = block.poly_vars();
        let m = block.vars().len();
        let mut inner = vec![MultiPoly::zero(&vars); m];
        inner[m - 1] = MultiPoly::constant(&vars, Rational::one());
        for j in (0..m - 1).rev() {
            let layer = &block.vars()[j + 1];
            inner[j] = inner[j + 1].integrate_layer(&layer.name, &layer.lower, &layer.upper)?;
        }
        let mut images = Images {
            inner,
            outer: Vec::new(),
            results: Vec::new(),
            scaled: Vec::new(),
        };
        images.extend(block, 0)?;
        Ok(images)
    }

    /// Makes sure images exist for every exponent `≤ max_e`.
    pub fn extend(&mut self, block: &BlockSpec, max_e: usize) -> Result<()> {
        let vars = block.poly_vars();
        let c = block.chain_index();
        let chain = block.chain();
        while self.results.len() <= max_e {
            let e = self.results.len() as u32;
            let mut key = vec![0u32; vars.len()];
            key[c + 1] = e;
            let mono = MultiPoly::from_terms(&vars, [(key, Rational::one())])?;
            let mut current = mono.try_mul(&self.inner[c])?;
            let mut outer = vec![MultiPoly::zero(&vars); c];
            for j in (0..=c).rev() {
                let layer = &block.vars()[j];
                current = current.integrate_layer(&layer.name, &layer.lower, &layer.upper)?;
                if j > 0 {
                    outer[j - 1] = current.clone();
                }
            }
            let result = current.to_univariate(block.interface()).map_err(|_| {
                Error::consistency(format!(
                    "image of {chain}^{e} still depends on block variables"
                ))
            })?;
            self.outer.push(outer);
            self.scaled.push(IntPoly::from_poly(&result));
            self.results.push(result);
        }
        Ok(())
    }
}

/// The polynomial tower `p_0 = 1, p_1, …` of a block.
///
/// Levels are stored exactly. Partial integrals are kept as images of the
/// monomial inputs; [`DensityTower::partial`] assembles the partial integral
/// of any level on demand.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityTower {
    block: BlockSpec,
    levels: Vec<IntPoly>,
    images: Images,
}

impl DensityTower {
    /// A tower holding only `p_0 = 1`.
    pub fn new(block: BlockSpec) -> Result<Self> {
        let images = Images::new(&block)?;
        Ok(DensityTower {
            block,
            levels: vec![IntPoly::one()],
            images,
        })
    }

    pub(crate) fn from_parts(block: BlockSpec, levels: Vec<IntPoly>, images: Images) -> Self {
        DensityTower {
            block,
            levels,
            images,
        }
    }

    pub fn block(&self) -> &BlockSpec {
        &self.block
    }

    /// Highest level stored.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Computes levels up to `n`. Returns the number of new levels.
    pub fn extend_to(&mut self, n: usize) -> Result<usize> {
        let before = self.depth();
        while self.depth() < n {
            let last = self.levels.last().expect("p_0 exists").clone();
            let next = self.next_level(&last)?;
            self.levels.push(next);
        }
        Ok(n.saturating_sub(before))
    }

    fn next_level(&mut self, p: &IntPoly) -> Result<IntPoly> {
        self.images.extend(&self.block, p.degree())?;
        let images = &self.images.scaled[..p.num.len()];
        let scale = images.iter().fold(BigInt::one(), |acc, r| acc.lcm(&r.den));
        let width = images.iter().map(|r| r.num.len()).max().unwrap_or(0);
        let mut num = vec![BigInt::zero(); width];
        for (a, r) in p.num.iter().zip(images) {
            if a.is_zero() {
                continue;
            }
            let t = a * (&scale / &r.den);
            for (i, c) in r.num.iter().enumerate() {
                if !c.is_zero() {
                    num[i] += &t * c;
                }
            }
        }
        let mut out = IntPoly {
            num,
            den: &p.den * scale,
        };
        out.reduce();
        Ok(out)
    }

    /// `p_k` as a polynomial in the interface variable.
    pub fn poly(&self, k: usize) -> Polynomial {
        self.levels[k].to_poly(self.block.interface())
    }

    pub fn polys(&self) -> Vec<Polynomial> {
        (0..=self.depth()).map(|k| self.poly(k)).collect()
    }

    pub(crate) fn levels(&self) -> &[IntPoly] {
        &self.levels
    }

    pub(crate) fn images(&self) -> &Images {
        &self.images
    }

    /// Image of `chain^e` under the full block integration, a polynomial in the interface.
    pub fn monomial_image(&mut self, e: usize) -> Result<Polynomial> {
        self.images.extend(&self.block, e)?;
        Ok(self.images.results[e].clone())
    }

    /// Integrand of layer `j` at level `k`, before layer `j` is integrated:
    /// a polynomial in the interface and the variables `0..=j` of the block.
    pub fn partial(&mut self, k: usize, j: usize) -> Result<MultiPoly> {
        let m = self.block.vars().len();
        if k > self.depth() || j >= m {
            return Err(Error::usage(format!("no partial for level {k}, layer {j}")));
        }
        let c = self.block.chain_index();
        let vars = self.block.poly_vars();
        let p = self.poly(k);
        if j >= c {
            let pk = MultiPoly::from_univariate(&vars, self.block.chain(), &p.with_var(self.block.chain()))?;
            return pk.try_mul(&self.images.inner[j]);
        }
        self.images.extend(&self.block, p.degree().unwrap_or(0))?;
        let mut acc = MultiPoly::zero(&vars);
        for (e, a) in p.coeffs().iter().enumerate() {
            if !a.is_zero() {
                acc = acc.try_add(&self.images.outer[e][j].scale(a))?;
            }
        }
        Ok(acc)
    }
}

/// Builds the tower `p_0..p_n` of a validated block.
pub fn iterate_recurrence(block: &BlockSpec, n: usize) -> Result<DensityTower> {
    let mut tower = DensityTower::new(block.clone())?;
    tower.extend_to(n)?;
    Ok(tower)
}

/// An exact count `f_n = N(n)! · ∫₀¹ p_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub n: usize,
    pub cells: usize,
    pub integral: Rational,
    pub count: BigUint,
}

pub fn count_fillings(tower: &DensityTower, n: usize) -> Result<CountResult> {
    if n > tower.depth() {
        return Err(Error::usage(format!(
            "tower has depth {}, level {n} requested",
            tower.depth()
        )));
    }
    let cells = tower.block().cell_count(n);
    let integral = tower.poly(n).unit_integral();
    let scaled = &integral * Rational::from_integer(factorial(cells as u64).into());
    if !scaled.denom().is_one() || scaled.numer().is_negative() {
        return Err(Error::consistency(format!(
            "{cells}! · ∫p_{n} = {scaled} is not a nonnegative integer"
        )));
    }
    Ok(CountResult {
        n,
        cells,
        integral,
        count: scaled.numer().to_biguint().expect("nonnegative"),
    })
}
