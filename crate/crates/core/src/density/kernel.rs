use num_traits::{One, Zero};

use super::block::BlockSpec;
use super::tower::DensityTower;
use crate::error::{Error, Result};
use crate::exactmath::{MultiPoly, Polynomial, Rational};

/// A one-hole transfer kernel: `p_next(z) = ∫₀^z Q(x, z) p(x) dx`.
///
/// `Q` is stored over the variables `[chain, interface]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    poly: MultiPoly,
}

impl Kernel {
    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let z = self.poly.vars()[1].clone();
        let mut coeffs: Vec<Rational> = Vec::new();
        for (exp, q) in self.poly.terms() {
            let (a, b) = (exp[0] as usize, exp[1] as usize);
            for (i, c) in p.coeffs().iter().enumerate() {
                let idx = a + b + i + 1;
                if coeffs.len() <= idx {
                    coeffs.resize(idx + 1, Rational::zero());
                }
                coeffs[idx] += q * c / Rational::from_integer(((a + i + 1) as i64).into());
            }
        }
        Polynomial::new(z, coeffs)
    }
}

fn frac(n: usize) -> Rational {
    Rational::one() / Rational::from_integer((n as i64).into())
}

/// Solves `Σ_a rows[e][a] · q_a = rhs[e]` for the square leading block and
/// returns `None` if the remaining equations disagree.
fn solve_overdetermined(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = rows[0].len();
    let mut m: Vec<Vec<Rational>> = rows[..n]
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = Rational::one() / &m[col][col];
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    let q: Vec<Rational> = m.iter().map(|row| row[n].clone()).collect();
    let consistent = rows[n..].iter().zip(&rhs[n..]).all(|(row, b)| {
        let lhs = row
            .iter()
            .zip(&q)
            .fold(Rational::zero(), |acc, (r, x)| acc + r * x);
        &lhs == b
    });
    consistent.then_some(q)
}

/// Extracts the kernel `Q(x, z)` of a one-hole block.
///
/// The monomials `x^e` are pushed through the block integration. Their images
/// determine the coefficients of `Q` degree by degree; a margin of two extra
/// degrees and extra equations must come out consistent, otherwise the block
/// has no single polynomial kernel and an error is returned.
pub fn derive_kernel(block: &BlockSpec, tower: &mut DensityTower) -> Result<Kernel> {
    if tower.block() != block {
        return Err(Error::usage("tower was built for a different block"));
    }
    let r0 = tower.monomial_image(0)?;
    let Some(deg0) = r0.degree() else {
        return Err(Error::consistency("block integrates 1 to 0"));
    };
    if deg0 == 0 {
        return Err(Error::consistency("kernel is not a single polynomial"));
    }
    let top = deg0 - 1 + 2;
    let equations = top + 3;
    let images: Vec<Polynomial> = (0..equations)
        .map(|e| tower.monomial_image(e))
        .collect::<Result<_>>()?;

    // Every coefficient of an image must belong to some degree group s ≤ top.
    for (e, r) in images.iter().enumerate() {
        for (i, c) in r.coeffs().iter().enumerate() {
            if !c.is_zero() && (i < e + 1 || i > e + 1 + top) {
                return Err(Error::consistency("kernel is not a single polynomial"));
            }
        }
    }

    let vars = [block.chain(), block.interface()];
    let mut terms = Vec::new();
    for s in 0..=top {
        let rows: Vec<Vec<Rational>> = (0..equations)
            .map(|e| (0..=s).map(|a| frac(a + e + 1)).collect())
            .collect();
        let rhs: Vec<Rational> = images.iter().enumerate().map(|(e, r)| r.coeff(s + e + 1)).collect();
        let q = solve_overdetermined(&rows, &rhs)
            .ok_or_else(|| Error::consistency("kernel is not a single polynomial"))?;
        for (a, c) in q.into_iter().enumerate() {
            terms.push((vec![a as u32, (s - a) as u32], c));
        }
    }
    Ok(Kernel {
        poly: MultiPoly::from_terms(&vars, terms)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::models::{polyo_block, polyo_block_chain_v};
    use crate::density::{iterate_recurrence, BlockVar};
    use crate::exactmath::Bound;

    fn c(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn printed_kernel() -> MultiPoly {
        let vars = ["x", "z"];
        let t = |coef: i64, a: u32, b: u32| (vec![a, b], c(coef));
        let lin1 = MultiPoly::from_terms(&vars, [t(1, 0, 1), t(-1, 0, 0)]).unwrap();
        let lin2 = MultiPoly::from_terms(&vars, [t(1, 1, 0), t(-1, 0, 1)]).unwrap();
        let cubic = MultiPoly::from_terms(
            &vars,
            [
                t(3, 3, 0),
                t(-7, 2, 1),
                t(-1, 1, 2),
                t(-1, 0, 3),
                t(-2, 2, 0),
                t(4, 1, 1),
                t(4, 0, 2),
            ],
        )
        .unwrap();
        lin1.try_mul(&lin2)
            .unwrap()
            .try_mul(&cubic)
            .unwrap()
            .scale(&(Rational::one() / c(24)))
    }

    #[test]
    fn builtin_kernel_matches_closed_form() {
        let block = polyo_block();
        let mut tower = iterate_recurrence(&block, 6).unwrap();
        let k = derive_kernel(&block, &mut tower).unwrap();
        assert_eq!(k.poly(), &printed_kernel());
        for n in 0..6 {
            assert_eq!(k.apply(&tower.poly(n)), tower.poly(n + 1));
        }
    }

    #[test]
    fn trivial_block_has_unit_kernel() {
        let block = BlockSpec::new(
            vec![BlockVar::new("x", Bound::Zero, Bound::Var("z".into()))],
            "z",
            "x",
            None,
        )
        .unwrap();
        let mut tower = iterate_recurrence(&block, 0).unwrap();
        let k = derive_kernel(&block, &mut tower).unwrap();
        assert_eq!(k.poly(), &MultiPoly::constant(&["x", "z"], Rational::one()));
    }

    #[test]
    fn chain_through_v_has_no_kernel() {
        let block = polyo_block_chain_v();
        let mut tower = iterate_recurrence(&block, 0).unwrap();
        let err = derive_kernel(&block, &mut tower).unwrap_err();
        assert!(err.to_string().contains("not a single polynomial"));
    }
}
