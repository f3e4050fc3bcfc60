use num_traits::{Signed, Zero};

use super::RngState;
use crate::error::{Error, Result};
use crate::exactmath::{rational_to_f64, Polynomial, Rational};

/// Absolute tolerance of every root search.
pub(crate) const TOLERANCE: f64 = 1e-12;

/// Smallest `t` in `[lo, hi]` with `f(t) ≥ target` for nondecreasing `f`, to [`TOLERANCE`].
pub(crate) fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64, target: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) || hi < lo - TOLERANCE {
        return Err(Error::numeric(format!("empty interval [{lo}, {hi}]")));
    }
    Ok(())
}

/// Bisection only stops on upcrossings of the CDF, so this fires on rounding
/// trouble, never on a well-posed density.
pub(crate) fn checked(t: f64, density: f64) -> Result<(f64, f64)> {
    if density < -1e-9 {
        return Err(Error::numeric(format!(
            "nonnegativity alarm: density {density} at {t}"
        )));
    }
    Ok((t, density.max(0.0).ln()))
}

fn horner(g: &[f64], t: f64) -> f64 {
    g.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Quantile `u` of the density `g` (power basis, double precision) on `[lo, hi]`,
/// with the log of the normalized density at the result.
pub(crate) fn quantile_power_basis(g: &[f64], lo: f64, hi: f64, u: f64) -> Result<(f64, f64)> {
    check_interval(lo, hi)?;
    let mut anti = vec![0.0; g.len() + 1];
    for (i, c) in g.iter().enumerate() {
        anti[i + 1] = c / (i + 1) as f64;
    }
    let base = horner(&anti, lo);
    let total = horner(&anti, hi) - base;
    if !(total > 0.0) {
        return Err(Error::numeric(format!(
            "density has no positive mass on [{lo}, {hi}]"
        )));
    }
    let t = bisect(lo, hi, |t| horner(&anti, t) - base, u * total);
    let density = horner(g, t) / total;
    checked(t, density)
}

pub(crate) fn sample_power_basis(g: &[f64], lo: f64, hi: f64, rng: &mut RngState) -> Result<(f64, f64)> {
    quantile_power_basis(g, lo, hi, rng.uniform())
}

/// Inverse-CDF draw from an exact polynomial, with every CDF evaluation exact.
/// Slow for high degree; used only for layers outside the chain variable.
pub(crate) fn sample_exact(p: &Polynomial, lo: f64, hi: f64, rng: &mut RngState) -> Result<(f64, f64)> {
    check_interval(lo, hi)?;
    let exact = |t: f64| Rational::from_float(t).expect("finite");
    let anti = p.antiderivative();
    let base = anti.eval(&exact(lo));
    let total = anti.eval(&exact(hi)) - &base;
    if total <= Rational::zero() {
        return Err(Error::numeric(format!(
            "density has no positive mass on [{lo}, {hi}]"
        )));
    }
    let target = exact(rng.uniform()) * &total;
    let cmp = |t: f64| {
        // Sign of CDF(t) − target, as −1, 0 or 1.
        let d = anti.eval(&exact(t)) - &base - &target;
        if d.is_positive() {
            1.0
        } else if d.is_negative() {
            -1.0
        } else {
            0.0
        }
    };
    let t = bisect(lo, hi, cmp, 0.0);
    let density = rational_to_f64(&(p.eval(&exact(t)) / &total));
    checked(t, density)
}

/// The `u`-quantile of the density proportional to `p` on `[a, b]`.
pub fn polynomial_quantile(p: &Polynomial, interval: (f64, f64), u: f64) -> Result<f64> {
    let g: Vec<f64> = p.coeffs().iter().map(rational_to_f64).collect();
    Ok(quantile_power_basis(&g, interval.0, interval.1, u)?.0)
}

/// Inverse-CDF sample from the density proportional to `p` on `[a, b]`:
/// `CDF(t) = u · CDF(b)` solved by bisection to absolute tolerance `1e-12`.
pub fn sample_from_polynomial_density(p: &Polynomial, interval: (f64, f64), rng: &mut RngState) -> Result<f64> {
    polynomial_quantile(p, interval, rng.uniform())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[&str]) -> Polynomial {
        Polynomial::from_strings("z", c).unwrap()
    }

    #[test]
    fn uniform_mean() {
        let mut rng = RngState::new(1);
        let p = poly(&["1"]);
        let n = 100_000;
        let mean: f64 = (0..n)
            .map(|_| sample_from_polynomial_density(&p, (0.0, 1.0), &mut rng).unwrap())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.5).abs() < 0.01);
    }

    #[test]
    fn analytic_inverse() {
        let t = polynomial_quantile(&poly(&["0", "2"]), (0.0, 1.0), 0.25).unwrap();
        assert!((t - 0.5).abs() <= 1e-12);
        let t = polynomial_quantile(&poly(&["0", "2"]), (0.0, 1.0), 0.0).unwrap();
        assert!(t.abs() <= 1e-12);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            polynomial_quantile(&poly(&["-1"]), (0.0, 1.0), 0.5),
            Err(Error::Numeric(_))
        ));
        assert!(matches!(
            polynomial_quantile(&poly(&["1"]), (0.5, 0.2), 0.5),
            Err(Error::Numeric(_))
        ));
        assert!(checked(0.3, -1e-6).unwrap_err().to_string().contains("nonnegativity"));
        assert!(checked(0.3, -1e-12).is_ok());
    }

    #[test]
    fn exact_path_agrees() {
        let p = poly(&["0", "0", "3"]);
        let mut a = RngState::new(4);
        let mut b = RngState::new(4);
        for _ in 0..20 {
            let x = sample_exact(&p, 0.0, 1.0, &mut a).unwrap().0;
            let y = quantile_power_basis(&[0.0, 0.0, 3.0], 0.0, 1.0, b.uniform()).unwrap().0;
            assert!((x - y).abs() < 1e-11);
        }
    }
}
