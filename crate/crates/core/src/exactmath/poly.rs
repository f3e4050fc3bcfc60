use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{format_rational, parse_rational, rational_to_f64, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial with exact rational coefficients; `coeffs[i]` multiplies `var^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    var: String,
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(var: impl Into<String>, coeffs: Vec<Rational>) -> Self {
        let mut p = Polynomial {
            var: var.into(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn zero(var: impl Into<String>) -> Self {
        Polynomial::new(var, Vec::new())
    }

    pub fn constant(var: impl Into<String>, c: Rational) -> Self {
        Polynomial::new(var, vec![c])
    }

    pub fn one(var: impl Into<String>) -> Self {
        Polynomial::constant(var, Rational::one())
    }

    /// `c · var^degree`.
    pub fn monomial(var: impl Into<String>, c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Polynomial::new(var, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn with_var(mut self, var: impl Into<String>) -> Self {
        self.var = var.into();
        self
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.var.clone());
        }
        Polynomial::new(
            self.var.clone(),
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    /// Horner evaluation at an exact point.
    pub fn eval(&self, point: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * point + c)
    }

    /// Horner evaluation in double precision. Coefficients are rounded first,
    /// so this is only trustworthy for low degree.
    pub fn eval_f64(&self, point: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * point + rational_to_f64(c))
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Polynomial {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / Rational::from_integer((i as i64 + 1).into()));
        }
        Polynomial::new(self.var.clone(), coeffs)
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
            .collect();
        Polynomial::new(self.var.clone(), coeffs)
    }

    /// `∫_a^b p`.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    /// `∫₀¹ p`, i.e. the sum of `c_i / (i+1)`.
    pub fn unit_integral(&self) -> Rational {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (i, c)| {
                acc + c / Rational::from_integer((i as i64 + 1).into())
            })
    }

    /// Coefficients as `"num/den"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn from_strings<S: AsRef<str>>(var: impl Into<String>, coeffs: &[S]) -> Result<Self> {
        let coeffs = coeffs
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::new(var, coeffs))
    }

    fn check_var(&self, other: &Polynomial) {
        // Zero and constants are compatible with any variable.
        assert!(
            self.var == other.var || self.coeffs.len() <= 1 || other.coeffs.len() <= 1,
            "polynomials in different variables: {} vs {}",
            self.var,
            other.var
        );
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.var != other.var {
            return Err(Error::usage(format!(
                "cannot add polynomials in {} and {}",
                self.var, other.var
            )));
        }
        Ok(self + other)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_var(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Polynomial::new(self.var.clone(), coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.check_var(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Polynomial::new(self.var.clone(), coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_var(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.var.clone());
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(self.var.clone(), coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.var.clone(), self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*{}", self.var)?,
                _ => write!(f, "({c})*{}^{i}", self.var)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::rational::{int, ratio};
    use super::*;

    fn z(coeffs: &[(i64, i64)]) -> Polynomial {
        Polynomial::new("z", coeffs.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    #[test]
    fn trailing_zeros_are_stripped() {
        let p = z(&[(1, 1), (0, 1), (0, 1)]);
        assert_eq!(p.degree(), Some(0));
        assert!(z(&[(0, 1)]).is_zero());
        assert_eq!(z(&[]).degree(), None);
    }

    #[test]
    fn unit_integrals() {
        assert_eq!(Polynomial::one("z").unit_integral(), int(1));
        assert_eq!(z(&[(0, 1), (0, 1), (1, 1)]).unit_integral(), ratio(1, 3));
    }

    #[test]
    fn evaluation() {
        let p = z(&[(0, 1), (1, 1)]);
        assert_eq!(p.eval(&ratio(1, 2)), ratio(1, 2));
        let q = z(&[(0, 1), (-1, 1), (1, 1)]);
        assert_eq!(q.eval(&int(1)), int(0));
        assert_eq!(q.eval_f64(0.5), -0.25);
    }

    #[test]
    fn antiderivative_and_derivative_invert() {
        let p = z(&[(3, 2), (-1, 5), (7, 1)]);
        assert_eq!(p.antiderivative().derivative(), p);
        assert_eq!(p.integrate(&int(0), &int(1)), p.unit_integral());
    }

    #[test]
    fn products() {
        let a = z(&[(1, 1), (1, 1)]);
        let b = z(&[(-1, 1), (1, 1)]);
        assert_eq!(&a * &b, z(&[(-1, 1), (0, 1), (1, 1)]));
        assert!((&a * &Polynomial::zero("z")).is_zero());
    }

    #[test]
    fn string_roundtrip() {
        let p = z(&[(3, 2), (-1, 5), (0, 1), (7, 1)]);
        let s = p.to_strings();
        assert_eq!(s[2], "0/1");
        assert_eq!(Polynomial::from_strings("z", &s).unwrap(), p);
    }

    #[test]
    fn mismatched_add_is_usage_error() {
        let a = Polynomial::new("x", vec![int(0), int(1)]);
        let b = Polynomial::new("z", vec![int(0), int(1)]);
        assert!(a.try_add(&b).is_err());
    }
}
