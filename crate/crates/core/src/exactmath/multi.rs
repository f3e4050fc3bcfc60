use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::poly::Polynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Integration bound of one layer: a constant 0 or 1, or a still-free variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    Zero,
    One,
    Var(String),
}

impl FromStr for Bound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "0" => Ok(Bound::Zero),
            "1" => Ok(Bound::One),
            _ if is_identifier(s) => Ok(Bound::Var(s.to_string())),
            _ => Err(Error::usage(format!(
                "bound {s:?} is neither 0, 1 nor a single variable"
            ))),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Zero => write!(f, "0"),
            Bound::One => write!(f, "1"),
            Bound::Var(v) => write!(f, "{v}"),
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Sparse polynomial over a fixed, ordered variable set.
///
/// Monomials are keyed by their exponent vector (one entry per declared
/// variable). Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &[impl AsRef<str>]) -> Self {
        MultiPoly {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[impl AsRef<str>], c: Rational) -> Self {
        let mut p = MultiPoly::zero(vars);
        let key = vec![0; p.vars.len()];
        p.insert(key, c);
        p
    }

    /// The polynomial `name` itself.
    pub fn variable(vars: &[impl AsRef<str>], name: &str) -> Result<Self> {
        let mut p = MultiPoly::zero(vars);
        let i = p.index_of(name)?;
        let mut key = vec![0; p.vars.len()];
        key[i] = 1;
        p.insert(key, Rational::one());
        Ok(p)
    }

    pub fn from_terms(
        vars: &[impl AsRef<str>],
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Self> {
        let mut p = MultiPoly::zero(vars);
        for (exp, c) in terms {
            if exp.len() != p.vars.len() {
                return Err(Error::usage(format!(
                    "exponent vector of length {} over {} variables",
                    exp.len(),
                    p.vars.len()
                )));
            }
            p.insert(exp, c);
        }
        Ok(p)
    }

    /// Embeds a univariate polynomial as a polynomial in `name`.
    pub fn from_univariate(vars: &[impl AsRef<str>], name: &str, p: &Polynomial) -> Result<Self> {
        let mut out = MultiPoly::zero(vars);
        let i = out.index_of(name)?;
        for (d, c) in p.coeffs().iter().enumerate() {
            let mut key = vec![0; out.vars.len()];
            key[i] = d as u32;
            out.insert(key, c.clone());
        }
        Ok(out)
    }

    fn insert(&mut self, exp: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::usage(format!("variable {name} not in {:?}", self.vars)))
    }

    pub fn degree_in(&self, name: &str) -> Result<u32> {
        let i = self.index_of(name)?;
        Ok(self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// True when `name` has a nonzero exponent in some monomial.
    pub fn mentions(&self, name: &str) -> bool {
        self.index_of(name)
            .map(|i| self.terms.keys().any(|e| e[i] > 0))
            .unwrap_or(false)
    }

    fn check_same_vars(&self, other: &MultiPoly) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::usage(format!(
                "variable sets differ: {:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same_vars(other)?;
        let mut out = MultiPoly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect();
        out
    }

    /// Integrates out `var` between two bounds:
    /// `∫_{lower}^{upper} self d var`, with the bounds substituted into the antiderivative.
    ///
    /// The result keeps the same variable set but no longer mentions `var`.
    pub fn integrate_layer(&self, var: &str, lower: &Bound, upper: &Bound) -> Result<MultiPoly> {
        let vi = self.index_of(var)?;
        let bound_index = |b: &Bound| -> Result<Option<usize>> {
            match b {
                Bound::Var(name) if name == var => Err(Error::usage(format!(
                    "bound of {var} refers to {var} itself"
                ))),
                Bound::Var(name) => self.index_of(name).map(Some),
                _ => Ok(None),
            }
        };
        let lo = bound_index(lower)?;
        let hi = bound_index(upper)?;

        let mut out = MultiPoly::zero(&self.vars);
        for (exp, c) in &self.terms {
            let k = exp[vi] + 1;
            let coeff = c / Rational::from_integer(k.into());
            let mut base = exp.clone();
            base[vi] = 0;
            for (bound, idx, sign) in [(upper, hi, false), (lower, lo, true)] {
                let value = if sign { -coeff.clone() } else { coeff.clone() };
                match (bound, idx) {
                    (Bound::Zero, _) => {}
                    (Bound::One, _) => out.insert(base.clone(), value),
                    (Bound::Var(_), Some(j)) => {
                        let mut e = base.clone();
                        e[j] += k;
                        out.insert(e, value);
                    }
                    (Bound::Var(_), None) => unreachable!(),
                }
            }
        }
        Ok(out)
    }

    /// Replaces `var` by an exact constant.
    pub fn substitute(&self, var: &str, value: &Rational) -> Result<MultiPoly> {
        let vi = self.index_of(var)?;
        let mut out = MultiPoly::zero(&self.vars);
        for (exp, c) in &self.terms {
            let mut e = exp.clone();
            let k = e[vi];
            e[vi] = 0;
            out.insert(e, c * num_traits::pow(value.clone(), k as usize));
        }
        Ok(out)
    }

    /// Replaces `var` by another variable of the same set.
    pub fn rename_into(&self, var: &str, target: &str) -> Result<MultiPoly> {
        let vi = self.index_of(var)?;
        let ti = self.index_of(target)?;
        let mut out = MultiPoly::zero(&self.vars);
        for (exp, c) in &self.terms {
            let mut e = exp.clone();
            let k = e[vi];
            e[vi] = 0;
            e[ti] += k;
            out.insert(e, c.clone());
        }
        Ok(out)
    }

    /// Evaluates at a full point (one value per declared variable).
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.vars.len() {
            return Err(Error::usage("point dimension does not match variable set"));
        }
        let mut acc = Rational::zero();
        for (exp, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(exp) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Converts to a univariate polynomial; fails if any other variable occurs.
    pub fn to_univariate(&self, var: &str) -> Result<Polynomial> {
        let vi = self.index_of(var)?;
        let deg = self.degree_in(var)? as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (exp, c) in &self.terms {
            if exp.iter().enumerate().any(|(i, &k)| i != vi && k > 0) {
                return Err(Error::usage(format!(
                    "polynomial still depends on variables other than {var}"
                )));
            }
            coeffs[exp[vi] as usize] += c;
        }
        Ok(Polynomial::new(var, coeffs))
    }

    /// Collects coefficients by powers of `var`; each coefficient is a polynomial
    /// over the same variable set with `var` absent.
    pub fn collect_in(&self, var: &str) -> Result<Vec<MultiPoly>> {
        let vi = self.index_of(var)?;
        let deg = self.degree_in(var)? as usize;
        let mut out = vec![MultiPoly::zero(&self.vars); deg + 1];
        for (exp, c) in &self.terms {
            let mut e = exp.clone();
            let k = e[vi] as usize;
            e[vi] = 0;
            out[k].insert(e, c.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (exp, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (v, &k) in self.vars.iter().zip(exp) {
                match k {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::rational::{int, ratio};
    use super::*;
    use proptest::prelude::*;

    const XZ: [&str; 2] = ["x", "z"];

    fn var(vars: &[&str], name: &str) -> MultiPoly {
        MultiPoly::variable(vars, name).unwrap()
    }

    fn c(vars: &[&str], n: i64) -> MultiPoly {
        MultiPoly::constant(vars, int(n))
    }

    #[test]
    fn difference_of_squares() {
        let x = var(&XZ, "x");
        let z = var(&XZ, "z");
        let p = x.try_add(&z).unwrap().try_mul(&x.try_sub(&z).unwrap()).unwrap();
        let expected = MultiPoly::from_terms(&XZ, [(vec![2, 0], int(1)), (vec![0, 2], int(-1))])
            .unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn annihilator() {
        let p = var(&XZ, "x").try_add(&c(&XZ, 3)).unwrap();
        assert!(p.try_mul(&MultiPoly::zero(&XZ)).unwrap().is_zero());
        assert!(p.scale(&int(0)).is_zero());
    }

    #[test]
    fn mismatched_sets_are_rejected() {
        let a = var(&XZ, "x");
        let b = var(&["x", "y"], "x");
        assert!(matches!(a.try_add(&b), Err(Error::Usage(_))));
        assert!(matches!(a.try_mul(&b), Err(Error::Usage(_))));
    }

    #[test]
    fn monomial_rule() {
        let x = var(&XZ, "x");
        let r = x
            .integrate_layer("x", &Bound::Zero, &Bound::Var("z".into()))
            .unwrap();
        let expected = MultiPoly::from_terms(&XZ, [(vec![0, 2], ratio(1, 2))]).unwrap();
        assert_eq!(r, expected);
        assert!(!r.mentions("x"));
    }

    #[test]
    fn constant_integrand() {
        let vars = ["v", "w", "y"];
        let r = c(&vars, 1)
            .integrate_layer("v", &Bound::Var("y".into()), &Bound::Var("w".into()))
            .unwrap();
        let expected = var(&vars, "w").try_sub(&var(&vars, "y")).unwrap();
        assert_eq!(r, expected);
    }

    #[test]
    fn self_bound_is_usage_error() {
        let r = c(&XZ, 1).integrate_layer("x", &Bound::Zero, &Bound::Var("x".into()));
        assert!(matches!(r, Err(Error::Usage(_))));
        let r = c(&XZ, 1).integrate_layer("x", &Bound::Zero, &Bound::Var("q".into()));
        assert!(matches!(r, Err(Error::Usage(_))));
    }

    #[test]
    fn bound_parsing() {
        assert_eq!("0".parse::<Bound>().unwrap(), Bound::Zero);
        assert_eq!(" 1 ".parse::<Bound>().unwrap(), Bound::One);
        assert_eq!("y".parse::<Bound>().unwrap(), Bound::Var("y".into()));
        assert!("max(a,b)".parse::<Bound>().is_err());
        assert!("1/2".parse::<Bound>().is_err());
    }

    #[test]
    fn univariate_conversion() {
        let z = var(&XZ, "z");
        let p = z.try_mul(&z).unwrap().try_add(&c(&XZ, 2)).unwrap();
        let u = p.to_univariate("z").unwrap();
        assert_eq!(u.coeffs(), &[int(2), int(0), int(1)]);
        assert!(var(&XZ, "x").to_univariate("z").is_err());
        assert_eq!(MultiPoly::from_univariate(&XZ, "z", &u).unwrap(), p);
    }

    fn small_poly(vars: &'static [&'static str]) -> impl Strategy<Value = MultiPoly> {
        let n = vars.len();
        prop::collection::vec(
            (prop::collection::vec(0u32..3, n), -5i64..6, 1i64..4),
            0..6,
        )
        .prop_map(move |terms| {
            MultiPoly::from_terms(vars, terms.into_iter().map(|(e, a, b)| (e, ratio(a, b)))).unwrap()
        })
    }

    const XYZ: &[&str] = &["x", "y", "z"];

    proptest! {
        #[test]
        fn integration_is_linear(a in small_poly(XYZ), b in small_poly(XYZ)) {
            let lo = Bound::Var("y".into());
            let hi = Bound::Var("z".into());
            let lhs = a.try_add(&b).unwrap().integrate_layer("x", &lo, &hi).unwrap();
            let rhs = a.integrate_layer("x", &lo, &hi).unwrap()
                .try_add(&b.integrate_layer("x", &lo, &hi).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fubini_on_boxes(a in small_poly(XYZ)) {
            let xy = a.integrate_layer("x", &Bound::Zero, &Bound::One).unwrap()
                .integrate_layer("y", &Bound::Zero, &Bound::One).unwrap();
            let yx = a.integrate_layer("y", &Bound::Zero, &Bound::One).unwrap()
                .integrate_layer("x", &Bound::Zero, &Bound::One).unwrap();
            prop_assert_eq!(xy, yx);
        }

        #[test]
        fn multiplication_commutes_and_evaluates(a in small_poly(XYZ), b in small_poly(XYZ)) {
            let ab = a.try_mul(&b).unwrap();
            prop_assert_eq!(&ab, &b.try_mul(&a).unwrap());
            let pt = [ratio(1, 3), ratio(-2, 5), int(2)];
            prop_assert_eq!(ab.eval(&pt).unwrap(), a.eval(&pt).unwrap() * b.eval(&pt).unwrap());
        }
    }
}
