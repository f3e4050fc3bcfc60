use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type Rational = BigRational;

/// Formats as `"num/den"`, including a `/1` denominator for integers.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a bare integer `"num"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::usage(format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::usage(format!("bad rational denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::usage(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Nearest-ish `f64`, robust to numerators and denominators far outside the `f64` range.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            let v = n / d;
            if v.is_finite() && v != 0.0 {
                return v;
            }
        }
    }
    // Shift both parts down to 64 significant bits and track the binary exponent.
    let nb = r.numer().abs().bits() as i64;
    let db = r.denom().bits() as i64;
    let ns = (nb - 64).max(0);
    let ds = (db - 64).max(0);
    let n = (r.numer().abs() >> ns as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> ds as usize).to_f64().unwrap_or(1.0);
    let exp = ns - ds;
    let mag = (n / d) * 2f64.powi(exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
    if r.is_negative() {
        -mag
    } else {
        mag
    }
}

#[cfg(test)]
pub(crate) fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
pub(crate) fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn format_and_parse() {
        let r = ratio(-6, 4);
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), r);
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(format_rational(&Rational::zero()), "0/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn to_f64_handles_huge_parts() {
        let big = BigInt::from(10u32).pow(400);
        let r = BigRational::new(big.clone() * 3, big * 4);
        assert!((rational_to_f64(&r) - 0.75).abs() < 1e-15);
        let tiny = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(400));
        assert_eq!(rational_to_f64(&tiny), 0.0);
        assert_eq!(rational_to_f64(&ratio(1, 3)), 1.0 / 3.0);
    }
}
