//! High-degree tower polynomials evaluated in Bernstein form, in log space.
//!
//! The power-basis coefficients of `p_k` alternate in sign and grow quickly
//! with `k`, so Horner in double precision loses every digit well before
//! `k = 25`. The Bernstein coefficients are computed exactly (integer Taylor
//! shift) and only then rounded to logarithms; a sum of same-signed terms is
//! accurate to a few ulps no matter the degree.

use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::density::IntPoly;

/// Natural log of `|x|`, valid far beyond the `f64` range.
pub(crate) fn ln_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x.magnitude() >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `Σ_i s_i e^{l_i} t^i (1 − t)^{d − i}` with `l_i = ln |coefficient|`.
#[derive(Clone, Debug)]
pub(crate) struct LogBernstein {
    ln: Vec<f64>,
    negative: Vec<bool>,
    /// `(L, c_i)` with coefficient `i` equal to `c_i e^L`, when every `c_i`
    /// is a normal double; enables plain Horner evaluation.
    direct: Option<(f64, Vec<f64>)>,
}

/// Widest spread of log-coefficients kept in [`LogBernstein::direct`].
const DIRECT_SPREAD: f64 = 600.0;

fn direct_form(ln: &[f64], negative: &[bool]) -> Option<(f64, Vec<f64>)> {
    let finite = ln.iter().filter(|l| l.is_finite());
    let top = finite.clone().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let bottom = finite.fold(f64::INFINITY, |a, &b| a.min(b));
    if !top.is_finite() || top - bottom > DIRECT_SPREAD {
        return None;
    }
    let c = ln
        .iter()
        .zip(negative)
        .map(|(&l, &neg)| {
            let v = (l - top).exp();
            if neg {
                -v
            } else {
                v
            }
        })
        .collect();
    Some((top, c))
}

/// `mantissa · e^{scale}`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Scaled {
    pub mantissa: f64,
    pub scale: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mantissa: 0.0,
        scale: f64::NEG_INFINITY,
    };

    /// The value expressed relative to `e^{reference}`.
    pub fn relative_to(self, reference: f64) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa * (self.scale - reference).exp()
        }
    }
}

fn ln_binomials(d: usize, ln_fact: &[f64]) -> impl Iterator<Item = f64> + '_ {
    (0..=d).map(move |i| ln_fact[d] - ln_fact[i] - ln_fact[d - i])
}

pub(crate) fn ln_factorials(max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=max {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// `ln(e^a + e^b)`.
fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

impl LogBernstein {
    /// Exact conversion of `p = num / den` on `[0, 1]`.
    pub fn from_int_poly(p: &IntPoly) -> Self {
        let d = p.degree();
        // r(u) = Σ a_j u^{d−j}; r(1 + w) = Σ c_m w^m gives B_{d−m} = c_m.
        let mut c: Vec<BigInt> = (0..=d).map(|m| p.num.get(d - m).cloned().unwrap_or_default()).collect();
        for i in 0..d {
            for j in (i..d).rev() {
                let (left, right) = c.split_at_mut(j + 1);
                left[j] += &right[0];
            }
        }
        let ln_den = ln_abs(&p.den);
        let mut ln = vec![f64::NEG_INFINITY; d + 1];
        let mut negative = vec![false; d + 1];
        for (m, b) in c.iter().enumerate() {
            if !b.is_zero() {
                ln[d - m] = ln_abs(b) - ln_den;
                negative[d - m] = b.sign() == Sign::Minus;
            }
        }
        LogBernstein::from_parts(ln, negative)
    }

    fn from_parts(ln: Vec<f64>, negative: Vec<bool>) -> Self {
        let direct = direct_form(&ln, &negative);
        LogBernstein { ln, negative, direct }
    }

    pub fn degree(&self) -> usize {
        self.ln.len() - 1
    }

    #[cfg(test)]
    pub fn has_negative(&self) -> bool {
        self.negative
            .iter()
            .zip(&self.ln)
            .any(|(&n, &l)| n && l > f64::NEG_INFINITY)
    }

    /// `∫₀^t x^a p(x) dx` in the same representation.
    pub fn moment_antiderivative(&self, a: usize, ln_fact: &[f64]) -> LogBernstein {
        let d = self.degree();
        let big_d = d + a;
        // Standard Bernstein coefficients of x^a p, then running sums.
        let ln_binom: Vec<f64> = ln_binomials(big_d, ln_fact).collect();
        let ln_binom_up: Vec<f64> = ln_binomials(big_d + 1, ln_fact).collect();
        let ln_norm = ((big_d + 1) as f64).ln();
        let mut pos = f64::NEG_INFINITY;
        let mut neg = f64::NEG_INFINITY;
        let mut ln = vec![f64::NEG_INFINITY; big_d + 2];
        let mut negative = vec![false; big_d + 2];
        for m in 1..=big_d + 1 {
            let j = m - 1;
            if j >= a && self.ln[j - a] > f64::NEG_INFINITY {
                let b = self.ln[j - a] - ln_binom[j];
                if self.negative[j - a] {
                    neg = ln_add(neg, b);
                } else {
                    pos = ln_add(pos, b);
                }
            }
            let (mag, is_neg) = if neg == f64::NEG_INFINITY {
                (pos, false)
            } else if pos >= neg {
                (pos + (-(neg - pos).exp()).ln_1p(), false)
            } else {
                (neg + (-(pos - neg).exp()).ln_1p(), true)
            };
            ln[m] = mag + ln_binom_up[m] - ln_norm;
            negative[m] = is_neg;
        }
        LogBernstein::from_parts(ln, negative)
    }

    pub fn eval(&self, t: f64) -> Scaled {
        let d = self.degree();
        if t <= 0.0 {
            return self.single(0);
        }
        if t >= 1.0 {
            return self.single(d);
        }
        let lt = t.ln();
        let lu = (-t).ln_1p();
        if let Some((top, c)) = &self.direct {
            // Σ c_i t^i (1−t)^{d−i}, factored by the larger of t^d and (1−t)^d
            // and by the extreme power of the ratio, so the leading term cannot underflow.
            let lo = c.iter().position(|&x| x != 0.0).unwrap_or(0);
            let hi = c.iter().rposition(|&x| x != 0.0).unwrap_or(0);
            let live = &c[lo..=hi];
            let (mantissa, scale) = if t <= 0.5 {
                let r = t / (1.0 - t);
                let m = live.iter().rev().fold(0.0, |acc, &ci| acc * r + ci);
                (m, top + d as f64 * lu + lo as f64 * (lt - lu))
            } else {
                let r = (1.0 - t) / t;
                let m = live.iter().fold(0.0, |acc, &ci| acc * r + ci);
                (m, top + d as f64 * lt + (d - hi) as f64 * (lu - lt))
            };
            return Scaled { mantissa, scale };
        }
        let mut top = f64::NEG_INFINITY;
        let exps: Vec<f64> = self
            .ln
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                let e = l + i as f64 * lt + (d - i) as f64 * lu;
                if e > top {
                    top = e;
                }
                e
            })
            .collect();
        if top == f64::NEG_INFINITY {
            return Scaled::ZERO;
        }
        let mut mantissa = 0.0;
        for (e, &neg) in exps.iter().zip(&self.negative) {
            if *e > top - 45.0 {
                let v = (e - top).exp();
                mantissa += if neg { -v } else { v };
            }
        }
        Scaled {
            mantissa,
            scale: top,
        }
    }

    fn single(&self, i: usize) -> Scaled {
        if self.ln[i] == f64::NEG_INFINITY {
            return Scaled::ZERO;
        }
        Scaled {
            mantissa: if self.negative[i] { -1.0 } else { 1.0 },
            scale: self.ln[i],
        }
    }
}
