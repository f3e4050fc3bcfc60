//! Goodness-of-fit tests and the formula/oracle/density reconciliation.

mod cross;

use serde::Serialize;
use statrs::function::gamma::gamma_ur;

use crate::error::{Error, Result};
use crate::exactmath::{format_rational, rational_to_f64, Rational};
use crate::formulas::{pmf_moments, wall_count_pmf};

pub use cross::{cross_validate, CrossReport, CrossRow, Suite};

/// Minimum samples per outcome accepted by [`chi_square_uniformity`].
pub const MIN_SAMPLES_PER_OUTCOME: u64 = 50;

/// Significance level used by the stochastic checks.
pub const SIGNIFICANCE: f64 = 0.001;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

impl ChiSquare {
    pub fn accepts(&self, significance: f64) -> bool {
        self.p_value > significance
    }
}

/// Pearson's chi-square of `observed` against the probabilities `expected`
/// (normalized here), with the upper-tail p-value `Q(df/2, X²/2)`.
pub fn chi_square_uniformity(observed: &[u64], expected: &[f64]) -> Result<ChiSquare> {
    let k = observed.len();
    if k < 2 || expected.len() != k {
        return Err(Error::usage(format!(
            "need at least two outcomes with one probability each (got {k} and {})",
            expected.len()
        )));
    }
    if let Some(i) = expected.iter().position(|&p| !(p > 0.0 && p.is_finite())) {
        return Err(Error::usage(format!(
            "outcome {i} has expected probability {} (observed {})",
            expected[i], observed[i]
        )));
    }
    let total: u64 = observed.iter().sum();
    if total < MIN_SAMPLES_PER_OUTCOME * k as u64 {
        return Err(Error::usage(format!(
            "{total} samples for {k} outcomes; need at least {}",
            MIN_SAMPLES_PER_OUTCOME * k as u64
        )));
    }
    let mass: f64 = expected.iter().sum();
    let statistic: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &p)| {
            let e = total as f64 * p / mass;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let df = k - 1;
    let p_value = if statistic <= 0.0 {
        1.0
    } else {
        gamma_ur(df as f64 / 2.0, statistic / 2.0)
    };
    Ok(ChiSquare {
        statistic,
        df,
        p_value,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EmpiricalWalls {
    pub samples: u64,
    pub counts: Vec<u64>,
    pub frequencies: Vec<f64>,
    pub total_variation: f64,
    pub mean: f64,
    pub variance: f64,
}

/// Exact wall-count law of uniform (filling, vertical wall set) pairs of the
/// `n × 2` shape, optionally compared with observed counts.
#[derive(Clone, Debug, Serialize)]
pub struct WallReport {
    pub n: u64,
    #[serde(serialize_with = "ser_rationals")]
    pub pmf: Vec<Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub mean: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub variance: Rational,
    /// Every `k` where the pmf is maximal.
    pub modes: Vec<usize>,
    pub empirical: Option<EmpiricalWalls>,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

/// `observed[k]` counts samples with `k` walls, `k = 0..=n`.
pub fn wall_distribution_check(n: u64, observed: Option<&[u64]>) -> Result<WallReport> {
    let pmf = wall_count_pmf(n)?;
    let (mean, variance) = pmf_moments(&pmf);
    let top = pmf.iter().max().expect("nonempty").clone();
    let modes = pmf
        .iter()
        .enumerate()
        .filter(|(_, p)| **p == top)
        .map(|(k, _)| k)
        .collect();
    let empirical = match observed {
        None => None,
        Some(counts) => {
            if counts.len() != pmf.len() {
                return Err(Error::usage(format!(
                    "expected {} wall-count bins, got {}",
                    pmf.len(),
                    counts.len()
                )));
            }
            let samples: u64 = counts.iter().sum();
            if samples == 0 {
                return Err(Error::usage("no samples"));
            }
            let frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
            let total_variation = 0.5
                * frequencies
                    .iter()
                    .zip(&pmf)
                    .map(|(f, p)| (f - rational_to_f64(p)).abs())
                    .sum::<f64>();
            let m: f64 = frequencies.iter().enumerate().map(|(k, f)| k as f64 * f).sum();
            let var: f64 = frequencies
                .iter()
                .enumerate()
                .map(|(k, f)| (k as f64 - m).powi(2) * f)
                .sum();
            Some(EmpiricalWalls {
                samples,
                counts: counts.to_vec(),
                frequencies,
                total_variation,
                mean: m,
                variance: var,
            })
        }
    };
    Ok(WallReport {
        n,
        pmf,
        mean,
        variance,
        modes,
        empirical,
    })
}

impl WallReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("k  pmf{}\n", if self.empirical.is_some() { "  empirical" } else { "" });
        for (k, p) in self.pmf.iter().enumerate() {
            out.push_str(&format!("{k}  {}", format_rational(p)));
            if let Some(e) = &self.empirical {
                out.push_str(&format!("  {:.6}", e.frequencies[k]));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "mean {}  variance {}\n",
            format_rational(&self.mean),
            format_rational(&self.variance)
        ));
        if let Some(e) = &self.empirical {
            out.push_str(&format!(
                "samples {}  total variation {:.6}  empirical mean {:.6}  variance {:.6}\n",
                e.samples, e.total_variation, e.mean, e.variance
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    /// Lower regularized gamma by its power series, `P(a, x) = e^{−x} x^a Σ x^k / Γ(a+k+1)`.
    fn series_p(a: f64, x: f64) -> f64 {
        let mut term = 1.0 / a;
        let mut sum = term;
        for k in 1..10_000 {
            term *= x / (a + k as f64);
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
        }
        let ln_gamma_a = statrs::function::gamma::ln_gamma(a);
        sum * (-x + a * x.ln() - ln_gamma_a).exp()
    }

    #[test]
    fn p_values_match_series() {
        for &(df, stat) in &[(1usize, 0.5), (2, 3.0), (11, 9.5), (11, 31.26), (30, 25.0), (8549, 8600.0)] {
            let a = df as f64 / 2.0;
            let want = 1.0 - series_p(a, stat / 2.0);
            let got = gamma_ur(a, stat / 2.0);
            assert!((got - want).abs() < 1e-9, "df={df} stat={stat}: {got} vs {want}");
        }
    }

    #[test]
    fn proportional_counts() {
        let r = chi_square_uniformity(&[100, 200, 300], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.df, 2);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            chi_square_uniformity(&[100, 100, 5], &[0.5, 0.5, 0.0]),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            chi_square_uniformity(&[10, 10], &[0.5, 0.5]),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn detects_bias() {
        let r = chi_square_uniformity(&[700, 300], &[0.5, 0.5]).unwrap();
        assert!(!r.accepts(SIGNIFICANCE));
    }

    #[test]
    fn exact_wall_law() {
        let r = wall_distribution_check(3, None).unwrap();
        let want: Vec<Rational> = [1, 4, 6, 4]
            .iter()
            .map(|&k| Rational::new(k.into(), 15.into()))
            .collect();
        assert_eq!(r.pmf, want);
        for n in 1..=50u64 {
            let r = wall_distribution_check(n, None).unwrap();
            assert!(r.pmf.iter().sum::<Rational>().is_one());
        }
        for n in 1..=100u64 {
            let r = wall_distribution_check(n, None).unwrap();
            let lo = ((n + 1) / 2) as usize;
            let hi = ((n + 2) / 2) as usize;
            assert!(r.modes.iter().all(|&k| k == lo || k == hi), "n={n}: {:?}", r.modes);
        }
        let e = wall_distribution_check(1, Some(&[1, 2])).unwrap().empirical.unwrap();
        assert!(e.total_variation < 1e-12);
    }
}
