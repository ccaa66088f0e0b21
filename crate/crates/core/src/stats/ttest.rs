//! One-sided pooled-variance two-sample t-test on 0/1 indicators.

use serde::{Deserialize, Serialize};

use super::dist::t_cdf;
use super::StatsError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinarySample {
    pub label: String,
    pub values: Vec<u8>,
}

impl BinarySample {
    pub fn new(label: impl Into<String>, values: Vec<u8>) -> Result<Self, StatsError> {
        let label = label.into();
        if values.iter().any(|&v| v > 1) {
            return Err(StatsError::NonBinary(label));
        }
        Ok(BinarySample { label, values })
    }

    /// `ones` ones followed by `n - ones` zeros.
    pub fn from_counts(label: impl Into<String>, ones: usize, n: usize) -> Self {
        assert!(ones <= n);
        let mut values = vec![1u8; ones];
        values.resize(n, 0);
        BinarySample {
            label: label.into(),
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.values.iter().filter(|&&v| v == 1).count()
    }

    pub fn mean(&self) -> f64 {
        self.ones() as f64 / self.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alternative {
    /// mean(a) > mean(b)
    Greater,
    /// mean(a) < mean(b)
    Less,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t_statistic: f64,
    pub degrees_of_freedom: u64,
    pub p_value: f64,
    pub direction: Alternative,
}

pub fn t_test_one_sided(
    a: &BinarySample,
    b: &BinarySample,
    direction: Alternative,
) -> Result<TTestResult, StatsError> {
    for s in [a, b] {
        if s.len() < 2 {
            return Err(StatsError::TooFewValues {
                label: s.label.clone(),
                n: s.len(),
            });
        }
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (a.mean(), b.mean());
    let ss = |s: &BinarySample, m: f64| -> f64 {
        s.values.iter().map(|&v| (v as f64 - m).powi(2)).sum()
    };
    let pooled = (ss(a, ma) + ss(b, mb)) / (na + nb - 2.0);
    if pooled <= 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let t = (ma - mb) / (pooled.sqrt() * (1.0 / na + 1.0 / nb).sqrt());
    let df = (a.len() + b.len() - 2) as u64;
    let p = match direction {
        Alternative::Greater => t_cdf(-t, df),
        Alternative::Less => t_cdf(t, df),
    };
    Ok(TTestResult {
        t_statistic: t,
        degrees_of_freedom: df,
        p_value: p,
        direction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples() {
        let a = BinarySample::from_counts("a", 3, 10);
        let r = t_test_one_sided(&a, &a.clone(), Alternative::Greater).unwrap();
        assert_eq!(r.t_statistic, 0.0);
        assert_eq!(r.p_value, 0.5);
        assert_eq!(r.degrees_of_freedom, 18);
    }

    #[test]
    fn sixty_vs_forty() {
        let a = BinarySample::from_counts("a", 60, 100);
        let b = BinarySample::from_counts("b", 40, 100);
        let r = t_test_one_sided(&a, &b, Alternative::Greater).unwrap();
        assert!(r.p_value < 0.01, "{r:?}");
        assert_eq!(r.degrees_of_freedom, 198);
    }

    #[test]
    fn degenerate_inputs() {
        let ones = BinarySample::from_counts("a", 5, 5);
        let zeros = BinarySample::from_counts("b", 0, 5);
        assert_eq!(
            t_test_one_sided(&ones, &zeros, Alternative::Greater).unwrap_err(),
            StatsError::ZeroVariance
        );
        let short = BinarySample::from_counts("s", 1, 1);
        assert!(matches!(
            t_test_one_sided(&short, &ones, Alternative::Less),
            Err(StatsError::TooFewValues { n: 1, .. })
        ));
        assert!(BinarySample::new("x", vec![0, 2]).is_err());
    }
}
