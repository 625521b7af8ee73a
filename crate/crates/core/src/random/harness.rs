use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, par_samples};
use crate::stats::mean_and_se;
use crate::Polytope;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub dim: usize,
    /// Vertex or facet budgets, increasing.
    pub budgets: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

impl HarnessConfig {
    pub const MIN_TRIALS: usize = 30;

    /// `2 / (n - 1)`.
    pub fn exponent(&self) -> f64 {
        2.0 / (self.dim as f64 - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub budget: usize,
    pub trials: usize,
    /// `N^{2/(n-1)}` times the sample mean.
    pub scaled_mean: f64,
    pub std_error: f64,
    pub raw_mean: f64,
}

/// Weighted least-squares fit of `scaled_mean ≈ limit + slope · N^{-2/(n-1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitFit {
    pub limit: f64,
    pub slope: f64,
    /// Covariance of `(limit, slope)`.
    pub covariance: [[f64; 2]; 2],
}

impl LimitFit {
    pub fn limit_std_error(&self) -> f64 {
        self.covariance[0][0].sqrt()
    }

    fn from_summaries(rows: &[TrialSummary], exponent: f64) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidArgument("extrapolation needs at least two budgets".into()));
        }
        let weighted = rows.iter().all(|r| r.std_error > 0.0);
        let (mut s, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for r in rows {
            let x = (r.budget as f64).powf(-exponent);
            let w = if weighted { r.std_error.powi(-2) } else { 1.0 };
            s += w;
            sx += w * x;
            sxx += w * x * x;
            sy += w * r.scaled_mean;
            sxy += w * x * r.scaled_mean;
        }
        let det = s * sxx - sx * sx;
        if det.abs() <= 1e-300 {
            return Err(Error::IllConditioned(det.abs()));
        }
        let limit = (sxx * sy - sx * sxy) / det;
        let slope = (s * sxy - sx * sy) / det;
        let covariance = [[sxx / det, -sx / det], [-sx / det, s / det]];
        Ok(LimitFit { limit, slope, covariance })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub label: String,
    pub config: HarnessConfig,
    pub rows: Vec<TrialSummary>,
    pub fit: LimitFit,
}

impl HarnessReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,trials,scaled_mean,std_error\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.budget, r.trials, r.scaled_mean, r.std_error);
        }
        out
    }

    pub fn row(&self, budget: usize) -> Option<&TrialSummary> {
        self.rows.iter().find(|r| r.budget == budget)
    }
}

/// Runs `config.trials` independent constructions per budget and evaluates `functionals` on
/// each polytope. Returns one report per entry of `labels`, in order. Trial `t` at budget `N`
/// always receives the same seed, so results do not depend on the thread count.
pub fn expectation_harness(
    config: &HarnessConfig,
    labels: &[&str],
    construct: impl Fn(usize, u64) -> Result<Polytope> + Sync,
    functionals: impl Fn(&Polytope) -> Result<Vec<f64>> + Sync,
) -> Result<Vec<HarnessReport>> {
    if config.dim < 2 {
        return Err(Error::UnsupportedDimension { dim: config.dim, what: "expectation harness" });
    }
    if config.trials < HarnessConfig::MIN_TRIALS {
        return Err(Error::InvalidArgument(format!(
            "need at least {} trials, got {}",
            HarnessConfig::MIN_TRIALS,
            config.trials
        )));
    }
    if config.budgets.windows(2).any(|w| w[0] >= w[1]) || config.budgets.is_empty() {
        return Err(Error::InvalidArgument("budgets must be nonempty and strictly increasing".into()));
    }
    let exponent = config.exponent();
    let mut values: Vec<Vec<TrialSummary>> = vec![Vec::new(); labels.len()];
    for &budget in &config.budgets {
        let stream = derive_seed(config.seed, budget as u64);
        let draws: Vec<Vec<f64>> = par_samples(config.trials, stream, |rng, _| {
            let p = construct(budget, rng.random())?;
            let v = functionals(&p)?;
            if v.len() != labels.len() {
                return Err(Error::InvalidArgument(format!("expected {} functionals, got {}", labels.len(), v.len())));
            }
            Ok(v)
        })
        .into_iter()
        .collect::<Result<_>>()?;
        let scale = (budget as f64).powf(exponent);
        for (k, rows) in values.iter_mut().enumerate() {
            let xs: Vec<f64> = draws.iter().map(|d| d[k]).collect();
            let (mean, se) = mean_and_se(&xs);
            rows.push(TrialSummary {
                budget,
                trials: config.trials,
                scaled_mean: scale * mean,
                std_error: scale * se,
                raw_mean: mean,
            });
        }
    }
    labels
        .iter()
        .zip(values)
        .map(|(label, rows)| {
            let fit = LimitFit::from_summaries(&rows, exponent)?;
            Ok(HarnessReport { label: label.to_string(), config: config.clone(), rows, fit })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_an_exact_line() {
        let rows: Vec<TrialSummary> = [10usize, 20, 40]
            .iter()
            .map(|&n| {
                let x = (n as f64).powi(-2);
                TrialSummary { budget: n, trials: 30, scaled_mean: 3.0 + 5.0 * x, std_error: 0.1, raw_mean: 0.0 }
            })
            .collect();
        let f = LimitFit::from_summaries(&rows, 2.0).unwrap();
        assert!((f.limit - 3.0).abs() < 1e-10 && (f.slope - 5.0).abs() < 1e-8);
        assert!(f.limit_std_error() > 0.0);
    }

    #[test]
    fn config_is_validated() {
        let cfg = HarnessConfig { dim: 2, budgets: vec![10, 20], trials: 5, seed: 0 };
        let r = expectation_harness(&cfg, &["x"], |_, _| unreachable!(), |_| unreachable!());
        assert!(r.is_err());
    }
}
