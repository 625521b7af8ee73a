use serde::{Deserialize, Serialize};

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

impl EstimatorResult {
    pub fn exact(value: f64) -> Self {
        EstimatorResult { value, std_error: 0.0, samples: 0, seed: 0 }
    }

    /// Mean of i.i.d. draws, scaled by `factor`.
    pub fn from_draws(draws: &[f64], factor: f64, seed: u64) -> Self {
        let (mean, se) = mean_and_se(draws);
        EstimatorResult { value: factor * mean, std_error: factor.abs() * se, samples: draws.len(), seed }
    }

    /// `|self - other|` measured in combined standard errors.
    pub fn z_score(&self, other: f64, other_se: f64) -> f64 {
        let s = (self.std_error.powi(2) + other_se.powi(2)).sqrt();
        if s == 0.0 {
            if self.value == other {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.value - other).abs() / s
        }
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}
