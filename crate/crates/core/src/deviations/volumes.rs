use std::cell::OnceCell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{
    intrinsic_volume_closed_form, kubota_draws, kubota_estimate, steiner_fit, volume_hit_or_miss,
    IntrinsicVolumeVector, Method, SteinerFit,
};
use crate::stats::EstimatorResult;
use crate::Body;

/// Which estimator computes `V_j` of each operand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeMethod {
    /// Closed form when available, else Kubota (polytopes, or `j = 1`), hit-or-miss for
    /// `j = n`, and a Steiner fit otherwise.
    #[default]
    Auto,
    Exact,
    Kubota,
    SteinerFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub result: EstimatorResult,
    pub method: Method,
}

enum Route {
    Exact(f64),
    Kubota,
    Fit,
    HitOrMiss,
}

fn route(body: &Body, j: usize, method: VolumeMethod) -> Result<Route> {
    let n = body.dim();
    if j > n {
        return Err(Error::InvalidArgument(format!("j = {j} exceeds the dimension {n}")));
    }
    if j == 0 {
        return Ok(Route::Exact(1.0));
    }
    let closed = intrinsic_volume_closed_form(body, j);
    let kubota_ok = j < n && (matches!(body, Body::Polytope(_)) || j == 1);
    match method {
        VolumeMethod::Exact => closed
            .map(Route::Exact)
            .ok_or(Error::UnsupportedBodyKind { op: "exact intrinsic volume", kind: body.kind().as_str() }),
        VolumeMethod::Kubota if j == n => Ok(closed.map(Route::Exact).unwrap_or(Route::HitOrMiss)),
        VolumeMethod::Kubota => Ok(Route::Kubota),
        VolumeMethod::SteinerFit => Ok(Route::Fit),
        VolumeMethod::Auto => Ok(match closed {
            Some(v) => Route::Exact(v),
            None if kubota_ok => Route::Kubota,
            None if j == n => Route::HitOrMiss,
            None => Route::Fit,
        }),
    }
}

fn from_fit(fit: &SteinerFit, j: usize) -> VolumeEstimate {
    VolumeEstimate {
        result: EstimatorResult {
            value: fit.volumes.values[j],
            std_error: fit.volumes.std_errors[j],
            samples: fit.samples,
            seed: fit.seed,
        },
        method: Method::SteinerFit,
    }
}

/// `V_j(K)` with the requested estimator.
pub fn intrinsic_volume(
    body: &Body,
    j: usize,
    method: VolumeMethod,
    samples: usize,
    seed: u64,
) -> Result<VolumeEstimate> {
    Ok(match route(body, j, method)? {
        Route::Exact(v) => VolumeEstimate { result: EstimatorResult::exact(v), method: Method::Exact },
        Route::Kubota => VolumeEstimate { result: kubota_estimate(body, j, samples, seed)?, method: Method::Kubota },
        Route::HitOrMiss => {
            VolumeEstimate { result: volume_hit_or_miss(body, samples, seed)?, method: Method::HitOrMiss }
        }
        Route::Fit => from_fit(&steiner_fit(body, None, samples, seed)?, j),
    })
}

/// `V_0, ..., V_n` of one body, fitting the Steiner polynomial at most once.
pub fn intrinsic_volume_vector(
    body: &Body,
    method: VolumeMethod,
    samples: usize,
    seed: u64,
) -> Result<IntrinsicVolumeVector> {
    let op = Operand::new(body);
    let mut out = IntrinsicVolumeVector { values: Vec::new(), std_errors: Vec::new(), methods: Vec::new() };
    for j in 0..=body.dim() {
        let v = op.volume(j, method, samples, seed)?;
        out.values.push(v.result.value);
        out.std_errors.push(v.result.std_error);
        out.methods.push(v.method);
    }
    Ok(out)
}

/// A body together with its lazily computed Steiner fit.
pub(crate) struct Operand<'a> {
    pub body: &'a Body,
    fit: OnceCell<SteinerFit>,
}

impl<'a> Operand<'a> {
    pub fn new(body: &'a Body) -> Self {
        Operand { body, fit: OnceCell::new() }
    }

    fn fit(&self, samples: usize, seed: u64) -> Result<&SteinerFit> {
        if self.fit.get().is_none() {
            let f = steiner_fit(self.body, None, samples, seed)?;
            let _ = self.fit.set(f);
        }
        Ok(self.fit.get().expect("set above"))
    }

    pub fn volume(&self, j: usize, method: VolumeMethod, samples: usize, seed: u64) -> Result<VolumeEstimate> {
        match route(self.body, j, method)? {
            Route::Fit => Ok(from_fit(self.fit(samples, seed)?, j)),
            _ => intrinsic_volume(self.body, j, method, samples, seed),
        }
    }
}

/// `Σ coef_i V_j(K_i)`. Operands estimated by Kubota share random frames and are combined
/// sample by sample; the rest add their errors in quadrature.
pub(crate) fn linear_combination(
    terms: &[(f64, &Operand)],
    j: usize,
    method: VolumeMethod,
    samples: usize,
    seed: u64,
) -> Result<(EstimatorResult, Vec<Method>)> {
    let mut value = 0.0;
    let mut var = 0.0;
    let mut methods = Vec::with_capacity(terms.len());
    let mut paired: Option<(Vec<f64>, f64)> = None;
    for &(coef, op) in terms {
        match route(op.body, j, method)? {
            Route::Exact(v) => {
                value += coef * v;
                methods.push(Method::Exact);
            }
            Route::Kubota => {
                let (draws, factor) = kubota_draws(op.body, j, samples, seed)?;
                let acc = paired.get_or_insert_with(|| (vec![0.0; draws.len()], factor));
                for (a, d) in acc.0.iter_mut().zip(&draws) {
                    *a += coef * d;
                }
                methods.push(Method::Kubota);
            }
            _ => {
                let est = op.volume(j, method, samples, seed)?;
                value += coef * est.result.value;
                var += (coef * est.result.std_error).powi(2);
                methods.push(est.method);
            }
        }
    }
    if let Some((draws, factor)) = paired {
        let r = EstimatorResult::from_draws(&draws, factor, seed);
        value += r.value;
        var += r.std_error.powi(2);
    }
    let sampled = methods.iter().any(|m| *m != Method::Exact);
    Ok((EstimatorResult { value, std_error: var.sqrt(), samples: if sampled { samples } else { 0 }, seed }, methods))
}
