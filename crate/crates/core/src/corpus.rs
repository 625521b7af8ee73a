//! Invariant checks over a seeded corpus of random polytopes and ellipsoids.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bodies::convex_hull;
use crate::deviations::{delta1_comparison, delta_j, intrinsic_volume, VolumeMethod};
use crate::error::Result;
use crate::measures::ball_intrinsic_volume;
use crate::rng::{derive_seed, sphere_point, substream};
use crate::{Body, Polytope};

const SAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub bodies: usize,
    pub seed: u64,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Hull of `count` points with random directions and radii in `[0.5, 1.5)`, redrawn until the
/// origin is interior.
pub fn random_polytope(n: usize, count: usize, seed: u64) -> Result<Polytope> {
    let mut rng = substream(seed, 0);
    for _ in 0..1000 {
        let pts: Vec<Vec<f64>> = (0..count)
            .map(|_| {
                let u = sphere_point(&mut rng, n);
                let r = 0.5 + rng.random::<f64>();
                u.iter().map(|x| r * x).collect()
            })
            .collect();
        if let Ok(p) = convex_hull(&pts) {
            if Body::Polytope(p.clone()).contains_origin_interior() {
                return Ok(p);
            }
        }
    }
    Err(crate::Error::DegenerateInput(format!("no full-dimensional hull from {count} points in dimension {n}")))
}

/// Body `k` of the corpus: polytopes in dimensions 2 to 4 and, every fifth body, an ellipsoid
/// in dimension 2 or 3.
pub fn corpus_body(k: u64, seed: u64) -> Result<Body> {
    let s = derive_seed(seed, k);
    if k % 5 == 4 {
        let n = 2 + (k / 5 % 2) as usize;
        let mut rng = substream(s, 1);
        let axes: Vec<f64> = (0..n).map(|_| 0.6 + 0.8 * rng.random::<f64>()).collect();
        Ok(Body::Ellipsoid { center: vec![0.0; n], semi_axes: axes })
    } else {
        let n = 2 + (k % 3) as usize;
        Ok(Body::Polytope(random_polytope(n, n + 4 + (k as usize % 7), s)?))
    }
}

/// `V_j / V_j(D_n)`, `j = 1..=n`, with errors.
fn normalized(b: &Body, seed: u64) -> Result<Vec<(f64, f64)>> {
    let n = b.dim();
    (1..=n)
        .map(|j| {
            let v = intrinsic_volume(b, j, VolumeMethod::Auto, SAMPLES, seed)?;
            let d = ball_intrinsic_volume(n, j);
            Ok((v.result.value / d, v.result.std_error / d))
        })
        .collect()
}

/// Checks on each of `count` bodies: Euler and handshaking relations of polytopes, the
/// isoperimetric chain and log-concavity of normalized intrinsic volumes, and for pairs with
/// another body and with a shrunken copy, nonnegativity and symmetry of every `Δ_j` and
/// `Δ_1 >= V_1(D_n) δ_1` (with equality for nested pairs). Tolerances are three standard
/// errors.
pub fn invariant_corpus(count: u64, seed: u64) -> Result<CorpusReport> {
    let mut t = CorpusReport { bodies: count as usize, seed, checks: 0, failures: Vec::new() };
    let bodies: Vec<Body> = (0..count).map(|k| corpus_body(k, seed)).collect::<Result<_>>()?;
    for (k, b) in bodies.iter().enumerate() {
        let n = b.dim();
        if let Body::Polytope(p) = b {
            let f = p.face_counts();
            t.expect(f.euler_characteristic() == f.expected_euler(), || format!("euler on body {k}"));
            if p.is_simplicial() {
                t.expect(n * f.0[n - 1] == 2 * f.0[n - 2], || format!("handshaking on body {k}"));
            }
        }
        let v = normalized(b, k as u64)?;
        // (V_n)^{1/n} <= (V_j)^{1/j} <= V_1 after normalization
        for j in 1..=n {
            let (x, sx) = v[j - 1];
            let lower = v[n - 1].0.powf(1.0 / n as f64);
            let mid = x.powf(1.0 / j as f64);
            let smid = sx / (j as f64 * x) * mid;
            let slow = v[n - 1].1 / (n as f64 * v[n - 1].0) * lower;
            t.expect(lower <= mid + 3.0 * smid.hypot(slow) + 1e-12, || format!("isoperimetric lower, body {k}, j {j}"));
            t.expect(mid <= v[0].0 + 3.0 * smid.hypot(v[0].1) + 1e-12, || {
                format!("isoperimetric upper, body {k}, j {j}")
            });
        }
        for j in 1..n {
            let left = if j == 1 { (1.0, 0.0) } else { v[j - 2] };
            let (a, b2, c) = (left, v[j - 1], v[j]);
            let gap = b2.0 * b2.0 - a.0 * c.0;
            let err = (2.0 * b2.0 * b2.1).hypot(a.0 * c.1).hypot(c.0 * a.1);
            t.expect(gap >= -3.0 * err - 1e-12, || format!("log-concavity, body {k}, j {j}: {gap:.3e} ± {err:.1e}"));
        }
        let other = &bodies[(k + 3) % bodies.len()];
        let shrunk = b.scaled(0.6)?;
        for (l, nested) in [(other, false), (&shrunk, true)] {
            // overlapping pairs are restricted to polytopes, whose intersections are exact
            let both_polytopes = matches!((b, l), (Body::Polytope(_), Body::Polytope(_)));
            if l.dim() != n || !(nested || both_polytopes) {
                continue;
            }
            for j in 1..=n {
                let a = delta_j(b, l, j, VolumeMethod::Auto, SAMPLES, 3)?;
                let c = delta_j(l, b, j, VolumeMethod::Auto, SAMPLES, 3)?;
                t.expect(a.value >= -3.0 * a.std_error, || format!("nonnegativity, body {k}, j {j}"));
                t.expect(
                    (a.value - c.value).abs() <= 3.0 * a.std_error.hypot(c.std_error) + 1e-9 * a.value.abs().max(1.0),
                    || format!("symmetry, body {k}, j {j}: {} vs {}", a.value, c.value),
                );
            }
            let cmp = delta1_comparison(b, l, 4000, 5)?;
            t.expect(cmp.gap.value >= -3.0 * cmp.gap.std_error - 1e-12, || format!("Δ_1 >= V_1 δ_1, body {k}"));
            if nested {
                t.expect(cmp.gap.value.abs() <= 3.0 * cmp.gap.std_error + 1e-9, || {
                    format!("nested equality, body {k}")
                });
            }
        }
    }
    Ok(t)
}
