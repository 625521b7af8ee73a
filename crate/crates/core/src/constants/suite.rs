//! Numerical audit of the elementary estimates behind the dimensional constants.
//!
//! Every inequality is evaluated as stated, in log space, for each `n` in `2..=n_max` and,
//! where it depends on `j`, for every `j` (the record keeps the worst `j`). Bounds on the
//! unknown Delone numbers are checked against the Mankiewicz-Schütt bracket: a verdict is
//! `Inconclusive` when the claim holds for part of the bracket only.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::{delone_bracket, known_tiling_numbers};
use crate::error::{Error, Result};
use crate::measures::ball::{ln_ball_intrinsic_volume, ln_ball_volume};

pub const MAX_SUITE_DIM: usize = 2000;

/// Slack allowed on each inequality, in log space.
const SLACK: f64 = 1e-12;

/// Checks that fail as stated. Each is analysed in the project notes; the remaining checks
/// must pass.
pub const KNOWN_FINDINGS: &[&str] =
    &["sphere_area_power.upper", "beta.lower", "weighted_random_ratio.lower", "dual_random_ratio.lower"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// One inequality at one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub label: String,
    pub n: usize,
    /// Index of the worst case for `j`-dependent checks.
    pub j: Option<usize>,
    pub verdict: Verdict,
    /// `ln(rhs) - ln(lhs)` at the worst case; negative means violated.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub label: String,
    pub checked: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub worst_margin: f64,
    pub worst_n: usize,
    pub failing_n: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub n_max: usize,
    pub records: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn summary(&self) -> Vec<CheckSummary> {
        let mut out: Vec<CheckSummary> = Vec::new();
        for r in &self.records {
            let s = match out.iter_mut().find(|s| s.label == r.label) {
                Some(s) => s,
                None => {
                    out.push(CheckSummary {
                        label: r.label.clone(),
                        checked: 0,
                        failed: 0,
                        inconclusive: 0,
                        worst_margin: f64::INFINITY,
                        worst_n: r.n,
                        failing_n: Vec::new(),
                    });
                    out.last_mut().unwrap()
                }
            };
            s.checked += 1;
            match r.verdict {
                Verdict::Fail => {
                    s.failed += 1;
                    s.failing_n.push(r.n);
                }
                Verdict::Inconclusive => s.inconclusive += 1,
                Verdict::Pass => {}
            }
            if r.margin < s.worst_margin {
                s.worst_margin = r.margin;
                s.worst_n = r.n;
            }
        }
        out
    }

    /// Labels with at least one failure that are not among [`KNOWN_FINDINGS`].
    pub fn unexpected_failures(&self) -> Vec<String> {
        let mut labels: Vec<String> = self
            .records
            .iter()
            .filter(|r| r.verdict == Verdict::Fail && !KNOWN_FINDINGS.contains(&r.label.as_str()))
            .map(|r| r.label.clone())
            .collect();
        labels.dedup();
        labels
    }

    pub fn failed(&self, label: &str) -> Vec<usize> {
        self.records.iter().filter(|r| r.label == label && r.verdict == Verdict::Fail).map(|r| r.n).collect()
    }
}

/// Binet's remainder `ln Γ(x+1) - ln(√(2πx) (x/e)^x)`. For `x >= 10` the truncated Stirling
/// series is accurate far below `f64` rounding, unlike the difference of large logarithms.
fn binet(x: f64) -> f64 {
    if x < 10.0 {
        return ln_gamma(x + 1.0) - ln_stirling(x);
    }
    const COEFFS: [f64; 7] =
        [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0];
    let inv2 = 1.0 / (x * x);
    let mut power = 1.0 / x;
    let mut sum = 0.0;
    for c in COEFFS {
        sum += c * power;
        power *= inv2;
    }
    sum
}

fn ln_stirling(x: f64) -> f64 {
    0.5 * (2.0 * PI * x).ln() + x * (x.ln() - 1.0)
}

fn ln_pos(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        f64::NEG_INFINITY
    }
}

struct Recorder {
    records: Vec<CheckRecord>,
}

impl Recorder {
    /// Records `exp(ln_lhs) <= exp(ln_rhs)`.
    fn le(&mut self, label: &'static str, n: usize, ln_lhs: f64, ln_rhs: f64) {
        self.margin(label, n, None, ln_rhs - ln_lhs);
    }

    fn margin(&mut self, label: &'static str, n: usize, j: Option<usize>, margin: f64) {
        let verdict = if margin >= -SLACK { Verdict::Pass } else { Verdict::Fail };
        self.records.push(CheckRecord { label: label.to_string(), n, j, verdict, margin });
    }

    /// Worst case over `j` of `ln_rhs(j) - ln_lhs(j)`.
    fn le_over_j(&mut self, label: &'static str, n: usize, cases: impl Iterator<Item = (usize, f64, f64)>) {
        let (j, m) =
            cases.map(|(j, l, r)| (j, r - l)).fold((0, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc });
        if j > 0 {
            self.margin(label, n, Some(j), m);
        }
    }

    /// A lower bound `bound <= value` where `value` is only known to lie in `[lo, hi]`.
    fn lower_banded(&mut self, label: &'static str, n: usize, ln_bound: f64, ln_lo: f64, ln_hi: f64) {
        let verdict = if ln_lo - ln_bound >= -SLACK {
            Verdict::Pass
        } else if ln_hi - ln_bound < -SLACK {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        };
        self.records.push(CheckRecord { label: label.to_string(), n, j: None, verdict, margin: ln_lo - ln_bound });
    }

    fn upper_banded(&mut self, label: &'static str, n: usize, ln_bound: f64, ln_lo: f64, ln_hi: f64) {
        let verdict = if ln_bound - ln_hi >= -SLACK {
            Verdict::Pass
        } else if ln_bound - ln_lo < -SLACK {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        };
        self.records.push(CheckRecord { label: label.to_string(), n, j: None, verdict, margin: ln_bound - ln_hi });
    }
}

/// Evaluates every estimate for `2 <= n <= n_max`.
pub fn inequality_suite(n_max: usize) -> Result<SuiteReport> {
    if !(2..=MAX_SUITE_DIM).contains(&n_max) {
        return Err(Error::InvalidArgument(format!("n_max must lie in 2..={MAX_SUITE_DIM}, got {n_max}")));
    }
    let mut rec = Recorder { records: Vec::new() };
    for n in 2..=n_max {
        check_dimension(&mut rec, n)?;
    }
    Ok(SuiteReport { n_max, records: rec.records })
}

fn check_dimension(rec: &mut Recorder, n: usize) -> Result<()> {
    let nf = n as f64;
    let ln_n = nf.ln();
    let l = ln_n / nf;
    let s = 2.0 / (nf - 1.0);

    // Stirling, at the two arguments the ball formulas use
    let xs: Vec<f64> = [0.5 * nf, nf].into_iter().filter(|&x| x >= 1.0).collect();
    let worst = |f: &dyn Fn(f64) -> f64| xs.iter().map(|&x| f(x)).fold(f64::INFINITY, f64::min);
    rec.margin("stirling.lower", n, None, worst(&binet));
    rec.margin("stirling.middle", n, None, worst(&|x| 1.0 / (12.0 * x) - binet(x)));
    rec.margin("stirling.upper", n, None, worst(&|x| (1.0 / x).ln_1p() - 1.0 / (12.0 * x)));

    // ball volume
    let ln_vol = ln_ball_volume(nf);
    let ln_env = -0.5 * (PI * nf).ln() + 0.5 * nf * (2.0 * PI * E / nf).ln();
    rec.le("ball_volume.lower", n, ln_env + ln_pos(1.0 - 1.0 / nf), ln_vol);
    rec.le("ball_volume.upper", n, ln_vol, ln_env);

    let ln_v1 = ln_n + ln_vol - ln_ball_volume(nf - 1.0);
    let ln_root = 0.5 * (2.0 * PI * nf).ln();
    rec.le("first_intrinsic_volume.lower", n, ln_root + ln_pos(1.0 - 1.0 / nf), ln_v1);
    rec.le("first_intrinsic_volume.upper", n, ln_v1, ln_root);

    let ln_pd = s * (ln_n + ln_vol);
    let ln_base = (2.0 * PI * E / nf).ln();
    rec.le("sphere_area_power.lower", n, ln_base, ln_pd);
    rec.le("sphere_area_power.middle", n, ln_pd, ln_base + (2.0 * E).ln() / (nf - 1.0));
    rec.le("sphere_area_power.upper", n, ln_base + (2.0 * E).ln() / (nf - 1.0), ln_base + (8.0 / nf).ln_1p());

    let ln_g_small = ln_gamma(1.0 + s);
    rec.le("gamma_near_one.lower", n, ln_pos(1.0 - 2.0 / nf), ln_g_small);
    rec.le("gamma_near_one.upper", n, ln_g_small, (2.0 / nf).ln_1p());

    // ln Γ(j+1+s)/Γ(j+1) through the product form, and the harmonic bound
    let mut ln_ratio = vec![0.0; n + 1];
    let mut harmonic = vec![0.0; n + 1];
    let mut acc = ln_g_small;
    ln_ratio[0] = acc;
    for k in 1..=n {
        acc += (s / k as f64).ln_1p();
        ln_ratio[k] = acc;
        harmonic[k] = harmonic[k - 1] + 1.0 / k as f64;
    }
    let direct = |j: usize| ln_gamma(j as f64 + 1.0 + s) - ln_gamma(j as f64 + 1.0);
    rec.le_over_j(
        "gamma_ratio.product_identity",
        n,
        (1..=n).map(|j| {
            let err = (direct(j) - ln_ratio[j]).abs();
            // tolerance for the cancellation in the direct difference
            let tol = 1e-14 * ln_gamma(j as f64 + 2.0).abs().max(1.0);
            (j, err, tol)
        }),
    );
    rec.le_over_j(
        "gamma_ratio.harmonic_bound",
        n,
        (1..=n).map(|j| (j, ln_ratio[j], (2.0 / nf).ln_1p() + s * harmonic[j])),
    );
    rec.le_over_j("gamma_ratio.lower", n, (1..=n).map(|j| (j, 0.0, ln_ratio[j])));
    rec.le_over_j(
        "gamma_ratio.upper",
        n,
        (1..=n).map(|j| (j, ln_ratio[j], (25.0 * ((j + 1) as f64).ln() / nf).ln_1p())),
    );
    if n >= 10 {
        rec.le("gamma_ratio.top", n, ln_ratio[n], (4.0 * l).ln_1p());
    }

    // α(n, j)
    let ln_lead = (1.0 - 2.0 / (nf + 1.0)).ln() + s * ln_v1;
    let ln_alpha = |j: usize| ln_lead + ln_ratio[j];
    rec.le_over_j("alpha.lower", n, (1..=n).map(|j| (j, ln_pos(1.0 + l - 2.0 / nf), ln_alpha(j))));
    rec.le_over_j("alpha.upper", n, (1..=n).map(|j| (j, ln_alpha(j), (120.0 * l).ln_1p())));
    if n >= 4 {
        rec.le_over_j("alpha.at_least_one", n, (1..=n).map(|j| (j, 0.0, ln_alpha(j))));
    }
    rec.le_over_j("alpha.increasing", n, (1..n).map(|j| (j, ln_alpha(j), ln_alpha(j + 1) - SLACK)));

    // α(n,n)/α(n,j) = Π_{k>j} (1 + s/k)
    let rel = |j: usize| ln_ratio[n] - ln_ratio[j];
    rec.le_over_j("alpha_ratio.lower", n, (1..n).map(|j| (j, (2.0 / (nf * nf)).ln_1p(), rel(j))));
    rec.le_over_j("alpha_ratio.reciprocal", n, (1..n).map(|j| (j, rel(j), (1.0 / j as f64).ln_1p())));
    rec.le("alpha_ratio.via_first", n, rel(1), (3.0 * l).ln_1p());
    rec.le_over_j("alpha_ratio.upper", n, (1..n).map(|j| (j, rel(j), (1.0 / j as f64).min(3.0 * l).ln_1p())));

    // β(n, j)
    let ln_beta =
        |j: usize| ln_alpha(j) + (j as f64).ln() + ln_ball_intrinsic_volume(n, j) - (2.0 * nf).ln() - ln_vol - ln_pd;
    let ln_beta_base = |j: usize| (j as f64).ln() + ln_ball_intrinsic_volume(n, j) - (4.0 * PI * E).ln() - ln_vol;
    rec.le_over_j("beta.lower", n, (1..=n).map(|j| (j, ln_beta_base(j) + (14.0 * l).ln_1p(), ln_beta(j))));
    rec.le_over_j("beta.upper", n, (1..=n).map(|j| (j, ln_beta(j), ln_beta_base(j) + (120.0 * l).ln_1p())));

    // Delone number bracket and its simplified forms
    let (del_lo, del_hi) = delone_bracket(n);
    let (ln_lo, ln_hi) = (del_lo.ln(), del_hi.ln());
    let ln_scale = (nf / (2.0 * PI * E)).ln();
    rec.le("delone.lower", n, ln_scale + ln_pos(1.0 + l - 2.0 / nf), ln_lo);
    rec.le("delone.upper", n, ln_hi, ln_scale + (25.0 * l).ln_1p());
    if n >= 10 {
        rec.le("delone.lower_sharp", n, ln_scale + (l / 8.0).ln_1p(), ln_lo);
        rec.le("delone.upper_sharp", n, ln_hi, ln_scale + (4.0 * l).ln_1p());

        let ln_weighted = 2f64.ln() + s * ln_n + ln_beta(n);
        rec.lower_banded("weighted_random_ratio.lower", n, (8.0 * l).ln_1p(), ln_weighted - ln_hi, ln_weighted - ln_lo);
        rec.upper_banded(
            "weighted_random_ratio.upper",
            n,
            (1000.0 * l).ln_1p(),
            ln_weighted - ln_hi,
            ln_weighted - ln_lo,
        );
        let ln_dual = 2f64.ln() + ln_beta(n);
        rec.lower_banded("dual_random_ratio.lower", n, (3.0 * l).ln_1p(), ln_dual - ln_hi, ln_dual - ln_lo);
        rec.upper_banded("dual_random_ratio.upper", n, (200.0 * l).ln_1p(), ln_dual - ln_hi, ln_dual - ln_lo);
    }

    // consequences for the tiling numbers known exactly
    if n <= 3 {
        let t = known_tiling_numbers(n)?;
        let del = t.del.value().expect("known for n <= 3").ln();
        let div = t.div.value().expect("known for n <= 3").ln();
        rec.le("delone.known_in_bracket_lower", n, ln_lo, del);
        rec.le("delone.known_in_bracket_upper", n, del, ln_hi);
        rec.le("tiling_ratio.known", n, 0.0, del - div);
        rec.le_over_j("random_inscribed_ratio.known", n, (1..=n).map(|j| (j, 0.0, ln_alpha(j) - div - ln_pd)));
        rec.le("random_circumscribed_ratio.known", n, 0.0, s * ln_n + ln_alpha(1) - div - ln_pd);
        rec.le("dual_random_ratio.known", n, 0.0, 2f64.ln() + ln_beta(n) - del);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binet_series_matches_log_gamma_where_both_are_accurate() {
        for x in [10.0, 12.5, 20.0, 40.0] {
            let direct = ln_gamma(x + 1.0) - ln_stirling(x);
            assert!((binet(x) - direct).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn gamma_near_one_is_tight_at_two() {
        let r = inequality_suite(2).unwrap();
        let rec = r.records.iter().find(|c| c.label == "gamma_near_one.upper").unwrap();
        assert_eq!(rec.verdict, Verdict::Pass);
        assert!(rec.margin.abs() < 1e-12);
    }

    #[test]
    fn suite_rejects_large_range() {
        assert!(inequality_suite(MAX_SUITE_DIM + 1).is_err());
    }
}
