//! Volumes and intrinsic volumes of Euclidean balls. Everything is computed through
//! `ln Γ` so that dimensions in the thousands neither overflow nor underflow prematurely.

use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

/// `ln |D_n|` for real `n >= 0`.
pub fn ln_ball_volume(n: f64) -> f64 {
    0.5 * n * PI.ln() - ln_gamma(0.5 * n + 1.0)
}

/// `|D_n| = π^{n/2} / Γ(1 + n/2)`.
pub fn ball_volume(n: usize) -> f64 {
    // the recurrence |D_n| = (2π/n) |D_{n-2}| is exact at n = 0, 1 and more accurate than exp(ln Γ)
    if n <= 200 {
        let mut v = if n.is_multiple_of(2) { 1.0 } else { 2.0 };
        for k in (2 + n % 2..=n).step_by(2) {
            v *= 2.0 * PI / k as f64;
        }
        v
    } else {
        ln_ball_volume(n as f64).exp()
    }
}

/// `|∂D_n| = n |D_n|`.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * ball_volume(n)
}

pub fn ln_binomial(n: f64, k: f64) -> f64 {
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// `ln V_j(D_n) = ln C(n, j) + ln |D_n| - ln |D_{n-j}|`.
pub fn ln_ball_intrinsic_volume(n: usize, j: usize) -> f64 {
    assert!(j <= n, "intrinsic volume index exceeds dimension");
    ln_binomial(n as f64, j as f64) + ln_ball_volume(n as f64) - ln_ball_volume((n - j) as f64)
}

/// `V_j(D_n)`.
pub fn ball_intrinsic_volume(n: usize, j: usize) -> f64 {
    if j == 0 {
        return 1.0;
    }
    ln_ball_intrinsic_volume(n, j).exp()
}

/// Analytic continuation of `q -> V_q(D_n)` to real `q` in `[0, n]`.
pub fn ball_volume_analytic(n: usize, q: f64) -> f64 {
    let n = n as f64;
    assert!((0.0..=n).contains(&q), "order must lie in [0, n]");
    (0.5 * q * PI.ln() + ln_gamma(n + 1.0) - ln_gamma(q + 1.0) - ln_gamma(n - q + 1.0) + ln_gamma(0.5 * (n - q) + 1.0)
        - ln_gamma(0.5 * n + 1.0))
    .exp()
}

/// Normalising constant of dual volumes: `V_{|q|}(D_n)` when `|q| <= n`, else `|D_n|`.
pub fn dual_constant(n: usize, q: f64) -> f64 {
    if q.abs() <= n as f64 {
        ball_volume_analytic(n, q.abs())
    } else {
        ball_volume(n)
    }
}

/// Wills functional of the unit ball, `Σ_j V_j(D_n)`.
pub fn ball_wills(n: usize) -> f64 {
    (0..=n).map(|j| ball_intrinsic_volume(n, j)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_for_ball_volumes() {
        // |D_n| = 2π/n |D_{n-2}|, |D_0| = 1, |D_1| = 2
        let mut vols = vec![1.0f64, 2.0];
        for n in 2..=200 {
            let v = 2.0 * PI / n as f64 * vols[n - 2];
            vols.push(v);
        }
        for (n, &v) in vols.iter().enumerate() {
            let got = ball_volume(n);
            assert!((got - v).abs() <= 1e-12 * v, "n={n}: {got} vs {v}");
        }
    }

    #[test]
    fn intrinsic_volumes_of_small_balls() {
        assert!((ball_intrinsic_volume(2, 1) - PI).abs() < 1e-13);
        assert!((ball_intrinsic_volume(3, 1) - 4.0).abs() < 1e-13);
        assert!((ball_intrinsic_volume(3, 2) - 2.0 * PI).abs() < 1e-13);
        assert!((ball_intrinsic_volume(3, 3) - 4.0 * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn analytic_extension_agrees_at_integers() {
        for n in 1..=12 {
            for j in 0..=n {
                let a = ball_volume_analytic(n, j as f64);
                let b = ball_intrinsic_volume(n, j);
                assert!((a - b).abs() <= 1e-12 * b, "n={n} j={j}");
            }
        }
    }
}
