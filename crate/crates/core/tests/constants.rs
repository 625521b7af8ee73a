use polyapprox::constants::{alpha, alpha_from_beta, beta, ln_alpha};
use proptest::prelude::*;

proptest! {
    #[test]
    fn alpha_grows_with_j(n in 2usize..400, seed in any::<u64>()) {
        let j = 1 + (seed as usize) % (n - 1);
        prop_assert!(ln_alpha(n, j).unwrap() < ln_alpha(n, j + 1).unwrap());
    }

    #[test]
    fn top_alpha_over_lower_alpha_is_bracketed(n in 2usize..400, seed in any::<u64>()) {
        let j = 1 + (seed as usize) % (n - 1);
        let ratio = (ln_alpha(n, n).unwrap() - ln_alpha(n, j).unwrap()).exp();
        let nf = n as f64;
        prop_assert!(1.0 + 2.0 / (nf * nf) <= ratio * (1.0 + 1e-12), "n {} j {}: {}", n, j, ratio);
        prop_assert!(ratio <= (1.0 + (1.0 / j as f64).min(3.0 * nf.ln() / nf)) * (1.0 + 1e-12), "n {} j {}: {}", n, j, ratio);
    }

    #[test]
    fn alpha_is_recovered_from_beta(n in 2usize..120, seed in any::<u64>()) {
        let j = 1 + (seed as usize) % n;
        let a = alpha(n, j).unwrap();
        let back = alpha_from_beta(n, j, beta(n, j).unwrap()).unwrap();
        prop_assert!((a - back).abs() <= 1e-12 * a);
    }
}
