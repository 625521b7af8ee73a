//! Counter-based random substreams. Sample `i` of a run seeded with `s` always draws from the
//! ChaCha stream `(s, i)`, so estimates do not depend on how samples are split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::scalar::Scalar;

pub type SampleRng = ChaCha8Rng;

pub fn substream(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Seed for a labelled sub-computation, so that e.g. the `k`-th radius or the `N`-th
/// polytope size gets its own family of substreams.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ label.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn entropy_seed() -> u64 {
    rand::rng().random()
}

pub fn gaussian_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Uniform point on the unit sphere `S^{n-1}`.
pub fn sphere_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let g = gaussian_vec(rng, n);
        let r = crate::linalg::norm(&g);
        if r > 1e-300 {
            return g.iter().map(|x| x / r).collect();
        }
    }
}

/// Deterministic set of unit directions used by containment tests.
pub fn fixed_directions<T: Scalar>(n: usize, count: usize) -> Vec<Vec<T>> {
    let mut rng = substream(0xd1ec_7105, 0);
    let mut dirs: Vec<Vec<T>> = Vec::with_capacity(count + 2 * n);
    for k in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![T::zero(); n];
            e[k] = T::lit(s);
            dirs.push(e);
        }
    }
    dirs.extend((0..count).map(|_| sphere_point(&mut rng, n).iter().map(|&x| T::lit(x)).collect()));
    dirs
}

/// Evaluates `f` on samples `0..count`, each with its own substream, and returns the
/// results in sample order.
pub fn par_samples<R: Send>(count: usize, seed: u64, f: impl Fn(&mut SampleRng, usize) -> R + Sync) -> Vec<R> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i as u64);
            f(&mut rng, i)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substreams_are_reproducible_and_distinct() {
        let a: u64 = substream(7, 3).random();
        let b: u64 = substream(7, 3).random();
        let c: u64 = substream(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn parallel_map_is_independent_of_pool_size() {
        let draw = |rng: &mut SampleRng, _i: usize| rng.random::<f64>();
        let one =
            rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| par_samples(1000, 11, draw));
        let many =
            rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| par_samples(1000, 11, draw));
        assert_eq!(one, many);
    }
}
