//! Deterministic sharded random sampling.
//!
//! Every campaign splits its sample budget over [`SHARDS`] independent
//! ChaCha8 streams derived from one master seed, so results do not depend
//! on how many threads execute the shards.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// ASCII `"KP2"`.
pub const DEFAULT_SEED: u64 = 0x4B5032;

pub const SHARDS: usize = 64;

pub fn shard_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Number of samples assigned to `shard` when `n` are split over [`SHARDS`].
pub fn shard_len(n: usize, shard: usize) -> usize {
    n / SHARDS + usize::from(shard < n % SHARDS)
}

/// Magnitude with `ln|x|` uniform on `[ln lo, ln hi]`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    debug_assert!(0.0 < lo && lo <= hi);
    if lo == hi {
        return lo;
    }
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Log-uniform magnitude with a uniformly random sign.
pub fn signed_log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let m = log_uniform(rng, lo, hi);
    if rng.random::<bool>() {
        m
    } else {
        -m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shards_cover_budget() {
        for n in [0, 1, 63, 64, 65, 1_000_000] {
            assert_eq!((0..SHARDS).map(|s| shard_len(n, s)).sum::<usize>(), n);
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| shard_rng(7, 1).random()).collect();
        let mut r1 = shard_rng(7, 1);
        let mut r2 = shard_rng(7, 2);
        let x: u64 = r1.random();
        let y: u64 = r2.random();
        assert_eq!(a[0], x);
        assert_ne!(x, y);
    }

    #[test]
    fn log_uniform_stays_in_range() {
        let mut rng = shard_rng(1, 0);
        for _ in 0..10_000 {
            let v = signed_log_uniform(&mut rng, 1e-3, 1e3);
            assert!((1e-3..=1e3).contains(&v.abs()));
        }
    }
}
