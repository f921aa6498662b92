//! Seeded sampling of evaluation points.
//!
//! The generator is SplitMix64 (state += 0x9E3779B97F4A7C15, then the
//! standard 30/27/31 xor-shift-multiply finalizer). Bounded integers use
//! rejection against the largest multiple of the range, so every value in
//! the range is equally likely. With those two rules fixed:
//!
//! * `q = a/b`: draw `b` uniform in `2..=64`, then `a` uniform in `1..b`;
//! * `T = c/d`: draw `c`, `d` uniform in `1..=64`, redraw both until `c <= 2d`;
//! * `b` of the q-binomial checks: draw `d` uniform in `2..=64`, `c` uniform
//!   in `0..d`, then one more draw whose low bit set makes it negative.
//!
//! Points are drawn in the order `q, T` (resp. `q, b`), one pair at a time.

use std::collections::BTreeMap;

use crate::arith::{rat, ExactRational};

pub const MAX_DENOMINATOR: u64 = 64;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        let span = hi - lo + 1;
        let zone = u64::MAX - (u64::MAX % span);
        loop {
            let x = self.next_u64();
            if x < zone {
                return lo + x % span;
            }
        }
    }

    fn q(&mut self) -> ExactRational {
        let b = self.range(2, MAX_DENOMINATOR);
        let a = self.range(1, b - 1);
        rat(a as i64, b as i64)
    }

    fn t(&mut self) -> ExactRational {
        loop {
            let c = self.range(1, MAX_DENOMINATOR);
            let d = self.range(1, MAX_DENOMINATOR);
            if c <= 2 * d {
                return rat(c as i64, d as i64);
            }
        }
    }

    fn b(&mut self) -> ExactRational {
        let d = self.range(2, MAX_DENOMINATOR);
        let c = self.range(0, d - 1);
        let neg = self.next_u64() & 1 == 1;
        rat(if neg { -(c as i64) } else { c as i64 }, d as i64)
    }
}

/// `count` pairs `(q, T)` with `0 < q < 1` and `0 < T <= 2`.
pub fn sample_points(seed: u64, count: usize) -> Vec<(ExactRational, ExactRational)> {
    let mut g = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let q = g.q();
            let t = g.t();
            (q, t)
        })
        .collect()
}

/// `count` pairs `(q, b)` with `0 < q < 1` and `|b| < 1`.
pub fn sample_q_b(seed: u64, count: usize) -> Vec<(ExactRational, ExactRational)> {
    let mut g = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let q = g.q();
            let b = g.b();
            (q, b)
        })
        .collect()
}

fn max_mass(dist: BTreeMap<ExactRational, ExactRational>) -> ExactRational {
    dist.into_values().max().expect("nonempty distribution")
}

/// Largest probability of any single `q` value under the sampler.
pub fn q_point_mass() -> ExactRational {
    let mut dist = BTreeMap::new();
    let nb = (MAX_DENOMINATOR - 1) as i64;
    for b in 2..=MAX_DENOMINATOR as i64 {
        for a in 1..b {
            *dist.entry(rat(a, b)).or_insert_with(|| rat(0, 1)) += rat(1, nb * (b - 1));
        }
    }
    max_mass(dist)
}

/// Largest probability of any single `T` value under the sampler.
pub fn t_point_mass() -> ExactRational {
    let mut dist: BTreeMap<ExactRational, ExactRational> = BTreeMap::new();
    let mut accepted = 0i64;
    for c in 1..=MAX_DENOMINATOR as i64 {
        for d in 1..=MAX_DENOMINATOR as i64 {
            if c <= 2 * d {
                accepted += 1;
                *dist.entry(rat(c, d)).or_insert_with(|| rat(0, 1)) += rat(1, 1);
            }
        }
    }
    max_mass(dist) / rat(accepted, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed, Zero};

    #[test]
    fn splitmix_reference_values() {
        // published first outputs of SplitMix64 seeded with 0
        let mut g = SplitMix64::new(0);
        assert_eq!(g.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(g.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn seed_zero_first_point_is_pinned() {
        let pts = sample_points(0, 1);
        assert_eq!(pts[0], (rat(13, 18), rat(16, 45)));
    }

    #[test]
    fn points_respect_ranges_and_repeat() {
        for seed in [0u64, 1, 42, u64::MAX] {
            let a = sample_points(seed, 50);
            assert_eq!(a, sample_points(seed, 50));
            for (q, t) in &a {
                assert!(q.is_positive() && q < &ExactRational::one());
                assert!(t.is_positive() && t <= &rat(2, 1));
            }
            for (q, b) in sample_q_b(seed, 50) {
                assert!(q.is_positive() && q < ExactRational::one());
                assert!(b.abs() < ExactRational::one());
            }
        }
    }

    #[test]
    fn point_masses() {
        // q = 1/2 collects every even denominator
        let m = q_point_mass();
        let expected = (1..=32).fold(ExactRational::zero(), |acc, k| {
            acc + rat(1, 63 * (2 * k - 1))
        });
        assert_eq!(m, expected);
        assert!(t_point_mass() < rat(1, 20));
    }
}
