//! Lexicographic enumeration of `r`-tuples of non-negative indices.

/// Tuple `(j_1, …, j_r)`; index `l - 1` holds `j_l`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&j| j as u64).sum()
    }

    /// `Σ_l c(l) j_l` with `l` starting at 1.
    pub fn weighted(&self, c: impl Fn(i64) -> i64) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &j)| c(i as i64 + 1) * j as i64)
            .sum()
    }
}

/// All tuples in `[0, bound)^r` in lexicographic order.
pub fn box_indices(bound: u32, r: usize) -> impl Iterator<Item = MultiIndex> {
    let mut next = (bound > 0).then(|| vec![0u32; r]);
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        // odometer: bump the last coordinate, carry leftwards
        let mut pos = r;
        while pos > 0 {
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < bound {
                next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(MultiIndex(cur))
    })
}

/// All tuples of length `r` with entries summing to `total`, lexicographic.
pub fn compositions(total: u32, r: usize) -> Vec<MultiIndex> {
    fn go(rest: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if slots == 1 {
            prefix.push(rest);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for j in 0..=rest {
            prefix.push(j);
            go(rest - j, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        if total == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    go(total, r, &mut Vec::with_capacity(r), &mut out);
    out
}

/// Number of points in `[0, bound)^r`, saturating.
pub fn box_size(bound: u64, r: u32) -> u128 {
    (bound as u128).saturating_pow(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_is_lexicographic_and_complete() {
        let all: Vec<_> = box_indices(3, 2).map(|m| m.0).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[8], vec![2, 2]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(box_indices(1, 3).count(), 1);
        assert_eq!(box_indices(0, 2).count(), 0);
    }

    #[test]
    fn compositions_count_matches_stars_and_bars() {
        for r in 1..=4usize {
            for s in 0..7u32 {
                let c = compositions(s, r);
                let expected = crate::arith::binomial(s as i64 + r as i64 - 1, r as i64 - 1);
                assert_eq!(num_bigint::BigInt::from(c.len()), expected);
                assert!(c.iter().all(|m| m.total() == s as u64));
                assert!(c.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn weighted_sum_uses_one_based_slots() {
        let m = MultiIndex(vec![2, 1, 3]);
        assert_eq!(m.weighted(|l| l), 2 + 2 + 9);
        assert_eq!(m.total(), 6);
    }
}
