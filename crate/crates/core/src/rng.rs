//! Seeded pseudo-random source for reproducible corpora.
//!
//! The generator is xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`). Derived draws are pinned here so
//! that another implementation can reproduce the same digraphs:
//!
//! - `below(m)`: Lemire's widening-multiply method with rejection, taking
//!   the high 64 bits of `next_u64() * m`.
//! - `unit()`: `(next_u64() >> 11) * 2^-53`.
//! - `coin(p)`: `unit() < p`.
//! - `shuffle`: Fisher-Yates from the back, `j = below(i + 1)`.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

#[derive(Debug, Clone)]
pub struct Rng64(Xoshiro256PlusPlus);

impl Rng64 {
    pub fn new(seed: u64) -> Self {
        Rng64(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..m`. `m` must be positive.
    pub fn below(&mut self, m: usize) -> usize {
        assert!(m > 0);
        let m = m as u64;
        let threshold = m.wrapping_neg() % m;
        loop {
            let x = self.next_u64();
            let wide = (x as u128) * (m as u128);
            if (wide as u64) >= threshold {
                return (wide >> 64) as usize;
            }
        }
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i + 1);
            xs.swap(i, j);
        }
    }

    /// `count` distinct values from `0..m`, in draw order.
    pub fn sample_distinct(&mut self, m: usize, count: usize) -> Vec<usize> {
        assert!(count <= m);
        let mut pool: Vec<usize> = (0..m).collect();
        for i in 0..count {
            let j = i + self.below(m - i);
            pool.swap(i, j);
        }
        pool.truncate(count);
        pool
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let mut a = Rng64::new(42);
        let mut b = Rng64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn below_in_range() {
        let mut r = Rng64::new(1);
        let mut hits = [0usize; 7];
        for _ in 0..7000 {
            hits[r.below(7)] += 1;
        }
        assert!(hits.iter().all(|&h| h > 800 && h < 1200), "{hits:?}");
    }

    #[test]
    fn sample_distinct_is_distinct() {
        let mut r = Rng64::new(9);
        let mut s = r.sample_distinct(20, 10);
        s.sort();
        s.dedup();
        assert_eq!(s.len(), 10);
    }
}
