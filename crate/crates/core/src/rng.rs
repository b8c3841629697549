//! Seeded 64-bit linear congruential generator for reproducible trials.
//!
//! state ← state · 6364136223846793005 + 1442695040888963407 (mod 2^64),
//! starting from state = seed. Each draw advances once and returns the new
//! state. `below(b)` maps the high 32 bits into [0, b) as
//! ((x >> 32) · b) >> 32.

use crate::field::Gf;

pub const MULTIPLIER: u64 = 6364136223846793005;
pub const INCREMENT: u64 = 1442695040888963407;

#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        self.state
    }

    /// Uniform-ish integer in [0, bound); `bound` must fit in 32 bits.
    pub fn below(&mut self, bound: u32) -> u32 {
        (((self.next_u64() >> 32) * bound as u64) >> 32) as u32
    }

    /// A random error of symplectic weight exactly `weight` in GF(2^r)^{2n}.
    ///
    /// Positions come from a partial Fisher–Yates shuffle of 0..n (step i
    /// swaps i with i + below(n − i)); then, per chosen position in draw
    /// order, v = 1 + below(q² − 1) gives (e_i, e_{n+i}) = (v >> r, v & (q − 1)).
    pub fn symplectic_error(&mut self, n: usize, weight: usize, r: u32) -> Vec<Gf> {
        assert!(weight <= n, "weight {weight} exceeds n = {n}");
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..weight {
            let j = i + self.below((n - i) as u32) as usize;
            idx.swap(i, j);
        }
        let q = 1u32 << r;
        let mut e = vec![Gf::ZERO; 2 * n];
        for &pos in &idx[..weight] {
            let v = 1 + self.below(q * q - 1);
            e[pos] = Gf((v >> r) as u16);
            e[n + pos] = Gf((v & (q - 1)) as u16);
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::weight;

    #[test]
    fn first_outputs() {
        let mut g = Lcg::new(0);
        assert_eq!(g.next_u64(), INCREMENT);
        assert_eq!(g.next_u64(), INCREMENT.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT));
    }

    #[test]
    fn below_range_and_determinism() {
        let mut a = Lcg::new(7);
        let mut b = Lcg::new(7);
        for _ in 0..1000 {
            let x = a.below(10);
            assert!(x < 10);
            assert_eq!(x, b.below(10));
        }
    }

    #[test]
    fn planted_weight() {
        let mut g = Lcg::new(42);
        for w in 0..=8 {
            let e = g.symplectic_error(8, w, 4);
            assert_eq!(weight(&e), w);
            assert!(e.iter().all(|x| x.0 < 16));
        }
    }
}
