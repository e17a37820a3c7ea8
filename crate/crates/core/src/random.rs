//! Seeded generators for small exact test inputs.
//!
//! Each trial draws from its own ChaCha stream keyed by `(seed, trial)`, so
//! results do not depend on scheduling.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convex::{AffinePiece, MaxAffineFn, RationalMatrix};
use crate::num::{self, Rational, Vector};
use crate::polytope::Polytope;
use crate::valuation::{DiscreteMeasure, Group};

pub const MAX_PIECES: usize = 8;
pub const MAX_NUMERATOR: i64 = 8;
pub const MAX_DENOMINATOR: i64 = 4;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        Sampler { rng }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// Uniform on `[0, 1)`, for floating-point oracles.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen()
    }

    /// A fresh seed for a nested seeded check.
    pub fn child_seed(&mut self) -> u64 {
        self.rng.gen()
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen()
    }

    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        items.choose(&mut self.rng).expect("nonempty choice")
    }

    /// `p/q` with `|p| ≤ 8`, `1 ≤ q ≤ 4`.
    pub fn rational(&mut self) -> Rational {
        let p = self.range(-MAX_NUMERATOR, MAX_NUMERATOR);
        let q = self.range(1, MAX_DENOMINATOR);
        num::frac(p, q)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if r != num::int(0) {
                return r;
            }
        }
    }

    pub fn positive_rational(&mut self) -> Rational {
        let p = self.range(1, MAX_NUMERATOR);
        let q = self.range(1, MAX_DENOMINATOR);
        num::frac(p, q)
    }

    /// A rational in `[−bound, bound]` with denominator at most 4.
    pub fn rational_within(&mut self, bound: i64) -> Rational {
        let q = self.range(1, MAX_DENOMINATOR);
        num::frac(self.range(-bound * q, bound * q), q)
    }

    pub fn vector(&mut self, dim: usize) -> Vector {
        (0..dim).map(|_| self.rational()).collect()
    }

    pub fn nonzero_vector(&mut self, dim: usize) -> Vector {
        loop {
            let v = self.vector(dim);
            if !num::is_zero_vec(&v) {
                return v;
            }
        }
    }

    pub fn piece(&mut self, dim: usize) -> AffinePiece {
        AffinePiece::new(self.vector(dim), self.rational())
    }

    /// A pruned max-affine function with at most eight pieces before pruning.
    pub fn max_affine(&mut self, dim: usize) -> MaxAffineFn {
        self.max_affine_with(dim, MAX_PIECES)
    }

    pub fn max_affine_with(&mut self, dim: usize, max_pieces: usize) -> MaxAffineFn {
        let k = self.range(1, max_pieces as i64) as usize;
        let pieces = (0..k).map(|_| self.piece(dim)).collect();
        MaxAffineFn::new(dim, pieces).expect("sampled dimension within limits")
    }

    /// A word of at most four elementary shears with parameters in `[−3, 3]`;
    /// for `GL` a random diagonal map is appended.
    pub fn group_element(&mut self, dim: usize, group: Group) -> RationalMatrix {
        let mut g = RationalMatrix::identity(dim);
        if dim >= 2 {
            let len = self.range(1, 4);
            for _ in 0..len {
                let i = self.below(dim);
                let mut j = self.below(dim - 1);
                if j >= i {
                    j += 1;
                }
                let t = self.rational_within(3);
                g = g.mul(&RationalMatrix::shear(dim, i, j, t)).expect("same dimension");
            }
        }
        if group == Group::GL {
            let d: Vector = (0..dim).map(|_| self.nonzero_rational()).collect();
            g = g.mul(&RationalMatrix::diagonal(d)).expect("same dimension");
        }
        g
    }

    fn distinct_positions(&mut self, k: usize) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::with_capacity(k);
        while out.len() < k {
            let s = self.positive_rational();
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }

    /// A measure with `Σ w/s = 0`: positive atoms balanced by one negative atom.
    pub fn balanced_measure(&mut self) -> DiscreteMeasure {
        let k = self.range(1, 3) as usize;
        let pos = self.distinct_positions(k);
        let mut atoms: Vec<(Rational, Rational)> =
            pos.into_iter().map(|s| (s, self.positive_rational())).collect();
        let m = atoms.iter().fold(num::int(0), |acc, (s, w)| acc + w / s);
        let s_neg = -self.positive_rational();
        let w_neg = -&s_neg * m;
        atoms.push((s_neg, w_neg));
        DiscreteMeasure::new(atoms).expect("distinct signed positions")
    }

    /// A measure with only positive atoms, so `Σ w/s > 0`.
    pub fn unbalanced_measure(&mut self) -> DiscreteMeasure {
        let k = self.range(1, 3) as usize;
        let pos = self.distinct_positions(k);
        let atoms = pos.into_iter().map(|s| (s, self.positive_rational())).collect();
        DiscreteMeasure::new(atoms).expect("distinct positions")
    }

    /// A full-dimensional polytope: a random cloud that includes a simplex.
    pub fn polytope(&mut self, dim: usize, extra_points: usize) -> Polytope {
        loop {
            let pts: Vec<Vector> = (0..dim + 1 + extra_points).map(|_| self.vector(dim)).collect();
            let p = Polytope::hull(pts).expect("dimension within limits");
            if p.is_full_dimensional() {
                return p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<Rational> = {
            let mut s = Sampler::for_trial(7, 3);
            (0..10).map(|_| s.rational()).collect()
        };
        let b: Vec<Rational> = {
            let mut s = Sampler::for_trial(7, 3);
            (0..10).map(|_| s.rational()).collect()
        };
        let c: Vec<Rational> = {
            let mut s = Sampler::for_trial(7, 4);
            (0..10).map(|_| s.rational()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn group_words_have_expected_determinant() {
        let mut s = Sampler::for_trial(1, 0);
        for _ in 0..20 {
            assert_eq!(s.group_element(3, Group::SL).det(), num::int(1));
            assert!(!s.group_element(3, Group::GL).det().is_zero());
        }
    }

    #[test]
    fn measure_moments_by_construction() {
        let mut s = Sampler::for_trial(2, 0);
        for _ in 0..20 {
            assert!(s.balanced_measure().moment().is_zero());
            assert!(s.unbalanced_measure().moment() > num::int(0));
        }
    }
}
