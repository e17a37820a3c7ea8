//! Finite polyhedral convex functions and their Legendre duals.
//!
//! A [`MaxAffineFn`] is `x ↦ maxᵢ (⟨aᵢ, x⟩ + bᵢ)`. Values of the type are
//! always pruned and canonically ordered, so `==` is equality of functions.
//! Its conjugate is the lower envelope of the polytope spanned by the lifted
//! points `(aᵢ, −bᵢ)`, represented by [`LiftedPolytope`].

mod lifted;
mod matrix;
mod min_convex;
mod prune;

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::num::{self, Rational, Vector};

pub use lifted::{conjugate, conjugate_cd, floor_map, Extended, LiftedPolytope};
pub use matrix::RationalMatrix;
pub use min_convex::{is_min_convex, min_hull_eval, MinConvexity};
pub use prune::{prune_pieces, MAX_DIM};

/// One affine function `x ↦ ⟨slope, x⟩ + offset`. Ordering is lexicographic
/// on `(slope, offset)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AffinePiece {
    #[serde(rename = "a", with = "num::serde_vector")]
    pub slope: Vector,
    #[serde(rename = "b", with = "num::serde_rational")]
    pub offset: Rational,
}

impl AffinePiece {
    pub fn new(slope: Vector, offset: Rational) -> Self {
        AffinePiece { slope, offset }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        num::dot(&self.slope, x) + &self.offset
    }

    pub fn dim(&self) -> usize {
        self.slope.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFn", into = "RawFn")]
pub struct MaxAffineFn {
    dim: usize,
    pieces: Vec<AffinePiece>,
}

#[derive(Serialize, Deserialize)]
struct RawFn {
    dim: usize,
    pieces: Vec<AffinePiece>,
}

impl TryFrom<RawFn> for MaxAffineFn {
    type Error = Error;

    fn try_from(raw: RawFn) -> Result<Self> {
        MaxAffineFn::new(raw.dim, raw.pieces)
    }
}

impl From<MaxAffineFn> for RawFn {
    fn from(f: MaxAffineFn) -> Self {
        RawFn {
            dim: f.dim,
            pieces: f.pieces,
        }
    }
}

impl MaxAffineFn {
    /// Builds the pointwise maximum of `pieces`, pruning redundant ones.
    pub fn new(dim: usize, pieces: Vec<AffinePiece>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Rejected("dimension must be positive".into()));
        }
        if pieces.is_empty() {
            return Err(Error::Empty("piece list"));
        }
        for p in &pieces {
            check_dim(dim, p.dim())?;
        }
        let pieces = prune_pieces(dim, pieces)?;
        Ok(MaxAffineFn { dim, pieces })
    }

    /// Wraps pieces already known to be pruned; only sorts them.
    pub(crate) fn from_pruned(dim: usize, mut pieces: Vec<AffinePiece>) -> Self {
        debug_assert!(!pieces.is_empty());
        pieces.sort();
        MaxAffineFn { dim, pieces }
    }

    pub fn affine(slope: Vector, offset: Rational) -> Self {
        let dim = slope.len();
        MaxAffineFn {
            dim,
            pieces: vec![AffinePiece::new(slope, offset)],
        }
    }

    pub fn from_piece(p: AffinePiece) -> Self {
        Self::affine(p.slope, p.offset)
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::affine(num::zeros(dim), c)
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(dim, Rational::zero())
    }

    /// `max(⟨u, x⟩ − t, 0)`.
    pub fn hinge(u: Vector, t: Rational) -> Result<Self> {
        let dim = u.len();
        Self::new(
            dim,
            vec![AffinePiece::new(u, -t), AffinePiece::new(num::zeros(dim), Rational::zero())],
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_affine(&self) -> bool {
        self.pieces.len() == 1
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        check_dim(self.dim, x.len())?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[Rational]) -> Rational {
        self.pieces
            .iter()
            .map(|p| p.eval(x))
            .max()
            .expect("nonempty piece list")
    }

    pub fn at_origin(&self) -> Rational {
        self.pieces
            .iter()
            .map(|p| p.offset.clone())
            .max()
            .expect("nonempty piece list")
    }

    /// Pointwise sum.
    pub fn add(&self, other: &MaxAffineFn) -> Result<MaxAffineFn> {
        check_dim(self.dim, other.dim)?;
        Ok(prune::sum_pruned(self, other))
    }

    /// `λ·f` for `λ ≥ 0`.
    pub fn scale(&self, lambda: &Rational) -> Result<MaxAffineFn> {
        if lambda.is_negative() {
            return Err(Error::NegativeScale);
        }
        if lambda.is_zero() {
            return Ok(Self::zero(self.dim));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| AffinePiece::new(num::scale(&p.slope, lambda), &p.offset * lambda))
            .collect();
        Ok(Self::from_pruned(self.dim, pieces))
    }

    /// Pointwise maximum.
    pub fn max_of(&self, other: &MaxAffineFn) -> Result<MaxAffineFn> {
        check_dim(self.dim, other.dim)?;
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        MaxAffineFn::new(self.dim, pieces)
    }

    /// `x ↦ f(g·x)`.
    pub fn compose_linear(&self, g: &RationalMatrix) -> Result<MaxAffineFn> {
        check_dim(self.dim, g.dim())?;
        let gt = g.transpose();
        let pieces: Vec<AffinePiece> = self
            .pieces
            .iter()
            .map(|p| AffinePiece::new(gt.apply(&p.slope).expect("square"), p.offset.clone()))
            .collect();
        if g.det().is_zero() {
            MaxAffineFn::new(self.dim, pieces)
        } else {
            Ok(Self::from_pruned(self.dim, pieces))
        }
    }

    /// `x ↦ f(s·x)` for a nonzero scalar `s`.
    pub fn compose_scalar(&self, s: &Rational) -> MaxAffineFn {
        assert!(!s.is_zero(), "compose_scalar needs s != 0");
        let pieces = self
            .pieces
            .iter()
            .map(|p| AffinePiece::new(num::scale(&p.slope, s), p.offset.clone()))
            .collect();
        Self::from_pruned(self.dim, pieces)
    }

    /// Adds the affine function `⟨v, x⟩ + β` to every piece.
    pub fn add_affine(&self, v: &[Rational], beta: &Rational) -> Result<MaxAffineFn> {
        check_dim(self.dim, v.len())?;
        let pieces = self
            .pieces
            .iter()
            .map(|p| AffinePiece::new(num::add(&p.slope, v), &p.offset + beta))
            .collect();
        Ok(Self::from_pruned(self.dim, pieces))
    }

    /// Exact midpoint convexity at a pair of points, as a sanity probe.
    pub fn midpoint_convex_at(&self, x: &[Rational], y: &[Rational]) -> Result<bool> {
        let half = num::frac(1, 2);
        let mid: Vector = num::scale(&num::add(x, y), &half);
        let lhs = self.eval(&mid)?;
        let rhs = (self.eval(x)? + self.eval(y)?) * half;
        Ok(lhs <= rhs)
    }

    pub fn is_constant(&self) -> bool {
        self.pieces.len() == 1 && num::is_zero_vec(&self.pieces[0].slope)
    }
}

impl fmt::Display for MaxAffineFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|p| format!("<{}, x> + {}", num::show_vec(&p.slope), num::show(&p.offset)))
            .collect();
        write!(f, "max{{{}}}", parts.join("; "))
    }
}

/// Evaluates the raw maximum of a piece list without pruning.
pub fn eval_pieces(pieces: &[AffinePiece], x: &[Rational]) -> Rational {
    pieces
        .iter()
        .map(|p| p.eval(x))
        .max()
        .expect("nonempty piece list")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, int, vec_of};

    fn piece(a: &[i64], b: i64) -> AffinePiece {
        AffinePiece::new(vec_of(a), int(b))
    }

    fn abs1() -> MaxAffineFn {
        MaxAffineFn::new(1, vec![piece(&[1], 0), piece(&[-1], 0)]).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = MaxAffineFn::new(2, vec![piece(&[1, 0], 1), piece(&[-1, 0], 0), piece(&[0, 1], 0)])
            .unwrap();
        // direct-evaluation oracle: max(1+1, -1, 0)
        assert_eq!(f.eval(&vec_of(&[1, 0])).unwrap(), int(2));
        assert_eq!(abs1().eval(&vec_of(&[0])).unwrap(), int(0));
        let l = MaxAffineFn::affine(vec![frac(1, 2), int(-3)], int(7));
        assert_eq!(l.eval(&vec_of(&[2, 1])).unwrap(), int(5));
        assert!(matches!(
            f.eval(&vec_of(&[1])),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn add_examples() {
        let pos = MaxAffineFn::hinge(vec_of(&[1]), int(0)).unwrap();
        let negpart = MaxAffineFn::hinge(vec_of(&[-1]), int(0)).unwrap();
        let sum = pos.add(&negpart).unwrap();
        assert_eq!(sum, abs1());
        assert_eq!(sum.len(), 2);
        // grid oracle
        for k in -6..=6 {
            let x = vec![frac(k, 2)];
            assert_eq!(sum.eval(&x).unwrap(), pos.eval(&x).unwrap() + negpart.eval(&x).unwrap());
        }
        assert_eq!(abs1().add(&MaxAffineFn::zero(1)).unwrap(), abs1());
        let shifted = abs1().add(&MaxAffineFn::affine(vec_of(&[2]), int(3))).unwrap();
        let expected = MaxAffineFn::new(1, vec![piece(&[3], 3), piece(&[1], 3)]).unwrap();
        assert_eq!(shifted, expected);
    }

    #[test]
    fn scale_examples() {
        assert_eq!(abs1().scale(&int(0)).unwrap(), MaxAffineFn::zero(1));
        assert_eq!(abs1().scale(&int(1)).unwrap(), abs1());
        assert_eq!(abs1().scale(&int(2)).unwrap().eval(&vec_of(&[3])).unwrap(), int(6));
        assert_eq!(abs1().scale(&int(-1)), Err(Error::NegativeScale));
    }

    #[test]
    fn max_examples() {
        let f = abs1();
        assert_eq!(f.max_of(&f).unwrap(), f);
        let a = MaxAffineFn::hinge(vec_of(&[1]), int(1)).unwrap();
        let b = MaxAffineFn::hinge(vec_of(&[-1]), int(-1)).unwrap();
        let m = a.max_of(&b).unwrap();
        for k in -8..=8 {
            let x = frac(k, 3);
            assert_eq!(m.eval(&[x.clone()]).unwrap(), (x - int(1)).abs());
        }
        let dominated = MaxAffineFn::constant(1, int(-5));
        assert_eq!(f.max_of(&dominated).unwrap(), f);
    }

    #[test]
    fn compose_examples() {
        let f = MaxAffineFn::hinge(vec_of(&[1, 0, 0]), int(0)).unwrap();
        assert_eq!(f.compose_linear(&RationalMatrix::identity(3)).unwrap(), f);
        let g = RationalMatrix::shear(3, 0, 1, int(1));
        let fg = f.compose_linear(&g).unwrap();
        assert_eq!(fg, MaxAffineFn::hinge(vec_of(&[1, 1, 0]), int(0)).unwrap());
        let back = fg.compose_linear(&g.inverse().unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
