use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{AffinePiece, MaxAffineFn};
use crate::error::{check_dim, Error, Result};
use crate::lp::{Domain, Lp, LpResult, Sense};
use crate::num::{self, Rational, Vector};

/// A value in `ℝ ∪ {+∞}`. `+∞` is an outcome, never an operand.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    Finite(Rational),
    PosInfinity,
}

impl Extended {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(x) => Some(x),
            Extended::PosInfinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::PosInfinity)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{}", num::show(x)),
            Extended::PosInfinity => write!(f, "+inf"),
        }
    }
}

/// The compact-domain convex function `⌊K⌋(x) = inf{t : (x, t) ∈ K}` of a
/// rational polytope `K ⊂ ℝⁿ⁺¹`.
///
/// Only the vertices of the lower envelope of `K` matter; the stored list
/// holds exactly those, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLifted", into = "RawLifted")]
pub struct LiftedPolytope {
    dim: usize,
    vertices: Vec<Vector>,
}

/// File form: `dim` is the base dimension `n`; vertices have `n + 1` entries.
#[derive(Serialize, Deserialize)]
struct RawLifted {
    dim: usize,
    #[serde(with = "num::serde_vectors")]
    vertices: Vec<Vector>,
}

impl TryFrom<RawLifted> for LiftedPolytope {
    type Error = Error;

    fn try_from(raw: RawLifted) -> Result<Self> {
        floor_map(raw.dim, raw.vertices)
    }
}

impl From<LiftedPolytope> for RawLifted {
    fn from(g: LiftedPolytope) -> Self {
        RawLifted {
            dim: g.dim,
            vertices: g.vertices,
        }
    }
}

impl LiftedPolytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Lower-envelope vertices `(x, t)` in `ℝⁿ⁺¹`.
    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// `𝟙_{v}^∞ + t`.
    pub fn point(v: Vector, t: Rational) -> Self {
        let dim = v.len();
        let mut p = v;
        p.push(t);
        LiftedPolytope {
            dim,
            vertices: vec![p],
        }
    }

    /// Evaluates `⌊K⌋(x)`, `+∞` outside the projection of `K`.
    pub fn eval(&self, x: &[Rational]) -> Result<Extended> {
        check_dim(self.dim, x.len())?;
        let n = self.dim;
        if self.vertices.len() == 1 {
            let v = &self.vertices[0];
            return Ok(if v[..n] == *x {
                Extended::Finite(v[n].clone())
            } else {
                Extended::PosInfinity
            });
        }
        // minimize Σ λ_k t_k  s.t.  Σ λ_k v_k = x, Σ λ_k = 1, λ ≥ 0
        let m = self.vertices.len();
        let objective: Vector = self.vertices.iter().map(|v| -v[n].clone()).collect();
        let mut lp = Lp::new(vec![Domain::NonNeg; m], objective);
        for i in 0..n {
            let row = self.vertices.iter().map(|v| v[i].clone()).collect();
            lp.constraint(row, Sense::Eq, x[i].clone());
        }
        lp.constraint(vec![Rational::one(); m], Sense::Eq, Rational::one());
        Ok(match lp.maximize() {
            LpResult::Optimal { value, .. } => Extended::Finite(-value),
            LpResult::Infeasible => Extended::PosInfinity,
            LpResult::Unbounded => unreachable!("lambda ranges over a simplex"),
        })
    }

    /// Vertices of the (compact) domain, possibly with repeats removed.
    pub fn domain_points(&self) -> Vec<Vector> {
        let mut pts: Vec<Vector> = self.vertices.iter().map(|v| v[..self.dim].to_vec()).collect();
        pts.sort();
        pts.dedup();
        pts
    }
}

impl fmt::Display for LiftedPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| num::show_vec(v)).collect();
        write!(f, "floor(conv{{{}}})", vs.join(", "))
    }
}

/// Canonicalizes `K` (given by any finite generating set) to its
/// lower-envelope vertices.
pub fn floor_map(dim: usize, points: Vec<Vector>) -> Result<LiftedPolytope> {
    if points.is_empty() {
        return Err(Error::Empty("vertex list"));
    }
    for p in &points {
        check_dim(dim + 1, p.len())?;
    }
    // lower-envelope vertices of K are the lifted points of the pruned
    // pieces x ↦ ⟨v, x⟩ − t
    let pieces = points
        .into_iter()
        .map(|mut p| {
            let t = p.pop().expect("dim + 1 >= 1");
            AffinePiece::new(p, -t)
        })
        .collect();
    let f = MaxAffineFn::new(dim, pieces)?;
    Ok(lifted_of(&f))
}

fn lifted_of(f: &MaxAffineFn) -> LiftedPolytope {
    let mut vertices: Vec<Vector> = f
        .pieces()
        .iter()
        .map(|p| {
            let mut v = p.slope.clone();
            v.push(-p.offset.clone());
            v
        })
        .collect();
    vertices.sort();
    LiftedPolytope {
        dim: f.dim(),
        vertices,
    }
}

/// Legendre transform of a max-affine function: `⌊conv{(aᵢ, −bᵢ)}⌋`.
pub fn conjugate(f: &MaxAffineFn) -> LiftedPolytope {
    lifted_of(f)
}

/// Legendre transform of `⌊K⌋`: `x ↦ max over vertices (v, t) of ⟨v, x⟩ − t`.
pub fn conjugate_cd(g: &LiftedPolytope) -> MaxAffineFn {
    let n = g.dim;
    let pieces = g
        .vertices
        .iter()
        .map(|v| AffinePiece::new(v[..n].to_vec(), -v[n].clone()))
        .collect();
    MaxAffineFn::from_pruned(n, pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, int, vec_of};

    #[test]
    fn affine_conjugate_is_shifted_indicator() {
        let f = MaxAffineFn::affine(vec_of(&[2, -1]), int(3));
        let g = conjugate(&f);
        assert_eq!(g, LiftedPolytope::point(vec_of(&[2, -1]), int(-3)));
        assert_eq!(g.eval(&vec_of(&[2, -1])).unwrap(), Extended::Finite(int(-3)));
        assert_eq!(g.eval(&vec_of(&[2, 0])).unwrap(), Extended::PosInfinity);
        assert_eq!(conjugate_cd(&g), f);
    }

    #[test]
    fn abs_conjugate_is_interval_indicator() {
        let f = MaxAffineFn::new(
            1,
            vec![AffinePiece::new(vec_of(&[1]), int(0)), AffinePiece::new(vec_of(&[-1]), int(0))],
        )
        .unwrap();
        let g = conjugate(&f);
        assert_eq!(g.vertices(), &[vec_of(&[-1, 0]), vec_of(&[1, 0])]);
        for k in -4..=4 {
            let y = frac(k, 4);
            assert_eq!(g.eval(&[y]).unwrap(), Extended::Finite(int(0)));
        }
        assert!(g.eval(&[frac(5, 4)]).unwrap().is_infinite());
        assert_eq!(conjugate_cd(&g), f);
    }

    #[test]
    fn conjugate_matches_supremum_oracle() {
        // f = max(x, 2x - 1); f*(y) = sup_x yx - f(x) over a fine grid
        let f = MaxAffineFn::new(
            1,
            vec![AffinePiece::new(vec_of(&[1]), int(0)), AffinePiece::new(vec_of(&[2]), int(-1))],
        )
        .unwrap();
        let g = conjugate(&f);
        for (y, expected) in [(frac(1, 1), int(0)), (frac(2, 1), int(1)), (frac(3, 2), frac(1, 2))] {
            // the supremum is attained at the kink x = 1, which lies on the grid
            let sup = (-400..=400)
                .map(|k| {
                    let x = frac(k, 100);
                    &y * &x - f.eval(&[x]).unwrap()
                })
                .max()
                .unwrap();
            assert_eq!(sup, expected);
            assert_eq!(g.eval(&[y]).unwrap(), Extended::Finite(expected));
        }
    }

    #[test]
    fn floor_of_triangle_and_box() {
        // K = conv{(0,0),(1,0),(0,1)}: floor is 0 on [0,1]
        let k = floor_map(1, vec![vec_of(&[0, 0]), vec_of(&[1, 0]), vec_of(&[0, 1])]).unwrap();
        assert_eq!(k.vertices(), &[vec_of(&[0, 0]), vec_of(&[1, 0])]);
        assert_eq!(k.eval(&[frac(1, 3)]).unwrap(), Extended::Finite(int(0)));
        assert!(k.eval(&[int(2)]).unwrap().is_infinite());
        let square = floor_map(
            1,
            vec![vec_of(&[0, 0]), vec_of(&[1, 0]), vec_of(&[0, 1]), vec_of(&[1, 1])],
        )
        .unwrap();
        assert_eq!(square, k);
        let single = floor_map(2, vec![vec_of(&[1, 2, 5])]).unwrap();
        assert_eq!(single, LiftedPolytope::point(vec_of(&[1, 2]), int(5)));
        assert_eq!(floor_map(1, vec![]), Err(Error::Empty("vertex list")));
    }
}
