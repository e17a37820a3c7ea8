use num_traits::{One, Signed};

use super::prune::{strictly_maximal, Cleared};
use super::{conjugate, AffinePiece, Extended, MaxAffineFn};
use crate::error::{check_dim, Result};
use crate::lp::{Domain, Lp, LpResult, Sense};
use crate::num::{self, Rational, Vector};

/// Outcome of [`is_min_convex`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinConvexity {
    pub convex: bool,
    /// The convex hull of `min{f, h}`, which then equals `min{f, h}`.
    /// Present only when `convex` holds.
    pub hull: Option<MaxAffineFn>,
    /// A point where `min{f, h}` exceeds every affine piece of `f` or `h`
    /// lying below both functions; proves non-convexity.
    pub witness: Option<Vector>,
}

/// Decides whether `min{f, h}` is convex.
///
/// If it is, it equals the maximum `G` of those pieces of `f` and `h` that
/// lie below both functions, since every linearity piece of a convex
/// `min{f, h}` is a piece of `f` or `h`. A piece `p` lies below `h` iff the
/// lifted point `(a_p, −b_p)` is in the epigraph of `h*`, which is checked
/// on the conjugate side. Then `min{f, h} = G` iff no pair of pieces
/// `(fᵢ, hⱼ)` simultaneously exceeds `G` at some point.
pub fn is_min_convex(f: &MaxAffineFn, h: &MaxAffineFn) -> Result<MinConvexity> {
    check_dim(f.dim(), h.dim())?;
    let (fs, hs) = (conjugate(f), conjugate(h));
    let below = |p: &AffinePiece, dual: &super::LiftedPolytope| -> Result<bool> {
        Ok(match dual.eval(&p.slope)? {
            Extended::Finite(v) => v <= -p.offset.clone(),
            Extended::PosInfinity => false,
        })
    };
    let mut candidates = Vec::new();
    for p in f.pieces() {
        if below(p, &hs)? {
            candidates.push(p.clone());
        }
    }
    for p in h.pieces() {
        if below(p, &fs)? {
            candidates.push(p.clone());
        }
    }
    if candidates.is_empty() {
        let witness = probe_points(f.dim())
            .into_iter()
            .find(|x| match min_hull_eval(f, h, x) {
                Ok(Some(v)) => v < min_at(f, h, x),
                Ok(None) => true,
                Err(_) => false,
            });
        return Ok(MinConvexity {
            convex: false,
            hull: None,
            witness,
        });
    }
    let g = MaxAffineFn::new(f.dim(), candidates)?;
    let outside = |fun: &MaxAffineFn| -> Vec<AffinePiece> {
        fun.pieces()
            .iter()
            .filter(|p| g.pieces().binary_search(p).is_err())
            .cloned()
            .collect()
    };
    let (fo, ho) = (outside(f), outside(h));
    for fi in &fo {
        for hj in &ho {
            if let Some(x) = exceeds_together(&g, fi, hj) {
                return Ok(MinConvexity {
                    convex: false,
                    hull: None,
                    witness: Some(x),
                });
            }
        }
    }
    Ok(MinConvexity {
        convex: true,
        hull: Some(g),
        witness: None,
    })
}

fn min_at(f: &MaxAffineFn, h: &MaxAffineFn, x: &[Rational]) -> Rational {
    std::cmp::min(f.eval_unchecked(x), h.eval_unchecked(x))
}

fn probe_points(dim: usize) -> Vec<Vector> {
    let mut pts = vec![num::zeros(dim)];
    for i in 0..dim {
        pts.push(num::unit(dim, i));
        pts.push(num::neg(&num::unit(dim, i)));
    }
    pts
}

/// A point where both `a` and `b` are strictly above `g`, if any.
fn exceeds_together(g: &MaxAffineFn, a: &AffinePiece, b: &AffinePiece) -> Option<Vector> {
    let with = |top: &AffinePiece| {
        let mut pieces = g.pieces().to_vec();
        pieces.push(top.clone());
        Cleared::new(&pieces)
    };
    let last = g.len();
    if !strictly_maximal(&[(&with(a), last), (&with(b), last)]) {
        return None;
    }
    let dim = g.dim();
    let mut objective = num::zeros(dim + 1);
    objective[dim] = Rational::one();
    let mut lp = Lp::new(vec![Domain::Free; dim + 1], objective);
    for top in [a, b] {
        for gk in g.pieces() {
            // ⟨g_k − top, x⟩ + z ≤ b_top − c_k
            let mut row = num::sub(&gk.slope, &top.slope);
            row.push(Rational::one());
            lp.constraint(row, Sense::Le, &top.offset - &gk.offset);
        }
    }
    lp.constraint(num::unit(dim + 1, dim), Sense::Le, Rational::one());
    match lp.maximize() {
        LpResult::Optimal { value, mut x } if value.is_positive() => {
            x.truncate(dim);
            Some(x)
        }
        _ => None,
    }
}

/// Evaluates the convex hull of `min{f, h}` at `x` as `(max{f*, h*})*(x)`:
/// `sup_y ⟨x, y⟩ − max{f*(y), h*(y)}`, with both conjugates given by their
/// lifted polytopes. `None` means `−∞` (disjoint conjugate domains).
pub fn min_hull_eval(f: &MaxAffineFn, h: &MaxAffineFn, x: &[Rational]) -> Result<Option<Rational>> {
    check_dim(f.dim(), h.dim())?;
    check_dim(f.dim(), x.len())?;
    let n = f.dim();
    let (fs, hs) = (conjugate(f), conjugate(h));
    let (mf, mh) = (fs.vertices().len(), hs.vertices().len());
    // variables: y (n), τ, μ (mf), μ' (mh)
    let nv = n + 1 + mf + mh;
    let mut domains = vec![Domain::Free; n + 1];
    domains.extend(std::iter::repeat(Domain::NonNeg).take(mf + mh));
    let mut objective = num::zeros(nv);
    for i in 0..n {
        objective[i] = x[i].clone();
    }
    objective[n] = -Rational::one();
    let mut lp = Lp::new(domains, objective);
    for (offset, dual) in [(n + 1, &fs), (n + 1 + mf, &hs)] {
        let verts = dual.vertices();
        for i in 0..n {
            let mut row = num::zeros(nv);
            row[i] = -Rational::one();
            for (k, v) in verts.iter().enumerate() {
                row[offset + k] = v[i].clone();
            }
            lp.constraint(row, Sense::Eq, Rational::from_integer(0.into()));
        }
        let mut row = num::zeros(nv);
        for k in 0..verts.len() {
            row[offset + k] = Rational::one();
        }
        lp.constraint(row, Sense::Eq, Rational::one());
        let mut row = num::zeros(nv);
        row[n] = -Rational::one();
        for (k, v) in verts.iter().enumerate() {
            row[offset + k] = v[n].clone();
        }
        lp.constraint(row, Sense::Le, Rational::from_integer(0.into()));
    }
    Ok(match lp.maximize() {
        LpResult::Optimal { value, .. } => Some(value),
        LpResult::Infeasible => None,
        LpResult::Unbounded => unreachable!("y ranges over a compact set"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, int, vec_of};

    fn abs_shift(c: i64) -> MaxAffineFn {
        MaxAffineFn::new(
            1,
            vec![
                AffinePiece::new(vec_of(&[1]), int(-c)),
                AffinePiece::new(vec_of(&[-1]), int(c)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn separated_absolute_values_are_not_min_convex() {
        let r = is_min_convex(&abs_shift(0), &abs_shift(2)).unwrap();
        assert!(!r.convex);
        let x = r.witness.expect("witness");
        let (f, h) = (abs_shift(0), abs_shift(2));
        assert!(min_hull_eval(&f, &h, &x).unwrap().unwrap() < min_at(&f, &h, &x));
        // midpoint violation at x = 1
        assert_eq!(min_at(&f, &h, &[int(1)]), int(1));
        assert_eq!(min_hull_eval(&f, &h, &[int(1)]).unwrap(), Some(int(0)));
    }

    #[test]
    fn identical_functions_are_min_convex() {
        let f = abs_shift(1);
        let r = is_min_convex(&f, &f).unwrap();
        assert!(r.convex);
        assert_eq!(r.hull, Some(f));
    }

    #[test]
    fn hinge_split_recovers_base() {
        let base = MaxAffineFn::new(
            2,
            vec![
                AffinePiece::new(vec_of(&[1, 1]), int(0)),
                AffinePiece::new(vec_of(&[-1, 0]), int(1)),
            ],
        )
        .unwrap();
        let up = MaxAffineFn::hinge(vec_of(&[0, 1]), int(1)).unwrap();
        let down = MaxAffineFn::hinge(vec_of(&[0, -1]), int(-1)).unwrap();
        let f = base.add(&up).unwrap();
        let h = base.add(&down).unwrap();
        let r = is_min_convex(&f, &h).unwrap();
        assert!(r.convex);
        let hull = r.hull.unwrap();
        assert_eq!(hull, base);
        for (a, b) in [(0, 0), (3, -2), (-1, 5), (2, 1)] {
            let x = vec![frac(a, 2), frac(b, 3)];
            assert_eq!(min_hull_eval(&f, &h, &x).unwrap(), Some(hull.eval(&x).unwrap()));
        }
    }

    #[test]
    fn crossing_lines_have_no_convex_min() {
        let f = MaxAffineFn::affine(vec_of(&[1]), int(0));
        let h = MaxAffineFn::affine(vec_of(&[-1]), int(0));
        let r = is_min_convex(&f, &h).unwrap();
        assert!(!r.convex);
        assert!(r.witness.is_some());
        assert_eq!(min_hull_eval(&f, &h, &[int(0)]).unwrap(), None);
    }
}
