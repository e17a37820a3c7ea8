//! Exact convex hulls in small dimension by beneath-beyond insertion.
//!
//! The boundary is kept as a triangulation; coplanar simplices are grouped
//! into facets afterwards. Inputs of lower affine dimension are hulled in
//! affine coordinates of their span.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::num::{self, Rational, Vector};

/// A facet of a full-dimensional hull: `⟨normal, x⟩ ≤ offset` on the body,
/// with `normal` scaled so its first nonzero entry is ±1.
#[derive(Clone, Debug)]
pub(crate) struct Facet {
    pub normal: Vector,
    pub offset: Rational,
    /// Boundary simplices lying in this facet, as indices into `points`.
    pub simplices: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub(crate) struct FullHull {
    pub points: Vec<Vector>,
    pub interior: Vector,
    pub facets: Vec<Facet>,
}

#[derive(Clone, Debug)]
pub(crate) enum HullShape {
    /// All points coincide.
    Point(Vector),
    /// Affine dimension `k < ambient`, hulled in coordinates `origin + Σ cⱼ basisⱼ`.
    Flat {
        origin: Vector,
        basis: Vec<Vector>,
        hull: Box<HullShape>,
    },
    /// Segment endpoints in one dimension.
    Interval(Rational, Rational),
    Full(FullHull),
}

/// Affine dimension and, if degenerate, an independent set of difference
/// vectors spanning the affine hull.
pub(crate) fn affine_basis(points: &[Vector]) -> (usize, Vec<Vector>) {
    let origin = &points[0];
    let mut chosen: Vec<Vector> = Vec::new();
    let mut echelon: Vec<Vector> = Vec::new();
    for p in &points[1..] {
        let d = num::sub(p, origin);
        let mut trial = echelon.clone();
        trial.push(d.clone());
        let reduced = num::row_basis(&trial);
        if reduced.len() > echelon.len() {
            echelon = reduced;
            chosen.push(d);
        }
    }
    (chosen.len(), chosen)
}

/// Coordinates of `p − origin` in terms of `basis` (assumed to span it).
pub(crate) fn flat_coords(basis: &[Vector], origin: &[Rational], p: &[Rational]) -> Vector {
    let k = basis.len();
    let d = num::sub(p, origin);
    let cols = pivot_columns(basis);
    let m: Vec<Vector> = cols
        .iter()
        .map(|&c| (0..k).map(|j| basis[j][c].clone()).collect())
        .collect();
    let rhs: Vector = cols.iter().map(|&c| d[c].clone()).collect();
    num::solve(&m, &rhs).expect("pivot columns give an invertible system")
}

fn pivot_columns(basis: &[Vector]) -> Vec<usize> {
    let n = basis[0].len();
    let mut cols = Vec::new();
    for c in 0..n {
        let mut trial = cols.clone();
        trial.push(c);
        let sub: Vec<Vector> = basis
            .iter()
            .map(|b| trial.iter().map(|&t| b[t].clone()).collect())
            .collect();
        // rank of the k × |trial| submatrix
        let cols_as_rows: Vec<Vector> = (0..trial.len())
            .map(|j| sub.iter().map(|r| r[j].clone()).collect())
            .collect();
        if num::row_basis(&cols_as_rows).len() == trial.len() {
            cols = trial;
            if cols.len() == basis.len() {
                break;
            }
        }
    }
    cols
}

pub(crate) fn hull_shape(points: &[Vector]) -> HullShape {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let ambient = pts[0].len();
    let (k, basis) = affine_basis(&pts);
    if k == 0 {
        return HullShape::Point(pts[0].clone());
    }
    if k < ambient {
        let origin = pts[0].clone();
        let coords: Vec<Vector> = pts.iter().map(|p| flat_coords(&basis, &origin, p)).collect();
        let inner = hull_shape(&coords);
        return HullShape::Flat {
            origin,
            basis,
            hull: Box::new(inner),
        };
    }
    if ambient == 1 {
        let lo = pts.iter().map(|p| p[0].clone()).min().unwrap();
        let hi = pts.iter().map(|p| p[0].clone()).max().unwrap();
        return HullShape::Interval(lo, hi);
    }
    HullShape::Full(full_hull(pts))
}

/// Hyperplane through `k` points of ℝᵏ, oriented away from `interior`.
fn hyperplane(points: &[Vector], simplex: &[usize], interior: &[Rational]) -> (Vector, Rational) {
    let base = &points[simplex[0]];
    let diffs: Vec<Vector> = simplex[1..].iter().map(|&i| num::sub(&points[i], base)).collect();
    let k = base.len();
    let ns = num::null_space(&diffs, k);
    debug_assert_eq!(ns.len(), 1, "simplex must be affinely independent");
    let mut normal = ns.into_iter().next().unwrap();
    let lead = normal.iter().find(|x| !x.is_zero()).unwrap().abs();
    for x in normal.iter_mut() {
        *x /= &lead;
    }
    let mut offset = num::dot(&normal, base);
    if num::dot(&normal, interior) > offset {
        normal = num::neg(&normal);
        offset = -offset;
    }
    (normal, offset)
}

struct Simplex {
    verts: Vec<usize>,
    normal: Vector,
    offset: Rational,
}

fn full_hull(points: Vec<Vector>) -> FullHull {
    let k = points[0].len();
    // initial simplex: greedily extend an affinely independent set
    let mut init = vec![0usize];
    let mut echelon: Vec<Vector> = Vec::new();
    for i in 1..points.len() {
        let mut trial = echelon.clone();
        trial.push(num::sub(&points[i], &points[0]));
        let reduced = num::row_basis(&trial);
        if reduced.len() > echelon.len() {
            echelon = reduced;
            init.push(i);
            if init.len() == k + 1 {
                break;
            }
        }
    }
    let inv = Rational::from_integer(((k + 1) as i64).into());
    let interior: Vector = (0..k)
        .map(|c| init.iter().fold(Rational::zero(), |acc, &i| acc + &points[i][c]) / &inv)
        .collect();

    let make = |verts: Vec<usize>| -> Simplex {
        let (normal, offset) = hyperplane(&points, &verts, &interior);
        Simplex { verts, normal, offset }
    };
    let mut faces: Vec<Simplex> = (0..=k)
        .map(|skip| {
            init.iter()
                .enumerate()
                .filter(|&(j, _)| j != skip)
                .map(|(_, &i)| i)
                .collect()
        })
        .map(make)
        .collect();

    for (idx, p) in points.iter().enumerate() {
        if init.contains(&idx) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|f| num::dot(&f.normal, p) > f.offset)
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            for skip in 0..f.verts.len() {
                let mut r: Vec<usize> = f
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .map(|(_, &v)| v)
                    .collect();
                r.sort_unstable();
                *ridges.entry(r).or_insert(0) += 1;
            }
        }
        let mut kept: Vec<Simplex> = faces
            .into_iter()
            .zip(&visible)
            .filter(|(_, &v)| !v)
            .map(|(f, _)| f)
            .collect();
        let mut horizon: Vec<Vec<usize>> = ridges
            .into_iter()
            .filter(|(_, c)| *c == 1)
            .map(|(r, _)| r)
            .collect();
        horizon.sort();
        for mut r in horizon {
            r.push(idx);
            kept.push(make(r));
        }
        faces = kept;
    }

    let mut facets: Vec<Facet> = Vec::new();
    for s in faces {
        match facets
            .iter_mut()
            .find(|f| f.normal == s.normal && f.offset == s.offset)
        {
            Some(f) => f.simplices.push(s.verts),
            None => facets.push(Facet {
                normal: s.normal,
                offset: s.offset,
                simplices: vec![s.verts],
            }),
        }
    }
    facets.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
    FullHull {
        points,
        interior,
        facets,
    }
}

impl FullHull {
    /// Extreme points: those whose incident facet normals span ℝᵏ.
    pub fn extreme_points(&self) -> Vec<Vector> {
        let k = self.interior.len();
        let mut out: Vec<Vector> = self
            .points
            .iter()
            .filter(|p| {
                let normals: Vec<Vector> = self
                    .facets
                    .iter()
                    .filter(|f| num::dot(&f.normal, p) == f.offset)
                    .map(|f| f.normal.clone())
                    .collect();
                normals.len() >= k && num::row_basis(&normals).len() == k
            })
            .cloned()
            .collect();
        out.sort();
        out
    }

    /// Volume by coning every boundary simplex from the first point.
    pub fn volume(&self) -> Rational {
        let k = self.interior.len();
        let apex = &self.points[0];
        let mut total = Rational::zero();
        for f in &self.facets {
            for s in &f.simplices {
                let rows: Vec<Vector> = s.iter().map(|&i| num::sub(&self.points[i], apex)).collect();
                total += num::det(&rows).abs();
            }
        }
        total / num::factorial(k)
    }

    /// Area-weighted outer normals `vol_{k−1}(F)·n_F` for `k ∈ {2, 3}`.
    pub fn facet_area_vectors(&self) -> Vec<Vector> {
        let k = self.interior.len();
        self.facets
            .iter()
            .map(|f| {
                let mut acc = num::zeros(k);
                for s in &f.simplices {
                    let v = simplex_area_vector(&self.points, s);
                    // orient along the outer normal
                    let v = if num::dot(&v, &f.normal).is_negative() { num::neg(&v) } else { v };
                    acc = num::add(&acc, &v);
                }
                acc
            })
            .collect()
    }
}

/// Unoriented area vector of a boundary simplex: the rotated edge in 2D, half
/// the cross product in 3D.
pub(crate) fn simplex_area_vector(points: &[Vector], s: &[usize]) -> Vector {
    match s.len() {
        2 => {
            let d = num::sub(&points[s[1]], &points[s[0]]);
            vec![d[1].clone(), -d[0].clone()]
        }
        3 => {
            let a = num::sub(&points[s[1]], &points[s[0]]);
            let b = num::sub(&points[s[2]], &points[s[0]]);
            let half = num::frac(1, 2);
            cross(&a, &b).iter().map(|x| x * &half).collect()
        }
        _ => panic!("area vectors need dimension 2 or 3"),
    }
}

pub(crate) fn cross(a: &[Rational], b: &[Rational]) -> Vector {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

impl HullShape {
    pub fn affine_dim(&self) -> usize {
        match self {
            HullShape::Point(_) => 0,
            HullShape::Flat { basis, .. } => basis.len(),
            HullShape::Interval(..) => 1,
            HullShape::Full(h) => h.interior.len(),
        }
    }

    /// Extreme points in ambient coordinates, sorted.
    pub fn extreme_points(&self) -> Vec<Vector> {
        match self {
            HullShape::Point(p) => vec![p.clone()],
            HullShape::Interval(lo, hi) => vec![vec![lo.clone()], vec![hi.clone()]],
            HullShape::Full(h) => h.extreme_points(),
            HullShape::Flat {
                origin, basis, hull, ..
            } => {
                let mut out: Vec<Vector> = hull
                    .extreme_points()
                    .iter()
                    .map(|c| {
                        c.iter()
                            .zip(basis)
                            .fold(origin.clone(), |acc, (cj, b)| num::add(&acc, &num::scale(b, cj)))
                    })
                    .collect();
                out.sort();
                out
            }
        }
    }
}
