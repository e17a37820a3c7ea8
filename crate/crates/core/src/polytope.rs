//! Rational polytopes: hulls, Minkowski sums, volumes, difference and
//! projection bodies, and hyperplane cuts.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::hull::{self, HullShape};
use crate::num::{self, Rational, Vector};

pub const MAX_DIM: usize = 4;

/// A convex polytope given by its extreme points, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPolytope", into = "RawPolytope")]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vector>,
}

#[derive(Serialize, Deserialize)]
struct RawPolytope {
    dim: usize,
    #[serde(with = "num::serde_vectors")]
    vertices: Vec<Vector>,
}

impl TryFrom<RawPolytope> for Polytope {
    type Error = Error;

    fn try_from(raw: RawPolytope) -> Result<Self> {
        if let Some(v) = raw.vertices.iter().find(|v| v.len() != raw.dim) {
            return Err(Error::DimensionMismatch {
                expected: raw.dim,
                found: v.len(),
            });
        }
        Polytope::hull(raw.vertices)
    }
}

impl From<Polytope> for RawPolytope {
    fn from(p: Polytope) -> Self {
        RawPolytope {
            dim: p.dim,
            vertices: p.vertices,
        }
    }
}

impl Polytope {
    /// Convex hull of a point cloud.
    pub fn hull(points: Vec<Vector>) -> Result<Polytope> {
        let Some(first) = points.first() else {
            return Err(Error::Empty("point list"));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::Rejected("dimension must be positive".into()));
        }
        if dim > MAX_DIM {
            return Err(Error::Capability {
                what: "polytope hull",
                limit: MAX_DIM,
                got: dim,
            });
        }
        for p in &points {
            check_dim(dim, p.len())?;
        }
        let vertices = hull::hull_shape(&points).extreme_points();
        Ok(Polytope { dim, vertices })
    }

    pub fn point(p: Vector) -> Polytope {
        Polytope {
            dim: p.len(),
            vertices: vec![p],
        }
    }

    /// `[0, 1]ⁿ`.
    pub fn unit_cube(dim: usize) -> Polytope {
        Self::box_between(&num::zeros(dim), &vec![Rational::from_integer(1.into()); dim])
    }

    pub fn box_between(lo: &[Rational], hi: &[Rational]) -> Polytope {
        let dim = lo.len();
        let mut vertices = Vec::with_capacity(1 << dim);
        for mask in 0..(1usize << dim) {
            vertices.push(
                (0..dim)
                    .map(|i| if mask >> i & 1 == 1 { hi[i].clone() } else { lo[i].clone() })
                    .collect(),
            );
        }
        vertices.sort();
        vertices.dedup();
        Polytope { dim, vertices }
    }

    /// `conv{0, e₁, …, eₙ}`.
    pub fn standard_simplex(dim: usize) -> Polytope {
        let mut vertices = vec![num::zeros(dim)];
        vertices.extend((0..dim).map(|i| num::unit(dim, i)));
        vertices.sort();
        Polytope { dim, vertices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn affine_dim(&self) -> usize {
        hull::affine_basis(&self.vertices).0
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim() == self.dim
    }

    /// `h_K(u) = max_{v ∈ K} ⟨v, u⟩`.
    pub fn support(&self, u: &[Rational]) -> Result<Rational> {
        check_dim(self.dim, u.len())?;
        Ok(self
            .vertices
            .iter()
            .map(|v| num::dot(v, u))
            .max()
            .expect("nonempty vertex list"))
    }

    /// `−K`.
    pub fn reflect(&self) -> Polytope {
        let mut vertices: Vec<Vector> = self.vertices.iter().map(|v| num::neg(v)).collect();
        vertices.sort();
        Polytope {
            dim: self.dim,
            vertices,
        }
    }

    pub fn translate(&self, t: &[Rational]) -> Result<Polytope> {
        check_dim(self.dim, t.len())?;
        let mut vertices: Vec<Vector> = self.vertices.iter().map(|v| num::add(v, t)).collect();
        vertices.sort();
        Ok(Polytope {
            dim: self.dim,
            vertices,
        })
    }

    pub fn is_origin_symmetric(&self) -> bool {
        self.reflect() == *self
    }

    fn shape(&self) -> HullShape {
        hull::hull_shape(&self.vertices)
    }
}

impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| num::show_vec(v)).collect();
        write!(f, "conv{{{}}}", vs.join(", "))
    }
}

/// `K + L = {x + y : x ∈ K, y ∈ L}`.
pub fn minkowski_sum(k: &Polytope, l: &Polytope) -> Result<Polytope> {
    check_dim(k.dim, l.dim)?;
    let mut sums = Vec::with_capacity(k.vertices.len() * l.vertices.len());
    for a in &k.vertices {
        for b in &l.vertices {
            sums.push(num::add(a, b));
        }
    }
    Polytope::hull(sums)
}

/// `D K = K + (−K)`.
pub fn difference_body(k: &Polytope) -> Result<Polytope> {
    minkowski_sum(k, &k.reflect())
}

/// n-dimensional volume; zero for lower-dimensional bodies.
pub fn volume(k: &Polytope) -> Rational {
    match k.shape() {
        HullShape::Full(h) => h.volume(),
        HullShape::Interval(lo, hi) => hi - lo,
        HullShape::Point(_) | HullShape::Flat { .. } => Rational::zero(),
    }
}

/// `vol_{n−1}(F)·n_F` for every facet `F` of a full-dimensional `K`, `n ∈ {2, 3}`.
pub fn facet_area_vectors(k: &Polytope) -> Result<Vec<Vector>> {
    if !(2..=3).contains(&k.dim) {
        return Err(Error::Capability {
            what: "facet area vectors",
            limit: 3,
            got: k.dim,
        });
    }
    match k.shape() {
        HullShape::Full(h) => {
            let mut out = h.facet_area_vectors();
            out.sort();
            Ok(out)
        }
        other => Err(Error::Degenerate(format!(
            "body of affine dimension {} in R^{}",
            other.affine_dim(),
            k.dim
        ))),
    }
}

/// Area vectors that define the projection body of any polytope in
/// dimension 2 or 3. A full-dimensional body contributes its facet vectors;
/// a body of codimension one counts as a flat body with two sides `±N`;
/// anything thinner contributes nothing.
pub fn area_vectors(k: &Polytope) -> Result<Vec<Vector>> {
    if !(2..=3).contains(&k.dim) {
        return Err(Error::Capability {
            what: "projection body",
            limit: 3,
            got: k.dim,
        });
    }
    let shape = k.shape();
    let aff = shape.affine_dim();
    if aff == k.dim {
        return facet_area_vectors(k);
    }
    if aff + 1 < k.dim {
        return Ok(Vec::new());
    }
    let n = match k.dim {
        2 => {
            let ends = shape.extreme_points();
            let d = num::sub(&ends[1], &ends[0]);
            vec![d[1].clone(), -d[0].clone()]
        }
        _ => polygon_area_vector(&shape),
    };
    let mut out = vec![n.clone(), num::neg(&n)];
    out.sort();
    Ok(out)
}

/// Area vector of a planar convex polygon sitting in ℝ³, oriented along
/// the cross product of its flat basis.
fn polygon_area_vector(shape: &HullShape) -> Vector {
    let HullShape::Flat {
        origin, basis, hull, ..
    } = shape
    else {
        unreachable!("codimension-one body in R^3 is flat")
    };
    let HullShape::Full(inner) = hull.as_ref() else {
        unreachable!("flat hull of a polygon is two-dimensional")
    };
    let lift = |c: &Vector| -> Vector {
        c.iter()
            .zip(basis)
            .fold(origin.clone(), |acc, (cj, b)| num::add(&acc, &num::scale(b, cj)))
    };
    let nu = hull::cross(&basis[0], &basis[1]);
    let apex = lift(&inner.points[0]);
    let half = num::frac(1, 2);
    let mut acc = num::zeros(3);
    for f in &inner.facets {
        for s in &f.simplices {
            let a = num::sub(&lift(&inner.points[s[0]]), &apex);
            let b = num::sub(&lift(&inner.points[s[1]]), &apex);
            let c = hull::cross(&a, &b);
            let c = if num::dot(&c, &nu).is_negative() { num::neg(&c) } else { c };
            acc = num::add(&acc, &num::scale(&c, &half));
        }
    }
    acc
}

/// `h_{ΠK}(u) = ½ Σ_F |⟨u, N_F⟩|` for full-dimensional `K` in dimension 2 or 3.
pub fn projection_body_support(k: &Polytope, u: &[Rational]) -> Result<Rational> {
    check_dim(k.dim, u.len())?;
    if num::is_zero_vec(u) {
        return Err(Error::ZeroVector("projection direction"));
    }
    let areas = facet_area_vectors(k)?;
    Ok(support_from_area_vectors(&areas, u))
}

pub fn support_from_area_vectors(areas: &[Vector], u: &[Rational]) -> Rational {
    let total = areas
        .iter()
        .fold(Rational::zero(), |acc, n| acc + num::dot(u, n).abs());
    total / Rational::from_integer(2.into())
}

/// Support function of `K`, `D K`, or `Π K`, with the body-dependent data
/// computed once.
#[derive(Clone, Debug)]
pub enum SupportEvaluator {
    Body(Polytope),
    Difference(Polytope),
    Projection { dim: usize, area_vectors: Vec<Vector> },
}

impl SupportEvaluator {
    pub fn difference(k: &Polytope) -> Result<Self> {
        Ok(SupportEvaluator::Difference(difference_body(k)?))
    }

    pub fn projection(k: &Polytope) -> Result<Self> {
        Ok(SupportEvaluator::Projection {
            dim: k.dim,
            area_vectors: area_vectors(k)?,
        })
    }

    pub fn eval(&self, u: &[Rational]) -> Result<Rational> {
        match self {
            SupportEvaluator::Body(k) | SupportEvaluator::Difference(k) => k.support(u),
            SupportEvaluator::Projection { dim, area_vectors } => {
                check_dim(*dim, u.len())?;
                Ok(support_from_area_vectors(area_vectors, u))
            }
        }
    }
}

/// The two halves of a polytope cut by a hyperplane, and their common face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutPair {
    /// `P ∩ {⟨w, x⟩ ≤ t}`
    pub lower: Polytope,
    /// `P ∩ {⟨w, x⟩ ≥ t}`
    pub upper: Polytope,
    /// `P ∩ {⟨w, x⟩ = t}`
    pub slice: Polytope,
}

/// Cuts `P` by `{⟨w, x⟩ = t}`, which must pass through the interior.
pub fn cut_pair(p: &Polytope, w: &[Rational], t: &Rational) -> Result<CutPair> {
    check_dim(p.dim, w.len())?;
    if num::is_zero_vec(w) {
        return Err(Error::ZeroVector("hyperplane normal"));
    }
    let levels: Vec<Rational> = p.vertices.iter().map(|v| num::dot(w, v)).collect();
    if !levels.iter().any(|l| l < t) || !levels.iter().any(|l| l > t) {
        return Err(Error::Rejected(
            "hyperplane does not meet the interior of the polytope".into(),
        ));
    }
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut slice = Vec::new();
    for (v, l) in p.vertices.iter().zip(&levels) {
        if l <= t {
            lower.push(v.clone());
        }
        if l >= t {
            upper.push(v.clone());
        }
        if l == t {
            slice.push(v.clone());
        }
    }
    for (i, (vi, li)) in p.vertices.iter().zip(&levels).enumerate() {
        for (vj, lj) in p.vertices.iter().zip(&levels).skip(i + 1) {
            if (li < t && lj > t) || (li > t && lj < t) {
                let s = (t - li) / (lj - li);
                let x = num::add(vi, &num::scale(&num::sub(vj, vi), &s));
                lower.push(x.clone());
                upper.push(x.clone());
                slice.push(x);
            }
        }
    }
    Ok(CutPair {
        lower: Polytope::hull(lower)?,
        upper: Polytope::hull(upper)?,
        slice: Polytope::hull(slice)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, int, vec_of};

    fn triangle() -> Polytope {
        Polytope::standard_simplex(2)
    }

    fn hexagon() -> Polytope {
        Polytope::hull(vec![
            vec_of(&[1, 0]),
            vec_of(&[-1, 0]),
            vec_of(&[0, 1]),
            vec_of(&[0, -1]),
            vec_of(&[1, -1]),
            vec_of(&[-1, 1]),
        ])
        .unwrap()
    }

    /// Shoelace area of a convex polygon, vertices sorted by angle about the centroid.
    fn shoelace(p: &Polytope) -> Rational {
        let vs = p.vertices();
        let n = int(vs.len() as i64);
        let cx = vs.iter().fold(int(0), |a, v| a + &v[0]) / &n;
        let cy = vs.iter().fold(int(0), |a, v| a + &v[1]) / &n;
        let mut sorted: Vec<&Vector> = vs.iter().collect();
        sorted.sort_by(|a, b| {
            let ta = num::to_f64(&(&a[1] - &cy)).atan2(num::to_f64(&(&a[0] - &cx)));
            let tb = num::to_f64(&(&b[1] - &cy)).atan2(num::to_f64(&(&b[0] - &cx)));
            ta.partial_cmp(&tb).unwrap()
        });
        let mut s = int(0);
        for i in 0..sorted.len() {
            let (a, b) = (sorted[i], sorted[(i + 1) % sorted.len()]);
            s += &a[0] * &b[1] - &a[1] * &b[0];
        }
        s.abs() / int(2)
    }

    #[test]
    fn hull_examples() {
        let seg = Polytope::hull(vec![vec_of(&[0]), vec_of(&[1]), vec![frac(1, 2)]]).unwrap();
        assert_eq!(seg.vertices(), &[vec_of(&[0]), vec_of(&[1])]);
        let mut pts = Polytope::unit_cube(3).vertices().to_vec();
        pts.push(vec![frac(1, 2); 3]);
        assert_eq!(Polytope::hull(pts).unwrap(), Polytope::unit_cube(3));
        assert_eq!(Polytope::hull(vec![]), Err(Error::Empty("point list")));
        assert!(matches!(
            Polytope::hull(vec![num::zeros(5)]),
            Err(Error::Capability { .. })
        ));
    }

    #[test]
    fn minkowski_examples() {
        let k = Polytope::unit_cube(2);
        let pt = Polytope::point(vec_of(&[3, -1]));
        assert_eq!(minkowski_sum(&k, &pt).unwrap(), k.translate(&vec_of(&[3, -1])).unwrap());
        assert_eq!(
            minkowski_sum(&k, &k).unwrap(),
            Polytope::box_between(&vec_of(&[0, 0]), &vec_of(&[2, 2]))
        );
        // brute-force vertex-sum oracle for T + (−T)
        assert_eq!(difference_body(&triangle()).unwrap(), hexagon());
    }

    #[test]
    fn difference_body_examples() {
        for n in 2..=3 {
            let d = difference_body(&Polytope::unit_cube(n)).unwrap();
            assert_eq!(d, Polytope::box_between(&vec![int(-1); n], &vec![int(1); n]));
            assert!(d.is_origin_symmetric());
        }
        let d = difference_body(&triangle()).unwrap();
        assert_eq!(shoelace(&d), int(3));
        assert_eq!(volume(&d), int(3));
        assert_eq!(volume(&d) / volume(&triangle()), int(6));
        let p = Polytope::point(vec_of(&[4, 5]));
        assert_eq!(difference_body(&p).unwrap(), Polytope::point(vec_of(&[0, 0])));
    }

    #[test]
    fn volume_examples() {
        assert_eq!(volume(&Polytope::unit_cube(3)), int(1));
        assert_eq!(volume(&Polytope::standard_simplex(3)), frac(1, 6));
        assert_eq!(volume(&hexagon()), int(3));
        let flat = Polytope::hull(vec![vec_of(&[0, 0, 0]), vec_of(&[1, 0, 0]), vec_of(&[0, 1, 0])])
            .unwrap();
        assert_eq!(volume(&flat), int(0));
    }

    #[test]
    fn triangle_edge_vectors() {
        // rotate-edge oracle: outward normals scaled by edge length
        let got = facet_area_vectors(&triangle()).unwrap();
        let mut expected = vec![vec_of(&[0, -1]), vec_of(&[-1, 0]), vec_of(&[1, 1])];
        expected.sort();
        assert_eq!(got, expected);
        let closure = got.iter().fold(num::zeros(2), |a, v| num::add(&a, v));
        assert!(num::is_zero_vec(&closure));
    }

    #[test]
    fn projection_body_examples() {
        let cube = Polytope::unit_cube(3);
        for i in 0..3 {
            assert_eq!(projection_body_support(&cube, &num::unit(3, i)).unwrap(), int(1));
        }
        let tet = Polytope::standard_simplex(3);
        assert_eq!(projection_body_support(&tet, &num::unit(3, 2)).unwrap(), frac(1, 2));
        let u = vec![frac(1, 3), int(-2), frac(5, 7)];
        let two_u = num::scale(&u, &int(2));
        assert_eq!(
            projection_body_support(&tet, &two_u).unwrap(),
            int(2) * projection_body_support(&tet, &u).unwrap()
        );
        assert_eq!(
            projection_body_support(&tet, &num::zeros(3)),
            Err(Error::ZeroVector("projection direction"))
        );
    }

    #[test]
    fn square_cut_at_half() {
        let sq = Polytope::unit_cube(2);
        let cut = cut_pair(&sq, &vec_of(&[1, 0]), &frac(1, 2)).unwrap();
        assert_eq!(
            cut.lower,
            Polytope::box_between(&vec_of(&[0, 0]), &[frac(1, 2), int(1)])
        );
        assert_eq!(
            cut.upper,
            Polytope::box_between(&[frac(1, 2), int(0)], &vec_of(&[1, 1]))
        );
        assert_eq!(cut.slice.vertices(), &[vec![frac(1, 2), int(0)], vec![frac(1, 2), int(1)]]);
        // difference-body valuation identity in direction e1
        let e1 = vec_of(&[1, 0]);
        let h = |k: &Polytope| difference_body(k).unwrap().support(&e1).unwrap();
        assert_eq!(h(&sq) + h(&cut.slice), int(1));
        assert_eq!(h(&cut.lower) + h(&cut.upper), int(1));
        assert!(cut_pair(&sq, &vec_of(&[1, 0]), &int(1)).is_err());
    }

    #[test]
    fn cube_diagonal_cut_volumes() {
        let cube = Polytope::unit_cube(3);
        let cut = cut_pair(&cube, &vec_of(&[1, 1, 0]), &int(1)).unwrap();
        assert_eq!(volume(&cut.lower), frac(1, 2));
        assert_eq!(volume(&cut.lower) + volume(&cut.upper), volume(&cube));
    }

    #[test]
    fn flat_polygon_area_vectors() {
        let sq = Polytope::hull(vec![
            vec_of(&[0, 0, 2]),
            vec_of(&[1, 0, 2]),
            vec_of(&[0, 1, 2]),
            vec_of(&[1, 1, 2]),
        ])
        .unwrap();
        assert_eq!(area_vectors(&sq).unwrap(), vec![vec_of(&[0, 0, -1]), vec_of(&[0, 0, 1])]);
        let seg = Polytope::hull(vec![vec_of(&[0, 0, 0]), vec_of(&[1, 2, 3])]).unwrap();
        assert!(area_vectors(&seg).unwrap().is_empty());
    }
}
