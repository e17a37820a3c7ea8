use proptest::prelude::*;

use convval::convex::{conjugate, conjugate_cd, AffinePiece, MaxAffineFn};
use convval::num::{self, Rational, Vector};

fn rational() -> impl Strategy<Value = Rational> {
    (-8i64..=8, 1i64..=4).prop_map(|(p, q)| num::frac(p, q))
}

fn vector(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(rational(), dim)
}

fn pieces(dim: usize) -> impl Strategy<Value = Vec<AffinePiece>> {
    prop::collection::vec(
        (vector(dim), rational()).prop_map(|(a, b)| AffinePiece::new(a, b)),
        1..=8,
    )
}

/// Dimension, two functions and a probe point.
fn setting() -> impl Strategy<Value = (usize, Vec<AffinePiece>, Vec<AffinePiece>, Vector)> {
    (1usize..=3).prop_flat_map(|d| (Just(d), pieces(d), pieces(d), vector(d)))
}

fn naive(pieces: &[AffinePiece], x: &[Rational]) -> Rational {
    pieces.iter().map(|p| p.eval(x)).max().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pruning_preserves_values((d, p, _q, x) in setting()) {
        let f = MaxAffineFn::new(d, p.clone()).unwrap();
        prop_assert_eq!(f.eval(&x).unwrap(), naive(&p, &x));
        prop_assert!(f.len() <= p.len());
    }

    #[test]
    fn pruning_is_idempotent((d, p, _q, _x) in setting()) {
        let f = MaxAffineFn::new(d, p).unwrap();
        let again = MaxAffineFn::new(d, f.pieces().to_vec()).unwrap();
        prop_assert_eq!(again, f);
    }

    #[test]
    fn conjugation_is_an_involution((d, p, _q, _x) in setting()) {
        let f = MaxAffineFn::new(d, p).unwrap();
        prop_assert_eq!(conjugate_cd(&conjugate(&f)), f);
    }

    #[test]
    fn sum_is_pointwise_and_canonical((d, p, q, x) in setting()) {
        let f = MaxAffineFn::new(d, p.clone()).unwrap();
        let h = MaxAffineFn::new(d, q.clone()).unwrap();
        let s = f.add(&h).unwrap();
        prop_assert_eq!(s.eval(&x).unwrap(), naive(&p, &x) + naive(&q, &x));
        let all: Vec<AffinePiece> = p
            .iter()
            .flat_map(|a| q.iter().map(move |b| AffinePiece::new(num::add(&a.slope, &b.slope), &a.offset + &b.offset)))
            .collect();
        prop_assert_eq!(s, MaxAffineFn::new(d, all).unwrap());
    }

    #[test]
    fn max_is_pointwise((d, p, q, x) in setting()) {
        let f = MaxAffineFn::new(d, p.clone()).unwrap();
        let h = MaxAffineFn::new(d, q.clone()).unwrap();
        let m = f.max_of(&h).unwrap();
        prop_assert_eq!(m.eval(&x).unwrap(), naive(&p, &x).max(naive(&q, &x)));
    }

    #[test]
    fn scaling_is_pointwise((d, p, _q, x) in setting(), lambda in rational()) {
        let lambda = num::abs(&lambda);
        let f = MaxAffineFn::new(d, p.clone()).unwrap();
        prop_assert_eq!(f.scale(&lambda).unwrap().eval(&x).unwrap(), lambda * naive(&p, &x));
    }

    #[test]
    fn midpoint_convexity((d, p, _q, x) in setting(), y in vector(3)) {
        let f = MaxAffineFn::new(d, p).unwrap();
        prop_assert!(f.midpoint_convex_at(&x, &y[..d]).unwrap());
    }
}
