//! The named property suites.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_traits::Signed;
use rayon::prelude::*;

use super::report::{Outcome, SuiteReport};
use super::witness::{self as wit, BodyOperator, Witness};
use crate::analysis::{falsify_contravariance, random_locality_modification, Falsification, HingePair, DEFAULT_BUDGET};
use crate::convex::{AffinePiece, MaxAffineFn};
use crate::error::{Error, Result};
use crate::num::{self, Rational, Vector};
use crate::polytope::{difference_body, projection_body_support, volume, Polytope};
use crate::random::Sampler;
use crate::valuation::{
    check_dual_epi_invariance, lift_vector_map, psi_eval, DiscreteMeasure, EquivarianceWitness, Group,
    InvarianceWitness, Mode, ValuationSpec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    ThmA,
    ThmB,
    Thm21,
    Classical,
    CorE,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::ThmA, Suite::ThmB, Suite::Thm21, Suite::Classical, Suite::CorE];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ThmA => "thm-a",
            Suite::ThmB => "thm-b",
            Suite::Thm21 => "thm-2-1",
            Suite::Classical => "classical",
            Suite::CorE => "cor-e",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

type CaseFn = Box<dyn Fn(&mut Sampler) -> Outcome + Send + Sync>;

struct Case {
    check: &'static str,
    run: CaseFn,
}

fn case<F>(check: &'static str, run: F) -> Case
where
    F: Fn(&mut Sampler) -> Outcome + Send + Sync + 'static,
{
    Case {
        check,
        run: Box::new(run),
    }
}

/// Stream reserved for suite-level setup draws; cases use streams `0, 1, …`.
const SETUP_STREAM: u64 = u64::MAX;

pub fn run_suite(name: &str, seed: u64, trials: usize) -> Result<SuiteReport> {
    let suite: Suite = name.parse()?;
    Ok(run(suite, seed, trials))
}

pub fn run(suite: Suite, seed: u64, trials: usize) -> SuiteReport {
    let start = Instant::now();
    let mut setup = Sampler::for_trial(seed, SETUP_STREAM);
    let cases = match suite {
        Suite::ThmA => thm_a(&mut setup, trials),
        Suite::ThmB => thm_b(trials),
        Suite::Thm21 => thm_2_1(trials),
        Suite::Classical => classical(trials),
        Suite::CorE => cor_e(trials),
    };
    let outcomes: Vec<(&str, Outcome)> = cases
        .par_iter()
        .enumerate()
        .map(|(k, c)| (c.check, (c.run)(&mut Sampler::for_trial(seed, k as u64))))
        .collect();
    SuiteReport::assemble(suite.name(), seed, trials, outcomes, start.elapsed())
}

fn nonnegative(rng: &mut Sampler) -> Rational {
    rng.rational().abs()
}

fn thm_a(setup: &mut Sampler, trials: usize) -> Vec<Case> {
    let mut cases = Vec::new();
    for m in 0..5 {
        let dim = m % 4 + 1;
        let spec = Arc::new(ValuationSpec::eq1(dim, setup.rational(), setup.balanced_measure()).expect("valid spec"));
        for _ in 0..trials {
            let s = spec.clone();
            cases.push(case("valuation_identity", move |rng| {
                let pair = HingePair::random(rng, dim);
                let x = rng.vector(dim);
                Outcome::expect_holds(wit::identity_witness(&s, &pair, &x))
            }));
            let s = spec.clone();
            cases.push(case("dual_invariance", move |rng| {
                let (f, slope, offset, x) = (rng.max_affine(dim), rng.vector(dim), rng.rational(), rng.vector(dim));
                Outcome::expect_holds(
                    InvarianceWitness::evaluate(&s, &f, &slope, &offset, &x).map(Witness::DualInvariance),
                )
            }));
            let s = spec.clone();
            cases.push(case("gl_equivariance", move |rng| {
                let g = rng.group_element(dim, Group::GL);
                let (f, x) = (rng.max_affine(dim), rng.vector(dim));
                Outcome::expect_holds(
                    EquivarianceWitness::evaluate(&s, Mode::Equivariant, &f, &g, &x).map(Witness::Equivariance),
                )
            }));
            let s = spec.clone();
            cases.push(case("homogeneity", move |rng| {
                let (f, lambda, x) = (rng.max_affine(dim), nonnegative(rng), rng.vector(dim));
                Outcome::expect_holds(wit::homogeneity_witness(&s, &f, &lambda, &x))
            }));
            let s = spec.clone();
            cases.push(case("output_convexity", move |rng| {
                let (f, x, y) = (rng.max_affine(dim), rng.vector(dim), rng.vector(dim));
                Outcome::expect_holds(wit::convexity_witness(&s, &f, &x, &y))
            }));
            let s = spec.clone();
            cases.push(case("expansion_agreement", move |rng| {
                let (f, x) = (rng.max_affine(dim), rng.vector(dim));
                Outcome::expect_holds(wit::expansion_witness(&s, &f, &x))
            }));
            let s = spec.clone();
            cases.push(case("locality", move |rng| {
                for _ in 0..10 {
                    let (f, x) = (rng.max_affine(dim), rng.vector(dim));
                    if let Some(ell) = random_locality_modification(&s, &f, &x, rng, 20) {
                        return Outcome::expect_holds(wit::locality_witness(&s, &f, &x, &ell));
                    }
                }
                Outcome::failure("no admissible modification found")
            }));
        }
    }
    for m in 0..5 {
        let dim = m % 4 + 1;
        let spec = ValuationSpec::eq1(dim, setup.rational(), setup.unbalanced_measure()).expect("valid spec");
        cases.push(case("dual_invariance_violated", move |rng| {
            match check_dual_epi_invariance(&spec, 20, rng.child_seed()) {
                Ok(r) => match r.witnesses.into_iter().next() {
                    Some(w) => Outcome::Counterexample(Witness::DualInvariance(w)),
                    None => Outcome::failure(format!("no violation found for moment {}", spec.nu().moment())),
                },
                Err(e) => Outcome::failure(e.to_string()),
            }
        }));
    }
    cases
}

fn thm_2_1(trials: usize) -> Vec<Case> {
    let mut cases = Vec::new();
    for t in 0..trials {
        let dim = t % 4 + 1;
        cases.push(case("decomposition", move |rng| {
            let spec = ValuationSpec::eq1(dim, rng.rational(), rng.balanced_measure()).expect("valid spec");
            let (f, x) = (rng.max_affine(dim), rng.vector(dim));
            Outcome::expect_holds(wit::decomposition_witness(&spec, &f, &x))
        }));
        cases.push(case("polar_symmetry", move |rng| {
            let spec = ValuationSpec::eq1(dim, rng.rational(), rng.balanced_measure()).expect("valid spec");
            let (x, y) = (rng.vector(dim), rng.vector(dim));
            let (f1, f2) = (rng.max_affine(dim), rng.max_affine(dim));
            Outcome::expect_holds(wit::polar_symmetry_witness(&spec, &x, &y, &f1, &f2))
        }));
        cases.push(case("polar_diagonal", move |rng| {
            let spec = ValuationSpec::eq1(dim, rng.rational(), rng.balanced_measure()).expect("valid spec");
            let (x, y, f) = (rng.vector(dim), rng.vector(dim), rng.max_affine(dim));
            Outcome::expect_holds(wit::polar_diagonal_witness(&spec, &x, &y, &f))
        }));
    }
    cases
}

fn thm_b(trials: usize) -> Vec<Case> {
    let mut cases = Vec::new();
    for _ in 0..trials {
        cases.push(case("sl2_contravariance", |rng| {
            let spec = ValuationSpec::eq2(rng.rational(), rng.balanced_measure()).expect("valid spec");
            let g = rng.group_element(2, Group::SL);
            let (f, x) = (rng.max_affine(2), rng.vector(2));
            Outcome::expect_holds(
                EquivarianceWitness::evaluate(&spec, Mode::Contravariant, &f, &g, &x).map(Witness::Equivariance),
            )
        }));
    }
    cases.push(case("canonical_witness", |_| {
        let spec = ValuationSpec::eq1(3, Rational::from_integer(0.into()), DiscreteMeasure::symmetric_pair())
            .expect("valid spec");
        match falsify_contravariance(&spec, DEFAULT_BUDGET) {
            Ok(Falsification::Witness { witness, .. }) if witness.gap().abs() == num::int(1) => {
                Outcome::Counterexample(Witness::Equivariance(witness))
            }
            Ok(Falsification::Witness { witness, .. }) => Outcome::Fail {
                detail: format!("witness gap {} differs from 1", num::show(&witness.gap())),
                witness: Some(Witness::Equivariance(witness)),
            },
            Ok(Falsification::Exhausted { candidates }) => {
                Outcome::failure(format!("no witness within {candidates} candidates"))
            }
            Err(e) => Outcome::failure(e.to_string()),
        }
    }));
    for dim in [3, 4, 3, 4] {
        cases.push(case("nonconstant_witness", move |rng| {
            let spec = ValuationSpec::eq1(dim, rng.rational(), rng.balanced_measure()).expect("valid spec");
            match falsify_contravariance(&spec, DEFAULT_BUDGET) {
                Ok(Falsification::Witness { witness, .. }) => Outcome::Counterexample(Witness::Equivariance(witness)),
                Ok(Falsification::Exhausted { candidates }) => {
                    Outcome::failure(format!("no witness within {candidates} candidates for {spec}"))
                }
                Err(e) => Outcome::failure(e.to_string()),
            }
        }));
    }
    for t in 0..trials {
        let dim = 3 + t % 2;
        cases.push(case("constant_contravariance", move |rng| {
            let spec = ValuationSpec::eq1(dim, rng.rational(), DiscreteMeasure::empty()).expect("valid spec");
            let g = rng.group_element(dim, Group::SL);
            let (f, x) = (rng.max_affine(dim), rng.vector(dim));
            Outcome::expect_holds(
                EquivarianceWitness::evaluate(&spec, Mode::Contravariant, &f, &g, &x).map(Witness::Equivariance),
            )
        }));
    }
    cases
}

/// Maximum of the tangent planes of `|x|²` at the grid `{−2, −3/2, …, 2}²`.
pub fn paraboloid_approximation() -> MaxAffineFn {
    let grid: Vec<Rational> = (-4..=4).map(|k| num::frac(k, 2)).collect();
    let mut pieces = Vec::with_capacity(grid.len() * grid.len());
    for a in &grid {
        for b in &grid {
            let p = vec![a.clone(), b.clone()];
            pieces.push(AffinePiece::new(num::scale(&p, &num::int(2)), -num::dot(&p, &p)));
        }
    }
    MaxAffineFn::new(2, pieces).expect("planar pieces")
}

fn cor_e(trials: usize) -> Vec<Case> {
    let f = Arc::new(paraboloid_approximation());
    let mut cases = Vec::new();
    for _ in 0..trials {
        let f1 = f.clone();
        cases.push(case("nonlinearity", move |rng| {
            let spec = ValuationSpec::eq2(rng.rational(), rng.balanced_measure()).expect("valid spec");
            for _ in 0..20 {
                let (x, y) = (rng.vector(2), rng.vector(2));
                match wit::linearity_witness(&spec, &f1, &x, &y) {
                    Ok(w) if !w.holds() => return Outcome::Counterexample(w),
                    Ok(_) => {}
                    Err(e) => return Outcome::failure(e.to_string()),
                }
            }
            Outcome::failure(format!("midpoint equality held at every probe for {spec}"))
        }));
        let f2 = f.clone();
        cases.push(case("zero_map", move |rng| {
            let spec = ValuationSpec::eq2(num::int(0), DiscreteMeasure::empty()).expect("valid spec");
            let (x, y) = (rng.vector(2), rng.vector(2));
            let zero = |g: &MaxAffineFn| Ok(num::zeros(g.dim()));
            for p in [&x, &y] {
                let lifted = lift_vector_map(zero, &f2, p);
                let direct = psi_eval(&spec, &f2, p);
                if lifted != direct {
                    return Outcome::failure("zero map differs from the empty-measure family");
                }
            }
            Outcome::expect_holds(wit::linearity_witness(&spec, &f2, &x, &y))
        }));
    }
    cases
}

fn classical(trials: usize) -> Vec<Case> {
    let mut cases = vec![
        case("difference_cube", |_| {
            for n in 2..=3 {
                let d = difference_body(&Polytope::unit_cube(n));
                let expected = Polytope::box_between(&vec![num::int(-1); n], &vec![num::int(1); n]);
                if d.as_ref() != Ok(&expected) {
                    return Outcome::failure(format!("D([0,1]^{n}) = {d:?}"));
                }
            }
            Outcome::Pass
        }),
        case("difference_triangle_ratio", |_| {
            let t = Polytope::standard_simplex(2);
            match difference_body(&t) {
                Ok(d) if volume(&d) / volume(&t) == num::int(6) => Outcome::Pass,
                Ok(d) => Outcome::failure(format!("ratio {}", num::show(&(volume(&d) / volume(&t))))),
                Err(e) => Outcome::failure(e.to_string()),
            }
        }),
        case("projection_cube_axes", |_| {
            let cube = Polytope::unit_cube(3);
            for i in 0..3 {
                match projection_body_support(&cube, &num::unit(3, i)) {
                    Ok(h) if h == num::int(1) => {}
                    other => return Outcome::failure(format!("h(e{}) = {other:?}", i + 1)),
                }
            }
            Outcome::Pass
        }),
        case("projection_monte_carlo", |rng| {
            let mut directions: Vec<Vector> = (0..3).map(|i| num::unit(3, i)).collect();
            directions.extend((0..3).map(|_| rng.nonzero_vector(3)));
            for body in [Polytope::unit_cube(3), Polytope::standard_simplex(3)] {
                for u in &directions {
                    let exact = match projection_body_support(&body, u) {
                        Ok(h) => num::to_f64(&h) / norm(u),
                        Err(e) => return Outcome::failure(e.to_string()),
                    };
                    let estimate = shadow_area_monte_carlo(&body, u, MONTE_CARLO_SAMPLES, rng);
                    if (estimate - exact).abs() > 0.01 * exact {
                        return Outcome::failure(format!(
                            "shadow of {body} along {}: exact {exact}, sampled {estimate}",
                            num::show_vec(u)
                        ));
                    }
                }
            }
            Outcome::Pass
        }),
    ];
    for op in [BodyOperator::Difference, BodyOperator::Projection] {
        cases.push(case("square_cut", move |rng| {
            let sq = Polytope::unit_cube(2);
            let (w, t) = (num::unit(2, 0), num::frac(1, 2));
            for _ in 0..DIRECTIONS_PER_CUT {
                let u = rng.nonzero_vector(2);
                match wit::minkowski_witness(op, &sq, &w, &t, &u) {
                    Ok(wt) if wt.holds() => {}
                    other => return Outcome::expect_holds(other),
                }
            }
            Outcome::Pass
        }));
    }
    for k in 0..trials {
        let dim = 2 + k % 2;
        for (op, check) in [
            (BodyOperator::Difference, "cut_difference"),
            (BodyOperator::Projection, "cut_projection"),
        ] {
            cases.push(case(check, move |rng| {
                let extra = rng.range(0, 4) as usize;
                let body = rng.polytope(dim, extra);
                let (w, t) = random_cut(rng, &body);
                let directions: Vec<Vector> = (0..DIRECTIONS_PER_CUT).map(|_| rng.nonzero_vector(dim)).collect();
                match wit::minkowski_witnesses(op, &body, &w, &t, &directions) {
                    Ok(all) => match all.into_iter().find(|wt| !wt.holds()) {
                        Some(bad) => Outcome::expect_holds(Ok(bad)),
                        None => Outcome::Pass,
                    },
                    Err(e) => Outcome::expect_holds(Err(e)),
                }
            }));
        }
    }
    cases
}

const DIRECTIONS_PER_CUT: usize = 50;
pub const MONTE_CARLO_SAMPLES: usize = 100_000;

/// A hyperplane `{⟨w, x⟩ = t}` strictly separating two vertices of `body`.
fn random_cut(rng: &mut Sampler, body: &Polytope) -> (Vector, Rational) {
    loop {
        let w = rng.nonzero_vector(body.dim());
        let levels: Vec<Rational> = body.vertices().iter().map(|v| num::dot(&w, v)).collect();
        let lo = levels.iter().min().expect("nonempty").clone();
        let hi = levels.iter().max().expect("nonempty").clone();
        if lo < hi {
            let r = num::frac(rng.range(1, 7), 8);
            let t = &lo + (&hi - &lo) * r;
            return (w, t);
        }
    }
}

fn norm(u: &[Rational]) -> f64 {
    u.iter().map(|x| num::to_f64(x).powi(2)).sum::<f64>().sqrt()
}

/// Area of the orthogonal projection of a 3-polytope onto `u⊥`, estimated by
/// uniform sampling of the bounding box of the projected vertices.
pub fn shadow_area_monte_carlo(body: &Polytope, u: &[Rational], samples: usize, rng: &mut Sampler) -> f64 {
    let n = norm(u);
    let u: Vec<f64> = u.iter().map(|x| num::to_f64(x) / n).collect();
    let (e1, e2) = orthonormal_complement(&u);
    let pts: Vec<(f64, f64)> = body
        .vertices()
        .iter()
        .map(|v| {
            let v: Vec<f64> = v.iter().map(num::to_f64).collect();
            (dot3(&v, &e1), dot3(&v, &e2))
        })
        .collect();
    let hull = planar_hull(pts);
    if hull.len() < 3 {
        return 0.0;
    }
    let (xmin, xmax) = hull.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (ymin, ymax) = hull.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let mut inside = 0usize;
    for _ in 0..samples {
        let q = (xmin + (xmax - xmin) * rng.uniform(), ymin + (ymax - ymin) * rng.uniform());
        let contained = (0..hull.len()).all(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
            (b.0 - a.0) * (q.1 - a.1) - (b.1 - a.1) * (q.0 - a.0) >= 0.0
        });
        if contained {
            inside += 1;
        }
    }
    (xmax - xmin) * (ymax - ymin) * inside as f64 / samples as f64
}

fn dot3(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn orthonormal_complement(u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    // the standard axis least aligned with u
    let k = (0..3)
        .min_by(|&i, &j| u[i].abs().partial_cmp(&u[j].abs()).expect("finite"))
        .expect("three axes");
    let mut a = vec![0.0; 3];
    a[k] = 1.0;
    let d = dot3(&a, u);
    let mut e1: Vec<f64> = a.iter().zip(u).map(|(x, y)| x - d * y).collect();
    let l = dot3(&e1, &e1).sqrt();
    e1.iter_mut().for_each(|x| *x /= l);
    let e2 = vec![
        u[1] * e1[2] - u[2] * e1[1],
        u[2] * e1[0] - u[0] * e1[2],
        u[0] * e1[1] - u[1] * e1[0],
    ];
    (e1, e2)
}

/// Counterclockwise convex hull, monotone chain.
fn planar_hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("thm-z".parse::<Suite>(), Err(Error::UnknownSuite("thm-z".into())));
    }

    #[test]
    fn zero_trials_give_fixed_cases_only() {
        let r = run(Suite::ThmA, 1, 0);
        assert_eq!(r.cases, 5);
        assert!(r.ok());
        assert_eq!(r.counterexamples.len(), 5);
    }

    #[test]
    fn monte_carlo_oracle_on_cube() {
        let mut rng = Sampler::for_trial(3, 0);
        let est = shadow_area_monte_carlo(&Polytope::unit_cube(3), &num::vec_of(&[1, 1, 1]), 20_000, &mut rng);
        // the shadow of the unit cube along the diagonal is a hexagon of area √3
        assert!((est - 3f64.sqrt()).abs() < 0.03, "{est}");
    }
}
