//! Replayable failure and counterexample records.
//!
//! A witness stores every input of the check that produced it together with
//! both sides of the compared identity. Replaying recomputes the sides from
//! the inputs alone.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::analysis::{homogeneous_decompose, polarize, HingePair, ScalarValuation};
use crate::convex::{AffinePiece, MaxAffineFn};
use crate::error::{Error, Result};
use crate::num::{self, Rational, Vector};
use crate::polytope::{cut_pair, Polytope, SupportEvaluator};
use crate::valuation::{psi_eval, psi_expand, EquivarianceWitness, InvarianceWitness, ValuationSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyOperator {
    Difference,
    Projection,
}

impl BodyOperator {
    pub fn evaluator(self, k: &Polytope) -> Result<SupportEvaluator> {
        match self {
            BodyOperator::Difference => SupportEvaluator::difference(k),
            BodyOperator::Projection => SupportEvaluator::projection(k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `Ψ(max)[x] + Ψ(min)[x]` against `Ψ(f)[x] + Ψ(h)[x]` on a hinge pair.
    ValuationIdentity {
        spec: ValuationSpec,
        pair: HingePair,
        #[serde(with = "num::serde_vector")]
        x: Vector,
        #[serde(with = "num::serde_rational")]
        lhs: Rational,
        #[serde(with = "num::serde_rational")]
        rhs: Rational,
    },
    DualInvariance(InvarianceWitness),
    Equivariance(EquivarianceWitness),
    /// `(Ψ − c)(λf)[x]` against `λ·(Ψ − c)(f)[x]`, for a spec with `c = 0`.
    Homogeneity {
        spec: ValuationSpec,
        f: MaxAffineFn,
        #[serde(with = "num::serde_rational")]
        lambda: Rational,
        #[serde(with = "num::serde_vector")]
        x: Vector,
        #[serde(with = "num::serde_rational")]
        lhs: Rational,
        #[serde(with = "num::serde_rational")]
        rhs: Rational,
    },
    /// Expanded `Ψ(f)` at the midpoint against the chord average.
    Convexity {
        spec: ValuationSpec,
        f: MaxAffineFn,
        #[serde(with = "num::serde_vector")]
        x: Vector,
        #[serde(with = "num::serde_vector")]
        y: Vector,
        #[serde(with = "num::serde_rational")]
        lhs: Rational,
        #[serde(with = "num::serde_rational")]
        rhs: Rational,
    },
    /// Expanded `Ψ(f)` at `x` against direct evaluation.
    Expansion {
        spec: ValuationSpec,
        f: MaxAffineFn,
        #[serde(with = "num::serde_vector")]
        x: Vector,
        #[serde(with = "num::serde_rational")]
        lhs: Rational,
        #[serde(with = "num::serde_rational")]
        rhs: Rational,
    },
    /// `Ψ(max{f, ℓ})[x]` against `Ψ(f)[x]`.
    Locality {
        spec: ValuationSpec,
        f: MaxAffineFn,
        #[serde(with = "num::serde_vector")]
        x: Vector,
        ell: AffinePiece,
        #[serde(with = "num::serde_rational")]
        lhs: Rational,
        #[serde(with = "num::serde_rational")]
        rhs: Rational,
    },
    /// Coefficients of `λ ↦ Ψ(λf)[x]`; expected `(c, ·, 0, …, 0)`.
    Decomposition {
        spec: ValuationSpec,
        f: MaxAffineFn,
        #[serde(with = "num::serde_vector")]
        x: Vector,
        #[serde(with = "num::serde_vector")]
        coefficients: Vector,
    },
    /// Polarization of `f ↦ Ψ(f)[x]·Ψ(f)[y]` (`c = 0`) in both argument orders.
    PolarSymmetry {
        spec: ValuationSpec,
        #[serde(with = "num::serde_vector")]
        x: Vector,
        #[serde(with = "num::serde_vector")]
        y: Vector,
        f1: MaxAffineFn,
        f2: MaxAffineFn,
        #[serde(with = "num::serde_rational")]
        lhs: Rational,
        #[serde(with = "num::serde_rational")]
        rhs: Rational,
    },
    /// The same polarization on the diagonal `(f, f)` against `µ(f)`.
    PolarDiagonal {
        spec: ValuationSpec,
        #[serde(with = "num::serde_vector")]
        x: Vector,
        #[serde(with = "num::serde_vector")]
        y: Vector,
        f: MaxAffineFn,
        #[serde(with = "num::serde_rational")]
        lhs: Rational,
        #[serde(with = "num::serde_rational")]
        rhs: Rational,
    },
    /// `Ψ(f)[(x + y)/2]` against `(Ψ(f)[x] + Ψ(f)[y]) / 2`.
    Linearity {
        spec: ValuationSpec,
        f: MaxAffineFn,
        #[serde(with = "num::serde_vector")]
        x: Vector,
        #[serde(with = "num::serde_vector")]
        y: Vector,
        #[serde(with = "num::serde_rational")]
        lhs: Rational,
        #[serde(with = "num::serde_rational")]
        rhs: Rational,
    },
    /// `h_{ΦP}(u) + h_{ΦM}(u)` against `h_{ΦK}(u) + h_{ΦL}(u)` for the cut
    /// of `P` by `{⟨w, x⟩ = t}`.
    Minkowski {
        operator: BodyOperator,
        body: Polytope,
        #[serde(with = "num::serde_vector")]
        w: Vector,
        #[serde(with = "num::serde_rational")]
        t: Rational,
        #[serde(with = "num::serde_vector")]
        u: Vector,
        #[serde(with = "num::serde_rational")]
        lhs: Rational,
        #[serde(with = "num::serde_rational")]
        rhs: Rational,
    },
}

/// Result of replaying a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replay {
    pub recorded: Rational,
    pub recomputed: Rational,
}

impl Replay {
    pub fn matches(&self) -> bool {
        self.recorded == self.recomputed
    }
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::ValuationIdentity { .. } => "valuation_identity",
            Witness::DualInvariance(_) => "dual_invariance",
            Witness::Equivariance(_) => "equivariance",
            Witness::Homogeneity { .. } => "homogeneity",
            Witness::Convexity { .. } => "convexity",
            Witness::Expansion { .. } => "expansion",
            Witness::Locality { .. } => "locality",
            Witness::Decomposition { .. } => "decomposition",
            Witness::PolarSymmetry { .. } => "polar_symmetry",
            Witness::PolarDiagonal { .. } => "polar_diagonal",
            Witness::Linearity { .. } => "linearity",
            Witness::Minkowski { .. } => "minkowski",
        }
    }

    /// Signed size of the recorded violation. Zero means the checked
    /// identity holds, except for convexity, where a nonpositive value does.
    pub fn discrepancy(&self) -> Rational {
        match self {
            Witness::ValuationIdentity { lhs, rhs, .. }
            | Witness::Homogeneity { lhs, rhs, .. }
            | Witness::Convexity { lhs, rhs, .. }
            | Witness::Expansion { lhs, rhs, .. }
            | Witness::Locality { lhs, rhs, .. }
            | Witness::PolarSymmetry { lhs, rhs, .. }
            | Witness::PolarDiagonal { lhs, rhs, .. }
            | Witness::Linearity { lhs, rhs, .. }
            | Witness::Minkowski { lhs, rhs, .. } => lhs - rhs,
            Witness::DualInvariance(w) => w.gap(),
            Witness::Equivariance(w) => w.gap(),
            Witness::Decomposition { spec, coefficients, .. } => decomposition_defect(spec, coefficients),
        }
    }

    /// Whether the recorded values satisfy the checked property.
    pub fn holds(&self) -> bool {
        let d = self.discrepancy();
        match self {
            Witness::Convexity { .. } => !d.is_positive(),
            _ => d.is_zero(),
        }
    }

    /// Recomputes the witness from its inputs.
    pub fn recompute(&self) -> Result<Witness> {
        Ok(match self {
            Witness::ValuationIdentity { spec, pair, x, .. } => identity_witness(spec, pair, x)?,
            Witness::DualInvariance(w) => Witness::DualInvariance(InvarianceWitness::evaluate(
                &w.spec, &w.f, &w.slope, &w.offset, &w.x,
            )?),
            Witness::Equivariance(w) => {
                Witness::Equivariance(EquivarianceWitness::evaluate(&w.spec, w.mode, &w.f, &w.g, &w.x)?)
            }
            Witness::Homogeneity { spec, f, lambda, x, .. } => homogeneity_witness(spec, f, lambda, x)?,
            Witness::Convexity { spec, f, x, y, .. } => convexity_witness(spec, f, x, y)?,
            Witness::Expansion { spec, f, x, .. } => expansion_witness(spec, f, x)?,
            Witness::Locality { spec, f, x, ell, .. } => locality_witness(spec, f, x, ell)?,
            Witness::Decomposition { spec, f, x, .. } => decomposition_witness(spec, f, x)?,
            Witness::PolarSymmetry { spec, x, y, f1, f2, .. } => polar_symmetry_witness(spec, x, y, f1, f2)?,
            Witness::PolarDiagonal { spec, x, y, f, .. } => polar_diagonal_witness(spec, x, y, f)?,
            Witness::Linearity { spec, f, x, y, .. } => linearity_witness(spec, f, x, y)?,
            Witness::Minkowski {
                operator, body, w, t, u, ..
            } => minkowski_witness(*operator, body, w, t, u)?,
        })
    }

    pub fn replay(&self) -> Result<Replay> {
        let again = self.recompute()?;
        if again.kind() != self.kind() {
            return Err(Error::Rejected("replay produced a different check".into()));
        }
        Ok(Replay {
            recorded: self.discrepancy(),
            recomputed: again.discrepancy(),
        })
    }
}

fn decomposition_defect(spec: &ValuationSpec, coefficients: &[Rational]) -> Rational {
    let c0 = coefficients.first().cloned().unwrap_or_else(Rational::zero);
    coefficients
        .iter()
        .skip(2)
        .fold((c0 - spec.c()).abs(), |acc, c| acc + c.abs())
}

pub fn identity_witness(spec: &ValuationSpec, pair: &HingePair, x: &[Rational]) -> Result<Witness> {
    let fns = pair.functions()?;
    let psi = |g: &MaxAffineFn| psi_eval(spec, g, x);
    Ok(Witness::ValuationIdentity {
        spec: spec.clone(),
        pair: pair.clone(),
        x: x.to_vec(),
        lhs: psi(&fns.max)? + psi(&fns.min)?,
        rhs: psi(&fns.f)? + psi(&fns.h)?,
    })
}

pub fn homogeneity_witness(spec: &ValuationSpec, f: &MaxAffineFn, lambda: &Rational, x: &[Rational]) -> Result<Witness> {
    let spec0 = spec.with_c(Rational::zero());
    Ok(Witness::Homogeneity {
        spec: spec.clone(),
        f: f.clone(),
        lambda: lambda.clone(),
        x: x.to_vec(),
        lhs: psi_eval(&spec0, &f.scale(lambda)?, x)?,
        rhs: lambda * psi_eval(&spec0, f, x)?,
    })
}

pub fn convexity_witness(spec: &ValuationSpec, f: &MaxAffineFn, x: &[Rational], y: &[Rational]) -> Result<Witness> {
    let g = psi_expand(spec, f)?;
    let half = num::frac(1, 2);
    let mid = num::scale(&num::add(x, y), &half);
    Ok(Witness::Convexity {
        spec: spec.clone(),
        f: f.clone(),
        x: x.to_vec(),
        y: y.to_vec(),
        lhs: g.eval(&mid)?,
        rhs: (g.eval(x)? + g.eval(y)?) * half,
    })
}

pub fn expansion_witness(spec: &ValuationSpec, f: &MaxAffineFn, x: &[Rational]) -> Result<Witness> {
    Ok(Witness::Expansion {
        spec: spec.clone(),
        f: f.clone(),
        x: x.to_vec(),
        lhs: psi_expand(spec, f)?.eval(x)?,
        rhs: psi_eval(spec, f, x)?,
    })
}

pub fn locality_witness(spec: &ValuationSpec, f: &MaxAffineFn, x: &[Rational], ell: &AffinePiece) -> Result<Witness> {
    let r = crate::analysis::locality_check(spec, f, x, ell)?;
    Ok(Witness::Locality {
        spec: spec.clone(),
        f: f.clone(),
        x: x.to_vec(),
        ell: ell.clone(),
        lhs: r.modified,
        rhs: r.original,
    })
}

pub fn decomposition_witness(spec: &ValuationSpec, f: &MaxAffineFn, x: &[Rational]) -> Result<Witness> {
    let mu = ScalarValuation::from_spec(spec, x.to_vec());
    Ok(Witness::Decomposition {
        spec: spec.clone(),
        f: f.clone(),
        x: x.to_vec(),
        coefficients: homogeneous_decompose(&mu, f)?,
    })
}

/// `f ↦ Ψ₀(f)[x]·Ψ₀(f)[y]`, homogeneous of degree two.
pub fn product_valuation(spec: &ValuationSpec, x: &[Rational], y: &[Rational]) -> ScalarValuation {
    let spec0 = spec.with_c(Rational::zero());
    let (x, y) = (x.to_vec(), y.to_vec());
    ScalarValuation::new(2, move |f| Ok(psi_eval(&spec0, f, &x)? * psi_eval(&spec0, f, &y)?))
}

pub fn polar_symmetry_witness(
    spec: &ValuationSpec,
    x: &[Rational],
    y: &[Rational],
    f1: &MaxAffineFn,
    f2: &MaxAffineFn,
) -> Result<Witness> {
    let mu = product_valuation(spec, x, y);
    Ok(Witness::PolarSymmetry {
        spec: spec.clone(),
        x: x.to_vec(),
        y: y.to_vec(),
        f1: f1.clone(),
        f2: f2.clone(),
        lhs: polarize(&mu, &[f1.clone(), f2.clone()])?,
        rhs: polarize(&mu, &[f2.clone(), f1.clone()])?,
    })
}

pub fn polar_diagonal_witness(spec: &ValuationSpec, x: &[Rational], y: &[Rational], f: &MaxAffineFn) -> Result<Witness> {
    let mu = product_valuation(spec, x, y);
    Ok(Witness::PolarDiagonal {
        spec: spec.clone(),
        x: x.to_vec(),
        y: y.to_vec(),
        f: f.clone(),
        lhs: polarize(&mu, &[f.clone(), f.clone()])?,
        rhs: mu.eval(f)?,
    })
}

pub fn linearity_witness(spec: &ValuationSpec, f: &MaxAffineFn, x: &[Rational], y: &[Rational]) -> Result<Witness> {
    let half = num::frac(1, 2);
    let mid = num::scale(&num::add(x, y), &half);
    Ok(Witness::Linearity {
        spec: spec.clone(),
        f: f.clone(),
        x: x.to_vec(),
        y: y.to_vec(),
        lhs: psi_eval(spec, f, &mid)?,
        rhs: (psi_eval(spec, f, x)? + psi_eval(spec, f, y)?) * half,
    })
}

pub fn minkowski_witness(
    operator: BodyOperator,
    body: &Polytope,
    w: &[Rational],
    t: &Rational,
    u: &[Rational],
) -> Result<Witness> {
    let mut all = minkowski_witnesses(operator, body, w, t, &[u.to_vec()])?;
    Ok(all.pop().expect("one direction"))
}

/// One witness per direction, sharing the cut and the four evaluators.
pub fn minkowski_witnesses(
    operator: BodyOperator,
    body: &Polytope,
    w: &[Rational],
    t: &Rational,
    directions: &[Vector],
) -> Result<Vec<Witness>> {
    let cut = cut_pair(body, w, t)?;
    let [k, s, lo, hi] = [body, &cut.slice, &cut.lower, &cut.upper].map(|p| operator.evaluator(p));
    let (k, s, lo, hi) = (k?, s?, lo?, hi?);
    directions
        .iter()
        .map(|u| {
            Ok(Witness::Minkowski {
                operator,
                body: body.clone(),
                w: w.to_vec(),
                t: t.clone(),
                u: u.to_vec(),
                lhs: k.eval(u)? + s.eval(u)?,
                rhs: lo.eval(u)? + hi.eval(u)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, vec_of};
    use crate::valuation::DiscreteMeasure;

    #[test]
    fn json_round_trip_and_replay() {
        let spec = ValuationSpec::eq1(1, int(0), DiscreteMeasure::from_ints(&[(2, 1)]).unwrap()).unwrap();
        let w = Witness::DualInvariance(
            InvarianceWitness::evaluate(&spec, &MaxAffineFn::zero(1), &vec_of(&[1]), &int(0), &vec_of(&[1]))
                .unwrap(),
        );
        assert_eq!(w.discrepancy(), num::frac(1, 2));
        let text = serde_json::to_string(&w).unwrap();
        assert!(text.contains("\"kind\":\"dual_invariance\""));
        let back: Witness = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
        let r = back.replay().unwrap();
        assert!(r.matches());
        assert_eq!(r.recomputed, num::frac(1, 2));
    }

    #[test]
    fn square_cut_minkowski_witnesses_hold() {
        let sq = Polytope::unit_cube(2);
        for op in [BodyOperator::Difference, BodyOperator::Projection] {
            let w = minkowski_witness(op, &sq, &vec_of(&[1, 0]), &num::frac(1, 2), &vec_of(&[1, 2])).unwrap();
            assert!(w.holds(), "{w:?}");
        }
    }
}
