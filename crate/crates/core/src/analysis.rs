//! Structural analysis of scalar valuations: the valuation identity on
//! hinge pairs, homogeneous decomposition, polarization, locality probes,
//! and the counterexample search for contravariance.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::{is_min_convex, AffinePiece, MaxAffineFn, RationalMatrix};
use crate::error::{check_dim, Error, Result};
use crate::lp::{Domain, Lp, LpResult, Sense};
use crate::num::{self, Rational, Vector};
use crate::random::Sampler;
use crate::valuation::{psi_eval, EquivarianceWitness, Mode, ValuationSpec, Variant};

type Evaluator = dyn Fn(&MaxAffineFn) -> Result<Rational> + Send + Sync;

/// A real-valued map on max-affine functions whose restriction to rays
/// `λ ↦ µ(λf)` is a polynomial of degree at most `degree_bound`.
#[derive(Clone)]
pub struct ScalarValuation {
    eval: Arc<Evaluator>,
    degree_bound: usize,
}

impl ScalarValuation {
    pub fn new<F>(degree_bound: usize, eval: F) -> Self
    where
        F: Fn(&MaxAffineFn) -> Result<Rational> + Send + Sync + 'static,
    {
        ScalarValuation {
            eval: Arc::new(eval),
            degree_bound,
        }
    }

    /// `f ↦ Ψ(f)[x]`, with the degree bound set to the ambient dimension.
    pub fn from_spec(spec: &ValuationSpec, x: Vector) -> Self {
        let spec = spec.clone();
        let n = spec.dim();
        Self::new(n, move |f| psi_eval(&spec, f, &x))
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn with_degree_bound(&self, degree_bound: usize) -> Self {
        ScalarValuation {
            eval: self.eval.clone(),
            degree_bound,
        }
    }

    pub fn eval(&self, f: &MaxAffineFn) -> Result<Rational> {
        (self.eval)(f)
    }
}

impl fmt::Debug for ScalarValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarValuation")
            .field("degree_bound", &self.degree_bound)
            .finish_non_exhaustive()
    }
}

/// `f = F + c_w(⟨u,·⟩ − t)₊` and `h = F + c_w(t − ⟨u,·⟩)₊`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HingePair {
    pub base: MaxAffineFn,
    #[serde(with = "num::serde_vector")]
    pub u: Vector,
    #[serde(with = "num::serde_rational")]
    pub t: Rational,
    #[serde(with = "num::serde_rational")]
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HingeFunctions {
    pub f: MaxAffineFn,
    pub h: MaxAffineFn,
    pub max: MaxAffineFn,
    pub min: MaxAffineFn,
}

impl HingePair {
    pub fn functions(&self) -> Result<HingeFunctions> {
        hinge_pair(&self.base, &self.u, &self.t, &self.weight)
    }

    pub fn random(rng: &mut Sampler, dim: usize) -> HingePair {
        HingePair {
            base: rng.max_affine(dim),
            u: rng.nonzero_vector(dim),
            t: rng.rational(),
            weight: rng.positive_rational(),
        }
    }
}

/// The four functions of a hinge pair, with `max{f, h}` and `min{f, h} = F`
/// verified against the general routines.
pub fn hinge_pair(base: &MaxAffineFn, u: &[Rational], t: &Rational, weight: &Rational) -> Result<HingeFunctions> {
    check_dim(base.dim(), u.len())?;
    if num::is_zero_vec(u) {
        return Err(Error::ZeroVector("hinge direction"));
    }
    if !weight.is_positive() {
        return Err(Error::Rejected("hinge weight must be positive".into()));
    }
    let up = MaxAffineFn::hinge(u.to_vec(), t.clone())?.scale(weight)?;
    let down = MaxAffineFn::hinge(num::neg(u), -t)?.scale(weight)?;
    let f = base.add(&up)?;
    let h = base.add(&down)?;
    let fold = MaxAffineFn::new(
        base.dim(),
        vec![
            AffinePiece::new(num::scale(u, weight), -(t * weight)),
            AffinePiece::new(num::scale(u, &-weight), t * weight),
        ],
    )?;
    let max = base.add(&fold)?;
    if f.max_of(&h)? != max {
        return Err(Error::InvalidPair("max{f, h} differs from the folded hinge".into()));
    }
    let mc = is_min_convex(&f, &h)?;
    if !mc.convex || mc.hull.as_ref() != Some(base) {
        return Err(Error::InvalidPair("min{f, h} is not the base function".into()));
    }
    Ok(HingeFunctions {
        f,
        h,
        max,
        min: base.clone(),
    })
}

/// Both sides of `µ(max{f,h}) + µ(min{f,h}) = µ(f) + µ(h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub lhs: Rational,
    pub rhs: Rational,
}

impl IdentityOutcome {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn discrepancy(&self) -> Rational {
        &self.lhs - &self.rhs
    }
}

/// Tests the valuation identity on a pair whose minimum is convex.
pub fn valuation_identity_check(mu: &ScalarValuation, f: &MaxAffineFn, h: &MaxAffineFn) -> Result<IdentityOutcome> {
    let mc = is_min_convex(f, h)?;
    let Some(min) = mc.hull.filter(|_| mc.convex) else {
        return Err(Error::InvalidPair("min{f, h} is not convex".into()));
    };
    let max = f.max_of(h)?;
    Ok(IdentityOutcome {
        lhs: mu.eval(&max)? + mu.eval(&min)?,
        rhs: mu.eval(f)? + mu.eval(h)?,
    })
}

/// `(µ₀(f), …, µ_N(f))` from `µ(λf)` at `λ = 0, …, N`, checked at `λ = N + 1`.
pub fn homogeneous_decompose(mu: &ScalarValuation, f: &MaxAffineFn) -> Result<Vec<Rational>> {
    let n = mu.degree_bound;
    let sample = |lambda: usize| mu.eval(&f.scale(&num::int(lambda as i64))?);
    let values: Vec<Rational> = (0..=n).map(sample).collect::<Result<_>>()?;
    let vandermonde: Vec<Vector> = (0..=n)
        .map(|l| {
            let l = num::int(l as i64);
            let mut row = Vec::with_capacity(n + 1);
            let mut p = Rational::one();
            for _ in 0..=n {
                row.push(p.clone());
                p *= &l;
            }
            row
        })
        .collect();
    let coeffs = num::solve(&vandermonde, &values).expect("Vandermonde matrix on distinct nodes");
    let probe = num::int(n as i64 + 1);
    let predicted = coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * &probe + c);
    if predicted != sample(n + 1)? {
        return Err(Error::NotPolynomial { bound: n });
    }
    Ok(coeffs)
}

/// The symmetric `k`-linear form of a `k`-homogeneous `µ`, by mixed
/// differences: `(1/k!) Σ_S (−1)^{k−|S|} µ(Σ_{j∈S} fⱼ)`.
pub fn polarize(mu: &ScalarValuation, fs: &[MaxAffineFn]) -> Result<Rational> {
    let k = fs.len();
    let Some(first) = fs.first() else {
        return Err(Error::Empty("polarization arguments"));
    };
    let dim = first.dim();
    for f in fs {
        check_dim(dim, f.dim())?;
    }
    let mu = if mu.degree_bound < k { mu.with_degree_bound(k) } else { mu.clone() };
    let mut total = MaxAffineFn::zero(dim);
    for f in fs {
        total = total.add(f)?;
    }
    let coeffs = homogeneous_decompose(&mu, &total)?;
    if coeffs.iter().enumerate().any(|(d, c)| d != k && !c.is_zero()) {
        return Err(Error::NotHomogeneous { degree: k });
    }
    let mut acc = Rational::zero();
    for mask in 0..(1usize << k) {
        let mut g = MaxAffineFn::zero(dim);
        for (j, f) in fs.iter().enumerate() {
            if mask >> j & 1 == 1 {
                g = g.add(f)?;
            }
        }
        let v = mu.eval(&g)?;
        if (k - mask.count_ones() as usize) % 2 == 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    Ok(acc / num::factorial(k))
}

/// Result of modifying `f` away from the probe set of `Ψ(·)[x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityReport {
    pub original: Rational,
    pub modified: Rational,
    /// A point where `max{f, ℓ}` differs from `f`, if any.
    pub differs_at: Option<Vector>,
}

impl LocalityReport {
    pub fn holds(&self) -> bool {
        self.original == self.modified
    }
}

/// Replaces `f` by `h = max{f, ℓ}` where `ℓ` is strictly below `f` on every
/// probe point of `Ψ(·)[x]`, and compares `Ψ(h)[x]` with `Ψ(f)[x]`.
pub fn locality_check(spec: &ValuationSpec, f: &MaxAffineFn, x: &[Rational], ell: &AffinePiece) -> Result<LocalityReport> {
    check_dim(spec.dim(), f.dim())?;
    check_dim(spec.dim(), ell.dim())?;
    for p in spec.probe_set(x) {
        if ell.eval(&p) >= f.eval(&p)? {
            return Err(Error::Rejected(format!(
                "affine modification is not strictly below f at {}",
                num::show_vec(&p)
            )));
        }
    }
    let h = f.max_of(&MaxAffineFn::from_piece(ell.clone()))?;
    Ok(LocalityReport {
        original: psi_eval(spec, f, x)?,
        modified: psi_eval(spec, &h, x)?,
        differs_at: point_above(f, ell),
    })
}

/// A point where `ℓ > f`, found by maximizing the concave gap `ℓ − f`.
fn point_above(f: &MaxAffineFn, ell: &AffinePiece) -> Option<Vector> {
    let dim = f.dim();
    let mut objective = num::zeros(dim + 1);
    objective[dim] = Rational::one();
    let mut lp = Lp::new(vec![Domain::Free; dim + 1], objective);
    for p in f.pieces() {
        // z ≤ ⟨ℓ − a, y⟩ + β − b
        let mut row = num::sub(&p.slope, &ell.slope);
        row.push(Rational::one());
        lp.constraint(row, Sense::Le, &ell.offset - &p.offset);
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

/// Bounded random search for an affine `ℓ` strictly below `f` on the probe
/// set of `Ψ(·)[x]` and strictly above `f` elsewhere.
pub fn random_locality_modification(
    spec: &ValuationSpec,
    f: &MaxAffineFn,
    x: &[Rational],
    rng: &mut Sampler,
    attempts: usize,
) -> Option<AffinePiece> {
    let probes = spec.probe_set(x);
    for _ in 0..attempts {
        let slope = rng.vector(f.dim());
        let room = probes
            .iter()
            .map(|p| f.eval_unchecked(p) - num::dot(&slope, p))
            .min()
            .expect("probe set contains the origin");
        let ell = AffinePiece::new(slope, room - rng.positive_rational());
        if point_above(f, &ell).is_some() {
            return Some(ell);
        }
    }
    None
}

/// `Ψ(f + h/j)[x] − Ψ(f)[x]` against `(Ψ(h)[x] − Ψ(0)[x]) / j`.
pub fn convergence_probe(spec: &ValuationSpec, f: &MaxAffineFn, h: &MaxAffineFn, j: u32, x: &[Rational]) -> Result<(Rational, Rational)> {
    let inv = Rational::new(1.into(), j.into());
    let fj = f.add(&h.scale(&inv)?)?;
    let step = psi_eval(spec, &fj, x)? - psi_eval(spec, f, x)?;
    let rate = (psi_eval(spec, h, x)? - psi_eval(spec, &MaxAffineFn::zero(spec.dim()), x)?) * inv;
    Ok((step, rate))
}

/// Default candidate budget for [`falsify_contravariance`].
pub const DEFAULT_BUDGET: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum Falsification {
    Witness {
        candidate: usize,
        witness: EquivarianceWitness,
    },
    Exhausted {
        candidates: usize,
    },
}

/// The `index`-th candidate `(g, f, x)` of the search order: shear parameter
/// `t ∈ {1, −1, 2, −2, …}`, then shear position `(i, j)`, then hinge
/// `max(xᵢ, 0)`, then probe `±e_k`.
pub fn contravariance_candidate(dim: usize, index: usize) -> (RationalMatrix, MaxAffineFn, Vector) {
    let shears = dim * (dim - 1);
    let probes = 2 * dim;
    let per_t = shears * dim * probes;
    let (t_idx, rest) = (index / per_t, index % per_t);
    let (shear_idx, rest) = (rest / (dim * probes), rest % (dim * probes));
    let (hinge_idx, probe_idx) = (rest / probes, rest % probes);
    let magnitude = (t_idx / 2 + 1) as i64;
    let t = if t_idx % 2 == 0 { magnitude } else { -magnitude };
    let i = shear_idx / (dim - 1);
    let mut j = shear_idx % (dim - 1);
    if j >= i {
        j += 1;
    }
    let g = RationalMatrix::shear(dim, i, j, num::int(t));
    let f = MaxAffineFn::hinge(num::unit(dim, hinge_idx), Rational::zero()).expect("nonzero direction");
    let e = num::unit(dim, probe_idx / 2);
    let x = if probe_idx % 2 == 0 { e } else { num::neg(&e) };
    (g, f, x)
}

/// Searches for `Ψ(f∘g)[x] ≠ Ψ(f)[g⁻ᵀx]` among the first `budget`
/// candidates; the lowest-index witness is returned.
pub fn falsify_contravariance(spec: &ValuationSpec, budget: usize) -> Result<Falsification> {
    if spec.variant() != Variant::EquivariantEq1 {
        return Err(Error::Rejected(format!(
            "contravariance search expects the equivariant family, got {}",
            spec.variant().name()
        )));
    }
    if spec.dim() < 3 {
        return Err(Error::Rejected("contravariance search needs dimension at least 3".into()));
    }
    if spec.nu().atoms().iter().all(|a| a.w.is_zero()) {
        return Err(Error::Rejected("constant valuation is trivially contravariant".into()));
    }
    let dim = spec.dim();
    let found = (0..budget).into_par_iter().find_map_first(|k| {
        let (g, f, x) = contravariance_candidate(dim, k);
        match EquivarianceWitness::evaluate(spec, Mode::Contravariant, &f, &g, &x) {
            Ok(w) if w.holds() => None,
            Ok(w) => Some(Ok((k, w))),
            Err(e) => Some(Err(e)),
        }
    });
    Ok(match found.transpose()? {
        Some((candidate, witness)) => Falsification::Witness { candidate, witness },
        None => Falsification::Exhausted { candidates: budget },
    })
}
