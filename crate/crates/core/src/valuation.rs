//! The three characterized families of function-valued valuations and
//! exact checkers for their axioms.

use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::{MaxAffineFn, RationalMatrix};
use crate::error::{check_dim, Error, Result};
use crate::num::{self, Rational, Vector};
use crate::random::Sampler;

/// Default cap on the product of piece counts before each pairwise sum in
/// [`psi_expand`].
pub const DEFAULT_PIECE_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Atom {
    #[serde(with = "num::serde_rational")]
    pub s: Rational,
    #[serde(with = "num::serde_rational")]
    pub w: Rational,
}

/// A finite atomic measure on `ℝ \ {0}` with nonnegative weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
}

#[derive(Serialize, Deserialize)]
struct RawMeasure {
    atoms: Vec<Atom>,
}

impl TryFrom<RawMeasure> for DiscreteMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        DiscreteMeasure::new(raw.atoms.into_iter().map(|a| (a.s, a.w)).collect())
    }
}

impl From<DiscreteMeasure> for RawMeasure {
    fn from(m: DiscreteMeasure) -> Self {
        RawMeasure { atoms: m.atoms }
    }
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<(Rational, Rational)>) -> Result<Self> {
        let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
        for (j, (s, w)) in atoms.into_iter().enumerate() {
            if s.is_zero() {
                return Err(Error::InvalidMeasure(format!("atom {j} has s = 0")));
            }
            if w.is_negative() {
                return Err(Error::InvalidMeasure(format!("atom {j} has negative weight")));
            }
            out.push(Atom { s, w });
        }
        out.sort_by(|a, b| a.s.cmp(&b.s));
        if out.windows(2).any(|p| p[0].s == p[1].s) {
            return Err(Error::InvalidMeasure("repeated atom position".into()));
        }
        Ok(DiscreteMeasure { atoms: out })
    }

    pub fn from_ints(atoms: &[(i64, i64)]) -> Result<Self> {
        Self::new(atoms.iter().map(|&(s, w)| (num::int(s), num::int(w))).collect())
    }

    pub fn empty() -> Self {
        DiscreteMeasure { atoms: Vec::new() }
    }

    /// `{(1, 1), (−1, 1)}`, giving `Ψ(f)[x] = f(x) + f(−x) − 2f(0)`.
    pub fn symmetric_pair() -> Self {
        Self::from_ints(&[(1, 1), (-1, 1)]).expect("valid atoms")
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `Σ wⱼ / sⱼ`
    pub fn moment(&self) -> Rational {
        self.atoms.iter().fold(Rational::zero(), |acc, a| acc + &a.w / &a.s)
    }

    /// `Σ wⱼ / |sⱼ|`
    pub fn abs_moment(&self) -> Rational {
        self.atoms
            .iter()
            .fold(Rational::zero(), |acc, a| acc + &a.w / a.s.abs())
    }

    /// `Σ wⱼ / sⱼ²`
    fn square_moment(&self) -> Rational {
        self.atoms
            .iter()
            .fold(Rational::zero(), |acc, a| acc + &a.w / (&a.s * &a.s))
    }
}

impl fmt::Display for DiscreteMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .atoms
            .iter()
            .map(|a| format!("({}, {})", num::show(&a.s), num::show(&a.w)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeasureReport {
    #[serde(with = "num::serde_rational")]
    pub abs_moment: Rational,
    #[serde(with = "num::serde_rational")]
    pub moment: Rational,
    pub dual_invariant: bool,
    pub pass: bool,
}

/// Moment data of a measure. Finiteness of `Σ w/|s|` is automatic for
/// finitely many atoms.
pub fn validate_measure(nu: &DiscreteMeasure, require_dual_invariance: bool) -> MeasureReport {
    let moment = nu.moment();
    let dual_invariant = moment.is_zero();
    MeasureReport {
        abs_moment: nu.abs_moment(),
        moment,
        dual_invariant,
        pass: dual_invariant || !require_dual_invariance,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// `c + Σ wⱼ (f(sⱼx) − f(0)) / sⱼ²`
    EquivariantEq1,
    /// `c + Σ wⱼ (f(sⱼϑx) − f(0)) / sⱼ²` in the plane
    Contravariant2dEq2,
    /// `c·f(0) + Σ wⱼ (f(sⱼx) − f(0)) / sⱼ²`
    GlEndoEq4,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::EquivariantEq1 => "EquivariantEq1",
            Variant::Contravariant2dEq2 => "Contravariant2dEq2",
            Variant::GlEndoEq4 => "GlEndoEq4",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct ValuationSpec {
    variant: Variant,
    dim: usize,
    c: Rational,
    nu: DiscreteMeasure,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    variant: Variant,
    dim: usize,
    #[serde(with = "num::serde_rational")]
    c: Rational,
    nu: DiscreteMeasure,
}

impl TryFrom<RawSpec> for ValuationSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        ValuationSpec::new(raw.variant, raw.dim, raw.c, raw.nu)
    }
}

impl From<ValuationSpec> for RawSpec {
    fn from(s: ValuationSpec) -> Self {
        RawSpec {
            variant: s.variant,
            dim: s.dim,
            c: s.c,
            nu: s.nu,
        }
    }
}

impl ValuationSpec {
    pub fn new(variant: Variant, dim: usize, c: Rational, nu: DiscreteMeasure) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Rejected("dimension must be positive".into()));
        }
        if variant == Variant::Contravariant2dEq2 && dim != 2 {
            return Err(Error::VariantDimension {
                variant: variant.name(),
                required: 2,
                got: dim,
            });
        }
        Ok(ValuationSpec { variant, dim, c, nu })
    }

    pub fn eq1(dim: usize, c: Rational, nu: DiscreteMeasure) -> Result<Self> {
        Self::new(Variant::EquivariantEq1, dim, c, nu)
    }

    pub fn eq2(c: Rational, nu: DiscreteMeasure) -> Result<Self> {
        Self::new(Variant::Contravariant2dEq2, 2, c, nu)
    }

    pub fn eq4(dim: usize, c: Rational, nu: DiscreteMeasure) -> Result<Self> {
        Self::new(Variant::GlEndoEq4, dim, c, nu)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn nu(&self) -> &DiscreteMeasure {
        &self.nu
    }

    pub fn with_c(&self, c: Rational) -> Self {
        ValuationSpec { c, ..self.clone() }
    }

    /// The point `f` is probed at for atom `s`: `s·x`, or `s·ϑx` in the
    /// contravariant plane family.
    fn probe(&self, s: &Rational, x: &[Rational]) -> Vector {
        match self.variant {
            Variant::Contravariant2dEq2 => vec![-(s * &x[1]), s * &x[0]],
            _ => num::scale(x, s),
        }
    }

    /// Every point at which [`psi_eval`] reads `f` for the argument `x`.
    pub fn probe_set(&self, x: &[Rational]) -> Vec<Vector> {
        let mut out = vec![num::zeros(self.dim)];
        out.extend(self.nu.atoms.iter().map(|a| self.probe(&a.s, x)));
        out
    }
}

impl fmt::Display for ValuationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (n = {}, c = {}, nu = {})",
            self.variant.name(),
            self.dim,
            num::show(&self.c),
            self.nu
        )
    }
}

/// `Ψ(f)[x]`, exactly.
pub fn psi_eval(spec: &ValuationSpec, f: &MaxAffineFn, x: &[Rational]) -> Result<Rational> {
    check_dim(spec.dim, f.dim())?;
    check_dim(spec.dim, x.len())?;
    let f0 = f.at_origin();
    let mut total = match spec.variant {
        Variant::GlEndoEq4 => &spec.c * &f0,
        _ => spec.c.clone(),
    };
    for a in &spec.nu.atoms {
        let y = spec.probe(&a.s, x);
        total += &a.w * (f.eval_unchecked(&y) - &f0) / (&a.s * &a.s);
    }
    Ok(total)
}

/// `Ψ(f)` as an explicit max-affine function with the default piece cap.
pub fn psi_expand(spec: &ValuationSpec, f: &MaxAffineFn) -> Result<MaxAffineFn> {
    psi_expand_capped(spec, f, DEFAULT_PIECE_CAP)
}

/// `Σⱼ (wⱼ/sⱼ²)·f(sⱼ·) + const`, summed one atom at a time. Fails with a
/// capacity error when the next pairwise sum could exceed `cap` pieces.
pub fn psi_expand_capped(spec: &ValuationSpec, f: &MaxAffineFn, cap: usize) -> Result<MaxAffineFn> {
    check_dim(spec.dim, f.dim())?;
    let f0 = f.at_origin();
    let base = match spec.variant {
        Variant::GlEndoEq4 => &spec.c * &f0,
        _ => spec.c.clone(),
    };
    let constant = base - &f0 * spec.nu.square_moment();
    let mut acc: Option<MaxAffineFn> = None;
    for a in spec.nu.atoms.iter().filter(|a| !a.w.is_zero()) {
        let inner = match spec.variant {
            Variant::Contravariant2dEq2 => {
                let m = RationalMatrix::quarter_turn().mul(&RationalMatrix::diagonal(vec![
                    a.s.clone(),
                    a.s.clone(),
                ]))?;
                f.compose_linear(&m)?
            }
            _ => f.compose_scalar(&a.s),
        };
        let term = inner.scale(&(&a.w / (&a.s * &a.s)))?;
        acc = Some(match acc {
            None => term,
            Some(prev) => {
                let count = prev.len().saturating_mul(term.len());
                if count > cap {
                    return Err(Error::Capacity { count, cap });
                }
                prev.add(&term)?
            }
        });
    }
    match acc {
        None => Ok(MaxAffineFn::constant(spec.dim, constant)),
        Some(g) => g.add_affine(&num::zeros(spec.dim), &constant),
    }
}

/// Tallies of a randomized exact check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport<W> {
    pub trials: usize,
    pub passed: usize,
    pub witnesses: Vec<W>,
}

impl<W> CheckReport<W> {
    pub fn from_outcomes(outcomes: Vec<Option<W>>) -> Self {
        let trials = outcomes.len();
        let witnesses: Vec<W> = outcomes.into_iter().flatten().collect();
        CheckReport {
            trials,
            passed: trials - witnesses.len(),
            witnesses,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// `Ψ(f + ℓ)[x] ≠ Ψ(f)[x]` for the affine map `ℓ(x) = ⟨slope, x⟩ + offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceWitness {
    pub spec: ValuationSpec,
    pub f: MaxAffineFn,
    #[serde(with = "num::serde_vector")]
    pub slope: Vector,
    #[serde(with = "num::serde_rational")]
    pub offset: Rational,
    #[serde(with = "num::serde_vector")]
    pub x: Vector,
    #[serde(with = "num::serde_rational")]
    pub shifted: Rational,
    #[serde(with = "num::serde_rational")]
    pub original: Rational,
}

impl InvarianceWitness {
    pub fn evaluate(
        spec: &ValuationSpec,
        f: &MaxAffineFn,
        slope: &[Rational],
        offset: &Rational,
        x: &[Rational],
    ) -> Result<Self> {
        let shifted = psi_eval(spec, &f.add_affine(slope, offset)?, x)?;
        let original = psi_eval(spec, f, x)?;
        Ok(InvarianceWitness {
            spec: spec.clone(),
            f: f.clone(),
            slope: slope.to_vec(),
            offset: offset.clone(),
            x: x.to_vec(),
            shifted,
            original,
        })
    }

    pub fn holds(&self) -> bool {
        self.shifted == self.original
    }

    pub fn gap(&self) -> Rational {
        &self.shifted - &self.original
    }
}

/// Random trials of `Ψ(f + ℓ) = Ψ(f)` at random points.
pub fn check_dual_epi_invariance(
    spec: &ValuationSpec,
    trials: usize,
    seed: u64,
) -> Result<CheckReport<InvarianceWitness>> {
    let outcomes: Result<Vec<_>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = Sampler::for_trial(seed, t as u64);
            let f = rng.max_affine(spec.dim);
            let slope = rng.vector(spec.dim);
            let offset = rng.rational();
            let x = rng.vector(spec.dim);
            let w = InvarianceWitness::evaluate(spec, &f, &slope, &offset, &x)?;
            Ok((!w.holds()).then_some(w))
        })
        .collect();
    Ok(CheckReport::from_outcomes(outcomes?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `Ψ(f∘g) = Ψ(f)∘g`
    Equivariant,
    /// `Ψ(f∘g) = Ψ(f)∘g⁻ᵀ`
    Contravariant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    SL,
    GL,
}

/// Both sides of the equivariance identity at one `(f, g, x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivarianceWitness {
    pub spec: ValuationSpec,
    pub mode: Mode,
    pub f: MaxAffineFn,
    pub g: RationalMatrix,
    #[serde(with = "num::serde_vector")]
    pub x: Vector,
    /// `Ψ(f∘g)[x]`
    #[serde(with = "num::serde_rational")]
    pub composed: Rational,
    /// `Ψ(f)[gx]` or `Ψ(f)[g⁻ᵀx]`
    #[serde(with = "num::serde_rational")]
    pub transported: Rational,
}

impl EquivarianceWitness {
    pub fn evaluate(
        spec: &ValuationSpec,
        mode: Mode,
        f: &MaxAffineFn,
        g: &RationalMatrix,
        x: &[Rational],
    ) -> Result<Self> {
        check_dim(spec.dim, g.dim())?;
        let composed = psi_eval(spec, &f.compose_linear(g)?, x)?;
        let y = match mode {
            Mode::Equivariant => g.apply(x)?,
            Mode::Contravariant => g.inverse_transpose()?.apply(x)?,
        };
        let transported = psi_eval(spec, f, &y)?;
        Ok(EquivarianceWitness {
            spec: spec.clone(),
            mode,
            f: f.clone(),
            g: g.clone(),
            x: x.to_vec(),
            composed,
            transported,
        })
    }

    pub fn holds(&self) -> bool {
        self.composed == self.transported
    }

    pub fn gap(&self) -> Rational {
        &self.composed - &self.transported
    }
}

/// Random trials of the equivariance identity over sampled group words.
pub fn check_equivariance(
    spec: &ValuationSpec,
    mode: Mode,
    group: Group,
    trials: usize,
    seed: u64,
) -> Result<CheckReport<EquivarianceWitness>> {
    let outcomes: Result<Vec<_>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = Sampler::for_trial(seed, t as u64);
            let g = rng.group_element(spec.dim, group);
            let f = rng.max_affine(spec.dim);
            let x = rng.vector(spec.dim);
            let w = EquivarianceWitness::evaluate(spec, mode, &f, &g, &x)?;
            Ok((!w.holds()).then_some(w))
        })
        .collect();
    Ok(CheckReport::from_outcomes(outcomes?))
}

/// `⟨x, v(f)⟩`: turns a vector-valued map into a function-valued one.
pub fn lift_vector_map<V>(v: V, f: &MaxAffineFn, x: &[Rational]) -> Result<Rational>
where
    V: Fn(&MaxAffineFn) -> Result<Vector>,
{
    check_dim(f.dim(), x.len())?;
    let value = v(f)?;
    check_dim(f.dim(), value.len())?;
    Ok(num::dot(x, &value))
}

/// Whether `Ψ(f)[x] = c` for every `f` and `x`.
pub fn is_constant_family(spec: &ValuationSpec) -> bool {
    spec.variant != Variant::GlEndoEq4 && spec.nu.atoms.iter().all(|a| a.w.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::AffinePiece;
    use crate::num::{frac, int, vec_of};

    fn diff_spec(dim: usize) -> ValuationSpec {
        ValuationSpec::eq1(dim, int(0), DiscreteMeasure::symmetric_pair()).unwrap()
    }

    fn sample_f() -> MaxAffineFn {
        MaxAffineFn::new(
            2,
            vec![
                AffinePiece::new(vec_of(&[1, 0]), int(1)),
                AffinePiece::new(vec_of(&[-1, 0]), int(0)),
                AffinePiece::new(vec_of(&[0, 1]), int(0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn measure_moments() {
        let r = validate_measure(&DiscreteMeasure::symmetric_pair(), true);
        assert!(r.pass && r.moment.is_zero());
        assert_eq!(r.abs_moment, int(2));
        let r = validate_measure(&DiscreteMeasure::from_ints(&[(2, 1)]).unwrap(), true);
        assert!(!r.pass);
        assert_eq!(r.moment, frac(1, 2));
        let r = validate_measure(&DiscreteMeasure::from_ints(&[(1, 1), (-2, 2)]).unwrap(), true);
        assert!(r.pass);
        assert!(DiscreteMeasure::from_ints(&[(0, 1)]).is_err());
        assert!(DiscreteMeasure::from_ints(&[(1, -1)]).is_err());
        assert!(DiscreteMeasure::from_ints(&[(1, 1), (1, 2)]).is_err());
    }

    #[test]
    fn psi_eval_examples() {
        let spec = diff_spec(2);
        // f(x) + f(−x) − 2f(0) at (1,0): 2 + 1 − 2
        assert_eq!(psi_eval(&spec, &sample_f(), &vec_of(&[1, 0])).unwrap(), int(1));
        let aff = MaxAffineFn::affine(vec_of(&[3, -2]), frac(7, 3));
        assert_eq!(psi_eval(&spec, &aff, &vec_of(&[5, 1])).unwrap(), int(0));
        let constant = ValuationSpec::eq1(2, int(5), DiscreteMeasure::empty()).unwrap();
        assert_eq!(psi_eval(&constant, &sample_f(), &vec_of(&[4, -9])).unwrap(), int(5));
        assert!(matches!(
            ValuationSpec::new(Variant::Contravariant2dEq2, 3, int(0), DiscreteMeasure::empty()),
            Err(Error::VariantDimension { .. })
        ));
    }

    #[test]
    fn eq2_probes_rotated_point() {
        let spec = ValuationSpec::eq2(int(0), DiscreteMeasure::from_ints(&[(2, 4)]).unwrap())
            .unwrap();
        let f = MaxAffineFn::hinge(vec_of(&[0, 1]), int(0)).unwrap();
        // ϑ(1,0) = (0,1); f(2·(0,1)) = 2; 4·2/4 = 2
        assert_eq!(psi_eval(&spec, &f, &vec_of(&[1, 0])).unwrap(), int(2));
        assert_eq!(psi_eval(&spec, &f, &vec_of(&[0, 1])).unwrap(), int(0));
    }

    #[test]
    fn expand_difference_function_of_hinge() {
        let f = MaxAffineFn::hinge(vec_of(&[1]), int(0)).unwrap();
        let g = psi_expand(&diff_spec(1), &f).unwrap();
        let abs = MaxAffineFn::new(
            1,
            vec![
                AffinePiece::new(vec_of(&[1]), int(0)),
                AffinePiece::new(vec_of(&[-1]), int(0)),
            ],
        )
        .unwrap();
        assert_eq!(g, abs);
        let constant = ValuationSpec::eq1(1, frac(2, 3), DiscreteMeasure::empty()).unwrap();
        assert_eq!(
            psi_expand(&constant, &f).unwrap(),
            MaxAffineFn::constant(1, frac(2, 3))
        );
    }

    #[test]
    fn expand_agrees_with_eval() {
        let nu = DiscreteMeasure::new(vec![(int(1), int(2)), (frac(-1, 2), int(1)), (int(3), frac(1, 3))])
            .unwrap();
        for variant in [Variant::EquivariantEq1, Variant::Contravariant2dEq2, Variant::GlEndoEq4] {
            let spec = ValuationSpec::new(variant, 2, frac(3, 2), nu.clone()).unwrap();
            let f = sample_f();
            let g = psi_expand(&spec, &f).unwrap();
            for (a, b) in [(0, 0), (1, 0), (-3, 2), (5, -7), (2, 2)] {
                let x = vec![frac(a, 3), frac(b, 2)];
                assert_eq!(g.eval(&x).unwrap(), psi_eval(&spec, &f, &x).unwrap());
            }
        }
    }

    #[test]
    fn expand_capacity_error() {
        let spec = diff_spec(2);
        assert!(matches!(
            psi_expand_capped(&spec, &sample_f(), 2),
            Err(Error::Capacity { count: 9, cap: 2 })
        ));
    }

    #[test]
    fn dual_invariance_witness_by_hand() {
        let spec = ValuationSpec::eq1(1, int(0), DiscreteMeasure::from_ints(&[(2, 1)]).unwrap())
            .unwrap();
        let f = MaxAffineFn::zero(1);
        let w = InvarianceWitness::evaluate(&spec, &f, &vec_of(&[1]), &int(0), &vec_of(&[1])).unwrap();
        assert_eq!(w.gap(), frac(1, 2));
        let w = InvarianceWitness::evaluate(&spec, &f, &vec_of(&[0]), &int(9), &vec_of(&[1])).unwrap();
        assert!(w.holds());
        assert!(check_dual_epi_invariance(&spec, 20, 3).unwrap().witnesses.len() > 0);
        assert!(check_dual_epi_invariance(&diff_spec(3), 20, 3).unwrap().all_passed());
    }

    #[test]
    fn equivariance_checks() {
        let spec = diff_spec(3);
        assert!(check_equivariance(&spec, Mode::Equivariant, Group::GL, 20, 5)
            .unwrap()
            .all_passed());
        let eq2 = ValuationSpec::eq2(int(1), DiscreteMeasure::symmetric_pair()).unwrap();
        assert!(check_equivariance(&eq2, Mode::Contravariant, Group::SL, 20, 5)
            .unwrap()
            .all_passed());
    }

    #[test]
    fn shear_witness_for_contravariance() {
        let spec = diff_spec(3);
        let f = MaxAffineFn::hinge(vec_of(&[1, 0, 0]), int(0)).unwrap();
        let g = RationalMatrix::shear(3, 0, 1, int(1));
        let w = EquivarianceWitness::evaluate(&spec, Mode::Contravariant, &f, &g, &vec_of(&[0, 1, 0]))
            .unwrap();
        assert_eq!(w.composed, int(1));
        assert_eq!(w.transported, int(0));
    }

    #[test]
    fn lifted_vector_maps() {
        let f = MaxAffineFn::new(
            2,
            vec![
                AffinePiece::new(vec_of(&[1, 0]), int(0)),
                AffinePiece::new(vec_of(&[-1, 0]), int(0)),
            ],
        )
        .unwrap();
        let zero = |g: &MaxAffineFn| Ok(num::zeros(g.dim()));
        assert_eq!(lift_vector_map(zero, &f, &vec_of(&[3, 4])).unwrap(), int(0));
        let odd = |g: &MaxAffineFn| {
            let e1 = num::unit(2, 0);
            let d = (g.eval(&e1)? - g.eval(&num::neg(&e1))?) / int(2);
            Ok(num::scale(&e1, &d))
        };
        assert_eq!(lift_vector_map(odd, &f, &vec_of(&[3, 4])).unwrap(), int(0));
        assert_eq!(lift_vector_map(odd, &sample_f(), &num::zeros(2)).unwrap(), int(0));
    }

    #[test]
    fn serde_round_trip() {
        let spec = ValuationSpec::eq4(3, frac(3, 6), DiscreteMeasure::symmetric_pair()).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"1/2\""));
        let back: ValuationSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let bad = r#"{"atoms":[{"s":"0/1","w":"1"}]}"#;
        assert!(serde_json::from_str::<DiscreteMeasure>(bad).is_err());
    }
}
