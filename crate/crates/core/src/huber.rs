//! Descriptors for the Huber rings attached to the disc and the bounded
//! element questions about them: power-boundedness, topological nilpotence,
//! rational localization, the continuity criterion for valuations, and the
//! maximum-modulus witness for series of Gauss norm above 1.
//!
//! Verdicts are three-valued. `True` and `False` always come with an exact
//! certificate: either a norm value computed in closed form or a sampled
//! point whose evaluation violates the bound (the evaluation itself is
//! exact, only the search was a sample). `Unknown` is reserved for the
//! localized shapes whose sup norm we do not compute in closed form.

use crate::error::Error;
use crate::ordgroup::{self, ConvexSubgroup, GroupValue};
use crate::points::{self, PointDescriptor, Radius};
use crate::scalar::{self, ExtInt, Prime};
use crate::tate::{self, TateSeries};
use crate::topology::{self, Openness, RationalSubset, SpvPoint};
use crate::Result;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

/// A Huber ring presented symbolically, with its pair of definition.
///
/// The three base rings share the variable `w`; localization records the
/// defining fractions rather than any completed presentation. A `Localized`
/// descriptor is only constructed through [`localize`], which checks that
/// the fraction data generates an open ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingDescriptor {
    /// `ℂ_p⟨w⟩` with the Gauss norm; Tate, pair `(𝒪_{ℂ_p}⟨w⟩, (p))`.
    TateAlgebra,
    /// The rational polynomials `ℚ[w]` with the topology induced from
    /// `ℂ_p⟨w⟩`; same pair of definition, restricted.
    PolyRing,
    /// `ℤ_p[[w]]` with the `(p, w)`-adic topology; pair `(ℤ_p[[w]], (p, w))`.
    FormalPowerSeries,
    /// `base(T/s)`: functions on the rational subset `|t| ≤ |s| ≠ 0`,
    /// `t ∈ T`.
    Localized {
        base: Box<RingDescriptor>,
        numerators: Vec<TateSeries>,
        denominator: TateSeries,
    },
}

impl RingDescriptor {
    /// Ring of definition and ideal-of-definition generators, symbolically.
    /// Localization keeps the base's ideal of definition: the localized ring
    /// of definition is the base one with the fractions adjoined.
    pub fn pair_of_definition(&self) -> (String, Vec<String>) {
        match self {
            RingDescriptor::TateAlgebra => ("O_Cp<w>".to_string(), vec!["p".to_string()]),
            RingDescriptor::PolyRing => {
                ("O_Cp<w> ∩ Q[w]".to_string(), vec!["p".to_string()])
            }
            RingDescriptor::FormalPowerSeries => {
                ("Z_p[[w]]".to_string(), vec!["p".to_string(), "w".to_string()])
            }
            RingDescriptor::Localized {
                base,
                numerators,
                denominator,
            } => {
                let (a0, ideal) = base.pair_of_definition();
                let nums = numerators
                    .iter()
                    .map(|g| g.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                (format!("{a0}<({nums})/({denominator})>"), ideal)
            }
        }
    }

    /// For `base(T/p^m)` over a Gauss-normed base with monomial numerators
    /// `c·w^j`, the exponent `q ≥ 0` such that the localized ring is normed
    /// by the radius-`p^{−q}` Gauss norm: the subset is the subdisc
    /// `|w| ≤ p^{−q}`. `None` when the shape does not reduce to a subdisc,
    /// including an empty region forced by a scalar numerator larger than
    /// the denominator.
    pub fn wedge_exponent(&self, p: Prime) -> Option<BigRational> {
        let RingDescriptor::Localized {
            base,
            numerators,
            denominator,
        } = self
        else {
            return None;
        };
        if !matches!(
            **base,
            RingDescriptor::TateAlgebra | RingDescriptor::PolyRing
        ) {
            return None;
        }
        if denominator.degree() != Some(0) {
            return None;
        }
        let m = match scalar::vp(&denominator.coeffs()[0], p) {
            ExtInt::Finite(v) => scalar::int(v),
            ExtInt::Infinity => return None,
        };
        let mut q = BigRational::zero();
        for g in numerators {
            let coeffs = g.coeffs();
            if !g.is_polynomial() || coeffs.iter().filter(|c| !c.is_zero()).count() != 1 {
                return None;
            }
            let j = coeffs.iter().position(|c| !c.is_zero()).unwrap();
            let v = match scalar::vp(&coeffs[j], p) {
                ExtInt::Finite(v) => scalar::int(v),
                ExtInt::Infinity => unreachable!("coefficient filtered non-zero"),
            };
            let need = &m - &v;
            if j == 0 {
                // Scalar constraint `|c| ≤ |p^m|` holds everywhere or nowhere.
                if need.is_positive() {
                    return None;
                }
            } else {
                let qi = need / BigRational::from_integer(j.into());
                if qi > q {
                    q = qi;
                }
            }
        }
        Some(q)
    }
}

impl std::fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingDescriptor::TateAlgebra => write!(f, "Cp<w>"),
            RingDescriptor::PolyRing => write!(f, "Q[w]"),
            RingDescriptor::FormalPowerSeries => write!(f, "Zp[[w]]"),
            RingDescriptor::Localized {
                base,
                numerators,
                denominator,
            } => {
                let nums = numerators
                    .iter()
                    .map(|g| g.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                write!(f, "{base}(({nums})/({denominator}))")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundedStatus {
    True,
    False,
    Unknown,
}

/// Evidence attached to a definite verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundedCertificate {
    /// The element's exact sup norm in the ring's natural norm.
    ExactNorm(GroupValue),
    /// A containment argument that needs no norm at all.
    Structural(&'static str),
    /// A point of the localized region where the bound fails, with the exact
    /// value there.
    SampledWitness {
        point: PointDescriptor,
        value: GroupValue,
    },
}

/// Three-valued answer to a boundedness question. `True` and `False` carry
/// a certificate; `Unknown` never does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedVerdict {
    pub status: BoundedStatus,
    pub certificate: Option<BoundedCertificate>,
}

impl BoundedVerdict {
    fn certain(status: BoundedStatus, certificate: BoundedCertificate) -> BoundedVerdict {
        BoundedVerdict {
            status,
            certificate: Some(certificate),
        }
    }

    fn unknown() -> BoundedVerdict {
        BoundedVerdict {
            status: BoundedStatus::Unknown,
            certificate: None,
        }
    }
}

/// Which bound a query asks about: `‖f‖ ≤ 1` for power-boundedness,
/// `‖f‖ < 1` for topological nilpotence.
#[derive(Clone, Copy, PartialEq, Eq)]
enum BoundKind {
    AtMostOne,
    BelowOne,
}

/// Whether `f ∈ A°`: `f` power-bounded in the given ring.
///
/// Gauss-normed rings decide exactly by `gaussNorm(f) ≤ 1`; an uncertified
/// tail yields `Unknown`. In `ℤ_p[[w]]` the whole ring is a ring of
/// definition, so membership alone settles the question. Localizations by a
/// subdisc wedge use the radius-shifted Gauss norm; other localized shapes
/// fall back to sampling and can only answer `False` (with an exact witness)
/// or `Unknown`.
pub fn is_power_bounded(
    f: &TateSeries,
    ring: &RingDescriptor,
    p: Prime,
) -> Result<BoundedVerdict> {
    bounded_question(f, ring, p, BoundKind::AtMostOne)
}

/// Whether `f ∈ A°°`: powers of `f` tend to zero. Same decision surface as
/// [`is_power_bounded`] with the strict bound; in `ℤ_p[[w]]` this is
/// membership in the maximal ideal `(p, w)`, read off the constant term.
pub fn is_topologically_nilpotent(
    f: &TateSeries,
    ring: &RingDescriptor,
    p: Prime,
) -> Result<BoundedVerdict> {
    bounded_question(f, ring, p, BoundKind::BelowOne)
}

fn bounded_question(
    f: &TateSeries,
    ring: &RingDescriptor,
    p: Prime,
    kind: BoundKind,
) -> Result<BoundedVerdict> {
    match ring {
        RingDescriptor::TateAlgebra => norm_question(f, p, &BigRational::zero(), kind),
        RingDescriptor::PolyRing => {
            if !f.is_polynomial() {
                return Err(Error::NotInRing);
            }
            norm_question(f, p, &BigRational::zero(), kind)
        }
        RingDescriptor::FormalPowerSeries => fps_question(f, p, kind),
        RingDescriptor::Localized {
            numerators,
            denominator,
            ..
        } => match ring.wedge_exponent(p) {
            Some(q) => norm_question(f, p, &q, kind),
            None => sampled_question(f, numerators, denominator, p, kind),
        },
    }
}

fn norm_question(
    f: &TateSeries,
    p: Prime,
    q: &BigRational,
    kind: BoundKind,
) -> Result<BoundedVerdict> {
    let norm = match tate::r_gauss_norm(f, p, q) {
        Ok(n) => n,
        Err(Error::UncertainTail) => return Ok(BoundedVerdict::unknown()),
        Err(e) => return Err(e),
    };
    let ok = match &norm {
        GroupValue::Zero => true,
        n => {
            let id = ordgroup::identity(&n.ambient().expect("non-zero value has an ambient"));
            let c = ordgroup::cmp(p, n, &id)?;
            match kind {
                BoundKind::AtMostOne => c != Ordering::Greater,
                BoundKind::BelowOne => c == Ordering::Less,
            }
        }
    };
    let status = if ok {
        BoundedStatus::True
    } else {
        BoundedStatus::False
    };
    Ok(BoundedVerdict::certain(
        status,
        BoundedCertificate::ExactNorm(norm),
    ))
}

fn fps_question(f: &TateSeries, p: Prime, kind: BoundKind) -> Result<BoundedVerdict> {
    for c in f.coeffs() {
        if let ExtInt::Finite(v) = scalar::vp(c, p) {
            if v < 0 {
                return Err(Error::NotInRing);
            }
        }
    }
    if let ExtInt::Finite(b) = f.tail_bound() {
        if b < 0 {
            return Err(Error::NotInRing);
        }
    }
    if kind == BoundKind::AtMostOne {
        return Ok(BoundedVerdict::certain(
            BoundedStatus::True,
            BoundedCertificate::Structural(
                "the whole ring is a ring of definition, so every subset is bounded",
            ),
        ));
    }
    // Topological nilpotence in the (p, w)-adic topology is membership in
    // the maximal ideal, i.e. a constant term divisible by p.
    let constant_in_p = match f.explicit_coeff(0) {
        c if c.is_zero() && f.coeffs().is_empty() => match f.tail_bound() {
            ExtInt::Infinity => Some(true),
            ExtInt::Finite(b) if b >= 1 => Some(true),
            ExtInt::Finite(_) => None,
        },
        c => match scalar::vp(&c, p) {
            ExtInt::Infinity => Some(true),
            ExtInt::Finite(v) => Some(v >= 1),
        },
    };
    Ok(match constant_in_p {
        Some(true) => BoundedVerdict::certain(
            BoundedStatus::True,
            BoundedCertificate::Structural(
                "lies in the ideal of definition (p, w); its powers fall into the ideal's powers",
            ),
        ),
        Some(false) => BoundedVerdict::certain(
            BoundedStatus::False,
            BoundedCertificate::Structural(
                "unit constant term keeps every power out of (p, w)",
            ),
        ),
        None => BoundedVerdict::unknown(),
    })
}

fn sampled_question(
    f: &TateSeries,
    numerators: &[TateSeries],
    denominator: &TateSeries,
    p: Prime,
    kind: BoundKind,
) -> Result<BoundedVerdict> {
    let subset = RationalSubset::new(numerators.to_vec(), denominator.clone());
    for x in sample_points(p) {
        if !topology::member(&x, &subset, p)? {
            continue;
        }
        // Evaluation refusals (truncated series at a classical point, say)
        // skip the point: the search is best-effort anyway.
        let Ok(v) = points::evaluate(f, &x, p) else {
            continue;
        };
        if v.is_zero() {
            continue;
        }
        let id = ordgroup::identity(&v.ambient().expect("non-zero value has an ambient"));
        let c = ordgroup::cmp(p, &v, &id)?;
        let violation = match kind {
            BoundKind::AtMostOne => c == Ordering::Greater,
            BoundKind::BelowOne => c != Ordering::Less,
        };
        if violation {
            return Ok(BoundedVerdict::certain(
                BoundedStatus::False,
                BoundedCertificate::SampledWitness { point: x, value: v },
            ));
        }
    }
    Ok(BoundedVerdict::unknown())
}

/// Fixed catalog pool used by the sampled fallbacks; constructor failures
/// (a center or radius invalid at this prime) silently drop the candidate.
fn sample_points(p: Prime) -> Vec<PointDescriptor> {
    let mut pool = Vec::new();
    let pr = p.to_rational();
    let centers = [
        BigRational::zero(),
        BigRational::one(),
        -BigRational::one(),
        scalar::ratio(2, 1),
        scalar::ratio(1, 2),
        scalar::ratio(1, 3),
        pr.clone(),
        -&pr,
        BigRational::one() + &pr,
        &pr * &pr,
    ];
    for c in &centers {
        if let Ok(x) = PointDescriptor::classical(p, c.clone()) {
            pool.push(x);
        }
    }
    pool.push(PointDescriptor::gauss());
    for (alpha, q) in [
        (BigRational::zero(), scalar::ratio(1, 1)),
        (BigRational::zero(), scalar::ratio(2, 1)),
        (BigRational::zero(), scalar::ratio(1, 2)),
        (BigRational::one(), scalar::ratio(1, 1)),
    ] {
        if let Ok(r) = Radius::p_power(q) {
            if let Ok(x) = PointDescriptor::disc(p, alpha, r) {
                pool.push(x);
            }
        }
    }
    if let Ok(r) = Radius::plain(p, scalar::ratio(1, 2)) {
        if let Ok(x) = PointDescriptor::disc(p, BigRational::zero(), r) {
            pool.push(x);
        }
    }
    if let Ok(x) = PointDescriptor::x1_minus(p) {
        pool.push(x);
    }
    if let Ok(ctx) = crate::ffield::FqContext::new(p, 1) {
        let one = ctx.one();
        if let Ok(x) = PointDescriptor::type5(
            p,
            BigRational::zero(),
            BigRational::one(),
            ctx.clone(),
            crate::ffield::P1Point::Finite(one),
        ) {
            pool.push(x);
        }
        if let Ok(x) = PointDescriptor::type5(
            p,
            BigRational::zero(),
            BigRational::one(),
            ctx,
            crate::ffield::P1Point::Infinity,
        ) {
            pool.push(x);
        }
    }
    pool
}

/// Rational localization `R ⟶ R(T/s)`.
///
/// Demands that `T ∪ {s}` generate an open ideal of `R`; a `NotOpen`
/// verdict is rejected outright and an `Unknown` one refuses rather than
/// guessing.
pub fn localize(
    ring: &RingDescriptor,
    numerators: &[TateSeries],
    denominator: &TateSeries,
    p: Prime,
) -> Result<RingDescriptor> {
    let mut gens = numerators.to_vec();
    gens.push(denominator.clone());
    match topology::open_ideal(&gens, ring, p)? {
        Openness::Open => Ok(RingDescriptor::Localized {
            base: Box::new(ring.clone()),
            numerators: numerators.to_vec(),
            denominator: denominator.clone(),
        }),
        Openness::NotOpen => Err(Error::NotOpenIdeal),
        Openness::Unknown => Err(Error::UnknownOpenness),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuityVerdict {
    /// Both criteria hold and extend structurally beyond the samples.
    Continuous,
    /// Both criteria hold on the samples, but the point is a truncation
    /// wrapper for which no structural extension is claimed.
    SampledOnly,
    NotContinuous,
}

/// Outcome of the continuity criterion `|p(x)| cofinal` and
/// `|f(x)| < |p(x)|^{−1}` for all integral `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContinuityReport {
    pub cofinal: bool,
    pub bound_holds: bool,
    pub verdict: ContinuityVerdict,
}

/// Continuity of the valuation attached to `x`, tested against `samples`
/// plus `1`, `w` and the scalar `p`.
///
/// Samples must be integral (`gaussNorm ≤ 1`); an overflow is rejected with
/// `NotInRing` since the bound criterion quantifies over the unit ball. For
/// an untruncated catalog point the two checks are decisive: every integral
/// series evaluates with first coordinate `p^{−M}`, `M ≥ 0`, strictly below
/// `|p(x)|^{−1}`, so samples passing is not luck and the verdict is
/// `Continuous`. A truncation killing `|p(x)|` loses the bound (the support
/// swallows `p`) and is reported `NotContinuous`.
pub fn check_continuity(
    x: &SpvPoint,
    samples: &[TateSeries],
    p: Prime,
) -> Result<ContinuityReport> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    for f in samples {
        let n = tate::gauss_norm(f, p)?;
        if let Some(ambient) = n.ambient() {
            if ordgroup::cmp(p, &n, &ordgroup::identity(&ambient))? == Ordering::Greater {
                return Err(Error::NotInRing);
            }
        }
    }
    let p_const = TateSeries::constant(p.to_rational());
    let vp_val = topology::evaluate_truncated(&p_const, x, p)?;
    let cofinal = if vp_val.is_zero() {
        // Zero is below everything, hence cofinal by convention; the bound
        // check is what fails for such a point.
        true
    } else {
        let group = points::classify(&x.base, p)?.value_group;
        ordgroup::is_cofinal(p, &vp_val, &group)?
    };
    let mut bound_holds = !vp_val.is_zero();
    if bound_holds {
        let cap = ordgroup::inv(&vp_val)?;
        let mut all = samples.to_vec();
        all.push(TateSeries::one());
        all.push(TateSeries::variable());
        all.push(p_const);
        for f in &all {
            let v = topology::evaluate_truncated(f, x, p)?;
            if v.is_zero() {
                continue;
            }
            if ordgroup::cmp(p, &v, &cap)? != Ordering::Less {
                bound_holds = false;
                break;
            }
        }
    }
    let verdict = if cofinal && bound_holds {
        if x.truncation == ConvexSubgroup::Full {
            ContinuityVerdict::Continuous
        } else {
            ContinuityVerdict::SampledOnly
        }
    } else {
        ContinuityVerdict::NotContinuous
    };
    Ok(ContinuityReport {
        cofinal,
        bound_holds,
        verdict,
    })
}

/// Deterministic integral-polynomial sample set for continuity checks.
pub fn continuity_sample_set(p: Prime, count: usize, seed: u64) -> Vec<TateSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| topology::random_integral_poly(&mut rng, p))
        .collect()
}

/// Maximum-modulus witness: a series with `gaussNorm(f) > 1` attains that
/// norm at the Gauss point, so it misses the integral subring for a visible
/// reason. Returns the witness point and the exact value there, or `None`
/// when `f` is integral.
pub fn nullstellensatz_witness(
    f: &TateSeries,
    p: Prime,
) -> Result<Option<(PointDescriptor, GroupValue)>> {
    let norm = tate::gauss_norm(f, p)?;
    let Some(ambient) = norm.ambient() else {
        return Ok(None);
    };
    if ordgroup::cmp(p, &norm, &ordgroup::identity(&ambient))? == Ordering::Greater {
        Ok(Some((PointDescriptor::gauss(), norm)))
    } else {
        Ok(None)
    }
}
