//! Rational subsets and membership, openness of finitely generated ideals,
//! the specialization order on the catalog points, closures, vertical
//! generization, and horizontal specialization by convex truncation.
//!
//! Openness decisions are ring-aware. In the Tate algebra an ideal is open
//! exactly when it is the unit ideal, decided through the rational
//! polynomial gcd and its Newton polygon. In `ℤ_p[[w]]` openness means
//! containing a power of `(p, w)`; that is confirmed by a bounded search in
//! nilpotent quotients and refuted by exact certificates (containment in
//! `(p)` or `(w)`, or a common root of positive valuation). When neither
//! side fires within the search depth the answer is `Unknown`, never a
//! guess.

use crate::error::Error;
use crate::ffield::{FqContext, P1Point};
use crate::huber::{self, RingDescriptor};
use crate::ordgroup::{self, ConvexSubgroup, GroupDescriptor, GroupValue};
use crate::points::{self, PointDescriptor, Radius};
use crate::scalar::{self, ExtInt, Prime};
use crate::tate::{self, TateSeries};
use crate::Result;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Verdict on whether a finitely generated ideal is open.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Openness {
    Open,
    NotOpen,
    Unknown,
}

/// Validation state carried by a rational subset: the openness verdict for
/// its generator set, or `Unchecked` before anyone asked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validation {
    Open,
    NotOpen,
    Unknown,
    Unchecked,
}

impl From<Openness> for Validation {
    fn from(o: Openness) -> Validation {
        match o {
            Openness::Open => Validation::Open,
            Openness::NotOpen => Validation::NotOpen,
            Openness::Unknown => Validation::Unknown,
        }
    }
}

/// The sub-basic subset `U(g₁..g_r/s) = {x : |g_i(x)| ≤ |s(x)| ≠ 0}`.
///
/// Membership queries are permitted regardless of validation; calling the
/// set a rational subset of the disc additionally requires the generators
/// together with the denominator to span an open ideal, which
/// [`RationalSubset::validated`] checks and records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSubset {
    pub numerators: Vec<TateSeries>,
    pub denominator: TateSeries,
    pub validation: Validation,
}

impl RationalSubset {
    pub fn new(numerators: Vec<TateSeries>, denominator: TateSeries) -> RationalSubset {
        RationalSubset {
            numerators,
            denominator,
            validation: Validation::Unchecked,
        }
    }

    /// Runs the open-ideal check on `numerators ∪ {denominator}` in the
    /// given ring and stores the verdict.
    pub fn validated(mut self, ring: &RingDescriptor, p: Prime) -> Result<RationalSubset> {
        let mut gens = self.numerators.clone();
        gens.push(self.denominator.clone());
        self.validation = open_ideal(&gens, ring, p)?.into();
        Ok(self)
    }
}

/// `x ∈ U(g₁..g_r/s)`: the denominator does not vanish at `x` and every
/// numerator value is at most the denominator value. With `g = s` this
/// degenerates to `|s(x)| ≠ 0`; nothing cancels.
pub fn member(x: &PointDescriptor, u: &RationalSubset, p: Prime) -> Result<bool> {
    let vs = points::evaluate(&u.denominator, x, p)?;
    if vs.is_zero() {
        return Ok(false);
    }
    for g in &u.numerators {
        let vg = points::evaluate(g, x, p)?;
        if vg.is_zero() {
            continue;
        }
        if ordgroup::cmp(p, &vg, &vs)? == Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Default quotient depth for the bounded openness search in `ℤ_p[[w]]`.
pub const DEFAULT_OPENNESS_DEPTH: usize = 16;

/// Openness of the ideal generated by polynomial `gens` in the given ring,
/// at the default search depth.
pub fn open_ideal(gens: &[TateSeries], ring: &RingDescriptor, p: Prime) -> Result<Openness> {
    open_ideal_with_depth(gens, ring, p, DEFAULT_OPENNESS_DEPTH)
}

/// Openness with an explicit search depth (only the `ℤ_p[[w]]` search reads
/// it).
///
/// * Gauss-normed rings: open iff unit ideal, decided exactly by whether
///   the gcd of the generators over `ℚ[w]` has a root of valuation ≥ 0.
///   A localized ring presenting a subdisc `|w| ≤ p^{−q}` shifts the
///   threshold to valuation ≥ q; localized shapes with no subdisc normal
///   form return `Unknown`.
/// * `ℤ_p[[w]]`: open iff the ideal contains `(p, w)^n` for some `n`. The
///   search confirms this in the quotients `ℤ_p[[w]]/(p^{n+1}, w^{n+1})`
///   for `n ≤ depth` (success at `n` is exact, by the local ring lemma
///   `(p,w)^n ⊆ I + (p,w)^{n+1} ⟹ (p,w)^n ⊆ I`). Refutations are exact
///   certificates; monomial generator sets are always decided. Exhaustion
///   without a certificate yields `Unknown`.
pub fn open_ideal_with_depth(
    gens: &[TateSeries],
    ring: &RingDescriptor,
    p: Prime,
    depth: usize,
) -> Result<Openness> {
    for g in gens {
        if !g.is_polynomial() {
            return Err(Error::NonPolynomialGenerator);
        }
    }
    match ring {
        RingDescriptor::TateAlgebra | RingDescriptor::PolyRing => {
            tate_openness(gens, p, &BigRational::zero())
        }
        RingDescriptor::Localized { .. } => match ring.wedge_exponent(p) {
            Some(q) => tate_openness(gens, p, &q),
            None => Ok(Openness::Unknown),
        },
        RingDescriptor::FormalPowerSeries => fps_openness(gens, p, depth),
    }
}

/// Unit-ideal test over the disc `|w| ≤ p^{−q}` with field coefficients:
/// open exactly when the generators share no root in the disc, i.e. the
/// gcd has no Newton slope `≤ −q` and no `w`-power factor.
fn tate_openness(gens: &[TateSeries], p: Prime, q: &BigRational) -> Result<Openness> {
    let nonzero: Vec<&TateSeries> = gens.iter().filter(|g| !g.is_zero_polynomial()).collect();
    let Some(first) = nonzero.first() else {
        return Ok(Openness::NotOpen);
    };
    let mut gcd = poly_trimmed(first.coeffs());
    for g in &nonzero[1..] {
        gcd = rational_poly_gcd(&gcd, &poly_trimmed(g.coeffs()));
        if gcd.len() == 1 {
            return Ok(Openness::Open);
        }
    }
    if gcd.len() == 1 {
        return Ok(Openness::Open);
    }
    for seg in tate::newton_polygon(&TateSeries::polynomial(gcd), p)? {
        match seg.slope {
            // A w^m factor: root of infinite valuation, inside every disc.
            None => return Ok(Openness::NotOpen),
            Some(s) => {
                if -s >= *q {
                    return Ok(Openness::NotOpen);
                }
            }
        }
    }
    Ok(Openness::Open)
}

fn fps_openness(gens: &[TateSeries], p: Prime, depth: usize) -> Result<Openness> {
    let nonzero: Vec<&TateSeries> = gens.iter().filter(|g| !g.is_zero_polynomial()).collect();
    if nonzero.is_empty() {
        return Ok(Openness::NotOpen);
    }
    let mut vps: Vec<Vec<ExtInt>> = Vec::new();
    for g in &nonzero {
        let v: Vec<ExtInt> = g.coeffs().iter().map(|c| scalar::vp(c, p)).collect();
        for x in &v {
            if let ExtInt::Finite(e) = x {
                if *e < 0 {
                    return Err(Error::NotInRing);
                }
            }
        }
        vps.push(v);
    }
    // A unit somewhere: the ideal is everything.
    if vps.iter().any(|v| v.first() == Some(&ExtInt::Finite(0))) {
        return Ok(Openness::Open);
    }
    // Containment in the height-one primes (p) and (w) refutes openness.
    if vps
        .iter()
        .all(|v| v.iter().all(|x| !matches!(x, ExtInt::Finite(0))))
    {
        return Ok(Openness::NotOpen);
    }
    if nonzero.iter().all(|g| g.explicit_coeff(0).is_zero()) {
        return Ok(Openness::NotOpen);
    }
    // A common root of positive valuation gives a continuous evaluation
    // into 𝒪_{ℂ_p} killing the ideal but no power of (p, w).
    let mut gcd = poly_trimmed(nonzero[0].coeffs());
    for g in &nonzero[1..] {
        if gcd.len() == 1 {
            break;
        }
        gcd = rational_poly_gcd(&gcd, &poly_trimmed(g.coeffs()));
    }
    if gcd.len() > 1 {
        for seg in tate::newton_polygon(&TateSeries::polynomial(gcd), p)? {
            match seg.slope {
                None => return Ok(Openness::NotOpen),
                Some(s) => {
                    if s.is_negative() {
                        return Ok(Openness::NotOpen);
                    }
                }
            }
        }
    }
    // Monomial generator sets are now decided: the two refutations above
    // failed, so some generator is a scalar p^a and some generator is a
    // unit times w^b, and (p^a, w^b) ⊇ (p, w)^{a+b}.
    if nonzero
        .iter()
        .all(|g| g.coeffs().iter().filter(|c| !c.is_zero()).count() == 1)
    {
        return Ok(Openness::Open);
    }
    for n in 0..=depth {
        if m_power_in_span(&nonzero, n, p)? {
            return Ok(Openness::Open);
        }
    }
    Ok(Openness::Unknown)
}

fn poly_trimmed(coeffs: &[BigRational]) -> Vec<BigRational> {
    let mut v = coeffs.to_vec();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Remainder of `a` by nonzero `b` over the rationals.
fn rational_poly_rem(mut a: Vec<BigRational>, b: &[BigRational]) -> Vec<BigRational> {
    let db = b.len() - 1;
    let lead = &b[db];
    while a.len() > db {
        let c = a.last().unwrap() / lead;
        if !c.is_zero() {
            let offset = a.len() - 1 - db;
            for (j, bj) in b.iter().enumerate() {
                let t = &c * bj;
                a[offset + j] -= t;
            }
        }
        a.pop();
        while a.last().is_some_and(|x| x.is_zero()) {
            a.pop();
        }
    }
    a
}

/// Monic gcd over `ℚ[w]` of two trimmed polynomials, at least one nonzero.
fn rational_poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = rational_poly_rem(x, &y);
        x = y;
        y = r;
    }
    let lead = x.last().expect("gcd of non-zero polynomials is non-zero").clone();
    for c in &mut x {
        *c /= &lead;
    }
    x
}

/// Whether `(p, w)^n ⊆ I + (p, w)^{n+1}`, computed in the finite quotient
/// `M = ℤ_p[[w]]/(p^{n+1}, w^{n+1})`: the left side is spanned by the
/// monomials `p^{n−b} w^b`, the right side by the generator shifts
/// `g_i·w^t` together with `p^{n+1−j} w^j`, all as `ℤ/p^{n+1}`-rows over
/// the monomial basis `1, w, .., w^n`.
fn m_power_in_span(gens: &[&TateSeries], n: usize, p: Prime) -> Result<bool> {
    let k = (n + 1) as u32;
    let width = n + 1;
    let mut mat = HowellMatrix::new(p, k, width);
    for g in gens {
        let mut base = vec![BigUint::zero(); width];
        for (i, slot) in base.iter_mut().enumerate() {
            *slot = rational_mod_ppow(&g.explicit_coeff(i), &mat.modulus);
        }
        for t in 0..width {
            let mut row = vec![BigUint::zero(); width];
            row[t..].clone_from_slice(&base[..width - t]);
            mat.insert(row);
        }
    }
    for j in 1..=n {
        let mut row = vec![BigUint::zero(); width];
        row[j] = mat.p.pow((n + 1 - j) as u32);
        mat.insert(row);
    }
    for b in 0..=n {
        let mut target = vec![BigUint::zero(); width];
        target[b] = mat.p.pow((n - b) as u32);
        if !mat.contains(target) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Row-reduced generating set of a submodule of `(ℤ/p^k)^width` in Howell
/// form: one row per leading column, normalized so the leading entry is a
/// power of p, with the annihilator multiples of every pivot folded back in
/// so that greedy reduction decides membership.
struct HowellMatrix {
    p: BigUint,
    modulus: BigUint,
    k: u32,
    rows: BTreeMap<usize, Vec<BigUint>>,
}

impl HowellMatrix {
    fn new(p: Prime, k: u32, _width: usize) -> HowellMatrix {
        let p = BigUint::from(p.get());
        let modulus = p.pow(k);
        HowellMatrix {
            p,
            modulus,
            k,
            rows: BTreeMap::new(),
        }
    }

    fn vp(&self, x: &BigUint) -> u32 {
        let mut v = 0;
        let mut y = x.clone();
        while y.is_multiple_of(&self.p) {
            y /= &self.p;
            v += 1;
        }
        v
    }

    fn sub_multiple(&self, row: &mut [BigUint], pivot: &[BigUint], coeff: &BigUint) {
        for (x, px) in row.iter_mut().zip(pivot) {
            let sub = (px * coeff) % &self.modulus;
            *x = ((&*x + &self.modulus) - sub) % &self.modulus;
        }
    }

    fn insert(&mut self, row: Vec<BigUint>) {
        let mut queue = vec![row];
        while let Some(mut r) = queue.pop() {
            while let Some(c) = r.iter().position(|x| !x.is_zero()) {
                let v = self.vp(&r[c]);
                if let Some(pivot) = self.rows.get(&c) {
                    let pv = self.vp(&pivot[c]);
                    if v >= pv {
                        // Leading entries are powers of p, so the quotient
                        // clears column c exactly and the cursor advances.
                        let coeff = &r[c] / self.p.pow(pv);
                        self.sub_multiple(&mut r, pivot, &coeff);
                        continue;
                    }
                }
                // New pivot (fresh column, or smaller valuation than the
                // old one, which gets re-inserted).
                let unit = &r[c] / self.p.pow(v);
                let inv = mod_inverse(&unit, &self.modulus);
                for x in r.iter_mut() {
                    *x = (&*x * &inv) % &self.modulus;
                }
                if v > 0 {
                    let scale = self.p.pow(self.k - v);
                    let ann: Vec<BigUint> =
                        r.iter().map(|x| (x * &scale) % &self.modulus).collect();
                    queue.push(ann);
                }
                if let Some(old) = self.rows.insert(c, r) {
                    queue.push(old);
                }
                break;
            }
        }
    }

    fn contains(&self, mut r: Vec<BigUint>) -> bool {
        loop {
            let Some(c) = r.iter().position(|x| !x.is_zero()) else {
                return true;
            };
            let Some(pivot) = self.rows.get(&c) else {
                return false;
            };
            let pv = self.vp(&pivot[c]);
            if self.vp(&r[c]) < pv {
                return false;
            }
            let coeff = &r[c] / self.p.pow(pv);
            self.sub_multiple(&mut r, pivot, &coeff);
        }
    }
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> BigUint {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    debug_assert!(e.gcd.is_one(), "inverse of a non-unit");
    e.x.mod_floor(&m).to_biguint().expect("mod_floor is non-negative")
}

/// Reduction of a rational with `vp ≥ 0` modulo `p^k`; the denominator is
/// then coprime to p and inverts.
fn rational_mod_ppow(c: &BigRational, modulus: &BigUint) -> BigUint {
    let m = BigInt::from(modulus.clone());
    let num = c.numer().mod_floor(&m).to_biguint().expect("mod_floor is non-negative");
    let den = c.denom().mod_floor(&m).to_biguint().expect("mod_floor is non-negative");
    let inv = mod_inverse(&den, modulus);
    (num * inv) % modulus
}

/// Whether `y` lies in the closure of `{x}`, decided in closed form from
/// the classification: only a disc point of radius `p^{−q}` has proper
/// specializations, namely the rank-2 points refining it, recognized by a
/// center within `p^q` of the disc's own. Classical, irrational-radius and
/// rank-2 points are closed.
pub fn specializes(x: &PointDescriptor, y: &PointDescriptor, p: Prime) -> Result<bool> {
    if points::same_point(x, y, p)? {
        return Ok(true);
    }
    if let (
        PointDescriptor::Disc {
            alpha,
            radius: Radius::PPower(q),
        },
        PointDescriptor::Type5 {
            alpha: beta,
            q: q2,
            ..
        },
    ) = (x, y)
    {
        if q == q2 {
            return Ok(match scalar::vp(&(alpha - beta), p) {
                ExtInt::Infinity => true,
                ExtInt::Finite(v) => scalar::int(v) >= *q,
            });
        }
    }
    Ok(false)
}

/// The closure of `{x}` intersected with the catalog over `𝔽_{p^k}`: the
/// point itself, plus — for a disc point of radius `p^{−q}` — its rank-2
/// refinements with direction `λ` in `𝔸¹(𝔽_{p^k})` when `q = 0` (the
/// `λ = ∞` refinement of the Gauss disc falls outside the unit disc) and
/// in `ℙ¹(𝔽_{p^k})` when `q > 0`.
pub fn closure_points(
    x: &PointDescriptor,
    k: usize,
    p: Prime,
) -> Result<Vec<PointDescriptor>> {
    if !points::in_d(x, p)? {
        return Err(Error::PointNotInD);
    }
    let mut out = vec![x.clone()];
    if let PointDescriptor::Disc {
        alpha,
        radius: Radius::PPower(q),
    } = x
    {
        let ctx = FqContext::new(p, k)?;
        let mut lambdas: Vec<P1Point> = ctx
            .enumerate_elements()?
            .into_iter()
            .map(P1Point::Finite)
            .collect();
        if q.is_positive() {
            lambdas.push(P1Point::Infinity);
        }
        for lambda in lambdas {
            out.push(PointDescriptor::type5(
                p,
                alpha.clone(),
                q.clone(),
                ctx.clone(),
                lambda,
            )?);
        }
    }
    Ok(out)
}

/// Outcome of the randomized falsification harness for `specializes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingReport {
    pub consistent: bool,
    pub counterexample: Option<(TateSeries, TateSeries)>,
}

/// Hunts for a sub-basic `U(g/s)` separating `y` from `x` the wrong way
/// around: `y ∈ U` but `x ∉ U` refutes `y ∈ cl{x}`. Draws `trials` random
/// integral polynomial pairs from the seeded generator and reports the
/// first hit; finding none is consistency, not proof.
pub fn sampling_specialization_check(
    x: &PointDescriptor,
    y: &PointDescriptor,
    trials: usize,
    seed: u64,
    p: Prime,
) -> Result<SamplingReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let g = random_integral_poly(&mut rng, p);
        let s = random_integral_poly(&mut rng, p);
        let u = RationalSubset::new(vec![g.clone()], s.clone());
        if member(y, &u, p)? && !member(x, &u, p)? {
            return Ok(SamplingReport {
                consistent: false,
                counterexample: Some((g, s)),
            });
        }
    }
    Ok(SamplingReport {
        consistent: true,
        counterexample: None,
    })
}

/// Random polynomial of degree ≤ 6 with coefficients `u·p^e`, `u` a unit
/// integer, `e ∈ {0..6}`: integral with certified evaluations everywhere.
pub(crate) fn random_integral_poly(rng: &mut ChaCha8Rng, p: Prime) -> TateSeries {
    let deg = rng.gen_range(0..=6usize);
    let coeffs = (0..=deg)
        .map(|_| {
            let e: i64 = rng.gen_range(0..=6);
            let unit = loop {
                let u: i64 = rng.gen_range(-9..=9);
                if u != 0 && !u.unsigned_abs().is_multiple_of(p.get()) {
                    break u;
                }
            };
            scalar::ratio(unit, 1) * scalar::rational_pow(&p.to_rational(), e).unwrap()
        })
        .collect();
    TateSeries::polynomial(coeffs)
}

/// The rank-1 point under a rank-2 point: quotient by the infinitesimal
/// second factor. Everything else is its own generization.
pub fn vertical_generization(y: &PointDescriptor, p: Prime) -> Result<PointDescriptor> {
    match y {
        PointDescriptor::Type5 { alpha, q, .. } => {
            PointDescriptor::disc(p, alpha.clone(), Radius::p_power(q.clone())?)
        }
        _ => Ok(y.clone()),
    }
}

/// A catalog point together with a convex truncation of its value group.
/// `Full` is the identity wrapper; a proper truncation sends values outside
/// the subgroup to `Zero`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpvPoint {
    pub base: PointDescriptor,
    pub truncation: ConvexSubgroup,
}

impl From<PointDescriptor> for SpvPoint {
    fn from(base: PointDescriptor) -> SpvPoint {
        SpvPoint {
            base,
            truncation: ConvexSubgroup::Full,
        }
    }
}

/// `|f(x)|` through the wrapper: evaluate at the base point, then truncate.
pub fn evaluate_truncated(f: &TateSeries, x: &SpvPoint, p: Prime) -> Result<GroupValue> {
    let v = points::evaluate(f, &x.base, p)?;
    ordgroup::truncate(&v, x.truncation)
}

/// Flags reported alongside a horizontal specialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpecializationFlags {
    /// Truncation by a subgroup containing Γ₁ preserves multiplicativity
    /// and the ultrametric bound, so the wrapper is again a valuation.
    pub is_valuation: bool,
    /// Continuity criterion re-run on the truncated values.
    pub continuous: bool,
}

fn subgroup_intersection(a: ConvexSubgroup, b: ConvexSubgroup) -> ConvexSubgroup {
    fn rank(d: ConvexSubgroup) -> u8 {
        match d {
            ConvexSubgroup::Trivial => 0,
            ConvexSubgroup::SecondFactor => 1,
            ConvexSubgroup::Full => 2,
        }
    }
    if rank(a) <= rank(b) {
        a
    } else {
        b
    }
}

fn value_in_subgroup(v: &GroupValue, d: ConvexSubgroup) -> bool {
    match d {
        ConvexSubgroup::Full => true,
        ConvexSubgroup::Trivial => v.is_identity(),
        ConvexSubgroup::SecondFactor => matches!(v, GroupValue::Lex2 { e, .. } if e.is_zero()),
    }
}

/// Horizontal specialization: truncate the valuation by a convex subgroup
/// `Δ`.
///
/// `Δ` must be convex in the base point's value group, and must contain
/// `Γ₁`, the subgroup generated by the attained values ≥ 1. That subgroup
/// is computed from the finite generating data `|p^{−1}(x)|`, `|w(x)|` and
/// the scalar values; since `|p^{−1}| = p` is always attained, a catalog
/// point admits only `Δ = Full`. The Γ₁ condition is exactly what keeps
/// truncation multiplicative, so the result carries `is_valuation: true`;
/// the continuity flag is recomputed on the truncated values.
pub fn horizontal_specialize(
    x: &SpvPoint,
    delta: ConvexSubgroup,
    p: Prime,
) -> Result<(SpvPoint, SpecializationFlags)> {
    if delta == ConvexSubgroup::SecondFactor {
        let group = points::classify(&x.base, p)?.value_group;
        if group != GroupDescriptor::PQxHalfZ {
            return Err(Error::AmbientMismatch);
        }
    }
    let generators = [
        TateSeries::constant(BigRational::one() / p.to_rational()),
        TateSeries::constant(p.to_rational()),
        TateSeries::variable(),
        TateSeries::one(),
    ];
    for g in &generators {
        let v = evaluate_truncated(g, x, p)?;
        if v.is_zero() {
            continue;
        }
        let id = ordgroup::identity(&v.ambient().expect("non-zero value has an ambient"));
        if ordgroup::cmp(p, &v, &id)? == Ordering::Less {
            continue;
        }
        if !value_in_subgroup(&v, delta) {
            return Err(Error::Gamma1NotContained);
        }
    }
    let result = SpvPoint {
        base: x.base.clone(),
        truncation: subgroup_intersection(x.truncation, delta),
    };
    let samples = huber::continuity_sample_set(p, 20, 0x0C11);
    let continuous = huber::check_continuity(&result, &samples, p)?.verdict
        != huber::ContinuityVerdict::NotContinuous;
    Ok((
        result,
        SpecializationFlags {
            is_valuation: true,
            continuous,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        ratio(n, d)
    }

    fn poly(coeffs: &[(i64, i64)]) -> TateSeries {
        TateSeries::polynomial(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    fn w_pow(n: usize) -> TateSeries {
        TateSeries::monomial(BigRational::one(), n)
    }

    fn subset(nums: Vec<TateSeries>, den: TateSeries) -> RationalSubset {
        RationalSubset::new(nums, den)
    }

    #[test]
    fn member_basic_examples() {
        let p = p3();
        let x1 = PointDescriptor::gauss();
        assert!(member(&x1, &subset(vec![TateSeries::variable()], TateSeries::one()), p).unwrap());

        let x1m = PointDescriptor::x1_minus(p).unwrap();
        let p_const = TateSeries::constant(rat(3, 1));
        for n in 1..=50 {
            let u = subset(vec![w_pow(n)], p_const.clone());
            assert!(
                !member(&x1m, &u, p).unwrap(),
                "x_1- claimed inside U(w^{n}/p)"
            );
        }

        let cl = PointDescriptor::classical(p, rat(3, 1)).unwrap();
        let u = subset(vec![TateSeries::variable()], p_const.clone());
        assert!(member(&cl, &u, p).unwrap());

        // Deeper discs do fall inside U(w^n/p) once q·n ≥ 1.
        for (q, n) in [(rat(1, 1), 1usize), (rat(1, 2), 3), (rat(2, 3), 2)] {
            let x = PointDescriptor::disc(p, BigRational::zero(), Radius::p_power(q).unwrap())
                .unwrap();
            let u = subset(vec![w_pow(n)], p_const.clone());
            assert!(member(&x, &u, p).unwrap());
        }
    }

    #[test]
    fn member_with_equal_numerator_and_denominator() {
        let p = p3();
        let w = TateSeries::variable();
        let u = subset(vec![w.clone()], w);
        // U(s/s) is the non-vanishing locus of s; nothing cancels.
        assert!(member(&PointDescriptor::gauss(), &u, p).unwrap());
        assert!(!member(
            &PointDescriptor::classical(p, BigRational::zero()).unwrap(),
            &u,
            p
        )
        .unwrap());
    }

    #[test]
    fn tate_openness_is_the_unit_ideal_test() {
        let p = p3();
        let ring = RingDescriptor::TateAlgebra;
        let w = TateSeries::variable();
        let w_minus_one = poly(&[(-1, 1), (1, 1)]);
        assert_eq!(
            open_ideal(&[w.clone(), w_minus_one], &ring, p).unwrap(),
            Openness::Open
        );
        // (w) is proper: a common root at the origin.
        assert_eq!(open_ideal(std::slice::from_ref(&w), &ring, p).unwrap(), Openness::NotOpen);
        // Scalars are units over the field.
        assert_eq!(
            open_ideal(&[TateSeries::constant(rat(3, 1))], &ring, p).unwrap(),
            Openness::Open
        );
        // w + p has the root −p inside the disc.
        assert_eq!(
            open_ideal(&[poly(&[(3, 1), (1, 1)])], &ring, p).unwrap(),
            Openness::NotOpen
        );
        // No common root: w²−p and w meet only outside each other's zeros.
        assert_eq!(
            open_ideal(&[poly(&[(-3, 1), (0, 1), (1, 1)]), w.clone()], &ring, p).unwrap(),
            Openness::Open
        );
        // Root 1/p lies outside the unit disc.
        assert_eq!(
            open_ideal(&[poly(&[(-1, 3), (1, 1)])], &ring, p).unwrap(),
            Openness::Open
        );
        assert_eq!(
            open_ideal(&[TateSeries::zero(), TateSeries::zero()], &ring, p).unwrap(),
            Openness::NotOpen
        );
        // Same decisions over the dense polynomial subring.
        assert_eq!(
            open_ideal(&[w], &RingDescriptor::PolyRing, p).unwrap(),
            Openness::NotOpen
        );
    }

    #[test]
    fn formal_power_series_monomial_cases() {
        let p = p3();
        let ring = RingDescriptor::FormalPowerSeries;
        let w = TateSeries::variable();
        let p_const = TateSeries::constant(rat(3, 1));
        assert_eq!(
            open_ideal(&[w.clone(), p_const.clone()], &ring, p).unwrap(),
            Openness::Open
        );
        assert_eq!(
            open_ideal(std::slice::from_ref(&p_const), &ring, p).unwrap(),
            Openness::NotOpen
        );
        assert_eq!(open_ideal(std::slice::from_ref(&w), &ring, p).unwrap(), Openness::NotOpen);
        // (p^2, w^3) contains (p, w)^4.
        assert_eq!(
            open_ideal(
                &[TateSeries::constant(rat(9, 1)), w_pow(3)],
                &ring,
                p
            )
            .unwrap(),
            Openness::Open
        );
        // p·w is inside (w).
        assert_eq!(
            open_ideal(&[TateSeries::monomial(rat(3, 1), 1)], &ring, p).unwrap(),
            Openness::NotOpen
        );
        // All generators divisible by p.
        assert_eq!(
            open_ideal(&[p_const.clone(), poly(&[(3, 1), (3, 1)])], &ring, p).unwrap(),
            Openness::NotOpen
        );
        // Units decide instantly.
        assert_eq!(
            open_ideal(&[poly(&[(-1, 1), (1, 1)])], &ring, p).unwrap(),
            Openness::Open
        );
    }

    #[test]
    fn formal_power_series_search_cases() {
        let p = p3();
        let ring = RingDescriptor::FormalPowerSeries;
        // (p³, w² + p²) contains (p, w)^4 and nothing smaller; the search
        // confirms at n = 4.
        let g1 = TateSeries::constant(rat(27, 1));
        let g2 = poly(&[(9, 1), (0, 1), (1, 1)]);
        assert_eq!(
            open_ideal(&[g1.clone(), g2.clone()], &ring, p).unwrap(),
            Openness::Open
        );
        for n in 0..4 {
            assert!(!m_power_in_span(&[&g1, &g2], n, p).unwrap(), "n = {n}");
        }
        assert!(m_power_in_span(&[&g1, &g2], 4, p).unwrap());

        // w + p has the common root −p of valuation 1.
        assert_eq!(
            open_ideal(&[poly(&[(3, 1), (1, 1)])], &ring, p).unwrap(),
            Openness::NotOpen
        );
        // So does w² − p at valuation 1/2.
        assert_eq!(
            open_ideal(&[poly(&[(-3, 1), (0, 1), (1, 1)])], &ring, p).unwrap(),
            Openness::NotOpen
        );
        // (w², w + p) is open: contains w·(w+p) − w² = pw, hence p² and w².
        assert_eq!(
            open_ideal(&[w_pow(2), poly(&[(3, 1), (1, 1)])], &ring, p).unwrap(),
            Openness::Open
        );
    }

    #[test]
    fn bounded_search_depth_matters() {
        let p = p3();
        let ring = RingDescriptor::FormalPowerSeries;
        // (p^10, w^10 + p^9·w) needs (p, w)^19; invisible at depth 16.
        let g1 = TateSeries::constant(scalar::rational_pow(&rat(3, 1), 10).unwrap());
        let mut coeffs = vec![BigRational::zero(); 11];
        coeffs[1] = scalar::rational_pow(&rat(3, 1), 9).unwrap();
        coeffs[10] = BigRational::one();
        let g2 = TateSeries::polynomial(coeffs);
        assert_eq!(
            open_ideal(&[g1.clone(), g2.clone()], &ring, p).unwrap(),
            Openness::Unknown
        );
        assert_eq!(
            open_ideal_with_depth(&[g1.clone(), g2.clone()], &ring, p, 25).unwrap(),
            Openness::Open
        );
        assert!(!m_power_in_span(&[&g1, &g2], 18, p).unwrap());
        assert!(m_power_in_span(&[&g1, &g2], 19, p).unwrap());
    }

    #[test]
    fn openness_in_localized_rings() {
        let p = p3();
        let loc = RingDescriptor::Localized {
            base: Box::new(RingDescriptor::TateAlgebra),
            numerators: vec![TateSeries::variable()],
            denominator: TateSeries::constant(rat(3, 1)),
        };
        // Root p lies in the subdisc |w| ≤ 1/p; root 1 does not.
        assert_eq!(
            open_ideal(&[poly(&[(-3, 1), (1, 1)])], &loc, p).unwrap(),
            Openness::NotOpen
        );
        assert_eq!(
            open_ideal(&[poly(&[(-1, 1), (1, 1)])], &loc, p).unwrap(),
            Openness::Open
        );
        // No subdisc normal form: refuse to guess.
        let weird = RingDescriptor::Localized {
            base: Box::new(RingDescriptor::TateAlgebra),
            numerators: vec![poly(&[(-1, 1), (1, 1)])],
            denominator: TateSeries::constant(rat(3, 1)),
        };
        assert_eq!(
            open_ideal(&[TateSeries::variable()], &weird, p).unwrap(),
            Openness::Unknown
        );
    }

    #[test]
    fn open_ideal_input_checks() {
        let p = p3();
        let truncated = TateSeries::new(vec![rat(1, 1)], ExtInt::Finite(5));
        assert!(matches!(
            open_ideal(&[truncated], &RingDescriptor::TateAlgebra, p),
            Err(Error::NonPolynomialGenerator)
        ));
        let outside = TateSeries::constant(rat(1, 3));
        assert!(matches!(
            open_ideal(&[outside], &RingDescriptor::FormalPowerSeries, p),
            Err(Error::NotInRing)
        ));
    }

    #[test]
    fn howell_membership_matches_bruteforce() {
        use std::collections::HashSet;

        fn brute_contains(rows: &[Vec<u64>], target: &[u64], m: u64) -> bool {
            let zero = vec![0u64; target.len()];
            let mut seen: HashSet<Vec<u64>> = HashSet::new();
            seen.insert(zero.clone());
            let mut frontier = vec![zero];
            while let Some(v) = frontier.pop() {
                for r in rows {
                    let s: Vec<u64> =
                        v.iter().zip(r).map(|(a, b)| (a + b) % m).collect();
                    if seen.insert(s.clone()) {
                        frontier.push(s);
                    }
                }
            }
            seen.contains(target)
        }

        let mut rng = ChaCha8Rng::seed_from_u64(0x40E1);
        let mut hits = 0usize;
        for trial in 0..60 {
            let (pv, k) = if trial % 2 == 0 { (2u64, 3u32) } else { (3u64, 2u32) };
            let m = pv.pow(k);
            let width = rng.gen_range(2..=3usize);
            let nrows = rng.gen_range(1..=3usize);
            let rows: Vec<Vec<u64>> = (0..nrows)
                .map(|_| (0..width).map(|_| rng.gen_range(0..m)).collect())
                .collect();
            let prime = Prime::new(pv).unwrap();
            let mut mat = HowellMatrix::new(prime, k, width);
            for r in &rows {
                mat.insert(r.iter().map(|&x| BigUint::from(x)).collect());
            }
            for _ in 0..6 {
                let target: Vec<u64> = if rng.gen_bool(0.5) {
                    (0..width).map(|_| rng.gen_range(0..m)).collect()
                } else {
                    // A guaranteed span element: a random combination.
                    let mut acc = vec![0u64; width];
                    for r in &rows {
                        let c = rng.gen_range(0..m);
                        for (a, b) in acc.iter_mut().zip(r) {
                            *a = (*a + c * b) % m;
                        }
                    }
                    acc
                };
                let expect = brute_contains(&rows, &target, m);
                let got = mat.contains(target.iter().map(|&x| BigUint::from(x)).collect());
                assert_eq!(got, expect, "rows {rows:?} target {target:?} mod {m}");
                if expect {
                    hits += 1;
                }
            }
        }
        assert!(hits > 60, "trivial sample: only {hits} positive cases");
    }

    #[test]
    fn specialization_closed_form() {
        let p = p3();
        let x1 = PointDescriptor::gauss();
        let x1m = PointDescriptor::x1_minus(p).unwrap();
        assert!(specializes(&x1, &x1m, p).unwrap());
        assert!(!specializes(&x1m, &x1, p).unwrap());
        assert!(!specializes(&x1, &PointDescriptor::classical(p, BigRational::zero()).unwrap(), p)
            .unwrap());
        assert!(specializes(&x1, &x1, p).unwrap());

        // Center shifts within the disc radius do not matter.
        let disc = PointDescriptor::disc(
            p,
            BigRational::zero(),
            Radius::p_power(rat(1, 1)).unwrap(),
        )
        .unwrap();
        let ctx = FqContext::new(p, 1).unwrap();
        let shifted = PointDescriptor::type5(
            p,
            rat(3, 1),
            rat(1, 1),
            ctx.clone(),
            P1Point::Infinity,
        )
        .unwrap();
        assert!(specializes(&disc, &shifted, p).unwrap());
        let far = PointDescriptor::type5(p, rat(1, 1), rat(1, 1), ctx, P1Point::Infinity)
            .unwrap();
        assert!(!specializes(&disc, &far, p).unwrap());
    }

    #[test]
    fn closure_of_the_gauss_point() {
        let p = p3();
        let x1 = PointDescriptor::gauss();
        let closure = closure_points(&x1, 1, p).unwrap();
        assert_eq!(closure.len(), 4);
        assert_eq!(closure[0], x1);
        for y in &closure {
            assert!(specializes(&x1, y, p).unwrap());
            assert!(points::in_d(y, p).unwrap());
        }
        // λ = ∞ is excluded at radius 1, and indeed escapes the disc.
        let ctx = FqContext::new(p, 1).unwrap();
        let infinity = PointDescriptor::type5(
            p,
            BigRational::zero(),
            BigRational::zero(),
            ctx,
            P1Point::Infinity,
        )
        .unwrap();
        assert!(!closure.contains(&infinity));
        assert!(!points::in_d(&infinity, p).unwrap());

        // Over 𝔽_9 the affine direction space has nine points.
        assert_eq!(closure_points(&x1, 2, p).unwrap().len(), 10);
    }

    #[test]
    fn closure_of_a_smaller_disc_uses_the_projective_line() {
        let p = p3();
        let x = PointDescriptor::disc(
            p,
            BigRational::zero(),
            Radius::p_power(rat(1, 1)).unwrap(),
        )
        .unwrap();
        let closure = closure_points(&x, 1, p).unwrap();
        assert_eq!(closure.len(), 5);
        for y in &closure {
            assert!(specializes(&x, y, p).unwrap());
            assert!(points::in_d(y, p).unwrap());
        }

        for closed in [
            PointDescriptor::classical(p, rat(1, 1)).unwrap(),
            PointDescriptor::disc(
                p,
                BigRational::zero(),
                Radius::plain(p, rat(1, 2)).unwrap(),
            )
            .unwrap(),
            PointDescriptor::x1_minus(p).unwrap(),
        ] {
            assert_eq!(closure_points(&closed, 1, p).unwrap(), vec![closed.clone()]);
        }

        assert!(matches!(
            closure_points(&PointDescriptor::x1_plus(p).unwrap(), 1, p),
            Err(Error::PointNotInD)
        ));
    }

    #[test]
    fn sampling_harness_agrees_with_the_closed_form() {
        let p = p3();
        let x1 = PointDescriptor::gauss();
        let x1m = PointDescriptor::x1_minus(p).unwrap();

        let report = sampling_specialization_check(&x1, &x1m, 500, 7, p).unwrap();
        assert!(report.consistent);

        // The reverse direction is falsified by search.
        let report = sampling_specialization_check(&x1m, &x1, 500, 42, p).unwrap();
        assert!(!report.consistent);
        let (g, s) = report.counterexample.unwrap();
        let u = subset(vec![g], s);
        assert!(member(&x1, &u, p).unwrap());
        assert!(!member(&x1m, &u, p).unwrap());

        let report = sampling_specialization_check(&x1, &x1, 10, 0, p).unwrap();
        assert!(report.consistent);
    }

    fn catalog_pool(p: Prime) -> Vec<PointDescriptor> {
        let ctx = FqContext::new(p, 1).unwrap();
        let ctx9 = FqContext::new(p, 2).unwrap();
        let t = {
            let mut e = ctx9.zero();
            e[1] = 1;
            e
        };
        vec![
            PointDescriptor::classical(p, BigRational::zero()).unwrap(),
            PointDescriptor::classical(p, BigRational::one()).unwrap(),
            PointDescriptor::classical(p, rat(-1, 1)).unwrap(),
            PointDescriptor::classical(p, rat(2, 1)).unwrap(),
            PointDescriptor::classical(p, rat(3, 1)).unwrap(),
            PointDescriptor::classical(p, rat(9, 1)).unwrap(),
            PointDescriptor::classical(p, rat(1, 2)).unwrap(),
            PointDescriptor::classical(p, rat(4, 1)).unwrap(),
            PointDescriptor::gauss(),
            PointDescriptor::disc(p, BigRational::zero(), Radius::p_power(rat(1, 1)).unwrap())
                .unwrap(),
            PointDescriptor::disc(p, BigRational::zero(), Radius::p_power(rat(2, 1)).unwrap())
                .unwrap(),
            PointDescriptor::disc(p, BigRational::zero(), Radius::p_power(rat(1, 2)).unwrap())
                .unwrap(),
            PointDescriptor::disc(p, BigRational::one(), Radius::p_power(rat(1, 1)).unwrap())
                .unwrap(),
            PointDescriptor::disc(p, BigRational::zero(), Radius::plain(p, rat(1, 2)).unwrap())
                .unwrap(),
            PointDescriptor::disc(p, BigRational::zero(), Radius::plain(p, rat(2, 5)).unwrap())
                .unwrap(),
            PointDescriptor::x1_minus(p).unwrap(),
            PointDescriptor::type5(p, BigRational::zero(), rat(1, 1), ctx.clone(), {
                P1Point::Finite(ctx.one())
            })
            .unwrap(),
            PointDescriptor::type5(
                p,
                BigRational::zero(),
                rat(1, 1),
                ctx.clone(),
                P1Point::Finite(ctx.zero()),
            )
            .unwrap(),
            PointDescriptor::type5(p, BigRational::zero(), rat(1, 1), ctx, P1Point::Infinity)
                .unwrap(),
            PointDescriptor::type5(p, BigRational::zero(), BigRational::zero(), ctx9, {
                P1Point::Finite(t)
            })
            .unwrap(),
        ]
    }

    #[test]
    fn closed_form_survives_sampling_over_the_pool() {
        let p = p3();
        let pool = catalog_pool(p);
        assert!(pool.len() >= 20);
        for (i, x) in pool.iter().enumerate() {
            for (j, y) in pool.iter().enumerate() {
                let expected = specializes(x, y, p).unwrap();
                let trials = if expected { 500 } else { 80 };
                let seed = (i * pool.len() + j) as u64;
                let report = sampling_specialization_check(x, y, trials, seed, p).unwrap();
                if expected {
                    assert!(
                        report.consistent,
                        "sampling refuted specializes({i}, {j}): {:?}",
                        report.counterexample
                    );
                } else if let Some((g, s)) = report.counterexample {
                    let u = subset(vec![g], s);
                    assert!(member(y, &u, p).unwrap());
                    assert!(!member(x, &u, p).unwrap());
                }
            }
        }
    }

    #[test]
    fn vertical_generization_projects_the_value_group() {
        let p = p3();
        let x1m = PointDescriptor::x1_minus(p).unwrap();
        let up = vertical_generization(&x1m, p).unwrap();
        assert!(points::same_point(&up, &PointDescriptor::gauss(), p).unwrap());
        assert!(specializes(&up, &x1m, p).unwrap());

        let cl = PointDescriptor::classical(p, rat(2, 1)).unwrap();
        assert_eq!(vertical_generization(&cl, p).unwrap(), cl);

        let ctx = FqContext::new(p, 1).unwrap();
        let y = PointDescriptor::type5(
            p,
            BigRational::zero(),
            rat(1, 1),
            ctx.clone(),
            P1Point::Finite(ctx.one()),
        )
        .unwrap();
        let x = vertical_generization(&y, p).unwrap();
        assert_eq!(
            x,
            PointDescriptor::disc(p, BigRational::zero(), Radius::p_power(rat(1, 1)).unwrap())
                .unwrap()
        );

        // Projection compatibility: dropping the infinitesimal coordinate
        // of the rank-2 value recovers the disc value.
        let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
        for _ in 0..100 {
            let f = random_integral_poly(&mut rng, p);
            let fine = points::evaluate(&f, &y, p).unwrap();
            let coarse = points::evaluate(&f, &x, p).unwrap();
            let projected =
                ordgroup::quotient_project(&fine, ConvexSubgroup::SecondFactor).unwrap();
            assert_eq!(projected, coarse);
            assert_eq!(
                points::support_contains(&y, &f, p).unwrap(),
                points::support_contains(&x, &f, p).unwrap()
            );
        }
    }

    #[test]
    fn horizontal_specialization_requires_the_boundary_subgroup() {
        let p = p3();
        let x1m = SpvPoint::from(PointDescriptor::x1_minus(p).unwrap());

        let (same, flags) = horizontal_specialize(&x1m, ConvexSubgroup::Full, p).unwrap();
        assert_eq!(same, x1m);
        assert!(flags.is_valuation);
        assert!(flags.continuous);

        // |p^{−1}(x)| = (p, 1) sits in no proper convex subgroup.
        assert!(matches!(
            horizontal_specialize(&x1m, ConvexSubgroup::SecondFactor, p),
            Err(Error::Gamma1NotContained)
        ));
        assert!(matches!(
            horizontal_specialize(&x1m, ConvexSubgroup::Trivial, p),
            Err(Error::Gamma1NotContained)
        ));

        // Archimedean value groups have no second factor at all.
        let disc = SpvPoint::from(PointDescriptor::gauss());
        assert!(matches!(
            horizontal_specialize(&disc, ConvexSubgroup::SecondFactor, p),
            Err(Error::AmbientMismatch)
        ));
        assert!(matches!(
            horizontal_specialize(&disc, ConvexSubgroup::Trivial, p),
            Err(Error::Gamma1NotContained)
        ));
        let (same, _) = horizontal_specialize(&disc, ConvexSubgroup::Full, p).unwrap();
        assert_eq!(same, disc);
    }

    #[test]
    fn truncation_keeps_the_valuation_laws_on_integral_series() {
        let p = p3();
        let wrappers = [
            SpvPoint::from(PointDescriptor::gauss()),
            SpvPoint {
                base: PointDescriptor::x1_minus(p).unwrap(),
                truncation: ConvexSubgroup::SecondFactor,
            },
            SpvPoint {
                base: PointDescriptor::x1_minus(p).unwrap(),
                truncation: ConvexSubgroup::Trivial,
            },
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0x7A1E);
        for _ in 0..500 {
            let f = random_integral_poly(&mut rng, p);
            let g = random_integral_poly(&mut rng, p);
            let product = f.mul(&g, p);
            let sum = f.add(&g, p);
            for x in &wrappers {
                let vf = evaluate_truncated(&f, x, p).unwrap();
                let vg = evaluate_truncated(&g, x, p).unwrap();
                let vfg = evaluate_truncated(&product, x, p).unwrap();
                assert_eq!(ordgroup::mul(&vf, &vg).unwrap(), vfg);

                let vsum = evaluate_truncated(&sum, x, p).unwrap();
                let max = match ordgroup::cmp(p, &vf, &vg) {
                    Ok(Ordering::Less) => vg.clone(),
                    Ok(_) => vf.clone(),
                    // One side Zero: max is the other.
                    Err(_) => unreachable!("same ambient at one point"),
                };
                if vsum.is_zero() {
                    continue;
                }
                if max.is_zero() {
                    panic!("|f+g| > 0 with |f| = |g| = 0");
                }
                assert_ne!(
                    ordgroup::cmp(p, &vsum, &max).unwrap(),
                    Ordering::Greater,
                    "ultrametric failed"
                );
            }
        }
    }

    #[test]
    fn comparisons_are_invariant_under_rescaling_the_second_factor() {
        // (1/2)^n ↦ (1/2)^{2n} embeds the value group monotonically; every
        // membership answer factors through comparisons, so doubling the
        // infinitesimal exponent must not change any of them.
        let p = p3();
        let mut rng = ChaCha8Rng::seed_from_u64(0xE9);
        let double = |v: &GroupValue| match v {
            GroupValue::Lex2 { e, n } => GroupValue::Lex2 {
                e: e.clone(),
                n: n * 2,
            },
            other => other.clone(),
        };
        for _ in 0..200 {
            let a = GroupValue::Lex2 {
                e: rat(rng.gen_range(-6..=6), 1 + rng.gen_range(0..3) as i64),
                n: rng.gen_range(-10..=10),
            };
            let b = GroupValue::Lex2 {
                e: rat(rng.gen_range(-6..=6), 1 + rng.gen_range(0..3) as i64),
                n: rng.gen_range(-10..=10),
            };
            assert_eq!(
                ordgroup::cmp(p, &a, &b).unwrap(),
                ordgroup::cmp(p, &double(&a), &double(&b)).unwrap()
            );
        }
    }

    #[test]
    fn validation_is_recorded_on_the_subset() {
        let p = p3();
        let fps = RingDescriptor::FormalPowerSeries;
        let u = subset(vec![TateSeries::variable()], TateSeries::constant(rat(3, 1)))
            .validated(&fps, p)
            .unwrap();
        assert_eq!(u.validation, Validation::Open);
        let bad = subset(
            vec![TateSeries::constant(rat(3, 1))],
            TateSeries::constant(rat(3, 1)),
        )
        .validated(&fps, p)
        .unwrap();
        assert_eq!(bad.validation, Validation::NotOpen);
        assert_eq!(
            subset(vec![], TateSeries::one()).validation,
            Validation::Unchecked
        );
    }
}
