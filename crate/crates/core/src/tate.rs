//! Truncated Tate series over the rational subfield of `ℂ_p`, with sound
//! tail certificates, Gauss-type norms, recentering, max-index residue
//! reductions, and Newton polygons.
//!
//! A [`TateSeries`] stores an explicit polynomial part together with a
//! `tail_bound`: a certificate that every omitted coefficient beyond the
//! explicit degree has p-adic valuation at least that bound (`Infinity`
//! means the element is an honest polynomial). Arithmetic propagates the
//! certificate conservatively, shrinking the explicit part whenever an
//! unknown tail could reach into it, so explicit coefficients are always
//! exact. Norm queries either return an exact value or refuse with
//! `UncertainTail`; they never guess.
//!
//! Scalars are exact rationals. Every formula here depends only on
//! coefficient valuations and unit residues, both computable exactly on ℚ,
//! so no precision tracking is needed anywhere.

use crate::error::Error;
use crate::ordgroup::GroupValue;
use crate::scalar::{self, ExtInt, Prime};
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A truncated Tate series: explicit coefficients `0..=d` plus a valuation
/// certificate for everything beyond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateSeries {
    /// Explicit, exact coefficients; trailing zeros trimmed.
    coeffs: Vec<BigRational>,
    /// Every omitted coefficient `a_i` with `i > deg` has `vp(a_i) ≥ tail_bound`.
    tail_bound: ExtInt,
}

/// A segment of a Newton polygon. `slope: None` marks the block of roots at
/// the origin factored out of `w^m`, whose valuation is `+∞` and which sits
/// outside the rational slope scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonSegment {
    pub slope: Option<BigRational>,
    pub multiplicity: usize,
}

impl TateSeries {
    /// Builds a series, trimming trailing zero coefficients. Trimming is
    /// lossless: an explicit zero satisfies any tail certificate.
    pub fn new(mut coeffs: Vec<BigRational>, tail_bound: ExtInt) -> TateSeries {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TateSeries { coeffs, tail_bound }
    }

    pub fn polynomial(coeffs: Vec<BigRational>) -> TateSeries {
        TateSeries::new(coeffs, ExtInt::Infinity)
    }

    pub fn zero() -> TateSeries {
        TateSeries::polynomial(Vec::new())
    }

    pub fn one() -> TateSeries {
        TateSeries::polynomial(vec![BigRational::one()])
    }

    /// The coordinate `w`.
    pub fn variable() -> TateSeries {
        TateSeries::polynomial(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> TateSeries {
        TateSeries::polynomial(vec![c])
    }

    pub fn from_int(n: i64) -> TateSeries {
        TateSeries::constant(scalar::int(n))
    }

    /// `c·w^i`.
    pub fn monomial(c: BigRational, i: usize) -> TateSeries {
        let mut coeffs = vec![BigRational::zero(); i + 1];
        coeffs[i] = c;
        TateSeries::polynomial(coeffs)
    }

    /// `w − α`.
    pub fn w_minus(alpha: &BigRational) -> TateSeries {
        TateSeries::polynomial(vec![-alpha.clone(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn tail_bound(&self) -> ExtInt {
        self.tail_bound
    }

    /// Degree of the explicit part, `None` when it is empty.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_polynomial(&self) -> bool {
        self.tail_bound == ExtInt::Infinity
    }

    pub fn is_zero_polynomial(&self) -> bool {
        self.coeffs.is_empty() && self.is_polynomial()
    }

    /// Explicit coefficient at `i`; zero beyond the explicit degree of a
    /// polynomial. Never consults the uncertain tail.
    pub fn explicit_coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Index of the lowest non-zero explicit coefficient.
    fn explicit_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Minimum valuation over the explicit non-zero coefficients.
    fn min_explicit_vp(&self, p: Prime) -> Option<i64> {
        self.coeffs
            .iter()
            .filter_map(|c| match scalar::vp(c, p) {
                ExtInt::Finite(v) => Some(v),
                ExtInt::Infinity => None,
            })
            .min()
    }

    pub fn neg(&self) -> TateSeries {
        TateSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            tail_bound: self.tail_bound,
        }
    }

    /// Sum with a sound certificate. When one operand's tail could overlap
    /// the other's explicit range, the explicit part shrinks to the overlap
    /// boundary and the dropped exact coefficients fold into the new bound.
    pub fn add(&self, other: &TateSeries, p: Prime) -> TateSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut sum = Vec::with_capacity(n);
        for i in 0..n {
            sum.push(self.explicit_coeff(i) + other.explicit_coeff(i));
        }
        if self.is_polynomial() && other.is_polynomial() {
            return TateSeries::polynomial(sum);
        }
        // Exactness stops where the first finite-tail operand stops.
        let cutoff = [self, other]
            .iter()
            .filter(|f| !f.is_polynomial())
            .map(|f| f.coeffs.len())
            .min()
            .expect("at least one operand has a finite tail");
        let mut bound = ExtInt::min(self.tail_bound, other.tail_bound);
        for dropped in sum.drain(cutoff..).collect::<Vec<_>>() {
            bound = ExtInt::min(bound, scalar::vp(&dropped, p));
        }
        TateSeries::new(sum, bound)
    }

    pub fn sub(&self, other: &TateSeries, p: Prime) -> TateSeries {
        self.add(&other.neg(), p)
    }

    /// Product with a sound certificate: each cross term of an explicit part
    /// against an unknown tail contributes a valuation floor and an earliest
    /// index it can reach, and the explicit product is cut before the
    /// earliest such index.
    pub fn mul(&self, other: &TateSeries, p: Prime) -> TateSeries {
        let mut prod = vec![
            BigRational::zero();
            (self.coeffs.len() + other.coeffs.len()).saturating_sub(1)
        ];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        if self.is_polynomial() && other.is_polynomial() {
            return TateSeries::polynomial(prod);
        }
        let mut bound = ExtInt::Infinity;
        let mut cutoff = usize::MAX;
        let cross = |f: &TateSeries, g: &TateSeries| -> Option<(ExtInt, usize)> {
            // Explicit part of f against the unknown tail of g.
            match (f.explicit_order(), f.min_explicit_vp(p), g.tail_bound) {
                (Some(ord), Some(vmin), ExtInt::Finite(t)) => {
                    Some((ExtInt::Finite(vmin) + ExtInt::Finite(t), ord + g.coeffs.len()))
                }
                _ => None,
            }
        };
        for (b, start) in [cross(self, other), cross(other, self)].into_iter().flatten() {
            bound = ExtInt::min(bound, b);
            cutoff = cutoff.min(start);
        }
        if let (ExtInt::Finite(tf), ExtInt::Finite(tg)) = (self.tail_bound, other.tail_bound) {
            bound = ExtInt::min(bound, ExtInt::Finite(tf) + ExtInt::Finite(tg));
            cutoff = cutoff.min(self.coeffs.len() + other.coeffs.len());
        }
        if prod.len() > cutoff {
            for dropped in prod.drain(cutoff..).collect::<Vec<_>>() {
                bound = ExtInt::min(bound, scalar::vp(&dropped, p));
            }
        }
        TateSeries::new(prod, bound)
    }

    /// Multiplies by an exact scalar; the tail certificate shifts by its
    /// valuation.
    pub fn scale(&self, c: &BigRational, p: Prime) -> TateSeries {
        if c.is_zero() {
            return TateSeries::zero();
        }
        let shift = scalar::vp(c, p);
        TateSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            tail_bound: self.tail_bound + shift,
        }
    }

    /// Exact evaluation at a rational point; only polynomials evaluate.
    pub fn eval_polynomial(&self, alpha: &BigRational) -> Result<BigRational> {
        if !self.is_polynomial() {
            return Err(Error::NotPolynomial);
        }
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * alpha + c;
        }
        Ok(acc)
    }
}

impl std::fmt::Display for TateSeries {
    /// Polynomial part in ascending powers, then the tail certificate when
    /// finite: `1 - 1/3*w + w^2 + O(w^3; vp>=5)`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut pieces: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "w".to_string(),
                _ => format!("w^{i}"),
            };
            let one = BigRational::one();
            pieces.push(if var.is_empty() {
                scalar::render_rational(c)
            } else if *c == one {
                var
            } else if *c == -one {
                format!("-{var}")
            } else {
                format!("{}*{var}", scalar::render_rational(c))
            });
        }
        if let ExtInt::Finite(b) = self.tail_bound {
            pieces.push(format!("O(w^{}; vp>={b})", self.coeffs.len()));
        }
        if pieces.is_empty() {
            return write!(f, "0");
        }
        let mut out = pieces[0].clone();
        for piece in &pieces[1..] {
            if let Some(rest) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(piece);
            }
        }
        write!(f, "{out}")
    }
}

/// Exponents `vp(a_i) + q·i` over the explicit non-zero coefficients, with
/// their minimum. `None` when the explicit part is zero.
fn term_exponents(f: &TateSeries, p: Prime, q: &BigRational) -> Option<(Vec<(usize, BigRational)>, BigRational)> {
    let mut terms = Vec::new();
    let mut min: Option<BigRational> = None;
    for (i, a) in f.coeffs.iter().enumerate() {
        let v = match scalar::vp(a, p) {
            ExtInt::Finite(v) => v,
            ExtInt::Infinity => continue,
        };
        let e = scalar::int(v) + q * scalar::int(i as i64);
        if min.as_ref().is_none_or(|m| e < *m) {
            min = Some(e.clone());
        }
        terms.push((i, e));
    }
    min.map(|m| (terms, m))
}

/// Whether an exponent minimum `m` over the explicit part is certified
/// against the tail: every omitted term has exponent at least
/// `tail_bound + q·i ≥ tail_bound`.
fn tail_certifies(f: &TateSeries, m: &BigRational) -> bool {
    match f.tail_bound {
        ExtInt::Infinity => true,
        ExtInt::Finite(t) => *m <= scalar::int(t),
    }
}

/// The Gauss norm `max_i ‖a_i‖ = p^{−min_i vp(a_i)}` as a `PExp` value; the
/// zero polynomial has norm `Zero`.
pub fn gauss_norm(f: &TateSeries, p: Prime) -> Result<GroupValue> {
    r_gauss_norm(f, p, &BigRational::zero())
}

/// The radius-`p^{−q}` Gauss norm `max_i ‖a_i‖·(p^{−q})^i`, i.e.
/// `p^{−min_i (vp(a_i) + q·i)}`. Certified against the tail bound since the
/// omitted exponents are at least `tail_bound`; refuses with `UncertainTail`
/// when the explicit minimum does not reach the certificate.
pub fn r_gauss_norm(f: &TateSeries, p: Prime, q: &BigRational) -> Result<GroupValue> {
    if q.is_negative() {
        return Err(Error::InvalidRadius("norm radius exponent must be ≥ 0"));
    }
    match term_exponents(f, p, q) {
        None => match f.tail_bound {
            ExtInt::Infinity => Ok(GroupValue::Zero),
            ExtInt::Finite(_) => Err(Error::UncertainTail),
        },
        Some((_, m)) => {
            if tail_certifies(f, &m) {
                Ok(GroupValue::PExp(-m))
            } else {
                Err(Error::UncertainTail)
            }
        }
    }
}

/// Re-expands the explicit part around a new center `α` with `|α|_p ≤ 1`:
/// `f(w) = Σ b_j (w−α)^j` with `b_j = Σ_{i≥j} C(i,j) a_i α^{i−j}`, computed
/// exactly. The tail certificate survives because `|α| ≤ 1` cannot raise
/// the norm of any omitted term.
pub fn recenter(f: &TateSeries, p: Prime, alpha: &BigRational) -> Result<TateSeries> {
    match scalar::vp(alpha, p) {
        ExtInt::Finite(v) if v < 0 => return Err(Error::CenterOutsideDisc),
        _ => {}
    }
    if alpha.is_zero() || f.coeffs.is_empty() {
        return Ok(f.clone());
    }
    let n = f.coeffs.len();
    // Pascal triangle up to row n−1.
    let mut binom: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for i in 1..n {
        let prev = &binom[i - 1];
        let mut row = vec![BigInt::one()];
        for j in 1..i {
            row.push(&prev[j - 1] + &prev[j]);
        }
        row.push(BigInt::one());
        binom.push(row);
    }
    let mut out = vec![BigRational::zero(); n];
    for (i, a) in f.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let mut power = BigRational::one();
        // Walk j downward so α^{i−j} grows by one factor per step.
        for j in (0..=i).rev() {
            out[j] += a * BigRational::from_integer(binom[i][j].clone()) * &power;
            power *= alpha;
        }
    }
    Ok(TateSeries::new(out, f.tail_bound))
}

/// Residue reduction at the maximal terms of the radius-`p^{−q}` norm: with
/// `M = min_i (vp(a_i) + q·i)`, returns `Σ residueUnit(a_i)·t^i` over the
/// attaining indices, as dense `𝔽_p` coefficients. Under the residue-1
/// scaling convention the formal scaling element of valuation `M` reduces
/// to 1, which is what makes this the reduction of the normalized
/// recentred series.
///
/// Requires the attaining set itself to be certified complete, which is
/// stricter than certifying the norm: an omitted term can tie the minimum
/// exactly when `M = tail_bound` and `q = 0`.
pub fn reduce_at_max(f: &TateSeries, p: Prime, q: &BigRational) -> Result<Vec<u64>> {
    if q.is_negative() {
        return Err(Error::InvalidRadius("norm radius exponent must be ≥ 0"));
    }
    let Some((terms, m)) = term_exponents(f, p, q) else {
        return match f.tail_bound {
            ExtInt::Infinity => Err(Error::ZeroSeries),
            ExtInt::Finite(_) => Err(Error::UncertainTail),
        };
    };
    let attaining_certified = match f.tail_bound {
        ExtInt::Infinity => true,
        ExtInt::Finite(t) => m < scalar::int(t) || (m == scalar::int(t) && q.is_positive()),
    };
    if !attaining_certified {
        return Err(Error::UncertainTail);
    }
    let attaining: Vec<usize> = terms
        .iter()
        .filter(|(_, e)| *e == m)
        .map(|(i, _)| *i)
        .collect();
    let top = *attaining.last().expect("minimum is attained");
    let mut out = vec![0u64; top + 1];
    for i in attaining {
        out[i] = scalar::residue_unit(&f.coeffs[i], p)?;
    }
    Ok(out)
}

/// Newton polygon of a non-zero polynomial: the slopes of the lower convex
/// hull of `{(i, vp(a_i))}` with horizontal lengths as multiplicities, the
/// negatives of the slopes being the valuations of the roots. A factor
/// `w^m` is split off first and reported as a leading sentinel segment of
/// multiplicity `m` (roots at 0, valuation `+∞`).
pub fn newton_polygon(f: &TateSeries, p: Prime) -> Result<Vec<NewtonSegment>> {
    if !f.is_polynomial() {
        return Err(Error::NotPolynomial);
    }
    let Some(ord) = f.explicit_order() else {
        return Err(Error::ZeroPolynomial);
    };
    let mut segments = Vec::new();
    if ord > 0 {
        segments.push(NewtonSegment {
            slope: None,
            multiplicity: ord,
        });
    }
    let points: Vec<(i64, i64)> = f
        .coeffs
        .iter()
        .enumerate()
        .skip(ord)
        .filter_map(|(i, a)| match scalar::vp(a, p) {
            ExtInt::Finite(v) => Some((i as i64, v)),
            ExtInt::Infinity => None,
        })
        .collect();
    // Monotone-chain lower hull; collinear middle points are dropped so
    // equal slopes merge into one segment.
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &(x, y) in &points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // Pop unless (x1,y1) → (x2,y2) → (x,y) turns strictly upward.
            if (y2 - y1) as i128 * (x - x2) as i128 >= (y - y2) as i128 * (x2 - x1) as i128 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    for pair in hull.windows(2) {
        let (x1, y1) = pair[0];
        let (x2, y2) = pair[1];
        segments.push(NewtonSegment {
            slope: Some(scalar::ratio(y2 - y1, x2 - x1)),
            multiplicity: (x2 - x1) as usize,
        });
    }
    Ok(segments)
}

/// Degree of the monic Weierstrass factor: the largest index attaining the
/// minimal coefficient valuation. The attaining set must be finite and
/// certified, so a finite tail bound has to sit strictly above the minimum.
pub fn weierstrass_degree(f: &TateSeries, p: Prime) -> Result<usize> {
    let Some(min) = f.min_explicit_vp(p) else {
        return match f.tail_bound {
            ExtInt::Infinity => Err(Error::ZeroSeries),
            ExtInt::Finite(_) => Err(Error::UncertainTail),
        };
    };
    match f.tail_bound {
        ExtInt::Finite(t) if t <= min => return Err(Error::UncertainTail),
        _ => {}
    }
    Ok(f
        .coeffs
        .iter()
        .enumerate()
        .rev()
        .find(|(_, a)| scalar::vp(a, p) == ExtInt::Finite(min))
        .expect("minimum is attained")
        .0)
}
