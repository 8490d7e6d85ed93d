//! The catalog of finitely presented points of the closed unit disc over
//! `ℂ_p`: classical points, disc points of rational and irrational radius,
//! and the rank-2 points refining a disc point by a residue direction.
//!
//! Each descriptor evaluates series exactly into its value group:
//!
//! * `Classical(α)`: `|f| = ‖f(α)‖_p`, a rational power of p.
//! * `Disc(α, r)`: the sup norm over the subdisc `|w − α| ≤ r`, computed as
//!   the max of `‖b_i‖·r^i` over the recentred coefficients. For `r = p^{−q}`
//!   this lands in `p^ℚ`; otherwise in the rank-1 group `p^ℚ·r^ℤ`.
//! * `Type5(α, q, λ)`: the lexicographic pair whose first coordinate is the
//!   disc value at radius `p^{−q}` and whose second is `ε^{ord_λ}` of the
//!   residue reduction, `ε` an infinitesimal drop just below 1.
//!
//! The λ-coordinate lives on `ℙ¹` of a finite residue field and is read in
//! the canonical coordinate fixed by the residue-1 scaling of
//! [`crate::tate::reduce_at_max`]; choosing a different normalizer would
//! translate λ, never changing which valuation the descriptor denotes.

use crate::error::Error;
use crate::ffield::{ord_at, FqContext, P1Point};
use crate::ordgroup::{self, GroupDescriptor, GroupValue};
use crate::scalar::{self, ExtInt, Prime};
use crate::tate::{self, TateSeries};
use crate::Result;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Radius of a subdisc, split by whether it is a rational power of p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Radius {
    /// `r = p^{−q}` with `q ≥ 0`; `q = 0` is the full disc.
    PPower(BigRational),
    /// A plain rational `0 < r < 1` outside the integer powers of p (rational
    /// numbers admit no other way of lying in `p^ℚ`).
    Plain(BigRational),
}

impl Radius {
    pub fn p_power(q: BigRational) -> Result<Radius> {
        if q.is_negative() {
            return Err(Error::InvalidRadius("p-power radius needs exponent ≥ 0"));
        }
        Ok(Radius::PPower(q))
    }

    pub fn plain(p: Prime, r: BigRational) -> Result<Radius> {
        ordgroup::check_mixed_base(p, &r)?;
        Ok(Radius::Plain(r))
    }
}

/// A finitely presented point of the disc catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointDescriptor {
    Classical {
        alpha: BigRational,
    },
    Disc {
        alpha: BigRational,
        radius: Radius,
    },
    Type5 {
        alpha: BigRational,
        /// Radius exponent: the underlying disc has radius `p^{−q}`, `q ≥ 0`.
        q: BigRational,
        /// Residue field of the direction coordinate.
        ctx: FqContext,
        lambda: P1Point,
    },
}

/// Residue field shape of a point, up to the algebraic closure `𝔽̄_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueField {
    /// `𝔽̄_p` itself.
    AlgClosedPrime,
    /// The rational function field `𝔽̄_p(t)`.
    RationalFunction,
}

/// Classification row for a point: its type, value group, residue field,
/// whether it is closed in the disc, and whether it lies in the disc at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointReport {
    pub type_tag: u8,
    pub value_group: GroupDescriptor,
    pub residue_field: ResidueField,
    pub closed: bool,
    pub in_d: bool,
}

fn check_center(alpha: &BigRational, p: Prime) -> Result<()> {
    match scalar::vp(alpha, p) {
        ExtInt::Finite(v) if v < 0 => Err(Error::CenterOutsideDisc),
        _ => Ok(()),
    }
}

impl PointDescriptor {
    pub fn classical(p: Prime, alpha: BigRational) -> Result<PointDescriptor> {
        check_center(&alpha, p)?;
        Ok(PointDescriptor::Classical { alpha })
    }

    pub fn disc(p: Prime, alpha: BigRational, radius: Radius) -> Result<PointDescriptor> {
        check_center(&alpha, p)?;
        Ok(PointDescriptor::Disc { alpha, radius })
    }

    pub fn type5(
        p: Prime,
        alpha: BigRational,
        q: BigRational,
        ctx: FqContext,
        lambda: P1Point,
    ) -> Result<PointDescriptor> {
        check_center(&alpha, p)?;
        if q.is_negative() {
            return Err(Error::InvalidRadius("p-power radius needs exponent ≥ 0"));
        }
        if ctx.prime() != p {
            return Err(Error::AmbientMismatch);
        }
        Ok(PointDescriptor::Type5 {
            alpha,
            q,
            ctx,
            lambda,
        })
    }

    /// The Gauss point: the whole disc at radius 1.
    pub fn gauss() -> PointDescriptor {
        PointDescriptor::Disc {
            alpha: BigRational::zero(),
            radius: Radius::PPower(BigRational::zero()),
        }
    }

    /// The rank-2 point just inside the boundary circle.
    pub fn x1_minus(p: Prime) -> Result<PointDescriptor> {
        let ctx = FqContext::new(p, 1)?;
        let lambda = P1Point::Finite(ctx.zero());
        PointDescriptor::type5(p, BigRational::zero(), BigRational::zero(), ctx, lambda)
    }

    /// The rank-2 point just outside the boundary circle; continuous but not
    /// a point of the disc.
    pub fn x1_plus(p: Prime) -> Result<PointDescriptor> {
        let ctx = FqContext::new(p, 1)?;
        PointDescriptor::type5(
            p,
            BigRational::zero(),
            BigRational::zero(),
            ctx,
            P1Point::Infinity,
        )
    }
}

/// Evaluates `|f(x)|` exactly into the point's value group; the zero
/// polynomial evaluates to the absorbing `Zero` everywhere.
pub fn evaluate(f: &TateSeries, x: &PointDescriptor, p: Prime) -> Result<GroupValue> {
    if f.is_zero_polynomial() {
        return Ok(GroupValue::Zero);
    }
    match x {
        PointDescriptor::Classical { alpha } => {
            let head = TateSeries::polynomial(f.coeffs().to_vec())
                .eval_polynomial(alpha)
                .expect("explicit part is a polynomial");
            let v = scalar::vp(&head, p);
            match f.tail_bound() {
                ExtInt::Infinity => Ok(match v {
                    ExtInt::Infinity => GroupValue::Zero,
                    ExtInt::Finite(v) => GroupValue::PExp(scalar::int(-v)),
                }),
                // |tail(α)| ≤ p^{−t} on the disc: the explicit head decides
                // the value only when it strictly dominates that bound.
                ExtInt::Finite(t) => match v {
                    ExtInt::Finite(v) if v < t => Ok(GroupValue::PExp(scalar::int(-v))),
                    _ => Err(Error::EvaluationOfNonPolynomialAtClassicalPoint),
                },
            }
        }
        PointDescriptor::Disc { alpha, radius } => {
            let g = tate::recenter(f, p, alpha)?;
            match radius {
                Radius::PPower(q) => tate::r_gauss_norm(&g, p, q),
                Radius::Plain(r) => plain_disc_norm(&g, p, r),
            }
        }
        PointDescriptor::Type5 {
            alpha,
            q,
            ctx,
            lambda,
        } => {
            if ctx.prime() != p {
                return Err(Error::AmbientMismatch);
            }
            let g = tate::recenter(f, p, alpha)?;
            let e = match tate::r_gauss_norm(&g, p, q)? {
                GroupValue::Zero => return Ok(GroupValue::Zero),
                GroupValue::PExp(e) => e,
                _ => unreachable!("radius norms are p-powers"),
            };
            let reduced = ctx.poly_from_prime(&tate::reduce_at_max(&g, p, q)?);
            match ord_at(ctx, &reduced, &ctx.poly_one(), lambda)? {
                ExtInt::Finite(n) => Ok(GroupValue::Lex2 { e, n }),
                ExtInt::Infinity => unreachable!("reduction of a non-zero series is non-zero"),
            }
        }
    }
}

/// Sup norm over a disc of plain radius: maximizes `p^{−vp(b_i)}·r^i` with
/// the exact rank-1 comparator. Certified when the explicit maximum is at
/// least `p^{−tail}`, since omitted terms stay strictly below that.
fn plain_disc_norm(g: &TateSeries, p: Prime, r: &BigRational) -> Result<GroupValue> {
    let mut best: Option<GroupValue> = None;
    for (i, b) in g.coeffs().iter().enumerate() {
        let v = match scalar::vp(b, p) {
            ExtInt::Finite(v) => v,
            ExtInt::Infinity => continue,
        };
        let candidate = ordgroup::GroupValue::mixed(p, scalar::int(-v), i as i64, r.clone())?;
        let better = match &best {
            None => true,
            Some(m) => ordgroup::cmp(p, &candidate, m)? == std::cmp::Ordering::Greater,
        };
        if better {
            best = Some(candidate);
        }
    }
    match (best, g.tail_bound()) {
        (None, ExtInt::Infinity) => Ok(GroupValue::Zero),
        (None, ExtInt::Finite(_)) => Err(Error::UncertainTail),
        (Some(m), ExtInt::Infinity) => Ok(m),
        (Some(m), ExtInt::Finite(t)) => {
            let floor = ordgroup::GroupValue::mixed(p, scalar::int(-t), 0, r.clone())?;
            if ordgroup::cmp(p, &m, &floor)? == std::cmp::Ordering::Less {
                Err(Error::UncertainTail)
            } else {
                Ok(m)
            }
        }
    }
}

/// Whether the point lies in the closed unit disc: `|w(x)| ≤ 1`.
pub fn in_d(x: &PointDescriptor, p: Prime) -> Result<bool> {
    let value = evaluate(&TateSeries::variable(), x, p)?;
    let Some(ambient) = value.ambient() else {
        return Ok(true);
    };
    let one = ordgroup::identity(&ambient);
    Ok(ordgroup::cmp(p, &value, &one)? != std::cmp::Ordering::Greater)
}

/// Whether `f` lies in the support (the prime ideal where `|·| = 0`).
pub fn support_contains(x: &PointDescriptor, f: &TateSeries, p: Prime) -> Result<bool> {
    Ok(evaluate(f, x, p)?.is_zero())
}

/// The classification row of a catalog point.
pub fn classify(x: &PointDescriptor, p: Prime) -> Result<PointReport> {
    Ok(match x {
        PointDescriptor::Classical { .. } => PointReport {
            type_tag: 1,
            value_group: GroupDescriptor::PQ,
            residue_field: ResidueField::AlgClosedPrime,
            closed: true,
            in_d: true,
        },
        PointDescriptor::Disc {
            radius: Radius::PPower(_),
            ..
        } => PointReport {
            type_tag: 2,
            value_group: GroupDescriptor::PQ,
            residue_field: ResidueField::RationalFunction,
            closed: false,
            in_d: true,
        },
        PointDescriptor::Disc {
            radius: Radius::Plain(r),
            ..
        } => PointReport {
            type_tag: 3,
            value_group: GroupDescriptor::PQrZ(r.clone()),
            residue_field: ResidueField::AlgClosedPrime,
            closed: true,
            in_d: true,
        },
        PointDescriptor::Type5 { .. } => PointReport {
            type_tag: 5,
            value_group: GroupDescriptor::PQxHalfZ,
            residue_field: ResidueField::AlgClosedPrime,
            closed: true,
            in_d: in_d(x, p)?,
        },
    })
}

/// Decides whether two descriptors denote the same valuation.
///
/// Classical points are equal on equal centers. Disc points of equal radius
/// are equal when the centers are within that radius of each other. Rank-2
/// descriptors must share the radius exponent and residue field; moving the
/// center by `δ` with `vp(δ) > q` fixes λ, while `vp(δ) = q` (only possible
/// for integer `q`) translates the coordinate by the unit residue of
/// `δ/p^q`, so λ shifts by that residue (`∞` stays put).
pub fn same_point(x: &PointDescriptor, y: &PointDescriptor, p: Prime) -> Result<bool> {
    Ok(match (x, y) {
        (PointDescriptor::Classical { alpha: a }, PointDescriptor::Classical { alpha: b }) => {
            a == b
        }
        (
            PointDescriptor::Disc {
                alpha: a,
                radius: ra,
            },
            PointDescriptor::Disc {
                alpha: b,
                radius: rb,
            },
        ) => ra == rb && center_shift_within(a, b, ra, p),
        (
            PointDescriptor::Type5 {
                alpha: a,
                q: qa,
                ctx: ca,
                lambda: la,
            },
            PointDescriptor::Type5 {
                alpha: b,
                q: qb,
                ctx: cb,
                lambda: lb,
            },
        ) => {
            if qa != qb || ca != cb {
                return Ok(false);
            }
            let delta = a - b;
            if delta.is_zero() {
                return Ok(la == lb);
            }
            match scalar::vp(&delta, p) {
                ExtInt::Infinity => unreachable!("delta is non-zero"),
                ExtInt::Finite(v) => {
                    let vq = scalar::int(v);
                    if vq < *qa {
                        false
                    } else if vq > *qa {
                        la == lb
                    } else {
                        // vp(δ) = q forces q ∈ ℤ; in the coordinate of y the
                        // point of x sits at λ_x + residue(δ/p^q).
                        let unit = delta / scalar::rational_pow(&p.to_rational(), v)?;
                        let s = scalar::residue_unit(&unit, p)?;
                        crate::ffield::p1_shift(ca, la, s) == *lb
                    }
                }
            }
        }
        _ => false,
    })
}

/// Whether `|a − b|` is at most the radius.
fn center_shift_within(a: &BigRational, b: &BigRational, radius: &Radius, p: Prime) -> bool {
    let v = match scalar::vp(&(a - b), p) {
        ExtInt::Infinity => return true,
        ExtInt::Finite(v) => scalar::int(v),
    };
    match radius {
        Radius::PPower(q) => v >= *q,
        // p^{−v} ≤ r with r not a power of p: compare exactly via the
        // rank-1 order p^{−v} vs r¹.
        Radius::Plain(r) => {
            let lhs = GroupValue::Mixed {
                e: -v,
                n: 0,
                r: r.clone(),
            };
            let rhs = GroupValue::Mixed {
                e: BigRational::zero(),
                n: 1,
                r: r.clone(),
            };
            ordgroup::cmp(p, &lhs, &rhs).expect("same ambient") != std::cmp::Ordering::Greater
        }
    }
}
