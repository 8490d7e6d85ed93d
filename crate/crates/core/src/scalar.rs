//! Scalar layer: validated primes, integers extended with `+∞`, and the exact
//! p-adic valuation and unit residue of rational numbers.
//!
//! Rationals stand in for the computable subfield `ℚ ⊂ ℂ_p`. Every quantity
//! the rest of the crate consumes from a scalar is either its valuation
//! `vp ∈ ℤ ∪ {+∞}` or its unit residue in `𝔽_p`, and both are exact here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// A validated prime, the ambient `p` of the whole model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if is_prime_u64(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::from_integer(self.to_bigint())
    }
}

impl std::fmt::Display for Prime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic Miller-Rabin over the full u64 range.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // This witness set decides primality for every n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// An integer extended with `+∞`.
///
/// This is the shared home of p-adic valuations (`vp(0) = +∞`), series tail
/// bounds (`+∞` marks an exact polynomial), and orders of vanishing
/// (`ord(0) = +∞`). The derived order puts `Infinity` above every finite
/// value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    Finite(i64),
    Infinity,
}

impl ExtInt {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtInt::Finite(_))
    }

    pub fn min(self, other: ExtInt) -> ExtInt {
        std::cmp::min(self, other)
    }
}

impl std::ops::Add for ExtInt {
    type Output = ExtInt;

    /// Saturating at `+∞`; finite overflow is a caller bug at desk scale.
    fn add(self, other: ExtInt) -> ExtInt {
        match (self, other) {
            (ExtInt::Finite(a), ExtInt::Finite(b)) => ExtInt::Finite(a + b),
            _ => ExtInt::Infinity,
        }
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> ExtInt {
        ExtInt::Finite(v)
    }
}

impl std::fmt::Display for ExtInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtInt::Finite(v) => write!(f, "{v}"),
            ExtInt::Infinity => write!(f, "inf"),
        }
    }
}

/// Exact p-adic valuation of a rational; `vp(0) = +∞`.
pub fn vp(x: &BigRational, p: Prime) -> ExtInt {
    if x.is_zero() {
        return ExtInt::Infinity;
    }
    let pb = p.to_bigint();
    ExtInt::Finite(int_vp(x.numer(), &pb) - int_vp(x.denom(), &pb))
}

/// Multiplicity of `p` in a non-zero integer.
fn int_vp(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut v = 0i64;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// The residue in `𝔽_p` of the unit part `x·p^{-vp(x)}`, as an integer in
/// `0..p`.
pub fn residue_unit(x: &BigRational, p: Prime) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let pb = p.to_bigint();
    let num = strip_p(x.numer(), &pb);
    let den = strip_p(x.denom(), &pb);
    let n = mod_prime(&num, p);
    let d = mod_prime(&den, p);
    debug_assert!(d != 0);
    let d_inv = pow_mod_u64(d, p.get() - 2, p.get());
    Ok(mul_mod_u64(n, d_inv, p.get()))
}

fn strip_p(n: &BigInt, p: &BigInt) -> BigInt {
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return n;
        }
        n = q;
    }
}

/// Canonical representative in `0..p` of an integer mod p.
fn mod_prime(n: &BigInt, p: Prime) -> u64 {
    n.mod_floor(&p.to_bigint())
        .to_u64()
        .expect("mod_floor result fits the modulus")
}

/// Parses `"a"` or `"a/b"` (optional signs, surrounding whitespace) into an
/// exact rational in lowest terms.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (ns, ds) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = ns
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument("malformed rational"))?;
    let d: BigInt = ds
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument("malformed rational"))?;
    if d.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(n, d))
}

/// Renders a rational as `"a/b"`, or plain `"a"` when integral.
pub fn render_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `x^k` for a (possibly negative) integer exponent, exactly.
pub fn rational_pow(x: &BigRational, k: i64) -> Result<BigRational> {
    if k == 0 {
        return Ok(BigRational::one());
    }
    if x.is_zero() {
        return if k > 0 {
            Ok(BigRational::zero())
        } else {
            Err(Error::ZeroInput)
        };
    }
    let e: u32 = k
        .unsigned_abs()
        .try_into()
        .map_err(|_| Error::ExponentTooLarge)?;
    let n = x.numer().pow(e);
    let d = x.denom().pow(e);
    Ok(if k > 0 {
        BigRational::new(n, d)
    } else {
        BigRational::new(d, n)
    })
}

/// Convenience constructor for small rationals.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor for integer rationals.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// True when `x` is an integer power `p^m`, `m ∈ ℤ`.
pub fn is_integer_power_of_p(x: &BigRational, p: Prime) -> bool {
    if x.is_zero() || x.is_negative() {
        return false;
    }
    let pb = p.to_bigint();
    // In lowest terms p^m has the shape p^m/1 or 1/p^(-m).
    let is_pure_power = |n: &BigInt| {
        let mut n = n.clone();
        while (&n % &pb).is_zero() {
            n /= &pb;
        }
        n.is_one()
    };
    (x.denom().is_one() && is_pure_power(x.numer()))
        || (x.numer().is_one() && is_pure_power(x.denom()))
}
