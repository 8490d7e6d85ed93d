//! Arithmetic in `𝔽_{p^k}`, dense polynomials over it, and the
//! order-of-vanishing valuations `ord_λ` on the rational function field
//! `𝔽_{p^k}(t)` that parametrize the residue directions of type-5 points.
//!
//! A field is carried by an [`FqContext`], which owns the prime, the degree
//! `k ≤ 8`, and a monic irreducible modulus found deterministically at
//! construction (smallest in the base-p counting order, verified by trial
//! factorization). Elements are coordinate vectors in the basis
//! `1, t, …, t^{k-1}`; all operations go through the context.
//!
//! The convention at infinity is `ord_∞(num/den) = deg(den) − deg(num)`:
//! poles at infinity count negative, so that `ord` stays additive and
//! `λ = ∞` produces values above 1 for positive powers of the variable.

use crate::error::Error;
use crate::ordgroup::GroupValue;
use crate::scalar::{ExtInt, Prime};
use crate::Result;
use num_rational::BigRational;
use num_traits::Zero as NumZero;

/// An element of `𝔽_{p^k}` as coordinates over the modulus basis, length `k`,
/// entries reduced into `0..p`.
pub type FqElem = Vec<u64>;

/// A field `𝔽_{p^k}` with its modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqContext {
    p: Prime,
    k: usize,
    /// Monic irreducible of degree `k` over `𝔽_p`, dense, length `k + 1`.
    modulus: Vec<u64>,
}

/// A dense polynomial over an [`FqContext`], trailing zeros trimmed; the zero
/// polynomial is the empty list and has degree `-∞` (`None`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqPoly {
    pub coeffs: Vec<FqElem>,
}

/// A point of `ℙ¹(𝔽_{p^k})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum P1Point {
    Finite(FqElem),
    Infinity,
}

const MAX_DEGREE: usize = 8;

impl FqContext {
    /// Builds `𝔽_{p^k}` with the first monic irreducible modulus of degree
    /// `k` in base-p counting order.
    pub fn new(p: Prime, k: usize) -> Result<FqContext> {
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::InvalidArgument("extension degree must lie in 1..=8"));
        }
        if k == 1 {
            // The polynomial t itself: the prime field needs no real modulus.
            return Ok(FqContext {
                p,
                k,
                modulus: vec![0, 1],
            });
        }
        let pm = p.get();
        let mut index = 0u128;
        let span = (pm as u128).pow(k as u32);
        while index < span {
            let mut modulus = Vec::with_capacity(k + 1);
            let mut rest = index;
            for _ in 0..k {
                modulus.push((rest % pm as u128) as u64);
                rest /= pm as u128;
            }
            modulus.push(1);
            if prime_poly_is_irreducible(pm, &modulus) {
                return Ok(FqContext { p, k, modulus });
            }
            index += 1;
        }
        unreachable!("irreducible polynomials of every degree exist over 𝔽_p")
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Field cardinality `p^k`.
    pub fn order(&self) -> u128 {
        (self.p.get() as u128).pow(self.k as u32)
    }

    pub fn zero(&self) -> FqElem {
        vec![0; self.k]
    }

    pub fn one(&self) -> FqElem {
        self.from_prime(1)
    }

    /// Embeds a prime-field scalar.
    pub fn from_prime(&self, c: u64) -> FqElem {
        let mut v = vec![0; self.k];
        v[0] = c % self.p.get();
        v
    }

    pub fn is_zero(&self, a: &FqElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.p.get();
        a.iter().zip(b).map(|(&x, &y)| (x + y) % p).collect()
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.p.get();
        a.iter().zip(b).map(|(&x, &y)| (x + p - y) % p).collect()
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        let p = self.p.get();
        a.iter().map(|&x| (p - x) % p).collect()
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.p.get();
        // Schoolbook product, then reduction by the monic modulus from the top.
        let mut prod = vec![0u64; 2 * self.k];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
            }
        }
        for i in (self.k..2 * self.k).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &m) in self.modulus.iter().enumerate().take(self.k) {
                let idx = i - self.k + j;
                let sub = (c as u128 * m as u128) % p as u128;
                prod[idx] = ((prod[idx] as u128 + p as u128 * p as u128 - sub) % p as u128) as u64;
            }
        }
        prod.truncate(self.k);
        prod
    }

    /// Multiplicative inverse by exponentiation with `p^k − 2`.
    pub fn inv(&self, a: &FqElem) -> Result<FqElem> {
        if self.is_zero(a) {
            return Err(Error::ZeroInput);
        }
        let mut exp = self.order() - 2;
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        Ok(acc)
    }

    /// All field elements in base-p counting order. Guarded so closure
    /// enumerations stay desk-sized.
    pub fn enumerate_elements(&self) -> Result<Vec<FqElem>> {
        let order = self.order();
        if order > 100_000 {
            return Err(Error::InvalidArgument(
                "field too large to enumerate its elements",
            ));
        }
        let p = self.p.get() as u128;
        let mut out = Vec::with_capacity(order as usize);
        for index in 0..order {
            let mut rest = index;
            let mut v = Vec::with_capacity(self.k);
            for _ in 0..self.k {
                v.push((rest % p) as u64);
                rest /= p;
            }
            out.push(v);
        }
        Ok(out)
    }

    // ---- polynomials ----

    pub fn poly_zero(&self) -> FqPoly {
        FqPoly { coeffs: Vec::new() }
    }

    pub fn poly_one(&self) -> FqPoly {
        FqPoly {
            coeffs: vec![self.one()],
        }
    }

    /// The variable `t`.
    pub fn poly_t(&self) -> FqPoly {
        FqPoly {
            coeffs: vec![self.zero(), self.one()],
        }
    }

    /// Builds a polynomial from coefficient vectors, trimming trailing zeros.
    pub fn poly_from_coeffs(&self, coeffs: Vec<FqElem>) -> FqPoly {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| self.is_zero(c)) {
            coeffs.pop();
        }
        FqPoly { coeffs }
    }

    /// Embeds a dense prime-field polynomial.
    pub fn poly_from_prime(&self, coeffs: &[u64]) -> FqPoly {
        self.poly_from_coeffs(coeffs.iter().map(|&c| self.from_prime(c)).collect())
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn poly_degree(&self, a: &FqPoly) -> Option<usize> {
        a.coeffs.len().checked_sub(1)
    }

    pub fn poly_is_zero(&self, a: &FqPoly) -> bool {
        a.coeffs.is_empty()
    }

    pub fn poly_add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let n = a.coeffs.len().max(b.coeffs.len());
        let zero = self.zero();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.coeffs.get(i).unwrap_or(&zero);
            let y = b.coeffs.get(i).unwrap_or(&zero);
            out.push(self.add(x, y));
        }
        self.poly_from_coeffs(out)
    }

    pub fn poly_mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        if self.poly_is_zero(a) || self.poly_is_zero(b) {
            return self.poly_zero();
        }
        let mut out = vec![self.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let t = self.mul(x, y);
                out[i + j] = self.add(&out[i + j], &t);
            }
        }
        self.poly_from_coeffs(out)
    }

    /// Euclidean division `a = q·b + r` with `deg r < deg b`.
    pub fn poly_div_rem(&self, a: &FqPoly, b: &FqPoly) -> Result<(FqPoly, FqPoly)> {
        if self.poly_is_zero(b) {
            return Err(Error::ZeroDenominator);
        }
        let db = b.coeffs.len() - 1;
        let lead_inv = self.inv(&b.coeffs[db])?;
        let mut rem = a.coeffs.clone();
        let mut quot = vec![self.zero(); a.coeffs.len().saturating_sub(db)];
        while rem.len() > db {
            let i = rem.len() - 1;
            let c = self.mul(&rem[i], &lead_inv);
            if !self.is_zero(&c) {
                quot[i - db] = c.clone();
                for (j, bc) in b.coeffs.iter().enumerate() {
                    let t = self.mul(&c, bc);
                    rem[i - db + j] = self.sub(&rem[i - db + j], &t);
                }
            }
            debug_assert!(self.is_zero(&rem[i]));
            rem.pop();
        }
        Ok((self.poly_from_coeffs(quot), self.poly_from_coeffs(rem)))
    }

    /// Multiplicity of the root `λ` in a non-zero polynomial.
    fn root_multiplicity(&self, a: &FqPoly, lambda: &FqElem) -> i64 {
        debug_assert!(!self.poly_is_zero(a));
        let divisor = self.poly_from_coeffs(vec![self.neg(lambda), self.one()]);
        let mut current = a.clone();
        let mut mult = 0i64;
        loop {
            let (q, r) = self
                .poly_div_rem(&current, &divisor)
                .expect("divisor is non-zero");
            if self.poly_is_zero(&r) {
                current = q;
                mult += 1;
            } else {
                return mult;
            }
        }
    }
}

/// Order of vanishing of `num/den ∈ 𝔽_{p^k}(t)` at a point of `ℙ¹`.
///
/// At a finite `λ` this is the multiplicity of `(t − λ)` in `num` minus the
/// multiplicity in `den`; at `∞` it is `deg(den) − deg(num)`. Both are
/// invariant under common factors, and `ord(0) = +∞` is the distinct
/// `Infinity` sentinel, never an integer.
pub fn ord_at(ctx: &FqContext, num: &FqPoly, den: &FqPoly, lambda: &P1Point) -> Result<ExtInt> {
    if ctx.poly_is_zero(den) {
        return Err(Error::ZeroDenominator);
    }
    if ctx.poly_is_zero(num) {
        return Ok(ExtInt::Infinity);
    }
    Ok(match lambda {
        P1Point::Finite(l) => {
            ExtInt::Finite(ctx.root_multiplicity(num, l) - ctx.root_multiplicity(den, l))
        }
        P1Point::Infinity => {
            let dn = ctx.poly_degree(num).expect("num non-zero") as i64;
            let dd = ctx.poly_degree(den).expect("den non-zero") as i64;
            ExtInt::Finite(dd - dn)
        }
    })
}

/// The value `(1/2)^{ord_λ(num/den)}` as the second coordinate of the
/// lexicographic group; the zero function maps to the absorbing zero.
pub fn lambda_value(
    ctx: &FqContext,
    num: &FqPoly,
    den: &FqPoly,
    lambda: &P1Point,
) -> Result<GroupValue> {
    match ord_at(ctx, num, den, lambda)? {
        ExtInt::Infinity => Ok(GroupValue::Zero),
        ExtInt::Finite(o) => Ok(GroupValue::Lex2 {
            e: BigRational::zero(),
            n: o,
        }),
    }
}

/// Translates a point of `ℙ¹` by a prime-field scalar; `∞` is fixed.
pub fn p1_shift(ctx: &FqContext, lambda: &P1Point, s: u64) -> P1Point {
    match lambda {
        P1Point::Infinity => P1Point::Infinity,
        P1Point::Finite(l) => P1Point::Finite(ctx.add(l, &ctx.from_prime(s))),
    }
}

// ---- prime-field polynomial helpers (for the modulus search) ----

fn prime_poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of dense division over `𝔽_p`; `b` monic.
fn prime_poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    debug_assert_eq!(*b.last().unwrap(), 1);
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    prime_poly_trim(&mut rem);
    while rem.len() > db {
        let i = rem.len() - 1;
        let c = rem[i];
        if c != 0 {
            for (j, &bc) in b.iter().enumerate() {
                let idx = i - db + j;
                let sub = (c as u128 * bc as u128) % p as u128;
                rem[idx] = ((rem[idx] as u128 + p as u128 * p as u128 - sub) % p as u128) as u64;
            }
        }
        debug_assert_eq!(rem[i], 0);
        rem.pop();
        prime_poly_trim(&mut rem);
    }
    rem
}

/// Trial factorization: a monic polynomial of degree `k` is irreducible iff
/// no monic polynomial of degree `1..=k/2` divides it.
fn prime_poly_is_irreducible(p: u64, poly: &[u64]) -> bool {
    let k = poly.len() - 1;
    for d in 1..=k / 2 {
        let span = (p as u128).pow(d as u32);
        for index in 0..span {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut rest = index;
            for _ in 0..d {
                divisor.push((rest % p as u128) as u64);
                rest /= p as u128;
            }
            divisor.push(1);
            if prime_poly_rem(p, poly, &divisor).is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u64, k: usize) -> FqContext {
        FqContext::new(Prime::new(p).unwrap(), k).unwrap()
    }

    fn lex2(n: i64) -> GroupValue {
        GroupValue::Lex2 {
            e: BigRational::zero(),
            n,
        }
    }

    #[test]
    fn smallest_irreducible_moduli_are_found() {
        // 𝔽₄: t² and t²+1 = (t+1)² are reducible, t²+t+1 is the first hit.
        assert_eq!(ctx(2, 2).modulus(), &[1, 1, 1]);
        // 𝔽₉: t² has root 0; t²+1 has no root in 𝔽₃ and degree 2, so it is
        // the first irreducible in counting order.
        assert_eq!(ctx(3, 2).modulus(), &[1, 0, 1]);
        assert_eq!(ctx(5, 1).modulus(), &[0, 1]);
    }

    #[test]
    fn extension_degree_bounds_are_enforced() {
        let p = Prime::new(3).unwrap();
        assert!(FqContext::new(p, 0).is_err());
        assert!(FqContext::new(p, 9).is_err());
        assert!(FqContext::new(p, 8).is_ok());
    }

    #[test]
    fn field_axioms_spot_check_in_f9() {
        let f9 = ctx(3, 2);
        let elements = f9.enumerate_elements().unwrap();
        assert_eq!(elements.len(), 9);
        for a in &elements {
            for b in &elements {
                assert_eq!(f9.add(a, b), f9.add(b, a));
                assert_eq!(f9.mul(a, b), f9.mul(b, a));
                assert_eq!(f9.sub(&f9.add(a, b), b), *a);
            }
            if !f9.is_zero(a) {
                let inv = f9.inv(a).unwrap();
                assert_eq!(f9.mul(a, &inv), f9.one());
            }
        }
    }

    #[test]
    fn simple_zero_has_order_one() {
        let f = ctx(3, 1);
        let t = f.poly_t();
        let one = f.poly_one();
        assert_eq!(
            ord_at(&f, &t, &one, &P1Point::Finite(f.zero())).unwrap(),
            ExtInt::Finite(1)
        );
    }

    #[test]
    fn pole_at_infinity_counts_negative() {
        // ord_∞(t) = deg(1) − deg(t) = −1.
        let f = ctx(3, 1);
        assert_eq!(
            ord_at(&f, &f.poly_t(), &f.poly_one(), &P1Point::Infinity).unwrap(),
            ExtInt::Finite(-1)
        );
    }

    #[test]
    fn multiplicity_counts_repeated_factors() {
        // Over 𝔽₃: (t−1)²(t+1) = t³ + t² + t + 1 ... expand exactly instead.
        let f = ctx(3, 1);
        let tm1 = f.poly_from_prime(&[2, 1]); // t − 1
        let tp1 = f.poly_from_prime(&[1, 1]); // t + 1
        let prod = f.poly_mul(&f.poly_mul(&tm1, &tm1), &tp1);
        let at_one = P1Point::Finite(f.from_prime(1));
        assert_eq!(
            ord_at(&f, &prod, &f.poly_one(), &at_one).unwrap(),
            ExtInt::Finite(2)
        );
        // Well-defined on fractions: multiplying through by (t−1) on both
        // sides changes nothing.
        assert_eq!(
            ord_at(&f, &f.poly_mul(&prod, &tm1), &tm1, &at_one).unwrap(),
            ExtInt::Finite(2)
        );
    }

    #[test]
    fn zero_function_and_zero_denominator() {
        let f = ctx(3, 1);
        assert_eq!(
            ord_at(&f, &f.poly_zero(), &f.poly_one(), &P1Point::Infinity).unwrap(),
            ExtInt::Infinity
        );
        assert_eq!(
            ord_at(&f, &f.poly_one(), &f.poly_zero(), &P1Point::Infinity),
            Err(Error::ZeroDenominator)
        );
        assert_eq!(
            lambda_value(&f, &f.poly_zero(), &f.poly_one(), &P1Point::Infinity).unwrap(),
            GroupValue::Zero
        );
    }

    #[test]
    fn lambda_values_are_half_powers() {
        let f = ctx(3, 1);
        let at_zero = P1Point::Finite(f.zero());
        assert_eq!(
            lambda_value(&f, &f.poly_t(), &f.poly_one(), &at_zero).unwrap(),
            lex2(1)
        );
        assert_eq!(
            lambda_value(&f, &f.poly_one(), &f.poly_one(), &P1Point::Infinity).unwrap(),
            lex2(0)
        );
        assert_eq!(
            lambda_value(&f, &f.poly_t(), &f.poly_one(), &P1Point::Infinity).unwrap(),
            lex2(-1)
        );
    }

    fn random_poly(f: &FqContext, rng: &mut ChaCha8Rng, max_deg: usize) -> FqPoly {
        let deg = rng.gen_range(0..=max_deg);
        let elements = f.enumerate_elements().unwrap();
        let coeffs: Vec<FqElem> = (0..=deg)
            .map(|_| elements[rng.gen_range(0..elements.len())].clone())
            .collect();
        f.poly_from_coeffs(coeffs)
    }

    #[test]
    fn ord_is_additive_on_products() {
        let f = ctx(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut lambdas: Vec<P1Point> = f
            .enumerate_elements()
            .unwrap()
            .into_iter()
            .map(P1Point::Finite)
            .collect();
        lambdas.push(P1Point::Infinity);
        let one = f.poly_one();
        for _ in 0..200 {
            let a = random_poly(&f, &mut rng, 5);
            let b = random_poly(&f, &mut rng, 5);
            if f.poly_is_zero(&a) || f.poly_is_zero(&b) {
                continue;
            }
            let prod = f.poly_mul(&a, &b);
            for lambda in &lambdas {
                let oa = ord_at(&f, &a, &one, lambda).unwrap();
                let ob = ord_at(&f, &b, &one, lambda).unwrap();
                let op = ord_at(&f, &prod, &one, lambda).unwrap();
                assert_eq!(op, oa + ob, "λ = {lambda:?}");
            }
        }
    }

    #[test]
    fn split_polynomials_have_degree_zero_on_p1() {
        // For f = c·Π(t−a_i), the orders over ℙ¹ sum to zero: each root
        // contributes its multiplicity and ∞ contributes −deg.
        let f = ctx(5, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let one = f.poly_one();
        for _ in 0..50 {
            let deg = rng.gen_range(1..=5);
            let mut poly = f.poly_from_prime(&[rng.gen_range(1..5)]);
            for _ in 0..deg {
                let root = rng.gen_range(0..5u64);
                let factor = f.poly_from_coeffs(vec![f.neg(&f.from_prime(root)), f.one()]);
                poly = f.poly_mul(&poly, &factor);
            }
            let mut total = 0i64;
            for l in f.enumerate_elements().unwrap() {
                match ord_at(&f, &poly, &one, &P1Point::Finite(l)).unwrap() {
                    ExtInt::Finite(o) => total += o,
                    ExtInt::Infinity => unreachable!(),
                }
            }
            match ord_at(&f, &poly, &one, &P1Point::Infinity).unwrap() {
                ExtInt::Finite(o) => total += o,
                ExtInt::Infinity => unreachable!(),
            }
            assert_eq!(total, 0);
        }
    }

    #[test]
    fn lambda_value_satisfies_the_ultrametric_inequality() {
        // ord(f+g) ≥ min(ord f, ord g) translates to |f+g| ≤ max(|f|, |g|).
        let f = ctx(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let mut lambdas: Vec<P1Point> = f
            .enumerate_elements()
            .unwrap()
            .into_iter()
            .map(P1Point::Finite)
            .collect();
        lambdas.push(P1Point::Infinity);
        let one = f.poly_one();
        for _ in 0..300 {
            let a = random_poly(&f, &mut rng, 5);
            let b = random_poly(&f, &mut rng, 5);
            let sum = f.poly_add(&a, &b);
            for lambda in &lambdas {
                let oa = ord_at(&f, &a, &one, lambda).unwrap_or(ExtInt::Infinity);
                let ob = ord_at(&f, &b, &one, lambda).unwrap_or(ExtInt::Infinity);
                let os = ord_at(&f, &sum, &one, lambda).unwrap_or(ExtInt::Infinity);
                assert!(os >= oa.min(ob), "λ = {lambda:?}");
            }
        }
    }

    #[test]
    fn shifting_lambda_translates_finite_points() {
        let f = ctx(3, 1);
        let l = P1Point::Finite(f.from_prime(2));
        assert_eq!(p1_shift(&f, &l, 2), P1Point::Finite(f.from_prime(1)));
        assert_eq!(p1_shift(&f, &P1Point::Infinity, 2), P1Point::Infinity);
    }

    #[test]
    fn division_round_trips() {
        let f = ctx(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..100 {
            let a = random_poly(&f, &mut rng, 6);
            let b = random_poly(&f, &mut rng, 3);
            if f.poly_is_zero(&b) {
                continue;
            }
            let (q, r) = f.poly_div_rem(&a, &b).unwrap();
            let back = f.poly_add(&f.poly_mul(&q, &b), &r);
            assert_eq!(back, a);
            if !f.poly_is_zero(&r) {
                assert!(f.poly_degree(&r).unwrap() < f.poly_degree(&b).unwrap());
            }
        }
    }
}
