//! The crate-wide error taxonomy. Variant names double as stable error codes
//! in the CLI protocol, so renaming one is a wire-format change.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two group values (or a value and a subgroup) live in different ambient
    /// ordered groups.
    #[error("ambient value groups differ")]
    AmbientMismatch,

    /// A convex-closure query was handed the absorbing zero, which is not a
    /// group element.
    #[error("generator set contains the absorbing zero")]
    ZeroInGeneratorSet,

    /// Denominator of a rational function is the zero polynomial.
    #[error("zero denominator")]
    ZeroDenominator,

    /// The operation is undefined on zero input.
    #[error("zero input")]
    ZeroInput,

    /// The tail certificate of a truncated series is too weak to certify the
    /// requested quantity; the omitted coefficients could dominate.
    #[error("tail bound too weak to certify the result")]
    UncertainTail,

    /// A disc or series center has negative p-adic valuation and therefore
    /// lies outside the closed unit disc.
    #[error("center lies outside the closed unit disc")]
    CenterOutsideDisc,

    /// The series is zero where a non-zero one is required.
    #[error("series is zero")]
    ZeroSeries,

    /// The polynomial is zero where a non-zero one is required.
    #[error("polynomial is zero")]
    ZeroPolynomial,

    /// A finite tail bound was supplied where an exact polynomial is required.
    #[error("series has a finite tail bound, not a polynomial")]
    NotPolynomial,

    /// Evaluation at a classical point cannot absorb the series tail: the
    /// certified part does not dominate the uncertainty.
    #[error("tail cannot be dominated when evaluating at a classical point")]
    EvaluationOfNonPolynomialAtClassicalPoint,

    /// The point lies outside the closed unit disc.
    #[error("point lies outside the closed unit disc")]
    PointNotInD,

    /// Horizontal specialization requires the convex subgroup to contain
    /// every attained value `≥ 1`; this one does not.
    #[error("convex subgroup does not contain all attained values >= 1")]
    Gamma1NotContained,

    /// The generators do not span an open ideal, so the rational localization
    /// is not defined.
    #[error("generators do not span an open ideal")]
    NotOpenIdeal,

    /// Openness of the generated ideal could not be decided within the search
    /// bound.
    #[error("openness of the ideal is undecided within the search bound")]
    UnknownOpenness,

    /// An ideal generator has a finite tail bound; openness checks need exact
    /// polynomials.
    #[error("ideal generator is not a polynomial")]
    NonPolynomialGenerator,

    /// An element does not lie in the ring it was offered to.
    #[error("element lies outside the ring")]
    NotInRing,

    /// A continuity check needs at least one sample function.
    #[error("sample set is empty")]
    EmptySampleSet,

    /// The modulus of a prime context failed the primality check.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// A disc radius outside `(0, 1)`, or a plain radius that is secretly an
    /// integer power of p.
    #[error("invalid radius: {0}")]
    InvalidRadius(&'static str),

    /// Malformed argument that no more specific variant covers.
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    /// An exact comparison would need an integer power too large to
    /// materialize.
    #[error("exponent magnitude exceeds the supported exact range")]
    ExponentTooLarge,
}

impl Error {
    /// Stable code string for the CLI protocol.
    pub fn code(&self) -> &'static str {
        match self {
            Error::AmbientMismatch => "AmbientMismatch",
            Error::ZeroInGeneratorSet => "ZeroInGeneratorSet",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::ZeroInput => "ZeroInput",
            Error::UncertainTail => "UncertainTail",
            Error::CenterOutsideDisc => "CenterOutsideDisc",
            Error::ZeroSeries => "ZeroSeries",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::NotPolynomial => "NotPolynomial",
            Error::EvaluationOfNonPolynomialAtClassicalPoint => {
                "EvaluationOfNonPolynomialAtClassicalPoint"
            }
            Error::PointNotInD => "PointNotInD",
            Error::Gamma1NotContained => "Gamma1NotContained",
            Error::NotOpenIdeal => "NotOpenIdeal",
            Error::UnknownOpenness => "UnknownOpenness",
            Error::NonPolynomialGenerator => "NonPolynomialGenerator",
            Error::NotInRing => "NotInRing",
            Error::EmptySampleSet => "EmptySampleSet",
            Error::NotPrime(_) => "NotPrime",
            Error::InvalidRadius(_) => "InvalidRadius",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::ExponentTooLarge => "ExponentTooLarge",
        }
    }
}
