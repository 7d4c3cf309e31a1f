//! Error type shared by all modules.

use core::fmt;

/// Everything that can go wrong in the exact-arithmetic pipeline.
///
/// Precision problems are always reported, never masked: a slot
/// beyond the tracked precision of a series is undefined, not zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two series with different coefficient rings were combined.
    RingMismatch,
    /// Exponent grids differ by a non-integer number of slots.
    GridMismatch { a: i64, b: i64 },
    /// Inversion requires a unit leading coefficient.
    NonUnitLeading,
    /// Operation requires integral exponents (offset24 divisible by 24).
    FractionalOffset { offset24: i64 },
    /// Theta on a fractional grid needs 1/24 in the ring; impossible mod l when l | 24.
    ThetaModulus { modulus: u64 },
    /// A rational coefficient has denominator divisible by the modulus.
    DenominatorDivisible { modulus: u64 },
    /// Moduli must be odd primes below 2^31.
    ModulusUnsupported { modulus: u64 },
    /// Requested precision leaves no valid coefficient slot.
    PrecisionUnderflow,
    /// Requested slots extend beyond the window where a congruence is exact.
    PrecisionWindow { prec: usize, window: usize },
    /// Eta-quotient factor index does not divide the level.
    BadEtaFactor { level: u64, delta: u64 },
    /// No nonzero eta factor given.
    EmptyEtaQuotient,
    /// The weight is not admissible for the requested basis family.
    InadmissibleWeight { m: u64, k: i64 },
    /// Basis index outside the valid range.
    IndexOutOfRange { m: u64, k: i64, r: i64 },
    /// The level is not one of the supported primes.
    UnsupportedLevel { m: u64 },
    /// (m, l) pair outside the domain of the requested operation.
    BadPair { m: u64, ell: u64 },
    /// No spanning set construction for this weight and level.
    SpanningSetUnavailable { m: u64, weight: i64 },
    /// A form that must be a reduction of the stated weight failed the membership test.
    NotInStartingWeight { m: u64, weight: i64 },
    /// Series coefficients expected to be integral were not.
    NonIntegralCoefficient { slot: usize },
    /// A built-in cross-check between two independent constructions failed.
    ConsistencyFailure { what: &'static str },
    /// Every residual of a check row vanished; the gcd method cannot decide.
    ZeroResiduals { m: u64 },
    /// Embedded coefficient data failed validation.
    BadEmbeddedData { what: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RingMismatch => write!(f, "coefficient rings do not match"),
            Error::GridMismatch { a, b } => {
                write!(f, "exponent grids incompatible: offsets {a}/24 and {b}/24")
            }
            Error::NonUnitLeading => write!(f, "leading coefficient is not a unit"),
            Error::FractionalOffset { offset24 } => {
                write!(f, "operation needs integral exponents, offset is {offset24}/24")
            }
            Error::ThetaModulus { modulus } => {
                write!(f, "theta on fractional grid undefined mod {modulus} (divides 24)")
            }
            Error::DenominatorDivisible { modulus } => {
                write!(f, "denominator divisible by modulus {modulus}")
            }
            Error::ModulusUnsupported { modulus } => {
                write!(f, "modulus {modulus} is not an odd prime below 2^31")
            }
            Error::PrecisionUnderflow => write!(f, "no valid coefficient slots remain"),
            Error::PrecisionWindow { prec, window } => {
                write!(f, "requested {prec} slots but the congruence window is {window}")
            }
            Error::BadEtaFactor { level, delta } => {
                write!(f, "eta factor {delta} does not divide level {level}")
            }
            Error::EmptyEtaQuotient => write!(f, "eta quotient has no nonzero factor"),
            Error::InadmissibleWeight { m, k } => {
                write!(f, "weight {k} not admissible for the level-{m} basis family")
            }
            Error::IndexOutOfRange { m, k, r } => {
                write!(f, "basis index {r} out of range for level {m}, weight {k}")
            }
            Error::UnsupportedLevel { m } => write!(f, "level {m} is not supported"),
            Error::BadPair { m, ell } => write!(f, "pair (m, l) = ({m}, {ell}) not in domain"),
            Error::SpanningSetUnavailable { m, weight } => {
                write!(f, "no spanning set for weight {weight} at level {m}")
            }
            Error::NotInStartingWeight { m, weight } => {
                write!(f, "reduction not found in its own weight {weight} at level {m}")
            }
            Error::NonIntegralCoefficient { slot } => {
                write!(f, "coefficient at slot {slot} is not an integer")
            }
            Error::ConsistencyFailure { what } => {
                write!(f, "internal consistency check failed: {what}")
            }
            Error::ZeroResiduals { m } => {
                write!(f, "all check-row residuals vanish for m = {m}; gcd method cannot decide")
            }
            Error::BadEmbeddedData { what } => write!(f, "embedded data invalid: {what}"),
        }
    }
}

impl core::error::Error for Error {}
