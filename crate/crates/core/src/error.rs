use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Every failure the kernel can report.
///
/// Each variant has a stable machine-readable [`code`](Error::code) used by
/// the command-line front end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    /// Two cyclotomic values live in different fields `Q(ζ_N)`.
    OrderMismatch { left: u32, right: u32 },
    /// A primitive `n`-th root of unity is not available in `Q(ζ_N)`.
    OrderIncompatible { n: u32, order: u32 },
    NotDivisible,
    DescriptorMismatch,
    /// `Xⁿ − k` has a nontrivial common factor with the element being inverted.
    ZeroDivisor,
    InternalInvariantViolation(&'static str),
    /// `g² = k` in the quadratic norm-one parametrization.
    DegenerateG,
    NotInEllLine,
    GammaZero,
    ZeroLeading,
    NotAUnitOfRequiredForm,
    ZeroSeries,
    InsufficientTruncation(&'static str),
    InvalidArgument(&'static str),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::OrderMismatch { .. } => "OrderMismatch",
            Error::OrderIncompatible { .. } => "OrderIncompatible",
            Error::NotDivisible => "NotDivisible",
            Error::DescriptorMismatch => "DescriptorMismatch",
            Error::ZeroDivisor => "ZeroDivisor",
            Error::InternalInvariantViolation(_) => "InternalInvariantViolation",
            Error::DegenerateG => "DegenerateG",
            Error::NotInEllLine => "NotInEllLine",
            Error::GammaZero => "GammaZero",
            Error::ZeroLeading => "ZeroLeading",
            Error::NotAUnitOfRequiredForm => "NotAUnitOfRequiredForm",
            Error::ZeroSeries => "ZeroSeries",
            Error::InsufficientTruncation(_) => "InsufficientTruncation",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::OrderMismatch { left, right } => {
                write!(f, "cyclotomic order mismatch: {} vs {}", left, right)
            }
            Error::OrderIncompatible { n, order } => write!(
                f,
                "no primitive {}-th root of unity in Q(zeta_{})",
                n, order
            ),
            Error::NotDivisible => f.write_str("polynomial division leaves a remainder"),
            Error::DescriptorMismatch => f.write_str("elements belong to different extensions"),
            Error::ZeroDivisor => {
                f.write_str("element is a zero divisor: X^n - k is reducible for this k")
            }
            Error::InternalInvariantViolation(what) => {
                write!(f, "internal invariant violated: {}", what)
            }
            Error::DegenerateG => f.write_str("g^2 - k vanishes identically"),
            Error::NotInEllLine => f.write_str("one-form is not a K-multiple of l"),
            Error::GammaZero => f.write_str("constructed one-form vanishes"),
            Error::ZeroLeading => f.write_str("series has no nonzero leading term"),
            Error::NotAUnitOfRequiredForm => {
                f.write_str("series is not of the form 1 + (negative powers)")
            }
            Error::ZeroSeries => f.write_str("series is zero"),
            Error::InsufficientTruncation(what) => {
                write!(f, "series truncated too early: {}", what)
            }
            Error::InvalidArgument(what) => write!(f, "invalid argument: {}", what),
        }
    }
}

impl core::error::Error for Error {}
