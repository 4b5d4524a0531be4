use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two bit strings of different lengths were combined.
    LengthMismatch { left: u32, right: u32 },
    /// A bit string length outside `1..=64`, or a word with bits beyond it.
    InvalidLength(u32),
    InvalidWord { len: u32, word: u64 },
    /// `(L, k)` violates `2 < k < L - 2`.
    InvalidParameters { l: u32, k: u32 },
    UnsupportedSize(u32),
    /// A removed-one index outside `1..k`.
    MaskIndex { j: u32, k: u32 },
    /// Coset weight does not match the number of phases.
    WeightMismatch { weight: u32, phases: usize },
    InvalidPhases,
    InvalidModulus,
    NotPrimitive,
    ZeroInverse,
    ZeroSeed,
    InvalidFilter,
    EmptyInput,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LengthMismatch { left, right } => {
                write!(f, "bit string lengths differ ({left} vs {right})")
            }
            Error::InvalidLength(l) => write!(f, "length {l} is outside 1..=64"),
            Error::InvalidWord { len, word } => {
                write!(f, "value {word:#x} does not fit in {len} bits")
            }
            Error::InvalidParameters { l, k } => {
                write!(f, "(L, k) = ({l}, {k}) violates 2 < k < L - 2")
            }
            Error::UnsupportedSize(l) => write!(f, "L = {l} is not supported here"),
            Error::MaskIndex { j, k } => write!(f, "mask index j = {j} is outside 1..{k}"),
            Error::WeightMismatch { weight, phases } => {
                write!(f, "coset weight {weight} differs from the {phases} phases")
            }
            Error::InvalidPhases => write!(f, "phases must be strictly increasing and below 2^L - 1"),
            Error::InvalidModulus => write!(f, "modulus must have degree >= 2 and a constant term"),
            Error::NotPrimitive => write!(f, "modulus is not a primitive polynomial"),
            Error::ZeroInverse => write!(f, "zero has no multiplicative inverse"),
            Error::ZeroSeed => write!(f, "LFSR seed must be nonzero"),
            Error::InvalidFilter => write!(f, "filter needs a unique term of maximum order"),
            Error::EmptyInput => write!(f, "input is empty"),
        }
    }
}

impl core::error::Error for Error {}
