use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Vector or lattice lengths disagree.
    Dimension { expected: usize, found: usize },
    /// `index_in` was asked about a lattice that is not a subgroup.
    NotContained,
    /// Input rays positively span a line.
    NotPointed,
    /// The dual of a lower-dimensional cone contains a line.
    DualNotPointed,
    /// Common refinement requires equal supports.
    SupportMismatch,
    /// Colorings are only defined for complete fans.
    CompletenessRequired,
    /// Overlapping regions carry different lattices.
    ColoringInvalid(String),
    /// The pairing is not positive-definite.
    DefinitenessRequired,
    /// Two AV fans over different polarized bases.
    IncompatibleBase,
    /// Graph input is not connected.
    Disconnected,
    /// The supplied functionals do not span the dual space.
    ArrangementDegenerate,
    /// Two representatives lie in the same translation orbit with different data.
    Normalization(String),
    /// Input violates a structural requirement that is not one of the above.
    Invalid(String),
    /// The operation is not implemented for this configuration.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotContained => f.write_str("sublattice is not contained in the larger lattice"),
            Error::NotPointed => f.write_str("cone is not pointed"),
            Error::DualNotPointed => f.write_str("dual of a non-full-dimensional cone is not pointed"),
            Error::SupportMismatch => f.write_str("fans have different supports"),
            Error::CompletenessRequired => f.write_str("operation requires a complete fan"),
            Error::ColoringInvalid(s) => write!(f, "invalid coloring: {s}"),
            Error::DefinitenessRequired => f.write_str("pairing is not positive-definite"),
            Error::IncompatibleBase => f.write_str("fans live over different polarized bases"),
            Error::Disconnected => f.write_str("graph is not connected"),
            Error::ArrangementDegenerate => f.write_str("vectors do not span"),
            Error::Normalization(s) => write!(f, "normalization error: {s}"),
            Error::Invalid(s) => write!(f, "invalid input: {s}"),
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
