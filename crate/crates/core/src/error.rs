use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field specification: {0}")]
    InvalidField(String),

    #[error("valuation of {value} not certified at precision {precision}; raise the precision")]
    PrecisionExhausted { value: String, precision: u32 },

    #[error("{0} is not p-integral")]
    NotIntegral(String),

    #[error("group closure exceeded {bound} elements")]
    NotFinite { bound: usize },

    #[error("generators {0} and {1} have the same matrix")]
    NotFaithfulAction(usize, usize),

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("eigenvalue of element {0} is not in the coefficient field")]
    EigenvalueNotInField(usize),

    #[error("unknown family {0:?}")]
    UnknownFamily(String),

    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("operator has a nonzero twist and no function representation")]
    TwistNotZero,

    #[error("2-form is not invariant under group element {0}")]
    TwistNotInvariant(usize),

    #[error("exact division failed: {0}")]
    DivisionFailure(String),

    #[error("2-form is not closed")]
    NotClosed,

    #[error("d(eta) does not equal (omega1 - omega2)/t")]
    EtaMismatch,

    #[error("element is not in the Cherednik algebra: {0}")]
    NotInAlgebra(String),

    #[error("normal form did not terminate at filtration degree {0}")]
    NonTermination(u32),

    #[error("alpha cap {cap} too small: level {level} times cap must reach precision {precision}")]
    CapTooSmall { level: u32, cap: u32, precision: u32 },

    #[error("element is not in the level-{0} lattice")]
    NotInLattice(u32),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
