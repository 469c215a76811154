use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("element `{0}` declared more than once")]
    DuplicateElement(String),

    #[error("cover relation contains a cycle through `{0}`")]
    Cycle(String),

    #[error("cover ({lower}, {upper}) is implied by transitivity through `{via}`")]
    RedundantCover {
        lower: String,
        upper: String,
        via: String,
    },

    #[error("rank data inconsistent with covers: {0}")]
    InvalidRank(String),

    #[error("poset is not graded")]
    Ungraded,

    #[error("`{lower}` is not below `{upper}`")]
    NotComparable { lower: String, upper: String },

    #[error("index {index} out of range for a simplex of degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("presheaf is not functorial: {0}")]
    NotFunctorial(String),

    #[error("presheaf morphism is not natural at cover ({lower}, {upper})")]
    NotNatural { lower: String, upper: String },

    #[error("presheaf or cochain is based on a different poset")]
    BaseMismatch,

    #[error("map is not order-preserving: {0}")]
    NotMonotone(String),

    #[error("map is not injective: `{0}` has two preimages")]
    NotInjective(String),

    #[error("subposet is not induced: {0}")]
    NotInduced(String),

    #[error("homomorphism is not well defined on the given presentations")]
    NotWellDefined,

    #[error("differential does not square to zero in degree {0}")]
    BrokenComplex(i64),

    #[error("`{element}` does not look like a cell: {reason}")]
    NotCellLike { element: String, reason: String },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// Errors caused by a well-formed input that violates an operation's
    /// precondition, as opposed to malformed data.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Ungraded
                | Error::NotCellLike { .. }
                | Error::OutOfRange(_)
                | Error::NotComparable { .. }
                | Error::NotInjective(_)
                | Error::NotInduced(_)
        )
    }
}
