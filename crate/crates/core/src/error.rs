use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus m = {0} must be an odd integer >= 3")]
    InvalidModulus(i64),

    #[error("label {0} is not valid for m = {1}")]
    LabelOutOfRange(String, u32),

    #[error("cannot parse label `{0}`")]
    UnknownLabel(String),

    #[error("malformed braid header: {0}")]
    MalformedHeader(String),

    #[error("generator {generator} out of range for {strands} strands")]
    MalformedGenerator { generator: i64, strands: usize },

    #[error("plat closure requires an even number of strands, got {0}")]
    OddPlat(usize),

    #[error("dimension mismatch: {0}")]
    Mismatch(String),

    #[error("{0} must be an odd prime")]
    NotPrime(u64),

    #[error("refused: {0}")]
    Refused(String),

    #[error("incomplete tableau: measured operator commutes with every row but lies outside their span")]
    IncompleteTableau,

    #[error("operator has eigenvalues outside the powers of omega (odd zeta phase {0})")]
    OddPhase(u32),

    #[error("Seifert surface of the closure is disconnected (generator {0} never occurs); evaluate each split component separately")]
    DisconnectedSurface(usize),

    #[error("parameter regime not admissible: {0}")]
    WrongRegime(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for errors that reject a problem only because of its size.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::Refused(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
