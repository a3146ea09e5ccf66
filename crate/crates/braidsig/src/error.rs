use thiserror::Error;

/// Errors produced by parsing, diagram construction and the exact linear algebra.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty braid word")]
    EmptyWord,
    #[error("generator index must be a positive integer, got `{0}`")]
    NonPositiveIndex(String),
    #[error("generator index {index} needs at least {} strands, but {strands} were declared", index + 1)]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("malformed braid token `{0}`")]
    BadToken(String),
    #[error("closure is split: generator {0} is unused")]
    SplitInput(usize),
    #[error("diagram needs at least one braid generator")]
    NoColumns,
    #[error("matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("invalid matrix data: {0}")]
    BadMatrix(String),
    #[error("trisum attachment {index} targets core entry {value} > 0")]
    BadAttachment { index: usize, value: i64 },
    #[error("{surface} chessboard surface is disconnected ({components} components)")]
    DisconnectedSurface {
        surface: &'static str,
        components: usize,
    },
    #[error("signature sum {0} is odd; sign conventions are broken")]
    OddSignatureSum(i64),
    #[error("polynomial root refinement failed: {0}")]
    RootRefinement(String),
    #[error("structural decomposition failed: {0}")]
    Decomposition(String),
    #[error("pipeline preconditions not met: {0}")]
    PipelineSkip(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
