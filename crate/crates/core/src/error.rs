use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown token at byte {pos}: {found:?}")]
    UnknownToken { pos: usize, found: String },

    #[error("unknown schema `{0}`")]
    UnknownSchema(String),

    #[error("metavariable `{0}` has no binding")]
    MissingBinding(String),

    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),

    #[error("unknown world `{0}`")]
    UnknownWorld(String),

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("too many worlds: {0} (at most {max})", max = crate::worldset::MAX_WORLDS)]
    TooManyWorlds(usize),

    #[error("R contains a cycle through `{0}`")]
    Cycle(String),

    #[error("structure is not a valid frame: {0}")]
    InvalidFrame(String),

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("{0}")]
    Precondition(String),

    #[error("condition `{condition}` does not apply to {kind} structures")]
    KindMismatch { condition: String, kind: &'static str },

    #[error("derivation format, line {line}: {msg}")]
    DerivationFormat { line: usize, msg: String },
}
