use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    /// `position` is 1-based.
    #[error("invalid braid character {ch:?} at position {position}")]
    InvalidCharacter { position: usize, ch: char },
    #[error("empty braid word has no canonical closure")]
    Empty,
    #[error("{strands} strands given but the word needs {needed}")]
    TooFewStrands { strands: usize, needed: usize },
    #[error("braid closure is not a knot ({components} components)")]
    NotAKnot { components: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("no crossing with id {0}")]
    UnknownCrossing(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable mismatch: {0} vs {1}")]
    VariableMismatch(&'static str, &'static str),
    #[error("expected a polynomial in {expected}, got one in {got}")]
    WrongVariables { expected: &'static str, got: &'static str },
    #[error("nonzero coefficient of odd power z^{0} in a knot polynomial")]
    OddPower(i32),
    #[error("negative power z^{0} where a polynomial in z was expected")]
    NegativePower(i32),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeinError {
    #[error("intermediate diagram has {crossings} crossings, above the cap of {cap}")]
    ResourceLimit { crossings: usize, cap: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("derived vector redundancy violated at entry {entry}: {detail}")]
    Redundancy { entry: usize, detail: String },
    #[error("linear system is inconsistent at column {column}")]
    Inconsistent { column: usize },
    #[error("basis system has rank {0}, expected 18")]
    RankDeficient(usize),
    #[error("solved slot {slot} is not an integer: {value}")]
    NonInteger { slot: &'static str, value: String },
    #[error("nonlinear consistency failed: {constraint}")]
    Nonlinear { constraint: &'static str },
    #[error("input is not a knot ({components} components)")]
    NotAKnot { components: usize },
    #[error(transparent)]
    Skein(#[from] SkeinError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix has {entries} nonzero entries, above the cap of {cap}")]
    ResourceLimit { entries: usize, cap: usize },
    #[error("integer overflow during elimination")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("embedded dataset checksum mismatch: expected {expected}, got {got}")]
    Checksum { expected: String, got: String },
    #[error("dataset line {line}: {detail}")]
    Corrupt { line: usize, detail: String },
    #[error("{knot}: {source}")]
    Pipeline {
        knot: String,
        #[source]
        source: InvariantError,
    },
}
