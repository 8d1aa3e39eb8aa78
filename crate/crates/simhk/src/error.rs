use thiserror::Error;

/// Crate-wide error type. Constructors that can fail return `Result<T>`;
/// anything that violates a structural invariant of an already-validated
/// object panics instead, since that is a bug and not an input error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("map values must be nondecreasing (position {pos}: {prev} then {next})")]
    NotMonotone { pos: usize, prev: u8, next: u8 },

    #[error("map value {value} out of range for codomain of size {codomain}")]
    ValueOutOfRange { value: u8, codomain: u8 },

    #[error("a simplex map needs a nonempty domain and codomain")]
    EmptyMap,

    #[error("cannot compose: inner codomain {inner} does not match outer domain {outer}")]
    ComposeMismatch { inner: u8, outer: u8 },

    #[error("generator index {index} out of range for {kind} into dimension {dim}")]
    GeneratorIndex { kind: &'static str, index: u8, dim: u8 },

    #[error("cell {cell} has dimension {dim}, expected {expected}")]
    CellDim { cell: usize, dim: u8, expected: u8 },

    #[error("unknown cell id {0}")]
    UnknownCell(usize),

    #[error("face table for cell {cell} lists {got} faces, expected {expected}")]
    FaceCount { cell: usize, got: usize, expected: usize },

    #[error("face {index} of cell {cell} has dimension {got}, expected {expected}")]
    FaceDim { cell: usize, index: u8, got: u8, expected: u8 },

    #[error("simplicial identity fails at cell {cell}: faces {i} and {j} disagree")]
    Incoherent { cell: usize, i: u8, j: u8 },

    #[error("morphism does not assign an image to cell {0}")]
    UnassignedCell(usize),

    #[error("assignment for cell {cell} is not natural at face {face}")]
    NotNatural { cell: usize, face: u8 },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("objects do not match: {0}")]
    ObjectMismatch(String),

    #[error("not a cofibration: {0}")]
    NotCofibration(String),

    #[error("certificate bound {bound} too small: {need}")]
    BoundTooSmall { bound: u8, need: String },

    #[error("square does not commute against the certified morphism")]
    IncompatibleSquare,

    #[error("no filler exists for the posed square")]
    NoFiller,

    #[error("evidence rejected: {0}")]
    BadEvidence(String),

    #[error("defining equations fail: {0}")]
    EquationsFail(String),

    #[error("case guard violated at index {index}: {detail}")]
    GuardViolation { index: usize, detail: String },

    #[error("morphism is not over the expected horn: {0}")]
    NotOverHorn(String),

    #[error("face selection is empty")]
    EmptyFaces,

    #[error("face lives in ambient dimension {got}, expected {expected}")]
    AmbientMismatch { got: u8, expected: u8 },

    #[error("duplicate cell label {0}")]
    DuplicateLabel(String),

    #[error("cell set is not face-closed at cell {0}")]
    NotFaceClosed(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("index {index} out of range (limit {limit})")]
    BadIndex { index: u8, limit: u8 },

    #[error("map is not over the base simplex: {0}")]
    NotOverN(String),

    #[error("vertex {vertex} is not shared by every face")]
    VertexNotShared { vertex: u8 },

    #[error("square is malformed: {0}")]
    BadSquare(String),
}

pub type Result<T> = std::result::Result<T, Error>;
