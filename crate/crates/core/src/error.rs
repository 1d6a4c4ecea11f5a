use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order {0} is out of range")]
    BadOrder(usize),
    #[error("row {row} has {found} cells, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("symbol {symbol} at ({}, {}) is outside 1..={n}", .row + 1, .col + 1)]
    SymbolOutOfRange { row: usize, col: usize, symbol: usize, n: usize },
    #[error("duplicate symbol in row at ({}, {})", .row + 1, .col + 1)]
    DuplicateInRow { row: usize, col: usize },
    #[error("duplicate symbol in column at ({}, {})", .row + 1, .col + 1)]
    DuplicateInColumn { row: usize, col: usize },
    #[error("entry ({}, {}, {}) conflicts with the square", .0 + 1, .1 + 1, .2 + 1)]
    Conflict(usize, usize, usize),
    #[error("entry ({}, {}, {}) is outside an order-{3} square", .0 + 1, .1 + 1, .2 + 1)]
    EntryOutOfRange(usize, usize, usize, usize),
    #[error("index {index} is outside 0..{n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("line pair must consist of two distinct lines")]
    SameLine,
    #[error("start entry is not in the first line of the pair")]
    BadStart,
    #[error("alternating cycle runs into an empty cell")]
    IncompleteCycle,
    #[error("not an intercalate of this square")]
    NotAnIntercalate,
    #[error("intercalate is not stable")]
    NotStable,
    #[error("fraction {0} is outside [0, 1]")]
    BadFraction(String),
    #[error("block [{0}, {1}] is empty or reversed")]
    BadBlock(String, String),
    #[error("requested {requested} entries from a square with {available}")]
    TooMany { requested: usize, available: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("conditioning event has probability zero")]
    EmptyConditioning,
    #[error("parity pattern {0:?} is not admissible for this order")]
    InadmissibleParity([u8; 3]),
    #[error("line {line} is outside the chosen row, column and symbol sets")]
    OutsideBlocks { line: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
