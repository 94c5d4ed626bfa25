use num_rational::Ratio;

use crate::words::Word;

/// Errors reported by the library.
///
/// Variants split into three families that the command-line front end maps to
/// exit codes: malformed input (exit 2), failed gates/preconditions (exit 2),
/// and enumeration budgets that would be exceeded (exit 3).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid character {ch:?} at position {pos}; words use only 'a', 'b', 'B'")]
    InvalidCharacter { ch: char, pos: usize },

    #[error("word is not reduced at position {pos}; normalize it first")]
    NotReduced { pos: usize },

    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,

    #[error("relator tuple must be nonempty")]
    EmptyTuple,

    #[error("relator {index} is empty")]
    EmptyRelator { index: usize },

    #[error("sample length must be a positive even number, got {n}")]
    BadSampleLength { n: usize },

    #[error("bar label must be nonempty")]
    EmptyBar,

    #[error("{name} must satisfy {requirement}, got {value}")]
    BadParameter {
        name: &'static str,
        requirement: &'static str,
        value: String,
    },

    #[error(
        "small-cancellation gate failed: piece of length {piece_len} on a relator of length \
         {relator_len} breaks C'({lambda})"
    )]
    GateFailed {
        lambda: Ratio<u64>,
        piece_len: usize,
        relator_len: usize,
        piece: Word,
    },

    #[error("budget exceeded: the computation needs {needed} items, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("relators must all have the same length for this check")]
    UnequalLengths,

    #[error("generator {index} occurs in no relator")]
    UnusedGenerator { index: usize },

    #[error("invalid generator index {index}: presentation has {count} generators")]
    BadGeneratorIndex { index: i64, count: usize },

    #[error("malformed input line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("invalid rational {input:?}: expected \"p/q\" with positive integers")]
    BadRational { input: String },

    #[error("invalid presentation encoding: {reason}")]
    BadEncoding { reason: String },
}
