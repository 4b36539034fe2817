use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base {0} is too small, at least 2 is required")]
    BaseTooSmall(u32),
    #[error("automaton has no states")]
    NoStates,
    #[error("state {state} out of range (automaton has {state_count} states)")]
    BadStateId { state: usize, state_count: usize },
    #[error("digit {digit} out of range for base {base}")]
    BadDigit { digit: u32, base: u32 },
    #[error("duplicate transition from state {state} on digit {digit}")]
    DuplicateTransition { state: usize, digit: u32 },
    #[error("{0} and the base are not coprime")]
    NotCoprime(u64),
    #[error("not in canonical form: {0}")]
    NotCanonical(String),
    #[error("automaton is not a group automaton")]
    NotGroupAutomaton,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("automaton exceeds the state limit of {0}")]
    StateLimitExceeded(usize),
    #[error("value overflows 64 bits")]
    Overflow,
    #[error("parameter extraction exhausted its caps: {0}")]
    ExtractionCapExceeded(String),
    #[error("insufficient data: need {needed} bits, have {available}")]
    InsufficientData { needed: usize, available: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
