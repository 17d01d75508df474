use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // --- game well-formedness ---
    #[error("state `{0}` has an empty move set")]
    EmptyMoveSet(String),
    #[error("transition for state `{0}` and action `{1}` is missing")]
    PartialTransition(String, String),
    #[error("transition for state `{0}` and action `{1}` is given but the action is not available there")]
    SpuriousTransition(String, String),
    #[error("bad base permutation for player {0}")]
    BadPermutation(usize),
    #[error("initial configuration is malformed: {0}")]
    BadInitial(String),
    #[error("winners and losers overlap")]
    ConflictingConstraints,
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateIdentifier(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("bad observation template: {0}")]
    BadObservation(String),
    #[error("game must have at least one player and one state")]
    EmptyGame,

    // --- semantics ---
    #[error("player index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("illegal move for player {0}")]
    IllegalMove(usize),
    #[error("permutation {0} is not a bijection")]
    NotABijection(usize),
    #[error("base permutation {0} does not map 0 to {0}")]
    BaseAnchorViolated(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("no action is available in every configuration of observation class `{0}`")]
    NoUniformAction(String),
    #[error("strategy has no entry for observation `{0}`")]
    UndefinedKey(String),
    #[error("malformed strategy: {0}")]
    BadStrategy(String),

    // --- formulas ---
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("player index {0} out of range in formula")]
    PlayerIndexOutOfRange(usize),

    // --- resources ---
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("instance too large for the brute-force oracle: {0}")]
    OracleTooLarge(String),

    #[error("json: {0}")]
    Json(String),
}

impl Error {
    /// True for errors that mean the game description itself is malformed.
    pub fn is_invalid_game(&self) -> bool {
        matches!(
            self,
            Error::EmptyMoveSet(_)
                | Error::PartialTransition(..)
                | Error::SpuriousTransition(..)
                | Error::BadPermutation(_)
                | Error::BadInitial(_)
                | Error::ConflictingConstraints
                | Error::UnknownState(_)
                | Error::UnknownAction(_)
                | Error::DuplicateIdentifier(_)
                | Error::InvalidIdentifier(_)
                | Error::BadObservation(_)
                | Error::EmptyGame
                | Error::Syntax { .. }
                | Error::PlayerIndexOutOfRange(_)
                | Error::Json(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
