use crate::words::Generator;

/// Errors raised by the core library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("generator {0} is not declared")]
    UndeclaredGenerator(Generator),
    #[error("generator {0} has no image under the map")]
    UnmappedGenerator(Generator),
    #[error("generator {0} is not in the alphabet {{a, b}}")]
    NotInCodeAlphabet(Generator),
    #[error("invalid code digit {0:?}; digits must lie in 1..=4")]
    InvalidDigit(char),
    #[error("generator {0} occurs in both operands")]
    Collision(Generator),
    #[error("no relator defines {0} by the given word")]
    NoDefiningRelator(Generator),
    #[error("definition of {0} refers to {0} itself")]
    SelfReferential(Generator),
    #[error("cannot substitute a non-letter word for {0} inside a relator schema")]
    SchemaSubstitution(Generator),
    #[error("word is not a member of the subgroup")]
    NotAMember,
    #[error("associated subgroups have ranks {left} and {right} but {pairs} generator pairs")]
    NotAnIsomorphism {
        left: usize,
        right: usize,
        pairs: usize,
    },
    #[error("presentation is not C'(1/6): piece ratio {numerator}/{denominator}")]
    NotSmallCancellation { numerator: u64, denominator: u64 },
    #[error("decision refused: {0}")]
    Refused(String),
    #[error("loop leaves the ball of radius {radius}")]
    LoopExitsBall { radius: usize },
    #[error("word does not trace a closed loop")]
    NotALoop,
    #[error("inconclusive at radius {radius}: {reason}")]
    Inconclusive { radius: usize, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("certificate rejected: {0}")]
    Rejected(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("stage {stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Wraps the error with the name of the pipeline stage that raised it.
    pub fn in_stage(self, stage: &str) -> Self {
        Error::Stage {
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }
}
