use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable context mismatch: {0}")]
    ContextMismatch(String),

    #[error("germ is not singular at the origin (nonzero linear part)")]
    NonSingularGerm,

    #[error("not certified by jet order {0}; raise the jet budget")]
    NotCertifiedByOrder(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unfolding does not unfold the given germ: {0}")]
    NotAnUnfoldingOf(String),

    #[error("invalid augmenting function: {0}")]
    InvalidAugmentingFunction(String),

    #[error("unfolding is not stable: A_e-codimension at least {0}")]
    NotStable(usize),

    #[error("hypotheses unmet: {0}")]
    HypothesesUnmet(String),

    #[error("germ file line {line}: {msg}")]
    GermFile { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn is_certification_failure(&self) -> bool {
        matches!(self, Error::NotCertifiedByOrder(_))
    }

    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            Error::HypothesesUnmet(_)
                | Error::NotStable(_)
                | Error::NotAnUnfoldingOf(_)
                | Error::InvalidAugmentingFunction(_)
                | Error::NonSingularGerm
                | Error::Precondition(_)
        )
    }
}
