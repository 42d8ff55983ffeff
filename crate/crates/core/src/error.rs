use thiserror::Error;

/// Errors surfaced by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// Gamma or hypergeometric pole at a non-positive integer argument.
    #[error("pole at non-positive integer {0}")]
    Pole(i64),

    /// Vanishing Green's-function denominator at the given energy.
    #[error("resolvent pole at E = {energy}: {what}")]
    ResolventPole { energy: f64, what: String },

    #[error("series did not converge after {terms} terms (last term {last_term:e}, partial sum {partial_sum:e})")]
    Convergence {
        terms: usize,
        last_term: f64,
        partial_sum: f64,
    },

    #[error("unsupported parameter regime: {0}")]
    UnsupportedRegime(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("no sign change in bracket [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("node count ambiguous: sign change within one step of the origin")]
    NodeAmbiguity,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),

    /// A `validate` run found a deviation beyond tolerance.
    #[error("validation failed: {0}")]
    Validation(String),
}

impl Error {
    /// Process exit status: 2 parse error, 3 numeric error, 4 validation
    /// failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Validation(_) => 4,
            _ => 3,
        }
    }

    /// Stable machine-readable tag for error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Pole(_) => "pole",
            Error::ResolventPole { .. } => "resolvent_pole",
            Error::Convergence { .. } => "convergence",
            Error::UnsupportedRegime(_) => "unsupported_regime",
            Error::Consistency(_) => "consistency",
            Error::Bracket { .. } => "bracket",
            Error::Numeric(_) => "numeric",
            Error::NodeAmbiguity => "node_ambiguity",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Validation(_) => "validation",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
