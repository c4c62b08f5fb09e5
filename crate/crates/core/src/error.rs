use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Pipeline stage, used to tag failures in [`Error::Stage`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Roots,
    Assembly,
    Tridiagonalization,
    Bisection,
    Vectors,
    SelfCheck,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Roots => "mesh roots",
            Stage::Assembly => "hamiltonian assembly",
            Stage::Tridiagonalization => "tridiagonalization",
            Stage::Bisection => "bisection",
            Stage::Vectors => "inverse iteration",
            Stage::SelfCheck => "self-check",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("precision exhausted: {requested} digits requested, at most {available} available")]
    PrecisionExhausted { requested: usize, available: usize },

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("exponent overflow in {0}")]
    Overflow(&'static str),

    #[error("potential is not confining: {0}")]
    NonConfining(String),

    #[error("inconsistent Sturm counts: {0}")]
    InconsistentSturm(String),

    #[error("no reference digits for lambda = {lambda}, state {state}")]
    MissingReference { lambda: String, state: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{stage} failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at(stage: Stage) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }

    /// True for failures of the arithmetic itself, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::PrecisionExhausted { .. }
            | Error::NoConvergence { .. }
            | Error::Overflow(_)
            | Error::InconsistentSturm(_) => true,
            Error::Stage { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    /// Process exit code: 1 for validation failures, 2 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        if self.is_numerical() {
            2
        } else {
            1
        }
    }
}
