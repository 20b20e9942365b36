use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad config, arguments or an unwritable output directory.
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Library(#[from] locuslab::Error),
}

impl CliError {
    /// 2 for input problems, 1 for computations that failed.
    pub fn exit_code(&self) -> i32 {
        use locuslab::Error as E;
        match self {
            Self::Input(_) => 2,
            Self::Library(
                E::InvalidSymbol(_)
                | E::PointDimension { .. }
                | E::IndexOutOfRange { .. }
                | E::InvalidIndexSet(_)
                | E::SymbolicBudget { .. }
                | E::SolverBudget { .. }
                | E::UnsupportedDimension { .. },
            ) => 2,
            Self::Library(_) => 1,
        }
    }
}
