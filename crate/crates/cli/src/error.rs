use thiserror::Error;

#[derive(Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] polyapprox::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 2 for bad input, 3 when an estimator or solver fails on valid input.
    pub fn exit_code(&self) -> u8 {
        use polyapprox::Error as E;
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Core(
                E::InvalidArgument(_)
                | E::BudgetTooSmall { .. }
                | E::UnsupportedDimension { .. }
                | E::UnsupportedBodyKind { .. }
                | E::OriginNotInterior
                | E::DegenerateInput(_)
                | E::OffBoundary(_),
            ) => 2,
            CliError::Core(_) => 3,
            CliError::Verification(_) => 1,
        }
    }
}
