use riemann_core::Error;

/// Failure of a CLI run, mapped to an exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for bad input, 3 for numerically infeasible requests, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::InvalidParameter { .. }
                | Error::ZeroDenominator
                | Error::WrongResidueClass { .. }
                | Error::OutsideLemmaRange { .. }
                | Error::InadmissibleExponent(_)
                | Error::FiniteExpansion
                | Error::NoAdmissibleDenominators => 2,
                Error::InfeasibleTolerance { .. }
                | Error::ResolutionFloor { .. }
                | Error::InsufficientPrecision { .. }
                | Error::UnresolvableChord { .. }
                | Error::InsufficientScaleRange { .. }
                | Error::NotTestable { .. }
                | Error::RefineTrace { .. } => 3,
            },
            CliError::Io(_) | CliError::Json(_) | CliError::Csv(_) => 1,
        }
    }
}
