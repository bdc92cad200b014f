use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Engine(#[from] tomita::Error),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed result table: {0}")]
    Table(String),
}

impl CliError {
    /// Every error is a configuration or precondition problem.
    pub fn exit_code(&self) -> u8 {
        crate::EXIT_CONFIG
    }
}
