use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid Besov index: {0}")]
    Index(String),
    #[error("domain mismatch: {0}")]
    Domain(String),
    #[error("field is not divergence free (relative divergence {0:.3e})")]
    NotSolenoidal(f64),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("{part}: {source}")]
    Part {
        part: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error("oracle grid too large: {0}")]
    OracleSize(String),
    #[error("iteration diverged at step {step}: {consecutive} consecutive ratios >= 1")]
    Diverged { step: usize, consecutive: usize },
    #[error("invalid test function: {0}")]
    TestFunction(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn in_part(part: &'static str) -> impl FnOnce(Error) -> Error {
        move |e| Error::Part {
            part,
            source: Box::new(e),
        }
    }
}
