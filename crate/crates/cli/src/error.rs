use std::fmt;
use std::io;
use std::path::Path;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(regomax::Error),
    Io(String, io::Error),
}

impl CliError {
    pub fn io(path: &Path, err: io::Error) -> Self {
        CliError::Io(path.display().to_string(), err)
    }

    /// 2 configuration, 3 numerical, 4 input/output.
    pub fn exit_code(&self) -> u8 {
        use regomax::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Io(..) => 4,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(E::Io(_) | E::Csv(_) | E::Json(_) | E::Parse { .. } | E::Capacity { .. }) => 4,
            CliError::Core(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{path}: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<regomax::Error> for CliError {
    fn from(e: regomax::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
