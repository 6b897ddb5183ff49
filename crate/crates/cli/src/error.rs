use std::fmt;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    /// Bad flags, config file or parameters.
    Config = 1,
    /// Unreadable or malformed input, unwritable output.
    Io = 2,
    /// A check failed or an internal invariant was violated.
    Invariant = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { kind: ExitKind::Config, message: message.into() }
    }

    pub fn invariant(message: impl Into<String>) -> Self {
        Self { kind: ExitKind::Invariant, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind as i32
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<khop_core::Error> for CliError {
    fn from(e: khop_core::Error) -> Self {
        use khop_core::Error as E;
        let kind = match e {
            E::Argument(_) | E::Config(_) | E::Bounds { .. } => ExitKind::Config,
            E::Parse { .. } | E::Format(_) | E::Io(_) => ExitKind::Io,
            E::Structural(_) => ExitKind::Invariant,
        };
        Self { kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self { kind: ExitKind::Io, message: e.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;
