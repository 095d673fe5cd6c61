use adrc::AdrcError;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DIVERGED: u8 = 3;
pub const EXIT_NOT_EQUIVALENT: u8 = 4;

/// A failed command: the process exit code and a one-line diagnostic.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn not_equivalent(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_NOT_EQUIVALENT,
            message: message.into(),
        }
    }
}

impl From<AdrcError> for Failure {
    fn from(err: AdrcError) -> Self {
        let code = match err {
            AdrcError::Diverged { .. } => EXIT_DIVERGED,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}
