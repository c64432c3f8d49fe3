use std::io;
use std::path::PathBuf;

use thiserror::Error;

use hqis_core::access_audit::AuditError;
use hqis_core::protocol::ProtocolError;
use hqis_core::qmath::QmathError;

/// Exit code for a completed command whose checks failed.
pub const EXIT_VERIFICATION: i32 = 1;
/// Exit code for invalid scenarios and bad usage.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Audit(#[from] AuditError),
    #[error(transparent)]
    Qmath(#[from] QmathError),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Write { .. } => EXIT_USAGE,
            CliError::Protocol(e) | CliError::Audit(AuditError::Protocol(e)) => {
                protocol_exit_code(e)
            }
            CliError::Audit(AuditError::InvalidCoalition(_) | AuditError::TooFewSecrets(_)) => {
                EXIT_USAGE
            }
            _ => EXIT_VERIFICATION,
        }
    }
}

fn protocol_exit_code(e: &ProtocolError) -> i32 {
    match e {
        ProtocolError::InvalidCoalition(_)
        | ProtocolError::NotAHelper { .. }
        | ProtocolError::InvalidSecret(_)
        | ProtocolError::InvalidCorrection(_) => EXIT_USAGE,
        ProtocolError::XOutcomeDisagreement { .. } | ProtocolError::Qmath(_) => EXIT_VERIFICATION,
    }
}
