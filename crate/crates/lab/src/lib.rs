//! Configuration, file formats and experiment drivers for `nsk-core`.
//!
//! The `nsk-lab` binary is a thin layer over [`pipeline`], [`verify`] and
//! [`sweep`]; everything it writes can be read back with [`io`].

pub mod config;
pub mod io;
pub mod pipeline;
pub mod sweep;
pub mod verify;

use std::fmt;

pub use config::{ConfigError, RunConfig};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "NSK_LAB_OUT";

/// Failure of a CLI command, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum LabError {
    Usage(String),
    Config(nsk_core::Error),
    ConfigFile(ConfigError),
    Io(io::IoError),
    Profile(nsk_core::Error),
    BlowUp(nsk_core::Error),
    Verify(Vec<String>),
}

impl LabError {
    /// 1 usage or config, 2 profile failure, 3 blow-up, 4 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Usage(_) | LabError::Config(_) | LabError::ConfigFile(_) | LabError::Io(_) => 1,
            LabError::Profile(_) => 2,
            LabError::BlowUp(_) => 3,
            LabError::Verify(_) => 4,
        }
    }

    /// Short status tag used in sweep tables.
    pub fn kind(&self) -> &'static str {
        match self {
            LabError::Usage(_) => "usage",
            LabError::Config(_) | LabError::ConfigFile(_) => "config",
            LabError::Io(_) => "io",
            LabError::Profile(_) => "profile_failure",
            LabError::BlowUp(_) => "blow_up",
            LabError::Verify(_) => "verify_failure",
        }
    }
}

impl fmt::Display for LabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabError::Usage(m) => write!(f, "{m}"),
            LabError::Config(e) => write!(f, "invalid configuration: {e}"),
            LabError::ConfigFile(e) => write!(f, "{e}"),
            LabError::Io(e) => write!(f, "{e}"),
            LabError::Profile(e) => write!(f, "profile solver failed: {e}"),
            LabError::BlowUp(e) => write!(f, "run aborted: {e}"),
            LabError::Verify(names) => write!(f, "verification failed: {}", names.join(", ")),
        }
    }
}

impl std::error::Error for LabError {}

impl From<ConfigError> for LabError {
    fn from(e: ConfigError) -> Self {
        LabError::ConfigFile(e)
    }
}

impl From<io::IoError> for LabError {
    fn from(e: io::IoError) -> Self {
        LabError::Io(e)
    }
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(io::IoError::Io(e))
    }
}
