//! Command-line laboratory for the multitype contact process: threshold
//! queries, phase-diagram sweeps, point process dominance tests, coupled-run
//! invariant suites, and survival experiments.
//!
//! The binary front end lives in `main.rs`; everything here is library code
//! so the integration tests can drive commands directly.

pub mod cli;
pub mod config;
pub mod output;
pub mod presets;
pub mod runner;

/// Process exit codes (stable, CI-friendly).
pub mod exit_code {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    /// Invalid parameters, configuration, or CLI usage.
    pub const DOMAIN: i32 = 2;
    /// A coupling or dominance invariant was violated.
    pub const VIOLATION: i32 = 3;
    /// The expected event count exceeded the resource cap.
    pub const RESOURCE: i32 = 4;
}

/// A command failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn domain(message: impl Into<String>) -> Self {
        Self { code: exit_code::DOMAIN, message: message.into() }
    }

    pub fn other(message: impl Into<String>) -> Self {
        Self { code: exit_code::OTHER, message: message.into() }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for Failure {}

impl From<mcp_core::thresholds::DomainError> for Failure {
    fn from(e: mcp_core::thresholds::DomainError) -> Self {
        Failure::domain(e.to_string())
    }
}

impl From<mcp_core::graphical::GraphicalError> for Failure {
    fn from(e: mcp_core::graphical::GraphicalError) -> Self {
        let code = match e {
            mcp_core::graphical::GraphicalError::ResourceCap { .. } => exit_code::RESOURCE,
            _ => exit_code::DOMAIN,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<mcp_core::processes::ProcessError> for Failure {
    fn from(e: mcp_core::processes::ProcessError) -> Self {
        match e {
            mcp_core::processes::ProcessError::Graphical(g) => g.into(),
            other => Failure::domain(other.to_string()),
        }
    }
}

impl From<mcp_core::pointproc::PointprocError> for Failure {
    fn from(e: mcp_core::pointproc::PointprocError) -> Self {
        Failure::domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::other(format!("i/o error: {e}"))
    }
}
