//! Library surface of the `berkit` command line: the operator-spec file
//! schema and the command implementations, separated from the binary so the
//! integration tests can drive them directly.

pub mod app;
pub mod spec_file;

/// An error carrying its process exit code: 1 runtime failure, 2 usage or
/// parse, 3 shape/dimension, 4 unknown identifier.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

impl CliError {
    fn new(code: i32, msg: String) -> Self {
        Self { code, msg }
    }
    pub fn parse(msg: String) -> Self {
        Self::new(2, msg)
    }
    pub fn shape(msg: String) -> Self {
        Self::new(3, msg)
    }
    pub fn unknown(msg: String) -> Self {
        Self::new(4, msg)
    }
    pub fn other(msg: String) -> Self {
        Self::new(1, msg)
    }
}

use berkit::berezin::BerezinError;
use berkit::bounds::BoundsError;
use berkit::rkhs::RkhsError;
use berkit::verify::VerifyError;

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match &e {
            VerifyError::BadSpec(_) => CliError::parse(e.to_string()),
            VerifyError::NotApplicable(_) => CliError::shape(e.to_string()),
            VerifyError::Bounds(b) => CliError::from_bounds(b),
            VerifyError::Berezin(_) | VerifyError::Linalg(_) => CliError::shape(e.to_string()),
        }
    }
}

impl CliError {
    fn from_bounds(e: &BoundsError) -> Self {
        match e {
            BoundsError::ZeroAlpha | BoundsError::BadPower(_) => CliError::parse(e.to_string()),
            _ => CliError::shape(e.to_string()),
        }
    }
}

impl From<BerezinError> for CliError {
    fn from(e: BerezinError) -> Self {
        CliError::shape(e.to_string())
    }
}

impl From<RkhsError> for CliError {
    fn from(e: RkhsError) -> Self {
        CliError::shape(e.to_string())
    }
}
