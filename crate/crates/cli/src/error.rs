use std::fmt;

use qtower::fields::FieldsError;
use qtower::fock::FockError;
use qtower::multiquant::MultiquantError;
use qtower::opalg::{OpalgError, ParseError};
use qtower::urtheory::UrError;

#[derive(Debug)]
pub enum CliError {
    /// DSL, flag or config parse failure, or otherwise invalid input.
    Input(String),
    Unsupported(String),
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Resource(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Unsupported(m) | CliError::Resource(m) => f.write_str(m),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<OpalgError> for CliError {
    fn from(e: OpalgError) -> Self {
        CliError::Unsupported(e.to_string())
    }
}

impl From<FockError> for CliError {
    fn from(e: FockError) -> Self {
        match e {
            FockError::DimensionOverflow { .. } => CliError::Resource(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<MultiquantError> for CliError {
    fn from(e: MultiquantError) -> Self {
        match e {
            MultiquantError::Fock(f) => f.into(),
            MultiquantError::SectorExceedsCutoff { .. } => CliError::Resource(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<FieldsError> for CliError {
    fn from(e: FieldsError) -> Self {
        match e {
            FieldsError::Fock(f) => f.into(),
            FieldsError::Opalg(o) => o.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<UrError> for CliError {
    fn from(e: UrError) -> Self {
        match e {
            UrError::Fock(f) => f.into(),
            UrError::Multiquant(m) => m.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
