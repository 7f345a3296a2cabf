//! Declarative experiment files, their validation, and the writers behind
//! the command-line tool.

use std::fmt;

use serde::{Deserialize, Serialize};

pub mod expr;
mod output;
mod spec;

pub use output::{render, run, write_output, Format};
pub use spec::{
    from_spec, load, parse_spec, print_spec, AmplitudePair, ComplexPair, EventSpec, Experiment, ExperimentSpec,
    ExplicitSpec, FactorizableSpec, GeneratorSpec, GeneratorValue, GridSpec, GroupSpec, GroupoidSource,
    HamiltonianSpec, Naming, OutputKind, ParamValue, QuiverSpec, StateSource, TransitionRef, TransitionSpec,
    TransitionsEvent,
};

/// Machine-readable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Code {
    #[serde(rename = "E_SYNTAX")]
    Syntax,
    #[serde(rename = "E_SCHEMA")]
    Schema,
    #[serde(rename = "E_UNKNOWN_CONSTRUCTOR")]
    UnknownConstructor,
    #[serde(rename = "E_GROUP_TABLE")]
    GroupTable,
    #[serde(rename = "E_GROUPOID_AXIOMS")]
    GroupoidAxioms,
    #[serde(rename = "E_UNKNOWN_NAME")]
    UnknownName,
    #[serde(rename = "E_PARAM_EXPR")]
    ParamExpr,
    #[serde(rename = "E_STATE")]
    State,
    #[serde(rename = "E_HAMILTONIAN_NOT_SELFADJOINT")]
    HamiltonianNotSelfAdjoint,
    #[serde(rename = "E_GRID")]
    Grid,
    #[serde(rename = "E_MISSING_STATE")]
    MissingState,
    #[serde(rename = "E_OUTPUT")]
    Output,
    #[serde(rename = "E_NUMERIC")]
    Numeric,
    #[serde(rename = "E_IO")]
    Io,
}

impl Code {
    pub const ALL: [Code; 14] = [
        Code::Syntax,
        Code::Schema,
        Code::UnknownConstructor,
        Code::GroupTable,
        Code::GroupoidAxioms,
        Code::UnknownName,
        Code::ParamExpr,
        Code::State,
        Code::HamiltonianNotSelfAdjoint,
        Code::Grid,
        Code::MissingState,
        Code::Output,
        Code::Numeric,
        Code::Io,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::Syntax => "E_SYNTAX",
            Code::Schema => "E_SCHEMA",
            Code::UnknownConstructor => "E_UNKNOWN_CONSTRUCTOR",
            Code::GroupTable => "E_GROUP_TABLE",
            Code::GroupoidAxioms => "E_GROUPOID_AXIOMS",
            Code::UnknownName => "E_UNKNOWN_NAME",
            Code::ParamExpr => "E_PARAM_EXPR",
            Code::State => "E_STATE",
            Code::HamiltonianNotSelfAdjoint => "E_HAMILTONIAN_NOT_SELFADJOINT",
            Code::Grid => "E_GRID",
            Code::MissingState => "E_MISSING_STATE",
            Code::Output => "E_OUTPUT",
            Code::Numeric => "E_NUMERIC",
            Code::Io => "E_IO",
        }
    }
}

impl std::str::FromStr for Code {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| format!("unknown diagnostic code {s:?}"))
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A located, coded error from loading or running an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: Code,
    pub message: String,
    /// JSON path of the offending value, e.g. `state_source.factorizable.params.delta`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl Diagnostic {
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        Self { code, message: message.into(), path: None, line: None, column: None }
    }

    pub fn at(mut self, path: impl Into<String>) -> Self {
        self.path = Some(path.into());
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.code, self.message)?;
        if let Some(p) = &self.path {
            write!(f, " (at {p})")?;
        }
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, " [line {l}, column {c}]")?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}
