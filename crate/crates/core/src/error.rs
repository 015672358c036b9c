use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while validating inputs, generating, or
/// measuring a graph.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("row {row} of {matrix} sums to {sum}, expected 1")]
    NonStochasticRow {
        matrix: &'static str,
        row: usize,
        sum: f64,
    },

    #[error("{what} = {value} is outside the allowed range {range}")]
    OutOfRange {
        what: String,
        value: f64,
        range: &'static str,
    },

    #[error("{what} has shape {got}, expected {expected}")]
    BadShape {
        what: &'static str,
        expected: String,
        got: String,
    },

    #[error("power-law exponent {0} is not finite")]
    BadExponent(f64),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("edge budget m = {m} exceeds the complete graph on {n} nodes ({max} edges)")]
    InfeasibleBudget { n: usize, m: usize, max: usize },

    #[error("row has no mass outside class {label}; cannot reverse it")]
    DegenerateRow { label: usize },

    #[error("temperature must be positive, got {0}")]
    BadTemperature(f64),

    #[error("class {0} has no nodes")]
    EmptyClass(usize),

    #[error("every node of class {0} is isolated")]
    AllIsolatedClass(usize),

    #[error("no node has positive connection weight towards class {0}")]
    ZeroColumn(usize),

    #[error("expected degree of node {0} is zero")]
    ZeroExpectedDegree(usize),

    #[error("sample list is empty")]
    EmptySample,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),
}

impl Error {
    /// True for errors caused by a parameter combination that cannot be
    /// realised rather than by malformed input.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::Infeasible(_) | Error::InfeasibleBudget { .. } | Error::ZeroColumn(_)
        )
    }
}
