use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point outside the hyperbolic plane: {0}")]
    Domain(String),
    #[error("coincident points")]
    Coincident,
    #[error("unbounded length: {0}")]
    Unbounded(String),
    #[error("numerical overflow: {0}")]
    Overflow(String),
    #[error("empty segment: {0}")]
    EmptySegment(String),
    #[error("combinatorial limit exceeded: {0}")]
    CombinatorialLimit(String),
    #[error("misconfiguration: {0}")]
    Misconfiguration(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("grid: {0}")]
    Grid(String),
    #[error("solver failed to converge: {0}")]
    NonConvergence(String),
    #[error("{}", describe_issues(.0))]
    Schema(Vec<SchemaIssue>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// One problem found while reading a domain file.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SchemaIssue {
    pub line: usize,
    pub column: usize,
    /// JSON path of the offending value, such as `edges[2].to`.
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for SchemaIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}: {}: {}", self.line, self.column, self.path, self.message)
    }
}

fn describe_issues(issues: &[SchemaIssue]) -> String {
    let lines: Vec<String> = issues.iter().map(ToString::to_string).collect();
    format!("invalid domain file\n  {}", lines.join("\n  "))
}
