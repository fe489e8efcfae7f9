use thiserror::Error;

use super::Scenario;

#[derive(Debug, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Parses a scenario document. Structural validation is separate; see
/// [`super::validate_scenario`].
pub fn load_scenario(text: &str) -> Result<Scenario, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn save_scenario(scenario: &Scenario) -> String {
    let mut s = serde_json::to_string_pretty(scenario).expect("scenario serializes");
    s.push('\n');
    s
}
