use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(String),
    #[error("config does not parse: {0}")]
    Toml(String),
    #[error("profile `{field}` does not parse: {message}")]
    Profile { field: String, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}
