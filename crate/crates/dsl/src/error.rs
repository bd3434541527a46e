use std::fmt;

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DslError {
    #[error("{span}: {message}")]
    Syntax { span: Span, message: String },
    #[error("{}{message}", span.map(|s| format!("{s}: ")).unwrap_or_default())]
    Compile { span: Option<Span>, message: String },
    #[error("data: {0}")]
    Data(String),
    #[error(transparent)]
    Sampling(#[from] bayes_core::Error),
}

impl DslError {
    pub(crate) fn syntax(span: Span, message: impl Into<String>) -> Self {
        DslError::Syntax { span, message: message.into() }
    }

    pub(crate) fn compile(span: Span, message: impl Into<String>) -> Self {
        DslError::Compile { span: Some(span), message: message.into() }
    }

    pub fn span(&self) -> Option<Span> {
        match self {
            DslError::Syntax { span, .. } => Some(*span),
            DslError::Compile { span, .. } => *span,
            _ => None,
        }
    }
}

pub type Result<T, E = DslError> = std::result::Result<T, E>;
