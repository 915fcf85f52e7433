use std::fmt;
use std::sync::Arc;

/// Location of a construct in DSL source text.
///
/// Lines and columns are 1-based; columns count characters, not bytes.
/// Programmatically built definitions carry [`SourceSpan::synthetic`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub line: u32,
    pub column: u32,
    pub length: u32,
}

impl SourceSpan {
    pub fn new(file: Arc<str>, line: u32, column: u32, length: u32) -> Self {
        debug_assert!(line >= 1 && column >= 1);
        SourceSpan {
            file,
            line,
            column,
            length,
        }
    }

    pub fn synthetic() -> Self {
        SourceSpan {
            file: Arc::from("<builder>"),
            line: 1,
            column: 1,
            length: 0,
        }
    }
}

impl Default for SourceSpan {
    fn default() -> Self {
        SourceSpan::synthetic()
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}
