use std::fmt;

use crate::exactlin::Matrix;

/// A single failed condition in a validation report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Short machine-readable tag, e.g. `"d_squared"` or `"not_invertible"`.
    pub code: String,
    /// Where the condition failed (degree, vertex, index ...).
    pub at: String,
    pub detail: String,
    /// The offending matrix, when there is one (e.g. a singular `id - fg`).
    pub witness: Option<Matrix>,
}

/// Exhaustive list of violated conditions; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, code: &str, at: impl Into<String>, detail: impl Into<String>) {
        self.violations.push(Violation {
            code: code.to_string(),
            at: at.into(),
            detail: detail.into(),
            witness: None,
        });
    }

    pub fn push_with(
        &mut self,
        code: &str,
        at: impl Into<String>,
        detail: impl Into<String>,
        witness: Matrix,
    ) {
        self.violations.push(Violation {
            code: code.to_string(),
            at: at.into(),
            detail: detail.into(),
            witness: Some(witness),
        });
    }

    /// Appends another report, prefixing locations with `scope`.
    pub fn absorb(&mut self, scope: &str, other: Report) {
        for mut v in other.violations {
            v.at = if v.at.is_empty() {
                scope.to_string()
            } else {
                format!("{scope}/{}", v.at)
            };
            self.violations.push(v);
        }
    }

    pub fn has_code(&self, code: &str) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    /// `Ok(())` when valid, otherwise the report wrapped in [`crate::Error::Invalid`].
    pub fn into_result(self) -> crate::Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(crate::Error::Invalid(self))
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} at {}: {}", v.code, v.at, v.detail)?;
        }
        Ok(())
    }
}
