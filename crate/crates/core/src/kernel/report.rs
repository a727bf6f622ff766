use serde::Serialize;

use super::error::{ErrorCode, KernelError, Rule};
use crate::syntax::Ty;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Accept,
    Reject,
}

/// 1-based source position.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ErrorInfo {
    pub code: ErrorCode,
    pub rule: Rule,
    pub span: Option<Span>,
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub judgment: String,
    #[serde(serialize_with = "render_ty")]
    pub inferred: Option<Ty>,
    pub error: Option<ErrorInfo>,
}

fn render_ty<S: serde::Serializer>(ty: &Option<Ty>, s: S) -> Result<S::Ok, S::Error> {
    match ty {
        Some(t) => s.serialize_some(&t.to_string()),
        None => s.serialize_none(),
    }
}

impl CheckReport {
    pub fn accept(judgment: impl Into<String>, inferred: Option<Ty>) -> CheckReport {
        CheckReport { verdict: Verdict::Accept, judgment: judgment.into(), inferred, error: None }
    }

    pub fn reject(judgment: impl Into<String>, err: KernelError) -> CheckReport {
        CheckReport {
            verdict: Verdict::Reject,
            judgment: judgment.into(),
            inferred: None,
            error: Some(ErrorInfo { code: err.code, rule: err.rule, span: None, detail: err.detail }),
        }
    }

    pub fn from_result(judgment: impl Into<String>, r: Result<Option<Ty>, KernelError>) -> CheckReport {
        match r {
            Ok(t) => CheckReport::accept(judgment, t),
            Err(e) => CheckReport::reject(judgment, e),
        }
    }

    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }

    pub fn code(&self) -> Option<ErrorCode> {
        self.error.as_ref().map(|e| e.code)
    }

    pub fn with_span(mut self, span: Span) -> CheckReport {
        if let Some(e) = &mut self.error {
            e.span = Some(span);
        }
        self
    }
}
