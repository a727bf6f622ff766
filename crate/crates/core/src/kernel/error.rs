use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::ps::PsError;
use crate::subst::UnboundVariable;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum ErrorCode {
    DuplicateVar,
    ScopeError,
    TheoryViolation,
    TypeMismatch,
    UnboundVariable,
    NotPs,
    SideConditionViolation,
    SubstMismatch,
    ArityMismatch,
    NameMismatch,
    BoundaryUndefined,
    NotNormalized,
    ParseError,
    ElaborationAmbiguous,
    ElaborationMismatch,
    DuplicateName,
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Inference rule at which a judgment failed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Rule {
    Ec,
    Ce,
    Es,
    Se,
    Var,
    Pss,
    Psd,
    Pse,
    Ps,
    ObjIntro,
    HomIntro,
    UnitIntro,
    UnitConstIntro,
    CohopIntro,
    CohIntro,
    MopIntro,
    McohIntro,
    OpSide,
    EqSide,
    Conv,
    /// Failures outside the inference rules: parsing, elaboration, translation.
    Surface,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Ec => "ec",
            Rule::Ce => "ce",
            Rule::Es => "es",
            Rule::Se => "se",
            Rule::Var => "var",
            Rule::Pss => "pss",
            Rule::Psd => "psd",
            Rule::Pse => "pse",
            Rule::Ps => "ps",
            Rule::ObjIntro => "Obj-intro",
            Rule::HomIntro => "Hom-intro",
            Rule::UnitIntro => "unit-intro",
            Rule::UnitConstIntro => "()-intro",
            Rule::CohopIntro => "cohop-intro",
            Rule::CohIntro => "coh-intro",
            Rule::MopIntro => "mop-intro",
            Rule::McohIntro => "mcoh-intro",
            Rule::OpSide => "op-side",
            Rule::EqSide => "eq-side",
            Rule::Conv => "conv",
            Rule::Surface => "surface",
        }
    }

    fn from_ps(name: &str) -> Rule {
        match name {
            "pss" => Rule::Pss,
            "psd" => Rule::Psd,
            "pse" => Rule::Pse,
            _ => Rule::Ps,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("{code} [{rule}]: {detail}")]
pub struct KernelError {
    pub code: ErrorCode,
    pub rule: Rule,
    pub detail: String,
}

impl KernelError {
    pub fn new(code: ErrorCode, rule: Rule, detail: impl Into<String>) -> KernelError {
        KernelError { code, rule, detail: detail.into() }
    }

    pub fn unbound(rule: Rule, e: UnboundVariable) -> KernelError {
        KernelError::new(ErrorCode::UnboundVariable, rule, e.to_string())
    }
}

impl From<PsError> for KernelError {
    fn from(e: PsError) -> KernelError {
        match &e {
            PsError::NotPs { rule, .. } => KernelError::new(ErrorCode::NotPs, Rule::from_ps(rule), e.to_string()),
            PsError::BoundaryUndefined => KernelError::new(ErrorCode::BoundaryUndefined, Rule::OpSide, e.to_string()),
        }
    }
}
