//! Kernel, translations and surface language for CaTT and MCaTT.
//!
//! The four theories share one raw syntax ([`syntax`]). [`kernel::Checker`]
//! decides their judgments, [`translate`] implements desuspension, reduced
//! suspension and the adjunction between them, [`oracle`] holds independent
//! brute-force implementations used for cross-checking, and [`frontend`]
//! parses, elaborates and checks source files.

pub mod frontend;
pub mod kernel;
pub mod library;
pub mod oracle;
pub mod print;
pub mod ps;
pub mod subst;
pub mod syntax;
pub mod translate;

pub use kernel::{CheckReport, Checker, ErrorCode, KernelError, Rule, Verdict};
pub use subst::{compose, identity, Substitutable, UnboundVariable};
pub use syntax::{CohKind, Ctx, Head, Sub, TheoryId, Tm, Ty, Var, VarSet};
