//! Surface language: parsing, elaboration into core syntax, and the file-level
//! operations used by the command-line tool.

pub mod ast;
pub mod driver;
pub mod elab;
pub mod parser;

use thiserror::Error;

use crate::kernel::{KernelError, Span};

pub use ast::{Def, Keyword, STm, STy, SourceFile};
pub use driver::{adjunction_file, check_source, elaborate_term, theory_of_path, translate_file, FileReport, ItemReport};
pub use elab::{Env, Item, LetDef, Level};
pub use parser::parse;

/// An error together with the source position it refers to.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("{}:{}: {error}", span.line, span.col)]
pub struct Located {
    pub span: Span,
    pub error: KernelError,
}
