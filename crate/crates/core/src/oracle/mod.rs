//! An independent derivation search used to cross-check the kernel.

pub mod enumerate;
pub mod gen;
pub mod search;
pub mod universe;

pub use enumerate::{brute_force_ps, dyck_ps, enumerate_ps};
pub use gen::{generate, GenConfig, SubEntry, Universe};
pub use search::{derivation_search, Goal, Oracle, Outcome};
pub use universe::{agreement, kernel_verdict, AgreementConfig, AgreementReport, Disagreement};
