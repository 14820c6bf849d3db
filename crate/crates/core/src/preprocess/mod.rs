//! Preprocessing ahead of constraint generation.

pub mod backref;
pub mod classical;
pub mod rewrite;
pub mod wrap;

pub use backref::{classify_backreferences, BackrefClass, BackrefKind};
pub use classical::{erase_captures, erase_relaxed, CharSet, ClassicalRegex, NotRegular, MARK_END, MARK_START};
pub use rewrite::{rewrite_quantifiers, rewrite_quantifiers_with_budget, Alternate, CaptureCorrespondence, CaptureSource, RewriteError, Rewritten};
pub use wrap::{padding, rewrite_ignore_case, wrap_for_exec, ExecOffset};
