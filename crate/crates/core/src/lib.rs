//! Core of `regsolve`: an ES6 regex parser, a specification-compliant
//! backtracking matcher, a compiler from capturing-language membership to
//! string constraints, and the counterexample-guided refinement loop that
//! repairs matching-precedence errors in solver models.
//!
//! The crate is `no_std` (with `alloc`). Solver processes, files and the
//! command line live in the `regsolve` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ast;
pub mod cegar;
pub mod eval;
pub mod features;
pub mod ir;
pub mod lang;
pub mod matcher;
pub mod model;
pub mod oracle;
pub mod parse;
pub mod preprocess;
pub mod print;
pub mod scan;
pub mod smtlib;

pub use ast::{CharClass, ClassItem, FlagSet, Node, RegexAst, Shorthand};
pub use features::{profile_features, FeatureProfile};
pub use parse::{parse_flags, parse_pattern, SyntaxError, SyntaxErrorKind};
pub use print::print_pattern;
