//! Solving ES6 regex constraints with an external SMT-LIB string solver.
//!
//! The algorithms live in `regsolve-core`; this crate adds the solver
//! process, problem files, corpus scanning over directories, and the
//! `regsolve` command line.

pub mod output;
pub mod problem_file;
pub mod scan_fs;
pub mod solver;

pub use regsolve_core as core;
