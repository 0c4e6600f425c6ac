//! Instance generation, property suites, JSON formats and the command line
//! for `endotrace-core`.

pub mod formats;
pub mod generate;
pub mod suites;

pub use generate::{Blueprint, Caps, Shape};
pub use suites::{run_suite, suite_names, Report, SuiteConfig, Verdict};
