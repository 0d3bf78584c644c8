//! The `tamekey` command line: scenarios, subcommands and reports.

pub mod report;
pub mod run;
pub mod scenario;
pub mod suite;

pub use report::{Assertion, Report};
pub use run::{run_scenario, Overrides, Subcommand};
pub use scenario::Scenario;
pub use suite::{builtin_corpus, verify_suite};
