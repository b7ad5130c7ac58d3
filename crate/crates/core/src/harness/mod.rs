//! File format, result records, generators, the verification driver and the
//! benchmark runner behind the `abductor` binary.

pub mod bench;
pub mod format;
pub mod generate;
pub mod record;
pub mod verify;

pub use bench::{bench, fit_base, BenchAlgo, BenchFamily, BenchSweep};
pub use format::{parse, parse_str, write, write_string, FormatError, ParseError};
pub use generate::{generate, Family, GenParams, DEFAULT_SEED};
pub use record::{ResultRecord, RESULT_SCHEMA};
pub use verify::{verify, Suite, Tally, VerifyOptions};
