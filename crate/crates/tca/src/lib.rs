//! File formats, embedded datasets, reports and the `tca` command line on
//! top of `taxicab-core`.

pub mod analysis;
pub mod cli;
pub mod csv_io;
pub mod datasets;
mod error;
pub mod report;
pub mod svg;
pub mod tensor_io;

pub use error::{Error, Result};
