//! File formats, per-instance reports and the batch benchmark harness for
//! [`mcis_core`].

pub mod bench;
pub mod format;
pub mod report;

pub use mcis_core;
