//! File format, reports and command implementations behind the `mathieu`
//! binary.

pub mod commands;
pub mod report;
pub mod repro;
pub mod spacefile;
