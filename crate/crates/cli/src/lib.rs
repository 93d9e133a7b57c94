//! Document formats and report types for the command-line front end.

pub mod doc;
