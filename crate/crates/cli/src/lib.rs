//! File formats, verification suites and report emission for
//! `intersets-core`.

pub mod inline;
pub mod report;
pub mod schema;
pub mod suites;
