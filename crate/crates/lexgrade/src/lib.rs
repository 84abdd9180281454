//! Corpus-level readability analysis of legal texts: manifests, document
//! retrieval, cleaning, batch grading, reports and the `lexgrade` CLI.

pub use lexgrade_core as core;

pub mod clean;
pub mod cli;
pub mod corpus;
pub mod fetcher;
pub mod manifest;
pub mod report;
