//! Library surface of the command-line front end: the run-configuration
//! schema, reused by the integration tests.

pub mod config;
