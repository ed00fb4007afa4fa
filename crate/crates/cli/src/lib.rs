//! Configuration, output formats and verification suites for the `epdiff`
//! command-line tool.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;
