//! Command implementations and verification suites behind the `dforms` binary.

pub mod commands;
pub mod verify;
