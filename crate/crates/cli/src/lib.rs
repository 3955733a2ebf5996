//! Configuration, output and verification plumbing of the `acoustic-bh` binary.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;
