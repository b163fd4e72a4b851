//! Library half of the `semimeander` binary.
//!
//! The binary itself is a thin argument parser; everything it does lives
//! here so diagram rendering, the result cache, and the full command
//! pipelines can be tested directly.

pub mod cache;
pub mod commands;
pub mod render;
