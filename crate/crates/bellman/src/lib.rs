//! Verification harness, file formats and command-line front-end for
//! [`bellman_core`].

pub mod cli;
pub mod csvio;
pub mod harness;
pub mod json;
