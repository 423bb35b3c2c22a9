//! Library side of the experiment driver. The binary in main.rs is a thin
//! argument parser over these modules, which keeps every behavior (plan,
//! execute, write, verify) directly testable.

pub mod config;
pub mod rows;
pub mod runner;
pub mod verify;
