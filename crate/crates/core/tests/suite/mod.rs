//! Checks shared between the unit-level test targets and the acceptance run.
#![allow(dead_code)]

pub mod closed_forms;
pub mod foundations;
