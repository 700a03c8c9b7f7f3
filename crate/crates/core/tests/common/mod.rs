//! Checks shared by the topic test files and the acceptance target. Each
//! returns `Err` with the first counterexample found.
#![allow(dead_code)]

pub mod cardinality;
pub mod counts;
pub mod crosscheck;
pub mod oracle;
pub mod propagation;
