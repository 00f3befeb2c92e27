//! Configuration, orchestration and serialized outputs of the `lightlike`
//! batch driver.

pub mod config;
pub mod dump;
pub mod error;
pub mod report;
pub mod run;
