//! Report building, table parsing and verification logic behind the
//! `mkcalc` binary, exposed as a library so integration tests can drive the
//! same code paths directly.

pub mod report;
pub mod table_io;
pub mod verify;
