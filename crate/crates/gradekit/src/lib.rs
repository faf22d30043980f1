//! Exact computations with group-graded algebras over finite fields.

pub mod cli;
pub mod coh;
pub mod error;
pub mod ffield;
pub mod gralg;
pub mod grend;
pub mod grp;
pub mod linalg;
pub mod mackey;
pub mod selftest;

pub use error::{Error, Result};
