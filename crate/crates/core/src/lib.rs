#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod diagram;
pub mod engine;
pub mod error;
pub mod fiber;
pub mod frobenius;
pub mod linalg;
pub mod poset;
pub mod presheaf;

pub use error::{Error, Result};
