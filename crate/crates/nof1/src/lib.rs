//! Store, command line and HTTP service for N-of-1 trials.

pub mod cli;
mod error;
pub mod ops;
pub mod service;
pub mod store;

pub use error::{ErrorBody, Result, StoreError};
