#![no_std]
//! Rogers functions, their spines and Wiener–Hopf factors, and the
//! space-time fluctuation identities built on them.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod fluctuation;
pub mod montecarlo;
pub mod numerics;
pub mod report;
pub mod rogers;
pub mod spine;
pub mod wiener_hopf;

pub use error::{Error, Result};
pub use report::{VerifyReport, Witness};
