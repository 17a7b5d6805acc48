#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
mod fmath;
pub mod asymptotic;
pub mod bvp;
pub mod model;
pub mod montecarlo;
pub mod numerics;
pub mod rng;
pub mod variational;

pub use error::Error;
