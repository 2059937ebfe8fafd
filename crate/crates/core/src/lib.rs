pub mod bits;
pub mod codec;
pub mod dealers;
pub mod engine;
pub mod error;
pub mod guessers;
pub mod harness;
pub mod hashing;

pub use error::{Error, Result};
