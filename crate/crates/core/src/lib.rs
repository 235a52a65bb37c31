//! Homotopy, peripherality and primitivity of essential simple loops on the bridge
//! sphere of a 2-bridge link, with independently checkable certificates.

pub mod classify;
pub mod cyclic;
pub mod diagrams;
pub mod error;
pub mod rational;
pub mod riley;
pub mod selftest;
pub mod slopes;
pub mod tseq;
pub mod words;

pub use error::{Error, Result};
pub use rational::Rational;
