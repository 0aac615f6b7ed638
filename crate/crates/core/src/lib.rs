pub mod checks;
pub mod error;
pub mod lamplighter;
pub mod lef;
pub mod neumann;
pub mod perm;
pub mod rational;
pub mod registry;
pub mod seqgen;
pub mod stability;
pub mod words;

pub use error::{Error, Result};
pub use rational::Rational;
