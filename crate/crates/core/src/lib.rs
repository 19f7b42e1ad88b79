//! Counting quasimorphisms on right-angled Artin groups, computed from the
//! halfspace structure of the universal cover of the Salvetti complex.

pub mod axis;
pub mod certify;
pub mod counting;
pub mod cube;
pub mod error;
pub mod fixtures;
pub mod oracle;
pub mod raag;
pub mod sample;
pub mod suites;

pub use error::{Error, Result};
