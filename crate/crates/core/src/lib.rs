#![allow(clippy::needless_range_loop)]

pub mod acgroup;
pub mod automorphisms;
pub mod error;
pub mod finite;
pub mod linalg;
pub mod makelist;
pub mod nilgroup;
pub mod oracle;
pub mod progression;
pub mod reidemeister;

pub use error::{Error, Result};
