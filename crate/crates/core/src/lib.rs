//! Cooperative guards for polygons with holes, plus a lockstep simulator of
//! the mobile-agent algorithms that compute them.

pub mod error;
pub mod gen;
pub mod geometry;
pub mod guards;
pub mod io;
pub mod proximity;
pub mod sim;
pub mod triangulation;
pub mod verify;

pub use error::{Error, Result};
