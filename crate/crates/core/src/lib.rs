pub mod criteria;
pub mod error;
pub mod fixtures;
pub mod hull;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod mixed;
pub mod polytope;
pub mod rational;
pub mod system;

pub use error::{Error, Result};
