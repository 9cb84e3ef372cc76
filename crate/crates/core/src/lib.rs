//! Cluster topography: mutations of the master cubic, topograph navigation,
//! reduction of binary quadratic forms, rattlesnakes, and the Painlevé VI
//! monodromy action, all in exact arithmetic where it matters.

pub mod cli;
pub mod error;
pub mod exact;
pub mod forms;
pub mod laurent;
pub mod master;
pub mod painleve;
pub mod scalar;
pub mod snake;
pub mod topograph;

pub use error::{Error, Result};
