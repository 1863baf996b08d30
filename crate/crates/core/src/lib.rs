//! Rate regions of the three-slot half-duplex cooperative multiple-access
//! channel: exact projection checks, finite-alphabet and Gaussian bounds,
//! frontier search, and Gallager-type exponents.
//!
//! All rates and informations are in bits.

pub mod dmc;
pub mod exec;
pub mod exponents;
pub mod format;
pub mod gaussian;
pub mod optimizer;
pub mod polytope;
pub mod region;

pub use exec::Execution;
pub use region::{IBounds, Pentagon, SlotSchedule};
