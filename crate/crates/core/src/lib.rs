//! Relay selection and hybrid OMA/NOMA activation for a sidelink multicast
//! group sharing its channel with an interfering unicast pair.
//!
//! Two deciders are provided: an exhaustive search over every candidate relay
//! using full channel state ([`links`]), and a location-only heuristic whose
//! cost is linear in the group size ([`hmars`]). The [`harness`] module runs
//! seeded Monte Carlo sweeps comparing them and writes plot-ready CSV.

pub mod channel;
pub mod error;
pub mod exec;
pub mod harness;
pub mod hmars;
pub mod links;
pub mod ops;
pub mod oracle;
pub mod scenario;

pub use error::{Error, Result};
pub use links::Scheme;
pub use ops::OpCounter;
pub use scenario::Point2D;
