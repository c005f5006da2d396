//! Outage analysis of a two-user cooperative NOMA downlink in which the near
//! user harvests energy by power splitting and relays the far user's symbol.
//!
//! Users are drawn from homogeneous Poisson point processes in a disc (near)
//! and a ring (far). Two engines are provided: [`analytic`] evaluates the
//! closed-form and quadrature expressions, [`simulator`] runs seeded,
//! thread-count-independent Monte Carlo trials of the same protocol.

pub mod analytic;
pub mod error;
pub mod geometry;
pub mod model;
pub mod numerics;
pub mod simulator;

pub use error::{Error, Result};
pub use model::{NetworkConfig, Scheme, UserClass};
pub use numerics::QuadratureSpec;
pub use simulator::{estimate_outage, RelayDistance, SimOptions, SimulationResult};
