//! Capacity bounds for the Gaussian cognitive interference channel with a
//! cognitive transmitter that knows the primary message.
//!
//! Channel outputs are `Y1 = X1 + a X2 + Z1` at the cognitive receiver and
//! `Y2 = |b| X1 + X2 + Z2` at the primary receiver. The crate evaluates an
//! outer bound, a DPC-based achievable region, regime conditions under which
//! the two coincide, constant-gap results and sum-rate optimal DPC choices.

pub mod cli;
pub mod error;
pub mod export;
pub mod gap;
pub mod grid;
pub mod model;
pub mod optimizer;
pub mod outer;
pub mod regime;
pub mod region;
pub mod sampling;
pub mod scheme;
pub mod svg;
pub mod verify;

pub use error::{Error, Result};
pub use model::{cap_c, ChannelParams, OperatingPoint, RateConstraintSet, RatePair, SchemeParams, GEOM_TOL, RATE_TOL};
pub use num_complex::Complex64;
pub use region::{convex_closure, pentagon_to_polygon, RateRegion};
