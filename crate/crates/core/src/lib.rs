//! Non-cooperative uplink power control for multi-carrier DS-CDMA.
//!
//! Every user picks a transmit power on each of `D` orthogonal carriers to
//! maximize the bits it delivers per joule. The crate provides:
//!
//! * the sigmoidal efficiency model and its utility-maximizing SIR target
//!   ([`efficiency`]);
//! * matched-filter SIR, effective channel gains, utilities and the
//!   single-user best response ([`game`]);
//! * closed-form equilibrium powers, equilibrium verification and
//!   enumeration, sequential best-response dynamics and the two-user
//!   region classifier ([`equilibrium`]);
//! * closed-form carrier-load statistics under Rayleigh fading
//!   ([`analytics`]);
//! * the seeded Monte Carlo pipeline that estimates those statistics and
//!   compares joint against per-carrier optimization ([`montecarlo`]).

pub mod analytics;
pub mod efficiency;
pub mod equilibrium;
mod error;
pub mod game;
pub mod montecarlo;
mod system;

pub use error::{Error, Result};
pub use system::{ChannelMatrix, Matrix, PowerAllocation, SystemConfig};
