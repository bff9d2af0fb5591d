//! Algorithms for planning and simulating RF wireless energy transfer (WET)
//! networks.
//!
//! The crate is `no_std` and only needs `alloc`. Every sampler takes an
//! explicit seed, so results are pure functions of their inputs and can be
//! evaluated in any order (or in parallel by a caller) without changing the
//! output.
//!
//! Modules:
//!
//! * [`channel`]: path loss, Poisson transmitter fields, Rician array channels.
//! * [`harvest`]: nonlinear rectenna curve and single / DC / RF-combining
//!   receivers.
//! * [`ambient`]: Gaussian-mixture ambient power map for green power beacons.
//! * [`deploy`]: max-min placement of green power beacons.
//! * [`outage`]: Monte Carlo outage of ambient RF energy harvesting.
//! * [`beam`]: minimum-power multicast energy beamforming and the RF-chain
//!   consumption sweep.
//! * [`econ`]: total cost of ownership for four powering scenarios.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` deliberately rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod ambient;
pub mod beam;
pub mod channel;
pub mod deploy;
pub mod econ;
mod error;
pub mod harvest;
pub(crate) mod linalg;
pub mod nelder_mead;
pub mod outage;
pub mod seed;

pub use error::{Error, Result};
pub use num_complex::Complex64;
