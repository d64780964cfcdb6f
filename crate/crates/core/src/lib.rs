//! Wave-packet scattering on a one-dimensional square barrier.
//!
//! Natural units with `hbar = 1`. The barrier has height `V0`, width `L` and
//! threshold momentum `w = sqrt(2 m V0)`; a Gaussian packet is described by
//! its central momentum `k0`, width `a` and launch point `x0`.
//!
//! * [`stationary`]: plane-wave amplitudes and phases above and below the barrier.
//! * [`multipeak`]: the same amplitudes as sums over successive bounces, and the
//!   resulting trains of Gaussian peaks.
//! * [`spm`]: stationary-phase packet shapes and the various phase times.
//! * [`kmax`]: the maximum of the transmitted momentum distribution.
//! * [`oracle`]: matching-condition solves, momentum quadrature and a grid
//!   propagator used to check everything else.

pub mod domain;
pub mod error;
pub mod kmax;
pub mod multipeak;
pub mod optimize;
pub mod oracle;
pub mod quad;
pub mod special;
pub mod spm;
pub mod stationary;
pub mod tolerances;

pub use domain::{
    channel_momentum, dispersion, Barrier, Channel, Grid, Packet, PhaseTimeKind, PhaseTimeResult, Provenance,
    ScatterCoeffs, Snapshot,
};
pub use error::{Error, Result};
pub use tolerances::Tolerances;
