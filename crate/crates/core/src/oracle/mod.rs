//! Independent numerical ground truth.
//!
//! Nothing here reuses the closed forms of the analytic modules: plane-wave
//! amplitudes come from a direct solve of the matching conditions, packets
//! from quadrature over momentum, and time evolution from a grid propagator.

pub mod matching;
pub mod peaks;
pub mod propagator;
pub mod quadrature;

pub use matching::{match_barrier, Matched};
pub use peaks::{find_peaks, track_peaks, Peak, PeakTrack, PeakTracker, TrackBuilder};
pub use propagator::{grid_propagate, grid_propagate_with, initial_snapshot, PropagatorSpec};
pub use quadrature::{quadrature_packet, PacketQuadrature};
