use thiserror::Error;

/// Errors raised by the scattering, phase-time and oracle routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The momentum sits inside the excluded neighbourhood of the threshold `k = w`.
    #[error("momentum k = {k} is within {eps:e} of the branch point w = {w}")]
    BranchPoint { k: f64, w: f64, eps: f64 },

    #[error("momentum k = {k} outside the domain of {what}")]
    Domain { k: f64, what: &'static str },

    #[error("position x = {x} is outside the physical region of the {component} wave")]
    Region { x: f64, component: &'static str },

    #[error("{what} did not converge after {iterations} iterations")]
    Convergence { what: &'static str, iterations: usize },

    #[error("quadrature not converged: doubling the node count changed the result by {change:e} (relative)")]
    Quadrature { change: f64 },

    #[error("norm drift {drift:e} at step {step} exceeds the bound {bound:e}")]
    Stability { step: usize, drift: f64, bound: f64 },

    #[error("wave function amplitude {amplitude:e} at the grid boundary exceeds {bound:e}")]
    Boundary { amplitude: f64, bound: f64 },

    #[error("invalid grid: {0}")]
    Grid(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and positive",
        })
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and non-negative",
        })
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}
