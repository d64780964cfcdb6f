//! Crank-Nicolson propagation of the Schrodinger equation on a uniform grid.
//!
//! One step solves `(1 + i dt H/2) psi' = (1 - i dt H/2) psi` with the
//! three-point Laplacian and zero boundary values. `H` is real symmetric, so
//! the step is a Cayley transform and conserves `sum |psi|^2` up to rounding.
//! The diagonal is shifted by the packet's central energy `k0^2 / 2m`. This
//! only changes the global phase of the solution but removes the
//! group-velocity error of the scheme at `k0`.

use num_complex::Complex64;

use crate::domain::{dispersion, Barrier, Grid, Packet, Snapshot};
use crate::error::{Error, Result};
use crate::spm::gaussian_envelope;

/// Grid and time-step parameters of a propagation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorSpec {
    pub grid: Grid,
    pub dt: f64,
    pub n_steps: usize,
    /// A snapshot is kept every `save_every` steps (and after the last one).
    pub save_every: usize,
    /// Left edge of the barrier.
    pub barrier_left: f64,
    /// Energy subtracted from the Hamiltonian; only affects the global phase.
    pub energy_shift: f64,
    /// Largest tolerated change of the norm in a single step.
    pub step_drift_bound: f64,
    /// Largest tolerated `|psi|` within ten cells of either grid edge at the end.
    pub boundary_bound: f64,
}

impl PropagatorSpec {
    pub fn new(grid: Grid, dt: f64, n_steps: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: dt,
                reason: "must be finite and positive",
            });
        }
        Ok(Self {
            grid,
            dt,
            n_steps,
            save_every: 1,
            barrier_left: 0.0,
            energy_shift: 0.0,
            step_drift_bound: 1e-10,
            boundary_bound: 1e-10,
        })
    }

    pub fn save_every(mut self, n: usize) -> Self {
        self.save_every = n.max(1);
        self
    }

    pub fn barrier_left(mut self, x: f64) -> Self {
        self.barrier_left = x;
        self
    }

    /// Uses the central energy of `packet` as the reference energy.
    pub fn centred_on(mut self, packet: &Packet) -> Self {
        self.energy_shift = dispersion(packet.k0(), packet.mass());
        self
    }

    pub fn boundary_bound(mut self, b: f64) -> Self {
        self.boundary_bound = b;
        self
    }
}

/// Cell-averaged barrier potential on the grid.
pub fn potential(grid: &Grid, barrier: &Barrier, left: f64) -> Vec<f64> {
    let dx = grid.dx();
    let right = left + barrier.width();
    grid.positions()
        .map(|x| {
            let lo = (x - 0.5 * dx).max(left);
            let hi = (x + 0.5 * dx).min(right);
            barrier.height() * ((hi - lo).max(0.0) / dx)
        })
        .collect()
}

/// Free packet sampled at time `t`, checked for negligible overlap with the barrier.
pub fn initial_snapshot(packet: &Packet, grid: Grid, t: f64, barrier_left: f64) -> Result<Snapshot> {
    let s = Snapshot::sample(t, grid, |x| gaussian_envelope(x, t, packet))?;
    let overlap = s.probability_between(barrier_left, f64::INFINITY);
    if overlap > 1e-12 {
        return Err(Error::InvalidParameter {
            name: "x0",
            value: packet.x0(),
            reason: "initial packet overlaps the barrier",
        });
    }
    Ok(s)
}

fn sum_norm(psi: &[Complex64]) -> f64 {
    psi.iter().map(|z| z.norm_sqr()).sum()
}

/// Propagates `initial` through `barrier` and returns the kept snapshots,
/// starting with the initial one.
pub fn grid_propagate(initial: &Snapshot, barrier: &Barrier, prop: &PropagatorSpec) -> Result<Vec<Snapshot>> {
    let mut out = Vec::new();
    grid_propagate_with(initial, barrier, prop, |s| {
        out.push(s.clone());
        Ok(())
    })?;
    Ok(out)
}

/// Like [`grid_propagate`], but hands each kept snapshot to `visit` instead
/// of storing it. Returns the final state.
pub fn grid_propagate_with(
    initial: &Snapshot,
    barrier: &Barrier,
    prop: &PropagatorSpec,
    mut visit: impl FnMut(&Snapshot) -> Result<()>,
) -> Result<Snapshot> {
    let grid = initial.grid;
    if grid != prop.grid {
        return Err(Error::Grid("snapshot grid differs from the propagator grid"));
    }
    let norm0 = initial.norm();
    if (norm0 - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter {
            name: "norm",
            value: norm0,
            reason: "initial state must be normalized to 1",
        });
    }
    let n = grid.len();
    let dx = grid.dx();
    let m = barrier.mass();
    let v = potential(&grid, barrier, prop.barrier_left);
    let kin = 1.0 / (2.0 * m * dx * dx);
    // (1 + i dt H/2): diagonal d_j, off-diagonal o.
    let half = 0.5 * prop.dt;
    let off = Complex64::new(0.0, -half * kin);
    let diag: Vec<Complex64> = v
        .iter()
        .map(|&vj| Complex64::new(1.0, half * (2.0 * kin + vj - prop.energy_shift)))
        .collect();
    // Thomas elimination factors do not depend on the right-hand side.
    let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
    let mut denom = vec![Complex64::new(0.0, 0.0); n];
    denom[0] = diag[0];
    c_prime[0] = off / denom[0];
    for j in 1..n {
        denom[j] = diag[j] - off * c_prime[j - 1];
        c_prime[j] = off / denom[j];
    }

    let mut psi = initial.psi.clone();
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    visit(initial)?;
    let reference = sum_norm(&psi);
    let mut last = reference;
    for step in 1..=prop.n_steps {
        // (1 - i dt H/2) psi = conj-diagonal applied with opposite sign off-diagonal.
        for j in 0..n {
            let left = if j > 0 { psi[j - 1] } else { Complex64::new(0.0, 0.0) };
            let right = if j + 1 < n { psi[j + 1] } else { Complex64::new(0.0, 0.0) };
            rhs[j] = diag[j].conj() * psi[j] - off * (left + right);
        }
        psi[0] = rhs[0] / denom[0];
        for j in 1..n {
            psi[j] = (rhs[j] - off * psi[j - 1]) / denom[j];
        }
        for j in (0..n - 1).rev() {
            let next = psi[j + 1];
            psi[j] -= c_prime[j] * next;
        }
        let now = sum_norm(&psi);
        let drift = (now - last).abs() / reference;
        if !(drift <= prop.step_drift_bound) {
            return Err(Error::Stability {
                step,
                drift,
                bound: prop.step_drift_bound,
            });
        }
        last = now;
        if step % prop.save_every == 0 || step == prop.n_steps {
            visit(&Snapshot::new(initial.t + step as f64 * prop.dt, grid, psi.clone())?)?;
        }
    }
    let edge = psi[..10.min(n)]
        .iter()
        .chain(&psi[n.saturating_sub(10)..])
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if edge > prop.boundary_bound {
        return Err(Error::Boundary {
            amplitude: edge,
            bound: prop.boundary_bound,
        });
    }
    Snapshot::new(initial.t + prop.n_steps as f64 * prop.dt, grid, psi)
}
