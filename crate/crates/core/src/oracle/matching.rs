//! Plane-wave scattering amplitudes from the continuity conditions.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Amplitudes of the left-incident solution for a barrier of height `V0` on `[x1, x2]`.
///
/// Left: `e^{ikx} + r e^{-ikx}`; inside: `alpha e^{i kappa x} + beta e^{-i kappa x}`;
/// right: `t e^{ikx}`, with `kappa = sqrt(k^2 - w^2)` on the principal branch
/// (`kappa = i rho` below the barrier).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matched {
    pub r: Complex64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub t: Complex64,
    pub kappa: Complex64,
}

pub fn match_barrier(k: f64, w: f64, x1: f64, x2: f64) -> Result<Matched> {
    if !(x2 >= x1) {
        return Err(Error::Grid("barrier edges out of order"));
    }
    let i = Complex64::i();
    let kappa = Complex64::new(k * k - w * w, 0.0).sqrt();
    if kappa.norm() == 0.0 {
        return Err(Error::BranchPoint { k, w, eps: 0.0 });
    }
    let width = x2 - x1;
    // Inside basis anchored at each edge: a e^{i kappa (x - x1)} + b e^{-i kappa (x - x2)}.
    let decay = (i * kappa * width).exp();
    let e = |x: f64| Complex64::from_polar(1.0, k * x);
    let ik = i * k;
    let ikap = i * kappa;
    let zero = Complex64::new(0.0, 0.0);
    // Unknowns (r, a, b, t).
    let m = Matrix4::new(
        e(-x1), -Complex64::new(1.0, 0.0), -decay, zero,
        -ik * e(-x1), -ikap, ikap * decay, zero,
        zero, decay, Complex64::new(1.0, 0.0), -e(x2),
        zero, ikap * decay, -ikap, -ik * e(x2),
    );
    let rhs = Vector4::new(-e(x1), -ik * e(x1), zero, zero);
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or(Error::Grid("singular matching system"))?;
    Ok(Matched {
        r: sol[0],
        alpha: sol[1] * (-ikap * x1).exp(),
        beta: sol[2] * (ikap * x2).exp(),
        t: sol[3],
        kappa,
    })
}
