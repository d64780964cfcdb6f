//! Stationary-phase packet shapes and phase times.

use num_complex::Complex64;

use crate::domain::{dispersion, Barrier, Packet, PhaseTimeKind, PhaseTimeResult};
use crate::error::{require_positive, Error, Result};
use crate::special::{sinh_excess, sinhc, sinhc2};
use crate::stationary::{combined_phase_prime, evanescent, propagating, theta_above, tunnel_coeffs};
use crate::tolerances::Tolerances;

/// Free Gaussian packet `phi[X, t]` with `X` measured from the launch point.
///
/// `phi[X, t] = int dk/sqrt(2 pi) g(k - k0) exp(i k X - i E(k) t)`, evaluated
/// in closed form. `|phi|^2` is normalized and peaks at `X = (k0/m) t`.
pub fn envelope(x: f64, t: f64, packet: &Packet) -> Complex64 {
    let a = packet.width();
    let m = packet.mass();
    let k0 = packet.k0();
    let tau = 2.0 * t / (m * a * a);
    let spread = 1.0 + tau * tau;
    let norm = (std::f64::consts::PI * a * a / 2.0 * spread).powf(-0.25);
    let d = x - k0 * t / m;
    let gauss = -Complex64::new(d * d, 0.0) / Complex64::new(a * a, a * a * tau);
    let phase = Complex64::new(0.0, -0.5 * tau.atan() + k0 * x - dispersion(k0, m) * t);
    (gauss + phase).exp() * norm
}

/// The free packet at position `x`: `phi[x - x0, t]`.
pub fn gaussian_envelope(x: f64, t: f64, packet: &Packet) -> Complex64 {
    envelope(x - packet.x0(), t, packet)
}

/// Variance of `|phi|^2` at time `t`.
pub fn envelope_variance(t: f64, packet: &Packet) -> f64 {
    let a = packet.width();
    let tau = 2.0 * t / (packet.mass() * a * a);
    a * a / 4.0 * (1.0 + tau * tau)
}

/// Peak position when the amplitude carries an extra phase with slope `lambda_prime` at `k0`.
pub fn spm_shift(lambda_prime: f64, packet: &Packet, t: f64) -> f64 {
    packet.x0() - lambda_prime + packet.velocity() * t
}

/// Components of the single-packet stationary solution above the barrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Incident,
    Reflected,
    Alpha,
    Beta,
    Transmitted,
}

impl Component {
    pub const ALL: [Component; 5] = [
        Component::Incident,
        Component::Reflected,
        Component::Alpha,
        Component::Beta,
        Component::Transmitted,
    ];

    fn kind(&self) -> PhaseTimeKind {
        match self {
            Component::Incident => PhaseTimeKind::NaiveIncident,
            Component::Reflected => PhaseTimeKind::NaiveReflected,
            Component::Alpha => PhaseTimeKind::NaiveAlpha,
            Component::Beta => PhaseTimeKind::NaiveBeta,
            Component::Transmitted => PhaseTimeKind::NaiveTransmitted,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Component::Incident => "incident",
            Component::Reflected => "reflected",
            Component::Alpha => "alpha",
            Component::Beta => "beta",
            Component::Transmitted => "transmitted",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Component::Incident => "inc",
            Component::Reflected => "R",
            Component::Alpha => "alpha",
            Component::Beta => "beta",
            Component::Transmitted => "T",
        }
    }

    /// Whether `x` lies where this component physically lives.
    pub fn contains(&self, x: f64, barrier: &Barrier) -> bool {
        let l = barrier.width();
        match self {
            Component::Incident | Component::Reflected => x <= 0.0,
            Component::Alpha | Component::Beta => (0.0..=l).contains(&x),
            Component::Transmitted => x >= l,
        }
    }
}

/// Peak-arrival time at `x` from the stationary phase of a single packet,
/// with the phase slope `theta'` of the full coefficient taken at `k0`.
///
/// These are the times obtained when reflection and transmission are not
/// decomposed into separate bounces.
pub fn naive_times(
    x: f64,
    which: Component,
    packet: &Packet,
    barrier: &Barrier,
    tol: &Tolerances,
) -> Result<PhaseTimeResult> {
    packet.check_above(barrier)?;
    if !which.contains(x, barrier) {
        return Err(Error::Region {
            x,
            component: which.name(),
        });
    }
    let k0 = packet.k0();
    let q0 = propagating(k0, barrier, tol)?;
    let m = packet.mass();
    let x0 = packet.x0();
    let l = barrier.width();
    let tp = theta_above(k0, barrier, tol)?.theta_prime;
    let vk = k0 / m;
    let vq = q0 / m;
    let value = match which {
        Component::Incident => (x - x0) / vk,
        Component::Reflected => -(x + x0 - tp) / vk,
        Component::Alpha => (x - l) / vq - (x0 - tp) / vk,
        Component::Beta => -(x - l) / vq - (x0 - tp) / vk,
        Component::Transmitted => (x - x0 - l + tp) / vk,
    };
    Ok(PhaseTimeResult::new(which.kind(), value, k0, barrier))
}

/// Single-packet stationary-phase approximation of one component above the barrier.
///
/// The coefficient is frozen at `k0` apart from its phase slope and `q` is
/// linearized around `q0`.
pub fn naive_packet(
    which: Component,
    x: f64,
    t: f64,
    packet: &Packet,
    barrier: &Barrier,
    tol: &Tolerances,
) -> Result<Complex64> {
    packet.check_above(barrier)?;
    let k0 = packet.k0();
    let q0 = propagating(k0, barrier, tol)?;
    let x0 = packet.x0();
    let l = barrier.width();
    let c = crate::stationary::above_coeffs(k0, barrier, tol)?;
    let tp = theta_above(k0, barrier, tol)?.theta_prime;
    let shift = Complex64::from_polar(1.0, -k0 * tp);
    let kq = k0 / q0;
    Ok(match which {
        Component::Incident => envelope(x - x0, t, packet),
        Component::Reflected => c.r * shift * envelope(-x - x0 + tp, t, packet),
        Component::Alpha => {
            let ph = Complex64::from_polar(1.0, q0 * x - k0 * kq * (x - l));
            c.alpha * ph * shift * envelope(kq * (x - l) - x0 + tp, t, packet)
        }
        Component::Beta => {
            let ph = Complex64::from_polar(1.0, -q0 * x + k0 * kq * (x - l));
            c.beta * ph * shift * envelope(-kq * (x - l) - x0 + tp, t, packet)
        }
        Component::Transmitted => c.t * shift * envelope(x - x0 - l + tp, t, packet),
    })
}

/// `(m / k) dtheta/dk` for the transmitted phase below the barrier.
pub fn tunneling_phase_time(k: f64, barrier: &Barrier, tol: &Tolerances) -> Result<PhaseTimeResult> {
    let e = tunnel_coeffs(k, barrier, tol)?;
    let value = barrier.mass() / k * e.theta_prime;
    Ok(PhaseTimeResult::new(PhaseTimeKind::TunnelPhase, value, k, barrier))
}

/// Thick-barrier limit `2m / (k rho)` of the tunneling phase time.
pub fn opaque_limit_time(k: f64, barrier: &Barrier, tol: &Tolerances) -> Result<PhaseTimeResult> {
    let rho = evanescent(k, barrier, tol)?;
    let value = 2.0 * barrier.mass() / (k * rho);
    Ok(PhaseTimeResult::new(PhaseTimeKind::OpaqueLimit, value, k, barrier))
}

/// `G(alpha) = (sinh(alpha) cosh(alpha) - alpha) / sinh^2(alpha)`.
pub fn opaque_aux(alpha: f64) -> Result<f64> {
    let alpha = require_positive("alpha", alpha)?;
    Ok(alpha * aux_over_alpha(alpha))
}

/// `G(alpha) / alpha`, finite at the origin where it tends to `2/3`.
fn aux_over_alpha(alpha: f64) -> f64 {
    if alpha > 20.0 {
        let s = alpha.sinh();
        (1.0 / alpha.tanh() - alpha / (s * s)) / alpha
    } else {
        // sinh cosh - alpha = (sinh(2 alpha) - 2 alpha) / 2
        let sc = sinhc(alpha);
        4.0 * sinh_excess(2.0 * alpha) / (sc * sc)
    }
}

/// `(2 m L / (w alpha)) G(alpha)`, which tends to `4mL / 3w` as `alpha -> 0`.
pub fn aux_transit_time(alpha: f64, barrier: &Barrier) -> Result<f64> {
    let alpha = require_positive("alpha", alpha)?;
    Ok(2.0 * barrier.mass() * barrier.width() / barrier.threshold() * aux_over_alpha(alpha))
}

/// `(m / k0) dphi/dk` for the recombined phase of the symmetric collision.
pub fn scattering_phase_time(k0: f64, barrier: &Barrier, tol: &Tolerances) -> Result<PhaseTimeResult> {
    let value = barrier.mass() / k0 * combined_phase_prime(k0, barrier, tol)?;
    Ok(PhaseTimeResult::new(PhaseTimeKind::ScatteringPhi, value, k0, barrier))
}

/// Tunneling and scattering phase times in units of `mL / k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub r_t: f64,
    pub r_t_phi: f64,
}

/// Rates as functions of the opacity `alpha` and `n = k^2 / w^2`.
pub fn time_rates(alpha: f64, n: f64) -> Result<Rates> {
    let alpha = require_positive("alpha", alpha)?;
    if !(n > 0.0 && n < 1.0) {
        return Err(Error::InvalidParameter {
            name: "n",
            value: n,
            reason: "must lie in (0, 1)",
        });
    }
    let (r_t, r_t_phi) = if alpha > 350.0 {
        // Both rates decay like 2/alpha; the sinh terms dominate completely.
        (2.0 / alpha, 2.0 / alpha)
    } else {
        let s = alpha.sinh();
        let r_t = 2.0 * (sinhc2(alpha) - n * (2.0 * n - 1.0)) / (4.0 * n * (1.0 - n) + s * s);
        let r_t_phi = 2.0 * (n + sinhc(alpha)) / (2.0 * n - 1.0 + alpha.cosh());
        (r_t, r_t_phi)
    };
    Ok(Rates { r_t, r_t_phi })
}
