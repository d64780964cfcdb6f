//! Single-momentum scattering amplitudes and phases.
//!
//! Above the barrier (`k > w`) the barrier occupies `[0, L]`. The symmetric
//! collision uses a barrier centred on the origin, `[-L/2, L/2]`, with the
//! same height and width.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::domain::{channel_momentum, Barrier, Channel, Provenance, ScatterCoeffs};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// Transmission phase above the barrier and its momentum derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEval {
    /// `arg(T e^{ikL})`, continuous in `k`.
    pub theta: f64,
    /// `dtheta/dk`, a length.
    pub theta_prime: f64,
    /// `sqrt(4k^2q^2 cos^2(qL) + (k^2+q^2)^2 sin^2(qL))`.
    pub f: f64,
}

/// Transmission modulus and phase below the barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnelEval {
    pub t_mod: f64,
    /// `arg(T e^{ikL}) = arctan[(2k^2 - w^2) tanh(rho L) / (2 k rho)]`.
    pub theta: f64,
    pub theta_prime: f64,
}

pub(crate) fn propagating(k: f64, barrier: &Barrier, tol: &Tolerances) -> Result<f64> {
    match channel_momentum(k, barrier, tol)? {
        Channel::Propagating(q) => Ok(q),
        Channel::Evanescent(_) => Err(Error::Domain {
            k,
            what: "above-barrier scattering (k > w)",
        }),
    }
}

pub(crate) fn evanescent(k: f64, barrier: &Barrier, tol: &Tolerances) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Domain {
            k,
            what: "tunneling (0 < k < w)",
        });
    }
    match channel_momentum(k, barrier, tol)? {
        Channel::Evanescent(rho) => Ok(rho),
        Channel::Propagating(_) => Err(Error::Domain {
            k,
            what: "tunneling (0 < k < w)",
        }),
    }
}

fn amplitude_denominator(k: f64, q: f64, w: f64, ql: f64) -> f64 {
    let s = ql.sin();
    (4.0 * k * k * q * q + w.powi(4) * s * s).sqrt()
}

/// Continuous branch of `arctan(c tan(y))` with `c > 0`.
///
/// Agrees with `y` at every multiple of `pi/2`.
fn continuous_arctan_tan(c: f64, y: f64) -> f64 {
    let n = (y / PI).round();
    let r = y - n * PI;
    n * PI + (c * r.sin()).atan2(r.cos())
}

/// `R`, `T`, `alpha` and `beta` for `k > w`.
pub fn above_coeffs(k: f64, barrier: &Barrier, tol: &Tolerances) -> Result<ScatterCoeffs> {
    let q = propagating(k, barrier, tol)?;
    let w = barrier.threshold();
    let l = barrier.width();
    let ql = q * l;
    let f = amplitude_denominator(k, q, w, ql);
    let theta = continuous_arctan_tan((k * k + q * q) / (2.0 * k * q), ql);
    let alpha = Complex64::from_polar(k * (k + q) / f, theta - ql);
    let beta = Complex64::from_polar(-k * (k - q) / f, theta + ql);
    let r = Complex64::from_polar((k * k - q * q) / f * ql.sin(), theta) * Complex64::new(0.0, -1.0);
    let t = Complex64::from_polar(2.0 * k * q / f, theta - k * l);
    Ok(ScatterCoeffs {
        r,
        t,
        alpha,
        beta,
        k,
        provenance: Provenance::ClosedForm,
    })
}

/// Transmission phase `theta(k)` above the barrier and its derivative.
pub fn theta_above(k: f64, barrier: &Barrier, tol: &Tolerances) -> Result<PhaseEval> {
    let q = propagating(k, barrier, tol)?;
    let w = barrier.threshold();
    let l = barrier.width();
    let ql = q * l;
    let f = amplitude_denominator(k, q, w, ql);
    let theta = continuous_arctan_tan((k * k + q * q) / (2.0 * k * q), ql);
    let theta_prime =
        2.0 / q * ((k * k + q * q) * k * k * q * l - w.powi(4) * ql.sin() * ql.cos()) / (f * f);
    Ok(PhaseEval {
        theta,
        theta_prime,
        f,
    })
}

/// Transmission modulus, phase and phase derivative for `0 < k < w`.
pub fn tunnel_coeffs(k: f64, barrier: &Barrier, tol: &Tolerances) -> Result<TunnelEval> {
    let rho = evanescent(k, barrier, tol)?;
    let w = barrier.threshold();
    let l = barrier.width();
    let u = rho * l;
    let c = w * w / (2.0 * k * rho);
    // 1/sqrt(1 + c^2 sinh^2 u), rewritten so that large u does not overflow.
    let t_mod = if u < 1.0 {
        1.0 / (1.0 + (c * u.sinh()).powi(2)).sqrt()
    } else {
        let e = (-u).exp();
        let e2 = e * e;
        e / (e2 + 0.25 * c * c * (1.0 - e2).powi(2)).sqrt()
    };
    let theta = ((2.0 * k * k - w * w) * u.tanh()).atan2(2.0 * k * rho);
    Ok(TunnelEval {
        t_mod,
        theta,
        theta_prime: tunnel_theta_prime(k, rho, w, l),
    })
}

/// `dtheta/dk` below the barrier.
fn tunnel_theta_prime(k: f64, rho: f64, w: f64, l: f64) -> f64 {
    let alpha = rho * l;
    let w4 = w.powi(4);
    let k2 = k * k;
    let shape = 2.0 * k2 - w * w;
    if alpha < 1.0 {
        // (2/rho) [w^4 sinh cosh - shape k^2 alpha] / (4k^2rho^2 + w^4 sinh^2)
        let s = alpha.sinh();
        let num = w4 * crate::special::sinhc2(alpha) - shape * k2;
        2.0 * l * num / (4.0 * k2 * rho * rho + w4 * s * s)
    } else {
        let s = alpha.sinh();
        let inv_s2 = if alpha > 350.0 { 0.0 } else { 1.0 / (s * s) };
        let num = w4 / alpha.tanh() - shape * k2 * alpha * inv_s2;
        2.0 / rho * num / (4.0 * k2 * rho * rho * inv_s2 + w4)
    }
}

/// `R`, `T`, `alpha` and `beta` for `0 < k < w` and the barrier on `[0, L]`.
///
/// Here `alpha` and `beta` multiply `e^{-rho x}` and `e^{rho x}`.
pub fn below_coeffs(k: f64, barrier: &Barrier, tol: &Tolerances) -> Result<ScatterCoeffs> {
    let rho = evanescent(k, barrier, tol)?;
    let w = barrier.threshold();
    let l = barrier.width();
    let u = rho * l;
    let tun = tunnel_coeffs(k, barrier, tol)?;
    let t = Complex64::from_polar(tun.t_mod, tun.theta - k * l);
    let c = w * w / (2.0 * k * rho);
    let cs = if u > 700.0 { f64::INFINITY } else { c * u.sinh() };
    let r_mod = 1.0 / (1.0 + 1.0 / (cs * cs)).sqrt();
    let r = Complex64::from_polar(r_mod, tun.theta - PI / 2.0);
    // t_mod e^u stays bounded for thick barriers.
    let t_mod_eu = if u < 1.0 {
        tun.t_mod * u.exp()
    } else {
        let e2 = (-2.0 * u).exp();
        1.0 / (e2 + 0.25 * c * c * (1.0 - e2).powi(2)).sqrt()
    };
    let i_k_rho = Complex64::new(0.0, k / rho);
    let alpha = Complex64::from_polar(0.5 * t_mod_eu, tun.theta) * (1.0 - i_k_rho);
    let beta = Complex64::from_polar(0.5 * tun.t_mod, tun.theta) * (1.0 + i_k_rho) * (-u).exp();
    Ok(ScatterCoeffs {
        r,
        t,
        alpha,
        beta,
        k,
        provenance: Provenance::ClosedForm,
    })
}

/// Left-incident amplitudes for the barrier `[-L/2, L/2]`.
///
/// `r` and `t` are `R_B` and `T_B`; `alpha` and `beta` multiply
/// `e^{-rho x}` and `e^{rho x}` inside the barrier.
pub fn symmetric_coeffs(k: f64, barrier: &Barrier, tol: &Tolerances) -> Result<ScatterCoeffs> {
    let rho = evanescent(k, barrier, tol)?;
    let w = barrier.threshold();
    let l = barrier.width();
    let u = rho * l;
    let tun = tunnel_coeffs(k, barrier, tol)?;
    let t = Complex64::from_polar(tun.t_mod, tun.theta - k * l);
    // R_B = -i (w^2 / 2k rho) sinh(u) T_B; the modulus is evaluated directly
    // to stay finite for thick barriers.
    let c = w * w / (2.0 * k * rho);
    let cs = if u > 700.0 { f64::INFINITY } else { c * u.sinh() };
    let r_mod = 1.0 / (1.0 + 1.0 / (cs * cs)).sqrt();
    let r = Complex64::from_polar(r_mod, tun.theta - k * l - PI / 2.0);
    let edge = t * Complex64::from_polar(0.5, k * l / 2.0);
    let i_k_rho = Complex64::new(0.0, k / rho);
    let alpha = edge * (1.0 - i_k_rho) * (rho * l / 2.0).exp();
    let beta = edge * (1.0 + i_k_rho) * (-rho * l / 2.0).exp();
    Ok(ScatterCoeffs {
        r,
        t,
        alpha,
        beta,
        k,
        provenance: Provenance::Symmetric,
    })
}

/// Phase `phi` with `R_B + T_B = exp(-i (kL - phi))`.
pub fn combined_phase(k: f64, barrier: &Barrier, tol: &Tolerances) -> Result<f64> {
    let rho = evanescent(k, barrier, tol)?;
    let w = barrier.threshold();
    let u = rho * barrier.width();
    // Numerator and denominator divided by cosh(u).
    let num = 2.0 * k * rho * u.tanh();
    let den = w * w / u.cosh() + (k * k - rho * rho);
    Ok(-num.atan2(den))
}

/// `dphi/dk`.
pub fn combined_phase_prime(k: f64, barrier: &Barrier, tol: &Tolerances) -> Result<f64> {
    let rho = evanescent(k, barrier, tol)?;
    let w = barrier.threshold();
    let l = barrier.width();
    let alpha = rho * l;
    let w2 = w * w;
    let k2 = k * k;
    Ok(if alpha < 1.0 {
        2.0 * l * (w2 * crate::special::sinhc(alpha) + k2) / (2.0 * k2 - w2 + w2 * alpha.cosh())
    } else {
        let inv_c = if alpha > 700.0 { 0.0 } else { 1.0 / alpha.cosh() };
        2.0 / rho * (w2 * alpha.tanh() + alpha * k2 * inv_c) / ((2.0 * k2 - w2) * inv_c + w2)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn resonance_is_reflectionless() {
        let b = Barrier::from_threshold(1.0, PI, 1.0).unwrap();
        // q = 1 so that qL = pi.
        let c = above_coeffs(2f64.sqrt(), &b, &tol()).unwrap();
        assert!(c.r.norm() < 1e-15);
        assert!((c.t.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quarter_wave_reflection() {
        let w = 1.0;
        let b = Barrier::from_threshold(w, 1.5 * PI / w, 1.0).unwrap();
        let c = above_coeffs(2f64.sqrt() * w, &b, &tol()).unwrap();
        assert!((c.r.norm() - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn theta_at_special_points() {
        let w = 1.0;
        let k = 2f64.sqrt();
        let q = 1.0;
        for n in 1..4 {
            let l = n as f64 * PI / q;
            let b = Barrier::from_threshold(w, l, 1.0).unwrap();
            let p = theta_above(k, &b, &tol()).unwrap();
            assert!((p.theta - n as f64 * PI).abs() < 1e-12);
            let expected = l / q * (k * k + q * q) / (2.0 * k * q);
            assert!(((1.0 / k) * p.theta_prime - expected).abs() < 1e-12);

            let l = (n as f64 + 0.5) * PI / q;
            let b = Barrier::from_threshold(w, l, 1.0).unwrap();
            let p = theta_above(k, &b, &tol()).unwrap();
            assert!((p.theta - (n as f64 + 0.5) * PI).abs() < 1e-12);
            let expected = l / q * (2.0 * k * q) / (k * k + q * q);
            assert!(((1.0 / k) * p.theta_prime - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn thin_barrier_is_transparent() {
        let b = Barrier::from_threshold(2.0, 0.0, 1.0).unwrap();
        let e = tunnel_coeffs(1.0, &b, &tol()).unwrap();
        assert_eq!(e.t_mod, 1.0);
        assert_eq!(e.theta, 0.0);
        let s = symmetric_coeffs(1.0, &b, &tol()).unwrap();
        assert_eq!(s.r.norm(), 0.0);
        assert!((s.t.norm() - 1.0).abs() < 1e-15);
        assert_eq!(combined_phase(1.0, &b, &tol()).unwrap(), 0.0);
    }

    #[test]
    fn thick_barrier_stays_finite() {
        let b = Barrier::from_threshold(1.0, 2000.0, 1.0).unwrap();
        let e = tunnel_coeffs(0.5, &b, &tol()).unwrap();
        assert!(e.t_mod >= 0.0 && e.t_mod < 1e-300);
        assert!(e.theta_prime.is_finite());
        let s = symmetric_coeffs(0.5, &b, &tol()).unwrap();
        assert!(((s.r + s.t).norm() - 1.0).abs() < 1e-12);
        assert!(combined_phase_prime(0.5, &b, &tol()).unwrap().is_finite());
    }

    #[test]
    fn domain_errors() {
        let b = Barrier::from_threshold(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(above_coeffs(0.5, &b, &tol()), Err(Error::Domain { .. })));
        assert!(matches!(tunnel_coeffs(1.5, &b, &tol()), Err(Error::Domain { .. })));
        assert!(matches!(tunnel_coeffs(0.0, &b, &tol()), Err(Error::Domain { .. })));
        assert!(matches!(symmetric_coeffs(1.0, &b, &tol()), Err(Error::BranchPoint { .. })));
    }
}
