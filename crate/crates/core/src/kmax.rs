//! Maximum of the transmitted momentum distribution `g(k - k0) |T(k, L)|`.
//!
//! Below the barrier `|T|` grows with `k`, so the transmitted distribution
//! peaks above `k0`. For thick barriers the growth wins everywhere and the
//! maximum sits at the threshold `k = w`; such cases are reported as
//! [`Kmax::Distorted`].

use num_complex::Complex64;
use rayon::prelude::*;

use crate::domain::{dispersion, Barrier, Packet};
use crate::error::{Error, Result};
use crate::optimize::{brent, golden_max};
use crate::quad::{integrate_checked, QuadratureSpec, Rule};
use crate::special::coth_excess;
use crate::stationary::tunnel_coeffs;
use crate::tolerances::Tolerances;

/// `g(k - k0) |T(k, L)|` for `0 < k < w`.
pub fn modulated_distribution(k: f64, packet: &Packet, barrier: &Barrier, tol: &Tolerances) -> Result<f64> {
    let t = tunnel_coeffs(k, barrier, tol)?;
    Ok(packet.amplitude(k) * t.t_mod)
}

/// `d ln|T| / dk` on `0 < k <= w`, continuous up to and including `k = w`.
pub fn log_transmission_slope(k: f64, barrier: &Barrier) -> f64 {
    let l = barrier.width();
    if l == 0.0 {
        return 0.0;
    }
    let w = barrier.threshold();
    let rho = ((w - k) * (w + k)).max(0.0).sqrt();
    let u = rho * l;
    let w4 = w.powi(4);
    // rho^2 / sinh^2(u), written through u / sinh(u) to survive u -> 0.
    let rs = if u > 700.0 {
        0.0
    } else {
        let r = if u < 1e-8 { 1.0 } else { u / u.sinh() };
        (r / l).powi(2)
    };
    w4 / 4.0 * (l * l * coth_excess(u) / k + 1.0 / (k * k * k)) / (w4 / (4.0 * k * k) + rs)
}

/// `d/dk ln[g(k - k0) |T(k, L)|]`.
pub fn log_derivative(k: f64, packet: &Packet, barrier: &Barrier) -> f64 {
    packet.log_slope(k) + log_transmission_slope(k, barrier)
}

/// `|T(w, L)| = (1 + w^2 L^2 / 4)^(-1/2)`.
fn threshold_transmission(barrier: &Barrier) -> f64 {
    let wl = barrier.threshold() * barrier.width();
    1.0 / (1.0 + wl * wl / 4.0).sqrt()
}

/// Maximizer of the transmitted distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kmax {
    Interior(f64),
    /// The distribution is maximal at the barrier threshold.
    Distorted,
}

impl Kmax {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Kmax::Interior(k) => Some(k),
            Kmax::Distorted => None,
        }
    }
}

/// Table-1 style record in units of the packet width `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmaxRecord {
    pub wa: f64,
    pub l_over_a: f64,
    pub k0a: f64,
    /// `k_max a`, or the distortion marker.
    pub kmax_a: Kmax,
    /// `k_max` itself.
    pub kmax: Kmax,
}

const SCAN_POINTS: usize = 64;

/// Finds the maximum of `g |T|` on `(k0, w)`.
///
/// The stationarity condition `g'/g + |T|'/|T| = 0` is scanned for a sign
/// change from positive to negative and refined by Brent's method, with a
/// golden-section search on `g |T|` as fallback. When no interior maximum
/// exists, or the threshold value `g(w - k0)|T(w)|` exceeds it, the result is
/// [`Kmax::Distorted`].
pub fn find_kmax(packet: &Packet, barrier: &Barrier, tol: &Tolerances) -> Result<KmaxRecord> {
    packet.check_tunneling(barrier)?;
    let a = packet.width();
    let k0 = packet.k0();
    let w = barrier.threshold();
    let record = |kmax: Kmax| KmaxRecord {
        wa: w * a,
        l_over_a: barrier.width() / a,
        k0a: k0 * a,
        kmax_a: match kmax {
            Kmax::Interior(k) => Kmax::Interior(k * a),
            Kmax::Distorted => Kmax::Distorted,
        },
        kmax,
    };
    if barrier.width() == 0.0 {
        return Ok(record(Kmax::Interior(k0)));
    }
    let hi = w - tol.branch_eps(w);
    let d = |k: f64| log_derivative(k, packet, barrier);
    let xtol = tol.root_rel * w;

    let mut bracket = None;
    let mut prev = (k0, d(k0));
    for i in 1..=SCAN_POINTS {
        let k = k0 + (hi - k0) * i as f64 / SCAN_POINTS as f64;
        let v = d(k);
        if prev.1 > 0.0 && v <= 0.0 {
            bracket = Some((prev.0, k));
            break;
        }
        prev = (k, v);
    }
    let Some((lo, up)) = bracket else {
        return Ok(record(Kmax::Distorted));
    };
    let root = match brent(lo, up, d, xtol) {
        Ok(r) => r,
        Err(_) => {
            let f = |k: f64| modulated_distribution(k, packet, barrier, tol).unwrap_or(0.0);
            golden_max(lo, up, f, xtol)?
        }
    };
    let interior = modulated_distribution(root, packet, barrier, tol)?;
    let boundary = packet.amplitude(w) * threshold_transmission(barrier);
    if boundary > interior {
        return Ok(record(Kmax::Distorted));
    }
    Ok(record(Kmax::Interior(root)))
}

/// Outcome of the threshold derivative test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Onset {
    /// `d/dk [g |T|]` is positive as `k -> w` from below.
    pub onset: bool,
    /// The one-sided log-derivative at `k = w`.
    pub slope_at_threshold: f64,
    /// Width at which the threshold slope changes sign, found numerically.
    pub l_numeric: f64,
    /// `sqrt(3 a^2 (w - k0) / (2 w))`, from bounding `|T|'/|T|` at `w` by `w L^2 / 3`.
    pub l_chain: f64,
    /// `sqrt(3/2) a (1 - k0/w)`.
    pub l_printed: f64,
}

pub fn distortion_onset(packet: &Packet, barrier: &Barrier, tol: &Tolerances) -> Result<Onset> {
    packet.check_tunneling(barrier)?;
    let w = barrier.threshold();
    let a = packet.width();
    let k0 = packet.k0();
    let slope = log_derivative(w, packet, barrier);
    let at_width = |l: f64| -> f64 {
        let b = barrier.with_width(l).expect("non-negative width");
        log_derivative(w, packet, &b)
    };
    // The threshold slope grows monotonically with L; double until it turns positive.
    let mut hi = a.max(1.0 / w);
    let mut iter = 0;
    while at_width(hi) <= 0.0 {
        hi *= 2.0;
        iter += 1;
        if iter > 200 {
            return Err(Error::Convergence {
                what: "distortion onset bracket",
                iterations: iter,
            });
        }
    }
    let l_numeric = brent(0.0, hi, at_width, tol.root_rel * hi)?;
    Ok(Onset {
        onset: slope > 0.0,
        slope_at_threshold: slope,
        l_numeric,
        l_chain: (3.0 * a * a * (w - k0) / (2.0 * w)).sqrt(),
        l_printed: 1.5f64.sqrt() * a * (1.0 - k0 / w),
    })
}

/// One cell of [`table1`].
#[derive(Debug, Clone, PartialEq)]
pub struct TableCell {
    pub wa: f64,
    pub l_over_a: f64,
    pub record: Result<KmaxRecord>,
}

/// `k_max a` over a grid of `w a` and `L / a` at fixed `k0 a`, with `a = m = 1`.
///
/// Cells are ordered row by row: all `w a` values for the first `L / a`, then the next.
pub fn table1(k0a: f64, wa_list: &[f64], l_list: &[f64], tol: &Tolerances) -> Result<Vec<TableCell>> {
    if let Some(&wa) = wa_list.iter().find(|&&wa| !(wa > k0a)) {
        return Err(Error::InvalidParameter {
            name: "wa",
            value: wa,
            reason: "every w a must exceed k0 a",
        });
    }
    let packet = Packet::new(k0a, 1.0, 0.0, 1.0)?;
    let cells: Vec<(f64, f64)> = l_list
        .iter()
        .flat_map(|&l| wa_list.iter().map(move |&wa| (wa, l)))
        .collect();
    Ok(cells
        .into_par_iter()
        .map(|(wa, l)| TableCell {
            wa,
            l_over_a: l,
            record: Barrier::from_threshold(wa, l, 1.0).and_then(|b| find_kmax(&packet, &b, tol)),
        })
        .collect())
}

/// Quadrature grid for the free packet truncated to `(0, k_cut]`.
pub fn cutoff_quadrature(packet: &Packet, k_cut: f64, x: f64, t: f64) -> Result<QuadratureSpec> {
    let a = packet.width();
    let k0 = packet.k0();
    let lo = (k0 - 12.0 / a).max(0.0);
    let hi = (k0 + 12.0 / a).min(k_cut);
    if hi <= lo {
        return Err(Error::InvalidParameter {
            name: "k_cut",
            value: k_cut,
            reason: "no momentum support below the cut-off",
        });
    }
    // Enough nodes to resolve the phase k (x - x0) - k^2 t / 2m across the interval.
    let phase_rate = (x - packet.x0()).abs() + hi.abs().max(lo.abs()) * t.abs() / packet.mass();
    let oscillations = (hi - lo) * phase_rate / (2.0 * std::f64::consts::PI);
    let n = (64.0 + 32.0 * oscillations).ceil() as usize;
    QuadratureSpec::new(lo, hi, n.max(QuadratureSpec::MIN_POINTS), Rule::Gauss)
}

/// Free packet with its momentum distribution truncated to `(0, k_cut]`.
pub fn cutoff_packet(x: f64, t: f64, packet: &Packet, k_cut: f64) -> Result<Complex64> {
    if !(k_cut > 0.0) {
        return Err(Error::InvalidParameter {
            name: "k_cut",
            value: k_cut,
            reason: "must be positive",
        });
    }
    let spec = cutoff_quadrature(packet, k_cut, x, t)?;
    let m = packet.mass();
    let dx = x - packet.x0();
    let inv = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    integrate_checked(&spec, |k| {
        Complex64::from_polar(packet.amplitude(k) * inv, k * dx - dispersion(k, m) * t)
    })
}

/// `int_0^{k_cut} g(k - k0)^2 dk`, the probability kept by the truncation.
pub fn truncated_norm(packet: &Packet, k_cut: f64) -> Result<f64> {
    let spec = cutoff_quadrature(packet, k_cut, packet.x0(), 0.0)?;
    let v = integrate_checked(&spec, |k| Complex64::new(packet.amplitude(k).powi(2), 0.0))?;
    Ok(v.re)
}
