//! Multiple-peak decomposition above the barrier.
//!
//! The barrier is treated as two back-to-back potential steps. Each bounce
//! between `x = 0` and `x = L` multiplies the outgoing amplitudes by
//! `r = ((k - q) / (k + q))^2 e^{2iqL}`, so every coefficient of the plane-wave
//! solution is a geometric series.

use num_complex::Complex64;

use crate::domain::{Barrier, Packet, Provenance, ScatterCoeffs};
use crate::error::Result;
use crate::spm::envelope;
use crate::stationary::propagating;
use crate::tolerances::Tolerances;

/// First bounce amplitudes and the bounce ratio at one momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BounceSeries {
    pub k: f64,
    pub r1: Complex64,
    pub alpha1: Complex64,
    pub beta1: Complex64,
    pub t1: Complex64,
    pub r2: Complex64,
    pub ratio: Complex64,
    /// Smallest order whose dropped tail is below the series tolerance.
    pub order: usize,
}

/// Smallest `n >= 1` with `|ratio|^n < tol`.
fn adaptive_order(ratio_mod: f64, tol: f64) -> usize {
    if ratio_mod <= 0.0 {
        return 1;
    }
    let n = (tol.ln() / ratio_mod.ln()).floor() as usize + 1;
    n.max(1)
}

/// `R1`, `alpha1`, `beta1`, `T1`, `R2` and the ratio for `k > w`.
pub fn first_order_coeffs(k: f64, barrier: &Barrier, tol: &Tolerances) -> Result<BounceSeries> {
    let q = propagating(k, barrier, tol)?;
    let l = barrier.width();
    let s = k + q;
    let r01 = (k - q) / s;
    let r1 = Complex64::new(r01, 0.0);
    let alpha1 = Complex64::new(2.0 * k / s, 0.0);
    let beta1 = Complex64::from_polar(2.0 * k * (q - k) / (s * s), 2.0 * q * l);
    let t1 = Complex64::from_polar(4.0 * k * q / (s * s), (q - k) * l);
    let r2 = alpha1 * beta1 * (q / k);
    let ratio = Complex64::from_polar(r01 * r01, 2.0 * q * l);
    Ok(BounceSeries {
        k,
        r1,
        alpha1,
        beta1,
        t1,
        r2,
        ratio,
        order: adaptive_order(r01 * r01, tol.series),
    })
}

impl BounceSeries {
    /// `n`-th reflected amplitude, `n >= 1`.
    pub fn r_n(&self, n: usize) -> Complex64 {
        match n {
            0 => Complex64::new(0.0, 0.0),
            1 => self.r1,
            _ => self.r2 * self.ratio.powu(n as u32 - 2),
        }
    }

    /// `n`-th transmitted amplitude, `n >= 1`.
    pub fn t_n(&self, n: usize) -> Complex64 {
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.t1 * self.ratio.powu(n as u32 - 1)
    }

    pub fn alpha_n(&self, n: usize) -> Complex64 {
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.alpha1 * self.ratio.powu(n as u32 - 1)
    }

    pub fn beta_n(&self, n: usize) -> Complex64 {
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.beta1 * self.ratio.powu(n as u32 - 1)
    }

    /// Partial sums over the first `n` terms of each series.
    pub fn partial_sums(&self, n: usize) -> ScatterCoeffs {
        let n = n.max(1);
        // sum_{j<n} r^j
        let geo = |m: usize| -> Complex64 {
            let one = Complex64::new(1.0, 0.0);
            if m == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                (one - self.ratio.powu(m as u32)) / (one - self.ratio)
            }
        };
        let g = geo(n);
        ScatterCoeffs {
            r: self.r1 + self.r2 * geo(n - 1),
            t: self.t1 * g,
            alpha: self.alpha1 * g,
            beta: self.beta1 * g,
            k: self.k,
            provenance: Provenance::Series(n),
        }
    }

    /// Infinite geometric sums.
    pub fn limit(&self) -> ScatterCoeffs {
        let inv = 1.0 / (1.0 - self.ratio);
        ScatterCoeffs {
            r: self.r1 + self.r2 * inv,
            t: self.t1 * inv,
            alpha: self.alpha1 * inv,
            beta: self.beta1 * inv,
            k: self.k,
            provenance: Provenance::ClosedForm,
        }
    }

    /// `sum_{j<=n} (|R_j|^2 + |T_j|^2)`: probability carried by the separate peaks.
    pub fn peak_flux(&self, n: usize) -> f64 {
        let n = n.max(1);
        let r = self.ratio.norm_sqr();
        let geo = |m: usize| -> f64 {
            if m == 0 {
                0.0
            } else {
                (1.0 - r.powi(m as i32)) / (1.0 - r)
            }
        };
        self.r1.norm_sqr() + self.r2.norm_sqr() * geo(n - 1) + self.t1.norm_sqr() * geo(n)
    }
}

/// Partial sums of the bounce series up to `n` terms.
pub fn series_sums(k: f64, barrier: &Barrier, n: usize, tol: &Tolerances) -> Result<ScatterCoeffs> {
    Ok(first_order_coeffs(k, barrier, tol)?.partial_sums(n))
}

/// Which part of the wave function a peak train describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// Incident packet, `x < 0`.
    Incident,
    /// Reflected packets, `x < 0`.
    Reflected,
    /// Right-moving packets inside the barrier.
    Alpha,
    /// Left-moving packets inside the barrier.
    Beta,
    /// Transmitted packets, `x > L`.
    Transmitted,
}

impl Region {
    pub const ALL: [Region; 5] = [
        Region::Incident,
        Region::Reflected,
        Region::Alpha,
        Region::Beta,
        Region::Transmitted,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Region::Incident => "inc",
            Region::Reflected => "R",
            Region::Alpha => "alpha",
            Region::Beta => "beta",
            Region::Transmitted => "T",
        }
    }
}

/// One Gaussian term `amplitude e^{i slope x} phi[scale x + offset, t]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainComponent {
    pub amplitude: Complex64,
    pub phase_slope: f64,
    pub scale: f64,
    pub offset: f64,
}

/// Outcome of the resolvability bound `(k0/q0)(L/a) < pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validity {
    pub ok: bool,
    pub lhs: f64,
}

pub fn validity_check(packet: &Packet, barrier: &Barrier, tol: &Tolerances) -> Result<Validity> {
    let k0 = packet.k0();
    let q0 = propagating(k0, barrier, tol)?;
    let lhs = k0 / q0 * barrier.width() / packet.width();
    Ok(Validity {
        ok: lhs < std::f64::consts::PI,
        lhs,
    })
}

/// Linearized analytic sum of Gaussian packets for one region.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakTrain {
    pub region: Region,
    pub components: Vec<TrainComponent>,
    pub validity: Validity,
    packet: Packet,
}

impl PeakTrain {
    /// Builds the first `n` components (a single one for the incident packet).
    pub fn new(region: Region, packet: &Packet, barrier: &Barrier, n: usize, tol: &Tolerances) -> Result<Self> {
        packet.check_above(barrier)?;
        let validity = validity_check(packet, barrier, tol)?;
        let k0 = packet.k0();
        let x0 = packet.x0();
        let w = barrier.threshold();
        let l = barrier.width();
        let q0 = propagating(k0, barrier, tol)?;
        let s = k0 + q0;
        let rr = ((k0 - q0) / s).powi(2);
        let kq = k0 / q0;
        let detune = w * w / q0;
        let phase = |j: f64| Complex64::from_polar(1.0, -j * detune * l);
        let n = n.max(1);
        let components = match region {
            Region::Incident => vec![TrainComponent {
                amplitude: Complex64::new(1.0, 0.0),
                phase_slope: 0.0,
                scale: 1.0,
                offset: -x0,
            }],
            Region::Reflected => {
                let mut v = vec![TrainComponent {
                    amplitude: Complex64::new((k0 - q0) / s, 0.0),
                    phase_slope: 0.0,
                    scale: -1.0,
                    offset: -x0,
                }];
                let r2 = 4.0 * k0 * q0 * (q0 - k0) / (s * s * s);
                for j in 0..n.saturating_sub(1) {
                    let m = 2.0 * (j as f64 + 1.0);
                    v.push(TrainComponent {
                        amplitude: phase(m) * (r2 * rr.powi(j as i32)),
                        phase_slope: 0.0,
                        scale: -1.0,
                        offset: -x0 + m * kq * l,
                    });
                }
                v
            }
            Region::Alpha => (0..n)
                .map(|j| TrainComponent {
                    amplitude: phase(2.0 * j as f64) * (2.0 * k0 / s * rr.powi(j as i32)),
                    phase_slope: -detune,
                    scale: kq,
                    offset: 2.0 * j as f64 * l * kq - x0,
                })
                .collect(),
            Region::Beta => (0..n)
                .map(|j| {
                    let m = 2.0 * j as f64 + 2.0;
                    TrainComponent {
                        amplitude: phase(m) * (2.0 * k0 * (q0 - k0) / (s * s) * rr.powi(j as i32)),
                        phase_slope: detune,
                        scale: -kq,
                        offset: m * l * kq - x0,
                    }
                })
                .collect(),
            Region::Transmitted => (0..n)
                .map(|j| {
                    let m = 2.0 * j as f64 + 1.0;
                    TrainComponent {
                        amplitude: phase(m) * (4.0 * k0 * q0 / (s * s) * rr.powi(j as i32)),
                        phase_slope: 0.0,
                        scale: 1.0,
                        offset: -x0 - l + m * kq * l,
                    }
                })
                .collect(),
        };
        Ok(Self {
            region,
            components,
            validity,
            packet: *packet,
        })
    }

    pub fn eval(&self, x: f64, t: f64) -> Complex64 {
        self.components
            .iter()
            .map(|c| c.amplitude * Complex64::from_polar(1.0, c.phase_slope * x) * envelope(c.scale * x + c.offset, t, &self.packet))
            .sum()
    }

    /// Time at which component `j` peaks at position `x`.
    pub fn peak_time(&self, j: usize, x: f64) -> f64 {
        let c = &self.components[j];
        (c.scale * x + c.offset) / self.packet.velocity()
    }
}

/// Value of a peak train together with the resolvability flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainEval {
    pub value: Complex64,
    pub validity: Validity,
}

pub fn peak_train(
    region: Region,
    x: f64,
    t: f64,
    packet: &Packet,
    barrier: &Barrier,
    n: usize,
    tol: &Tolerances,
) -> Result<TrainEval> {
    let train = PeakTrain::new(region, packet, barrier, n, tol)?;
    Ok(TrainEval {
        value: train.eval(x, t),
        validity: train.validity,
    })
}

/// Predicted arrival of one outgoing peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduledPeak {
    pub region: Region,
    /// Index within its train, starting at 1.
    pub index: usize,
    /// Observation point: `L` for transmitted peaks, `0` for reflected ones.
    pub x: f64,
    pub time: f64,
}

/// Arrival times of the first `n` transmitted peaks at `x = L` and reflected peaks at `x = 0`.
pub fn peak_schedule(packet: &Packet, barrier: &Barrier, n: usize, tol: &Tolerances) -> Result<Vec<ScheduledPeak>> {
    let mut out = Vec::with_capacity(2 * n);
    for (region, x) in [(Region::Transmitted, barrier.width()), (Region::Reflected, 0.0)] {
        let train = PeakTrain::new(region, packet, barrier, n, tol)?;
        for j in 0..train.components.len() {
            out.push(ScheduledPeak {
                region,
                index: j + 1,
                x,
                time: train.peak_time(j, x),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounce_bookkeeping() {
        let tol = Tolerances::default();
        let b = Barrier::from_threshold(1.0, 1.0, 1.0).unwrap();
        let s = first_order_coeffs(2f64.sqrt(), &b, &tol).unwrap();
        let q = 1.0;
        let k = 2f64.sqrt();
        assert!((s.r2 - s.alpha1 * s.beta1 * (q / k)).norm() < 1e-15);
        assert!(s.ratio.norm().powi(s.order as i32) < tol.series);
        assert!(s.ratio.norm().powi(s.order as i32 - 1) >= tol.series);
    }

    #[test]
    fn validity_examples() {
        let tol = Tolerances::default();
        let w = 1.0;
        let k0 = 2.0 / 3f64.sqrt();
        let b = Barrier::from_threshold(w, 1.0, 1.0).unwrap();
        let p = Packet::new(k0, 1.0, -5.0, 1.0).unwrap();
        let v = validity_check(&p, &b, &tol).unwrap();
        assert!((v.lhs - 2.0).abs() < 1e-12 && v.ok);
        let b0 = b.with_width(0.0).unwrap();
        assert_eq!(validity_check(&p, &b0, &tol).unwrap().lhs, 0.0);
    }

    #[test]
    fn schedule_spacing() {
        let tol = Tolerances::default();
        let b = Barrier::from_threshold(3.0, 2.0, 1.0).unwrap();
        let p = Packet::new(5.0, 1.0, -10.0, 1.0).unwrap();
        let q0 = 4.0;
        let sched = peak_schedule(&p, &b, 4, &tol).unwrap();
        let tr: Vec<_> = sched.iter().filter(|s| s.region == Region::Transmitted).collect();
        assert!((tr[0].time - (10.0 / 5.0 + 2.0 / q0)).abs() < 1e-12);
        for w in tr.windows(2) {
            assert!((w[1].time - w[0].time - 2.0 * 2.0 / q0).abs() < 1e-12);
        }
        let re: Vec<_> = sched.iter().filter(|s| s.region == Region::Reflected).collect();
        assert!((re[0].time - 2.0).abs() < 1e-12);
        assert!((re[1].time - (2.0 + 2.0 * 2.0 / q0)).abs() < 1e-12);
    }
}
