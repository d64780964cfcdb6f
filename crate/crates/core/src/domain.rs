//! Domain types and unit conventions.
//!
//! Natural units with `hbar = 1` are used throughout. Energies follow the free
//! dispersion `E = k^2 / 2m`; the barrier height enters only through the
//! threshold momentum `w = sqrt(2 m V0)`.

use num_complex::Complex64;

use crate::error::{require_finite, require_non_negative, require_positive, Error, Result};
use crate::tolerances::Tolerances;

/// Kinetic energy of a free plane wave, `k^2 / 2m`.
pub fn dispersion(k: f64, mass: f64) -> f64 {
    k * k / (2.0 * mass)
}

/// Square barrier of height `V0` and width `L` for a particle of mass `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barrier {
    height: f64,
    width: f64,
    mass: f64,
}

impl Barrier {
    pub fn new(height: f64, width: f64, mass: f64) -> Result<Self> {
        Ok(Self {
            height: require_positive("V0", height)?,
            width: require_non_negative("L", width)?,
            mass: require_positive("m", mass)?,
        })
    }

    /// Builds a barrier from its threshold momentum `w` instead of its height.
    pub fn from_threshold(w: f64, width: f64, mass: f64) -> Result<Self> {
        let w = require_positive("w", w)?;
        let mass = require_positive("m", mass)?;
        Self::new(w * w / (2.0 * mass), width, mass)
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Threshold momentum `w = sqrt(2 m V0)`.
    pub fn threshold(&self) -> f64 {
        (2.0 * self.mass * self.height).sqrt()
    }

    /// Same height and mass, different width.
    pub fn with_width(&self, width: f64) -> Result<Self> {
        Self::new(self.height, width, self.mass)
    }

    /// Opacity `alpha = sqrt(w^2 - k^2) L` for a sub-barrier momentum.
    pub fn opacity(&self, k: f64) -> Option<f64> {
        let w = self.threshold();
        (k.abs() < w).then(|| (w * w - k * k).sqrt() * self.width)
    }
}

/// Gaussian wave packet: momentum centre `k0`, width `a`, launch position `x0`.
///
/// The momentum amplitude is `g(k - k0) = (a^2 / 2 pi)^(1/4) exp(-a^2 (k - k0)^2 / 4)`
/// and the free packet peaks at `x0 + (k0 / m) t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Packet {
    k0: f64,
    width: f64,
    x0: f64,
    mass: f64,
}

impl Packet {
    pub fn new(k0: f64, width: f64, x0: f64, mass: f64) -> Result<Self> {
        Ok(Self {
            k0: require_finite("k0", k0)?,
            width: require_positive("a", width)?,
            x0: require_finite("x0", x0)?,
            mass: require_positive("m", mass)?,
        })
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn with_x0(&self, x0: f64) -> Result<Self> {
        Self::new(self.k0, self.width, x0, self.mass)
    }

    pub fn with_k0(&self, k0: f64) -> Result<Self> {
        Self::new(k0, self.width, self.x0, self.mass)
    }

    /// Group velocity `k0 / m`.
    pub fn velocity(&self) -> f64 {
        self.k0 / self.mass
    }

    /// Momentum amplitude `g(k - k0)`.
    pub fn amplitude(&self, k: f64) -> f64 {
        let a = self.width;
        let d = k - self.k0;
        (a * a / (2.0 * std::f64::consts::PI)).powf(0.25) * (-a * a * d * d / 4.0).exp()
    }

    /// `g'(k - k0) / g(k - k0)`.
    pub fn log_slope(&self, k: f64) -> f64 {
        -self.width * self.width * (k - self.k0) / 2.0
    }

    /// Requires `k0 > w`: the packet is centred above the barrier.
    pub fn check_above(&self, barrier: &Barrier) -> Result<()> {
        if self.k0 > barrier.threshold() {
            Ok(())
        } else {
            Err(Error::Domain {
                k: self.k0,
                what: "an above-barrier packet (k0 > w)",
            })
        }
    }

    /// Requires `0 < k0 < w`: the packet is centred below the barrier top.
    pub fn check_tunneling(&self, barrier: &Barrier) -> Result<()> {
        if self.k0 > 0.0 && self.k0 < barrier.threshold() {
            Ok(())
        } else {
            Err(Error::Domain {
                k: self.k0,
                what: "a tunneling packet (0 < k0 < w)",
            })
        }
    }
}

/// Inside-barrier wave number for a given outside momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel {
    /// `k > w`: oscillating solution with `q = sqrt(k^2 - w^2)`.
    Propagating(f64),
    /// `k < w`: evanescent solution with `rho = sqrt(w^2 - k^2)`.
    Evanescent(f64),
}

impl Channel {
    pub fn value(&self) -> f64 {
        match *self {
            Channel::Propagating(q) => q,
            Channel::Evanescent(rho) => rho,
        }
    }
}

/// Classifies `k` relative to the barrier threshold and returns `q` or `rho`.
pub fn channel_momentum(k: f64, barrier: &Barrier, tol: &Tolerances) -> Result<Channel> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::Domain {
            k,
            what: "channel momentum (k >= 0)",
        });
    }
    let w = barrier.threshold();
    let eps = tol.branch_eps(w);
    if (k - w).abs() <= eps {
        return Err(Error::BranchPoint { k, w, eps });
    }
    // (k - w)(k + w) keeps the small differences accurate near threshold.
    Ok(if k > w {
        Channel::Propagating(((k - w) * (k + w)).sqrt())
    } else {
        Channel::Evanescent(((w - k) * (w + k)).sqrt())
    })
}

/// How a set of scattering coefficients was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    /// Partial sums of the multiple-reflection series up to the given order.
    Series(usize),
    Symmetric,
}

/// Plane-wave scattering amplitudes at one momentum.
///
/// With the barrier on `[0, L]` the stationary state is `e^{ikx} + R e^{-ikx}`
/// on the left, `alpha e^{iqx} + beta e^{-iqx}` inside and `T e^{ikx}` on the
/// right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterCoeffs {
    pub r: Complex64,
    pub t: Complex64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub k: f64,
    pub provenance: Provenance,
}

impl ScatterCoeffs {
    /// `|R|^2 + |T|^2`.
    pub fn flux(&self) -> f64 {
        self.r.norm_sqr() + self.t.norm_sqr()
    }

    /// Largest componentwise distance between two coefficient sets.
    pub fn max_deviation(&self, other: &ScatterCoeffs) -> f64 {
        [
            (self.r - other.r).norm(),
            (self.t - other.t).norm(),
            (self.alpha - other.alpha).norm(),
            (self.beta - other.beta).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// The competing phase-time definitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseTimeKind {
    NaiveIncident,
    NaiveReflected,
    NaiveAlpha,
    NaiveBeta,
    NaiveTransmitted,
    /// `(m / k) dTheta/dk` for the transmitted tunneling phase.
    TunnelPhase,
    /// The `alpha -> infinity` limit `2m / (k rho)`.
    OpaqueLimit,
    /// `(m / k) dphi/dk` for the recombined symmetric-collision phase.
    ScatteringPhi,
}

impl PhaseTimeKind {
    pub fn label(&self) -> &'static str {
        match self {
            PhaseTimeKind::NaiveIncident => "naive_inc",
            PhaseTimeKind::NaiveReflected => "naive_R",
            PhaseTimeKind::NaiveAlpha => "naive_alpha",
            PhaseTimeKind::NaiveBeta => "naive_beta",
            PhaseTimeKind::NaiveTransmitted => "naive_T",
            PhaseTimeKind::TunnelPhase => "tunnel_phase",
            PhaseTimeKind::OpaqueLimit => "opaque_limit",
            PhaseTimeKind::ScatteringPhi => "scattering_phi",
        }
    }
}

/// A time produced by one of the phase-time definitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTimeResult {
    pub kind: PhaseTimeKind,
    pub value: f64,
    pub k_eval: f64,
    /// `sqrt(w^2 - k_eval^2) L` when `k_eval < w`, absent otherwise.
    pub alpha: Option<f64>,
}

impl PhaseTimeResult {
    pub(crate) fn new(kind: PhaseTimeKind, value: f64, k_eval: f64, barrier: &Barrier) -> Self {
        Self {
            kind,
            value,
            k_eval,
            alpha: barrier.opacity(k_eval),
        }
    }
}

/// Uniform one-dimensional grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_lo: f64,
    dx: f64,
    n: usize,
}

impl Grid {
    /// `n` points spanning `[x_lo, x_hi]` inclusive.
    pub fn new(x_lo: f64, x_hi: f64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Grid("at least three points are required"));
        }
        if !(x_lo.is_finite() && x_hi.is_finite() && x_hi > x_lo) {
            return Err(Error::Grid("x_hi must exceed x_lo"));
        }
        Ok(Self {
            x_lo,
            dx: (x_hi - x_lo) / (n - 1) as f64,
            n,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x_lo(&self) -> f64 {
        self.x_lo
    }

    pub fn x_hi(&self) -> f64 {
        self.x(self.n - 1)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_lo + i as f64 * self.dx
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }

    /// Index of the grid point nearest to `x`, clamped to the grid.
    pub fn index_of(&self, x: f64) -> usize {
        let i = ((x - self.x_lo) / self.dx).round();
        i.clamp(0.0, (self.n - 1) as f64) as usize
    }
}

/// Wave function sampled on a uniform grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub grid: Grid,
    pub psi: Vec<Complex64>,
}

impl Snapshot {
    pub fn new(t: f64, grid: Grid, psi: Vec<Complex64>) -> Result<Self> {
        if psi.len() != grid.len() {
            return Err(Error::Grid("sample count does not match grid"));
        }
        if psi.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Grid("non-finite amplitude"));
        }
        Ok(Self { t, grid, psi })
    }

    /// Samples `f(x)` on the grid.
    pub fn sample(t: f64, grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let psi = grid.positions().map(f).collect();
        Self::new(t, grid, psi)
    }

    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Trapezoid-rule norm of `|psi|^2`.
    pub fn norm(&self) -> f64 {
        trapezoid(self.psi.iter().map(|z| z.norm_sqr()), self.grid.dx())
    }

    /// Trapezoid-rule probability on the part of the grid with `lo <= x <= hi`.
    pub fn probability_between(&self, lo: f64, hi: f64) -> f64 {
        let dx = self.grid.dx();
        self.grid
            .positions()
            .zip(&self.psi)
            .filter(|(x, _)| *x >= lo && *x <= hi)
            .map(|(_, z)| z.norm_sqr() * dx)
            .sum()
    }

    /// Mean and variance of the position distribution `|psi|^2`.
    pub fn moments(&self) -> (f64, f64) {
        let dx = self.grid.dx();
        let norm = self.norm();
        let mean = trapezoid(
            self.grid.positions().zip(&self.psi).map(|(x, z)| x * z.norm_sqr()),
            dx,
        ) / norm;
        let var = trapezoid(
            self.grid
                .positions()
                .zip(&self.psi)
                .map(|(x, z)| (x - mean).powi(2) * z.norm_sqr()),
            dx,
        ) / norm;
        (mean, var)
    }
}

fn trapezoid(values: impl Iterator<Item = f64>, dx: f64) -> f64 {
    let mut sum = 0.0;
    let mut first = None;
    let mut last = 0.0;
    for v in values {
        if first.is_none() {
            first = Some(v);
        }
        sum += v;
        last = v;
    }
    (sum - 0.5 * (first.unwrap_or(0.0) + last)) * dx
}
