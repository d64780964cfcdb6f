//! Wave packets by direct quadrature over momentum.

use num_complex::Complex64;

use crate::domain::{dispersion, Barrier, Packet};
use crate::error::{Error, Result};
use crate::oracle::matching::match_barrier;
use crate::quad::{relative_change, QuadratureSpec, DOUBLING_TOL};
use crate::spm::Component;

struct NodeSet {
    k: Vec<f64>,
    /// `weight * g(k - k0) / sqrt(2 pi)`.
    gw: Vec<f64>,
    coeff: Vec<[Complex64; 4]>,
    kappa: Vec<Complex64>,
}

impl NodeSet {
    fn new(spec: &QuadratureSpec, packet: &Packet, barrier: &Barrier) -> Result<Self> {
        let nodes = spec.nodes();
        let w = barrier.threshold();
        let inv = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        let mut coeff = Vec::with_capacity(nodes.k.len());
        let mut kappa = Vec::with_capacity(nodes.k.len());
        let scattered = spec.k_lo() > 0.0 && (spec.k_lo() > w || spec.k_hi() < w);
        for &k in &nodes.k {
            if scattered {
                let m = match_barrier(k, w, 0.0, barrier.width())?;
                coeff.push([m.r, m.alpha, m.beta, m.t]);
                kappa.push(m.kappa);
            } else {
                coeff.push([Complex64::new(f64::NAN, 0.0); 4]);
                kappa.push(Complex64::new(f64::NAN, 0.0));
            }
        }
        let gw = nodes
            .k
            .iter()
            .zip(&nodes.weight)
            .map(|(&k, &wt)| packet.amplitude(k) * wt * inv)
            .collect();
        Ok(Self {
            k: nodes.k,
            gw,
            coeff,
            kappa,
        })
    }

    fn eval(&self, which: Component, x: f64, t: f64, packet: &Packet) -> (Complex64, f64) {
        let m = packet.mass();
        let x0 = packet.x0();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        let i = Complex64::i();
        for j in 0..self.k.len() {
            let k = self.k[j];
            let base = k * x0 + dispersion(k, m) * t;
            let v = match which {
                Component::Incident => Complex64::from_polar(1.0, k * x - base),
                Component::Reflected => self.coeff[j][0] * Complex64::from_polar(1.0, -k * x - base),
                Component::Alpha => self.coeff[j][1] * (i * self.kappa[j] * x - i * base).exp(),
                Component::Beta => self.coeff[j][2] * (-i * self.kappa[j] * x - i * base).exp(),
                Component::Transmitted => self.coeff[j][3] * Complex64::from_polar(1.0, k * x - base),
            } * self.gw[j];
            sum += v;
            abs += v.norm();
        }
        (sum, abs)
    }
}

/// Packet components evaluated by quadrature with exact momentum dependence.
///
/// The amplitudes at every node come from [`match_barrier`] for the barrier
/// on `[0, L]`. Each evaluation is repeated on a grid with twice the nodes and
/// fails with [`Error::Quadrature`] if the two results disagree.
pub struct PacketQuadrature {
    packet: Packet,
    barrier: Barrier,
    spec: QuadratureSpec,
    coarse: NodeSet,
    fine: NodeSet,
}

impl PacketQuadrature {
    pub fn new(packet: &Packet, barrier: &Barrier, spec: QuadratureSpec) -> Result<Self> {
        Ok(Self {
            packet: *packet,
            barrier: *barrier,
            spec,
            coarse: NodeSet::new(&spec, packet, barrier)?,
            fine: NodeSet::new(&spec.doubled(), packet, barrier)?,
        })
    }

    /// Quadrature covering `k0 +- 12/a`, clipped to one side of the threshold
    /// when `clip_to_channel` is set.
    pub fn around_k0(packet: &Packet, barrier: &Barrier, n_points: usize, clip_to_channel: bool) -> Result<Self> {
        let a = packet.width();
        let k0 = packet.k0();
        let w = barrier.threshold();
        let mut lo = k0 - 12.0 / a;
        let mut hi = k0 + 12.0 / a;
        if clip_to_channel {
            if k0 > w {
                lo = lo.max(w * (1.0 + 1e-9));
            } else {
                lo = lo.max(1e-9 * w);
                hi = hi.min(w * (1.0 - 1e-9));
            }
        }
        let spec = QuadratureSpec::new(lo, hi, n_points, crate::quad::Rule::Gauss)?;
        Self::new(packet, barrier, spec)
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    fn check_component(&self, which: Component) -> Result<()> {
        if which == Component::Incident {
            return Ok(());
        }
        let w = self.barrier.threshold();
        let (lo, hi) = (self.spec.k_lo(), self.spec.k_hi());
        if lo > w || (lo > 0.0 && hi < w) {
            Ok(())
        } else {
            Err(Error::Domain {
                k: if lo <= 0.0 { lo } else { w },
                what: "a scattered component (momentum range on one side of w, k > 0)",
            })
        }
    }

    /// One component at `(x, t)`.
    pub fn eval(&self, which: Component, x: f64, t: f64) -> Result<Complex64> {
        self.check_component(which)?;
        let (c, _) = self.coarse.eval(which, x, t, &self.packet);
        let (f, scale) = self.fine.eval(which, x, t, &self.packet);
        let change = relative_change(c, f, scale);
        if change > DOUBLING_TOL {
            return Err(Error::Quadrature { change });
        }
        Ok(f)
    }

    /// Full wave function: incident plus reflected for `x < 0`, the inside
    /// waves on `[0, L]`, transmitted for `x > L`.
    pub fn total(&self, x: f64, t: f64) -> Result<Complex64> {
        let l = self.barrier.width();
        if x < 0.0 {
            Ok(self.eval(Component::Incident, x, t)? + self.eval(Component::Reflected, x, t)?)
        } else if x <= l {
            Ok(self.eval(Component::Alpha, x, t)? + self.eval(Component::Beta, x, t)?)
        } else {
            self.eval(Component::Transmitted, x, t)
        }
    }
}

/// Single evaluation of one component; see [`PacketQuadrature`].
pub fn quadrature_packet(
    which: Component,
    x: f64,
    t: f64,
    packet: &Packet,
    barrier: &Barrier,
    spec: QuadratureSpec,
) -> Result<Complex64> {
    PacketQuadrature::new(packet, barrier, spec)?.eval(which, x, t)
}
