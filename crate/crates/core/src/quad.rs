//! Quadrature of complex-valued integrands over a finite interval.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes per Gauss-Legendre panel.
const PANEL_ORDER: usize = 16;

/// Quadrature rule family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Trapezoid,
    /// Composite Gauss-Legendre with 16 nodes per panel.
    Gauss,
}

/// Integration interval and resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    k_lo: f64,
    k_hi: f64,
    n_points: usize,
    rule: Rule,
}

impl QuadratureSpec {
    pub const MIN_POINTS: usize = 64;

    pub fn new(k_lo: f64, k_hi: f64, n_points: usize, rule: Rule) -> Result<Self> {
        if !(k_lo.is_finite() && k_hi.is_finite() && k_lo < k_hi) {
            return Err(Error::InvalidParameter {
                name: "k_hi",
                value: k_hi,
                reason: "must be finite and exceed k_lo",
            });
        }
        if n_points < Self::MIN_POINTS {
            return Err(Error::InvalidParameter {
                name: "n_points",
                value: n_points as f64,
                reason: "at least 64 points are required",
            });
        }
        Ok(Self {
            k_lo,
            k_hi,
            n_points,
            rule,
        })
    }

    pub fn k_lo(&self) -> f64 {
        self.k_lo
    }

    pub fn k_hi(&self) -> f64 {
        self.k_hi
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    /// Same interval and rule with twice the nodes.
    pub fn doubled(&self) -> Self {
        Self {
            n_points: 2 * self.n_points,
            ..*self
        }
    }

    /// Precomputed nodes and weights for this specification.
    pub fn nodes(&self) -> Nodes {
        Nodes::new(self)
    }
}

/// Flattened node/weight table of a [`QuadratureSpec`].
#[derive(Debug, Clone)]
pub struct Nodes {
    pub k: Vec<f64>,
    pub weight: Vec<f64>,
}

impl Nodes {
    fn new(spec: &QuadratureSpec) -> Self {
        let (a, b) = (spec.k_lo, spec.k_hi);
        match spec.rule {
            Rule::Trapezoid => {
                let n = spec.n_points;
                let h = (b - a) / (n - 1) as f64;
                let k = (0..n).map(|i| a + i as f64 * h).collect();
                let mut weight = vec![h; n];
                weight[0] = 0.5 * h;
                weight[n - 1] = 0.5 * h;
                Self { k, weight }
            }
            Rule::Gauss => {
                let panels = spec.n_points.div_ceil(PANEL_ORDER);
                let rule = GaussLegendre::new(NonZeroUsize::new(PANEL_ORDER).unwrap());
                let h = (b - a) / panels as f64;
                let mut k = Vec::with_capacity(panels * PANEL_ORDER);
                let mut weight = Vec::with_capacity(panels * PANEL_ORDER);
                for p in 0..panels {
                    let lo = a + p as f64 * h;
                    for &(x, wt) in rule.as_node_weight_pairs() {
                        k.push(lo + 0.5 * h * (x + 1.0));
                        weight.push(0.5 * h * wt);
                    }
                }
                Self { k, weight }
            }
        }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        self.k.iter().zip(&self.weight).map(|(&k, &w)| f(k) * w).sum()
    }

    /// Integral together with the integral of `|f|`, used as a scale.
    fn integrate_with_scale(&self, f: impl Fn(f64) -> Complex64) -> (Complex64, f64) {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for (&k, &w) in self.k.iter().zip(&self.weight) {
            let v = f(k) * w;
            sum += v;
            abs += v.norm();
        }
        (sum, abs)
    }
}

/// Largest relative change tolerated when the node count is doubled.
pub const DOUBLING_TOL: f64 = 1e-6;

/// Results much smaller than `∫|f|` are compared against this fraction of it instead.
pub const RELATIVE_FLOOR: f64 = 1e-6;

/// Relative change between two estimates of the same integral.
pub fn relative_change(coarse: Complex64, fine: Complex64, abs_scale: f64) -> f64 {
    let denom = fine.norm().max(RELATIVE_FLOOR * abs_scale);
    if denom == 0.0 {
        0.0
    } else {
        (fine - coarse).norm() / denom
    }
}

/// Integrates with `spec` and with twice as many nodes; fails if the two
/// estimates differ by more than [`DOUBLING_TOL`].
pub fn integrate_checked(spec: &QuadratureSpec, f: impl Fn(f64) -> Complex64) -> Result<Complex64> {
    let coarse = spec.nodes().integrate(&f);
    let (fine, scale) = spec.doubled().nodes().integrate_with_scale(&f);
    let change = relative_change(coarse, fine, scale);
    if change > DOUBLING_TOL {
        Err(Error::Quadrature { change })
    } else {
        Ok(fine)
    }
}
