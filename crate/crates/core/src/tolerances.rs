//! Numerical tolerances shared by every module.
//!
//! One record carries all thresholds so that a run can be reproduced from its
//! configuration alone. The defaults are the values the test-suite is pinned
//! against.

/// Tolerance record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed violation of `|R|^2 + |T|^2 = 1` and `|R_B + T_B| = 1`.
    pub unitarity: f64,
    /// Bound on the dropped tail of the multiple-reflection series.
    pub series: f64,
    /// Relative agreement required between closed-form phase derivatives and
    /// finite differences.
    pub derivative: f64,
    /// Half-width of the excluded neighbourhood around `k = w`, relative to `w`.
    pub branch_rel: f64,
    /// Absolute tolerance of bracketed root finding, in momentum units relative to `w`.
    pub root_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unitarity: 1e-12,
            series: 1e-12,
            derivative: 1e-6,
            branch_rel: 1e-9,
            root_rel: 1e-13,
        }
    }
}

impl Tolerances {
    /// Absolute branch-point exclusion for a barrier with threshold momentum `w`.
    pub fn branch_eps(&self, w: f64) -> f64 {
        self.branch_rel * w
    }
}
