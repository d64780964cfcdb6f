//! Elementary functions with removable singularities at the origin.

/// Below this argument the series branches are used.
pub const SERIES_SEAM: f64 = 1e-4;

/// `sinh(x) / x`.
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < SERIES_SEAM {
        let x2 = x * x;
        1.0 + x2 / 6.0 * (1.0 + x2 / 20.0)
    } else {
        x.sinh() / x
    }
}

/// `sinh(2x) / (2x)`, i.e. `sinh(x) cosh(x) / x`.
pub fn sinhc2(x: f64) -> f64 {
    sinhc(2.0 * x)
}

/// `(sinh(x) - x) / x^3`, which tends to `1/6` at the origin.
pub fn sinh_excess(x: f64) -> f64 {
    if x.abs() < 1.0 {
        // Taylor series: sum_j x^{2j} / (2j + 3)!
        let x2 = x * x;
        let mut term = 1.0 / 6.0;
        let mut sum = term;
        for j in 1..12 {
            term *= x2 / ((2 * j + 2) * (2 * j + 3)) as f64;
            sum += term;
        }
        sum
    } else {
        (x.sinh() - x) / (x * x * x)
    }
}

/// `(u coth(u) - 1) / u^2`, which tends to `1/3` at the origin.
pub fn coth_excess(u: f64) -> f64 {
    let u = u.abs();
    if u < 0.05 {
        let u2 = u * u;
        1.0 / 3.0 - u2 / 45.0 + 2.0 * u2 * u2 / 945.0 - u2 * u2 * u2 / 4725.0
    } else {
        (u / u.tanh() - 1.0) / (u * u)
    }
}

/// `u / sinh(u)`, finite for every `u`.
pub fn inv_sinhc(u: f64) -> f64 {
    if u.abs() > 700.0 {
        0.0
    } else {
        1.0 / sinhc(u)
    }
}
