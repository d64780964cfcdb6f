//! Bracketed one-dimensional root finding and maximization.

use roots::{find_root_brent, SimpleConvergency};

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Root of `f` on `[a, b]`; `f(a)` and `f(b)` must differ in sign.
pub fn brent<F: FnMut(f64) -> f64>(a: f64, b: f64, f: F, xtol: f64) -> Result<f64> {
    let mut conv = SimpleConvergency {
        eps: xtol,
        max_iter: MAX_ITER,
    };
    find_root_brent(a, b, f, &mut conv).map_err(|_| Error::Convergence {
        what: "Brent root search",
        iterations: MAX_ITER,
    })
}

/// Maximizer of a unimodal `f` on `[a, b]` by golden-section search.
pub fn golden_max<F: FnMut(f64) -> f64>(mut a: f64, mut b: f64, mut f: F, xtol: f64) -> Result<f64> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..MAX_ITER {
        if (b - a).abs() <= xtol {
            return Ok(0.5 * (a + b));
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    Err(Error::Convergence {
        what: "golden-section search",
        iterations: MAX_ITER,
    })
}
