//! Invariant checks run by `phasetime validate`.

use phasetime::kmax::{table1, Kmax};
use phasetime::multipeak::first_order_coeffs;
use phasetime::spm::{opaque_limit_time, scattering_phase_time, time_rates, tunneling_phase_time};
use phasetime::stationary::{above_coeffs, combined_phase, symmetric_coeffs, theta_above, tunnel_coeffs};
use phasetime::{channel_momentum, Barrier, Channel, Tolerances};

use crate::csv::Table;

type Check = Result<(bool, String), phasetime::Error>;

/// Barriers and momenta on a fixed low-discrepancy pattern, so that the
/// suite is reproducible without a random generator.
fn samples(n: usize) -> impl Iterator<Item = (f64, f64, f64)> {
    let golden = 0.618_033_988_749_894_9;
    (0..n).map(move |i| {
        let u = |c: f64| ((i as f64 + 1.0) * golden * c).fract();
        let w = 0.1 + 9.9 * u(1.0);
        let wl = 20.0 * u(std::f64::consts::SQRT_2);
        let s = u(std::f64::consts::E);
        (w, wl / w, s)
    })
}

fn channels(tol: &Tolerances) -> Check {
    let mut worst: f64 = 0.0;
    for (w, l, s) in samples(200) {
        let b = Barrier::from_threshold(w, l, 1.0)?;
        for k in [w * (1.0 + 1e-6 + 5.0 * s), w * (1e-6 + (1.0 - 2e-6) * s)] {
            let e = match channel_momentum(k, &b, tol)? {
                Channel::Propagating(q) => (q * q + w * w - k * k).abs() / (k * k),
                Channel::Evanescent(r) => (r * r + k * k - w * w).abs() / (w * w),
            };
            worst = worst.max(e);
        }
    }
    Ok((worst < 1e-12, format!("max relative residual {worst:.1e}")))
}

fn unitarity(tol: &Tolerances) -> Check {
    let mut worst: f64 = 0.0;
    for (w, l, s) in samples(200) {
        let b = Barrier::from_threshold(w, l, 1.0)?;
        let c = above_coeffs(w * (1.0 + 1e-6 + 5.0 * s), &b, tol)?;
        worst = worst.max((c.flux() - 1.0).abs());
    }
    Ok((worst <= tol.unitarity, format!("max ||R|^2+|T|^2-1| = {worst:.1e}")))
}

fn symmetric(tol: &Tolerances) -> Check {
    let mut worst: f64 = 0.0;
    for (w, l, s) in samples(200) {
        let b = Barrier::from_threshold(w, l, 1.0)?;
        let c = symmetric_coeffs(w * (1e-6 + (1.0 - 2e-6) * s), &b, tol)?;
        worst = worst.max(((c.r + c.t).norm() - 1.0).abs());
    }
    Ok((worst <= tol.unitarity, format!("max ||R_B+T_B|-1| = {worst:.1e}")))
}

fn series(tol: &Tolerances) -> Check {
    let mut worst_sum: f64 = 0.0;
    let mut worst_flux: f64 = 0.0;
    for (w, l, s) in samples(200) {
        let b = Barrier::from_threshold(w, l, 1.0)?;
        let k = w * (1.0 + 1e-4 + 5.0 * s);
        let bounce = first_order_coeffs(k, &b, tol)?;
        worst_sum = worst_sum.max(bounce.limit().max_deviation(&above_coeffs(k, &b, tol)?));
        worst_flux = worst_flux.max((bounce.peak_flux(bounce.order) - 1.0).abs());
    }
    Ok((
        worst_sum <= tol.series && worst_flux <= 1e-10,
        format!("closed sums off by {worst_sum:.1e}, peak flux off by {worst_flux:.1e}"),
    ))
}

fn central(f: impl Fn(f64) -> Result<f64, phasetime::Error>, k: f64, h: f64) -> Result<f64, phasetime::Error> {
    Ok((f(k + h)? - f(k - h)?) / (2.0 * h))
}

fn derivatives(tol: &Tolerances) -> Check {
    let w = 1.0;
    let (margin, h) = (1e-3, 1e-6);
    let mut worst: f64 = 0.0;
    for l in [0.5, 2.0] {
        let b = Barrier::from_threshold(w, l, 1.0)?;
        for i in 0..500 {
            let s = i as f64 / 499.0;
            let k = w + margin + 3.0 * s;
            let got = theta_above(k, &b, tol)?.theta_prime;
            let fd = central(|k| Ok(theta_above(k, &b, tol)?.theta), k, h)?;
            worst = worst.max((got - fd).abs() / fd.abs());

            let k = margin + s * (w - 2.0 * margin);
            let got = tunneling_phase_time(k, &b, tol)?.value * k;
            let fd = central(|k| Ok(tunnel_coeffs(k, &b, tol)?.theta), k, h)?;
            worst = worst.max((got - fd).abs() / fd.abs());

            let got = scattering_phase_time(k, &b, tol)?.value * k;
            let fd = central(|k| combined_phase(k, &b, tol), k, h)?;
            worst = worst.max((got - fd).abs() / fd.abs());
        }
    }
    Ok((worst < tol.derivative, format!("max relative error {worst:.1e}")))
}

fn rates() -> Check {
    let mut worst: f64 = 0.0;
    let mut largest: f64 = 0.0;
    for i in 1..10 {
        let n = 0.1 * i as f64;
        let r = time_rates(1e-4, n)?;
        worst = worst.max((r.r_t - (1.0 + 0.5 / n)).abs()).max((r.r_t_phi - (1.0 + 1.0 / n)).abs());
        let r = time_rates(50.0, n)?;
        largest = largest.max(r.r_t).max(r.r_t_phi);
    }
    Ok((
        worst < 1e-3 && largest < 0.2,
        format!("small-alpha offset {worst:.1e}, largest rate at alpha = 50: {largest:.3}"),
    ))
}

fn plateau(tol: &Tolerances) -> Check {
    let (w, k): (f64, f64) = (1.0, 0.5);
    let b = Barrier::from_threshold(w, 1.0, 1.0)?;
    let rho = (w * w - k * k).sqrt();
    let limit = opaque_limit_time(k, &b, tol)?.value;
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let l = 31.0 / rho * 1.3f64.powi(i);
        let t = tunneling_phase_time(k, &b.with_width(l)?, tol)?.value;
        worst = worst.max((t - limit).abs() / limit);
    }
    Ok((worst < 1e-4, format!("alpha > 30: max relative distance to 2m/(k rho) {worst:.1e}")))
}

/// `k_max` grows with the width until the distribution distorts, and equals `k0` at `L = 0`.
fn kmax_table(tol: &Tolerances) -> Check {
    let l_list: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let wa_list = [1.5, 2.0, 4.0, 10.0];
    let cells = table1(1.0, &wa_list, &l_list, tol)?;
    let mut ok = true;
    let mut distorted = 0;
    for (j, _) in wa_list.iter().enumerate() {
        let mut prev = 0.0;
        let mut gone = false;
        for (i, _) in l_list.iter().enumerate() {
            match cells[i * wa_list.len() + j].record.clone()?.kmax_a {
                Kmax::Interior(k) => {
                    ok &= !gone && k >= prev - 1e-12 && (i > 0 || (k - 1.0).abs() < 1e-12);
                    prev = k;
                }
                Kmax::Distorted => {
                    gone = true;
                    distorted += 1;
                }
            }
        }
    }
    Ok((
        ok && distorted > 0,
        format!("monotone in L for every w a, {distorted} distorted cells"),
    ))
}

/// Runs every check, prints one line per check and returns the results as a table.
pub fn run_suite(tol: &Tolerances) -> Table {
    let checks: Vec<(&str, Check)> = vec![
        ("channel identities", channels(tol)),
        ("above-barrier unitarity", unitarity(tol)),
        ("symmetric unimodularity", symmetric(tol)),
        ("series equivalence", series(tol)),
        ("phase derivatives", derivatives(tol)),
        ("rate limits", rates()),
        ("opaque plateau", plateau(tol)),
        ("kmax table shape", kmax_table(tol)),
    ];
    let mut table = Table::new(["property", "result", "detail"]);
    for (name, c) in checks {
        let (ok, detail) = c.unwrap_or_else(|e| (false, e.to_string()));
        let result = if ok { "PASS" } else { "FAIL" };
        println!("{name}: {result} ({detail})");
        table.push(vec![name.to_string(), result.to_string(), format!("\"{}\"", detail.replace('"', "'"))]);
    }
    table
}
