use num_complex::Complex64;
use phasetime::multipeak::{
    first_order_coeffs, peak_schedule, peak_train, series_sums, validity_check, PeakTrain, Region,
};
use phasetime::oracle::PacketQuadrature;
use phasetime::spm::{gaussian_envelope, Component};
use phasetime::stationary::above_coeffs;
use phasetime::{Barrier, Packet, Provenance, Tolerances};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Reflection and transmission of `e^{i k1 (x - x0)}` at a potential step
/// where the wavenumber changes to `k2`, from continuity of psi and psi'.
fn step(k1: f64, k2: f64) -> (f64, f64) {
    // 1 + r = t,  k1 (1 - r) = k2 t
    let t = 2.0 * k1 / (k1 + k2);
    (t - 1.0, t)
}

/// Bounce-by-bounce amplitudes `(R_n, alpha_n, beta_n, T_n)` for `n = 1..=n_max`,
/// obtained by following one wave back and forth between the two steps.
fn bounce_oracle(k: f64, w: f64, l: f64, n_max: usize) -> Vec<[Complex64; 4]> {
    let q = (k * k - w * w).sqrt();
    let i = Complex64::i();
    let mut out = Vec::new();
    let (r0, t0) = step(k, q);
    // Right-moving wave inside, written as alpha e^{iqx}.
    let mut alpha = Complex64::new(t0, 0.0);
    let mut reflected = Complex64::new(r0, 0.0);
    for _ in 0..n_max {
        // At x = L: the local amplitude alpha e^{iqL} splits.
        let (r_l, t_l) = step(q, k);
        let at_l = alpha * (i * q * l).exp();
        let trans = at_l * t_l * (-i * k * l).exp();
        let beta = at_l * r_l * (i * q * l).exp();
        out.push([reflected, alpha, beta, trans]);
        // At x = 0 the left-moving beta e^{-iqx} splits again.
        let (r_0, t_0) = step(q, k);
        reflected = beta * t_0;
        alpha = beta * r_0;
    }
    out
}

#[test]
fn bounce_amplitudes_match_step_by_step_oracle() {
    let w = 1.0;
    let k = 2f64.sqrt() * w;
    let l = 1.0 / w;
    let b = Barrier::from_threshold(w, l, 1.0).unwrap();
    let s = first_order_coeffs(k, &b, &tol()).unwrap();
    let oracle = bounce_oracle(k, w, l, 12);
    for (j, o) in oracle.iter().enumerate() {
        let n = j + 1;
        assert!((s.r_n(n) - o[0]).norm() < 1e-14, "R_{n}");
        assert!((s.alpha_n(n) - o[1]).norm() < 1e-14, "alpha_{n}");
        assert!((s.beta_n(n) - o[2]).norm() < 1e-14, "beta_{n}");
        assert!((s.t_n(n) - o[3]).norm() < 1e-14, "T_{n}");
    }
    assert!((s.r2 - s.alpha1 * s.beta1 * (1.0 / k)).norm() < 1e-15);
    assert!((s.r2 - (s.alpha_n(2) + s.beta1)).norm() < 1e-15);
}

#[test]
fn vanishing_barrier_is_transparent() {
    let b = Barrier::from_threshold(1e-9, 2.0, 1.0).unwrap();
    let s = first_order_coeffs(1.0, &b, &tol()).unwrap();
    assert!(s.r1.norm() < 1e-15 && s.beta1.norm() < 1e-15);
    assert!((s.alpha1 - 1.0).norm() < 1e-15);
    assert!((s.t1.norm() - 1.0).abs() < 1e-15);
    let c = series_sums(1.0, &b, 1, &tol()).unwrap();
    assert!((c.t.norm() - 1.0).abs() < 1e-15 && c.r.norm() < 1e-15);
    assert_eq!(c.provenance, Provenance::Series(1));
}

#[test]
fn branch_point_is_rejected() {
    let b = Barrier::from_threshold(1.0, 1.0, 1.0).unwrap();
    assert!(first_order_coeffs(1.0, &b, &tol()).is_err());
    assert!(first_order_coeffs(0.5, &b, &tol()).is_err());
}

#[test]
fn validity_examples() {
    let b = Barrier::from_threshold(1.0, 0.0, 1.0).unwrap();
    let p = Packet::new(2.0, 1.0, 0.0, 1.0).unwrap();
    let v = validity_check(&p, &b, &tol()).unwrap();
    assert!(v.ok && v.lhs == 0.0);

    // k0 / q0 = 2 when w = sqrt(3)/2 k0.
    let k0 = 2.0;
    let b = Barrier::from_threshold(3f64.sqrt() / 2.0 * k0, 1.5, 1.0).unwrap();
    let p = Packet::new(k0, 1.5, 0.0, 1.0).unwrap();
    let v = validity_check(&p, &b, &tol()).unwrap();
    assert!(v.ok && (v.lhs - 2.0).abs() < 1e-12);

    let (p, b) = high_barrier();
    let v = validity_check(&p, &b, &tol()).unwrap();
    assert!(!v.ok && (v.lhs - 5.0 * 10f64.sqrt()).abs() < 1e-9);
    let e = peak_train(Region::Transmitted, 10.0, 0.0, &p, &b, 3, &tol()).unwrap();
    assert!(!e.validity.ok);
}

#[test]
fn incident_train_is_free_packet() {
    let b = Barrier::from_threshold(1.0, 2.0, 1.0).unwrap();
    let p = Packet::new(1.6, 2.0, -10.0, 1.0).unwrap();
    let t = -20.0;
    let train = PeakTrain::new(Region::Incident, &p, &b, 5, &tol()).unwrap();
    assert_eq!(train.components.len(), 1);
    for x in [-50.0, -42.0, -40.0, -30.0] {
        assert!((train.eval(x, t) - gaussian_envelope(x, t, &p)).norm() < 1e-15);
    }
    assert!((train.peak_time(0, -42.0) - t).abs() < 1e-12);
}

#[test]
fn transmitted_schedule() {
    let w: f64 = 1.0;
    let b = Barrier::from_threshold(w, 3.0, 1.0).unwrap();
    let p = Packet::new(1.5, 4.0, -12.0, 1.0).unwrap();
    let q0 = (1.5f64 * 1.5 - w * w).sqrt();
    let sched = peak_schedule(&p, &b, 6, &tol()).unwrap();
    let trans: Vec<_> = sched.iter().filter(|s| s.region == Region::Transmitted).collect();
    let refl: Vec<_> = sched.iter().filter(|s| s.region == Region::Reflected).collect();
    assert_eq!((trans.len(), refl.len()), (6, 6));
    let arrival = -p.x0() * p.mass() / p.k0();
    let transit = p.mass() * b.width() / q0;
    assert!((trans[0].time - (arrival + transit)).abs() < 1e-12);
    for pair in trans.windows(2).chain(refl[1..].windows(2)) {
        assert!((pair[1].time - pair[0].time - 2.0 * transit).abs() < 1e-12);
    }
    assert!((refl[0].time - arrival).abs() < 1e-12);
    assert!((refl[1].time - (arrival + 2.0 * transit)).abs() < 1e-12);
    assert!(trans.iter().all(|s| s.x == b.width()) && refl.iter().all(|s| s.x == 0.0));
}

#[test]
fn train_amplitudes_decay_geometrically() {
    let w: f64 = 1.0;
    let k0: f64 = 1.3;
    let q0 = (k0 * k0 - w * w).sqrt();
    let ratio = ((k0 - q0) / (k0 + q0)).powi(2);
    let b = Barrier::from_threshold(w, 2.0, 1.0).unwrap();
    let p = Packet::new(k0, 3.0, -9.0, 1.0).unwrap();
    for region in [Region::Reflected, Region::Alpha, Region::Beta, Region::Transmitted] {
        let train = PeakTrain::new(region, &p, &b, 8, &tol()).unwrap();
        assert_eq!(train.components.len(), 8);
        // The first reflected packet comes from the front edge alone.
        let start = if region == Region::Reflected { 2 } else { 1 };
        for j in start..8 {
            let r = train.components[j].amplitude.norm() / train.components[j - 1].amplitude.norm();
            assert!((r - ratio).abs() < 1e-14, "{}", region.label());
        }
    }
}

#[test]
fn train_amplitudes_are_first_bounce_coefficients() {
    let b = Barrier::from_threshold(1.0, 2.5, 1.0).unwrap();
    let p = Packet::new(1.4, 3.0, -9.0, 1.0).unwrap();
    let s = first_order_coeffs(p.k0(), &b, &tol()).unwrap();
    let t = PeakTrain::new(Region::Transmitted, &p, &b, 3, &tol()).unwrap();
    let r = PeakTrain::new(Region::Reflected, &p, &b, 3, &tol()).unwrap();
    for n in 1..=3 {
        assert!((t.components[n - 1].amplitude.norm() - s.t_n(n).norm()).abs() < 1e-14);
        assert!((r.components[n - 1].amplitude.norm() - s.r_n(n).norm()).abs() < 1e-14);
    }
}

/// Position and height of the maximum of `f` on `[lo, hi]`, refined by a parabola.
fn argmax(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    let h = (hi - lo) / n as f64;
    let ys: Vec<f64> = (0..=n).map(|i| f(lo + i as f64 * h)).collect();
    let i = (1..n).max_by(|&a, &b| ys[a].total_cmp(&ys[b])).unwrap();
    let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
    let shift = 0.5 * (y0 - y2) / (y0 - 2.0 * y1 + y2);
    (lo + (i as f64 + shift) * h, y1 - 0.25 * (y0 - y2) * shift)
}

/// `k0 = (sqrt(10)/3) w`, `L = 5a`, `wa = 10^4`.
fn high_barrier() -> (Packet, Barrier) {
    let a = 1.0;
    let w = 1e4 / a;
    let p = Packet::new(10f64.sqrt() / 3.0 * w, a, -10.0 * a, 1.0).unwrap();
    (p, Barrier::from_threshold(w, 5.0 * a, 1.0).unwrap())
}

/// Compares the transmitted peaks of the analytic train with the exact
/// quadrature at the moment the peak with index `n_exit` leaves the barrier.
fn compare_transmitted_peaks(p: &Packet, b: &Barrier, n_exit: usize, n_nodes: usize, pos_tol: f64, height_tol: Option<f64>) {
    let train = PeakTrain::new(Region::Transmitted, p, b, n_exit + 1, &tol()).unwrap();
    let t = train.peak_time(n_exit, b.width());
    let quad = PacketQuadrature::around_k0(p, b, n_nodes, true).unwrap();
    let a = p.width();
    for j in 0..n_exit {
        let c = train.components[j];
        let x_pred = (p.velocity() * t - c.offset) / c.scale;
        let (xa, ha) = argmax(|x| train.eval(x, t).norm_sqr(), x_pred - 2.0 * a, x_pred + 2.0 * a, 400);
        let (xq, hq) = argmax(
            |x| quad.eval(Component::Transmitted, x, t).unwrap().norm_sqr(),
            x_pred - 2.0 * a,
            x_pred + 2.0 * a,
            400,
        );
        assert!((xa - x_pred).abs() < pos_tol, "peak {j}: {xa} vs {x_pred}");
        assert!((xa - xq).abs() < pos_tol, "peak {j}: train {xa}, quadrature {xq}");
        if let Some(h) = height_tol {
            assert!((ha - hq).abs() / hq < h, "peak {j}: train {ha}, quadrature {hq}");
        }
    }
}

#[test]
fn high_barrier_snapshot_matches_quadrature() {
    let (p, b) = high_barrier();
    // Grid resolution of the comparison: 4a / 400.
    compare_transmitted_peaks(&p, &b, 2, 40_000, 0.01 * p.width(), Some(0.02));
}

#[test]
fn resolvable_train_matches_quadrature() {
    // k0 / q0 = 1.5 and L = 5a/3, so (k0/q0)(L/a) = 2.5 < pi.
    let w: f64 = 1.0;
    let k0 = (2.25 / 1.25 * w * w).sqrt();
    let a = 60.0 / w;
    let p = Packet::new(k0, a, -4.0 * a, 1.0).unwrap();
    let b = Barrier::from_threshold(w, 5.0 * a / 3.0, 1.0).unwrap();
    assert!(validity_check(&p, &b, &tol()).unwrap().ok);
    // The train freezes |T_n| at k0, so heights agree only roughly.
    compare_transmitted_peaks(&p, &b, 2, 8_000, 0.1 * a, Some(0.1));
}

#[test]
fn double_conservation_at_truncation() {
    let w = 1.0;
    let b = Barrier::from_threshold(w, 2.3, 1.0).unwrap();
    for k in [1.01, 1.1, 1.5, 3.0, 10.0] {
        let s = first_order_coeffs(k, &b, &tol()).unwrap();
        assert!(s.ratio.norm().powi(s.order as i32) < tol().series);
        let sums = s.partial_sums(s.order);
        assert!((s.peak_flux(s.order) - 1.0).abs() < 1e-10, "k={k}");
        assert!((sums.flux() - 1.0).abs() < 1e-10, "k={k}");
        let direct: f64 = (1..=s.order).map(|n| s.r_n(n).norm_sqr() + s.t_n(n).norm_sqr()).sum();
        assert!((direct - s.peak_flux(s.order)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_sums_equal_plane_wave_coefficients(k_rel in 1.001f64..6.0, wl in 0.0f64..40.0) {
        let w = 1.7;
        let b = Barrier::from_threshold(w, wl / w, 1.0).unwrap();
        let k = k_rel * w;
        let lim = first_order_coeffs(k, &b, &tol()).unwrap().limit();
        let c = above_coeffs(k, &b, &tol()).unwrap();
        prop_assert!(lim.max_deviation(&c) < 1e-12);
        prop_assert_eq!(lim.provenance, Provenance::ClosedForm);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn partial_sums_converge_geometrically(k_rel in 1.01f64..2.0, wl in 0.1f64..10.0) {
        let w = 1.0;
        let b = Barrier::from_threshold(w, wl / w, 1.0).unwrap();
        let s = first_order_coeffs(k_rel * w, &b, &tol()).unwrap();
        let lim = s.limit();
        let rho = s.ratio.norm();
        // The dropped tail is exactly geometric, so err_N / rho^N is the same for every N.
        let mut fitted: Option<f64> = None;
        for n in 1..60 {
            let err = s.partial_sums(n).max_deviation(&lim);
            if err < 1e-11 {
                break;
            }
            let c = err / rho.powi(n as i32);
            match fitted {
                None => fitted = Some(c),
                Some(c0) => prop_assert!((c - c0).abs() <= 1e-6 * c0 + 1e-12 / rho.powi(n as i32), "n={}", n),
            }
        }
        let n = s.order;
        prop_assert!(s.partial_sums(n).max_deviation(&lim) <= fitted.unwrap_or(1.0) * rho.powi(n as i32) * (1.0 + 1e-6) + 1e-12);
    }
}
