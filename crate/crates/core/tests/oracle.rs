use phasetime::kmax::{find_kmax, Kmax};
use phasetime::optimize::golden_max;
use phasetime::oracle::{
    grid_propagate, initial_snapshot, match_barrier, quadrature_packet, PacketQuadrature, PeakTracker,
    PropagatorSpec,
};
use phasetime::quad::{QuadratureSpec, Rule};
use phasetime::spm::{envelope_variance, gaussian_envelope, tunneling_phase_time, Component};
use phasetime::{Barrier, Error, Grid, Packet, Snapshot, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn grid(lo: f64, hi: f64, dx: f64) -> Grid {
    Grid::new(lo, hi, ((hi - lo) / dx).round() as usize + 1).unwrap()
}

fn run(packet: &Packet, barrier: &Barrier, g: Grid, dt: f64, steps: usize, save: usize) -> Vec<Snapshot> {
    let init = initial_snapshot(packet, g, 0.0, 0.0).unwrap();
    let spec = PropagatorSpec::new(g, dt, steps).unwrap().save_every(save).centred_on(packet);
    grid_propagate(&init, barrier, &spec).unwrap()
}

#[test]
fn incident_quadrature_is_free_packet() {
    let p = Packet::new(4.0, 1.2, -3.0, 1.0).unwrap();
    let b = Barrier::from_threshold(2.0, 1.0, 1.0).unwrap();
    let q = PacketQuadrature::around_k0(&p, &b, 2000, false).unwrap();
    for (x, t) in [(-3.0, 0.0), (-1.0, 0.5), (2.0, 1.2), (-6.0, 0.3)] {
        let v = q.eval(Component::Incident, x, t).unwrap();
        assert!((v - gaussian_envelope(x, t, &p)).norm() < 1e-8, "x={x} t={t}");
    }
    // Scattered components need a momentum range on one side of the threshold.
    assert!(matches!(q.eval(Component::Transmitted, 1.0, 0.0), Err(Error::Domain { .. })));
}

#[test]
fn coarse_quadrature_is_rejected() {
    let p = Packet::new(4.0, 1.0, 0.0, 1.0).unwrap();
    let b = Barrier::from_threshold(2.0, 1.0, 1.0).unwrap();
    let spec = QuadratureSpec::new(2.0 + 1e-6, 16.0, 64, Rule::Trapezoid).unwrap();
    let r = quadrature_packet(Component::Transmitted, 60.0, 0.0, &p, &b, spec);
    assert!(matches!(r, Err(Error::Quadrature { .. })), "{r:?}");
}

#[test]
fn matching_oracle_reproduces_kmax() {
    let p = Packet::new(1.0, 1.0, 0.0, 1.0).unwrap();
    for (wa, l) in [(2.0, 0.5), (4.0, 0.1), (10.0, 1.0), (20.0, 0.3)] {
        let b = Barrier::from_threshold(wa, l, 1.0).unwrap();
        let k = find_kmax(&p, &b, &tol()).unwrap().kmax;
        let Kmax::Interior(k) = k else { panic!("wa={wa} L={l}") };
        let f = |k: f64| p.amplitude(k) * match_barrier(k, wa, 0.0, l).unwrap().t.norm();
        let k_oracle = golden_max(1.0, wa * (1.0 - 1e-9), f, 1e-12).unwrap();
        assert!((k - k_oracle).abs() < 1e-6, "wa={wa} L={l}: {k} vs {k_oracle}");
    }
}

#[test]
fn free_propagation() {
    let p = Packet::new(5.0, 1.0, -13.0, 1.0).unwrap();
    let b = Barrier::from_threshold(1.0, 0.0, 1.0).unwrap();
    let g = grid(-34.0, 18.0, 1e-3);
    let snaps = run(&p, &b, g, 5e-4, 4000, 200);
    assert_eq!(snaps.len(), 21);
    for s in &snaps {
        assert!((s.norm() - 1.0).abs() < 1e-8, "t={}", s.t);
        let (mean, var) = s.moments();
        assert!((mean - (p.x0() + p.velocity() * s.t)).abs() < 1e-4, "t={}", s.t);
        let v = envelope_variance(s.t, &p);
        assert!((var - v).abs() / v < 1e-4, "t={}: {var} vs {v}", s.t);
    }
    let tracks = PeakTracker::new(1e-3).link_cells(1000.0).track(&snaps);
    assert_eq!(tracks.len(), 1);
    assert_eq!(tracks[0].len(), snaps.len());
    let (v, _) = tracks[0].linear_fit().unwrap();
    assert!((v - p.velocity()).abs() / p.velocity() < 1e-3);
}

#[test]
fn boundary_and_overlap_checks() {
    let p = Packet::new(5.0, 1.0, -6.0, 1.0).unwrap();
    let b = Barrier::from_threshold(1.0, 0.0, 1.0).unwrap();
    let g = grid(-12.0, 2.0, 2e-3);
    let init = initial_snapshot(&p, g, 0.0, 0.0).unwrap();
    let spec = PropagatorSpec::new(g, 2e-3, 500).unwrap().centred_on(&p);
    assert!(matches!(grid_propagate(&init, &b, &spec), Err(Error::Boundary { .. })));
    assert!(initial_snapshot(&p, g, 0.0, -4.0).is_err());

    let half = Snapshot::new(0.0, g, init.psi.iter().map(|z| z * 0.5).collect()).unwrap();
    assert!(grid_propagate(&half, &b, &spec).is_err());
    assert!(PropagatorSpec::new(g, -1.0, 5).is_err());
}

/// `|rho_grid - rho_quad| <= 1e-3 rho_quad` wherever the quadrature density
/// exceeds `1e-2` of its maximum, and `<= 1e-5 max` elsewhere.
fn compare_with_quadrature(p: &Packet, b: &Barrier, snap: &Snapshot, n_nodes: usize, x_lo: f64, x_hi: f64) {
    let q = PacketQuadrature::around_k0(p, b, n_nodes, true).unwrap();
    let stride = 40;
    let mut samples = Vec::new();
    let mut i = snap.grid.index_of(x_lo);
    while snap.grid.x(i) < x_hi {
        let x = snap.grid.x(i);
        let exact = q.total(x, snap.t).unwrap().norm_sqr();
        samples.push((x, snap.psi[i].norm_sqr(), exact));
        i += stride;
    }
    let max = samples.iter().map(|s| s.2).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for (x, g, e) in &samples {
        let err = (g - e).abs();
        if *e > 1e-2 * max {
            worst = worst.max(err / e);
            assert!(err <= 1e-3 * e, "x={x}: grid {g}, quadrature {e}");
        } else {
            assert!(err <= 1e-5 * max, "x={x}: grid {g}, quadrature {e}");
        }
    }
}

#[test]
fn grid_matches_quadrature_above_barrier() {
    // k0 +- 12/a stays above w, so no momentum is clipped.
    // The launch point is far enough out that the Gaussian tail touching the
    // sharp barrier edges excites no fast components above the boundary bound.
    let p = Packet::new(10.0, 3.0, -18.0, 1.0).unwrap();
    let b = Barrier::from_threshold(5.5, 1.0, 1.0).unwrap();
    let g = grid(-36.0, 30.0, 1e-3);
    let snaps = run(&p, &b, g, 5e-4, 5200, 1600);
    for s in &snaps[1..] {
        assert!((s.norm() - 1.0).abs() < 1e-8);
        compare_with_quadrature(&p, &b, s, 4000, -34.0, 28.0);
    }
}

#[test]
fn grid_matches_quadrature_tunneling() {
    let p = Packet::new(10.0, 3.0, -14.0, 1.0).unwrap();
    let b = Barrier::from_threshold(13.0, 0.3, 1.0).unwrap();
    let g = grid(-32.0, 30.0, 1e-3);
    let snaps = run(&p, &b, g, 5e-4, 3000, 1500);
    for s in &snaps[1..] {
        assert!((s.norm() - 1.0).abs() < 1e-8);
        compare_with_quadrature(&p, &b, s, 4000, -30.0, 28.0);
    }
}

#[test]
fn tunneling_exit_follows_kmax() {
    // Non-distorted regime: the transmitted peak moves with k_max, not k0.
    let a = 1.0;
    let p = Packet::new(5.0 / a, a, -6.0 * a, 1.0).unwrap();
    let b = Barrier::from_threshold(12.0 / a, 0.3 * a, 1.0).unwrap();
    let kmax = find_kmax(&p, &b, &tol()).unwrap().kmax.value().unwrap();
    assert!(kmax > p.k0() * 1.05, "{kmax}");
    let g = grid(-30.0, 30.0, 1e-3);
    let snaps = run(&p, &b, g, 5e-4, 4000, 20);
    let tracks = PeakTracker::new(1e-6).link_cells(100.0).window(b.width() + 1.0, 25.0).track(&snaps);
    let track = tracks.iter().max_by_key(|t| t.len()).unwrap();
    let exit = track.crossing_time(b.width()).unwrap();
    let predicted = -p.mass() * p.x0() / kmax + tunneling_phase_time(kmax, &b, &tol()).unwrap().value;
    let naive = -p.mass() * p.x0() / p.k0() + tunneling_phase_time(p.k0(), &b, &tol()).unwrap().value;
    let width = p.mass() * a / kmax;
    assert!((exit - predicted).abs() < width, "exit {exit}, predicted {predicted}");
    assert!((exit - predicted).abs() < (exit - naive).abs());
}
