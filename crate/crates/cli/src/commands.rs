//! One function per subcommand. Each returns the tables it wants written.

use std::path::PathBuf;

use num_complex::Complex64;
use phasetime::kmax::{cutoff_packet, table1, Kmax};
use phasetime::multipeak::{peak_schedule, PeakTrain, Region};
use phasetime::oracle::{grid_propagate_with, initial_snapshot, PeakTracker, PropagatorSpec};
use phasetime::spm::{
    gaussian_envelope, naive_packet, opaque_limit_time, scattering_phase_time, time_rates, tunneling_phase_time,
    Component,
};
use phasetime::{Barrier, Error, Grid, Packet, Tolerances};
use rayon::prelude::*;

use crate::config::{Command, RunConfig, Sweep};
use crate::csv::{num, write_file, Table};
use crate::error::CliError;
use crate::validate;

/// Files written by a run.
#[derive(Debug, Default)]
pub struct Report {
    pub files: Vec<PathBuf>,
    /// Number of points that failed and were written as `nan`.
    pub failed: usize,
}

/// Point-level failures gathered during a sweep.
#[derive(Debug, Default)]
struct Failures {
    count: usize,
    total: usize,
    first: Option<Error>,
}

impl Failures {
    fn value<T>(&mut self, r: Result<T, Error>) -> Option<T> {
        self.total += 1;
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.count += 1;
                self.first.get_or_insert(e);
                None
            }
        }
    }

    fn into_result(self, keep_going: bool) -> Result<usize, CliError> {
        match self.first {
            Some(first) if !keep_going => Err(CliError::Points {
                failed: self.count,
                total: self.total,
                first,
            }),
            Some(first) => {
                eprintln!("warning: {} of {} points failed (first: {first})", self.count, self.total);
                Ok(self.count)
            }
            None => Ok(0),
        }
    }
}

fn or_nan(v: Option<f64>) -> f64 {
    v.unwrap_or(f64::NAN)
}

/// Runs the configured command and writes its CSV files plus the effective
/// configuration into the output directory.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let dir = PathBuf::from(&config.output);
    let tol = config.tolerances();
    let mut failures = Failures::default();
    let tables: Vec<(&str, Table)> = match config.command {
        Command::Table1 => vec![("table1.csv", table1_cmd(config, &tol, &mut failures)?)],
        Command::Rates => vec![("rates.csv", rates_cmd(config, &mut failures))],
        Command::PhaseTimes => vec![("phase_times.csv", phase_times_cmd(config, &tol, &mut failures)?)],
        Command::Peaks => vec![("peaks.csv", peaks_cmd(config, &tol)?)],
        Command::Cutoff => vec![("cutoff.csv", cutoff_cmd(config, &mut failures)?)],
        Command::Propagate => {
            let (norm, tracks) = propagate_cmd(config, &tol, &mut failures)?;
            vec![("propagate_norm.csv", norm), ("propagate_tracks.csv", tracks)]
        }
        Command::Validate => vec![("validate.csv", validate::run_suite(&tol))],
    };
    let mut report = Report::default();
    let conf_name = format!("{}.conf", config.command.name());
    report.files.push(write_file(&dir, &conf_name, &config.serialize())?);
    for (name, table) in &tables {
        report.files.push(write_file(&dir, name, &table.render())?);
    }
    report.failed = failures.into_result(config.keep_going)?;
    if config.command == Command::Validate {
        let failed = tables[0].1.rows_where(1, "FAIL");
        if failed > 0 {
            return Err(CliError::Validation(failed));
        }
    }
    Ok(report)
}

fn packet(config: &RunConfig) -> Result<Packet, CliError> {
    Ok(Packet::new(config.k0a, 1.0, config.x0, config.m)?)
}

fn barrier(config: &RunConfig, l_over_a: f64) -> Result<Barrier, CliError> {
    Ok(Barrier::from_threshold(config.wa, l_over_a, config.m)?)
}

/// `points` evenly spaced samples of `[lo, hi]`, both ends included.
fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
}

fn table1_cmd(config: &RunConfig, tol: &Tolerances, failures: &mut Failures) -> Result<Table, CliError> {
    let cells = table1(config.k0a, &config.wa_list, &config.l_list, tol)?;
    let mut header = vec!["l_over_a".to_string()];
    header.extend(config.wa_list.iter().map(|wa| format!("wa={wa}")));
    let mut table = Table::new(header);
    for (row, l) in cells.chunks(config.wa_list.len().max(1)).zip(&config.l_list) {
        let mut out = vec![num(*l)];
        for cell in row {
            out.push(match failures.value(cell.record.clone()) {
                Some(r) => match r.kmax_a {
                    Kmax::Interior(k) => num(k),
                    Kmax::Distorted => "*".to_string(),
                },
                None => num(f64::NAN),
            });
        }
        table.push(out);
    }
    Ok(table)
}

fn rates_cmd(config: &RunConfig, failures: &mut Failures) -> Table {
    let (lo, hi) = (config.alpha_min.ln(), config.alpha_max.ln());
    let alphas: Vec<f64> = linspace(lo, hi, config.points).into_iter().map(f64::exp).collect();
    let points: Vec<(f64, f64)> = config
        .n
        .iter()
        .flat_map(|&n| alphas.iter().map(move |&a| (n, a)))
        .collect();
    let results: Vec<_> = points.par_iter().map(|&(n, a)| time_rates(a, n)).collect();
    let mut table = Table::new(["n", "alpha", "r_t", "r_t_phi"]);
    for ((n, a), r) in points.into_iter().zip(results) {
        let r = failures.value(r);
        table.push_nums(&[n, a, or_nan(r.map(|r| r.r_t)), or_nan(r.map(|r| r.r_t_phi))]);
    }
    table
}

fn phase_times_cmd(config: &RunConfig, tol: &Tolerances, failures: &mut Failures) -> Result<Table, CliError> {
    let points: Vec<(f64, f64)> = match config.sweep {
        Sweep::Length => config.l_list.iter().map(|&l| (config.k0a, l)).collect(),
        Sweep::Momentum => (0..config.points)
            .map(|i| (config.wa * (i as f64 + 0.5) / config.points as f64, config.l_over_a))
            .collect(),
    };
    barrier(config, config.l_over_a)?;
    let results: Vec<_> = points
        .par_iter()
        .map(|&(k, l)| {
            let b = Barrier::from_threshold(config.wa, l, config.m)?;
            Ok::<_, Error>([
                b.opacity(k).unwrap_or(f64::NAN),
                tunneling_phase_time(k, &b, tol)?.value,
                opaque_limit_time(k, &b, tol)?.value,
                scattering_phase_time(k, &b, tol)?.value,
            ])
        })
        .collect();
    let mut table = Table::new(["k", "l_over_a", "alpha", "tunnel_phase", "opaque_limit", "scattering_phi"]);
    for ((k, l), r) in points.into_iter().zip(results) {
        let v = failures.value(r).unwrap_or([f64::NAN; 4]);
        table.push_nums(&[k, l, v[0], v[1], v[2], v[3]]);
    }
    Ok(table)
}

/// Positions where each piece of the wave function lives.
fn regions_at(x: f64, l: f64) -> [usize; 2] {
    if x < 0.0 {
        [0, 1]
    } else if x <= l {
        [2, 3]
    } else {
        [4, 4]
    }
}

fn peaks_cmd(config: &RunConfig, tol: &Tolerances) -> Result<Table, CliError> {
    let p = packet(config)?;
    let b = barrier(config, config.l_over_a)?;
    p.check_above(&b)?;
    let trains = Region::ALL
        .iter()
        .map(|&r| PeakTrain::new(r, &p, &b, config.terms, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let xs = linspace(config.x_min, config.x_max, config.points);
    let points: Vec<(f64, f64)> = config.times.iter().flat_map(|&t| xs.iter().map(move |&x| (t, x))).collect();
    let rows = points
        .par_iter()
        .map(|&(t, x)| {
            let idx = regions_at(x, b.width());
            let pieces: &[usize] = if idx[0] == idx[1] { &idx[..1] } else { &idx };
            let mut train = Complex64::new(0.0, 0.0);
            let mut naive = Complex64::new(0.0, 0.0);
            for &i in pieces {
                train += trains[i].eval(x, t);
                naive += naive_packet(Component::ALL[i], x, t, &p, &b, tol)?;
            }
            Ok::<_, Error>([t, x, train.norm_sqr(), naive.norm_sqr()])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(["t", "x", "multipeak", "naive"]);
    for r in rows {
        table.push_nums(&r);
    }
    if let Some(v) = trains.first().map(|t| t.validity) {
        if !v.ok {
            eprintln!("warning: (k0/q0)(L/a) = {:.3} exceeds pi; the peaks overlap", v.lhs);
        }
    }
    Ok(table)
}

fn cutoff_cmd(config: &RunConfig, failures: &mut Failures) -> Result<Table, CliError> {
    let p = packet(config)?;
    let k_cut = config.wa;
    let xs = linspace(config.x_min, config.x_max, config.points);
    let points: Vec<(f64, f64)> = config.times.iter().flat_map(|&t| xs.iter().map(move |&x| (t, x))).collect();
    let results: Vec<_> = points.par_iter().map(|&(t, x)| cutoff_packet(x, t, &p, k_cut)).collect();
    let mut table = Table::new(["t", "x", "full", "cut"]);
    for ((t, x), r) in points.into_iter().zip(results) {
        let cut = failures.value(r).map(|z| z.norm_sqr());
        let full = gaussian_envelope(x, t, &p).norm_sqr();
        table.push_nums(&[t, x, full, or_nan(cut)]);
    }
    Ok(table)
}

fn propagate_cmd(config: &RunConfig, tol: &Tolerances, failures: &mut Failures) -> Result<(Table, Table), CliError> {
    let p = packet(config)?;
    let b = barrier(config, config.l_over_a)?;
    let n = ((config.x_max - config.x_min) / config.dx).round() as usize + 1;
    let grid = Grid::new(config.x_min, config.x_max, n)?;
    let init = initial_snapshot(&p, grid, 0.0, 0.0)?;
    let spec = PropagatorSpec::new(grid, config.dt, config.steps)?
        .save_every(config.save_every)
        .centred_on(&p);
    // A peak moves about k0 dt / m per step; allow twice that between kept snapshots.
    let link = (2.0 * p.velocity() * config.dt * config.save_every as f64 / grid.dx()).max(5.0);
    let mut tracker = PeakTracker::new(config.prominence).link_cells(link).start();
    let l = b.width();
    let mut norm = Table::new(["t", "norm", "left", "inside", "right"]);
    let outcome = grid_propagate_with(&init, &b, &spec, |s| {
        norm.push_nums(&[
            s.t,
            s.norm(),
            s.probability_between(f64::NEG_INFINITY, 0.0),
            s.probability_between(0.0, l),
            s.probability_between(l, f64::INFINITY),
        ]);
        tracker.push(s);
        Ok(())
    });
    failures.value(outcome);
    let mut tracks = Table::new(["track", "t", "x", "height"]);
    for (i, track) in tracker.finish().iter().enumerate() {
        for pk in &track.points {
            tracks.push(vec![i.to_string(), num(pk.t), num(pk.x), num(pk.height)]);
        }
    }
    if p.check_above(&b).is_ok() {
        if let Ok(schedule) = peak_schedule(&p, &b, 3, tol) {
            for s in schedule.iter().filter(|s| s.region == Region::Transmitted) {
                eprintln!("predicted transmitted peak {} at x = L: t = {:.6}", s.index, s.time);
            }
        }
    }
    Ok((norm, tracks))
}
