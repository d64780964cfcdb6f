//! Local maxima of `|psi|^2` and their trajectories through a snapshot sequence.

use crate::domain::Snapshot;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub t: f64,
    /// Position refined by a parabola through the three highest samples.
    pub x: f64,
    pub height: f64,
    pub prominence: f64,
}

/// Time-ordered positions of one peak.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeakTrack {
    pub points: Vec<Peak>,
}

impl PeakTrack {
    pub fn first(&self) -> &Peak {
        &self.points[0]
    }

    pub fn last(&self) -> &Peak {
        &self.points[self.points.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Least-squares line `x = x_ref + v (t - t_ref)` through the points; returns `(slope, intercept at t = 0)`.
    pub fn linear_fit(&self) -> Option<(f64, f64)> {
        let n = self.points.len();
        if n < 2 {
            return None;
        }
        let nf = n as f64;
        let mt = self.points.iter().map(|p| p.t).sum::<f64>() / nf;
        let mx = self.points.iter().map(|p| p.x).sum::<f64>() / nf;
        let stt: f64 = self.points.iter().map(|p| (p.t - mt).powi(2)).sum();
        if stt == 0.0 {
            return None;
        }
        let stx: f64 = self.points.iter().map(|p| (p.t - mt) * (p.x - mx)).sum();
        let v = stx / stt;
        Some((v, mx - v * mt))
    }

    /// Time at which the fitted line reaches `x`.
    pub fn crossing_time(&self, x: f64) -> Option<f64> {
        let (v, b) = self.linear_fit()?;
        (v != 0.0).then(|| (x - b) / v)
    }
}

/// Local maxima of `|psi|^2` with topographic prominence of at least `min_prominence`.
pub fn find_peaks(snap: &Snapshot, min_prominence: f64, window: Option<(f64, f64)>) -> Vec<Peak> {
    let d = snap.density();
    let n = d.len();
    let grid = snap.grid;
    let mut out = Vec::new();
    for i in 1..n.saturating_sub(1) {
        if !(d[i] > d[i - 1] && d[i] >= d[i + 1]) {
            continue;
        }
        let x_i = grid.x(i);
        if let Some((lo, hi)) = window {
            if x_i < lo || x_i > hi {
                continue;
            }
        }
        // Lowest point between this peak and the nearest higher sample on each side.
        let mut left_min = d[i];
        let mut j = i;
        while j > 0 {
            j -= 1;
            if d[j] > d[i] {
                break;
            }
            left_min = left_min.min(d[j]);
        }
        let mut right_min = d[i];
        let mut j = i;
        while j + 1 < n {
            j += 1;
            if d[j] > d[i] {
                break;
            }
            right_min = right_min.min(d[j]);
        }
        let prominence = d[i] - left_min.max(right_min);
        if prominence < min_prominence {
            continue;
        }
        let (y0, y1, y2) = (d[i - 1], d[i], d[i + 1]);
        let curv = y0 - 2.0 * y1 + y2;
        let shift = if curv < 0.0 { 0.5 * (y0 - y2) / curv } else { 0.0 };
        out.push(Peak {
            t: snap.t,
            x: x_i + shift * grid.dx(),
            height: y1 - 0.25 * (y0 - y2) * shift,
            prominence,
        });
    }
    out
}

/// Peak detection and frame-to-frame linking parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakTracker {
    pub min_prominence: f64,
    /// Linking radius in grid cells.
    pub link_cells: f64,
    /// Only peaks inside `[lo, hi]` are considered.
    pub window: Option<(f64, f64)>,
}

impl PeakTracker {
    pub fn new(min_prominence: f64) -> Self {
        Self {
            min_prominence,
            link_cells: 5.0,
            window: None,
        }
    }

    pub fn link_cells(mut self, cells: f64) -> Self {
        self.link_cells = cells;
        self
    }

    pub fn window(mut self, lo: f64, hi: f64) -> Self {
        self.window = Some((lo, hi));
        self
    }

    /// Links peaks across snapshots sharing one grid.
    ///
    /// A track continues with the nearest unclaimed peak within the linking
    /// radius of its predicted position: the last position, advanced by the
    /// track's last velocity once it has two points. Peaks left over start
    /// new tracks; tracks that find no peak end.
    pub fn track(&self, snapshots: &[Snapshot]) -> Vec<PeakTrack> {
        let mut builder = self.start();
        for snap in snapshots {
            builder.push(snap);
        }
        builder.finish()
    }

    /// Incremental form of [`PeakTracker::track`], fed one snapshot at a time.
    pub fn start(&self) -> TrackBuilder {
        TrackBuilder {
            tracker: *self,
            done: Vec::new(),
            active: Vec::new(),
        }
    }
}

/// Tracks under construction; see [`PeakTracker::start`].
#[derive(Debug, Clone)]
pub struct TrackBuilder {
    tracker: PeakTracker,
    done: Vec<PeakTrack>,
    active: Vec<PeakTrack>,
}

impl TrackBuilder {
    pub fn push(&mut self, snap: &Snapshot) {
        let radius = self.tracker.link_cells * snap.grid.dx();
        let peaks = find_peaks(snap, self.tracker.min_prominence, self.tracker.window);
        let mut claimed = vec![false; peaks.len()];
        // Candidate links, shortest distance first.
        let mut pairs = Vec::new();
        for (ti, track) in self.active.iter().enumerate() {
            let predicted = predict(track, snap.t);
            for (pi, p) in peaks.iter().enumerate() {
                let dist = (p.x - predicted).abs();
                if dist <= radius {
                    pairs.push((dist, ti, pi));
                }
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut extended = vec![false; self.active.len()];
        for (_, ti, pi) in pairs {
            if extended[ti] || claimed[pi] {
                continue;
            }
            self.active[ti].points.push(peaks[pi]);
            extended[ti] = true;
            claimed[pi] = true;
        }
        let mut next = Vec::with_capacity(self.active.len());
        for (track, ext) in std::mem::take(&mut self.active).into_iter().zip(extended) {
            if ext {
                next.push(track);
            } else {
                self.done.push(track);
            }
        }
        for (p, c) in peaks.into_iter().zip(claimed) {
            if !c {
                next.push(PeakTrack { points: vec![p] });
            }
        }
        self.active = next;
    }

    /// All tracks, ordered by start time and then position.
    pub fn finish(self) -> Vec<PeakTrack> {
        let mut done = self.done;
        done.extend(self.active);
        done.sort_by(|a, b| a.first().t.total_cmp(&b.first().t).then(a.first().x.total_cmp(&b.first().x)));
        done
    }
}

fn predict(track: &PeakTrack, t: f64) -> f64 {
    let n = track.points.len();
    let last = track.points[n - 1];
    if n < 2 {
        return last.x;
    }
    let prev = track.points[n - 2];
    let dt = last.t - prev.t;
    if dt == 0.0 {
        return last.x;
    }
    last.x + (last.x - prev.x) / dt * (t - last.t)
}

/// Tracks with the default linking radius of five cells.
pub fn track_peaks(snapshots: &[Snapshot], min_prominence: f64) -> Vec<PeakTrack> {
    PeakTracker::new(min_prominence).track(snapshots)
}
