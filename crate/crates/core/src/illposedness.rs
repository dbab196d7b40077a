//! Probe data, the second Picard iterate in closed form, and growth-exponent
//! sweeps.
//!
//! Probe spectra are piecewise constant on the `xi` lattice, so they are held
//! as index runs rather than dense arrays: a lattice fine enough to put ten
//! points in `[1/(100N), 1/(10N)]` while reaching `|xi| = N + 10` has `2^29`
//! points at `N = 1024`.
//!
//! With real data the quadratic iterate `A_2 = N(L u0, L u0)` at time
//! `0 <= t <= 1` is
//! `e^{-i t xi^2} sum_{xi_1} u0(xi_1) u0(xi_1 - xi) Phi(t, 2 xi (xi - xi_1)) dxi / 2 pi`
//! with `Phi(t, w) = (e^{i w t} - 1) / (i w)` the exact `t'` integral.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fit::log2_fit;
use crate::norms::m_weight;
use crate::spectral_core::{GridSpec, Representation, SpatialField};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `eps0 N^{-s} 1{ ||xi| - N| <= 10 }`, measured on the low window.
    F1,
    /// Same data, measured on `(1, 2)` at `t = 1 / (100 N)`.
    F2,
    /// `eps0 N^{a + 1/2} 1{ 1/N <= |xi| <= 2/N }`.
    F3,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::F1 => "F1",
            Family::F2 => "F2",
            Family::F3 => "F3",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "F1" | "1" => Ok(Family::F1),
            "F2" | "2" => Ok(Family::F2),
            "F3" | "3" => Ok(Family::F3),
            other => Err(Error::Config(format!("unknown probe family '{other}'"))),
        }
    }

    /// Exponent of the window norm of `A_2` in `N` under the `m_{s,a}` weight.
    pub fn predicted_slope(&self, s: f64, a: f64) -> f64 {
        match self {
            Family::F1 => -2.0 * s - 0.5 - a,
            Family::F2 => -2.0 * s - 1.0,
            Family::F3 => a - 0.5,
        }
    }
}

/// Inclusive run of lattice indices carrying one value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Run {
    pub start: i64,
    pub end: i64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeData {
    pub family: Family,
    pub n: f64,
    pub eps0: f64,
    pub s: f64,
    pub a: f64,
    grid: GridSpec,
    runs: Vec<Run>,
}

fn required_points(max_index: i64) -> usize {
    (2 * (max_index + 1)).max(2).unsigned_abs().next_power_of_two() as usize
}

pub fn make_probe_data(family: Family, n: f64, eps0: f64, s: f64, a: f64, grid: GridSpec) -> Result<ProbeData> {
    let dxi = grid.dxi();
    let (inner, outer, value) = match family {
        Family::F1 | Family::F2 => {
            if !(n > 10.0) {
                return Err(Error::Precondition(format!("probe frequency must exceed 10, got {n}")));
            }
            if dxi > 1.0 {
                return Err(Error::Resolution {
                    what: format!("frequency spacing {dxi} > 1 cannot resolve the width-20 support"),
                    required: format!("spatial_extent >= {}", 2.0 * PI),
                });
            }
            (n - 10.0, n + 10.0, eps0 * n.powf(-s))
        }
        Family::F3 => {
            if !(n >= 1.0) {
                return Err(Error::Precondition(format!("probe frequency must be >= 1, got {n}")));
            }
            if dxi > 0.25 / n {
                return Err(Error::Resolution {
                    what: format!("frequency spacing {dxi} > 1/(4N) cannot resolve [1/N, 2/N]"),
                    required: format!("spatial_extent >= {}", 8.0 * PI * n),
                });
            }
            (1.0 / n, 2.0 / n, eps0 * n.powf(a + 0.5))
        }
    };
    let lo = (inner / dxi - 1e-9).ceil() as i64;
    let hi = (outer / dxi + 1e-9).floor() as i64;
    let half = (grid.spatial_points() / 2) as i64;
    if hi >= half {
        return Err(Error::Resolution {
            what: format!("support reaches |xi| = {outer} beyond the lattice edge {}", half as f64 * dxi),
            required: format!(
                "spatial_points >= {} at spatial_extent {}",
                required_points(hi),
                grid.spatial_extent()
            ),
        });
    }
    Ok(ProbeData {
        family,
        n,
        eps0,
        s,
        a,
        grid,
        runs: vec![
            Run { start: -hi, end: -lo, value },
            Run { start: lo, end: hi, value },
        ],
    })
}

impl ProbeData {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn value_at(&self, k: i64) -> f64 {
        self.runs
            .iter()
            .find(|r| r.start <= k && k <= r.end)
            .map_or(0.0, |r| r.value)
    }

    /// Dense frequency-side samples. Refuses lattices above `2^24` points.
    pub fn spectrum(&self) -> Result<SpatialField> {
        if self.grid.spatial_points() > 1 << 24 {
            return Err(Error::Precondition(format!(
                "refusing to materialise {} lattice points",
                self.grid.spatial_points()
            )));
        }
        let g = self.grid;
        let values = g.xi_range().map(|k| C64::new(self.value_at(k), 0.0)).collect();
        SpatialField::new(g, values, Representation::Frequency)
    }

    /// `||u0||_{H^{s,a}}` summed over the runs.
    pub fn hsa_norm(&self, s: f64, a: f64) -> f64 {
        let dxi = self.grid.dxi();
        let sum: f64 = self
            .runs
            .iter()
            .map(|r| {
                (r.start..=r.end)
                    .map(|k| (r.value * m_weight(k as f64 * dxi, s, a)).powi(2))
                    .sum::<f64>()
            })
            .sum();
        (sum * dxi / (2.0 * PI)).sqrt()
    }

    /// Closed-form `A_2` mode at signed index `k` and time `0 <= t <= 1`.
    pub fn a2_at(&self, k: i64, t: f64) -> C64 {
        let dxi = self.grid.dxi();
        let xi = k as f64 * dxi;
        let mut acc = C64::new(0.0, 0.0);
        for r1 in &self.runs {
            for r2 in &self.runs {
                let lo = r1.start.max(r2.start + k);
                let hi = r1.end.min(r2.end + k);
                if lo <= hi {
                    acc += r1.value * r2.value * phi_sum(t, xi, dxi, lo, hi);
                }
            }
        }
        acc * C64::from_polar(dxi / (2.0 * PI), -t * xi * xi)
    }

    /// Signed indices of the lattice points inside a window.
    pub fn window_indices(&self, window: Window) -> Vec<i64> {
        let dxi = self.grid.dxi();
        let (lo, hi, closed) = window.bounds(self.n);
        let first = (lo / dxi).floor() as i64;
        let last = (hi / dxi).ceil() as i64;
        (first..=last)
            .filter(|&k| {
                let xi = k as f64 * dxi;
                if closed {
                    xi >= lo * (1.0 - 1e-12) && xi <= hi * (1.0 + 1e-12)
                } else {
                    xi > lo && xi < hi
                }
            })
            .filter(|&k| self.grid.xi_slot(k).is_some())
            .collect()
    }
}

/// `Phi(t, w) = int_0^t e^{i w t'} dt'`, with a series for `|w t| < 1e-4`.
pub fn phi(t: f64, w: f64) -> C64 {
    let x = w * t;
    if x.abs() < 1e-4 {
        let x2 = x * x;
        C64::new(1.0 - x2 / 6.0, x / 2.0 - x * x2 / 24.0) * t
    } else {
        let z = C64::from_polar(1.0, x) - 1.0;
        C64::new(z.im / w, -z.re / w)
    }
}

/// `sum_{j = lo..=hi} Phi(t, 2 xi (xi - j dxi))`. The exponentials follow a
/// geometric recurrence along `j`, reseeded exactly every 128 terms.
fn phi_sum(t: f64, xi: f64, dxi: f64, lo: i64, hi: i64) -> C64 {
    if t == 0.0 {
        return C64::new(0.0, 0.0);
    }
    if xi == 0.0 {
        return C64::new((hi - lo + 1) as f64 * t, 0.0);
    }
    const RESEED: i64 = 128;
    let omega = |j: i64| 2.0 * xi * (xi - j as f64 * dxi);
    let step = C64::from_polar(1.0, -2.0 * xi * dxi * t);
    let mut acc = C64::new(0.0, 0.0);
    let mut j = lo;
    while j <= hi {
        let end = (j + RESEED - 1).min(hi);
        let mut z = C64::from_polar(1.0, omega(j) * t);
        for jj in j..=end {
            let w = omega(jj);
            if (w * t).abs() < 1e-4 {
                acc += phi(t, w);
            } else {
                acc += C64::new(z.im / w, -(z.re - 1.0) / w);
            }
            z *= step;
        }
        j = end + 1;
    }
    acc
}

/// Dense `A_2(t)` on the probe's lattice (frequency representation).
pub fn a2_spectrum(probe: &ProbeData, t: f64) -> Result<SpatialField> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Precondition(format!("need 0 <= t <= 1, got {t}")));
    }
    let g = probe.grid;
    if g.spatial_points() > 1 << 20 {
        return Err(Error::Precondition("dense A_2 limited to 2^20 points".into()));
    }
    let values = g.xi_range().map(|k| probe.a2_at(k, t)).collect();
    SpatialField::new(g, values, Representation::Frequency)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// `[1/(100N), 1/(10N)]`.
    Low,
    /// `(1, 2)`.
    Mid,
}

impl Window {
    fn bounds(&self, n: f64) -> (f64, f64, bool) {
        match self {
            Window::Low => (0.01 / n, 0.1 / n, true),
            Window::Mid => (1.0, 2.0, false),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowWeight {
    /// `m_{s,a}(xi)`.
    Hsa { s: f64, a: f64 },
    /// `|xi|^a`.
    Power(f64),
    None,
}

impl WindowWeight {
    fn at(&self, xi: f64) -> f64 {
        match *self {
            WindowWeight::Hsa { s, a } => m_weight(xi, s, a),
            WindowWeight::Power(a) => xi.abs().powf(a),
            WindowWeight::None => 1.0,
        }
    }
}

/// Fewest lattice points a window must hold for its norm to be meaningful.
pub const MIN_WINDOW_POINTS: usize = 8;

/// Weighted `L^2_xi` norm of `A_2(t)` restricted to a window.
pub fn a2_window_norm(probe: &ProbeData, t: f64, window: Window, weight: WindowWeight) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Precondition(format!("need 0 <= t <= 1, got {t}")));
    }
    let ks = probe.window_indices(window);
    if ks.len() < MIN_WINDOW_POINTS {
        let (lo, hi, _) = window.bounds(probe.n);
        return Err(Error::Resolution {
            what: format!("window [{lo}, {hi}] holds {} lattice points", ks.len()),
            required: format!(
                "spatial_extent >= {}",
                2.0 * PI * (MIN_WINDOW_POINTS as f64 + 1.0) / (hi - lo)
            ),
        });
    }
    let dxi = probe.grid.dxi();
    let sum: f64 = ks
        .iter()
        .map(|&k| (probe.a2_at(k, t).norm() * weight.at(k as f64 * dxi)).powi(2))
        .sum();
    Ok((sum * dxi / (2.0 * PI)).sqrt())
}

/// Smallest `Re(e^{-i t xi^2} e^{2 i t' xi (xi - xi_1)})` over the low window,
/// the given times, `t'` on `nodes + 1` equispaced points of `[0, t]`, and
/// `xi_1` in the support. The phase is affine in `xi_1`, so the support
/// endpoints suffice.
pub fn positivity_margin(probe: &ProbeData, times: &[f64], nodes: usize) -> f64 {
    let dxi = probe.grid.dxi();
    let mut worst = f64::INFINITY;
    for k in probe.window_indices(Window::Low) {
        let xi = k as f64 * dxi;
        for &t in times {
            for i in 0..=nodes {
                let tp = t * i as f64 / nodes as f64;
                for r in &probe.runs {
                    for j in [r.start, r.end] {
                        let xi1 = j as f64 * dxi;
                        let theta = -t * xi * xi + 2.0 * tp * xi * (xi - xi1);
                        worst = worst.min(theta.cos());
                    }
                }
            }
        }
    }
    worst
}

/// Lattice choices per family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPolicy {
    /// Points per unit `1/N` for F1 and F3: `dxi = 1 / (points N)`.
    pub points_per_inverse_n: f64,
    /// Frequency spacing for F2.
    pub mid_dxi: f64,
    pub time_extent: f64,
    pub time_points: usize,
    /// Exclude the smallest `N` from the fit.
    pub drop_smallest: bool,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self {
            points_per_inverse_n: 128.0,
            mid_dxi: 1.0 / 64.0,
            time_extent: 4.0,
            time_points: 8,
            drop_smallest: false,
        }
    }
}

impl GridPolicy {
    pub fn grid_for(&self, family: Family, n: f64) -> Result<GridSpec> {
        let dxi = match family {
            Family::F1 | Family::F3 => 1.0 / (self.points_per_inverse_n * n),
            Family::F2 => self.mid_dxi,
        };
        let reach = match family {
            Family::F1 | Family::F2 => n + 10.0,
            Family::F3 => 2.0 / n,
        }
        .max(2.0);
        let max_index = (reach / dxi).ceil() as i64 + 1;
        GridSpec::new(2.0 * PI / dxi, required_points(max_index), self.time_extent, self.time_points)
    }

    /// Lattice times in `[0, 1]`.
    pub fn scan_times(&self, grid: &GridSpec) -> Vec<f64> {
        (0..grid.time_points())
            .map(|n| grid.t(n))
            .filter(|t| (0.0..=1.0 + 1e-12).contains(t))
            .map(|t| t.min(1.0))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub family: Family,
    pub s: f64,
    pub a: f64,
    pub eps0: f64,
    pub n_list: Vec<f64>,
    pub norms: Vec<f64>,
    pub fitted_slope: f64,
    pub predicted_slope: f64,
    /// RMS residual of the log-log fit.
    pub residual: f64,
    /// Smallest positivity margin over the F1 runs (`None` otherwise).
    pub positivity: Option<f64>,
}

/// Measured window norm for one `N`, with the family's time rule: the sup
/// over lattice times in `[0, 1]` for F1/F3, `t = 1/(100N)` for F2.
pub fn probe_norm(family: Family, n: f64, s: f64, a: f64, eps0: f64, policy: &GridPolicy) -> Result<(f64, Option<f64>)> {
    let grid = policy.grid_for(family, n)?;
    let probe = make_probe_data(family, n, eps0, s, a, grid)?;
    let weight = WindowWeight::Hsa { s, a };
    match family {
        Family::F2 => Ok((a2_window_norm(&probe, 0.01 / n, Window::Mid, weight)?, None)),
        Family::F1 | Family::F3 => {
            let times = policy.scan_times(&grid);
            let mut best = 0.0f64;
            for &t in &times {
                best = best.max(a2_window_norm(&probe, t, Window::Low, weight)?);
            }
            let pos = (family == Family::F1).then(|| positivity_margin(&probe, &times, 64));
            Ok((best, pos))
        }
    }
}

pub fn growth_sweep(family: Family, s: f64, a: f64, eps0: f64, n_list: &[f64], policy: &GridPolicy) -> Result<SweepResult> {
    if n_list.len() < 4 {
        return Err(Error::Precondition(format!(
            "a sweep needs at least 4 frequencies, got {}",
            n_list.len()
        )));
    }
    for w in n_list.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Precondition("frequencies must increase strictly".into()));
        }
    }
    for &n in n_list {
        if n.log2().fract() != 0.0 {
            return Err(Error::Precondition(format!("frequency {n} is not a power of two")));
        }
    }
    let results = map_maybe_parallel(n_list, |&n| probe_norm(family, n, s, a, eps0, policy))?;
    let norms: Vec<f64> = results.iter().map(|r| r.0).collect();
    let positivity = results
        .iter()
        .filter_map(|r| r.1)
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))));
    let skip = usize::from(policy.drop_smallest);
    let fit = log2_fit(&n_list[skip..], &norms[skip..])?;
    Ok(SweepResult {
        family,
        s,
        a,
        eps0,
        n_list: n_list.to_vec(),
        norms,
        fitted_slope: fit.slope,
        predicted_slope: family.predicted_slope(s, a),
        residual: fit.residual,
        positivity,
    })
}

#[cfg(feature = "parallel")]
fn map_maybe_parallel<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_maybe_parallel<T, R>(items: &[T], f: impl Fn(&T) -> Result<R>) -> Result<Vec<R>> {
    items.iter().map(f).collect()
}

/// Root of `slope(x)` in `[lo, hi]` by bisection; the endpoints must bracket
/// a sign change.
pub fn bisect_zero(mut lo: f64, mut hi: f64, tol: f64, mut slope: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let mut f_lo = slope(lo)?;
    let f_hi = slope(hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Precondition(format!(
            "no sign change on [{lo}, {hi}]: {f_lo}, {f_hi}"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = slope(mid)?;
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_degenerate_and_branches_agree() {
        assert_eq!(phi(0.7, 0.0), C64::new(0.7, 0.0));
        for w in [0.9e-4, 1.1e-4] {
            let direct = (C64::from_polar(1.0, w) - 1.0) / C64::new(0.0, w);
            assert!((phi(1.0, w) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn probe_support_and_resolution() {
        let policy = GridPolicy::default();
        let g = policy.grid_for(Family::F1, 16.0).unwrap();
        let p = make_probe_data(Family::F1, 16.0, 1.0, 0.0, 0.0, g).unwrap();
        let dxi = g.dxi();
        assert_eq!(p.runs()[1].start as f64 * dxi, 6.0);
        assert_eq!(p.runs()[1].end as f64 * dxi, 26.0);
        assert!(p.runs()[1].start as f64 * dxi > 1.0);
        assert_eq!(p.window_indices(Window::Low), (2..=12).collect::<Vec<_>>());

        let coarse = GridSpec::new(2.0, 64, 4.0, 8).unwrap();
        assert!(matches!(
            make_probe_data(Family::F1, 16.0, 1.0, 0.0, 0.0, coarse),
            Err(Error::Resolution { .. })
        ));
        let short = GridSpec::new(2.0 * PI, 16, 4.0, 8).unwrap();
        assert!(matches!(
            make_probe_data(Family::F1, 16.0, 1.0, 0.0, 0.0, short),
            Err(Error::Resolution { .. })
        ));
    }

    #[test]
    fn f1_norm_is_eps0_times_root_40_over_2pi() {
        let n = 64.0;
        let g = GridPolicy::default().grid_for(Family::F1, n).unwrap();
        let p = make_probe_data(Family::F1, n, 0.01, -0.25, 0.0, g).unwrap();
        // Direct sum over the support: 2 * (20 / dxi + 1) points of
        // (eps0 N^{1/4} |xi|^{-1/4})^2.
        let dxi = g.dxi();
        let lo = (54.0 / dxi).round() as i64;
        let hi = (74.0 / dxi).round() as i64;
        let direct: f64 = (lo..=hi)
            .map(|k| (0.01 * 64f64.powf(0.25) * (k as f64 * dxi).powf(-0.25)).powi(2))
            .sum::<f64>()
            * 2.0
            * dxi
            / (2.0 * PI);
        assert!((p.hsa_norm(-0.25, 0.0) - direct.sqrt()).abs() < 1e-12);
        let ratio = p.hsa_norm(-0.25, 0.0) / (0.01 * (40.0 / (2.0 * PI)).sqrt());
        assert!((ratio - 1.0).abs() < 10.0 / n, "{ratio}");
    }

    #[test]
    fn f3_norm_is_independent_of_s() {
        let g = GridPolicy::default().grid_for(Family::F3, 32.0).unwrap();
        let p = make_probe_data(Family::F3, 32.0, 0.1, -3.0, 0.3, g).unwrap();
        let q = make_probe_data(Family::F3, 32.0, 0.1, 2.0, 0.3, g).unwrap();
        assert_eq!(p.hsa_norm(-3.0, 0.3), q.hsa_norm(2.0, 0.3));
    }

    #[test]
    fn a2_matches_direct_trapezoid_in_t_prime() {
        let n = 16.0;
        let policy = GridPolicy {
            points_per_inverse_n: 16.0,
            ..GridPolicy::default()
        };
        let g = policy.grid_for(Family::F1, n).unwrap();
        let p = make_probe_data(Family::F1, n, 1.0, 0.0, 0.0, g).unwrap();
        let dxi = g.dxi();
        let t = 1.0;
        for k in [1i64, 3] {
            let xi = k as f64 * dxi;
            let nodes = 4096;
            let h = t / nodes as f64;
            let mut acc = C64::new(0.0, 0.0);
            for r in p.runs() {
                for j in r.start..=r.end {
                    let c = r.value * p.value_at(j - k);
                    if c == 0.0 {
                        continue;
                    }
                    let w = 2.0 * xi * (xi - j as f64 * dxi);
                    let mut q = C64::new(0.0, 0.0);
                    for i in 0..=nodes {
                        let wt = if i == 0 || i == nodes { 0.5 } else { 1.0 };
                        q += C64::from_polar(wt * h, w * i as f64 * h);
                    }
                    acc += c * q;
                }
            }
            let want = acc * C64::from_polar(dxi / (2.0 * PI), -t * xi * xi);
            let got = p.a2_at(k, t);
            assert!((got - want).norm() / want.norm() < 1e-8, "k={k}");
        }
    }

    #[test]
    fn positivity_by_brute_force() {
        let n = 16.0;
        let g = GridPolicy::default().grid_for(Family::F1, n).unwrap();
        let p = make_probe_data(Family::F1, n, 1.0, 0.0, 0.0, g).unwrap();
        let dxi = g.dxi();
        let mut worst = f64::INFINITY;
        for k in p.window_indices(Window::Low) {
            let xi = k as f64 * dxi;
            for r in p.runs() {
                for j in (r.start..=r.end).step_by(97).chain([r.end]) {
                    for (t, tp) in [(1.0, 1.0), (1.0, 0.5), (0.5, 0.25), (1.0, 0.0)] {
                        let theta = -t * xi * xi + 2.0 * tp * xi * (xi - j as f64 * dxi);
                        worst = worst.min(theta.cos());
                    }
                }
            }
        }
        let margin = positivity_margin(&p, &[0.5, 1.0], 64);
        assert!(margin > 0.5);
        assert!(margin <= worst + 1e-15);
    }

    #[test]
    fn quadratic_in_eps0() {
        let policy = GridPolicy::default();
        let (a, _) = probe_norm(Family::F1, 32.0, 0.0, 0.0, 0.1, &policy).unwrap();
        let (b, _) = probe_norm(Family::F1, 32.0, 0.0, 0.0, 0.2, &policy).unwrap();
        assert!((b / a - 4.0).abs() < 1e-9);
    }

    #[test]
    fn sweep_rejects_short_or_unsorted_lists() {
        let p = GridPolicy::default();
        assert!(growth_sweep(Family::F1, 0.0, 0.0, 0.1, &[16.0, 32.0, 64.0], &p).is_err());
        assert!(growth_sweep(Family::F1, 0.0, 0.0, 0.1, &[16.0, 64.0, 32.0, 128.0], &p).is_err());
    }

    #[test]
    fn bisection_finds_linear_root() {
        let r = bisect_zero(-1.0, 0.0, 1e-6, |x| Ok(-2.0 * x - 0.5)).unwrap();
        assert!((r + 0.25).abs() < 1e-6);
    }
}
