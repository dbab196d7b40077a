use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic lattice on `[-L/2, L/2) x [-T/2, T/2)` and its dual
/// frequency lattice `xi_k = k dxi`, `tau_m = m dtau` with
/// `k in [-M/2, M/2)`, `m in [-K/2, K/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    spatial_extent: f64,
    spatial_points: usize,
    time_extent: f64,
    time_points: usize,
}

impl GridSpec {
    /// Smallest admissible time window: the bump is supported in `[-2, 2]`.
    pub const MIN_TIME_EXTENT: f64 = 4.0;

    pub fn new(
        spatial_extent: f64,
        spatial_points: usize,
        time_extent: f64,
        time_points: usize,
    ) -> Result<Self> {
        if !(spatial_extent.is_finite() && spatial_extent > 0.0) {
            return Err(Error::Config(format!(
                "spatial extent must be positive, got {spatial_extent}"
            )));
        }
        if !(time_extent.is_finite() && time_extent >= Self::MIN_TIME_EXTENT) {
            return Err(Error::Config(format!(
                "time extent must be at least {}, got {time_extent}",
                Self::MIN_TIME_EXTENT
            )));
        }
        for (name, n) in [("spatial", spatial_points), ("time", time_points)] {
            if n < 2 || !n.is_power_of_two() {
                return Err(Error::Config(format!(
                    "{name} point count must be a power of two >= 2, got {n}"
                )));
            }
        }
        Ok(Self {
            spatial_extent,
            spatial_points,
            time_extent,
            time_points,
        })
    }

    /// Grid of the rescaled problem `(lambda L, M, lambda^2 T, K)`.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Config(format!("scale must be positive, got {lambda}")));
        }
        Self::new(
            lambda * self.spatial_extent,
            self.spatial_points,
            lambda * lambda * self.time_extent,
            self.time_points,
        )
    }

    pub fn spatial_extent(&self) -> f64 {
        self.spatial_extent
    }
    pub fn spatial_points(&self) -> usize {
        self.spatial_points
    }
    pub fn time_extent(&self) -> f64 {
        self.time_extent
    }
    pub fn time_points(&self) -> usize {
        self.time_points
    }

    pub fn dx(&self) -> f64 {
        self.spatial_extent / self.spatial_points as f64
    }
    pub fn dt(&self) -> f64 {
        self.time_extent / self.time_points as f64
    }
    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.spatial_extent
    }
    pub fn dtau(&self) -> f64 {
        2.0 * PI / self.time_extent
    }

    /// Signed frequency index range `[-M/2, M/2)`.
    pub fn xi_range(&self) -> std::ops::Range<i64> {
        let h = (self.spatial_points / 2) as i64;
        -h..h
    }
    pub fn tau_range(&self) -> std::ops::Range<i64> {
        let h = (self.time_points / 2) as i64;
        -h..h
    }
    pub fn xi(&self, k: i64) -> f64 {
        k as f64 * self.dxi()
    }
    pub fn tau(&self, m: i64) -> f64 {
        m as f64 * self.dtau()
    }
    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.spatial_extent + j as f64 * self.dx()
    }
    pub fn t(&self, n: usize) -> f64 {
        -0.5 * self.time_extent + n as f64 * self.dt()
    }

    /// Storage position of the signed spatial frequency index `k`.
    pub fn xi_slot(&self, k: i64) -> Option<usize> {
        let r = self.xi_range();
        r.contains(&k).then(|| (k - r.start) as usize)
    }
    pub fn tau_slot(&self, m: i64) -> Option<usize> {
        let r = self.tau_range();
        r.contains(&m).then(|| (m - r.start) as usize)
    }

    /// Index of the time sample `t = 0`.
    pub fn time_origin(&self) -> usize {
        self.time_points / 2
    }

    pub fn ensure_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}
