use std::collections::BTreeMap;

use crate::spectral_core::GridSpec;

/// Japanese bracket `<x> = sqrt(1 + x^2)`.
pub fn bracket(x: f64) -> f64 {
    x.hypot(1.0)
}

/// `floor(log2 v)` for `v >= 1`. Values within a relative `1e-12` below a
/// power of two are taken to lie on it, so lattice points that sit exactly on
/// a shell boundary in exact arithmetic (e.g. `<sqrt 3> = 2`) land in the
/// upper shell despite rounding.
pub fn shell_of(v: f64) -> u32 {
    if !(v > 1.0) {
        return 0;
    }
    let l = v.log2();
    let up = l.ceil();
    if up - l <= 1e-12 * up.max(1.0) {
        up as u32
    } else {
        l.floor() as u32
    }
}

/// Shell pair `(j, d)` with `2^j <= <xi> < 2^{j+1}` and
/// `2^d <= <tau - xi^2> < 2^{d+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicIndex {
    pub j: u32,
    pub d: u32,
}

impl DyadicIndex {
    pub fn of(xi: f64, tau: f64) -> Self {
        Self {
            j: shell_of(bracket(xi)),
            d: shell_of(bracket(tau - xi * xi)),
        }
    }
}

/// Shell assignment for every `(xi_k, tau_m)` of a grid, `xi`-major.
#[derive(Debug, Clone)]
pub struct DyadicMap {
    grid: GridSpec,
    indices: Vec<DyadicIndex>,
}

impl DyadicMap {
    pub fn get(&self, k: i64, m: i64) -> Option<DyadicIndex> {
        let ks = self.grid.xi_slot(k)?;
        let ms = self.grid.tau_slot(m)?;
        Some(self.indices[ks * self.grid.time_points() + ms])
    }

    pub fn indices(&self) -> &[DyadicIndex] {
        &self.indices
    }

    /// Number of lattice points in each occupied cell `A_j x B_d`.
    pub fn cell_counts(&self) -> BTreeMap<DyadicIndex, usize> {
        let mut out = BTreeMap::new();
        for &ix in &self.indices {
            *out.entry(ix).or_insert(0) += 1;
        }
        out
    }
}

pub fn dyadic_indices(grid: &GridSpec) -> DyadicMap {
    let mut indices = Vec::with_capacity(grid.spatial_points() * grid.time_points());
    for k in grid.xi_range() {
        let xi = grid.xi(k);
        for m in grid.tau_range() {
            indices.push(DyadicIndex::of(xi, grid.tau(m)));
        }
    }
    DyadicMap {
        grid: *grid,
        indices,
    }
}
