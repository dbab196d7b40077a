use crate::error::{Error, Result};
use crate::spectral_core::GridSpec;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Frequency,
}

/// Complex samples on the spatial lattice, or on the `xi` lattice in
/// centred order (`values[0]` is `xi_{-M/2}`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialField {
    grid: GridSpec,
    values: Vec<C64>,
    repr: Representation,
}

impl SpatialField {
    pub fn new(grid: GridSpec, values: Vec<C64>, repr: Representation) -> Result<Self> {
        if values.len() != grid.spatial_points() {
            return Err(Error::SizeMismatch {
                expected: grid.spatial_points(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values, repr })
    }

    pub fn zeros(grid: GridSpec, repr: Representation) -> Self {
        Self {
            grid,
            values: vec![C64::new(0.0, 0.0); grid.spatial_points()],
            repr,
        }
    }

    /// Frequency-side field sampled from `profile(xi)`.
    pub fn from_spectrum_fn(grid: GridSpec, profile: impl Fn(f64) -> C64) -> Self {
        let values = grid.xi_range().map(|k| profile(grid.xi(k))).collect();
        Self {
            grid,
            values,
            repr: Representation::Frequency,
        }
    }

    pub fn from_physical_fn(grid: GridSpec, profile: impl Fn(f64) -> C64) -> Self {
        let values = (0..grid.spatial_points()).map(|j| profile(grid.x(j))).collect();
        Self {
            grid,
            values,
            repr: Representation::Physical,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
    pub fn values(&self) -> &[C64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }
    pub fn into_values(self) -> Vec<C64> {
        self.values
    }
    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn expect(&self, repr: Representation) -> Result<()> {
        if self.repr == repr {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "expected {repr:?} representation, found {:?}",
                self.repr
            )))
        }
    }

    /// Value at signed frequency index `k` (frequency representation only).
    pub fn mode(&self, k: i64) -> Option<C64> {
        self.grid.xi_slot(k).map(|i| self.values[i])
    }

    pub fn scaled(&self, c: C64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    /// Discrete `L^2` norm with the measure matching the representation.
    pub fn l2_norm(&self) -> f64 {
        let measure = match self.repr {
            Representation::Physical => self.grid.dx(),
            Representation::Frequency => self.grid.dxi() / (2.0 * std::f64::consts::PI),
        };
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * measure).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacetimeRepr {
    /// `u(x_j, t_n)`.
    Physical,
    /// `u_hat(xi_k, t_n)`, frequency in space only.
    SpatialFrequency,
}

/// Function of `(x, t)` stored time-major: row `n` holds the `M` spatial
/// samples (or spatial modes, centred) at `t_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeField {
    grid: GridSpec,
    values: Vec<C64>,
    repr: SpacetimeRepr,
}

impl SpacetimeField {
    pub fn new(grid: GridSpec, values: Vec<C64>, repr: SpacetimeRepr) -> Result<Self> {
        let expected = grid.spatial_points() * grid.time_points();
        if values.len() != expected {
            return Err(Error::SizeMismatch {
                expected,
                got: values.len(),
            });
        }
        Ok(Self { grid, values, repr })
    }

    pub fn zeros(grid: GridSpec, repr: SpacetimeRepr) -> Self {
        Self {
            grid,
            values: vec![C64::new(0.0, 0.0); grid.spatial_points() * grid.time_points()],
            repr,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
    pub fn representation(&self) -> SpacetimeRepr {
        self.repr
    }
    pub fn values(&self) -> &[C64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn expect(&self, repr: SpacetimeRepr) -> Result<()> {
        if self.repr == repr {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "expected {repr:?} representation, found {:?}",
                self.repr
            )))
        }
    }

    pub fn slice(&self, n: usize) -> &[C64] {
        let m = self.grid.spatial_points();
        &self.values[n * m..(n + 1) * m]
    }
    pub fn slice_mut(&mut self, n: usize) -> &mut [C64] {
        let m = self.grid.spatial_points();
        &mut self.values[n * m..(n + 1) * m]
    }

    /// The spatial slice at lattice time `t_n` as a [`SpatialField`].
    pub fn time_slice(&self, n: usize) -> SpatialField {
        let repr = match self.repr {
            SpacetimeRepr::Physical => Representation::Physical,
            SpacetimeRepr::SpatialFrequency => Representation::Frequency,
        };
        SpatialField {
            grid: self.grid,
            values: self.slice(n).to_vec(),
            repr,
        }
    }

    pub fn add_assign(&mut self, other: &SpacetimeField) -> Result<()> {
        self.grid.ensure_same(&other.grid)?;
        if self.repr != other.repr {
            return Err(Error::Precondition("representation mismatch".into()));
        }
        self.values
            .iter_mut()
            .zip(&other.values)
            .for_each(|(a, b)| *a += b);
        Ok(())
    }

    pub fn scaled(&self, c: C64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    /// `sup_n ||u(t_n)||_{L^2_x}`, the `C^0_t L^2_x` surrogate on the lattice.
    pub fn sup_l2(&self) -> f64 {
        let measure = match self.repr {
            SpacetimeRepr::Physical => self.grid.dx(),
            SpacetimeRepr::SpatialFrequency => self.grid.dxi() / (2.0 * std::f64::consts::PI),
        };
        (0..self.grid.time_points())
            .map(|n| {
                (self.slice(n).iter().map(|v| v.norm_sqr()).sum::<f64>() * measure).sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `sup_t ||self - other||_{L^2_x}`.
    pub fn sup_l2_distance(&self, other: &SpacetimeField) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        let mut diff = self.clone();
        diff.values
            .iter_mut()
            .zip(&other.values)
            .for_each(|(a, b)| *a -= b);
        Ok(diff.sup_l2())
    }
}

/// Row-wise view of a function on the `(xi, tau)` lattice. Every norm in
/// [`crate::norms`] is written against this trait.
pub trait SpectralRows {
    fn dxi(&self) -> f64;
    fn dtau(&self) -> f64;
    /// Calls `f(k, m_start, row)` for each stored row; `row[i]` is the value at
    /// `(xi_k, tau_{m_start + i})`. Unstored entries are zero.
    fn for_each_row(&self, f: &mut dyn FnMut(i64, i64, &[C64]));
}

/// Dense function on the full `(xi, tau)` lattice of a grid, stored
/// `xi`-major in centred order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumField {
    grid: GridSpec,
    values: Vec<C64>,
}

impl SpectrumField {
    pub fn new(grid: GridSpec, values: Vec<C64>) -> Result<Self> {
        let expected = grid.spatial_points() * grid.time_points();
        if values.len() != expected {
            return Err(Error::SizeMismatch {
                expected,
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![C64::new(0.0, 0.0); grid.spatial_points() * grid.time_points()],
        }
    }

    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> C64) -> Self {
        let mut values = Vec::with_capacity(grid.spatial_points() * grid.time_points());
        for k in grid.xi_range() {
            let xi = grid.xi(k);
            for m in grid.tau_range() {
                values.push(f(xi, grid.tau(m)));
            }
        }
        Self { grid, values }
    }

    /// Single lattice spike of amplitude `amp` at signed indices `(k, m)`.
    pub fn spike(grid: GridSpec, k: i64, m: i64, amp: C64) -> Result<Self> {
        let mut f = Self::zeros(grid);
        *f.get_mut(k, m).ok_or_else(|| {
            Error::Precondition(format!("spike index ({k}, {m}) outside the lattice"))
        })? = amp;
        Ok(f)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
    pub fn values(&self) -> &[C64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    fn slot(&self, k: i64, m: i64) -> Option<usize> {
        let ks = self.grid.xi_slot(k)?;
        let ms = self.grid.tau_slot(m)?;
        Some(ks * self.grid.time_points() + ms)
    }

    pub fn get(&self, k: i64, m: i64) -> C64 {
        self.slot(k, m)
            .map(|i| self.values[i])
            .unwrap_or(C64::new(0.0, 0.0))
    }
    pub fn get_mut(&mut self, k: i64, m: i64) -> Option<&mut C64> {
        let i = self.slot(k, m)?;
        Some(&mut self.values[i])
    }

    pub fn row(&self, k: i64) -> &[C64] {
        let kk = self.grid.time_points();
        let s = self.grid.xi_slot(k).expect("row index inside lattice");
        &self.values[s * kk..(s + 1) * kk]
    }

    /// Pointwise map `f(xi, tau, value)`.
    pub fn map(&self, mut f: impl FnMut(f64, f64, C64) -> C64) -> Self {
        let g = self.grid;
        let kk = g.time_points();
        let mut values = self.values.clone();
        for (ks, k) in g.xi_range().enumerate() {
            let xi = g.xi(k);
            for (ms, m) in g.tau_range().enumerate() {
                let v = &mut values[ks * kk + ms];
                *v = f(xi, g.tau(m), *v);
            }
        }
        Self { grid: g, values }
    }

    pub fn scaled(&self, c: C64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn add(&self, other: &SpectrumField) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    /// `|f|` as a nonnegative real-valued field.
    pub fn abs(&self) -> Self {
        self.map(|_, _, v| C64::new(v.norm(), 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.norm_sqr() == 0.0)
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// `g*(xi, tau) = conj(g(-xi, -tau))`, the spacetime transform of the
    /// conjugate function. Indices are reflected on the periodic lattice, so
    /// `-M/2` maps to itself.
    pub fn conj_reflect(&self) -> Self {
        let g = self.grid;
        let (mm, kk) = (g.spatial_points() as i64, g.time_points() as i64);
        let wrap = |i: i64, n: i64| (i + n / 2).rem_euclid(n) - n / 2;
        let mut out = Self::zeros(g);
        for k in g.xi_range() {
            for m in g.tau_range() {
                let v = self.get(wrap(-k, mm), wrap(-m, kk)).conj();
                *out.get_mut(k, m).expect("index in lattice") = v;
            }
        }
        out
    }
}

impl SpectralRows for SpectrumField {
    fn dxi(&self) -> f64 {
        self.grid.dxi()
    }
    fn dtau(&self) -> f64 {
        self.grid.dtau()
    }
    fn for_each_row(&self, f: &mut dyn FnMut(i64, i64, &[C64])) {
        let kk = self.grid.time_points();
        let m0 = self.grid.tau_range().start;
        for (ks, k) in self.grid.xi_range().enumerate() {
            f(k, m0, &self.values[ks * kk..(ks + 1) * kk]);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandRow {
    pub k: i64,
    pub m_start: i64,
    pub values: Vec<C64>,
}

/// Sparse spectrum on the unbounded `(xi, tau)` lattice with spacings
/// `(dxi, dtau)`: each stored row covers a contiguous `tau` band. Used where
/// the dense lattice would need to span `tau ~ xi^2` for large `xi`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSpectrum {
    dxi: f64,
    dtau: f64,
    rows: Vec<BandRow>,
}

impl BandedSpectrum {
    pub fn new(dxi: f64, dtau: f64, rows: Vec<BandRow>) -> Self {
        Self { dxi, dtau, rows }
    }
    pub fn rows(&self) -> &[BandRow] {
        &self.rows
    }

    pub fn map(&self, mut f: impl FnMut(f64, f64, C64) -> C64) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let xi = r.k as f64 * self.dxi;
                let values = r
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| f(xi, (r.m_start + i as i64) as f64 * self.dtau, v))
                    .collect();
                BandRow {
                    k: r.k,
                    m_start: r.m_start,
                    values,
                }
            })
            .collect();
        Self {
            dxi: self.dxi,
            dtau: self.dtau,
            rows,
        }
    }

    pub fn from_dense(f: &SpectrumField) -> Self {
        let mut rows = Vec::new();
        f.for_each_row(&mut |k, m_start, row| {
            rows.push(BandRow {
                k,
                m_start,
                values: row.to_vec(),
            })
        });
        Self::new(f.dxi(), f.dtau(), rows)
    }
}

impl SpectralRows for BandedSpectrum {
    fn dxi(&self) -> f64 {
        self.dxi
    }
    fn dtau(&self) -> f64 {
        self.dtau
    }
    fn for_each_row(&self, f: &mut dyn FnMut(i64, i64, &[C64])) {
        for r in &self.rows {
            f(r.k, r.m_start, &r.values);
        }
    }
}
