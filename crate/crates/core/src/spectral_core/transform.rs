use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::Result;
use crate::spectral_core::{
    GridSpec, Representation, SpacetimeField, SpacetimeRepr, SpatialField, SpectrumField,
};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

fn sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Continuum-normalised transforms on one grid.
///
/// Space: `u_hat(xi) = sum_j u(x_j) e^{-i xi x_j} dx`.
/// Time: `u_tilde(tau) = sum_n u(t_n) e^{+i tau t_n} dt`, so free waves
/// `e^{i(x xi - t xi^2)}` concentrate on `tau = xi^2`.
/// Inverses carry `dxi/(2 pi)` and `dtau/(2 pi)`.
pub struct Transformer {
    grid: GridSpec,
    space_fwd: Arc<dyn Fft<f64>>,
    space_inv: Arc<dyn Fft<f64>>,
    time_fwd: Arc<dyn Fft<f64>>,
    time_inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Transformer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transformer").field("grid", &self.grid).finish()
    }
}

impl Transformer {
    pub fn new(grid: GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        let m = grid.spatial_points();
        let k = grid.time_points();
        Self {
            grid,
            space_fwd: planner.plan_fft_forward(m),
            space_inv: planner.plan_fft_inverse(m),
            time_fwd: planner.plan_fft_forward(k),
            time_inv: planner.plan_fft_inverse(k),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Physical samples (length M) to centred frequency samples, in place.
    pub fn space_forward_slice(&self, buf: &mut [C64]) {
        let m = self.grid.spatial_points();
        let dx = self.grid.dx();
        self.space_fwd.process(buf);
        let raw = buf.to_vec();
        for (slot, k) in self.grid.xi_range().enumerate() {
            buf[slot] = raw[k.rem_euclid(m as i64) as usize] * (dx * sign(k));
        }
    }

    /// Centred frequency samples to physical samples, in place.
    pub fn space_inverse_slice(&self, buf: &mut [C64]) {
        let m = self.grid.spatial_points();
        let c = self.grid.dxi() / (2.0 * PI);
        let mut raw = vec![C64::new(0.0, 0.0); m];
        for (slot, k) in self.grid.xi_range().enumerate() {
            raw[k.rem_euclid(m as i64) as usize] = buf[slot] * (c * sign(k));
        }
        self.space_inv.process(&mut raw);
        buf.copy_from_slice(&raw);
    }

    /// Samples on the time lattice (length K) to centred `tau` samples, in place.
    pub fn time_forward_slice(&self, buf: &mut [C64]) {
        let kk = self.grid.time_points();
        let dt = self.grid.dt();
        self.time_inv.process(buf);
        let raw = buf.to_vec();
        for (slot, m) in self.grid.tau_range().enumerate() {
            buf[slot] = raw[m.rem_euclid(kk as i64) as usize] * (dt * sign(m));
        }
    }

    pub fn time_inverse_slice(&self, buf: &mut [C64]) {
        let kk = self.grid.time_points();
        let c = self.grid.dtau() / (2.0 * PI);
        let mut raw = vec![C64::new(0.0, 0.0); kk];
        for (slot, m) in self.grid.tau_range().enumerate() {
            raw[m.rem_euclid(kk as i64) as usize] = buf[slot] * (c * sign(m));
        }
        self.time_fwd.process(&mut raw);
        buf.copy_from_slice(&raw);
    }

    pub fn spatial(&self, field: &SpatialField, direction: Direction) -> Result<SpatialField> {
        self.grid.ensure_same(field.grid())?;
        let mut values = field.values().to_vec();
        let repr = match direction {
            Direction::Forward => {
                field.expect(Representation::Physical)?;
                self.space_forward_slice(&mut values);
                Representation::Frequency
            }
            Direction::Inverse => {
                field.expect(Representation::Frequency)?;
                self.space_inverse_slice(&mut values);
                Representation::Physical
            }
        };
        SpatialField::new(self.grid, values, repr)
    }

    /// Transform along `x` only, slice by slice in time.
    pub fn space_axis(&self, field: &SpacetimeField, direction: Direction) -> Result<SpacetimeField> {
        self.grid.ensure_same(field.grid())?;
        let (want, repr) = match direction {
            Direction::Forward => (SpacetimeRepr::Physical, SpacetimeRepr::SpatialFrequency),
            Direction::Inverse => (SpacetimeRepr::SpatialFrequency, SpacetimeRepr::Physical),
        };
        field.expect(want)?;
        let mut out = field.clone();
        for n in 0..self.grid.time_points() {
            let row = out.slice_mut(n);
            match direction {
                Direction::Forward => self.space_forward_slice(row),
                Direction::Inverse => self.space_inverse_slice(row),
            }
        }
        SpacetimeField::new(self.grid, out.values().to_vec(), repr)
    }

    /// Full spacetime transform `u(x, t) -> u_tilde(xi, tau)`. Accepts either
    /// spacetime representation.
    pub fn spacetime_forward(&self, field: &SpacetimeField) -> Result<SpectrumField> {
        self.grid.ensure_same(field.grid())?;
        let sf = match field.representation() {
            SpacetimeRepr::Physical => self.space_axis(field, Direction::Forward)?,
            SpacetimeRepr::SpatialFrequency => field.clone(),
        };
        let m = self.grid.spatial_points();
        let kk = self.grid.time_points();
        let mut out = vec![C64::new(0.0, 0.0); m * kk];
        let mut col = vec![C64::new(0.0, 0.0); kk];
        for ks in 0..m {
            for (n, c) in col.iter_mut().enumerate() {
                *c = sf.values()[n * m + ks];
            }
            self.time_forward_slice(&mut col);
            out[ks * kk..(ks + 1) * kk].copy_from_slice(&col);
        }
        SpectrumField::new(self.grid, out)
    }

    /// Inverse in time only: `u_tilde(xi, tau) -> u_hat(xi, t)`.
    pub fn time_inverse(&self, field: &SpectrumField) -> Result<SpacetimeField> {
        self.grid.ensure_same(field.grid())?;
        let m = self.grid.spatial_points();
        let kk = self.grid.time_points();
        let mut out = vec![C64::new(0.0, 0.0); m * kk];
        let mut col = vec![C64::new(0.0, 0.0); kk];
        for ks in 0..m {
            col.copy_from_slice(&field.values()[ks * kk..(ks + 1) * kk]);
            self.time_inverse_slice(&mut col);
            for (n, c) in col.iter().enumerate() {
                out[n * m + ks] = *c;
            }
        }
        SpacetimeField::new(self.grid, out, SpacetimeRepr::SpatialFrequency)
    }

    pub fn spacetime_inverse(&self, field: &SpectrumField) -> Result<SpacetimeField> {
        let sf = self.time_inverse(field)?;
        self.space_axis(&sf, Direction::Inverse)
    }
}
