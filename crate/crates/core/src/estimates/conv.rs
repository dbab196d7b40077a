use std::f64::consts::PI;

use rustfft::FftPlanner;

use crate::spectral_core::SpectrumField;
use crate::C64;

/// `g*(xi, tau) = conj(g(-xi, -tau))` with `g` taken as zero off the lattice.
pub fn star(g: &SpectrumField) -> SpectrumField {
    let grid = *g.grid();
    let mut values = Vec::with_capacity(g.values().len());
    for k in grid.xi_range() {
        for m in grid.tau_range() {
            values.push(g.get(-k, -m).conj());
        }
    }
    SpectrumField::new(grid, values).expect("sizes match the grid")
}

/// Linear (non-periodic) convolution on the `(xi, tau)` lattice with the
/// measure `dxi dtau / (2 pi)^2`, cropped back to the lattice:
/// `(f * g)(xi, tau) = sum f(xi_1, tau_1) g(xi - xi_1, tau - tau_1) dxi dtau / (2 pi)^2`.
pub fn lattice_convolve(f: &SpectrumField, g: &SpectrumField) -> SpectrumField {
    let grid = *f.grid();
    let (m, k) = (grid.spatial_points(), grid.time_points());
    let (pm, pk) = (2 * m, 2 * k);
    let mut planner = FftPlanner::new();
    let row_f = planner.plan_fft_forward(pk);
    let col_f = planner.plan_fft_forward(pm);
    let row_i = planner.plan_fft_inverse(pk);
    let col_i = planner.plan_fft_inverse(pm);

    let forward = |src: &SpectrumField| {
        let mut buf = vec![C64::new(0.0, 0.0); pm * pk];
        for i in 0..m {
            buf[i * pk..i * pk + k].copy_from_slice(&src.values()[i * k..(i + 1) * k]);
            row_f.process(&mut buf[i * pk..(i + 1) * pk]);
        }
        let mut col = vec![C64::new(0.0, 0.0); pm];
        for c in 0..pk {
            for r in 0..pm {
                col[r] = buf[r * pk + c];
            }
            col_f.process(&mut col);
            for r in 0..pm {
                buf[r * pk + c] = col[r];
            }
        }
        buf
    };
    let mut a = forward(f);
    let b = forward(g);
    a.iter_mut().zip(&b).for_each(|(x, y)| *x *= y);

    let mut col = vec![C64::new(0.0, 0.0); pm];
    for c in 0..pk {
        for r in 0..pm {
            col[r] = a[r * pk + c];
        }
        col_i.process(&mut col);
        for r in 0..pm {
            a[r * pk + c] = col[r];
        }
    }
    // Slot sums: (k1 + M/2) + (k2 + M/2) = k + M, so output slot k + M/2 sits at row M/2 + slot.
    let scale = grid.dxi() * grid.dtau() / (4.0 * PI * PI) / (pm * pk) as f64;
    let mut out = vec![C64::new(0.0, 0.0); m * k];
    for i in 0..m {
        let r = i + m / 2;
        row_i.process(&mut a[r * pk..(r + 1) * pk]);
        for j in 0..k {
            out[i * k + j] = a[r * pk + j + k / 2] * scale;
        }
    }
    SpectrumField::new(grid, out).expect("sizes match the grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_core::GridSpec;

    #[test]
    fn matches_direct_convolution() {
        let g = GridSpec::new(2.0 * PI * 2.0, 8, 2.0 * PI, 8).unwrap();
        let f = SpectrumField::from_fn(g, |x, t| C64::new((x * 1.3 + t).sin(), x * t * 0.1));
        let h = SpectrumField::from_fn(g, |x, t| C64::new((x - 0.7 * t).cos(), 0.2));
        let out = lattice_convolve(&f, &h);
        let c = g.dxi() * g.dtau() / (4.0 * PI * PI);
        for k in g.xi_range() {
            for m in g.tau_range() {
                let mut want = C64::new(0.0, 0.0);
                for k1 in g.xi_range() {
                    for m1 in g.tau_range() {
                        want += f.get(k1, m1) * h.get(k - k1, m - m1);
                    }
                }
                assert!((out.get(k, m) - want * c).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn star_is_zero_off_lattice() {
        let g = GridSpec::new(2.0 * PI, 4, 2.0 * PI, 4).unwrap();
        let f = SpectrumField::from_fn(g, |x, t| C64::new(1.0 + x, t));
        let s = star(&f);
        assert_eq!(s.get(-2, 0), C64::new(0.0, 0.0));
        assert_eq!(s.get(1, -1), f.get(-1, 1).conj());
    }
}
