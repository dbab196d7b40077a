use std::f64::consts::PI;

use rand::Rng;

use crate::error::Result;
use crate::rng::member_rng;
use crate::spectral_core::{bracket, shell_of, GridSpec, SpectrumField};
use crate::C64;

/// Level `r` of the nested box lattice: `xi in [-4, 4)` with `dxi = 2^{-1-r}`
/// and `tau in [-32, 32)` with `dtau = 2^{-r}`. Every level contains the
/// previous one, so an ensemble member sampled on each level is the same
/// continuum function seen at a finer resolution.
pub fn box_grid(level: u32) -> Result<GridSpec> {
    let m = 16usize << level;
    let k = 64usize << level;
    GridSpec::new(PI * m as f64 / 4.0, m, PI * k as f64 / 32.0, k)
}

/// Gaussian bump in `(xi, lambda = tau - xi^2)` with a complex amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Packet {
    pub xi0: f64,
    pub lambda0: f64,
    pub width_xi: f64,
    pub width_lambda: f64,
    pub amp: C64,
}

impl Packet {
    fn eval(&self, xi: f64, tau: f64) -> C64 {
        let zx = (xi - self.xi0) / self.width_xi;
        let zl = (tau - xi * xi - self.lambda0) / self.width_lambda;
        self.amp * (-0.5 * (zx * zx + zl * zl)).exp()
    }
}

/// Continuum description of one ensemble member, sampled on any lattice.
#[derive(Debug, Clone, PartialEq)]
pub enum Member {
    /// Sum of packets times the decay `<xi>^{-1} <tau - xi^2>^{-1}`.
    Packets(Vec<Packet>),
    /// Indicator of the dyadic cell `A_j x B_d`.
    Shell { j: u32, d: u32 },
    /// `1{|xi| in [c - w, c + w]} exp(-lambda^2 / 2)`: a two-sided bump in
    /// frequency sitting on the paraboloid, like the low-regularity probes.
    Indicator { center: f64, half_width: f64 },
}

impl Member {
    pub fn label(&self) -> String {
        match self {
            Member::Packets(p) => {
                let c: Vec<String> = p
                    .iter()
                    .map(|q| format!("({:.3},{:.3})", q.xi0, q.lambda0))
                    .collect();
                format!("packets[{}]", c.join(" "))
            }
            Member::Shell { j, d } => format!("shell(j={j},d={d})"),
            Member::Indicator { center, half_width } => {
                format!("indicator(|xi| in [{}, {}])", center - half_width, center + half_width)
            }
        }
    }

    pub fn eval(&self, xi: f64, tau: f64) -> C64 {
        let lambda = tau - xi * xi;
        match self {
            Member::Packets(p) => {
                let decay = 1.0 / (bracket(xi) * bracket(lambda));
                p.iter().map(|q| q.eval(xi, tau)).sum::<C64>() * decay
            }
            Member::Shell { j, d } => {
                let inside = shell_of(bracket(xi)) == *j && shell_of(bracket(lambda)) == *d;
                C64::new(if inside { 1.0 } else { 0.0 }, 0.0)
            }
            Member::Indicator { center, half_width } => {
                if (xi.abs() - center).abs() <= *half_width {
                    C64::new((-0.5 * lambda * lambda).exp(), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }
        }
    }

    pub fn sample(&self, grid: GridSpec) -> SpectrumField {
        SpectrumField::from_fn(grid, |xi, tau| self.eval(xi, tau))
    }

    /// `|member|`, the nonnegative input the multiplier functionals expect.
    pub fn sample_abs(&self, grid: GridSpec) -> SpectrumField {
        SpectrumField::from_fn(grid, |xi, tau| C64::new(self.eval(xi, tau).norm(), 0.0))
    }
}

fn random_member(seed: u64, index: u64) -> Member {
    let mut rng = member_rng(seed, index);
    match index % 10 {
        8 => Member::Shell {
            j: rng.gen_range(0..2),
            d: rng.gen_range(0..4),
        },
        9 => {
            let half_width = 0.5 * rng.gen_range(1..3) as f64;
            let center = half_width + 0.5 * rng.gen_range(0..4) as f64;
            Member::Indicator { center, half_width }
        }
        _ => {
            let count = rng.gen_range(1..=3);
            let packets = (0..count)
                .map(|_| Packet {
                    xi0: rng.gen_range(-2.0..2.0),
                    lambda0: rng.gen_range(-8.0..8.0),
                    width_xi: rng.gen_range(0.4..0.6),
                    width_lambda: rng.gen_range(1.0..3.0),
                    amp: C64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..2.0 * PI)),
                })
                .collect();
            Member::Packets(packets)
        }
    }
}

/// Seeded ensemble: of every ten members eight are random packet sums, one is
/// a shell indicator and one an indicator-profile datum.
pub fn ensemble(size: usize, seed: u64) -> Vec<Member> {
    (0..size as u64).map(|i| random_member(seed, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::xsb_norm;

    #[test]
    fn box_levels_are_nested() {
        for r in 0..3 {
            let g = box_grid(r).unwrap();
            assert!((g.xi(g.xi_range().start) + 4.0).abs() < 1e-12);
            assert!((g.tau(g.tau_range().start) + 32.0).abs() < 1e-12);
            assert!((g.dxi() - 0.5 / (1 << r) as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn ensemble_is_reproducible_and_mixed() {
        let a = ensemble(100, 3);
        assert_eq!(a, ensemble(100, 3));
        assert_ne!(a, ensemble(100, 4));
        assert_eq!(a.iter().filter(|m| matches!(m, Member::Shell { .. })).count(), 10);
        assert_eq!(a.iter().filter(|m| matches!(m, Member::Indicator { .. })).count(), 10);
    }

    #[test]
    fn sampled_norms_converge() {
        for m in ensemble(10, 11) {
            let n: Vec<f64> = (0..3).map(|r| xsb_norm(&m.sample(box_grid(r).unwrap()), 0.0, 0.5)).collect();
            assert!(n[0] > 0.0, "{}", m.label());
            assert!((n[2] / n[1] - 1.0).abs() < 0.25, "{} {:?}", m.label(), n);
        }
    }
}
