use std::f64::consts::PI;

use rustfft::FftPlanner;

use super::{build_report, lattice_convolve, max_labelled, par_map, star, EstimateReport, Member};
use super::ensemble::box_grid;
use crate::error::{Error, Result};
use crate::norms::xsb_norm;
use crate::spectral_core::{bracket, SpectrumField};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiplierFamily {
    /// `s = 1/2`, `b1 = b2 = 1/2 + eps`.
    Sharp { k: u8 },
    /// `k = 1`, `b1 = (1 - s' + s)/2 + eps`, `b2 = (2 s' + 1)/4 + eps`,
    /// `s in [0, 1/2]`, `s' in [s, 1/2]`.
    Interpolated { s: f64, s_prime: f64 },
    /// `s < 1/2`, `b1 = b2 = 1/2 - eps`.
    Crude { k: u8, s: f64 },
    /// Any exponents; no range checks.
    Custom { k: u8, s: f64, b1: f64, b2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierParams {
    pub k: u8,
    pub s: f64,
    pub b1: f64,
    pub b2: f64,
}

impl MultiplierParams {
    pub fn new(family: MultiplierFamily, eps: f64) -> Result<Self> {
        let check_k = |k: u8| {
            if (1..=3).contains(&k) {
                Ok(k)
            } else {
                Err(Error::ParameterRange(format!("multiplier index k must be 1, 2 or 3, got {k}")))
            }
        };
        match family {
            MultiplierFamily::Sharp { k } => Ok(Self {
                k: check_k(k)?,
                s: 0.5,
                b1: 0.5 + eps,
                b2: 0.5 + eps,
            }),
            MultiplierFamily::Interpolated { s, s_prime } => {
                if !(0.0..=0.5).contains(&s) {
                    return Err(Error::ParameterRange(format!("need s in [0, 1/2], got {s}")));
                }
                if !(s..=0.5).contains(&s_prime) {
                    return Err(Error::ParameterRange(format!("need s' in [s, 1/2] = [{s}, 0.5], got {s_prime}")));
                }
                Ok(Self {
                    k: 1,
                    s,
                    b1: 0.5 * (1.0 - s_prime + s) + eps,
                    b2: 0.25 * (2.0 * s_prime + 1.0) + eps,
                })
            }
            MultiplierFamily::Crude { k, s } => {
                if !(0.0..0.5).contains(&s) {
                    return Err(Error::ParameterRange(format!("need 0 <= s < 1/2, got {s}")));
                }
                Ok(Self {
                    k: check_k(k)?,
                    s,
                    b1: 0.5 - eps,
                    b2: 0.5 - eps,
                })
            }
            MultiplierFamily::Custom { k, s, b1, b2 } => Ok(Self { k: check_k(k)?, s, b1, b2 }),
        }
    }

    pub fn label(&self) -> String {
        format!("I_{}(s={},b1={},b2={})", self.k, self.s, self.b1, self.b2)
    }

    /// Right-hand side with the `L^2` factor rotated per `k`:
    /// `||h|| ||f||_{b1} ||g||_{b2}`, `||f|| ||g||_{b1} ||h||_{b2}`,
    /// `||g|| ||f||_{b1} ||h||_{b2}`.
    pub fn rhs(&self, f: &SpectrumField, g: &SpectrumField, h: &SpectrumField) -> f64 {
        let (l2, x1, x2) = match self.k {
            1 => (h, f, g),
            2 => (f, g, h),
            _ => (g, f, h),
        };
        xsb_norm(l2, 0.0, 0.0) * xsb_norm(x1, 0.0, self.b1) * xsb_norm(x2, 0.0, self.b2)
    }
}

fn check_nonneg(name: &str, f: &SpectrumField) -> Result<()> {
    match f.values().iter().position(|v| v.im != 0.0 || !(v.re >= 0.0)) {
        Some(i) => Err(Error::Precondition(format!(
            "{name} must be real and nonnegative; entry {i} is {}",
            f.values()[i]
        ))),
        None => Ok(()),
    }
}

/// `I^s_k(f, g, h) = sum m_k^s f(xi_1, tau_1) g(-xi_2, -tau_2) h(xi, tau)` over
/// `xi_1 + xi_2 = xi`, `tau_1 + tau_2 = tau` on the lattice, with measure
/// `(dxi dtau)^2 / (2 pi)^4` and `m_1 = |xi|`, `m_2 = |xi + xi_2|`, `m_3 = |xi_2|`.
/// `0^0` is taken as `1`.
pub fn i_multiplier(f: &SpectrumField, g: &SpectrumField, h: &SpectrumField, s: f64, k: u8) -> Result<f64> {
    let grid = *f.grid();
    grid.ensure_same(g.grid())?;
    grid.ensure_same(h.grid())?;
    for (name, x) in [("f", f), ("g", g), ("h", h)] {
        check_nonneg(name, x)?;
    }
    let pow = |x: f64| if s == 0.0 { 1.0 } else { x.abs().powf(s) };
    let cell = grid.dxi() * grid.dtau() / (4.0 * PI * PI);
    let total = match k {
        1 | 3 => {
            let mut gs = star(g);
            if k == 3 {
                gs = gs.map(|xi, _, v| v * pow(xi));
            }
            let conv = lattice_convolve(f, &gs);
            let hw = if k == 1 { h.map(|xi, _, v| v * pow(xi)) } else { h.clone() };
            hw.values().iter().zip(conv.values()).map(|(a, b)| (a * b).re).sum::<f64>() * cell
        }
        2 => pair_sum(f, &star(g), h, |xi1, xi2| pow(xi1 + 2.0 * xi2)) * cell * cell,
        _ => return Err(Error::ParameterRange(format!("multiplier index k must be 1, 2 or 3, got {k}"))),
    };
    Ok(total.max(0.0))
}

/// `sum_{k1, k2} w(xi_1, xi_2) sum_{m1, m2} f(k1, m1) g(k2, m2) h(k1 + k2, m1 + m2)`,
/// the `tau` sums done as a length-`2K` cyclic correlation that cannot wrap.
fn pair_sum(f: &SpectrumField, g: &SpectrumField, h: &SpectrumField, w: impl Fn(f64, f64) -> f64) -> f64 {
    let grid = *f.grid();
    let kk = grid.time_points();
    let p = 2 * kk;
    let fft = FftPlanner::new().plan_fft_forward(p);
    let rows = |x: &SpectrumField, offset: usize| -> Vec<Vec<C64>> {
        grid.xi_range()
            .map(|k| {
                let mut buf = vec![C64::new(0.0, 0.0); p];
                buf[offset..offset + kk].copy_from_slice(x.row(k));
                fft.process(&mut buf);
                buf
            })
            .collect()
    };
    // Slots: m + K/2 for f and g, so m1 + m2 sits at slot (m1 + m2) + K.
    let (fr, gr, hr) = (rows(f, 0), rows(g, 0), rows(h, kk / 2));
    let k0 = grid.xi_range().start;
    let mut total = 0.0;
    for k1 in grid.xi_range() {
        let a = &fr[(k1 - k0) as usize];
        for k2 in grid.xi_range() {
            let Some(ks) = grid.xi_slot(k1 + k2) else { continue };
            let (b, c) = (&gr[(k2 - k0) as usize], &hr[ks]);
            let mut acc = C64::new(0.0, 0.0);
            for om in 0..p {
                acc += a[om] * b[om] * c[(p - om) % p];
            }
            total += w(grid.xi(k1), grid.xi(k2)) * acc.re / p as f64;
        }
    }
    total
}

/// Maximum of `I^s_k / RHS` over the ensemble on box levels `levels`, with the
/// nonnegative triple `(|e_i|, |e_{i+37}|, |e_{i+71}|)` (indices mod size).
pub fn multiplier_ratio(members: &[Member], params: &MultiplierParams, levels: &[u32]) -> Result<EstimateReport> {
    if members.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let n = members.len();
    let mut per_level = Vec::new();
    for &r in levels {
        let grid = box_grid(r)?;
        let fields: Vec<SpectrumField> = members.iter().map(|m| m.sample_abs(grid)).collect();
        let ratios = par_map(&fields, |i, f| -> Result<Option<(f64, String)>> {
            let (g, h) = (&fields[(i + 37) % n], &fields[(i + 71) % n]);
            let rhs = params.rhs(f, g, h);
            if rhs == 0.0 {
                return Ok(None);
            }
            let lhs = i_multiplier(f, g, h, params.s, params.k)?;
            Ok(Some((lhs / rhs, format!("level {r}, member {i}: {}", members[i].label()))))
        });
        let ratios = ratios.into_iter().collect::<Result<Vec<_>>>()?;
        per_level.push(max_labelled(ratios).ok_or(Error::EmptyEnsemble)?);
    }
    build_report(params.label(), n, per_level)
}

/// Support points of the unit-box witness pair on the lattice `dxi = 1/(8N)`,
/// `dtau = 1/2`: `f = 1` on `xi_1 in [N, N+1)`, `tau_1 - xi_1^2 in [0, 1)`, and
/// `g*(xi_2, tau_2) = g(-xi_2, -tau_2) = 1` on `xi_2 in [N, N+1)`,
/// `tau_2 + xi_2^2 in [0, 1)`.
fn witness_support(n: u32) -> (f64, f64, Vec<(i64, i64)>, Vec<(i64, i64)>) {
    let (dxi, dtau) = (1.0 / (8.0 * n as f64), 0.5);
    let rows = (8 * n as i64 * n as i64)..(8 * n as i64 * (n as i64 + 1));
    let mut f = Vec::new();
    let mut g = Vec::new();
    for k in rows {
        let xi = k as f64 * dxi;
        let lo = (xi * xi / dtau).ceil() as i64;
        let hi = ((xi * xi + 1.0) / dtau).ceil() as i64;
        f.extend((lo..hi).map(|m| (k, m)));
        let lo2 = (-xi * xi / dtau).ceil() as i64;
        let hi2 = ((1.0 - xi * xi) / dtau).ceil() as i64;
        g.extend((lo2..hi2).map(|m| (k, m)));
    }
    (dxi, dtau, f, g)
}

/// Concentration family for `I_1` with `h` the indicator of the support of
/// `f * g*`, so that `I_1 = sum |xi|^s` over all support pairs. The ratio
/// behaves like `N^{s - 1/2}`; the report is indexed by `N`.
pub fn concentration_witness(params: &MultiplierParams, n_list: &[u32]) -> Result<EstimateReport> {
    if params.k != 1 {
        return Err(Error::ParameterRange("the concentration witness is built for k = 1".into()));
    }
    let mut per_level = Vec::new();
    for &n in n_list {
        let (dxi, dtau, f, g) = witness_support(n);
        let cell = dxi * dtau / (4.0 * PI * PI);
        let mut image = std::collections::HashSet::new();
        let mut lhs = 0.0;
        for &(k1, m1) in &f {
            for &(k2, m2) in &g {
                image.insert((k1 + k2, m1 + m2));
                lhs += (((k1 + k2) as f64) * dxi).abs().powf(params.s);
            }
        }
        lhs *= cell * cell;
        // Each support is a union of cells of height 1 (or 1/2) above rows.
        let box_norm = |pts: &[(i64, i64)], sign: f64, b: f64| -> f64 {
            let sum: f64 = pts
                .iter()
                .map(|&(k, m)| {
                    let xi = k as f64 * dxi;
                    bracket(m as f64 * dtau - sign * xi * xi).powf(2.0 * b)
                })
                .sum();
            (sum * cell).sqrt()
        };
        let h_l2 = (image.len() as f64 * cell).sqrt();
        // `g` itself sits at (-xi_2, -tau_2), where tau - xi^2 = -(tau_2 + xi_2^2).
        let rhs = h_l2 * box_norm(&f, 1.0, params.b1) * box_norm(&g, -1.0, params.b2);
        per_level.push((lhs / rhs, format!("N = {n}")));
    }
    build_report(format!("{} witness", params.label()), n_list.len(), per_level)
}
