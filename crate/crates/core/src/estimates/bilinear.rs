use std::f64::consts::PI;

use rand::Rng;

use super::{box_grid, build_report, lattice_convolve, max_labelled, par_map, star, EstimateReport, Member};
use crate::error::{Error, Result};
use crate::fit::log2_fit;
use crate::norms::{pasting_mask, x_norm, y_norm, z_norm, WeightSpec};
use crate::rng::member_rng;
use crate::spectral_core::{
    bracket, bump_window, bump_window_spectrum, BandRow, BandedSpectrum, GridSpec, SpectrumField, Transformer,
};
use crate::C64;

/// Pointwise division by `<tau - xi^2>`.
pub fn modulation_divide(f: &SpectrumField) -> SpectrumField {
    f.map(|xi, tau, v| v / bracket(tau - xi * xi))
}

/// Support split of the inputs: each letter says whether `u` (first) and `v`
/// (second) live on the `X` part `d <= k0 j` or on its complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    YY,
    XY,
    YX,
    XX,
}

impl Region {
    pub const ALL: [Region; 4] = [Region::YY, Region::XY, Region::YX, Region::XX];

    pub fn name(&self) -> &'static str {
        match self {
            Region::YY => "YY",
            Region::XY => "XY",
            Region::YX => "YX",
            Region::XX => "XX",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown region {s:?} (expected YY, XY, YX or XX)")))
    }

    fn low(&self) -> (bool, bool) {
        match self {
            Region::YY => (false, false),
            Region::XY => (true, false),
            Region::YX => (false, true),
            Region::XX => (true, true),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearRatio {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// `||<tau - xi^2>^{-1} (u * v*)|| / (||u|| ||v||)`, the convolution carrying
/// the measure `dxi dtau / (2 pi)^2`.
///
/// Without a region: `Z` norms throughout. With a region the inputs are first
/// masked to it; `YY`, `XY`, `YX` measure the left side in `X` and the inputs
/// in the matching `X`/`Y` norms, `XX` keeps `Z` on the left and `X` on the right.
pub fn bilinear_ratio(u: &SpectrumField, v: &SpectrumField, w: &WeightSpec, region: Option<Region>) -> Result<BilinearRatio> {
    u.grid().ensure_same(v.grid())?;
    let norm = |f: &SpectrumField, low: bool| if low { x_norm(f, w) } else { y_norm(f, w) };
    let (u, v, rhs, lhs_in_x) = match region {
        None => {
            let rhs = z_norm(u, w).value * z_norm(v, w).value;
            (u.clone(), v.clone(), rhs, false)
        }
        Some(r) => {
            let (lu, lv) = r.low();
            let (um, vm) = (pasting_mask(u, w, lu), pasting_mask(v, w, lv));
            let rhs = norm(&um, lu) * norm(&vm, lv);
            (um, vm, rhs, r != Region::XX)
        }
    };
    if !(rhs > 0.0) {
        return Err(Error::ZeroDenominator("product of the input norms".into()));
    }
    let out = modulation_divide(&lattice_convolve(&u, &star(&v)));
    let lhs = if lhs_in_x { x_norm(&out, w) } else { z_norm(&out, w).value };
    Ok(BilinearRatio { lhs, rhs, ratio: lhs / rhs })
}

/// Ensemble maximum of [`bilinear_ratio`] over the pairs `(e_i, e_{i+37})` on
/// each box level. Pairs whose masked inputs vanish are skipped.
pub fn bilinear_report(members: &[Member], w: &WeightSpec, region: Option<Region>, levels: &[u32]) -> Result<EstimateReport> {
    if members.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let n = members.len();
    let mut per_level = Vec::new();
    for &r in levels {
        let grid = box_grid(r)?;
        let fields: Vec<SpectrumField> = members.iter().map(|m| m.sample(grid)).collect();
        let ratios = par_map(&fields, |i, u| -> Result<Option<(f64, String)>> {
            let j = (i + 37) % n;
            match bilinear_ratio(u, &fields[j], w, region) {
                Ok(b) => Ok(Some((b.ratio, format!("level {r}, members {i} x {j}: {}", members[i].label())))),
                Err(Error::ZeroDenominator(_)) => Ok(None),
                Err(e) => Err(e),
            }
        });
        let ratios = ratios.into_iter().collect::<Result<Vec<_>>>()?;
        per_level.push(max_labelled(ratios).ok_or(Error::EmptyEnsemble)?);
    }
    let which = format!(
        "BE{}(rho={},a={})",
        region.map_or(String::new(), |r| format!("_{}", r.name())),
        w.rho(),
        w.a
    );
    build_report(which, n, per_level)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BilinearGrowth {
    pub rho: f64,
    pub a: f64,
    pub n_list: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub ratios: Vec<f64>,
    pub fitted_slope: f64,
    /// `2 rho - 1/2`: the low-frequency output grows like `N^{2 rho}` on a
    /// window of width `1/N`.
    pub predicted_slope: f64,
}

/// `sum_{j = lo..=hi} e^{-i theta j}`.
fn geometric(theta: f64, lo: i64, hi: i64) -> C64 {
    let n = (hi - lo + 1) as f64;
    let half = 0.5 * theta;
    let den = half.sin();
    let mag = if den.abs() < 1e-12 { n * (half * n).cos().signum() * (half).cos().signum() } else { (half * n).sin() / den };
    C64::from_polar(1.0, -theta * (lo as f64 + 0.5 * (n - 1.0))) * mag
}

/// (BE) on the two-sided high-frequency probe `u0_hat = eps0 N^rho 1{||xi| - N| <= 10}`
/// with `u = v = eta(t) S(t) u0`. The left side is bounded below by its
/// restriction to `|xi| <= 1`, evaluated from the exact spatial transform of
/// `eta^2 |S(t) u0|^2` on `dxi = 1/(4N)`; the right side is `||u_tilde||_Z^2`
/// with `u_tilde = u0_hat(xi) eta_hat(tau - xi^2)`.
pub fn f1_bilinear_growth(w: &WeightSpec, eps0: f64, n_list: &[f64]) -> Result<BilinearGrowth> {
    if n_list.len() < 3 {
        return Err(Error::Precondition(format!("need at least 3 frequencies, got {}", n_list.len())));
    }
    let rho = w.rho();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for &n in n_list {
        if !(n >= 16.0 && n.log2().fract() == 0.0) {
            return Err(Error::Precondition(format!("frequencies must be dyadic and >= 16, got {n}")));
        }
        let value = eps0 * n.powf(rho);
        lhs.push(low_output_norm(w, n, value)?);
        let u = free_band(n, value);
        rhs.push(z_norm(&u, w).value.powi(2));
    }
    let ratios: Vec<f64> = lhs.iter().zip(&rhs).map(|(l, r)| l / r).collect();
    let fit = log2_fit(n_list, &ratios)?;
    Ok(BilinearGrowth {
        rho,
        a: w.a,
        n_list: n_list.to_vec(),
        lhs,
        rhs,
        ratios,
        fitted_slope: fit.slope,
        predicted_slope: 2.0 * rho - 0.5,
    })
}

fn low_output_norm(w: &WeightSpec, n: f64, value: f64) -> Result<f64> {
    let ni = n as i64;
    let kk = ((1.25 * 8.0 * (2.0 * n + 61.0) / PI) as usize).next_power_of_two();
    let grid = GridSpec::new(8.0 * PI * n, 16 * ni as usize, 8.0, kk)?;
    let dxi = grid.dxi();
    let (lo, hi) = (4 * ni * (ni - 10), 4 * ni * (ni + 10));
    let runs = [(-hi, -lo), (lo, hi)];
    let tr = Transformer::new(grid);
    let rows: Vec<i64> = (-4 * ni..=4 * ni).collect();
    let band = par_map(&rows, |_, &k| {
        let xi = k as f64 * dxi;
        let mut col = vec![C64::new(0.0, 0.0); kk];
        for (slot, c) in col.iter_mut().enumerate() {
            let t = grid.t(slot);
            let eta = bump_window(t);
            if eta == 0.0 {
                continue;
            }
            let theta = 2.0 * xi * dxi * t;
            let mut acc = C64::new(0.0, 0.0);
            for r1 in runs {
                for r2 in runs {
                    let (a, b) = (r1.0.max(r2.0 + k), r1.1.min(r2.1 + k));
                    if a <= b {
                        acc += geometric(theta, a, b);
                    }
                }
            }
            *c = acc * C64::from_polar(eta * eta * value * value * dxi / (2.0 * PI), t * xi * xi);
        }
        tr.time_forward_slice(&mut col);
        BandRow { k, m_start: grid.tau_range().start, values: col }
    });
    let p = BandedSpectrum::new(dxi, grid.dtau(), band).map(|xi, tau, v| v / bracket(tau - xi * xi));
    Ok(z_norm(&p, w).value)
}

/// `u0_hat(xi) eta_hat(tau - xi^2)` on rows `dxi = 1/4`, bands `|tau - xi^2| <= 64`,
/// `dtau = pi/4`.
fn free_band(n: f64, value: f64) -> BandedSpectrum {
    let (dxi, dtau) = (0.25, PI / 4.0);
    let (lo, hi) = ((4.0 * (n - 10.0)) as i64, (4.0 * (n + 10.0)) as i64);
    let rows = (lo..=hi)
        .flat_map(|k| [-k, k])
        .map(|k| {
            let xi = k as f64 * dxi;
            let m0 = ((xi * xi - 64.0) / dtau).floor() as i64;
            let m1 = ((xi * xi + 64.0) / dtau).ceil() as i64;
            let values = (m0..=m1)
                .map(|m| C64::new(value * bump_window_spectrum(m as f64 * dtau - xi * xi), 0.0))
                .collect();
            BandRow { k, m_start: m0, values }
        })
        .collect();
    BandedSpectrum::new(dxi, dtau, rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionIdentityReport {
    pub samples: usize,
    /// Largest `|(tau - xi^2) - (tau_1 - xi_1^2) - (tau_2 + xi_2^2) + 2 xi xi_2|`.
    pub max_identity_defect: f64,
    /// Smallest `max{|tau - xi^2|, |tau_1 - xi_1^2|, |tau_2 + xi_2^2|} / (|xi| |xi_2|)`.
    pub min_resonance_ratio: f64,
}

/// Samples lattice triples `(xi_1, tau_1) + (xi_2, tau_2) = (xi, tau)` and checks
/// the modulation identity and the resonance lower bound.
pub fn region_identity_check(grid: &GridSpec, samples: usize, seed: u64) -> RegionIdentityReport {
    let mut rng = member_rng(seed, 0);
    let (xr, tr) = (grid.xi_range(), grid.tau_range());
    let mut defect = 0.0f64;
    let mut ratio = f64::INFINITY;
    for _ in 0..samples {
        let (k1, k2) = (rng.gen_range(xr.clone()), rng.gen_range(xr.clone()));
        let (m1, m2) = (rng.gen_range(tr.clone()), rng.gen_range(tr.clone()));
        let (xi1, xi2, tau1, tau2) = (grid.xi(k1), grid.xi(k2), grid.tau(m1), grid.tau(m2));
        let (xi, tau) = (grid.xi(k1 + k2), grid.tau(m1 + m2));
        let (l, l1, l2) = (tau - xi * xi, tau1 - xi1 * xi1, tau2 + xi2 * xi2);
        defect = defect.max((l - (l1 + l2 - 2.0 * xi * xi2)).abs());
        let scale = xi.abs() * xi2.abs();
        if scale > 0.0 {
            ratio = ratio.min(l.abs().max(l1.abs()).max(l2.abs()) / scale);
        }
    }
    RegionIdentityReport {
        samples,
        max_identity_defect: defect,
        min_resonance_ratio: ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::DecompositionRule;

    fn grid() -> GridSpec {
        box_grid(0).unwrap()
    }

    #[test]
    fn divide_keeps_paraboloid() {
        let g = GridSpec::new(2.0 * PI, 8, 2.0 * PI, 32).unwrap();
        let f = SpectrumField::from_fn(g, |_, _| C64::new(2.0, 0.0));
        let d = modulation_divide(&f);
        assert_eq!(d.get(2, 4), C64::new(2.0, 0.0));
        assert!((d.get(0, 3).re - 2.0 / 10f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn geometric_sum_matches_loop() {
        for theta in [0.0, 1e-9, 0.3, -2.0, 2.0 * PI] {
            let direct: C64 = (-3i64..=17).map(|j| C64::from_polar(1.0, -theta * j as f64)).sum();
            assert!((geometric(theta, -3, 17) - direct).norm() < 1e-9, "{theta}");
        }
    }

    #[test]
    fn scaling_covariance() {
        let w = WeightSpec::new(0.25, 0.0).unwrap();
        let e = super::super::ensemble(2, 5);
        let (u, v) = (e[0].sample(grid()), e[1].sample(grid()));
        let r1 = bilinear_ratio(&u, &v, &w, None).unwrap();
        let c = C64::new(3.0, -1.0);
        let r2 = bilinear_ratio(&u.scaled(c), &v.scaled(c), &w, None).unwrap();
        assert!((r1.ratio - r2.ratio).abs() <= 1e-12 * r1.ratio);
        assert!((r2.lhs / r1.lhs - 10.0).abs() < 1e-11);
    }

    #[test]
    fn zero_input_is_rejected() {
        let w = WeightSpec::new(0.25, 0.0).unwrap();
        let u = super::super::ensemble(1, 1)[0].sample(grid());
        let z = SpectrumField::zeros(grid());
        assert!(matches!(bilinear_ratio(&u, &z, &w, None), Err(Error::ZeroDenominator(_))));
    }

    #[test]
    fn masked_high_input_has_y_norm() {
        let w = WeightSpec::new(0.25, 0.0).unwrap();
        let u = super::super::ensemble(1, 9)[0].sample(grid());
        let high = pasting_mask(&u, &w, false);
        let z = z_norm(&high, &w);
        assert!(z.value <= y_norm(&high, &w));
        assert_eq!(z.components.unwrap().0, 0.0);
        assert!(matches!(z.rule, DecompositionRule::PastingSplit | DecompositionRule::YOnly));
        assert_eq!(z.components.unwrap().1, y_norm(&high, &w));
    }

    #[test]
    fn identity_and_resonance() {
        let rep = region_identity_check(&box_grid(2).unwrap(), 10_000, 1);
        assert!(rep.max_identity_defect <= 1e-9);
        assert!(rep.min_resonance_ratio >= 2.0 / 3.0 - 1e-12);
    }
}
