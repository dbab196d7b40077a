//! Weighted Sobolev, Bourgain and sum-space norms on the `(xi, tau)` lattice.
//!
//! Measures: `dxi/(2 pi)` in frequency, `dtau/(2 pi)` in modulation, matching
//! the Parseval convention of [`crate::spectral_core`]. Weights are evaluated
//! as products of powers; squared sums go through a rescaling accumulator so
//! that large modulation exponents (`b = 100`) do not overflow.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral_core::{
    bracket, DyadicIndex, Representation, SpatialField, SpectralRows, SpectrumField,
};

/// `m_{s,a}(xi) = |xi|^a` for `|xi| <= 1`, `|xi|^s` otherwise, with `0^0 = 1`.
pub fn m_weight(xi: f64, s: f64, a: f64) -> f64 {
    let r = xi.abs();
    if r <= 1.0 {
        if a == 0.0 {
            1.0
        } else {
            r.powf(a)
        }
    } else {
        r.powf(s)
    }
}

/// Overflow-safe `sqrt(sum x_i^2)` for `x_i >= 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SumSq {
    scale: f64,
    ssq: f64,
}

impl SumSq {
    pub fn add(&mut self, x: f64) {
        let x = x.abs();
        if x == 0.0 {
            return;
        }
        if !x.is_finite() {
            self.scale = f64::INFINITY;
            return;
        }
        if self.scale < x {
            let r = self.scale / x;
            self.ssq = 1.0 + self.ssq * r * r;
            self.scale = x;
        } else if self.scale.is_finite() {
            let r = x / self.scale;
            self.ssq += r * r;
        }
    }

    pub fn value(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.scale * self.ssq.sqrt()
        }
    }
}

/// Exponent bundle for the `X`, `Y`, `Z` norms: `s = -rho`,
/// `alpha = 1/4 - rho/2 + eps_alpha`, `beta = eps_beta`,
/// `k0 = (2 rho + 2 alpha) / (1 - 2 beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    pub s: f64,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub eps_alpha: f64,
    pub eps_beta: f64,
    pub k0: f64,
}

impl WeightSpec {
    pub const DEFAULT_EPS: f64 = 0.01;

    /// Admissible bundle: `0 <= a < 1/2`, `0 <= rho <= 1/4 + a/2`.
    pub fn new(rho: f64, a: f64) -> Result<Self> {
        Self::with_eps(rho, a, Self::DEFAULT_EPS, Self::DEFAULT_EPS)
    }

    pub fn with_eps(rho: f64, a: f64, eps_alpha: f64, eps_beta: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&a) {
            return Err(Error::ParameterRange(format!("need 0 <= a < 1/2, got a = {a}")));
        }
        if !(rho >= 0.0 && rho <= 0.25 + 0.5 * a + 1e-15) {
            return Err(Error::ParameterRange(format!(
                "need 0 <= rho <= 1/4 + a/2 = {}, got rho = {rho}",
                0.25 + 0.5 * a
            )));
        }
        if !(eps_alpha > 0.0 && eps_beta > 0.0 && eps_beta < 0.5) {
            return Err(Error::ParameterRange(format!(
                "need eps_alpha > 0 and 0 < eps_beta < 1/2, got {eps_alpha}, {eps_beta}"
            )));
        }
        Ok(Self::unchecked(rho, a, eps_alpha, eps_beta))
    }

    /// Same formulas without the range checks, for experiments that probe
    /// forbidden parameters.
    pub fn unchecked(rho: f64, a: f64, eps_alpha: f64, eps_beta: f64) -> Self {
        let alpha = 0.25 - 0.5 * rho + eps_alpha;
        let beta = eps_beta;
        Self {
            s: -rho,
            a,
            b: 0.5,
            alpha,
            beta,
            eps_alpha,
            eps_beta,
            k0: (2.0 * rho + 2.0 * alpha) / (1.0 - 2.0 * beta),
        }
    }

    pub fn rho(&self) -> f64 {
        -self.s
    }

    /// Whether `(xi, tau)` lies in the `X` part of the pasting split, `d <= k0 j`.
    pub fn in_x_region(&self, xi: f64, tau: f64) -> bool {
        let ix = DyadicIndex::of(xi, tau);
        ix.d as f64 <= self.k0 * ix.j as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionRule {
    /// `f = f 1{d <= k0 j} + f 1{d > k0 j}`.
    PastingSplit,
    XOnly,
    YOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub value: f64,
    /// `(||f_1||_X, ||f_2||_Y)` of the pasting split.
    pub components: Option<(f64, f64)>,
    pub rule: DecompositionRule,
}

fn cell_measure<F: SpectralRows + ?Sized>(f: &F) -> f64 {
    f.dxi() * f.dtau() / (4.0 * PI * PI)
}

/// `|| w(xi, tau) f ||_{L^2_{xi tau}}` for an arbitrary nonnegative weight.
pub fn weighted_l2<F: SpectralRows + ?Sized>(f: &F, w: impl Fn(f64, f64) -> f64) -> f64 {
    let (dxi, dtau) = (f.dxi(), f.dtau());
    let mut acc = SumSq::default();
    f.for_each_row(&mut |k, m0, row| {
        let xi = k as f64 * dxi;
        for (i, v) in row.iter().enumerate() {
            let n = v.norm();
            if n != 0.0 {
                acc.add(n * w(xi, (m0 + i as i64) as f64 * dtau));
            }
        }
    });
    acc.value() * cell_measure(f).sqrt()
}

/// `|| <xi>^s f ||_{L^2_xi}` variant `H^{s,a}`: `|| m_{s,a} u_hat ||_{L^2_xi}`.
pub fn hsa_norm(field: &SpatialField, s: f64, a: f64) -> Result<f64> {
    field.expect(Representation::Frequency)?;
    let g = field.grid();
    let mut acc = SumSq::default();
    for (v, k) in field.values().iter().zip(g.xi_range()) {
        acc.add(v.norm() * m_weight(g.xi(k), s, a));
    }
    Ok(acc.value() * (g.dxi() / (2.0 * PI)).sqrt())
}

/// `|| <xi>^s <tau - xi^2>^b f ||_{L^2_{xi tau}}`.
pub fn xsb_norm<F: SpectralRows + ?Sized>(f: &F, s: f64, b: f64) -> f64 {
    weighted_l2(f, |xi, tau| bracket(xi).powf(s) * bracket(tau - xi * xi).powf(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DyadicMode {
    /// `l^2_j` of `2^{sj}` times `l^1_d` of `2^{bd}` cell norms.
    Besov,
    /// `l^1_d` of `2^{bd} || <xi>^s f ||_{L^2(B_d)}`.
    Underline,
}

/// Cell `L^2` norms `||w f||_{L^2(A_j x B_d)}` (measure included).
fn cell_norms<F: SpectralRows + ?Sized>(
    f: &F,
    w: impl Fn(f64, f64) -> f64,
) -> BTreeMap<DyadicIndex, f64> {
    let (dxi, dtau) = (f.dxi(), f.dtau());
    let mut cells: BTreeMap<DyadicIndex, SumSq> = BTreeMap::new();
    f.for_each_row(&mut |k, m0, row| {
        let xi = k as f64 * dxi;
        for (i, v) in row.iter().enumerate() {
            let n = v.norm();
            if n == 0.0 {
                continue;
            }
            let tau = (m0 + i as i64) as f64 * dtau;
            cells
                .entry(DyadicIndex::of(xi, tau))
                .or_default()
                .add(n * w(xi, tau));
        }
    });
    let c = cell_measure(f).sqrt();
    cells.into_iter().map(|(ix, a)| (ix, a.value() * c)).collect()
}

fn besov_from_cells(cells: &BTreeMap<DyadicIndex, f64>, s: f64, b: f64) -> f64 {
    let mut per_j: BTreeMap<u32, f64> = BTreeMap::new();
    for (ix, v) in cells {
        *per_j.entry(ix.j).or_insert(0.0) += 2f64.powf(b * ix.d as f64) * v;
    }
    let mut acc = SumSq::default();
    for (j, inner) in per_j {
        acc.add(2f64.powf(s * j as f64) * inner);
    }
    acc.value()
}

fn besov_weighted<F: SpectralRows + ?Sized>(
    f: &F,
    s: f64,
    b: f64,
    w: impl Fn(f64, f64) -> f64,
) -> f64 {
    besov_from_cells(&cell_norms(f, w), s, b)
}

pub fn xsb_dyadic_norm<F: SpectralRows + ?Sized>(f: &F, s: f64, b: f64, mode: DyadicMode) -> f64 {
    match mode {
        DyadicMode::Besov => besov_weighted(f, s, b, |_, _| 1.0),
        DyadicMode::Underline => {
            let cells = cell_norms(f, |xi, _| bracket(xi).powf(s));
            let mut per_d: BTreeMap<u32, SumSq> = BTreeMap::new();
            for (ix, v) in cells {
                per_d.entry(ix.d).or_default().add(v);
            }
            per_d
                .into_iter()
                .map(|(d, acc)| 2f64.powf(b * d as f64) * acc.value())
                .sum()
        }
    }
}

/// `||f||_X = || m_{-rho,a} f ||_{X^{0,1/2}}` (Besov mode).
pub fn x_norm<F: SpectralRows + ?Sized>(f: &F, w: &WeightSpec) -> f64 {
    besov_weighted(f, 0.0, w.b, |xi, _| m_weight(xi, w.s, w.a))
}

/// `||f||_Y = || m_{alpha,a} f ||_{X_{0,beta}} + || m_{-rho,a} f ||_{L^2_xi L^1_tau}`.
pub fn y_norm<F: SpectralRows + ?Sized>(f: &F, w: &WeightSpec) -> f64 {
    let first = weighted_l2(f, |xi, tau| {
        m_weight(xi, w.alpha, w.a) * bracket(tau - xi * xi).powf(w.beta)
    });
    first + l2xi_l1tau_norm(f, Some((w.s, w.a)))
}

/// `L^1` in `tau` (measure `dtau/2 pi`) then `L^2` in `xi`, optionally with
/// the weight `m_{s,a}(xi)`. Each `xi` row must be stored once.
pub fn l2xi_l1tau_norm<F: SpectralRows + ?Sized>(f: &F, weight: Option<(f64, f64)>) -> f64 {
    let (dxi, dtau) = (f.dxi(), f.dtau());
    let mut acc = SumSq::default();
    f.for_each_row(&mut |k, _, row| {
        let l1: f64 = row.iter().map(|v| v.norm()).sum::<f64>() * dtau / (2.0 * PI);
        let w = weight.map_or(1.0, |(s, a)| m_weight(k as f64 * dxi, s, a));
        acc.add(l1 * w);
    });
    acc.value() * (dxi / (2.0 * PI)).sqrt()
}

/// Restriction of `f` to the cells selected by `keep`, as a row view.
struct Masked<'a, F: ?Sized> {
    inner: &'a F,
    keep: &'a dyn Fn(f64, f64) -> bool,
}

impl<F: SpectralRows + ?Sized> SpectralRows for Masked<'_, F> {
    fn dxi(&self) -> f64 {
        self.inner.dxi()
    }
    fn dtau(&self) -> f64 {
        self.inner.dtau()
    }
    fn for_each_row(&self, f: &mut dyn FnMut(i64, i64, &[crate::C64])) {
        let (dxi, dtau) = (self.inner.dxi(), self.inner.dtau());
        let mut buf = Vec::new();
        self.inner.for_each_row(&mut |k, m0, row| {
            buf.clear();
            let xi = k as f64 * dxi;
            buf.extend(row.iter().enumerate().map(|(i, v)| {
                if (self.keep)(xi, (m0 + i as i64) as f64 * dtau) {
                    *v
                } else {
                    crate::C64::new(0.0, 0.0)
                }
            }));
            f(k, m0, &buf);
        });
    }
}

/// Computable upper bound for `||f||_{X+Y}`: the smaller of the pasting split
/// `||f 1{d <= k0 j}||_X + ||f 1{d > k0 j}||_Y` and the two trivial splits.
pub fn z_norm<F: SpectralRows + ?Sized>(f: &F, w: &WeightSpec) -> NormReport {
    let low = |xi: f64, tau: f64| w.in_x_region(xi, tau);
    let high = |xi: f64, tau: f64| !w.in_x_region(xi, tau);
    let x_part = x_norm(&Masked { inner: f, keep: &low }, w);
    let y_part = y_norm(&Masked { inner: f, keep: &high }, w);
    let split = x_part + y_part;
    let x_all = x_norm(f, w);
    let y_all = y_norm(f, w);
    let (value, rule) = if split <= x_all && split <= y_all {
        (split, DecompositionRule::PastingSplit)
    } else if x_all <= y_all {
        (x_all, DecompositionRule::XOnly)
    } else {
        (y_all, DecompositionRule::YOnly)
    };
    NormReport {
        value,
        components: Some((x_part, y_part)),
        rule,
    }
}

/// `f 1{d <= k0 j}` (`low = true`) or `f 1{d > k0 j}`.
pub fn pasting_mask(f: &SpectrumField, w: &WeightSpec, low: bool) -> SpectrumField {
    f.map(|xi, tau, v| {
        if w.in_x_region(xi, tau) == low {
            v
        } else {
            crate::C64::new(0.0, 0.0)
        }
    })
}

/// Largest `sqrt(n dtau / 2 pi) / 2^{d/2}` over stored rows and modulation
/// shells, `n` the number of stored samples of the row in shell `d`. By
/// Cauchy-Schwarz per shell and Minkowski in `d` this bounds
/// `||f||_{L^2 L^1} / ||f||_{X^{0,1/2}}` for every `f` with the same rows.
pub fn lemma_l2l1_constant<F: SpectralRows + ?Sized>(f: &F) -> f64 {
    let (dxi, dtau) = (f.dxi(), f.dtau());
    let mut worst = 0.0f64;
    f.for_each_row(&mut |k, m0, row| {
        let xi = k as f64 * dxi;
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for i in 0..row.len() {
            let tau = (m0 + i as i64) as f64 * dtau;
            *counts.entry(DyadicIndex::of(xi, tau).d).or_insert(0) += 1;
        }
        for (d, n) in counts {
            let c = (n as f64 * dtau / (2.0 * PI)).sqrt() / 2f64.powf(0.5 * d as f64);
            worst = worst.max(c);
        }
    });
    worst
}

/// Constant `C` in `||f||_{X_{s,b}} <= C ||f||_{X^{s,b}}`.
pub fn emb1_upper_constant(s: f64, b: f64) -> f64 {
    2f64.powf(b + s.max(0.0))
}

/// Constant `C` in `||f||_{X^{s,b'}} <= C ||f||_{X_{s,b}}`, `b' < b`.
pub fn emb1_lower_constant(s: f64, b: f64, b_prime: f64) -> f64 {
    (1.0 - 2f64.powf(-2.0 * (b - b_prime))).powf(-0.5) * 2f64.powf(-s).max(1.0)
}

/// Constant in `||f||_{X^{s,b}} <= C ||f||_{underline X^{s,b}}`; `1` for `s >= 0`.
pub fn emb2_constant(s: f64) -> f64 {
    2f64.powf(-s).max(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingCheck {
    pub name: &'static str,
    pub max_ratio: f64,
    pub constant: f64,
    pub violated: bool,
}

/// Ensemble maxima of the embedding ratios with their proven constants:
/// `L^2 L^1` vs `X^{0,1/2}`, the two halves of
/// `X^{s,b} -> X_{s,b} -> X^{s,b'}` (`s = 0`, `b = 1/2`, `b' = 1/4`),
/// Besov vs underline, and the `Z`-norm controls
/// `||m f||_{L^2 L^1} <~ ||f||_Z <~ ||f||_{X_{0,100}}`.
pub fn embedding_report<F: SpectralRows>(ensemble: &[F], w: &WeightSpec) -> Result<Vec<EmbeddingCheck>> {
    if ensemble.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let (s, b, bp) = (0.0, 0.5, 0.25);
    let mut c_l2l1 = 0.0f64;
    let mut ratios = [0.0f64; 6];
    for f in ensemble {
        let c = lemma_l2l1_constant(f);
        c_l2l1 = c_l2l1.max(c);
        let besov = xsb_dyadic_norm(f, 0.0, 0.5, DyadicMode::Besov);
        let xsb = xsb_norm(f, s, b);
        let z = z_norm(f, w).value;
        let pairs = [
            (l2xi_l1tau_norm(f, None), besov),
            (xsb, xsb_dyadic_norm(f, s, b, DyadicMode::Besov)),
            (xsb_dyadic_norm(f, s, bp, DyadicMode::Besov), xsb),
            (besov, xsb_dyadic_norm(f, s, b, DyadicMode::Underline)),
            (l2xi_l1tau_norm(f, Some((w.s, w.a))), z),
            (z, xsb_norm(f, 0.0, 100.0)),
        ];
        for (r, (num, den)) in ratios.iter_mut().zip(pairs) {
            if den > 0.0 {
                *r = r.max(num / den);
            }
        }
    }
    let consts = [
        c_l2l1,
        emb1_upper_constant(s, b),
        emb1_lower_constant(s, b, bp),
        emb2_constant(s),
        c_l2l1.max(1.0),
        (1.0 - 2f64.powf(-199.0)).powf(-0.5),
    ];
    let names = ["l2l1_embedding", "emb1_upper", "emb1_lower", "emb2", "z_controls_l2l1", "z_below_x0_100"];
    Ok(names
        .iter()
        .zip(ratios)
        .zip(consts)
        .map(|((&name, max_ratio), constant)| EmbeddingCheck {
            name,
            max_ratio,
            constant,
            violated: max_ratio > constant * (1.0 + 1e-12),
        })
        .collect())
}
