//! Free propagator, time-windowed Duhamel operator, Picard tower, small-data
//! fixed point and the scaling symmetry for `i u_t + u_xx = u conj(u)`.
//!
//! Spacetime solutions are carried as `u_hat(xi_k, t_n)`
//! ([`SpacetimeRepr::SpatialFrequency`]).

use std::borrow::Cow;

use crate::error::{Error, Result};
use crate::spectral_core::{
    bump_window, Direction, GridSpec, Representation, SpacetimeField, SpacetimeRepr,
    SpatialField, Transformer,
};
use crate::C64;

fn frequency_rep(u0: &SpatialField) -> Result<Cow<'_, SpatialField>> {
    match u0.representation() {
        Representation::Frequency => Ok(Cow::Borrowed(u0)),
        Representation::Physical => Ok(Cow::Owned(
            Transformer::new(*u0.grid()).spatial(u0, Direction::Forward)?,
        )),
    }
}

fn spatial_frequency<'a>(tr: &Transformer, u: &'a SpacetimeField) -> Result<Cow<'a, SpacetimeField>> {
    match u.representation() {
        SpacetimeRepr::SpatialFrequency => Ok(Cow::Borrowed(u)),
        SpacetimeRepr::Physical => Ok(Cow::Owned(tr.space_axis(u, Direction::Forward)?)),
    }
}

/// `S(t) u0`: every mode multiplied by `e^{-i t xi^2}`. Output is in
/// frequency representation.
pub fn free_evolve(u0: &SpatialField, t: f64) -> Result<SpatialField> {
    let uh = frequency_rep(u0)?;
    let g = *uh.grid();
    let values = uh
        .values()
        .iter()
        .zip(g.xi_range())
        .map(|(v, k)| {
            let xi = g.xi(k);
            v * C64::from_polar(1.0, -t * xi * xi)
        })
        .collect();
    SpatialField::new(g, values, Representation::Frequency)
}

/// `L(u0) = eta(t) S(t) u0` on every lattice time.
pub fn linear_part(u0: &SpatialField) -> Result<SpacetimeField> {
    let uh = frequency_rep(u0)?;
    let g = *uh.grid();
    let mut out = SpacetimeField::zeros(g, SpacetimeRepr::SpatialFrequency);
    for n in 0..g.time_points() {
        let t = g.t(n);
        let eta = bump_window(t);
        if eta == 0.0 {
            continue;
        }
        for ((o, v), k) in out.slice_mut(n).iter_mut().zip(uh.values()).zip(g.xi_range()) {
            let xi = g.xi(k);
            *o = v * C64::from_polar(eta, -t * xi * xi);
        }
    }
    Ok(out)
}

/// Largest retained `|k|` under the two-thirds rule.
pub fn dealias_cutoff(grid: &GridSpec) -> i64 {
    (grid.spatial_points() / 3) as i64
}

fn truncate(grid: &GridSpec, row: &mut [C64]) {
    let cut = dealias_cutoff(grid);
    for (v, k) in row.iter_mut().zip(grid.xi_range()) {
        if k.abs() > cut {
            *v = C64::new(0.0, 0.0);
        }
    }
}

/// Modes of the dealiased product `u conj(v)` at time slice `n`.
fn product_slice(tr: &Transformer, u: &SpacetimeField, v: Option<&SpacetimeField>, n: usize) -> Vec<C64> {
    let g = tr.grid();
    let mut a = u.slice(n).to_vec();
    truncate(g, &mut a);
    tr.space_inverse_slice(&mut a);
    match v {
        None => a.iter_mut().for_each(|x| *x = C64::new(x.norm_sqr(), 0.0)),
        Some(v) => {
            let mut b = v.slice(n).to_vec();
            truncate(g, &mut b);
            tr.space_inverse_slice(&mut b);
            a.iter_mut().zip(&b).for_each(|(x, y)| *x *= y.conj());
        }
    }
    tr.space_forward_slice(&mut a);
    truncate(g, &mut a);
    a
}

/// `N(u, v)(t) = eta(t) int_0^t S(t - t') [u conj(v)](t') dt'`.
///
/// The factor `e^{i t' xi^2}` is applied exactly and the remaining integrand
/// is integrated by the trapezoid rule outward from `t = 0`. Products are
/// formed in physical space with two-thirds dealiasing.
pub fn duhamel(u: &SpacetimeField, v: &SpacetimeField) -> Result<SpacetimeField> {
    u.grid().ensure_same(v.grid())?;
    let g = *u.grid();
    let tr = Transformer::new(g);
    let uf = spatial_frequency(&tr, u)?;
    let vf = if std::ptr::eq(u, v) {
        None
    } else {
        Some(spatial_frequency(&tr, v)?)
    };
    let m = g.spatial_points();
    let xi2: Vec<f64> = g.xi_range().map(|k| g.xi(k).powi(2)).collect();
    let integrand = |n: usize| -> Vec<C64> {
        let t = g.t(n);
        let mut w = product_slice(&tr, &uf, vf.as_deref(), n);
        w.iter_mut()
            .zip(&xi2)
            .for_each(|(x, q)| *x *= C64::from_polar(1.0, t * q));
        w
    };
    let mut out = SpacetimeField::zeros(g, SpacetimeRepr::SpatialFrequency);
    let half = 0.5 * g.dt();
    let n0 = g.time_origin();
    let start = integrand(n0);

    let mut sweep = |order: &mut dyn Iterator<Item = usize>, sign: f64| {
        let mut acc = vec![C64::new(0.0, 0.0); m];
        let mut prev = start.clone();
        for n in order {
            let t = g.t(n);
            let eta = bump_window(t);
            if eta == 0.0 {
                break;
            }
            let cur = integrand(n);
            for i in 0..m {
                acc[i] += (prev[i] + cur[i]) * (sign * half);
            }
            for (o, (a, q)) in out.slice_mut(n).iter_mut().zip(acc.iter().zip(&xi2)) {
                *o = a * C64::from_polar(eta, -t * q);
            }
            prev = cur;
        }
    };
    sweep(&mut (n0 + 1..g.time_points()), 1.0);
    sweep(&mut (0..n0).rev(), -1.0);
    Ok(out)
}

/// Number of binary bracketings of `n + 1` factors.
pub fn catalan(n: u32) -> u64 {
    let mut c = 1u64;
    for i in 0..n as u64 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// `A_1 = L(u0)`, `A_n = sum_{n1 + n2 = n} N(A_{n1}, A_{n2})`.
#[derive(Debug, Clone)]
pub struct PicardTower {
    iterates: Vec<SpacetimeField>,
    duhamel_calls: usize,
}

impl PicardTower {
    pub fn n_max(&self) -> usize {
        self.iterates.len()
    }
    /// `A_n`, one-based.
    pub fn iterate(&self, n: usize) -> &SpacetimeField {
        &self.iterates[n - 1]
    }
    pub fn iterates(&self) -> &[SpacetimeField] {
        &self.iterates
    }
    /// Duhamel evaluations performed; `A_n` reuses all lower iterates and so
    /// costs `n - 1` calls.
    pub fn duhamel_calls(&self) -> usize {
        self.duhamel_calls
    }
    /// Multilinear terms in the expansion of `A_n` in `A_1` (Catalan number).
    pub fn term_count(n: usize) -> u64 {
        catalan(n as u32 - 1)
    }

    /// `sum_{n <= upto} A_n`.
    pub fn partial_sum(&self, upto: usize) -> Result<SpacetimeField> {
        let mut acc = self.iterates[0].clone();
        for a in &self.iterates[1..upto.min(self.iterates.len())] {
            acc.add_assign(a)?;
        }
        Ok(acc)
    }
}

pub fn picard_iterates(u0: &SpatialField, n_max: usize) -> Result<PicardTower> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let mut iterates = vec![linear_part(u0)?];
    let mut calls = 0;
    for n in 2..=n_max {
        let mut acc = SpacetimeField::zeros(*u0.grid(), SpacetimeRepr::SpatialFrequency);
        for n1 in 1..n {
            let term = duhamel(&iterates[n1 - 1], &iterates[n - n1 - 1])?;
            calls += 1;
            acc.add_assign(&term)?;
        }
        iterates.push(acc);
    }
    Ok(PicardTower {
        iterates,
        duhamel_calls: calls,
    })
}

#[derive(Debug, Clone)]
pub struct SmallDataSolution {
    pub solution: SpacetimeField,
    pub iterations: usize,
    /// `sup_t ||u^{(k+1)} - u^{(k)}||_{L^2}` per iteration.
    pub history: Vec<f64>,
    /// `sup_t ||u - L(u0) - N(u, u)||_{L^2}`.
    pub residual: f64,
}

pub const DEFAULT_TOL: f64 = 1e-10;

/// Fixed point of `u = L(u0) + N(u, u)` by plain iteration from `L(u0)`.
pub fn solve_small_data(u0: &SpatialField, tol: f64, max_iter: usize) -> Result<SmallDataSolution> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance must be positive, got {tol}")));
    }
    let lin = linear_part(u0)?;
    let step = |u: &SpacetimeField| -> Result<SpacetimeField> {
        let mut next = duhamel(u, u)?;
        next.add_assign(&lin)?;
        Ok(next)
    };
    let mut u = lin.clone();
    let mut history = Vec::new();
    for it in 1..=max_iter {
        let next = step(&u)?;
        let diff = next.sup_l2_distance(&u)?;
        history.push(diff);
        if !diff.is_finite() || diff > 1e12 {
            break;
        }
        if diff < tol {
            let residual = step(&u)?.sup_l2_distance(&u)?;
            return Ok(SmallDataSolution {
                solution: u,
                iterations: it,
                history,
                residual,
            });
        }
        u = next;
    }
    Err(Error::Divergence {
        iterations: history.len(),
        last: history.last().copied().unwrap_or(f64::NAN),
        history,
    })
}

/// `u_{0,lambda}(x) = lambda^{-2} u0(x / lambda)` on the grid
/// `(lambda L, M, lambda^2 T, K)`: `u_hat_{0,lambda}(xi) = lambda^{-1} u_hat_0(lambda xi)`,
/// which on the rescaled lattice is the same samples times `1 / lambda`.
pub fn rescale(u0: &SpatialField, lambda: f64) -> Result<SpatialField> {
    let g = u0.grid().rescaled(lambda)?;
    let uh = frequency_rep(u0)?;
    SpatialField::new(
        g,
        uh.values().iter().map(|v| v / lambda).collect(),
        Representation::Frequency,
    )
}

/// `u_lambda(x, t) = lambda^{-2} u(x / lambda, t / lambda^2)` on the rescaled grid.
pub fn rescale_solution(u: &SpacetimeField, lambda: f64) -> Result<SpacetimeField> {
    let g = u.grid().rescaled(lambda)?;
    let scale = match u.representation() {
        SpacetimeRepr::Physical => lambda.powi(-2),
        SpacetimeRepr::SpatialFrequency => 1.0 / lambda,
    };
    SpacetimeField::new(
        g,
        u.values().iter().map(|v| v * scale).collect(),
        u.representation(),
    )
}

/// `i u_t + u_xx - u conj(u)` in physical space, derivatives taken spectrally
/// on the periodic lattice (symbol `tau - xi^2`).
pub fn equation_residual(u: &SpacetimeField) -> Result<SpacetimeField> {
    let g = *u.grid();
    let tr = Transformer::new(g);
    let phys = match u.representation() {
        SpacetimeRepr::Physical => Cow::Borrowed(u),
        SpacetimeRepr::SpatialFrequency => Cow::Owned(tr.space_axis(u, Direction::Inverse)?),
    };
    let spec = tr.spacetime_forward(&phys)?;
    let lin = spec.map(|xi, tau, v| v * (tau - xi * xi));
    let mut out = tr.spacetime_inverse(&lin)?;
    for (o, p) in out.values_mut().iter_mut().zip(phys.values()) {
        *o -= p.norm_sqr();
    }
    Ok(out)
}

/// `max |FT[conj u] - conj(FT[u])(-xi, -tau)|` on the lattice.
pub fn conjugation_check(u: &SpacetimeField) -> Result<f64> {
    let g = *u.grid();
    let tr = Transformer::new(g);
    let phys = match u.representation() {
        SpacetimeRepr::Physical => Cow::Borrowed(u),
        SpacetimeRepr::SpatialFrequency => Cow::Owned(tr.space_axis(u, Direction::Inverse)?),
    };
    let conj = SpacetimeField::new(
        g,
        phys.values().iter().map(|v| v.conj()).collect(),
        SpacetimeRepr::Physical,
    )?;
    let lhs = tr.spacetime_forward(&conj)?;
    let rhs = tr.spacetime_forward(&phys)?.conj_reflect();
    Ok(lhs
        .values()
        .iter()
        .zip(rhs.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

/// Galilean image of a linear solution:
/// `u_hat_c(xi, t) = e^{-i c^2 t} e^{-i (xi - c) 2 c t} u_hat(xi - c, t)` with
/// `c = c_index dxi`. Modes shifted off the lattice are dropped.
pub fn galilean_image(u: &SpacetimeField, c_index: i64) -> Result<SpacetimeField> {
    u.expect(SpacetimeRepr::SpatialFrequency)?;
    let g = *u.grid();
    let c = g.xi(c_index);
    let mut out = SpacetimeField::zeros(g, SpacetimeRepr::SpatialFrequency);
    for n in 0..g.time_points() {
        let t = g.t(n);
        let src = u.slice(n).to_vec();
        for (o, k) in out.slice_mut(n).iter_mut().zip(g.xi_range()) {
            if let Some(slot) = g.xi_slot(k - c_index) {
                let shifted = g.xi(k) - c;
                *o = src[slot] * C64::from_polar(1.0, -c * c * t - 2.0 * c * t * shifted);
            }
        }
    }
    Ok(out)
}

/// `e^{i c x} u0` for `c = c_index dxi`, as a spectral shift.
pub fn modulate(u0: &SpatialField, c_index: i64) -> Result<SpatialField> {
    let uh = frequency_rep(u0)?;
    let g = *uh.grid();
    let values = g
        .xi_range()
        .map(|k| uh.mode(k - c_index).unwrap_or(C64::new(0.0, 0.0)))
        .collect();
    SpatialField::new(g, values, Representation::Frequency)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GalileanWitness {
    /// `sup_t ||v - G_c u|| / sup_t ||v||` for the nonlinear solutions.
    pub nonlinear: f64,
    /// The same for the linear parts alone.
    pub linear: f64,
}

/// Compares the solution for `e^{icx} u0` with the Galilean image of the
/// solution for `u0`. The nonlinearity `u conj(u)` breaks the symmetry, so the
/// nonlinear discrepancy is expected to be visibly nonzero.
pub fn galilean_witness(u0: &SpatialField, c_index: i64, picard_order: usize) -> Result<GalileanWitness> {
    let modulated = modulate(u0, c_index)?;
    let base = picard_iterates(u0, picard_order)?.partial_sum(picard_order)?;
    let moved = picard_iterates(&modulated, picard_order)?.partial_sum(picard_order)?;
    let nonlinear = galilean_image(&base, c_index)?.sup_l2_distance(&moved)? / moved.sup_l2();
    let lin_base = linear_part(u0)?;
    let lin_moved = linear_part(&modulated)?;
    let linear =
        galilean_image(&lin_base, c_index)?.sup_l2_distance(&lin_moved)? / lin_moved.sup_l2();
    Ok(GalileanWitness { nonlinear, linear })
}
