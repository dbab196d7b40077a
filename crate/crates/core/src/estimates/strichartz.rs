use super::{box_grid, build_report, max_labelled, par_map, EstimateReport, Member};
use crate::error::{Error, Result};
use crate::norms::xsb_norm;
use crate::spectral_core::{Direction, SpacetimeField, SpacetimeRepr, Transformer};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrichartzParams {
    pub q: f64,
    pub theta: f64,
    pub eps: f64,
}

impl StrichartzParams {
    /// Requires `q in [2, 6]`, `theta >= (3/2)(1/2 - 1/q)` and `eps >= 0`.
    pub fn new(q: f64, theta: f64, eps: f64) -> Result<Self> {
        if !(2.0..=6.0).contains(&q) {
            return Err(Error::ParameterRange(format!("need q in [2, 6], got {q}")));
        }
        let min_theta = Self::min_theta(q);
        if theta < min_theta - 1e-15 {
            return Err(Error::ParameterRange(format!(
                "need theta >= (3/2)(1/2 - 1/q) = {min_theta}, got {theta}"
            )));
        }
        if !(eps >= 0.0) {
            return Err(Error::ParameterRange(format!("need eps >= 0, got {eps}")));
        }
        Ok(Self { q, theta, eps })
    }

    pub fn min_theta(q: f64) -> f64 {
        1.5 * (0.5 - 1.0 / q)
    }

    /// The endpoint `theta = (3/2)(1/2 - 1/q)` with `eps = 0.01`.
    pub fn endpoint(q: f64) -> Result<Self> {
        Self::new(q, Self::min_theta(q), 0.01)
    }

    pub fn label(&self) -> String {
        format!("L{}(theta={},eps={})", self.q, self.theta, self.eps)
    }
}

/// `||u||_{L^q_{xt}} / ||u_tilde||_{X_{0, theta + eps}}` with lattice measures
/// `dx dt` and `dxi dtau / (2 pi)^2`.
pub fn strichartz_ratio(u: &SpacetimeField, params: &StrichartzParams) -> Result<f64> {
    let tr = Transformer::new(*u.grid());
    let ut = tr.spacetime_forward(u)?;
    let den = xsb_norm(&ut, 0.0, params.theta + params.eps);
    if den == 0.0 {
        return Err(Error::ZeroDenominator("X_{0,theta+} norm of the input".into()));
    }
    let phys = match u.representation() {
        SpacetimeRepr::Physical => std::borrow::Cow::Borrowed(u),
        SpacetimeRepr::SpatialFrequency => std::borrow::Cow::Owned(tr.space_axis(u, Direction::Inverse)?),
    };
    let g = u.grid();
    let q = params.q;
    let peak = phys.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let sum: f64 = phys.values().iter().map(|v| (v.norm() / peak).powf(q)).sum();
    Ok(peak * (sum * g.dx() * g.dt()).powf(1.0 / q) / den)
}

/// Ensemble maximum of [`strichartz_ratio`] on each box level.
pub fn strichartz_report(members: &[Member], params: &StrichartzParams, levels: &[u32]) -> Result<EstimateReport> {
    if members.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let mut per_level = Vec::new();
    for &r in levels {
        let grid = box_grid(r)?;
        let tr = Transformer::new(grid);
        let ratios = par_map(members, |i, m| -> Result<Option<(f64, String)>> {
            let u = tr.spacetime_inverse(&m.sample(grid))?;
            match strichartz_ratio(&u, params) {
                Ok(v) => Ok(Some((v, format!("level {r}, member {i}: {}", m.label())))),
                Err(Error::ZeroDenominator(_)) => Ok(None),
                Err(e) => Err(e),
            }
        });
        let ratios = ratios.into_iter().collect::<Result<Vec<_>>>()?;
        per_level.push(max_labelled(ratios).ok_or(Error::EmptyEnsemble)?);
    }
    build_report(params.label(), members.len(), per_level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::linear_part;
    use crate::spectral_core::{GridSpec, SpatialField};
    use crate::C64;
    use std::f64::consts::PI;

    #[test]
    fn l2_is_parseval() {
        let g = GridSpec::new(16.0 * PI, 64, 8.0, 64).unwrap();
        let u0 = SpatialField::from_physical_fn(g, |x| C64::new((-x * x / 4.0).exp(), 0.3 * x.sin()));
        let u = linear_part(&u0).unwrap();
        let p = StrichartzParams::new(2.0, 0.0, 0.0).unwrap();
        assert!((strichartz_ratio(&u, &p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ranges() {
        assert!(StrichartzParams::new(7.0, 1.0, 0.0).is_err());
        assert!(StrichartzParams::new(6.0, 0.4, 0.01).is_err());
        assert!(StrichartzParams::endpoint(6.0).unwrap().theta == 0.5);
    }

    #[test]
    fn free_wave_ratio_is_resolution_stable() {
        let p = StrichartzParams::endpoint(6.0).unwrap();
        let ratio = |m: usize, k: usize| {
            let g = GridSpec::new(16.0 * PI, m, 8.0, k).unwrap();
            let u0 = SpatialField::from_physical_fn(g, |x| C64::new((-x * x / 2.0).exp(), 0.0));
            strichartz_ratio(&linear_part(&u0).unwrap(), &p).unwrap()
        };
        let (a, b) = (ratio(128, 128), ratio(256, 256));
        assert!(a.is_finite() && (b / a - 1.0).abs() < 0.1, "{a} {b}");
    }
}
