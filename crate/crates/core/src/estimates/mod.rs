//! Numerical testers for the Strichartz, trilinear multiplier and bilinear
//! inequalities.
//!
//! "`A <~ B`" is read as: the ensemble maximum of `A / B` stays bounded as the
//! lattice is refined. Concretely, every ratio is evaluated on three or more
//! nested resolutions of a fixed frequency box and the trend is
//! [`Trend::Bounded`] when no refinement raises the maximum by 25% or more.

mod bilinear;
mod conv;
mod ensemble;
mod multiplier;
mod strichartz;

pub use bilinear::{
    bilinear_ratio, bilinear_report, f1_bilinear_growth, modulation_divide, region_identity_check,
    BilinearGrowth, BilinearRatio, Region, RegionIdentityReport,
};
pub use conv::{lattice_convolve, star};
pub use ensemble::{box_grid, ensemble, Member, Packet};
pub use multiplier::{
    concentration_witness, i_multiplier, multiplier_ratio, MultiplierFamily, MultiplierParams,
};
pub use strichartz::{strichartz_ratio, strichartz_report, StrichartzParams};

use crate::error::{Error, Result};
use crate::fit::least_squares;

/// Largest allowed growth of the maximum ratio from one resolution to the next.
pub const BOUNDED_STEP: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Trend {
    Bounded,
    /// Fitted `log2` growth per refinement.
    Growing(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub which: String,
    pub ensemble_size: usize,
    pub max_ratio: f64,
    pub ratio_per_resolution: Vec<f64>,
    pub trend: Trend,
    /// Least-squares slope of `log2 ratio` against the resolution index.
    pub growth_rate: f64,
    pub witness: String,
}

impl EstimateReport {
    pub fn is_bounded(&self) -> bool {
        self.trend == Trend::Bounded
    }
}

/// Classifies a sequence of per-resolution maxima and fits its growth rate.
pub fn trend_of(ratios: &[f64]) -> Result<(Trend, f64)> {
    if ratios.len() < 3 {
        return Err(Error::Precondition(format!(
            "a trend needs at least 3 resolutions, got {}",
            ratios.len()
        )));
    }
    if ratios.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::DegenerateFit(format!("non-positive ratio in {ratios:?}")));
    }
    let x: Vec<f64> = (0..ratios.len()).map(|i| i as f64).collect();
    let y: Vec<f64> = ratios.iter().map(|r| r.log2()).collect();
    let rate = least_squares(&x, &y)?.slope;
    let bounded = ratios.windows(2).all(|w| w[1] < BOUNDED_STEP * w[0]);
    Ok((if bounded { Trend::Bounded } else { Trend::Growing(rate) }, rate))
}

pub(crate) fn build_report(which: String, ensemble_size: usize, per_level: Vec<(f64, String)>) -> Result<EstimateReport> {
    let ratios: Vec<f64> = per_level.iter().map(|p| p.0).collect();
    let (trend, growth_rate) = trend_of(&ratios)?;
    let (max_ratio, witness) = per_level
        .into_iter()
        .fold((0.0, String::new()), |acc, p| if p.0 > acc.0 { p } else { acc });
    Ok(EstimateReport {
        which,
        ensemble_size,
        max_ratio,
        ratio_per_resolution: ratios,
        trend,
        growth_rate,
        witness,
    })
}

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(usize, &T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, R>(items: &[T], f: impl Fn(usize, &T) -> R) -> Vec<R> {
    items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
}

/// Maximum of `(ratio, label)` pairs; ties keep the earlier member so the
/// result does not depend on evaluation order.
pub(crate) fn max_labelled(items: Vec<Option<(f64, String)>>) -> Option<(f64, String)> {
    items
        .into_iter()
        .flatten()
        .fold(None, |best: Option<(f64, String)>, cur| match best {
            Some(b) if b.0 >= cur.0 => Some(b),
            _ => Some(cur),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trend_rule() {
        assert_eq!(trend_of(&[1.0, 1.2, 1.44]).unwrap().0, Trend::Bounded);
        assert!(matches!(trend_of(&[1.0, 1.3, 1.4]).unwrap().0, Trend::Growing(_)));
        let (_, rate) = trend_of(&[1.0, 2.0, 4.0]).unwrap();
        assert!((rate - 1.0).abs() < 1e-12);
        assert!(trend_of(&[1.0, 2.0]).is_err());
    }
}
