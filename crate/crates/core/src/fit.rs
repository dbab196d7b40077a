use crate::error::{Error, Result};

/// Unweighted least-squares line through `(x_i, y_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

pub fn least_squares(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "need at least two paired samples, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if y.iter().chain(x).any(|v| !v.is_finite()) {
        return Err(Error::DegenerateFit("non-finite sample".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("abscissae coincide".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(LineFit {
        slope,
        intercept,
        residual,
    })
}

/// Fit of `log2 values` against `log2 n`. Zero values make the fit degenerate.
pub fn log2_fit(n: &[f64], values: &[f64]) -> Result<LineFit> {
    if values.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::DegenerateFit("log fit needs positive values".into()));
    }
    let x: Vec<f64> = n.iter().map(|v| v.log2()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.log2()).collect();
    least_squares(&x, &y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let n = [16.0, 32.0, 64.0, 128.0];
        let v: Vec<f64> = n.iter().map(|x: &f64| 3.0 * x.powf(-0.75)).collect();
        let f = log2_fit(&n, &v).unwrap();
        assert!((f.slope + 0.75).abs() < 1e-12);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn zeros_are_degenerate() {
        assert!(log2_fit(&[1.0, 2.0], &[0.0, 0.0]).is_err());
    }
}
