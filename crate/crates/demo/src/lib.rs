//! Browser bindings for `www/index.html`. Every export returns a flat
//! `Float64Array`; the page documents each layout.

use qnls_core::illposedness::{growth_sweep, make_probe_data, Family, GridPolicy, Window};
use qnls_core::norms::m_weight;
use qnls_core::spectral_core::bump_window;
use wasm_bindgen::prelude::*;

fn js_err(e: qnls_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// `[fitted, predicted, log2 N_0, log2 norm_0, log2 N_1, ...]` for `N = 2^4 .. 2^max_exp`.
#[wasm_bindgen]
pub fn growth_curve(family: &str, s: f64, a: f64, eps0: f64, max_exp: u32) -> Result<Vec<f64>, JsError> {
    let family = Family::parse(family).map_err(js_err)?;
    let ns: Vec<f64> = (4..=max_exp.clamp(7, 10)).map(|e| 2f64.powi(e as i32)).collect();
    let r = growth_sweep(family, s, a, eps0, &ns, &GridPolicy::default()).map_err(js_err)?;
    let mut out = vec![r.fitted_slope, r.predicted_slope];
    for (n, v) in r.n_list.iter().zip(&r.norms) {
        out.extend([n.log2(), v.log2()]);
    }
    Ok(out)
}

/// `[xi_0, |A_2(xi_0, t)|, xi_1, ...]` over the low output window of the F1 probe.
#[wasm_bindgen]
pub fn a2_profile(n: f64, t: f64) -> Result<Vec<f64>, JsError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(JsError::new("t must lie in [0, 1]"));
    }
    let grid = GridPolicy::default().grid_for(Family::F1, n).map_err(js_err)?;
    let probe = make_probe_data(Family::F1, n, 1.0, 0.0, 0.0, grid).map_err(js_err)?;
    let mut out = Vec::new();
    for k in probe.window_indices(Window::Low) {
        out.extend([grid.xi(k), probe.a2_at(k, t).norm()]);
    }
    Ok(out)
}

/// `points` samples of `[xi, m(xi)]` on `[-8, 8]` followed by `points` samples
/// of `[t, eta(t)]` on `[-3, 3]`.
#[wasm_bindgen]
pub fn weight_curves(s: f64, a: f64, points: usize) -> Vec<f64> {
    let points = points.clamp(2, 4096);
    let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (points - 1) as f64;
    let mut out = Vec::with_capacity(4 * points);
    for i in 0..points {
        let xi = step(-8.0, 8.0, i);
        out.extend([xi, m_weight(xi, s, a)]);
    }
    for i in 0..points {
        let t = step(-3.0, 3.0, i);
        out.extend([t, bump_window(t)]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layouts() {
        let w = weight_curves(-0.25, 0.0, 5);
        assert_eq!(w.len(), 20);
        assert_eq!(&w[4..6], &[0.0, 1.0]);
        assert_eq!(&w[14..16], &[0.0, 1.0]);

        let g = growth_curve("F3", 0.0, 0.5, 0.1, 7).unwrap();
        assert_eq!(g.len(), 2 + 2 * 4);
        assert!(g[0].abs() < 0.05 && g[1] == 0.0);

        let p = a2_profile(16.0, 1.0).unwrap();
        assert!(p.len() >= 2 * qnls_core::illposedness::MIN_WINDOW_POINTS && p.len().is_multiple_of(2));
        assert!(p.chunks(2).all(|c| c[1] > 0.0));
    }
}
