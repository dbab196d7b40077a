use std::sync::OnceLock;

fn phi(r: f64) -> f64 {
    if r > 0.0 {
        (-1.0 / r).exp()
    } else {
        0.0
    }
}

/// Smooth cutoff: `1` on `[-1, 1]`, `0` outside `(-2, 2)`, and
/// `phi(2-|t|) / (phi(2-|t|) + phi(|t|-1))` in between with `phi(r) = e^{-1/r}`.
pub fn bump_window(t: f64) -> f64 {
    let a = t.abs();
    if a <= 1.0 {
        1.0
    } else if a >= 2.0 {
        0.0
    } else {
        let p = phi(2.0 - a);
        p / (p + phi(a - 1.0))
    }
}

const PANELS: usize = 2048;

/// Simpson weights times `eta` on the nodes of `[0, 2]`.
fn simpson_nodes() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        let h = 2.0 / PANELS as f64;
        (0..=PANELS)
            .map(|i| {
                let w = if i == 0 || i == PANELS {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                let t = i as f64 * h;
                (t, 2.0 * w * h / 3.0 * bump_window(t))
            })
            .filter(|&(_, w)| w != 0.0)
            .collect()
    })
}

/// `eta_hat(tau) = int eta(t) e^{i tau t} dt` (real, since `eta` is even), by
/// composite Simpson on `[0, 2]`.
pub fn bump_window_spectrum(tau: f64) -> f64 {
    simpson_nodes().iter().map(|&(t, w)| w * (tau * t).cos()).sum()
}
