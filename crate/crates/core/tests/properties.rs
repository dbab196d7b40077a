use proptest::prelude::*;

use qnls_core::cli::RunConfig;
use qnls_core::estimates::{bilinear_ratio, box_grid, ensemble, i_multiplier, trend_of, Region};
use qnls_core::evolution::rescale;
use qnls_core::norms::{
    hsa_norm, l2xi_l1tau_norm, pasting_mask, x_norm, xsb_norm, y_norm, z_norm, WeightSpec,
};
use qnls_core::spectral_core::{Representation, SpatialField, SpectrumField, Transformer};
use qnls_core::C64;

fn member_field(seed: u64, index: usize) -> SpectrumField {
    let members = ensemble(index + 1, seed);
    members[index].sample(box_grid(0).unwrap())
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

fn norms(f: &SpectrumField, w: &WeightSpec) -> [f64; 5] {
    [
        xsb_norm(f, w.s, 0.5),
        x_norm(f, w),
        y_norm(f, w),
        z_norm(f, w).value,
        l2xi_l1tau_norm(f, Some((w.s, w.a))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norms_are_homogeneous(seed in any::<u64>(), idx in 0usize..10, re in -3.0f64..3.0, im in -3.0f64..3.0,
                             rho in 0.0f64..0.45, a in 0.0f64..0.45) {
        let w = WeightSpec::unchecked(rho, a, 0.01, 0.01);
        let f = member_field(seed, idx);
        let c = C64::new(re, im);
        let base = norms(&f, &w);
        let scaled = norms(&f.scaled(c), &w);
        for (b, s) in base.iter().zip(scaled) {
            prop_assert!(close(s, c.norm() * b, 1e-12), "{s} vs {}", c.norm() * b);
        }
    }

    #[test]
    fn triangle_inequality(seed in any::<u64>(), i in 0usize..10, j in 0usize..10, rho in 0.0f64..0.45) {
        let w = WeightSpec::unchecked(rho, 0.0, 0.01, 0.01);
        let (f, g) = (member_field(seed, i), member_field(seed ^ 1, j));
        let sum = norms(&f.add(&g).unwrap(), &w);
        let (nf, ng) = (norms(&f, &w), norms(&g, &w));
        for k in 0..5 {
            prop_assert!(sum[k] <= (nf[k] + ng[k]) * (1.0 + 1e-12), "norm {k}");
        }
    }

    #[test]
    fn masks_do_not_increase_norms(seed in any::<u64>(), idx in 0usize..10, xi_cut in 0.0f64..4.0, lam_cut in 0.0f64..32.0) {
        let w = WeightSpec::unchecked(0.25, 0.0, 0.01, 0.01);
        let f = member_field(seed, idx);
        let masked = f.map(|xi, tau, v| if xi.abs() <= xi_cut && (tau - xi * xi).abs() <= lam_cut { v } else { C64::new(0.0, 0.0) });
        let (full, part) = (norms(&f, &w), norms(&masked, &w));
        for k in 0..5 {
            prop_assert!(part[k] <= full[k] * (1.0 + 1e-12), "norm {k}");
        }
    }

    #[test]
    fn pasting_split_recombines(seed in any::<u64>(), idx in 0usize..10) {
        let w = WeightSpec::unchecked(0.25, 0.0, 0.01, 0.01);
        let f = member_field(seed, idx);
        let sum = pasting_mask(&f, &w, true).add(&pasting_mask(&f, &w, false)).unwrap();
        prop_assert_eq!(sum.values(), f.values());
    }

    #[test]
    fn bilinear_ratio_is_scale_free(seed in any::<u64>(), i in 0usize..10, j in 0usize..10,
                                    c in 0.1f64..10.0, d in 0.1f64..10.0, region in 0usize..5) {
        let w = WeightSpec::new(0.25, 0.0).unwrap();
        let (u, v) = (member_field(seed, i), member_field(seed ^ 7, j));
        let region = if region == 0 { None } else { Some(Region::ALL[region - 1]) };
        let base = bilinear_ratio(&u, &v, &w, region);
        let scaled = bilinear_ratio(&u.scaled(C64::new(c, 0.0)), &v.scaled(C64::new(0.0, d)), &w, region);
        match (base, scaled) {
            (Ok(b), Ok(s)) => prop_assert!(close(b.ratio, s.ratio, 1e-9), "{} {}", b.ratio, s.ratio),
            (Err(_), Err(_)) => {}
            (b, s) => prop_assert!(false, "{b:?} vs {s:?}"),
        }
    }

    #[test]
    fn multiplier_is_trilinear_and_nonnegative(seed in any::<u64>(), c in 0.1f64..5.0, s in 0.0f64..1.0, k in 1u8..4) {
        let g = box_grid(0).unwrap();
        let members = ensemble(3, seed);
        let f: Vec<SpectrumField> = members.iter().map(|m| m.sample_abs(g)).collect();
        let base = i_multiplier(&f[0], &f[1], &f[2], s, k).unwrap();
        let scaled = i_multiplier(&f[0].scaled(C64::new(c, 0.0)), &f[1], &f[2], s, k).unwrap();
        prop_assert!(base >= 0.0);
        prop_assert!(close(scaled, c * base, 1e-9));
    }

    #[test]
    fn spacetime_round_trip(seed in any::<u64>(), idx in 0usize..10) {
        let f = member_field(seed, idx);
        let tr = Transformer::new(*f.grid());
        let back = tr.spacetime_forward(&tr.spacetime_inverse(&f).unwrap()).unwrap();
        let peak = f.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        let err = back.values().iter().zip(f.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12 * peak);
    }

    #[test]
    fn rescaled_data_obey_power_bound(lambda in 1.0f64..16.0, s in -0.5f64..0.0, da in 0.0f64..1.0, width in 0.3f64..3.0) {
        let a = s + da;
        let grid = qnls_core::spectral_core::GridSpec::new(32.0 * std::f64::consts::PI, 256, 4.0, 8).unwrap();
        let u0 = SpatialField::from_spectrum_fn(grid, |xi| C64::new((-(xi * width).powi(2)).exp(), 0.0));
        prop_assert_eq!(u0.representation(), Representation::Frequency);
        let base = hsa_norm(&u0, s, a).unwrap();
        let scaled = hsa_norm(&rescale(&u0, lambda).unwrap(), s, a).unwrap();
        prop_assert!(scaled <= base * lambda.powf(-1.5 - s) * (1.0 + 1e-12));
    }

    #[test]
    fn trend_ignores_overall_scale(r in proptest::collection::vec(0.01f64..10.0, 3..6), c in 0.01f64..100.0) {
        let scaled: Vec<f64> = r.iter().map(|x| x * c).collect();
        let (t1, g1) = trend_of(&r).unwrap();
        let (t2, g2) = trend_of(&scaled).unwrap();
        prop_assert!((g1 - g2).abs() < 1e-9);
        prop_assert_eq!(std::mem::discriminant(&t1), std::mem::discriminant(&t2));
    }

    #[test]
    fn provenance_round_trips(seed in any::<u64>(), s in -1.0f64..1.0, eps0 in 1e-4f64..1.0, e in 4u32..8) {
        let text = format!(
            "command = illpose\nseed = {seed}\n[weights]\ns = {s}\n[experiment]\nfamily = F2\neps0 = {eps0}\nn_list = {}\n",
            (e..e + 4).map(|k| (1u64 << k).to_string()).collect::<Vec<_>>().join(", ")
        );
        let cfg = RunConfig::from_text(&text).unwrap();
        let back = RunConfig::from_provenance(&cfg.provenance()).unwrap();
        prop_assert_eq!(cfg.provenance(), back.provenance());
        prop_assert_eq!(cfg, back);
    }
}
