use super::config::{Command, EstimateKind, FieldKind, RunConfig};
use super::emit::{Cell, PlotBlock, ResultRow, Table};
use crate::error::{Error, Result};
use crate::estimates::{
    bilinear_report, box_grid, concentration_witness, ensemble, f1_bilinear_growth, multiplier_ratio,
    region_identity_check, strichartz_report, EstimateReport, Member, MultiplierFamily, MultiplierParams, Packet,
    StrichartzParams, Trend,
};
use crate::evolution::{picard_iterates, rescale, solve_small_data, PicardTower};
use crate::illposedness::growth_sweep;
use crate::norms::{
    embedding_report, l2xi_l1tau_norm, x_norm, xsb_dyadic_norm, xsb_norm, y_norm, z_norm, DyadicMode, WeightSpec,
};
use crate::spectral_core::{Direction, GridSpec, SpatialField, SpectrumField, Transformer};
use crate::C64;

/// Largest `N` the unit-box witness accepts; its cost grows like `N^4`.
pub const MAX_WITNESS_N: f64 = 256.0;

/// Dispatches to the configured command and collects its rows.
pub fn run(cfg: &RunConfig) -> Result<Table> {
    match cfg.command {
        Command::Norms => run_norms(cfg),
        Command::Solve => run_solve(cfg),
        Command::Picard => run_picard(cfg),
        Command::Illpose => run_illpose(cfg),
        Command::Estimates => run_estimates(cfg),
    }
}

fn row(cfg: &RunConfig, cells: Vec<Cell>) -> ResultRow {
    ResultRow {
        cells,
        provenance: cfg.provenance(),
    }
}

fn text(s: impl Into<String>) -> Cell {
    Cell::Text(s.into())
}

fn weight_spec(cfg: &RunConfig) -> Result<WeightSpec> {
    let w = cfg.weights;
    WeightSpec::with_eps(w.rho, w.a, w.eps_alpha, w.eps_beta)
}

fn run_norms(cfg: &RunConfig) -> Result<Table> {
    let grid = match cfg.grid {
        Some(g) => g,
        None => box_grid(1)?,
    };
    let f = match cfg.field {
        FieldKind::Spike => {
            let k = (cfg.xi0 / grid.dxi()).round() as i64;
            let m = (cfg.tau0 / grid.dtau()).round() as i64;
            SpectrumField::spike(grid, k, m, C64::new(cfg.amplitude, 0.0))?
        }
        FieldKind::Gaussian => Member::Packets(vec![Packet {
            xi0: cfg.xi0,
            lambda0: cfg.tau0 - cfg.xi0 * cfg.xi0,
            width_xi: cfg.width,
            width_lambda: cfg.width,
            amp: C64::new(cfg.amplitude, 0.0),
        }])
        .sample(grid),
    };
    let w = weight_spec(cfg)?;
    let s = cfg.weights.s;
    let z = z_norm(&f, &w);
    let (zx, zy) = z.components.unwrap_or((f64::NAN, f64::NAN));
    let mut t = Table::new(Command::Norms, vec!["quantity", "value", "bound"]);
    let values = [
        ("xsb", xsb_norm(&f, s, cfg.b)),
        ("xsb_besov", xsb_dyadic_norm(&f, s, cfg.b, DyadicMode::Besov)),
        ("xsb_underline", xsb_dyadic_norm(&f, s, cfg.b, DyadicMode::Underline)),
        ("x", x_norm(&f, &w)),
        ("y", y_norm(&f, &w)),
        ("z", z.value),
        ("z_x_part", zx),
        ("z_y_part", zy),
        ("l2xi_l1tau", l2xi_l1tau_norm(&f, None)),
    ];
    for (name, v) in values {
        t.rows.push(row(cfg, vec![text(name), Cell::Num(v), Cell::Empty]));
    }
    for c in embedding_report(std::slice::from_ref(&f), &w)? {
        t.rows.push(row(cfg, vec![text(c.name), Cell::Num(c.max_ratio), Cell::Num(c.constant)]));
    }
    Ok(t)
}

/// Gaussian `exp(-x^2 / (2 width^2))` scaled to `||u0||_{H^{s,a}} = amplitude`.
pub fn gaussian_data(grid: GridSpec, width: f64, amplitude: f64, s: f64, a: f64) -> Result<SpatialField> {
    let phys = SpatialField::from_physical_fn(grid, |x| C64::new((-x * x / (2.0 * width * width)).exp(), 0.0));
    let u0 = Transformer::new(grid).spatial(&phys, Direction::Forward)?;
    let norm = crate::norms::hsa_norm(&u0, s, a)?;
    if norm == 0.0 {
        return Err(Error::Precondition("Gaussian data vanish on this lattice".into()));
    }
    Ok(u0.scaled(C64::new(amplitude / norm, 0.0)))
}

fn run_solve(cfg: &RunConfig) -> Result<Table> {
    let (s, a) = (cfg.weights.s, cfg.weights.a);
    let u0 = gaussian_data(cfg.evolution_grid()?, cfg.width, cfg.amplitude, s, a)?;
    let sol = solve_small_data(&u0, cfg.tol, cfg.max_iter)?;
    let mut t = Table::new(Command::Solve, vec!["quantity", "index", "value"]);
    for (i, d) in sol.history.iter().enumerate() {
        t.rows.push(row(cfg, vec![text("update"), Cell::Int(i as i64 + 1), Cell::Num(*d)]));
    }
    t.rows.push(row(cfg, vec![text("iterations"), Cell::Empty, Cell::Int(sol.iterations as i64)]));
    t.rows.push(row(cfg, vec![text("residual"), Cell::Empty, Cell::Num(sol.residual)]));
    t.rows.push(row(cfg, vec![text("sup_l2"), Cell::Empty, Cell::Num(sol.solution.sup_l2())]));
    let base = crate::norms::hsa_norm(&u0, s, a)?;
    for &lambda in &cfg.lambda_list {
        let scaled = crate::norms::hsa_norm(&rescale(&u0, lambda)?, s, a)?;
        let ratio = scaled / base / lambda.powf(-1.5 - s);
        t.rows.push(row(cfg, vec![text("scaling_ratio"), Cell::Num(lambda), Cell::Num(ratio)]));
    }
    Ok(t)
}

fn run_picard(cfg: &RunConfig) -> Result<Table> {
    let u0 = gaussian_data(cfg.evolution_grid()?, cfg.width, cfg.amplitude, cfg.weights.s, cfg.weights.a)?;
    let tower = picard_iterates(&u0, cfg.n_max)?;
    let mut t = Table::new(Command::Picard, vec!["n", "sup_l2", "term_count"]);
    for n in 1..=cfg.n_max {
        t.rows.push(row(
            cfg,
            vec![
                Cell::Int(n as i64),
                Cell::Num(tower.iterate(n).sup_l2()),
                Cell::Int(PicardTower::term_count(n) as i64),
            ],
        ));
    }
    Ok(t)
}

fn run_illpose(cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new(
        Command::Illpose,
        vec!["family", "s", "a", "n", "norm", "fitted_slope", "predicted_slope", "residual", "positivity"],
    );
    let mut blocks = Vec::new();
    for &a in &cfg.a_list {
        for &s in &cfg.s_list {
            let r = growth_sweep(cfg.family, s, a, cfg.eps0, &cfg.n_list, &cfg.policy)?;
            for (&n, &norm) in r.n_list.iter().zip(&r.norms) {
                t.rows.push(row(
                    cfg,
                    vec![
                        text(r.family.name()),
                        Cell::Num(s),
                        Cell::Num(a),
                        Cell::Num(n),
                        Cell::Num(norm),
                        Cell::Num(r.fitted_slope),
                        Cell::Num(r.predicted_slope),
                        Cell::Num(r.residual),
                        r.positivity.map_or(Cell::Empty, Cell::Num),
                    ],
                ));
            }
            blocks.push(PlotBlock {
                label: format!("family={} s={s} a={a}", r.family.name()),
                points: r.n_list.iter().zip(&r.norms).map(|(n, v)| (n.log2(), v.log2())).collect(),
            });
        }
    }
    t.blocks = Some(blocks);
    Ok(t)
}

const ESTIMATE_COLUMNS: [&str; 7] = ["estimate", "resolution", "ratio", "bound", "trend", "growth_rate", "witness"];

fn report_rows(cfg: &RunConfig, t: &mut Table, rep: &EstimateReport, resolutions: &[f64]) {
    let trend = match rep.trend {
        Trend::Bounded => "bounded",
        Trend::Growing(_) => "growing",
    };
    for (res, ratio) in resolutions.iter().zip(&rep.ratio_per_resolution) {
        t.rows.push(row(
            cfg,
            vec![
                text(rep.which.clone()),
                Cell::Num(*res),
                Cell::Num(*ratio),
                Cell::Empty,
                text(trend),
                Cell::Num(rep.growth_rate),
                text(rep.witness.clone()),
            ],
        ));
    }
}

fn multiplier_params(cfg: &RunConfig) -> Result<MultiplierParams> {
    let family = match cfg.multiplier.as_str() {
        "sharp" => MultiplierFamily::Sharp { k: cfg.k },
        "interpolated" => MultiplierFamily::Interpolated {
            s: cfg.mult_s,
            s_prime: cfg.s_prime,
        },
        "crude" => MultiplierFamily::Crude { k: cfg.k, s: cfg.mult_s },
        "custom" => MultiplierFamily::Custom {
            k: cfg.k,
            s: cfg.mult_s,
            b1: cfg.b1,
            b2: cfg.b2,
        },
        other => {
            return Err(Error::Config(format!(
                "unknown multiplier family {other:?} (expected sharp, interpolated, crude or custom)"
            )))
        }
    };
    MultiplierParams::new(family, cfg.eps)
}

fn run_estimates(cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new(Command::Estimates, ESTIMATE_COLUMNS.to_vec());
    let members = || ensemble(cfg.ensemble_size, cfg.seed.unwrap_or_default());
    let levels: Vec<f64> = cfg.levels.iter().map(|&l| l as f64).collect();
    match cfg.estimate {
        EstimateKind::Strichartz => {
            let p = StrichartzParams::new(cfg.q, cfg.theta.unwrap_or(StrichartzParams::min_theta(cfg.q)), cfg.eps)?;
            let rep = strichartz_report(&members(), &p, &cfg.levels)?;
            report_rows(cfg, &mut t, &rep, &levels);
        }
        EstimateKind::Multiplier => {
            let rep = multiplier_ratio(&members(), &multiplier_params(cfg)?, &cfg.levels)?;
            report_rows(cfg, &mut t, &rep, &levels);
        }
        EstimateKind::Witness => {
            if let Some(&n) = cfg.n_list.iter().find(|&&n| !((1.0..=MAX_WITNESS_N).contains(&n) && n.fract() == 0.0)) {
                return Err(Error::Precondition(format!(
                    "witness frequencies must be integers in [1, {MAX_WITNESS_N}], got {n}"
                )));
            }
            let ns: Vec<u32> = cfg.n_list.iter().map(|&n| n as u32).collect();
            let rep = concentration_witness(&multiplier_params(cfg)?, &ns)?;
            report_rows(cfg, &mut t, &rep, &cfg.n_list);
            t.blocks = Some(vec![PlotBlock {
                label: rep.which.clone(),
                points: cfg.n_list.iter().zip(&rep.ratio_per_resolution).map(|(n, r)| (n.log2(), r.log2())).collect(),
            }]);
        }
        EstimateKind::Bilinear => {
            let rep = bilinear_report(&members(), &weight_spec(cfg)?, cfg.region, &cfg.levels)?;
            report_rows(cfg, &mut t, &rep, &levels);
        }
        EstimateKind::BilinearGrowth => {
            let wts = cfg.weights;
            let w = WeightSpec::unchecked(wts.rho, wts.a, wts.eps_alpha, wts.eps_beta);
            let g = f1_bilinear_growth(&w, cfg.eps0, &cfg.n_list)?;
            let trend = if g.fitted_slope > 0.0 { "growing" } else { "bounded" };
            for (n, r) in g.n_list.iter().zip(&g.ratios) {
                t.rows.push(row(
                    cfg,
                    vec![
                        text(format!("BE_F1(rho={},a={})", g.rho, g.a)),
                        Cell::Num(*n),
                        Cell::Num(*r),
                        Cell::Num(g.predicted_slope),
                        text(trend),
                        Cell::Num(g.fitted_slope),
                        Cell::Empty,
                    ],
                ));
            }
            t.blocks = Some(vec![PlotBlock {
                label: format!("BE_F1 rho={}", g.rho),
                points: g.n_list.iter().zip(&g.ratios).map(|(n, r)| (n.log2(), r.log2())).collect(),
            }]);
        }
        EstimateKind::Embedding => {
            let level = cfg.levels.iter().copied().max().unwrap_or(0);
            let grid = box_grid(level)?;
            let fields: Vec<SpectrumField> = members().iter().map(|m| m.sample(grid)).collect();
            for c in embedding_report(&fields, &weight_spec(cfg)?)? {
                t.rows.push(row(
                    cfg,
                    vec![
                        text(c.name),
                        Cell::Num(level as f64),
                        Cell::Num(c.max_ratio),
                        Cell::Num(c.constant),
                        text(if c.violated { "violated" } else { "holds" }),
                        Cell::Empty,
                        Cell::Empty,
                    ],
                ));
            }
        }
        EstimateKind::Identity => {
            let grid = match cfg.grid {
                Some(g) => g,
                None => box_grid(2)?,
            };
            let rep = region_identity_check(&grid, cfg.samples, cfg.seed.unwrap_or_default());
            let quantities = [
                ("identity_defect", rep.max_identity_defect, 1e-9),
                ("resonance_ratio", rep.min_resonance_ratio, 0.5),
            ];
            for (name, v, bound) in quantities {
                t.rows.push(row(
                    cfg,
                    vec![
                        text(name),
                        Cell::Num(rep.samples as f64),
                        Cell::Num(v),
                        Cell::Num(bound),
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                    ],
                ));
            }
        }
    }
    Ok(t)
}
