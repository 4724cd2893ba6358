//! Command dispatch: each command builds one table and writes it with its
//! sidecar.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gravdec_core::composite::{ball_rate_bound, ball_rate_numeric, BallQuadrature, MassDistribution, BALL_GEOMETRIC_FACTOR};
use gravdec_core::dp::{comparison_row_with, dp_rate, dp_regime, ktm_rate_range, DPParams, DPRegime};
use gravdec_core::gaussian::{entanglement_threshold_scan, sample_separable, DynamicsSpec, GaussianState};
use gravdec_core::interferometry::{fig1_dataset, gradiometer_contrast, FountainExperiment, GradiometerConfig, GradientMode, MeasuredPoint};
use gravdec_core::lab::{
    constraint_chain, ktm_torsion_estimate, optomech_thresholds, quadratic_coeffs, torsion_angular_rate, InertiaChoice, PairTerms,
    TorsionBalanceConfig,
};
use gravdec_core::scenario::Scenario;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::ReportError;
use crate::measured::{load_measured, parse_measured};
use crate::output::{sidecar, write_table, Table};
use crate::scenario_file::{load_scenarios, parse_scenarios};

/// The shipped decoherence-time table scenarios.
pub const TABLE1_SCN: &str = include_str!("../data/table1.scn");
/// The shipped placeholder measurements for the fountain comparison.
pub const FIG1_MEASURED: &str = include_str!("../data/fig1_measured.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Rates,
    Table1,
    Fig1,
    EntangleScan,
    Torsion,
    Thresholds,
    Gradiometer,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Rates,
        Command::Table1,
        Command::Fig1,
        Command::EntangleScan,
        Command::Torsion,
        Command::Thresholds,
        Command::Gradiometer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Rates => "rates",
            Command::Table1 => "table1",
            Command::Fig1 => "fig1",
            Command::EntangleScan => "entangle-scan",
            Command::Torsion => "torsion",
            Command::Thresholds => "thresholds",
            Command::Gradiometer => "gradiometer",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
                format!("unknown command `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Scenario file; `rates` and `table1` fall back to the shipped table1 set.
    pub scenarios: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: u64,
    pub c_factor: Option<f64>,
    /// Measured visibilities for `fig1`; defaults to the shipped file.
    pub measured: Option<PathBuf>,
    /// Adds a provenance column naming the operation behind each row.
    pub verbose: bool,
}

/// A built table plus what the sidecar records about it.
#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    pub provenance: Vec<String>,
    pub inputs: Value,
    pub seeded: bool,
}

/// Runs `cmd` and returns the written files.
pub fn run(cmd: Command, opts: &RunOptions) -> Result<Vec<PathBuf>, ReportError> {
    let report = build(cmd, opts)?;
    let seed = report.seeded.then_some(opts.seed);
    let table = if opts.verbose {
        report.table.with_column("provenance", report.provenance)
    } else {
        report.table
    };
    let meta = sidecar(cmd.name(), seed, report.inputs, &table);
    write_table(&opts.out, &cmd.name().replace('-', "_"), &table, &meta)
}

pub fn build(cmd: Command, opts: &RunOptions) -> Result<Report, ReportError> {
    match cmd {
        Command::Rates => rates(&scenarios(opts)?, opts.seed, opts.c_factor).map(|r| with_source(r, opts.scenarios.as_deref())),
        Command::Table1 => table1(&scenarios(opts)?, opts.seed, opts.c_factor).map(|r| with_source(r, opts.scenarios.as_deref())),
        Command::Fig1 => {
            let measured = match &opts.measured {
                Some(p) => load_measured(p)?,
                None => parse_measured(FIG1_MEASURED)?,
            };
            let cs = match opts.c_factor {
                Some(c) => vec![c],
                None => vec![1.0, BALL_GEOMETRIC_FACTOR, 0.1],
            };
            let mut r = fig1(&measured, &cs)?;
            r.inputs["measured_file"] = path_json(opts.measured.as_deref());
            Ok(r)
        }
        Command::EntangleScan => entangle_scan(opts.seed),
        Command::Torsion => torsion(),
        Command::Thresholds => thresholds(),
        Command::Gradiometer => gradiometer(opts.c_factor.unwrap_or(BALL_GEOMETRIC_FACTOR)),
    }
}

fn path_json(p: Option<&Path>) -> Value {
    p.map_or(json!("builtin"), |p| json!(p.display().to_string()))
}

fn with_source(mut r: Report, path: Option<&Path>) -> Report {
    r.inputs["scenario_file"] = path_json(path);
    r
}

fn scenarios(opts: &RunOptions) -> Result<Vec<Scenario>, ReportError> {
    let mut list = match &opts.scenarios {
        Some(p) => load_scenarios(p)?,
        None => parse_scenarios(TABLE1_SCN)?,
    };
    if let Some(c) = opts.c_factor {
        for s in &mut list {
            s.c_factor = c;
        }
    }
    Ok(list)
}

fn quad(seed: u64) -> BallQuadrature {
    BallQuadrature {
        seed,
        ..BallQuadrature::default()
    }
}

fn scenario_inputs(list: &[Scenario]) -> Value {
    json!(list
        .iter()
        .map(|s| json!({
            "name": s.name,
            "test_mass": s.test_mass,
            "dx": s.dx(),
            "dp_delta": s.dp_delta,
            "c_factor": s.c_factor,
            "single_particle_sources": s.single_particle_sources,
            "sources": s.sources.len(),
        }))
        .collect::<Vec<_>>())
}

pub fn rates(list: &[Scenario], seed: u64, c_override: Option<f64>) -> Result<Report, ReportError> {
    let mut t = Table::new(&[
        "scenario",
        "dx_m",
        "ktm_coefficient",
        "gamma_ktm",
        "gamma_dp",
        "dp_regime",
        "ktm_upper_at_rs",
        "ball_bound_coefficient",
        "ball_numeric_coefficient",
        "ball_numeric_half_width",
    ]);
    let mut prov = Vec::new();
    let q = quad(seed);
    for s in list {
        let row = comparison_row_with(s, &q).map_err(|e| scenario_err(s, e))?;
        let params = DPParams::new(s.dp_delta, s.test_mass, row.dx, 1)?;
        let dp = dp_rate(&params)?;
        let regime = match dp_regime(&params) {
            DPRegime::SmallDelta => "small_delta",
            DPRegime::General => "general",
        };
        let source_mass: f64 = s.sources.iter().map(MassDistribution::total_mass).sum();
        let upper = if source_mass > 0.0 {
            Some(ktm_rate_range(s.test_mass, source_mass, row.dx)?.1)
        } else {
            None
        };
        let ball = s.sources.iter().find_map(|d| match d {
            MassDistribution::HomogeneousBall { mass, radius, .. } => Some((*mass, *radius)),
            _ => None,
        });
        let (bound, numeric, half) = match ball {
            Some((bm, br)) => {
                let (_, b) = ball_rate_bound(s.test_mass, bm, br)?;
                let est = ball_rate_numeric(s.test_mass, bm, br, 0.0, &q).map_err(|e| scenario_err(s, e))?;
                (Some(b), Some(est.value), Some(est.half_width))
            }
            None => (None, None, None),
        };
        t.push(vec![
            s.name.as_str().into(),
            row.dx.into(),
            row.ktm_coefficient.into(),
            (row.ktm_coefficient * row.dx * row.dx).into(),
            dp.gamma.into(),
            regime.into(),
            upper.into(),
            bound.into(),
            numeric.into(),
            half.into(),
        ]);
        prov.push(
            "dp::comparison_row;dp::dp_rate;dp::ktm_rate_range;composite::ball_rate_bound;composite::ball_rate_numeric".into(),
        );
    }
    Ok(Report {
        table: t,
        provenance: prov,
        inputs: json!({ "scenarios": scenario_inputs(list), "c_factor_override": c_override, "ball_samples": q.samples }),
        seeded: true,
    })
}

fn scenario_err(s: &Scenario, e: gravdec_core::Error) -> ReportError {
    ReportError::Scenario {
        scenario: s.name.clone(),
        source: e,
    }
}

pub fn table1(list: &[Scenario], seed: u64, c_override: Option<f64>) -> Result<Report, ReportError> {
    let mut t = Table::new(&["scenario", "m_kg", "dx_m", "one_over_gamma_dp_s", "one_over_gamma_ktm_s"]);
    let mut prov = Vec::new();
    let q = quad(seed);
    for s in list {
        let row = comparison_row_with(s, &q).map_err(|e| scenario_err(s, e))?;
        t.push(vec![
            s.name.as_str().into(),
            s.test_mass.into(),
            row.dx.into(),
            row.one_over_gamma_dp.into(),
            row.one_over_gamma_ktm.into(),
        ]);
        prov.push("dp::comparison_row".into());
    }
    Ok(Report {
        table: t,
        provenance: prov,
        inputs: json!({ "scenarios": scenario_inputs(list), "c_factor_override": c_override }),
        seeded: list.iter().any(|s| !s.single_particle_sources),
    })
}

pub fn fig1(measured: &[MeasuredPoint], c_values: &[f64]) -> Result<Report, ReportError> {
    let mut t = Table::new(&["experiment", "order", "c_factor", "log10_v_pred", "log10_v_meas"]);
    let mut prov = Vec::new();
    let exps = [FountainExperiment::kovachy(), FountainExperiment::sugarbaker()];
    for e in &exps {
        for r in fig1_dataset(e, c_values, &e.orders(), Some(measured))? {
            t.push(vec![
                r.experiment.into(),
                r.order.into(),
                r.c_factor.into(),
                r.log10_v_pred.into(),
                r.log10_v_meas.into(),
            ]);
            prov.push("interferometry::visibility_max".into());
        }
    }
    let exp_json: Vec<Value> = exps
        .iter()
        .map(|e| {
            json!({ "id": e.id, "t_half": e.t_half, "recoil": e.recoil, "m": e.m, "max_order": e.max_order,
                    "source_mass": e.source_mass, "source_radius": e.source_radius })
        })
        .collect();
    Ok(Report {
        table: t,
        provenance: prov,
        inputs: json!({ "c_values": c_values, "experiments": exp_json, "measured_points": measured.len() }),
        seeded: false,
    })
}

/// Dephasing grid for the scan, in units of the coupling (ħ = 1).
pub const SCAN_DEPHASING: [f64; 11] = [0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.45, 0.5, 0.6, 0.8, 1.0];
pub const SCAN_HORIZON: f64 = 2.0;
const SCAN_RANDOM_STATES: usize = 4;

pub fn entangle_scan(seed: u64) -> Result<Report, ReportError> {
    let mut t = Table::new(&["input", "coupling", "dephasing", "max_log_negativity"]);
    let mut prov = Vec::new();
    let spec = DynamicsSpec::rescaled(1.0, 0.0);
    let squeezed = [[0.5 * (-2.0f64).exp(), 0.0], [0.0, 0.5 * 2.0f64.exp()]];
    let mut inputs = vec![("squeezed".to_string(), GaussianState::product(squeezed, squeezed, 1.0)?)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..SCAN_RANDOM_STATES {
        inputs.push((format!("separable-{i}"), sample_separable(&mut rng, 1.0)));
    }
    for (name, state) in &inputs {
        for row in entanglement_threshold_scan(&spec, &SCAN_DEPHASING, SCAN_HORIZON, state)? {
            t.push(vec![
                name.as_str().into(),
                spec.coupling.into(),
                row.dephasing.into(),
                row.max_log_negativity.into(),
            ]);
            prov.push("gaussian::entanglement_threshold_scan".into());
        }
    }
    Ok(Report {
        table: t,
        provenance: prov,
        inputs: json!({
            "units": "hbar = m1 = m2 = 1",
            "coupling": spec.coupling,
            "threshold": spec.minimal_dephasing(),
            "horizon": SCAN_HORIZON,
            "squeezing_r": 1.0,
            "random_states": SCAN_RANDOM_STATES,
        }),
        seeded: true,
    })
}

fn quantity_table() -> Table {
    Table::new(&["quantity", "value", "unit"])
}

pub fn torsion() -> Result<Report, ReportError> {
    let cfg = TorsionBalanceConfig::reference();
    let (t_run, dg, da) = (86_400.0, 1e-6, 1.0);
    let chain = constraint_chain(&cfg, t_run, dg, da, InertiaChoice::Quoted)?;
    let formula = constraint_chain(&cfg, t_run, dg, da, InertiaChoice::Formula)?;
    let (b_full, _) = quadratic_coeffs(&cfg, PairTerms::Full)?;
    let (b_printed, c_printed) = quadratic_coeffs(&cfg, PairTerms::Printed)?;
    let angular = torsion_angular_rate(chain.c_quad, da)?;
    let linear = ktm_torsion_estimate(cfg.m, cfg.big_m, cfg.nearest_separation(), cfg.r * da)?;
    let rows: Vec<(&str, f64, &str, &str)> = vec![
        ("variance_coefficient", chain.variance_coefficient, "s^-1", "lab::variance_coefficient"),
        ("t_eps_bound", chain.t_eps_bound, "s", "lab::constraint_chain"),
        ("eps_bound", chain.eps_bound, "1", "lab::constraint_chain"),
        ("rate_bound", chain.rate_bound, "s^-1", "lab::constraint_chain"),
        ("i_eff_quoted", chain.i_eff_quoted, "kg m^2", "lab::QUOTED_I_EFF"),
        ("i_eff_formula", chain.i_eff_formula, "kg m^2", "lab::effective_inertia"),
        ("i_eff_formula_over_quoted", chain.inertia_discrepancy(), "1", "lab::constraint_chain"),
        ("rate_bound_formula_inertia", formula.rate_bound, "s^-1", "lab::constraint_chain"),
        ("b_coeff", b_full, "J rad^-1", "lab::quadratic_coeffs"),
        ("c_quad", chain.c_quad, "J rad^-2", "lab::quadratic_coeffs"),
        ("b_coeff_printed_sums", b_printed, "J rad^-1", "lab::quadratic_coeffs"),
        ("c_quad_printed_sums", c_printed, "J rad^-2", "lab::quadratic_coeffs"),
        ("angular_rate", angular, "s^-1", "lab::torsion_angular_rate"),
        ("linear_rate_estimate", linear, "s^-1", "lab::ktm_torsion_estimate"),
    ];
    let mut t = quantity_table();
    let mut prov = Vec::new();
    for (q, v, u, p) in rows {
        t.push(vec![q.into(), v.into(), u.into()]);
        prov.push(p.to_string());
    }
    Ok(Report {
        table: t,
        provenance: prov,
        inputs: json!({
            "m": cfg.m, "M": cfg.big_m, "r": cfg.r, "R": cfg.big_r, "alpha0_rad": cfg.alpha0,
            "run_time_s": t_run, "dg_over_g": dg, "delta_alpha_rad": da, "inertia": "quoted",
        }),
        seeded: false,
    })
}

pub fn thresholds() -> Result<Report, ReportError> {
    let th = optomech_thresholds();
    let cfg = TorsionBalanceConfig::reference();
    let linear = ktm_torsion_estimate(cfg.m, cfg.big_m, cfg.nearest_separation(), cfg.r)?;
    let rows: Vec<(&str, f64, &str, &str)> = vec![
        ("thermal_threshold", th.thermal, "K s^-1", "lab::optomech_thresholds"),
        ("thermal_state_of_art", th.thermal_state_of_art, "K s^-1", "lab::optomech_thresholds"),
        ("thermal_gap", th.thermal_state_of_art / th.thermal, "1", "lab::optomech_thresholds"),
        ("freq_sq_threshold", th.freq_sq, "s^-2", "lab::optomech_thresholds"),
        ("freq_sq_state_of_art", th.freq_sq_state_of_art, "s^-2", "lab::optomech_thresholds"),
        ("freq_sq_gap", th.freq_sq_state_of_art / th.freq_sq, "1", "lab::optomech_thresholds"),
        ("torsion_rate_estimate", linear, "s^-1", "lab::ktm_torsion_estimate"),
    ];
    let mut t = quantity_table();
    let mut prov = Vec::new();
    for (q, v, u, p) in rows {
        t.push(vec![q.into(), v.into(), u.into()]);
        prov.push(p.to_string());
    }
    Ok(Report {
        table: t,
        provenance: prov,
        inputs: json!({
            "earth_mass": gravdec_core::constants::EARTH_MASS,
            "earth_radius": gravdec_core::constants::EARTH_RADIUS,
            "torsion_m": cfg.m, "torsion_M": cfg.big_m,
            "torsion_separation": cfg.nearest_separation(), "torsion_dx": cfg.r,
        }),
        seeded: false,
    })
}

/// Horizontal source distances swept by `gradiometer` (m).
pub fn gradiometer_distances() -> Vec<f64> {
    (0..=10).map(|i| 0.25 + 0.025 * i as f64).collect()
}

pub fn gradiometer(c_factor: f64) -> Result<Report, ReportError> {
    let mut t = Table::new(&["mode", "d_h_m", "contrast_lower", "contrast_upper"]);
    let mut prov = Vec::new();
    let base = GradiometerConfig {
        c_factor,
        ..GradiometerConfig::default()
    };
    for (mode, label) in [(GradientMode::ThreeD, "three_d"), (GradientMode::OnAxis, "on_axis")] {
        let cfg = GradiometerConfig { mode, ..base };
        for d in gradiometer_distances() {
            let (lo, up) = gradiometer_contrast(&cfg, d)?;
            t.push(vec![label.into(), d.into(), lo.into(), up.into()]);
            prov.push("interferometry::gradiometer_contrast".into());
        }
    }
    Ok(Report {
        table: t,
        provenance: prov,
        inputs: json!({
            "source_mass": base.source_mass, "separation": base.separation, "lmt_order": base.lmt_order,
            "t_half": base.t_half, "recoil": base.recoil, "m": base.m, "c_factor": base.c_factor,
            "earth_mass": base.earth_mass, "earth_radius": base.earth_radius,
        }),
        seeded: false,
    })
}
