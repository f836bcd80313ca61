use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::args::{Command, Common, ConstructionArg, Format, MomentArg, OperatorArg};
use crate::export::{distribution_csv, operator_csv, table_csv, to_json};
use crate::fock::{TruncatedState, MAX_DIM};
use crate::format::fmt_sig;
use crate::logseries::{build_log_series_operator, equivalence_report, LogSeriesConfig};
use crate::moments::MomentReport;
use crate::operator::OperatorMatrix;
use crate::pegg_barnett::{pb_distribution, pb_moments, pb_phase_operator, PBConfig, DEFAULT_PB_S};
use crate::quadrature::{
    build_polar_grid, default_angular_nodes, moments_from_marginal, phase_marginal, MomentRule,
    PolarGrid, DEFAULT_RADIAL_NODES,
};
use crate::statespec::parse_state_spec;
use crate::turski::{
    acid_test, build_phase_operator_analytic, build_phase_operator_quadrature,
    check_equation_of_motion, evolve_phase_operator, operator_expectation_moments,
    unitarity_defect, Construction, EvolutionConfig,
};
use crate::window::PhaseWindow;
use crate::{PhaseError, Result};

pub const DEFAULT_DIM: usize = 32;
pub const DEFAULT_KMAX: u32 = 2;
/// Largest Pegg-Barnett `s` accepted on the command line.
pub const MAX_PB_S: usize = 1_000_000;

/// Result of one command before anything is written.
pub struct Outcome {
    pub report: String,
    /// Extra files written next to `--out`.
    pub sidecars: Vec<(PathBuf, String)>,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(report: String) -> Self {
        Outcome {
            report,
            sidecars: Vec::new(),
            exit_code: 0,
        }
    }
}

/// Resolves defaults and records every value used.
pub struct Context<'a> {
    common: &'a Common,
    pub resolved: Map<String, Value>,
}

impl<'a> Context<'a> {
    pub fn new(common: &'a Common) -> Self {
        Context {
            common,
            resolved: Map::new(),
        }
    }

    fn record(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).unwrap_or(Value::Null);
        self.resolved.insert(key.to_string(), value);
    }

    fn format(&mut self, default: Format) -> Format {
        let f = self.common.format.unwrap_or(default);
        self.record("format", if f == Format::Csv { "csv" } else { "json" });
        f
    }

    fn window(&mut self) -> Result<PhaseWindow> {
        let theta0 = self.common.theta0.unwrap_or(0.0);
        self.record("theta0", theta0);
        PhaseWindow::new(theta0)
    }

    fn dim(&mut self, default: usize) -> Result<usize> {
        let dim = self.common.dim.unwrap_or(default);
        self.record("dim", dim);
        if dim == 0 || dim > MAX_DIM {
            return Err(PhaseError::dimension(format!(
                "--dim must be in 1..={MAX_DIM}, got {dim}"
            )));
        }
        Ok(dim)
    }

    fn grid(&mut self, dim: usize, window: PhaseWindow) -> Result<PolarGrid> {
        let radial = self.common.radial.unwrap_or(DEFAULT_RADIAL_NODES);
        let angular = self
            .common
            .angular
            .unwrap_or_else(|| default_angular_nodes(dim));
        self.record("radial", radial);
        self.record("angular", angular);
        build_polar_grid(radial, angular, window)
    }

    fn pb_config(&mut self, default_s: usize, window: PhaseWindow) -> Result<PBConfig> {
        let s = self.common.pb_s.unwrap_or(default_s);
        self.record("pb_s", s);
        if s > MAX_PB_S {
            return Err(PhaseError::dimension(format!(
                "--pb-s must be at most {MAX_PB_S}, got {s}"
            )));
        }
        PBConfig::for_window(s, window)
    }

    fn state(&mut self, text: &str) -> Result<(TruncatedState, usize)> {
        let spec = parse_state_spec(text)?;
        let natural = spec.natural_dim()?;
        let dim = self.dim(DEFAULT_DIM.max(natural))?;
        self.record("state", spec.to_string());
        self.record("force", self.common.force);
        Ok((spec.materialize(dim, self.common.force)?, dim))
    }
}

fn moments_csv(report: &MomentReport) -> String {
    let rows: Vec<Vec<f64>> = report
        .moments
        .iter()
        .zip(&report.centered)
        .enumerate()
        .map(|(k, (m, c))| vec![(k + 1) as f64, *m, *c])
        .collect();
    table_csv(&["k", "moment", "centered"], &rows)
}

fn summary_csv(reports: &[MomentReport]) -> String {
    let mut out = String::from("method,mean,second_moment,variance,norm_defect\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.method,
            fmt_sig(r.mean),
            fmt_sig(r.second_moment),
            fmt_sig(r.variance),
            fmt_sig(r.norm_defect)
        ));
    }
    out
}

/// Phase points and their weights.
type Distribution = (Vec<f64>, Vec<f64>);

/// One method's moments plus its phase distribution, if it has one.
fn moments_for(
    ctx: &mut Context<'_>,
    method: MomentArg,
    state: &TruncatedState,
    dim: usize,
    k_max: u32,
    window: PhaseWindow,
) -> Result<(MomentReport, Option<Distribution>)> {
    match method {
        MomentArg::Q => {
            let grid = ctx.grid(dim, window)?;
            let dist = phase_marginal(state, &grid)?;
            let mut report = moments_from_marginal(&dist, k_max, MomentRule::Spectral)?;
            report.grid.dim = Some(dim);
            Ok((report, Some((dist.thetas, dist.values))))
        }
        MomentArg::Pb => {
            let cfg = ctx.pb_config(DEFAULT_PB_S, window)?;
            let report = pb_moments(state, cfg, k_max)?;
            let probs = pb_distribution(state, cfg)?;
            Ok((report, Some((cfg.thetas(), probs))))
        }
        MomentArg::Operator => Ok((
            operator_expectation_moments(state, Some(dim), k_max, window)?,
            None,
        )),
    }
}

fn operator_json(op: &OperatorMatrix) -> Value {
    let n = op.dim();
    let part = |f: fn(num_complex::Complex64) -> f64| -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| op.entries.row(i).iter().map(|z| f(*z)).collect())
            .collect()
    };
    json!({
        "method": op.method,
        "dim": n,
        "meta": op.meta,
        "re": part(|z| z.re),
        "im": part(|z| z.im),
    })
}

fn operator_meta(op: &OperatorMatrix) -> Value {
    json!({ "method": op.method, "dim": op.dim(), "meta": op.meta })
}

/// Writes the operator in the chosen format and, with `--out`, a
/// `<out>.meta.json` sidecar holding the metadata and any extras.
fn emit_operator(
    ctx: &mut Context<'_>,
    op: &OperatorMatrix,
    extra: Option<(&str, Value)>,
) -> Result<Outcome> {
    let format = ctx.format(Format::Csv);
    let report = match format {
        Format::Csv => operator_csv(&op.entries),
        Format::Json => to_json(&operator_json(op))?,
    };
    let mut meta = operator_meta(op);
    if let (Some((key, value)), Value::Object(map)) = (extra, &mut meta) {
        map.insert(key.to_string(), value);
    }
    let mut outcome = Outcome::ok(report);
    if let Some(out) = &ctx.common.out {
        let mut path = out.clone().into_os_string();
        path.push(".meta.json");
        outcome
            .sidecars
            .push((PathBuf::from(path), to_json(&meta)?));
    }
    Ok(outcome)
}

pub fn execute(command: &Command, ctx: &mut Context<'_>) -> Result<Outcome> {
    match command {
        Command::AcidTest { n } => {
            let window = ctx.window()?;
            let dim = ctx.dim(DEFAULT_DIM)?;
            ctx.record("n", n);
            let grid = ctx.grid(dim, window)?;
            let format = ctx.format(Format::Json);
            let report = acid_test(*n, dim, &grid)?;
            let text = match format {
                Format::Json => to_json(&report)?,
                Format::Csv => table_csv(
                    &["n", "dim", "variance", "expected", "deviation", "pass"],
                    &[vec![
                        *n as f64,
                        dim as f64,
                        report.variance,
                        report.expected,
                        report.deviation,
                        if report.pass { 1.0 } else { 0.0 },
                    ]],
                ),
            };
            Ok(Outcome {
                report: text,
                sidecars: Vec::new(),
                exit_code: if report.pass { 0 } else { 2 },
            })
        }
        Command::Moments {
            state,
            method,
            kmax,
        } => {
            let window = ctx.window()?;
            let (state, dim) = ctx.state(state)?;
            ctx.record("kmax", kmax);
            ctx.record("method", format!("{method:?}").to_lowercase());
            let format = ctx.format(Format::Json);
            let (report, dist) = moments_for(ctx, *method, &state, dim, *kmax, window)?;
            let text = match (format, dist) {
                (Format::Json, _) => to_json(&report)?,
                (Format::Csv, Some((thetas, values))) => distribution_csv(&thetas, &values),
                (Format::Csv, None) => moments_csv(&report),
            };
            Ok(Outcome::ok(text))
        }
        Command::Compare {
            state,
            methods,
            kmax,
        } => {
            let window = ctx.window()?;
            let (state, dim) = ctx.state(state)?;
            ctx.record("kmax", kmax);
            let names: Vec<String> = methods
                .iter()
                .map(|m| format!("{m:?}").to_lowercase())
                .collect();
            ctx.record("methods", &names);
            let format = ctx.format(Format::Json);
            let mut reports = Vec::with_capacity(methods.len());
            for m in methods {
                reports.push(moments_for(ctx, *m, &state, dim, *kmax, window)?.0);
            }
            let text = match format {
                Format::Json => to_json(&json!({
                    "state": state.label(),
                    "dim": dim,
                    "reports": reports,
                }))?,
                Format::Csv => summary_csv(&reports),
            };
            Ok(Outcome::ok(text))
        }
        Command::Operator { method } => {
            let window = ctx.window()?;
            let dim = ctx.dim(DEFAULT_DIM)?;
            ctx.record("method", format!("{method:?}"));
            match method {
                OperatorArg::TurskiAnalytic => {
                    let op = build_phase_operator_analytic(dim, window)?;
                    emit_operator(ctx, &op, None)
                }
                OperatorArg::TurskiQuadrature => {
                    let grid = ctx.grid(dim, window)?;
                    let op = build_phase_operator_quadrature(dim, &grid)?;
                    emit_operator(ctx, &op, None)
                }
                OperatorArg::PeggBarnett => {
                    let cfg = ctx.pb_config(dim.max(2) - 1, window)?;
                    if cfg.dim() > MAX_DIM {
                        return Err(PhaseError::dimension(format!(
                            "Pegg-Barnett operator dimension s+1 = {} exceeds {MAX_DIM}",
                            cfg.dim()
                        )));
                    }
                    let op = pb_phase_operator(cfg);
                    emit_operator(ctx, &op, None)
                }
                OperatorArg::LogSeries => {
                    let mut cfg = LogSeriesConfig::for_report(dim);
                    if let Some(w) = ctx.common.dim_work {
                        cfg.dim_work = w;
                        cfg.chi = 4.0 * (w as f64).sqrt();
                    }
                    if let Some(chi) = ctx.common.chi {
                        cfg.chi = chi;
                    }
                    if let Some(k) = ctx.common.series_order {
                        cfg.series_order = k;
                    }
                    cfg.allow_unconverged = ctx.common.allow_unconverged;
                    ctx.record("dim_work", cfg.dim_work);
                    if cfg.dim_work > MAX_DIM {
                        return Err(PhaseError::dimension(format!(
                            "--dim-work must be at most {MAX_DIM}"
                        )));
                    }
                    ctx.record("chi", cfg.chi);
                    ctx.record("series_order", cfg.series_order);
                    ctx.record("allow_unconverged", cfg.allow_unconverged);
                    let op = build_log_series_operator(&cfg)?;
                    let reference = build_phase_operator_analytic(dim, window)?;
                    let eq = equivalence_report(&op, &reference, dim)?;
                    emit_operator(
                        ctx,
                        &op,
                        Some((
                            "equivalence",
                            serde_json::to_value(eq).unwrap_or(Value::Null),
                        )),
                    )
                }
            }
        }
        Command::Unitarity { construction } => {
            let window = ctx.window()?;
            let dim = ctx.dim(DEFAULT_DIM)?;
            ctx.record("construction", format!("{construction:?}").to_lowercase());
            let format = ctx.format(Format::Json);
            let report = match construction {
                ConstructionArg::Analytic => unitarity_defect(dim, Construction::Analytic(window))?,
                ConstructionArg::Quadrature => {
                    let grid = ctx.grid(dim, window)?;
                    unitarity_defect(dim, Construction::Quadrature(&grid))?
                }
            };
            let text = match format {
                Format::Json => to_json(&report)?,
                Format::Csv => {
                    let mut out = String::from("n,edag_e,e_edag,closed_form\n");
                    for n in 0..dim {
                        let closed = report
                            .closed_form
                            .get(n)
                            .map(|v| fmt_sig(*v))
                            .unwrap_or_default();
                        out.push_str(&format!(
                            "{n},{},{},{closed}\n",
                            fmt_sig(report.edag_e_diagonal[n]),
                            fmt_sig(report.e_edag_diagonal[n])
                        ));
                    }
                    out
                }
            };
            Ok(Outcome::ok(text))
        }
        Command::Evolve {
            omega,
            t,
            check,
            step,
        } => {
            let window = ctx.window()?;
            let dim = ctx.dim(DEFAULT_DIM)?;
            ctx.record("omega", omega);
            ctx.record("t", t);
            ctx.record("check", check);
            let config = EvolutionConfig::new(*omega, *t)?;
            let op = build_phase_operator_analytic(dim, window)?;
            if *check {
                ctx.record("step", step);
                let format = ctx.format(Format::Json);
                let report = check_equation_of_motion(&op, config, *step)?;
                let text = match format {
                    Format::Json => to_json(&report)?,
                    Format::Csv => table_csv(
                        &["t", "sandwich_deviation", "derivative_deviation", "pass"],
                        &[vec![
                            *t,
                            report.sandwich_deviation,
                            report.derivative_deviation,
                            if report.pass { 1.0 } else { 0.0 },
                        ]],
                    ),
                };
                Ok(Outcome {
                    report: text,
                    sidecars: Vec::new(),
                    exit_code: if report.pass { 0 } else { 2 },
                })
            } else {
                let evolved = evolve_phase_operator(&op, config);
                emit_operator(ctx, &evolved, None)
            }
        }
    }
}
