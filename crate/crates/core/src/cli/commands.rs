use std::path::Path;

use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::measures::{
    epsilon, epsilon_second_derivative, eof, evaluate, nats_to_bits, negativity, p_mu, MeasureKind,
    MeasureReport, Method, OptimizerMetadata,
};
use crate::oracle::{
    convex_hull_1d, convex_roof_numeric, max_p_mu_over_u, min_epsilon_numeric, OptimizerConfig,
    PureMeasure,
};
use crate::spin_algebra::Spin;
use crate::states::{
    chi_state, phi_product_state, random_density_matrix, rho_p, twirl_exact, twirl_monte_carlo,
    twirl_overlaps, DensityMatrix,
};

use super::formats::{Csv, StateFile};
use super::{
    Builder, Cli, Command, EvalArgs, FigureArgs, Format, Outcome, SweepArgs, TwirlArgs, VerifyArgs,
};

/// Spins shown in both figures.
pub const FIGURE_SPINS: [Spin; 3] = [Spin::HALF, Spin::ONE, Spin::from_twice(6)];

pub(super) fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Eval(args) => cmd_eval(cli, args),
        Command::Sweep(args) => cmd_sweep(cli, args),
        Command::Figure(args) => cmd_figure(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Twirl(args) => cmd_twirl(cli, args),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn units(kind: MeasureKind, bits: bool, value: f64) -> f64 {
    if bits && kind.is_entropic() {
        nats_to_bits(value)
    } else {
        value
    }
}

fn unit_name(bits: bool) -> &'static str {
    if bits {
        "bits"
    } else {
        "nats"
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("p", p, "[0, 1]"));
    }
    Ok(())
}

fn metadata<W>(r: &crate::oracle::OracleResult<W>) -> Option<OptimizerMetadata> {
    Some(r.metadata)
}

fn oracle_report(kind: MeasureKind, j: Spin, p: f64, n_terms: Option<usize>, cfg: &OptimizerConfig) -> Result<MeasureReport> {
    let (value, metadata) = match kind {
        MeasureKind::Epsilon => {
            let r = min_epsilon_numeric(j, p, cfg)?;
            (r.value, metadata(&r))
        }
        MeasureKind::Negativity => (negativity(&rho_p(j, p)?), None),
        _ => {
            let r = convex_roof_numeric(&rho_p(j, p)?, PureMeasure::from_kind(kind)?, n_terms, cfg)?;
            (r.value, metadata(&r))
        }
    };
    Ok(MeasureReport {
        kind,
        j,
        p,
        value,
        method: Method::Oracle,
        metadata,
    })
}

fn cmd_eval(cli: &Cli, args: &EvalArgs) -> Result<Outcome> {
    check_p(args.p)?;
    let kinds = if args.measure.is_empty() {
        MeasureKind::ALL.to_vec()
    } else {
        args.measure.clone()
    };
    let cfg = args.optimizer.config(cli.seed);
    cfg.validate()?;
    let mut reports = Vec::with_capacity(kinds.len());
    for kind in kinds {
        let mut report = if args.oracle {
            oracle_report(kind, args.j, args.p, args.optimizer.n_terms, &cfg)?
        } else {
            crate::measures::report(kind, args.j, args.p)?
        };
        report.value = units(kind, cli.bits, report.value);
        reports.push(report);
    }
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&json!({
            "j": args.j,
            "p": args.p,
            "units": unit_name(cli.bits),
            "reports": reports,
        })),
        Format::Csv => {
            let mut s = String::from("measure,value,method\n");
            for r in &reports {
                let method = match r.method {
                    Method::ClosedForm => "closed_form",
                    Method::Oracle => "oracle",
                };
                s.push_str(&format!("{},{},{method}\n", r.kind, super::format_number(r.value)));
            }
            s
        }
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(Outcome::Success)
}

/// A uniform p grid and the measures to tabulate on it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub j: Spin,
    pub p_min: f64,
    pub p_max: f64,
    pub steps: usize,
    pub measures: Vec<MeasureKind>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        check_p(self.p_min)?;
        check_p(self.p_max)?;
        if self.p_min >= self.p_max {
            return Err(Error::Validation(format!(
                "p_min = {} must be below p_max = {}",
                self.p_min, self.p_max
            )));
        }
        if self.steps < 2 {
            return Err(Error::Validation("steps must be at least 2".into()));
        }
        if self.measures.is_empty() {
            return Err(Error::Validation("no measures requested".into()));
        }
        Ok(())
    }

    /// Strictly increasing grid from `p_min` to `p_max` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n)
            .map(|k| {
                if k == n {
                    self.p_max
                } else {
                    self.p_min + (self.p_max - self.p_min) * k as f64 / n as f64
                }
            })
            .collect()
    }

    /// Rows `[p, m_1(p), …]`, in grid order.
    pub fn rows(&self, bits: bool) -> Result<Vec<Vec<f64>>> {
        self.validate()?;
        self.grid()
            .into_par_iter()
            .map(|p| {
                let mut row = vec![p];
                for &kind in &self.measures {
                    row.push(units(kind, bits, evaluate(kind, self.j, p)?));
                }
                Ok(row)
            })
            .collect()
    }
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> Result<Outcome> {
    let spec = SweepSpec {
        j: args.j,
        p_min: args.p_min,
        p_max: args.p_max,
        steps: args.steps,
        measures: args.measure.clone(),
    };
    let rows = spec.rows(cli.bits)?;
    let mut header = vec!["p".to_string()];
    header.extend(spec.measures.iter().map(|m| m.name().to_string()));
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(header);
            for row in rows {
                csv.push(row.into_iter().map(Some).collect());
            }
            csv.render()
        }
        Format::Json => to_json(&json!({
            "j": spec.j,
            "units": unit_name(cli.bits),
            "columns": header,
            "rows": rows,
        })),
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(Outcome::Success)
}

/// 400 points with `1 - p` log-spaced from just under ½ down to `1e-4`, increasing in `p`.
pub fn figure1_grid() -> Vec<f64> {
    (0..400)
        .map(|k| 1.0 - 0.5 * (2e-4f64).powf((k + 1) as f64 / 400.0))
        .collect()
}

/// Rows of figure 1 (`ln ε''`, empty at or below each threshold) or figure 2 (`E_F` on `[0, 1]`).
pub fn figure_rows(which: u8, steps: usize, bits: bool) -> Result<Vec<(f64, Vec<Option<f64>>)>> {
    match which {
        1 => figure1_grid()
            .into_iter()
            .map(|p| {
                let cells = FIGURE_SPINS
                    .iter()
                    .map(|&j| {
                        if p <= j.threshold() {
                            Ok(None)
                        } else {
                            epsilon_second_derivative(j, p).map(|v| Some(v.ln()))
                        }
                    })
                    .collect::<Result<_>>()?;
                Ok((p, cells))
            })
            .collect(),
        2 => {
            let spec = SweepSpec {
                j: Spin::HALF,
                p_min: 0.0,
                p_max: 1.0,
                steps,
                measures: vec![MeasureKind::EoF],
            };
            spec.validate()?;
            spec.grid()
                .into_iter()
                .map(|p| {
                    let cells = FIGURE_SPINS
                        .iter()
                        .map(|&j| Ok(Some(units(MeasureKind::EoF, bits, eof(j, p)?))))
                        .collect::<Result<_>>()?;
                    Ok((p, cells))
                })
                .collect()
        }
        other => Err(Error::domain("figure", f64::from(other), "{1, 2}")),
    }
}

fn cmd_figure(cli: &Cli, args: &FigureArgs) -> Result<Outcome> {
    let rows = figure_rows(args.which, args.steps, cli.bits)?;
    let mut header = vec!["p".to_string()];
    header.extend(FIGURE_SPINS.iter().map(|j| format!("j={j}")));
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(header);
            for (p, cells) in rows {
                let mut row = vec![Some(p)];
                row.extend(cells);
                csv.push(row);
            }
            csv.render()
        }
        Format::Json => {
            let quantity = if args.which == 1 { "ln_epsilon_second_derivative" } else { "eof" };
            to_json(&json!({
                "figure": args.which,
                "quantity": quantity,
                "units": if args.which == 1 { "nats" } else { unit_name(cli.bits) },
                "columns": header,
                "rows": rows.into_iter().map(|(p, cells)| {
                    let mut row = vec![Some(p)];
                    row.extend(cells);
                    row
                }).collect::<Vec<_>>(),
            }))
        }
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(Outcome::Success)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyTarget {
    /// Entanglement of formation as the convex hull of oracle ε values.
    Eof,
    /// ε(p) against the constrained pure-state oracle.
    Epsilon,
    /// A convex roof of ρ(p) against the ensemble oracle.
    Roof,
    /// p_μ against the unitary maximization.
    Pmu,
}

impl VerifyTarget {
    fn default_tolerance(self) -> f64 {
        match self {
            VerifyTarget::Eof | VerifyTarget::Roof => 1e-3,
            VerifyTarget::Epsilon => 1e-4,
            VerifyTarget::Pmu => 1e-5,
        }
    }
}

/// Closed forms are proven extrema, so the oracle may only cross them by round-off.
const SANDWICH_SLACK: f64 = 1e-9;
/// Tolerance for ε below the separability threshold, where the exact value is 0.
const SEPARABLE_TOL: f64 = 1e-6;
/// Points on which ε is sampled before taking the convex hull.
const HULL_GRID: usize = 51;

#[derive(Debug, Clone, Serialize)]
struct Diagnostics {
    iterations: usize,
    restarts: usize,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
struct VerifyPoint {
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<f64>,
    closed_form: f64,
    oracle_value: f64,
    gap: f64,
    tolerance: f64,
    pass: bool,
    diagnostics: Diagnostics,
}

impl VerifyPoint {
    /// `lower_is_bound`: the oracle is a minimizer and may not fall below the closed form.
    fn judge(
        (p, mu): (Option<f64>, Option<f64>),
        closed_form: f64,
        oracle_value: f64,
        tolerance: f64,
        lower_is_bound: bool,
        meta: OptimizerMetadata,
    ) -> Self {
        let gap = oracle_value - closed_form;
        let within = if lower_is_bound {
            gap >= -SANDWICH_SLACK && gap <= tolerance
        } else {
            gap <= SANDWICH_SLACK && gap >= -tolerance
        };
        let message = if !meta.converged {
            Some("no restart met the convergence test".to_string())
        } else if !within {
            Some(format!("gap {gap:.3e} outside tolerance {tolerance:.1e}"))
        } else {
            None
        };
        VerifyPoint {
            p,
            mu,
            closed_form,
            oracle_value,
            gap,
            tolerance,
            pass: within && meta.converged,
            diagnostics: Diagnostics {
                iterations: meta.iterations,
                restarts: meta.restarts,
                converged: meta.converged,
                message,
            },
        }
    }

    fn failed(p: Option<f64>, mu: Option<f64>, closed_form: f64, tolerance: f64, err: &Error) -> Self {
        VerifyPoint {
            p,
            mu,
            closed_form,
            oracle_value: f64::NAN,
            gap: f64::NAN,
            tolerance,
            pass: false,
            diagnostics: Diagnostics {
                iterations: 0,
                restarts: 0,
                converged: false,
                message: Some(err.to_string()),
            },
        }
    }

    fn in_units(mut self, bits: bool) -> Self {
        if bits {
            for v in [&mut self.closed_form, &mut self.oracle_value, &mut self.gap, &mut self.tolerance] {
                *v = nats_to_bits(*v);
            }
        }
        self
    }
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<Outcome> {
    let cfg = args.optimizer.config(cli.seed);
    cfg.validate()?;
    let tol = cli.tol.unwrap_or_else(|| args.target.default_tolerance());
    let j = args.j;
    if j.twice() == 0 {
        return Err(Error::domain("j", 0.0, "j ≥ 1/2"));
    }
    let entropic = matches!(args.target, VerifyTarget::Eof | VerifyTarget::Epsilon)
        || (args.target == VerifyTarget::Roof && args.measure.is_entropic());

    let points: Vec<VerifyPoint> = match args.target {
        VerifyTarget::Pmu => {
            if args.mu.is_empty() {
                return Err(Error::Validation("--target pmu needs --mu".into()));
            }
            let top = 1.0 / f64::from(j.twice() + 1);
            for &mu in &args.mu {
                if !(0.0..=top).contains(&mu) {
                    return Err(Error::domain("mu", mu, format!("[0, {top}]")));
                }
            }
            args.mu
                .par_iter()
                .map(|&mu| {
                    let exact = p_mu(j, mu)?;
                    Ok(match max_p_mu_over_u(j, mu, &cfg) {
                        Ok(r) => VerifyPoint::judge((None, Some(mu)), exact, r.value, tol, false, r.metadata),
                        Err(e) => VerifyPoint::failed(None, Some(mu), exact, tol, &e),
                    })
                })
                .collect::<Result<_>>()?
        }
        target => {
            if args.p.is_empty() {
                return Err(Error::Validation(format!(
                    "--target {} needs --p",
                    target.to_possible_value().expect("named").get_name()
                )));
            }
            for &p in &args.p {
                check_p(p)?;
            }
            match target {
                VerifyTarget::Epsilon => args
                    .p
                    .par_iter()
                    .map(|&p| {
                        let exact = epsilon(j, p)?;
                        let tol_p = match cli.tol {
                            Some(t) => t,
                            None if p <= j.threshold() => SEPARABLE_TOL,
                            None => tol,
                        };
                        Ok(match min_epsilon_numeric(j, p, &cfg) {
                            Ok(r) => VerifyPoint::judge((Some(p), None), exact, r.value, tol_p, true, r.metadata),
                            Err(e) => VerifyPoint::failed(Some(p), None, exact, tol_p, &e),
                        })
                    })
                    .collect::<Result<_>>()?,
                VerifyTarget::Roof => {
                    let measure = PureMeasure::from_kind(args.measure)?;
                    args.p
                        .par_iter()
                        .map(|&p| {
                            let exact = evaluate(args.measure, j, p)?;
                            let rho = rho_p(j, p)?;
                            Ok(match convex_roof_numeric(&rho, measure, args.optimizer.n_terms, &cfg) {
                                Ok(r) => VerifyPoint::judge((Some(p), None), exact, r.value, tol, true, r.metadata),
                                Err(e) => VerifyPoint::failed(Some(p), None, exact, tol, &e),
                            })
                        })
                        .collect::<Result<_>>()?
                }
                VerifyTarget::Eof => verify_eof_hull(j, &args.p, tol, &cfg)?,
                VerifyTarget::Pmu => unreachable!("handled above"),
            }
        }
    };

    let points: Vec<VerifyPoint> = points
        .into_iter()
        .map(|pt| if entropic { pt.in_units(cli.bits) } else { pt })
        .collect();
    let all_pass = points.iter().all(|pt| pt.pass);
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({
            "target": args.target,
            "j": j,
            "measure": (args.target == VerifyTarget::Roof).then_some(args.measure),
            "units": if entropic { unit_name(cli.bits) } else { "dimensionless" },
            "seed": cli.seed,
            "points": points,
            "pass": all_pass,
        })),
        Format::Csv => {
            let key = if args.target == VerifyTarget::Pmu { "mu" } else { "p" };
            let mut s = format!("{key},closed_form,oracle_value,gap,pass\n");
            for pt in &points {
                let x = pt.p.or(pt.mu).unwrap_or(f64::NAN);
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    super::format_number(x),
                    super::format_number(pt.closed_form),
                    super::format_number(pt.oracle_value),
                    super::format_number(pt.gap),
                    pt.pass
                ));
            }
            s
        }
    };
    emit(cli.out.as_deref(), &text)?;
    if !all_pass {
        for pt in points.iter().filter(|pt| !pt.pass) {
            let x = pt.p.or(pt.mu).unwrap_or(f64::NAN);
            eprintln!(
                "verification failed at {x}: {}",
                pt.diagnostics.message.as_deref().unwrap_or("unknown")
            );
        }
    }
    Ok(if all_pass {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    })
}

/// E_F as the convex hull of oracle ε values on a grid that includes the requested points.
fn verify_eof_hull(j: Spin, ps: &[f64], tol: f64, cfg: &OptimizerConfig) -> Result<Vec<VerifyPoint>> {
    let mut grid: Vec<f64> = (0..HULL_GRID)
        .map(|k| k as f64 / (HULL_GRID - 1) as f64)
        .chain(ps.iter().copied())
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let samples: Vec<(f64, f64, OptimizerMetadata)> = grid
        .par_iter()
        .map(|&p| min_epsilon_numeric(j, p, cfg).map(|r| (p, r.value, r.metadata)))
        .collect::<Result<_>>()?;
    let hull = convex_hull_1d(&samples.iter().map(|&(p, v, _)| (p, v)).collect::<Vec<_>>())?;
    let meta = OptimizerMetadata {
        iterations: samples.iter().map(|s| s.2.iterations).sum(),
        restarts: samples.iter().map(|s| s.2.restarts).sum(),
        converged: samples.iter().all(|s| s.2.converged),
    };
    ps.iter()
        .map(|&p| {
            let exact = eof(j, p)?;
            Ok(VerifyPoint::judge((Some(p), None), exact, hull.value_at(p)?, tol, true, meta))
        })
        .collect()
}

fn build_state(args: &TwirlArgs, seed: u64) -> Result<DensityMatrix> {
    if let Some(path) = &args.input {
        return StateFile::read(path)?.to_density();
    }
    let builder = args.state.expect("clap requires --input or --state");
    let need = |name: &'static str, v: Option<f64>| {
        v.ok_or_else(|| Error::Validation(format!("--state {} needs --{name}", builder.to_possible_value().expect("named").get_name())))
    };
    if builder != Builder::Random && args.j2 != Spin::HALF {
        return Err(Error::Validation("named states other than random need --j2 1/2".into()));
    }
    match builder {
        Builder::RhoP => rho_p(args.j1, need("p", args.p)?),
        Builder::Chi => Ok(chi_state(args.j1, need("mu", args.mu)?)?.density()),
        Builder::Phi => Ok(phi_product_state(args.j1, need("nu", args.nu)?)?.density()),
        Builder::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(random_density_matrix(args.j1.dim(), args.j2.dim(), &mut rng))
        }
    }
}

fn cmd_twirl(cli: &Cli, args: &TwirlArgs) -> Result<Outcome> {
    let sigma = build_state(args, cli.seed)?;
    let overlaps = twirl_overlaps(&sigma, args.j1, args.j2)?;
    let exact = twirl_exact(&sigma, args.j1, args.j2)?;
    let exact_file = StateFile::from_density(&exact);
    let monte_carlo = if args.samples > 0 {
        let mc = twirl_monte_carlo(&sigma, args.j1, args.j2, args.samples, cli.seed)?;
        if let Some(path) = &args.mc_out {
            std::fs::write(path, StateFile::from_density(&mc.estimate).to_json() + "\n")?;
        }
        Some(json!({
            "samples": mc.samples,
            "trace_distance": mc.trace_distance,
            "bound": 10.0 / (mc.samples as f64).sqrt(),
        }))
    } else {
        None
    };
    let input_distance = sigma.trace_distance(&exact);
    if let Some(path) = &cli.out {
        std::fs::write(path, exact_file.to_json() + "\n")?;
    }
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            let overlaps: Vec<_> = overlaps
                .iter()
                .map(|(jt, p)| json!({ "J": jt, "p": p }))
                .collect();
            let mut summary = json!({
                "j1": args.j1,
                "j2": args.j2,
                "overlaps": overlaps,
                "input_to_twirl_trace_distance": input_distance,
                "monte_carlo": monte_carlo,
            });
            if cli.out.is_none() {
                summary["state"] = serde_json::to_value(&exact_file).expect("state file serializes");
            }
            to_json(&summary)
        }
        Format::Csv => {
            let mut s = String::from("J,p\n");
            for (jt, p) in &overlaps {
                s.push_str(&format!("{jt},{}\n", super::format_number(*p)));
            }
            s
        }
    };
    print!("{text}");
    Ok(Outcome::Success)
}
