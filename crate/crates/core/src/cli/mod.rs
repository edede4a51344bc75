//! Command-line front end. The binary only forwards its arguments to [`run`].

pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use crate::calibration::{
    max_alpha, required_negative_power, required_power, Calibration, CalibrationTarget, Direction,
    TargetModel,
};
use crate::equipoise::{EquipoiseModel, JointEquipoiseModel};
use crate::error::Error;
use crate::gs::{AccrualModel, GroupSequentialDesign, LrConvention};
use crate::odds::OperatingCharacteristics;
use crate::proportions::TwoProportionDesign;
use crate::report::{render, Target};
use crate::sim::{simulate_gs_tte, simulate_two_prop, with_thread_cap, MonteCarlo, SimulationReport};
use spec::{Design, GsSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Environment variable capping simulation worker threads.
pub const THREADS_ENV: &str = "EQUICAL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "equical", version, about = "Equipoise calibration of clinical trial designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write one of the reference tables or the equipoise CDF curves as CSV.
    Reproduce {
        #[arg(value_enum)]
        target: TargetArg,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Marginal)]
        convention: ConventionArg,
    },
    /// Evaluate a JSON design specification.
    Eval {
        spec: PathBuf,
        /// Append Monte Carlo oracle estimates from this many replicates.
        #[arg(long, value_name = "N")]
        simulate: Option<u64>,
        #[arg(long, default_value_t = 1, requires = "simulate")]
        seed: u64,
        /// Print the full-precision evaluation as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Power or false positive rate needed for post-study odds to reach an
    /// equipoise percentile.
    #[command(group(ArgGroup::new("given").required(true).args(["alpha", "power"])))]
    Calibrate {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        percentile: f64,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        power: Option<f64>,
        #[arg(long, value_enum, default_value_t = DirectionArg::Positive)]
        direction: DirectionArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetArg {
    Table1,
    Table2,
    Table3,
    Table4,
    Figure1,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    Marginal,
    Conditional,
    Incremental,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Bp11,
    Bp0505,
    Bp12,
    /// Product of two independent BP(1,1) odds (two-study plans).
    Bp11sq,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    Positive,
    Negative,
}

impl From<ConventionArg> for LrConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Marginal => LrConvention::Marginal,
            ConventionArg::Conditional => LrConvention::Conditional,
            ConventionArg::Incremental => LrConvention::Incremental,
        }
    }
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Table1 => Target::Table1,
            TargetArg::Table2 => Target::Table2,
            TargetArg::Table3 => Target::Table3,
            TargetArg::Table4 => Target::Table4,
            TargetArg::Figure1 => Target::Figure1,
        }
    }
}

/// Odds as displayed: one decimal.
pub fn fmt_odds(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.1}")
    } else {
        "inf".into()
    }
}

/// Plan odds span several orders of magnitude and are shown at roughly
/// three significant figures: integers from 20 up, one decimal from 1, two
/// below.
pub fn fmt_plan_odds(x: f64) -> String {
    if !x.is_finite() {
        "inf".into()
    } else if x >= 20.0 {
        format!("{x:.0}")
    } else if x >= 1.0 {
        format!("{x:.1}")
    } else {
        format!("{x:.2}")
    }
}

pub fn fmt_pct(x: f64) -> String {
    format!("{x:.2}")
}

fn exit_code(e: &Error) -> i32 {
    if e.is_non_convergence() {
        EXIT_NUMERIC
    } else {
        EXIT_USAGE
    }
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok()
}

/// Runs the command line `args` (including the program name), writing
/// reports to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match cli.command {
        Command::Reproduce { target, out: path, convention } => {
            reproduce(target.into(), path, convention.into(), out, err)
        }
        Command::Eval { spec, simulate, seed, json } => {
            eval(&spec, simulate.map(|n| (n, seed)), json, out, err)
        }
        Command::Calibrate { model, percentile, alpha, power, direction } => {
            calibrate(model, percentile, alpha, power, direction, out, err)
        }
    }
}

fn reproduce(
    target: Target,
    path: Option<PathBuf>,
    convention: LrConvention,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let text = match render(target, convention) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &path {
        Some(p) => std::fs::write(p, text.as_bytes()),
        None => out.write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let where_ = path.map_or("standard output".into(), |p| p.display().to_string());
            let _ = writeln!(err, "error: cannot write {where_}: {e}");
            EXIT_IO
        }
    }
}

fn calibrate(
    model: ModelArg,
    percentile: f64,
    alpha: Option<f64>,
    power: Option<f64>,
    direction: DirectionArg,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let model = match model {
        ModelArg::Bp11 => TargetModel::Single(EquipoiseModel::BP11),
        ModelArg::Bp0505 => TargetModel::Single(EquipoiseModel::BP0505),
        ModelArg::Bp12 => TargetModel::Single(EquipoiseModel::BP12),
        ModelArg::Bp11sq => TargetModel::Joint(JointEquipoiseModel::BP11_SQUARED),
    };
    let direction = match direction {
        DirectionArg::Positive => Direction::Positive,
        DirectionArg::Negative => Direction::Negative,
    };
    let result = (|| -> crate::Result<Vec<String>> {
        let target = CalibrationTarget::new(model, percentile, direction)?;
        let q = target.threshold()?;
        let mut lines = vec![format!("threshold odds {}", fmt_odds(q))];
        match (alpha, power) {
            (Some(a), None) => {
                let cal = match direction {
                    Direction::Positive => required_power(a, &target)?,
                    Direction::Negative => required_negative_power(a, &target)?,
                };
                match cal {
                    Calibration::Feasible(p) => lines.push(format!("required power {p:.4}")),
                    Calibration::Infeasible { required, .. } => {
                        let cap = max_alpha(&target, 1.0)?;
                        lines.push(format!(
                            "INFEASIBLE: required power {required:.4} exceeds 1; max alpha {cap:.4} ({:.2}%)",
                            100.0 * cap
                        ));
                    }
                }
            }
            (None, Some(p)) => {
                let a = max_alpha(&target, p)?;
                if a > 0.0 {
                    lines.push(format!("max alpha {a:.4} ({:.2}%)", 100.0 * a));
                } else {
                    lines.push(format!("INFEASIBLE: no false positive rate reaches the target at power {p}"));
                }
            }
            _ => unreachable!("clap enforces exactly one of --alpha / --power"),
        }
        Ok(lines)
    })();
    match result {
        Ok(lines) => {
            for l in lines {
                let _ = writeln!(out, "{l}");
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn eval(
    path: &PathBuf,
    simulate: Option<(u64, u64)>,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            return EXIT_IO;
        }
    };
    let design = match spec::parse(&text) {
        Ok(d) => d,
        Err(msg) => {
            let _ = writeln!(err, "{}: {msg}", path.display());
            return EXIT_USAGE;
        }
    };
    let result = match &design {
        Design::Gs { design, spec } => eval_gs(design, spec, simulate, json),
        Design::TwoProp { design, model } => eval_two_prop(design, *model, simulate, json),
        Design::Cdp { design, joint, convention, phase3 } => {
            eval_cdp(design, *joint, *convention, phase3, simulate, json)
        }
    };
    match result {
        Ok(report) => {
            for w in &report.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let _ = write!(out, "{}", report.text);
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "{}: error: {e}", path.display());
            exit_code(&e)
        }
    }
}

struct EvalReport {
    text: String,
    warnings: Vec<String>,
}

const ANTI_INFORMATIVE: &str = "outcome is anti-informative";

fn sim_lines(text: &mut String, label: &str, analytic: &[f64], report: &SimulationReport) {
    use std::fmt::Write as _;
    let _ = writeln!(text, "simulation {label} (replicates {}, seed {})", report.replicates, report.seed);
    for (e, a) in report.estimates.iter().zip(analytic) {
        let _ = writeln!(text, "  {:<18} analytic {a:.4}  simulated {:.4} ± {:.4}", e.name, e.estimate, e.se);
    }
}

fn gs_lines(
    text: &mut String,
    design: &GroupSequentialDesign,
    convention: LrConvention,
    model: EquipoiseModel,
    warnings: &mut Vec<String>,
) -> crate::Result<serde_json::Value> {
    use std::fmt::Write as _;
    let lr = design.analysis_likelihood_ratios(convention)?;
    let _ = writeln!(
        text,
        "group-sequential design: N {}, FWER {}, HR {}, power {:.4}",
        design.n_total(),
        design.fwer(),
        design.hr_alt(),
        design.evidence_power()
    );
    for (k, (a, r)) in design.analyses().iter().zip(&lr.positive).enumerate() {
        let _ = writeln!(
            text,
            "  analysis {}: t {:.3}, events {}, z {:.4}, HR cv {:.3}, r10(+) {}, percentile {}",
            k + 1,
            a.info_fraction,
            a.events,
            a.z_boundary,
            a.hr_critical,
            fmt_odds(*r),
            fmt_pct(model.odds_cdf(*r))
        );
    }
    let _ = writeln!(
        text,
        "  negative: r01(-) {}, percentile {}",
        fmt_odds(lr.negative),
        fmt_pct(model.odds_cdf(lr.negative))
    );
    if lr.positive.iter().chain([&lr.negative]).any(|&x| x <= 1.0) {
        warnings.push(ANTI_INFORMATIVE.into());
    }
    Ok(serde_json::json!({ "design": design, "likelihood_ratios": lr }))
}

fn simulate_gs(
    text: &mut String,
    design: &GroupSequentialDesign,
    spec: &GsSpec,
    replicates: u64,
    seed: u64,
) -> crate::Result<()> {
    let horizon = spec.accrual_months + 10.0 * design.soc_median_months();
    let acc = AccrualModel::new(spec.accrual_months, horizon)?;
    let mc = MonteCarlo::new(replicates, seed);
    for (label, hr) in [("H0 (HR 1)", 1.0), ("H1 (design HR)", design.hr_alt())] {
        let report = with_thread_cap(thread_cap(), || simulate_gs_tte(design, hr, &acc, &mc))?;
        let mut analytic = design.first_crossing_probs(design.drift_for_hr(hr));
        analytic.push(analytic.iter().sum());
        sim_lines(text, label, &analytic, &report);
    }
    Ok(())
}

fn eval_gs(
    design: &GroupSequentialDesign,
    spec: &GsSpec,
    simulate: Option<(u64, u64)>,
    json: bool,
) -> crate::Result<EvalReport> {
    let mut text = String::new();
    let mut warnings = Vec::new();
    let value = gs_lines(&mut text, design, spec.convention, spec.model.model(), &mut warnings)?;
    if let Some((n, seed)) = simulate {
        simulate_gs(&mut text, design, spec, n, seed)?;
    }
    if json {
        text = format!("{value:#}\n");
    }
    Ok(EvalReport { text, warnings })
}

fn eval_two_prop(
    design: &TwoProportionDesign,
    model: EquipoiseModel,
    simulate: Option<(u64, u64)>,
    json: bool,
) -> crate::Result<EvalReport> {
    use std::fmt::Write as _;
    let oc = OperatingCharacteristics::new(design.alpha_one_sided, design.power)?;
    let mut warnings = Vec::new();
    if !oc.is_informative() {
        warnings.push(ANTI_INFORMATIVE.into());
    }
    let pos = oc.positive_lr();
    let neg = oc.negative_lr();
    let mut text = String::new();
    let _ = writeln!(
        text,
        "two-proportion design: {} vs {}, alpha {}, power {:.4}, n per arm {}, N {}, critical difference {:.4}",
        design.p_soc,
        design.p_inv,
        design.alpha_one_sided,
        design.power,
        design.n_per_arm,
        design.n_total(),
        design.critical_difference
    );
    let _ =
        writeln!(text, "  positive: r10(+) {}, percentile {}", fmt_odds(pos), fmt_pct(model.odds_cdf(pos)));
    let _ =
        writeln!(text, "  negative: r01(-) {}, percentile {}", fmt_odds(neg), fmt_pct(model.odds_cdf(neg)));
    if let Some((n, seed)) = simulate {
        let mc = MonteCarlo::new(n, seed);
        let h0 =
            with_thread_cap(thread_cap(), || simulate_two_prop(design, design.p_soc, design.p_soc, &mc))?;
        sim_lines(&mut text, "H0 (equal proportions)", &[design.alpha_one_sided], &h0);
        let h1 =
            with_thread_cap(thread_cap(), || simulate_two_prop(design, design.p_soc, design.p_inv, &mc))?;
        sim_lines(&mut text, "H1 (design proportions)", &[design.power], &h1);
    }
    if json {
        let value = serde_json::json!({ "design": design, "positive_lr": pos, "negative_lr": neg });
        text = format!("{value:#}\n");
    }
    Ok(EvalReport { text, warnings })
}

fn eval_cdp(
    design: &crate::plan::CdpDesign,
    joint: JointEquipoiseModel,
    convention: LrConvention,
    phase3: &GsSpec,
    simulate: Option<(u64, u64)>,
    json: bool,
) -> crate::Result<EvalReport> {
    use std::fmt::Write as _;
    let report = design.odds(convention)?;
    let mut warnings = Vec::new();
    let lrs = [report.phase2_positive_lr, report.phase2_negative_lr, report.phase3_negative_lr];
    if lrs.iter().chain(&report.phase3_positive_lr).any(|&x| x <= 1.0) {
        warnings.push(ANTI_INFORMATIVE.into());
    }
    let pct = |x: f64| joint.product_cdf(x).map(fmt_pct);
    let mut text = String::new();
    let _ = writeln!(
        text,
        "development plan {}: N {} (phase 2 {}, phase 3 {}), prior odds {}",
        design.name,
        design.total_n(),
        design.phase2_n_total,
        design.phase3.n_total(),
        design.prior_odds
    );
    let _ = writeln!(
        text,
        "  phase 2: alpha {}, power {}; phase 3: FWER {}, power {:.4}",
        design.phase2.alpha(),
        design.phase2.power(),
        design.phase3.fwer(),
        design.phase3.evidence_power()
    );
    for (k, o) in report.r10_pp.iter().enumerate() {
        let _ = writeln!(
            text,
            "  r10{} analysis {}: {} (percentile {})",
            o.outcome,
            k + 1,
            fmt_plan_odds(o.value),
            pct(o.value)?
        );
    }
    for (k, o) in report.r10_np.iter().enumerate() {
        let _ = writeln!(
            text,
            "  r10{} analysis {}: {} (percentile {})",
            o.outcome,
            k + 1,
            fmt_plan_odds(o.value),
            pct(o.value)?
        );
    }
    for o in [&report.r01_pn, &report.r01_nn] {
        let _ =
            writeln!(text, "  r01{}: {} (percentile {})", o.outcome, fmt_plan_odds(o.value), pct(o.value)?);
    }
    if let Some((n, seed)) = simulate {
        simulate_gs(&mut text, &design.phase3, phase3, n, seed)?;
    }
    if json {
        let value = serde_json::json!({ "design": design, "odds": report });
        text = format!("{value:#}\n");
    }
    Ok(EvalReport { text, warnings })
}
