//! Group-sequential time-to-event designs with O'Brien–Fleming-type
//! (Lan–DeMets) alpha spending.
//!
//! Analyses are indexed by information fraction `t_k = D_k / D_K`. The
//! standardized log-rank statistics `Z_k` are treated as a Brownian motion
//! observed at `t_k`: `Z_k √t_k = B(t_k)` with `B(t) ~ N(θ t, t)`, where the
//! drift `θ = ln(1/HR) · √(D_K / 4)` for 1:1 allocation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    composite_gauss_legendre, find_root, normal_pdf, normal_quantile, normal_quantile_upper, normal_sf,
};

/// Score-space half-width of the integration window around the mean.
const WINDOW: f64 = 8.0;
const GL_ORDER: usize = 16;
const MIN_PANELS: usize = 32;
const MAX_PANELS: usize = 1024;
const PROB_TOL: f64 = 1e-10;

/// How the family-wise error rate is split over tails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    /// Symmetric two-sided test: efficacy boundaries spend `fwer / 2`.
    #[default]
    TwoSided,
    OneSided,
}

impl Sidedness {
    pub fn tails(self) -> f64 {
        match self {
            Sidedness::TwoSided => 2.0,
            Sidedness::OneSided => 1.0,
        }
    }
}

/// Convention for the positive likelihood ratio of an individual analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LrConvention {
    /// `P(Z_k ≥ c_k | H1) / P(|Z_k| ≥ c_k | H0)`, ignoring earlier looks.
    #[default]
    Marginal,
    /// First-crossing probabilities conditional on reaching analysis k.
    Conditional,
    /// Unconditional first-crossing probabilities.
    Incremental,
}

/// Cumulative alpha spent by information fraction `t` under the
/// O'Brien–Fleming-type spending function `2 − 2Φ(z_{1−α/2} / √t)`.
pub fn obf_spending(t: f64, alpha_one_sided: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("information fraction must be positive, got {t}")));
    }
    check_alpha(alpha_one_sided)?;
    if t >= 1.0 {
        return Ok(alpha_one_sided);
    }
    let z = normal_quantile_upper(alpha_one_sided / 2.0)?;
    Ok(2.0 * normal_sf(z / t.sqrt()))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    Ok(())
}

fn check_fractions(fractions: &[f64]) -> Result<()> {
    if fractions.is_empty() {
        return Err(Error::domain("at least one analysis is required"));
    }
    if !(fractions[0] > 0.0) || fractions.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("information fractions must be positive and strictly increasing"));
    }
    if (fractions[fractions.len() - 1] - 1.0).abs() > 1e-12 {
        return Err(Error::domain("the last information fraction must be 1"));
    }
    Ok(())
}

/// Continuation density of `Z_k` restricted to `Z_1 < c_1, …, Z_k < c_k`,
/// tabulated on quadrature nodes (weights folded in).
struct Stage {
    nodes: Vec<f64>,
    mass: Vec<f64>,
}

impl Stage {
    fn first(t: f64, drift: f64, bound: f64, panels: usize) -> Stage {
        let mean = drift * t.sqrt();
        Stage::tabulate(mean, bound, panels, |y| normal_pdf(y - mean))
    }

    fn tabulate<F: Fn(f64) -> f64>(mean: f64, bound: f64, panels: usize, density: F) -> Stage {
        let lo = mean - WINDOW;
        let hi = bound.min(mean + WINDOW);
        if !(hi > lo) {
            return Stage { nodes: Vec::new(), mass: Vec::new() };
        }
        let (nodes, weights) = composite_gauss_legendre(lo, hi, panels, GL_ORDER);
        let mass = nodes.iter().zip(&weights).map(|(&y, &w)| w * density(y)).collect();
        Stage { nodes, mass }
    }

    /// Probability of continuing to (t_next) and then exceeding `bound`.
    fn crossing(&self, kernel: &Kernel, bound: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.mass)
            .map(|(&z, &m)| m * normal_sf((bound - kernel.mean(z)) / kernel.sd))
            .sum()
    }

    fn next(&self, kernel: &Kernel, t_next: f64, drift: f64, bound: f64, panels: usize) -> Stage {
        let mean = drift * t_next.sqrt();
        Stage::tabulate(mean, bound, panels, |y| {
            self.nodes
                .iter()
                .zip(&self.mass)
                .map(|(&z, &m)| m * normal_pdf((y - kernel.mean(z)) / kernel.sd))
                .sum::<f64>()
                / kernel.sd
        })
    }
}

/// Transition law of `Z_k` given `Z_{k−1} = z`.
struct Kernel {
    sqrt_prev: f64,
    sqrt_next: f64,
    shift: f64,
    sd: f64,
}

impl Kernel {
    fn new(t_prev: f64, t_next: f64, drift: f64) -> Kernel {
        let dt = t_next - t_prev;
        Kernel {
            sqrt_prev: t_prev.sqrt(),
            sqrt_next: t_next.sqrt(),
            shift: drift * dt,
            sd: (dt / t_next).sqrt(),
        }
    }

    fn mean(&self, z: f64) -> f64 {
        (z * self.sqrt_prev + self.shift) / self.sqrt_next
    }
}

fn crossing_probs_at(fractions: &[f64], bounds: &[f64], drift: f64, panels: usize) -> Vec<f64> {
    let mut probs = Vec::with_capacity(fractions.len());
    probs.push(normal_sf(bounds[0] - drift * fractions[0].sqrt()));
    let mut stage = Stage::first(fractions[0], drift, bounds[0], panels);
    for k in 1..fractions.len() {
        let kernel = Kernel::new(fractions[k - 1], fractions[k], drift);
        probs.push(stage.crossing(&kernel, bounds[k]));
        if k + 1 < fractions.len() {
            stage = stage.next(&kernel, fractions[k], drift, bounds[k], panels);
        }
    }
    probs
}

/// Probability that the first upper-boundary crossing happens at each
/// analysis, given the drift at full information.
pub fn first_crossing_probs(fractions: &[f64], bounds: &[f64], drift: f64) -> Result<Vec<f64>> {
    check_fractions(fractions)?;
    if bounds.len() != fractions.len() {
        return Err(Error::domain("one boundary per analysis is required"));
    }
    let mut panels = MIN_PANELS;
    let mut probs = crossing_probs_at(fractions, bounds, drift, panels);
    while panels < MAX_PANELS && fractions.len() > 1 {
        panels *= 2;
        let refined = crossing_probs_at(fractions, bounds, drift, panels);
        let change = refined.iter().zip(&probs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        probs = refined;
        if change < PROB_TOL {
            break;
        }
    }
    Ok(probs.into_iter().map(|p| p.clamp(0.0, 1.0)).collect())
}

fn boundaries_at(fractions: &[f64], increments: &[f64], panels: usize) -> Result<Vec<f64>> {
    let mut bounds = Vec::with_capacity(fractions.len());
    bounds.push(normal_quantile_upper(increments[0])?);
    let mut stage = Stage::first(fractions[0], 0.0, bounds[0], panels);
    for k in 1..fractions.len() {
        let kernel = Kernel::new(fractions[k - 1], fractions[k], 0.0);
        let target = increments[k];
        let c = find_root(|c| stage.crossing(&kernel, c) - target, -WINDOW, 40.0, 1e-12)?;
        bounds.push(c);
        if k + 1 < fractions.len() {
            stage = stage.next(&kernel, fractions[k], 0.0, c, panels);
        }
    }
    Ok(bounds)
}

/// Spending increments `α*(t_k) − α*(t_{k−1})`.
pub fn spending_increments(fractions: &[f64], alpha_one_sided: f64) -> Result<Vec<f64>> {
    check_fractions(fractions)?;
    let mut prev = 0.0;
    fractions
        .iter()
        .map(|&t| {
            let cum = obf_spending(t, alpha_one_sided)?;
            let inc = cum - prev;
            prev = cum;
            Ok(inc)
        })
        .collect()
}

/// Upper z-boundaries whose null first-crossing probabilities match the
/// given spending increments.
pub fn boundaries_from_increments(fractions: &[f64], increments: &[f64]) -> Result<Vec<f64>> {
    check_fractions(fractions)?;
    if increments.len() != fractions.len() || increments.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
        return Err(Error::domain("one spending increment in (0,1) per analysis is required"));
    }
    let mut panels = MIN_PANELS;
    let mut bounds = boundaries_at(fractions, increments, panels)?;
    while panels < MAX_PANELS && fractions.len() > 1 {
        panels *= 2;
        let refined = boundaries_at(fractions, increments, panels)?;
        let change = refined.iter().zip(&bounds).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        bounds = refined;
        if change < 1e-9 {
            break;
        }
    }
    Ok(bounds)
}

/// O'Brien–Fleming-type upper boundaries at the given information
/// fractions for a one-sided level `alpha_one_sided`.
pub fn boundaries(fractions: &[f64], alpha_one_sided: f64) -> Result<Vec<f64>> {
    let inc = spending_increments(fractions, alpha_one_sided)?;
    boundaries_from_increments(fractions, &inc)
}

/// Largest observed hazard ratio that still crosses `z` with `events`
/// events under 1:1 allocation.
pub fn hr_critical_value(z: f64, events: u64) -> f64 {
    (-2.0 * z / (events as f64).sqrt()).exp()
}

/// Drift `θ` at which the boundaries give cumulative power `power`.
pub fn drift_for_power(fractions: &[f64], bounds: &[f64], power: f64) -> Result<f64> {
    if !(power > 0.0 && power < 1.0) {
        return Err(Error::domain(format!("power must lie in (0,1), got {power}")));
    }
    let mut failure = None;
    let f = |theta: f64| match first_crossing_probs(fractions, bounds, theta) {
        Ok(p) => p.iter().sum::<f64>() - power,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let seed = bounds[bounds.len() - 1] + normal_quantile(power)?;
    let root = find_root(f, (seed - 4.0).min(-8.0), seed + 8.0, 1e-12);
    match failure {
        Some(e) => Err(e),
        None => root,
    }
}

/// Smallest number of events giving at least `power` against `hr_alt`
/// with O'Brien–Fleming-type boundaries at `fractions`.
pub fn required_events(hr_alt: f64, alpha_one_sided: f64, power: f64, fractions: &[f64]) -> Result<u64> {
    if !(hr_alt > 0.0 && hr_alt < 1.0) {
        return Err(Error::domain(format!("design hazard ratio must lie in (0,1), got {hr_alt}")));
    }
    check_alpha(alpha_one_sided)?;
    let bounds = boundaries(fractions, alpha_one_sided)?;
    let theta = drift_for_power(fractions, &bounds, power)?;
    let effect = (1.0 / hr_alt).ln();
    let events = 4.0 * (theta / effect).powi(2);
    if !(events < 1e9) {
        return Err(Error::domain(format!(
            "hazard ratio {hr_alt} needs {events:.3e} events; effect too small"
        )));
    }
    let mut d = events.ceil().max(1.0) as u64;
    // Guard against the ceiling landing one short through rounding.
    let power_at = |d: u64| -> Result<f64> {
        let p = first_crossing_probs(fractions, &bounds, effect * (d as f64 / 4.0).sqrt())?;
        Ok(p.iter().sum())
    };
    while power_at(d)? < power {
        d += 1;
    }
    while d > 1 && power_at(d - 1)? >= power {
        d -= 1;
    }
    Ok(d)
}

/// Fixed-design events `4 (z_{1−α} + z_{power})² / ln²(HR)`.
pub fn schoenfeld_events(hr_alt: f64, alpha_one_sided: f64, power: f64) -> Result<f64> {
    if !(hr_alt > 0.0 && hr_alt < 1.0) {
        return Err(Error::domain(format!("design hazard ratio must lie in (0,1), got {hr_alt}")));
    }
    let z = normal_quantile_upper(alpha_one_sided)? + normal_quantile(power)?;
    Ok(4.0 * z * z / hr_alt.ln().powi(2))
}

/// Uniform accrual over `accrual_months`; `followup_months` is the calendar
/// time of the final analysis, measured from first patient in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccrualModel {
    pub accrual_months: f64,
    pub followup_months: f64,
}

impl AccrualModel {
    pub fn new(accrual_months: f64, followup_months: f64) -> Result<Self> {
        if !(accrual_months > 0.0 && followup_months > 0.0) {
            return Err(Error::domain("accrual and follow-up durations must be positive"));
        }
        Ok(Self { accrual_months, followup_months })
    }
}

/// Expected fraction of enrolled-by-design participants with an event by
/// calendar time `analysis_time`, for exponential event times with the
/// given median and uniform entry over the accrual period.
pub fn expected_event_fraction(acc: &AccrualModel, median_months: f64, analysis_time: f64) -> f64 {
    if !(analysis_time > 0.0) {
        return 0.0;
    }
    if analysis_time == f64::INFINITY {
        return 1.0;
    }
    let lambda = std::f64::consts::LN_2 / median_months;
    let a = acc.accrual_months;
    let t = analysis_time;
    let frac = if t >= a {
        1.0 - (-lambda * t).exp() * (lambda * a).exp_m1() / (lambda * a)
    } else {
        (t + (-lambda * t).exp_m1() / lambda) / a
    };
    frac.clamp(0.0, 1.0)
}

/// One planned analysis of a group-sequential design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GsAnalysis {
    pub info_fraction: f64,
    pub events: u64,
    pub z_boundary: f64,
    pub hr_critical: f64,
}

/// Inputs to [`GroupSequentialDesign::new`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GsDesignSpec {
    pub info_fractions: Vec<f64>,
    pub events: Vec<u64>,
    pub fwer: f64,
    #[serde(default)]
    pub sidedness: Sidedness,
    pub hr_alt: f64,
    pub soc_median_months: f64,
    pub n_total: u64,
    /// Nominal power the design was sized for. When present it defines the
    /// negative-outcome likelihood ratio.
    pub target_power: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSequentialDesign {
    analyses: Vec<GsAnalysis>,
    fwer: f64,
    sidedness: Sidedness,
    hr_alt: f64,
    soc_median_months: f64,
    n_total: u64,
    target_power: Option<f64>,
    drift: f64,
}

/// Per-analysis positive likelihood ratios and the likelihood ratio of a
/// negative overall outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisLikelihoodRatios {
    pub convention: LrConvention,
    pub positive: Vec<f64>,
    pub negative: f64,
}

impl GroupSequentialDesign {
    pub fn new(spec: GsDesignSpec) -> Result<Self> {
        check_fractions(&spec.info_fractions)?;
        if spec.events.len() != spec.info_fractions.len() {
            return Err(Error::domain("one event count per analysis is required"));
        }
        if spec.events[0] == 0 || spec.events.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("event counts must be positive and strictly increasing"));
        }
        check_alpha(spec.fwer)?;
        if !(spec.hr_alt > 0.0 && spec.hr_alt < 1.0) {
            return Err(Error::domain(format!("design hazard ratio must lie in (0,1), got {}", spec.hr_alt)));
        }
        if !(spec.soc_median_months > 0.0) {
            return Err(Error::domain("control-arm median must be positive"));
        }
        if let Some(p) = spec.target_power {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::domain(format!("target power must lie in (0,1), got {p}")));
            }
        }
        let alpha = spec.fwer / spec.sidedness.tails();
        let bounds = boundaries(&spec.info_fractions, alpha)?;
        let analyses = spec
            .info_fractions
            .iter()
            .zip(&spec.events)
            .zip(&bounds)
            .map(|((&t, &d), &c)| GsAnalysis {
                info_fraction: t,
                events: d,
                z_boundary: c,
                hr_critical: hr_critical_value(c, d),
            })
            .collect();
        let d_final = *spec.events.last().expect("non-empty") as f64;
        Ok(Self {
            analyses,
            fwer: spec.fwer,
            sidedness: spec.sidedness,
            hr_alt: spec.hr_alt,
            soc_median_months: spec.soc_median_months,
            n_total: spec.n_total,
            target_power: spec.target_power,
            drift: (1.0 / spec.hr_alt).ln() * (d_final / 4.0).sqrt(),
        })
    }

    /// Builds a design whose analyses fall when the given fractions of the
    /// `n_total` participants have had an event (counts are rounded).
    #[allow(clippy::too_many_arguments)]
    pub fn from_event_fractions(
        n_total: u64,
        event_fractions: &[f64],
        info_fractions: &[f64],
        fwer: f64,
        sidedness: Sidedness,
        hr_alt: f64,
        soc_median_months: f64,
        target_power: Option<f64>,
    ) -> Result<Self> {
        if event_fractions.iter().any(|&f| !(f > 0.0 && f <= 1.0)) {
            return Err(Error::domain("event fractions must lie in (0,1]"));
        }
        let events = event_fractions.iter().map(|f| (f * n_total as f64).round() as u64).collect();
        Self::new(GsDesignSpec {
            info_fractions: info_fractions.to_vec(),
            events,
            fwer,
            sidedness,
            hr_alt,
            soc_median_months,
            n_total,
            target_power,
        })
    }

    /// Builds a design whose information fractions are the event ratios
    /// `D_k / D_K`.
    pub fn from_events(
        events: &[u64],
        fwer: f64,
        sidedness: Sidedness,
        hr_alt: f64,
        soc_median_months: f64,
        n_total: u64,
    ) -> Result<Self> {
        let last = *events.last().ok_or_else(|| Error::domain("at least one analysis is required"))? as f64;
        let mut fractions: Vec<f64> = events.iter().map(|&d| d as f64 / last).collect();
        *fractions.last_mut().expect("non-empty") = 1.0;
        Self::new(GsDesignSpec {
            info_fractions: fractions,
            events: events.to_vec(),
            fwer,
            sidedness,
            hr_alt,
            soc_median_months,
            n_total,
            target_power: None,
        })
    }

    /// Replaces the spending-derived boundaries.
    pub fn with_z_boundaries(mut self, bounds: &[f64]) -> Result<Self> {
        if bounds.len() != self.analyses.len() || bounds.iter().any(|c| c.is_nan()) {
            return Err(Error::domain("one boundary per analysis is required"));
        }
        for (a, &c) in self.analyses.iter_mut().zip(bounds) {
            a.z_boundary = c;
            a.hr_critical = hr_critical_value(c, a.events);
        }
        Ok(self)
    }

    pub fn analyses(&self) -> &[GsAnalysis] {
        &self.analyses
    }

    pub fn info_fractions(&self) -> Vec<f64> {
        self.analyses.iter().map(|a| a.info_fraction).collect()
    }

    pub fn z_boundaries(&self) -> Vec<f64> {
        self.analyses.iter().map(|a| a.z_boundary).collect()
    }

    pub fn fwer(&self) -> f64 {
        self.fwer
    }

    pub fn sidedness(&self) -> Sidedness {
        self.sidedness
    }

    pub fn alpha_one_sided(&self) -> f64 {
        self.fwer / self.sidedness.tails()
    }

    pub fn hr_alt(&self) -> f64 {
        self.hr_alt
    }

    pub fn soc_median_months(&self) -> f64 {
        self.soc_median_months
    }

    pub fn n_total(&self) -> u64 {
        self.n_total
    }

    pub fn target_power(&self) -> Option<f64> {
        self.target_power
    }

    pub fn final_events(&self) -> u64 {
        self.analyses.last().expect("non-empty").events
    }

    /// Drift at full information under the design alternative.
    pub fn drift(&self) -> f64 {
        self.drift
    }

    /// Drift at full information under an arbitrary true hazard ratio.
    pub fn drift_for_hr(&self, hr: f64) -> f64 {
        (1.0 / hr).ln() * (self.final_events() as f64 / 4.0).sqrt()
    }

    pub fn first_crossing_probs(&self, drift: f64) -> Vec<f64> {
        first_crossing_probs(&self.info_fractions(), &self.z_boundaries(), drift)
            .expect("design fractions are validated")
    }

    /// Cumulative power at the design drift.
    pub fn cumulative_power(&self) -> f64 {
        self.first_crossing_probs(self.drift).iter().sum()
    }

    /// Power used for negative-outcome evidence: the nominal target when
    /// the design carries one, otherwise the power at the design drift.
    pub fn evidence_power(&self) -> f64 {
        self.target_power.unwrap_or_else(|| self.cumulative_power())
    }

    pub fn analysis_likelihood_ratios(&self, convention: LrConvention) -> Result<AnalysisLikelihoodRatios> {
        self.likelihood_ratios_at(self.drift, self.evidence_power(), convention)
    }

    /// Likelihood ratios for an explicit drift and power. False positive
    /// probabilities count every tail the family-wise error rate covers.
    pub fn likelihood_ratios_at(
        &self,
        drift: f64,
        power: f64,
        convention: LrConvention,
    ) -> Result<AnalysisLikelihoodRatios> {
        if !(power < 1.0) {
            return Err(Error::Degenerate("cumulative power of one gives p(-|H1) = 0".into()));
        }
        let tails = self.sidedness.tails();
        let positive = match convention {
            LrConvention::Marginal => self
                .analyses
                .iter()
                .map(|a| {
                    let h1 = normal_sf(a.z_boundary - drift * a.info_fraction.sqrt());
                    let h0 = tails * normal_sf(a.z_boundary);
                    (h1, h0)
                })
                .map(ratio)
                .collect::<Result<Vec<_>>>()?,
            LrConvention::Incremental | LrConvention::Conditional => {
                let p1 = self.first_crossing_probs(drift);
                let p0: Vec<f64> = self.first_crossing_probs(0.0).iter().map(|p| tails * p).collect();
                let (mut reach1, mut reach0) = (1.0, 1.0);
                let mut out = Vec::with_capacity(p1.len());
                for (a, b) in p1.iter().zip(&p0) {
                    let lr = if convention == LrConvention::Conditional {
                        ratio((a / reach1, b / reach0))?
                    } else {
                        ratio((*a, *b))?
                    };
                    out.push(lr);
                    reach1 -= a;
                    reach0 -= b;
                }
                out
            }
        };
        Ok(AnalysisLikelihoodRatios { convention, positive, negative: (1.0 - self.fwer) / (1.0 - power) })
    }
}

fn ratio((num, den): (f64, f64)) -> Result<f64> {
    if !(den > 0.0) {
        return Err(Error::Degenerate("an analysis has zero false positive probability".into()));
    }
    Ok(num / den)
}

/// A row of the power / sample-size / evidence table for the phase-3 design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub power: f64,
    pub n_total: u64,
    pub n_pct: f64,
    pub hr_cv_ia: f64,
    pub hr_cv_fa: f64,
    pub r10_ia: f64,
    pub r10_fa: f64,
    pub r01_fa: f64,
}

/// Reference phase-3 design: HR 0.7, median 10 months, one interim at 70%
/// information, 5% two-sided FWER, interim and final events at 36% and 52%
/// of participants.
pub const PHASE3_INFO_FRACTIONS: [f64; 2] = [0.7, 1.0];
pub const PHASE3_EVENT_FRACTIONS: [f64; 2] = [0.36, 0.52];
pub const PHASE3_HR: f64 = 0.7;
pub const PHASE3_SOC_MEDIAN: f64 = 10.0;
pub const TABLE2_ROWS: [(f64, u64); 3] = [(0.90, 680), (0.95, 826), (0.99, 1146)];

pub fn phase3_design(n_total: u64, fwer: f64, target_power: f64) -> Result<GroupSequentialDesign> {
    GroupSequentialDesign::from_event_fractions(
        n_total,
        &PHASE3_EVENT_FRACTIONS,
        &PHASE3_INFO_FRACTIONS,
        fwer,
        Sidedness::TwoSided,
        PHASE3_HR,
        PHASE3_SOC_MEDIAN,
        Some(target_power),
    )
}

/// Sample size implied by the events needed for `power`, assuming the final
/// analysis happens once the reference fraction of participants had events.
pub fn phase3_sample_size(fwer: f64, power: f64) -> Result<u64> {
    let d = required_events(PHASE3_HR, fwer / 2.0, power, &PHASE3_INFO_FRACTIONS)?;
    Ok((d as f64 / PHASE3_EVENT_FRACTIONS[1]).ceil() as u64)
}

pub fn table2(convention: LrConvention) -> Result<Vec<Table2Row>> {
    let mut rows = Vec::with_capacity(TABLE2_ROWS.len());
    let mut base_n = None;
    for &(power, n_stated) in &TABLE2_ROWS {
        let design = phase3_design(n_stated, 0.05, power)?;
        let lr = design.analysis_likelihood_ratios(convention)?;
        let n_total = phase3_sample_size(0.05, power)?;
        let base = *base_n.get_or_insert(n_total);
        let a = design.analyses();
        rows.push(Table2Row {
            power,
            n_total,
            n_pct: 100.0 * n_total as f64 / base as f64,
            hr_cv_ia: a[0].hr_critical,
            hr_cv_fa: a[1].hr_critical,
            r10_ia: lr.positive[0],
            r10_fa: lr.positive[1],
            r01_fa: lr.negative,
        });
    }
    Ok(rows)
}
