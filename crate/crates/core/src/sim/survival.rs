use super::{tally, MonteCarlo, SimulationReport};
use crate::error::{Error, Result};
use crate::gs::{AccrualModel, GroupSequentialDesign};
use crate::numerics::RngStream;

struct Patient {
    entry: f64,
    event_time: f64,
    control: bool,
}

/// Standardized log-rank statistic at calendar time `cutoff`, oriented so
/// that a treatment benefit is positive. `scratch` is reused across calls.
fn log_rank(patients: &[Patient], cutoff: f64, scratch: &mut Vec<(f64, bool, bool)>) -> f64 {
    scratch.clear();
    let (mut at_risk_c, mut at_risk_t) = (0.0, 0.0);
    for p in patients.iter().filter(|p| p.entry < cutoff) {
        let is_event = p.event_time <= cutoff;
        let time = p.event_time.min(cutoff) - p.entry;
        scratch.push((time, is_event, p.control));
        if p.control {
            at_risk_c += 1.0;
        } else {
            at_risk_t += 1.0;
        }
    }
    scratch.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let (mut score, mut var) = (0.0_f64, 0.0_f64);
    for &(_, is_event, control) in scratch.iter() {
        if is_event {
            let n = at_risk_c + at_risk_t;
            let expected_c = at_risk_c / n;
            score += if control { 1.0 } else { 0.0 } - expected_c;
            var += expected_c * (1.0 - expected_c);
        }
        if control {
            at_risk_c -= 1.0;
        } else {
            at_risk_t -= 1.0;
        }
    }
    if var > 0.0 {
        score / var.sqrt()
    } else {
        0.0
    }
}

/// Patient-level simulation of the group-sequential log-rank test.
///
/// Participants enter uniformly over the accrual period with exponential
/// event times (control median from the design, hazard scaled by `true_hr`
/// on treatment). Analysis k happens when the `D_k`-th event occurs, with
/// administrative censoring at that time.
pub fn simulate_gs_tte(
    design: &GroupSequentialDesign,
    true_hr: f64,
    acc: &AccrualModel,
    mc: &MonteCarlo,
) -> Result<SimulationReport> {
    simulate_gs_tte_with_bounds(design, &design.z_boundaries(), true_hr, acc, mc)
}

/// As [`simulate_gs_tte`] but comparing against explicit z-boundaries.
pub fn simulate_gs_tte_with_bounds(
    design: &GroupSequentialDesign,
    bounds: &[f64],
    true_hr: f64,
    acc: &AccrualModel,
    mc: &MonteCarlo,
) -> Result<SimulationReport> {
    let n = design.n_total() as usize;
    let events: Vec<usize> = design.analyses().iter().map(|a| a.events as usize).collect();
    if *events.last().expect("non-empty") > n {
        return Err(Error::Config(format!(
            "design needs {} events but enrols only {n} participants",
            events.last().expect("non-empty")
        )));
    }
    if bounds.len() != events.len() {
        return Err(Error::Config("one boundary per analysis is required".into()));
    }
    if !(true_hr > 0.0 && true_hr.is_finite()) {
        return Err(Error::domain(format!("true hazard ratio must be positive, got {true_hr}")));
    }
    if mc.replicates == 0 {
        return Err(Error::Config("at least one replicate is required".into()));
    }
    let rate_c = std::f64::consts::LN_2 / design.soc_median_months();
    let rate_t = rate_c * true_hr;
    let n_control = n / 2;
    let k = events.len();

    let counts = tally(mc.execution, mc.replicates, k, |i| {
        let mut rng = RngStream::new(mc.seed, i);
        let patients: Vec<Patient> = (0..n)
            .map(|j| {
                let control = j < n_control;
                let entry = acc.accrual_months * rng.open01();
                let rate = if control { rate_c } else { rate_t };
                Patient { entry, event_time: entry + rng.exponential(rate), control }
            })
            .collect();
        let mut calendar: Vec<f64> = patients.iter().map(|p| p.event_time).collect();
        calendar.sort_unstable_by(f64::total_cmp);
        let mut scratch = Vec::with_capacity(n);
        for (stage, (&d, &c)) in events.iter().zip(bounds).enumerate() {
            if c == f64::INFINITY {
                continue;
            }
            let cutoff = calendar[d - 1];
            if log_rank(&patients, cutoff, &mut scratch) >= c {
                return Some(stage);
            }
        }
        None
    });

    let total: u64 = counts.iter().sum();
    let mut named: Vec<(String, u64)> =
        counts.iter().enumerate().map(|(j, &c)| (format!("reject_analysis_{}", j + 1), c)).collect();
    named.push(("reject_total".into(), total));
    Ok(SimulationReport::from_counts(mc.replicates, mc.seed, named))
}
