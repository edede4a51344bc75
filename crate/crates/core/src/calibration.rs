//! Inverse problems: operating characteristics needed for post-study odds
//! to clear a chosen percentile of the equipoise distribution.

use serde::{Deserialize, Serialize};

use crate::equipoise::{EquipoiseModel, JointEquipoiseModel};
use crate::error::{Error, Result};
use crate::odds::CdpOddsReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Evidence for H1 from a positive outcome.
    #[default]
    Positive,
    /// Evidence for H0 from a negative outcome.
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TargetModel {
    Single(EquipoiseModel),
    Joint(JointEquipoiseModel),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTarget {
    pub model: TargetModel,
    pub percentile: f64,
    pub direction: Direction,
}

impl CalibrationTarget {
    pub fn new(model: TargetModel, percentile: f64, direction: Direction) -> Result<Self> {
        if !(percentile > 0.0 && percentile < 1.0) {
            return Err(Error::domain(format!("percentile must lie in (0,1), got {percentile}")));
        }
        Ok(Self { model, percentile, direction })
    }

    pub fn single(model: EquipoiseModel, percentile: f64) -> Result<Self> {
        Self::new(TargetModel::Single(model), percentile, Direction::Positive)
    }

    pub fn negative(model: EquipoiseModel, percentile: f64) -> Result<Self> {
        Self::new(TargetModel::Single(model), percentile, Direction::Negative)
    }

    /// Post-study odds the outcome has to reach.
    pub fn threshold(&self) -> Result<f64> {
        match self.model {
            TargetModel::Single(m) => m.odds_quantile(self.percentile),
            TargetModel::Joint(j) => j.product_quantile(self.percentile),
        }
    }
}

/// Either the operating characteristic that meets the target, or the
/// finding that none in (0, 1] does.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Calibration {
    Feasible(f64),
    /// `limit` is the largest false positive rate that would be feasible
    /// at full power.
    Infeasible {
        required: f64,
        limit: f64,
    },
}

impl Calibration {
    pub fn value(&self) -> Option<f64> {
        match self {
            Calibration::Feasible(v) => Some(*v),
            Calibration::Infeasible { .. } => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Calibration::Feasible(_))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    Ok(())
}

/// Power at which a positive outcome at false positive rate `alpha` gives
/// post-study odds equal to the target threshold.
pub fn required_power(alpha: f64, target: &CalibrationTarget) -> Result<Calibration> {
    check_alpha(alpha)?;
    let q = target.threshold()?;
    let power = alpha * q;
    Ok(if power <= 1.0 {
        Calibration::Feasible(power)
    } else {
        Calibration::Infeasible { required: power, limit: 1.0 / q }
    })
}

/// Largest false positive rate compatible with the target when power is
/// capped at `power_cap`.
pub fn max_alpha(target: &CalibrationTarget, power_cap: f64) -> Result<f64> {
    if !(power_cap > 0.0 && power_cap <= 1.0) {
        return Err(Error::domain(format!("power cap must lie in (0,1], got {power_cap}")));
    }
    let q = target.threshold()?;
    Ok(match target.direction {
        Direction::Positive => power_cap / q,
        // (1 − α) / (1 − power) ≥ q
        Direction::Negative => (1.0 - q * (1.0 - power_cap)).clamp(0.0, 1.0),
    })
}

/// Power at which a negative outcome gives post-study odds for H0 equal to
/// the target threshold: `(1 − α) / (1 − p) = q`.
pub fn required_negative_power(alpha: f64, target: &CalibrationTarget) -> Result<Calibration> {
    check_alpha(alpha)?;
    let q = target.threshold()?;
    if !q.is_finite() {
        return Ok(Calibration::Infeasible { required: 1.0, limit: 0.0 });
    }
    let power = 1.0 - (1.0 - alpha) / q;
    Ok(if power < 1.0 {
        Calibration::Feasible(power.max(0.0))
    } else {
        Calibration::Infeasible { required: power, limit: 0.0 }
    })
}

/// A development plan evaluated for the search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdpCandidate {
    pub name: String,
    pub total_n: u64,
    pub report: CdpOddsReport,
}

impl CdpCandidate {
    pub fn qualifies(&self, threshold: f64) -> bool {
        self.report.final_r10_pp() >= threshold && self.report.r01_nn.value >= threshold
    }
}

/// Smallest plan whose double-positive odds (final analysis) and
/// double-negative odds both reach `threshold`. Ties on size go to the
/// larger double-negative odds, then to the earlier candidate.
pub fn cdp_search(candidates: &[CdpCandidate], threshold: f64) -> Option<&CdpCandidate> {
    candidates
        .iter()
        .enumerate()
        .filter(|(_, c)| c.qualifies(threshold))
        .min_by(|(i, a), (j, b)| {
            a.total_n
                .cmp(&b.total_n)
                .then(b.report.r01_nn.value.total_cmp(&a.report.r01_nn.value))
                .then(i.cmp(j))
        })
        .map(|(_, c)| c)
}
