//! Post-study odds of design hypotheses for single trials and for two-study
//! development plans.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::equipoise::EquipoiseModel;
use crate::error::{Error, Result};

/// False positive rate `p(+|H0)` and power `p(+|H1)` of a trial outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingCharacteristics {
    alpha: f64,
    power: f64,
}

impl OperatingCharacteristics {
    pub fn new(alpha: f64, power: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!("false positive rate must lie in (0,1), got {alpha}")));
        }
        if !(power > 0.0 && power <= 1.0) {
            return Err(Error::domain(format!("power must lie in (0,1], got {power}")));
        }
        Ok(Self { alpha, power })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    /// A positive outcome is evidence for H1 only when power exceeds the
    /// false positive rate.
    pub fn is_informative(&self) -> bool {
        self.power > self.alpha
    }

    /// `p(+|H1) / p(+|H0)`.
    pub fn positive_lr(&self) -> f64 {
        self.power / self.alpha
    }

    /// `p(−|H0) / p(−|H1)`; infinite when power is one.
    pub fn negative_lr(&self) -> f64 {
        (1.0 - self.alpha) / (1.0 - self.power)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    H1,
    H0,
}

/// Observed outcome of one trial or of a phase-2/phase-3 pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Positive,
    Negative,
    PositivePositive,
    PositiveNegative,
    NegativePositive,
    NegativeNegative,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Outcome::Positive => "+",
            Outcome::Negative => "-",
            Outcome::PositivePositive => "(+2,+3)",
            Outcome::PositiveNegative => "(+2,-3)",
            Outcome::NegativePositive => "(-2,+3)",
            Outcome::NegativeNegative => "(-2,-3)",
        };
        f.write_str(s)
    }
}

/// Odds in favour of `favors` after observing `outcome`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PostStudyOdds {
    pub value: f64,
    pub favors: Hypothesis,
    pub outcome: Outcome,
}

impl PostStudyOdds {
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

fn check_prior(prior_odds: f64) -> Result<()> {
    if !(prior_odds > 0.0 && prior_odds.is_finite()) {
        return Err(Error::domain(format!("prior odds must be positive and finite, got {prior_odds}")));
    }
    Ok(())
}

/// `r₁₀(+) = prior · power / alpha`.
pub fn post_odds_positive(oc: &OperatingCharacteristics, prior_odds: f64) -> Result<PostStudyOdds> {
    check_prior(prior_odds)?;
    Ok(PostStudyOdds {
        value: prior_odds * oc.positive_lr(),
        favors: Hypothesis::H1,
        outcome: Outcome::Positive,
    })
}

/// `r₀₁(−) = (1 / prior) · (1 − alpha) / (1 − power)`.
pub fn post_odds_negative(oc: &OperatingCharacteristics, prior_odds: f64) -> Result<PostStudyOdds> {
    check_prior(prior_odds)?;
    if oc.power >= 1.0 {
        return Err(Error::Degenerate(
            "power of one makes a negative outcome infinitely strong evidence for H0".into(),
        ));
    }
    Ok(PostStudyOdds {
        value: oc.negative_lr() / prior_odds,
        favors: Hypothesis::H0,
        outcome: Outcome::Negative,
    })
}

/// Post-study odds for the four outcomes of a phase-2 + phase-3 plan.
///
/// Phase-3 positive odds are reported once per analysis (interim, final)
/// since a group-sequential trial has a distinct likelihood ratio at each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdpOddsReport {
    pub prior_odds: f64,
    pub phase2_positive_lr: f64,
    pub phase2_negative_lr: f64,
    pub phase3_positive_lr: Vec<f64>,
    pub phase3_negative_lr: f64,
    pub r10_pp: Vec<PostStudyOdds>,
    pub r01_pn: PostStudyOdds,
    pub r10_np: Vec<PostStudyOdds>,
    pub r01_nn: PostStudyOdds,
}

impl CdpOddsReport {
    /// Double-positive odds at the last analysis.
    pub fn final_r10_pp(&self) -> f64 {
        self.r10_pp.last().map_or(f64::NAN, |o| o.value)
    }

    pub fn final_r10_np(&self) -> f64 {
        self.r10_np.last().map_or(f64::NAN, |o| o.value)
    }
}

/// Combines a phase-2 outcome with phase-3 likelihood ratios under
/// conditional independence of the two studies given the joint hypotheses.
pub fn cdp_odds(
    phase2: &OperatingCharacteristics,
    phase3_pos_lr: &[f64],
    phase3_neg_lr: f64,
    prior_odds_joint: f64,
) -> Result<CdpOddsReport> {
    check_prior(prior_odds_joint)?;
    if phase3_pos_lr.is_empty() {
        return Err(Error::domain("at least one phase-3 positive likelihood ratio is required"));
    }
    if phase3_pos_lr.iter().chain([&phase3_neg_lr]).any(|&lr| !(lr > 0.0 && lr.is_finite())) {
        return Err(Error::Degenerate("phase-3 likelihood ratios must be positive and finite".into()));
    }
    if phase2.power >= 1.0 {
        return Err(Error::Degenerate("phase-2 power of one leaves p(-|H1) = 0".into()));
    }
    let pos2 = phase2.positive_lr();
    let neg2 = phase2.negative_lr();
    let odds = |value, favors, outcome| PostStudyOdds { value, favors, outcome };

    let r10_pp = phase3_pos_lr
        .iter()
        .map(|lr3| odds(prior_odds_joint * pos2 * lr3, Hypothesis::H1, Outcome::PositivePositive))
        .collect();
    let r10_np = phase3_pos_lr
        .iter()
        .map(|lr3| odds(prior_odds_joint * lr3 / neg2, Hypothesis::H1, Outcome::NegativePositive))
        .collect();
    Ok(CdpOddsReport {
        prior_odds: prior_odds_joint,
        phase2_positive_lr: pos2,
        phase2_negative_lr: neg2,
        phase3_positive_lr: phase3_pos_lr.to_vec(),
        phase3_negative_lr: phase3_neg_lr,
        r10_pp,
        r01_pn: odds(phase3_neg_lr / (pos2 * prior_odds_joint), Hypothesis::H0, Outcome::PositiveNegative),
        r10_np,
        r01_nn: odds(neg2 * phase3_neg_lr / prior_odds_joint, Hypothesis::H0, Outcome::NegativeNegative),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub alpha: f64,
    pub power: f64,
    pub odds: f64,
    pub percentile: f64,
}

pub const TABLE1_DESIGNS: [(f64, f64); 4] = [(0.10, 0.90), (0.05, 0.90), (0.05, 0.95), (0.01, 0.99)];

/// Positive-outcome odds of four common designs and where they fall on the
/// BP(1,1) equipoise distribution.
pub fn table1() -> Vec<Table1Row> {
    TABLE1_DESIGNS
        .iter()
        .map(|&(alpha, power)| {
            let oc = OperatingCharacteristics::new(alpha, power).expect("fixed designs are valid");
            let odds = post_odds_positive(&oc, 1.0).expect("unit prior").value;
            Table1Row { alpha, power, odds, percentile: EquipoiseModel::BP11.odds_cdf(odds) }
        })
        .collect()
}
