//! Two-study clinical development plans: a randomized phase-2 trial on a
//! landmark proportion followed by a group-sequential phase-3 trial.

use serde::{Deserialize, Serialize};

use crate::calibration::CdpCandidate;
use crate::error::Result;
use crate::gs::{phase3_design, GroupSequentialDesign, LrConvention};
use crate::odds::{cdp_odds, CdpOddsReport, OperatingCharacteristics};
use crate::proportions::{critical_difference, VarianceConvention};

/// Phase-2 landmark proportions of the reference case study.
pub const PHASE2_P_SOC: f64 = 0.55;
pub const PHASE2_P_INV: f64 = 0.75;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdpDesign {
    pub name: String,
    pub phase2: OperatingCharacteristics,
    pub phase2_n_total: u64,
    pub phase3: GroupSequentialDesign,
    pub prior_odds: f64,
}

impl CdpDesign {
    pub fn total_n(&self) -> u64 {
        self.phase2_n_total + self.phase3.n_total()
    }

    pub fn odds(&self, convention: LrConvention) -> Result<CdpOddsReport> {
        let lr3 = self.phase3.analysis_likelihood_ratios(convention)?;
        cdp_odds(&self.phase2, &lr3.positive, lr3.negative, self.prior_odds)
    }

    pub fn evaluate(&self, convention: LrConvention) -> Result<CdpCandidate> {
        Ok(CdpCandidate { name: self.name.clone(), total_n: self.total_n(), report: self.odds(convention)? })
    }
}

/// The five reference plans: (name, phase-2 α, phase-2 power, phase-2 N,
/// phase-3 N, phase-3 FWER, phase-3 power).
pub const TABLE4_PLANS: [(&str, f64, f64, u64, u64, f64, f64); 5] = [
    ("Minimal", 0.10, 0.80, 100, 526, 0.05, 0.80),
    ("Upfront", 0.05, 0.90, 192, 526, 0.05, 0.80),
    ("Base", 0.10, 0.80, 100, 680, 0.05, 0.90),
    ("Robust", 0.10, 0.80, 100, 826, 0.05, 0.95),
    ("Robust 1% FWER", 0.10, 0.80, 100, 1484, 0.01, 0.99),
];

pub fn table4_designs() -> Result<Vec<CdpDesign>> {
    TABLE4_PLANS
        .iter()
        .map(|&(name, a2, p2, n2, n3, fwer3, p3)| {
            Ok(CdpDesign {
                name: name.to_string(),
                phase2: OperatingCharacteristics::new(a2, p2)?,
                phase2_n_total: n2,
                phase3: phase3_design(n3, fwer3, p3)?,
                prior_odds: 1.0,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table4Row {
    pub design: String,
    pub total_n: u64,
    pub ph3_n: u64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub power2: f64,
    pub power3: f64,
    /// Phase-2 critical difference at a two-sided 5% z-test, pooled-null
    /// variance.
    pub ph2_cv: f64,
    pub hr_cv_ia: f64,
    pub hr_cv_fa: f64,
    pub r10_pp_ia: f64,
    pub r10_pp_fa: f64,
    pub r01_pn: f64,
    pub r10_np_ia: f64,
    pub r10_np_fa: f64,
    pub r01_nn: f64,
}

pub fn table4(convention: LrConvention) -> Result<Vec<Table4Row>> {
    table4_designs()?
        .iter()
        .map(|d| {
            let report = d.odds(convention)?;
            let a = d.phase3.analyses();
            Ok(Table4Row {
                design: d.name.clone(),
                total_n: d.total_n(),
                ph3_n: d.phase3.n_total(),
                alpha2: d.phase2.alpha(),
                alpha3: d.phase3.fwer(),
                power2: d.phase2.power(),
                power3: d.phase3.evidence_power(),
                ph2_cv: critical_difference(
                    PHASE2_P_SOC,
                    PHASE2_P_INV,
                    0.025,
                    d.phase2_n_total / 2,
                    VarianceConvention::PooledNull,
                )?,
                hr_cv_ia: a[0].hr_critical,
                hr_cv_fa: a[a.len() - 1].hr_critical,
                r10_pp_ia: report.r10_pp[0].value,
                r10_pp_fa: report.final_r10_pp(),
                r01_pn: report.r01_pn.value,
                r10_np_ia: report.r10_np[0].value,
                r10_np_fa: report.final_r10_np(),
                r01_nn: report.r01_nn.value,
            })
        })
        .collect()
}

/// Plans from [`table4_designs`] evaluated for [`crate::calibration::cdp_search`].
pub fn table4_candidates(convention: LrConvention) -> Result<Vec<CdpCandidate>> {
    table4_designs()?.iter().map(|d| d.evaluate(convention)).collect()
}
