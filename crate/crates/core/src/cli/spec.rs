//! JSON design specification files.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};

use crate::equipoise::{EquipoiseModel, JointEquipoiseModel};
use crate::error::{Error, Result};
use crate::gs::{required_events, GroupSequentialDesign, GsDesignSpec, LrConvention, Sidedness};
use crate::odds::OperatingCharacteristics;
use crate::plan::{CdpDesign, PHASE2_P_INV, PHASE2_P_SOC};
use crate::proportions::{sample_size_two_props, TwoProportionDesign};

pub const SCHEMA_VERSION: u32 = 1;

/// A probability strictly inside (0, 1), checked while parsing so that the
/// diagnostic carries the offending line and column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Probability(pub f64);

impl<'de> Deserialize<'de> for Probability {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = f64::deserialize(d)?;
        if p > 0.0 && p < 1.0 {
            Ok(Probability(p))
        } else {
            Err(de::Error::custom(format!("probability {p} is outside (0, 1)")))
        }
    }
}

/// Equipoise model name as written in spec files and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    #[default]
    Bp11,
    Bp0505,
    Bp12,
}

impl ModelName {
    pub fn model(self) -> EquipoiseModel {
        match self {
            ModelName::Bp11 => EquipoiseModel::BP11,
            ModelName::Bp0505 => EquipoiseModel::BP0505,
            ModelName::Bp12 => EquipoiseModel::BP12,
        }
    }
}

impl FromStr for ModelName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bp11" => Ok(ModelName::Bp11),
            "bp0505" => Ok(ModelName::Bp0505),
            "bp12" => Ok(ModelName::Bp12),
            other => Err(format!("unknown model `{other}` (expected bp11, bp0505 or bp12)")),
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelName::Bp11 => "bp11",
            ModelName::Bp0505 => "bp0505",
            ModelName::Bp12 => "bp12",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub schema: u32,
    #[serde(default)]
    pub gs: Option<GsSpec>,
    #[serde(default)]
    pub two_prop: Option<TwoPropSpec>,
    #[serde(default)]
    pub cdp: Option<CdpSpec>,
}

/// Group-sequential time-to-event design. Analyses are given either as
/// event counts or as fractions of `n_total` with an event.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GsSpec {
    pub fwer: Probability,
    #[serde(default)]
    pub sidedness: Sidedness,
    pub hr_alt: Probability,
    pub soc_median_months: f64,
    #[serde(default)]
    pub info_fractions: Option<Vec<f64>>,
    #[serde(default)]
    pub events: Option<Vec<u64>>,
    #[serde(default)]
    pub event_fractions: Option<Vec<f64>>,
    #[serde(default)]
    pub n_total: Option<u64>,
    #[serde(default)]
    pub target_power: Option<Probability>,
    #[serde(default)]
    pub convention: LrConvention,
    #[serde(default)]
    pub model: ModelName,
    /// Uniform accrual period used by `--simulate`.
    #[serde(default = "default_accrual")]
    pub accrual_months: f64,
}

fn default_accrual() -> f64 {
    24.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoPropSpec {
    pub p_soc: Probability,
    pub p_inv: Probability,
    /// One-sided false positive rate.
    pub alpha: Probability,
    #[serde(default)]
    pub power: Option<Probability>,
    #[serde(default)]
    pub n_per_arm: Option<u64>,
    #[serde(default)]
    pub model: ModelName,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Phase2Spec {
    pub alpha: Probability,
    pub power: Probability,
    #[serde(default)]
    pub n_total: Option<u64>,
    #[serde(default)]
    pub p_soc: Option<Probability>,
    #[serde(default)]
    pub p_inv: Option<Probability>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdpSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub phase2: Phase2Spec,
    pub phase3: GsSpec,
    #[serde(default = "default_prior")]
    pub prior_odds: f64,
    #[serde(default)]
    pub joint_model: Option<[ModelName; 2]>,
}

fn default_prior() -> f64 {
    1.0
}

/// A validated design ready for evaluation.
#[derive(Debug, Clone)]
pub enum Design {
    Gs { design: GroupSequentialDesign, spec: GsSpec },
    TwoProp { design: TwoProportionDesign, model: EquipoiseModel },
    Cdp { design: CdpDesign, joint: JointEquipoiseModel, convention: LrConvention, phase3: GsSpec },
}

/// Parses and validates a spec file. Errors are returned as display-ready
/// messages; syntax and range errors carry line and column.
pub fn parse(text: &str) -> std::result::Result<Design, String> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if file.schema != SCHEMA_VERSION {
        return Err(format!("unsupported schema version {} (expected {SCHEMA_VERSION})", file.schema));
    }
    let design = match (file.gs, file.two_prop, file.cdp) {
        (Some(gs), None, None) => build_gs(&gs).map(|design| Design::Gs { design, spec: gs }),
        (None, Some(tp), None) => build_two_prop(&tp),
        (None, None, Some(cdp)) => build_cdp(cdp),
        _ => return Err("exactly one of `gs`, `two_prop` or `cdp` must be given".into()),
    };
    design.map_err(|e| e.to_string())
}

fn check_fraction_list(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() || v.iter().any(|&f| !(f > 0.0 && f <= 1.0)) {
        return Err(Error::Config(format!("`{name}` entries must lie in (0, 1]")));
    }
    Ok(())
}

pub fn build_gs(spec: &GsSpec) -> Result<GroupSequentialDesign> {
    if !(spec.soc_median_months > 0.0 && spec.accrual_months > 0.0) {
        return Err(Error::Config("`soc_median_months` and `accrual_months` must be positive".into()));
    }
    let target_power = spec.target_power.map(|p| p.0);
    let (events, n_total) = match (&spec.events, &spec.event_fractions) {
        (Some(events), None) => {
            let n =
                spec.n_total.ok_or_else(|| Error::Config("`n_total` is required with `events`".into()))?;
            (events.clone(), n)
        }
        (None, Some(fracs)) => {
            check_fraction_list("event_fractions", fracs)?;
            let n = match (spec.n_total, target_power) {
                (Some(n), _) => n,
                (None, Some(power)) => {
                    let last = *fracs.last().expect("non-empty");
                    let info = spec
                        .info_fractions
                        .clone()
                        .unwrap_or_else(|| fracs.iter().map(|f| f / last).collect());
                    let d =
                        required_events(spec.hr_alt.0, spec.fwer.0 / spec.sidedness.tails(), power, &info)?;
                    (d as f64 / last).ceil() as u64
                }
                (None, None) => {
                    return Err(Error::Config("`n_total` or `target_power` is required".into()));
                }
            };
            (fracs.iter().map(|f| (f * n as f64).round() as u64).collect(), n)
        }
        _ => return Err(Error::Config("exactly one of `events` or `event_fractions` must be given".into())),
    };
    let last =
        *events.last().ok_or_else(|| Error::Config("at least one analysis is required".into()))? as f64;
    let info_fractions = match &spec.info_fractions {
        Some(info) => {
            check_fraction_list("info_fractions", info)?;
            info.clone()
        }
        None => events.iter().map(|&d| d as f64 / last).collect(),
    };
    GroupSequentialDesign::new(GsDesignSpec {
        info_fractions,
        events,
        fwer: spec.fwer.0,
        sidedness: spec.sidedness,
        hr_alt: spec.hr_alt.0,
        soc_median_months: spec.soc_median_months,
        n_total,
        target_power,
    })
}

fn build_two_prop(spec: &TwoPropSpec) -> Result<Design> {
    let design = match (spec.power, spec.n_per_arm) {
        (Some(power), None) => TwoProportionDesign::new(spec.p_soc.0, spec.p_inv.0, spec.alpha.0, power.0)?,
        (None, Some(n)) if n > 0 => TwoProportionDesign::with_n(spec.p_soc.0, spec.p_inv.0, spec.alpha.0, n)?,
        _ => {
            return Err(Error::Config(
                "exactly one of `power` or a positive `n_per_arm` must be given".into(),
            ))
        }
    };
    Ok(Design::TwoProp { design, model: spec.model.model() })
}

fn build_cdp(spec: CdpSpec) -> Result<Design> {
    if !(spec.prior_odds > 0.0 && spec.prior_odds.is_finite()) {
        return Err(Error::Config("`prior_odds` must be positive and finite".into()));
    }
    let p2 = &spec.phase2;
    let phase2 = OperatingCharacteristics::new(p2.alpha.0, p2.power.0)?;
    let phase2_n_total = match p2.n_total {
        Some(n) => n,
        None => {
            let p_soc = p2.p_soc.map_or(PHASE2_P_SOC, |p| p.0);
            let p_inv = p2.p_inv.map_or(PHASE2_P_INV, |p| p.0);
            2 * sample_size_two_props(p_soc, p_inv, p2.alpha.0, p2.power.0)?
        }
    };
    let phase3 = build_gs(&spec.phase3)?;
    let [m2, m3] = spec.joint_model.unwrap_or_default();
    let design = CdpDesign {
        name: spec.name.unwrap_or_else(|| "plan".into()),
        phase2,
        phase2_n_total,
        phase3,
        prior_odds: spec.prior_odds,
    };
    Ok(Design::Cdp {
        design,
        joint: JointEquipoiseModel::new(m2.model(), m3.model()),
        convention: spec.phase3.convention,
        phase3: spec.phase3,
    })
}
