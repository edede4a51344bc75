//! Two-arm, 1:1 randomized comparison of proportions (normal approximation,
//! one-sided superiority test).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{normal_cdf, normal_quantile_upper};

/// Variance used to turn a z critical value into a critical difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceConvention {
    /// `2 p̄ q̄ / n` with `p̄` the average design proportion.
    #[default]
    PooledNull,
    /// `(p_inv q_inv + p_soc q_soc) / n`.
    UnpooledAlternative,
}

fn check_props(p_soc: f64, p_inv: f64) -> Result<()> {
    for p in [p_soc, p_inv] {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("proportions must lie in (0,1), got {p}")));
        }
    }
    Ok(())
}

fn check_level(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    Ok(())
}

fn null_sd(p_soc: f64, p_inv: f64) -> f64 {
    let p_bar = 0.5 * (p_soc + p_inv);
    (2.0 * p_bar * (1.0 - p_bar)).sqrt()
}

fn alt_sd(p_soc: f64, p_inv: f64) -> f64 {
    (p_inv * (1.0 - p_inv) + p_soc * (1.0 - p_soc)).sqrt()
}

/// Continuous per-arm sample size solving the normal-approximation power
/// equation.
pub fn sample_size_two_props_exact(p_soc: f64, p_inv: f64, alpha_one_sided: f64, power: f64) -> Result<f64> {
    check_props(p_soc, p_inv)?;
    check_level(alpha_one_sided)?;
    check_level(power)?;
    if p_inv == p_soc {
        return Err(Error::domain("equal proportions leave nothing to detect"));
    }
    let num = normal_quantile_upper(alpha_one_sided)? * null_sd(p_soc, p_inv)
        + normal_quantile_upper(1.0 - power)? * alt_sd(p_soc, p_inv);
    let delta = p_inv - p_soc;
    Ok((num / delta).powi(2))
}

/// Per-arm sample size (rounded up).
pub fn sample_size_two_props(p_soc: f64, p_inv: f64, alpha_one_sided: f64, power: f64) -> Result<u64> {
    let n = sample_size_two_props_exact(p_soc, p_inv, alpha_one_sided, power)?;
    // Round away float noise just above an integer before the ceiling.
    Ok((n - 1e-9).ceil().max(2.0) as u64)
}

/// Normal-approximation power at `n_per_arm` participants per arm.
pub fn power_two_props(p_soc: f64, p_inv: f64, alpha_one_sided: f64, n_per_arm: u64) -> Result<f64> {
    check_props(p_soc, p_inv)?;
    check_level(alpha_one_sided)?;
    if n_per_arm < 2 {
        return Err(Error::domain("at least two participants per arm are required"));
    }
    let z = normal_quantile_upper(alpha_one_sided)?;
    let n = n_per_arm as f64;
    let delta = p_inv - p_soc;
    Ok(normal_cdf((delta * n.sqrt() - z * null_sd(p_soc, p_inv)) / alt_sd(p_soc, p_inv)))
}

/// Smallest observed difference that crosses the one-sided z critical value.
pub fn critical_difference(
    p_soc: f64,
    p_inv: f64,
    alpha_one_sided: f64,
    n_per_arm: u64,
    convention: VarianceConvention,
) -> Result<f64> {
    check_props(p_soc, p_inv)?;
    check_level(alpha_one_sided)?;
    if n_per_arm < 2 {
        return Err(Error::domain("at least two participants per arm are required"));
    }
    let sd = match convention {
        VarianceConvention::PooledNull => null_sd(p_soc, p_inv),
        VarianceConvention::UnpooledAlternative => alt_sd(p_soc, p_inv),
    };
    Ok(normal_quantile_upper(alpha_one_sided)? * sd / (n_per_arm as f64).sqrt())
}

/// Phase-2 design comparing the proportion event-free at a landmark time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoProportionDesign {
    pub p_soc: f64,
    pub p_inv: f64,
    pub alpha_one_sided: f64,
    pub power: f64,
    pub n_per_arm: u64,
    pub critical_difference: f64,
}

impl TwoProportionDesign {
    /// Sizes the design for the requested power.
    pub fn new(p_soc: f64, p_inv: f64, alpha_one_sided: f64, power: f64) -> Result<Self> {
        if !(p_inv > p_soc) {
            return Err(Error::domain("superiority design needs p_inv > p_soc"));
        }
        let n = sample_size_two_props(p_soc, p_inv, alpha_one_sided, power)?;
        Self::with_n(p_soc, p_inv, alpha_one_sided, n)
    }

    /// Fixes the per-arm size; `power` becomes the achieved power.
    pub fn with_n(p_soc: f64, p_inv: f64, alpha_one_sided: f64, n_per_arm: u64) -> Result<Self> {
        if !(p_inv > p_soc) {
            return Err(Error::domain("superiority design needs p_inv > p_soc"));
        }
        Ok(Self {
            p_soc,
            p_inv,
            alpha_one_sided,
            power: power_two_props(p_soc, p_inv, alpha_one_sided, n_per_arm)?,
            n_per_arm,
            critical_difference: critical_difference(
                p_soc,
                p_inv,
                alpha_one_sided,
                n_per_arm,
                VarianceConvention::PooledNull,
            )?,
        })
    }

    pub fn n_total(&self) -> u64 {
        2 * self.n_per_arm
    }

    pub fn z_critical(&self) -> f64 {
        normal_quantile_upper(self.alpha_one_sided).expect("alpha validated")
    }
}

impl TwoProportionDesign {
    /// Decision of the one-sided pooled z-test given the responder counts
    /// in each arm.
    pub fn rejects(&self, x_soc: u64, x_inv: u64) -> bool {
        let n = self.n_per_arm as f64;
        let (x_soc, x_inv) = (x_soc as f64, x_inv as f64);
        let pooled = (x_soc + x_inv) / (2.0 * n);
        let se = (2.0 * pooled * (1.0 - pooled) / n).sqrt();
        se > 0.0 && (x_inv - x_soc) / n >= self.z_critical() * se
    }
}

fn binomial_pmf(n: u64, p: f64) -> Vec<f64> {
    let nf = n as f64;
    (0..=n)
        .map(|k| {
            let k = k as f64;
            let ln_choose = libm::lgamma(nf + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(nf - k + 1.0);
            let ln_p = if k > 0.0 { k * p.ln() } else { 0.0 };
            let ln_q = if k < nf { (nf - k) * (1.0 - p).ln() } else { 0.0 };
            (ln_choose + ln_p + ln_q).exp()
        })
        .collect()
}

/// Exact rejection probability of the design's pooled z-test, summing the
/// product binomial law over every pair of arm counts.
pub fn exact_rejection_probability(
    design: &TwoProportionDesign,
    true_p_soc: f64,
    true_p_inv: f64,
) -> Result<f64> {
    for p in [true_p_soc, true_p_inv] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("proportion must lie in [0,1], got {p}")));
        }
    }
    let n = design.n_per_arm;
    let soc = binomial_pmf(n, true_p_soc);
    let inv = binomial_pmf(n, true_p_inv);
    let mut total = 0.0;
    for (x_soc, ps) in soc.iter().enumerate() {
        for (x_inv, pi) in inv.iter().enumerate() {
            if design.rejects(x_soc as u64, x_inv as u64) {
                total += ps * pi;
            }
        }
    }
    Ok(total.min(1.0))
}
