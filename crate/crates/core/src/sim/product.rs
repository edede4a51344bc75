use super::{Execution, MonteCarlo};
use crate::equipoise::JointEquipoiseModel;
use crate::error::{Error, Result};
use crate::numerics::RngStream;

const BLOCK: u64 = 1 << 16;

/// Empirical quantile with an order-statistic standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileEstimate {
    pub p: f64,
    pub estimate: f64,
    pub se: f64,
    pub samples: u64,
}

fn draw_block(j: &JointEquipoiseModel, seed: u64, block: u64, len: u64) -> Vec<f64> {
    let mut rng = RngStream::new(seed, block);
    (0..len)
        .map(|_| {
            let r2 = j.phase2.inverse_cdf(rng.open01());
            let r3 = j.phase3.inverse_cdf(rng.open01());
            r2 * r3
        })
        .collect()
}

fn blocks(samples: u64) -> impl Iterator<Item = (u64, u64)> + Clone {
    let count = samples.div_ceil(BLOCK);
    (0..count).map(move |b| (b, BLOCK.min(samples - b * BLOCK)))
}

fn draw_products(j: &JointEquipoiseModel, mc: &MonteCarlo) -> Vec<f64> {
    match mc.execution {
        Execution::Sequential => {
            blocks(mc.replicates).flat_map(|(b, len)| draw_block(j, mc.seed, b, len)).collect()
        }
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            let list: Vec<(u64, u64)> = blocks(mc.replicates).collect();
            list.into_par_iter().flat_map_iter(|(b, len)| draw_block(j, mc.seed, b, len)).collect()
        }
    }
}

fn sort(values: &mut [f64], execution: Execution) {
    match execution {
        Execution::Sequential => values.sort_unstable_by(f64::total_cmp),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            values.par_sort_unstable_by(f64::total_cmp)
        }
    }
}

fn check(mc: &MonteCarlo, ps: &[f64]) -> Result<()> {
    if mc.replicates < 100 {
        return Err(Error::Config("at least 100 samples are required".into()));
    }
    if ps.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
        return Err(Error::domain("quantile levels must lie in (0,1)"));
    }
    Ok(())
}

/// Empirical quantiles of `R₂·R₃` from one shared sample of size
/// `mc.replicates`, drawn by inverse CDF of each marginal.
pub fn mc_product_quantiles(
    j: &JointEquipoiseModel,
    ps: &[f64],
    mc: &MonteCarlo,
) -> Result<Vec<QuantileEstimate>> {
    check(mc, ps)?;
    let mut values = draw_products(j, mc);
    sort(&mut values, mc.execution);
    let n = values.len() as f64;
    let last = values.len() - 1;
    let at = |rank: f64| values[(rank.max(1.0) as usize - 1).min(last)];
    Ok(ps
        .iter()
        .map(|&p| {
            let centre = n * p;
            let spread = (n * p * (1.0 - p)).sqrt();
            QuantileEstimate {
                p,
                estimate: at(centre.ceil()),
                se: 0.5 * (at((centre + spread).ceil()) - at((centre - spread).floor())),
                samples: mc.replicates,
            }
        })
        .collect())
}

pub fn mc_product_quantile(j: &JointEquipoiseModel, p: f64, mc: &MonteCarlo) -> Result<QuantileEstimate> {
    Ok(mc_product_quantiles(j, &[p], mc)?[0])
}

/// Monte Carlo estimate of `P(R₂·R₃ ≤ c)` and its binomial standard error.
pub fn mc_product_cdf(j: &JointEquipoiseModel, c: f64, mc: &MonteCarlo) -> Result<(f64, f64)> {
    check(mc, &[])?;
    let count = super::sum_counts(mc.execution, mc.replicates.div_ceil(BLOCK), |b| {
        let len = BLOCK.min(mc.replicates - b * BLOCK);
        draw_block(j, mc.seed, b, len).iter().filter(|&&r| r <= c).count() as u64
    });
    let n = mc.replicates as f64;
    let p = count as f64 / n;
    Ok((p, (p * (1.0 - p) / n).sqrt()))
}
