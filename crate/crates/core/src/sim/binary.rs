use rand_distr::{Binomial, Distribution};

use super::{tally, MonteCarlo, SimulationReport};
use crate::error::{Error, Result};
use crate::numerics::RngStream;
use crate::proportions::TwoProportionDesign;

/// Rejection rate of the design's one-sided pooled z-test when the true
/// landmark proportions are `true_p_soc` and `true_p_inv`.
pub fn simulate_two_prop(
    design: &TwoProportionDesign,
    true_p_soc: f64,
    true_p_inv: f64,
    mc: &MonteCarlo,
) -> Result<SimulationReport> {
    if mc.replicates == 0 {
        return Err(Error::Config("at least one replicate is required".into()));
    }
    let n = design.n_per_arm;
    let soc = Binomial::new(n, true_p_soc).map_err(|e| Error::domain(format!("control proportion: {e}")))?;
    let inv =
        Binomial::new(n, true_p_inv).map_err(|e| Error::domain(format!("treatment proportion: {e}")))?;
    let counts = tally(mc.execution, mc.replicates, 1, |i| {
        let mut rng = RngStream::new(mc.seed, i);
        let x_soc = soc.sample(&mut rng);
        let x_inv = inv.sample(&mut rng);
        design.rejects(x_soc, x_inv).then_some(0)
    });
    Ok(SimulationReport::from_counts(mc.replicates, mc.seed, vec![("reject".into(), counts[0])]))
}
