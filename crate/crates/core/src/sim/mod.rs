//! Monte Carlo oracle for the analytic engines.
//!
//! Every replicate (or sample block) draws from its own [`RngStream`] keyed
//! by its index, and results are reduced by summing integer counts, so a
//! report depends only on the seed and not on the number of worker threads.
//!
//! [`RngStream`]: crate::numerics::RngStream

mod binary;
mod product;
mod survival;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use binary::simulate_two_prop;
pub use product::{mc_product_cdf, mc_product_quantile, mc_product_quantiles, QuantileEstimate};
pub use survival::{simulate_gs_tte, simulate_gs_tte_with_bounds};

/// How replicates are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Replicate count, seed and scheduling for one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarlo {
    pub replicates: u64,
    pub seed: u64,
    pub execution: Execution,
}

impl MonteCarlo {
    pub fn new(replicates: u64, seed: u64) -> Self {
        Self { replicates, seed, execution: Execution::default() }
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub name: String,
    pub estimate: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub replicates: u64,
    pub seed: u64,
    pub estimates: Vec<Estimate>,
}

impl SimulationReport {
    pub(crate) fn from_counts(replicates: u64, seed: u64, named: Vec<(String, u64)>) -> Self {
        let n = replicates as f64;
        let estimates = named
            .into_iter()
            .map(|(name, count)| {
                let p = count as f64 / n;
                Estimate { name, estimate: p, se: (p * (1.0 - p) / n).sqrt() }
            })
            .collect();
        Self { replicates, seed, estimates }
    }

    pub fn get(&self, name: &str) -> Option<&Estimate> {
        self.estimates.iter().find(|e| e.name == name)
    }

    /// CSV with header `name,estimate,se,replicates,seed`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,estimate,se,replicates,seed\n");
        for e in &self.estimates {
            let _ = writeln!(out, "{},{},{},{},{}", e.name, e.estimate, e.se, self.replicates, self.seed);
        }
        out
    }
}

/// Runs `replicate(i)` for every index and counts the returned bins.
pub(crate) fn tally<F>(execution: Execution, replicates: u64, bins: usize, replicate: F) -> Vec<u64>
where
    F: Fn(u64) -> Option<usize> + Sync + Send,
{
    let add = |mut acc: Vec<u64>, bin: Option<usize>| {
        if let Some(b) = bin {
            acc[b] += 1;
        }
        acc
    };
    match execution {
        Execution::Sequential => (0..replicates).map(&replicate).fold(vec![0; bins], add),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..replicates).into_par_iter().map(&replicate).fold(|| vec![0; bins], add).reduce(
                || vec![0; bins],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
        }
    }
}

/// Sums `count(i)` over every index.
pub(crate) fn sum_counts<F>(execution: Execution, items: u64, count: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    match execution {
        Execution::Sequential => (0..items).map(count).sum(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..items).into_par_iter().map(count).sum()
        }
    }
}

/// Runs `f` on a pool capped at `threads` workers when parallelism is
/// compiled in; otherwise just runs `f`.
pub fn with_thread_cap<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            return pool.install(f);
        }
    }
    let _ = threads;
    f()
}
