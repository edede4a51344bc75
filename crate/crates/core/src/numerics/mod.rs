//! Special functions, root finding, quadrature and random streams.

mod beta;
mod normal;
mod quad;
mod rng;
mod root;

pub use beta::{ln_beta, regularized_incomplete_beta, regularized_incomplete_beta_complement};
pub use normal::{normal_cdf, normal_pdf, normal_quantile, normal_quantile_upper, normal_sf};
pub use quad::{composite_gauss_legendre, gauss_legendre, integrate};
pub use rng::RngStream;
pub use root::{find_root, find_root_positive_expanding, MAX_ITERATIONS};
